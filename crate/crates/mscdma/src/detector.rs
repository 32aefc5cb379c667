//! Universal weight design and SINR evaluation for rank-L multistage
//! detectors, working purely on asymptotic moment tables.
//!
//! The moment matrix Ξ and vector ξ are built from the per-class limits
//! R_ℓ: Ξ_{ij} = R_{i+j} + σ² R_{i+j−1} (1-based), ξ_i = R_i. The
//! mean-square-optimal weights solve Ξ w = ξ, and the output SINR follows
//! either from the general quadratic-form ratio or, for Wiener weights,
//! from q/(1 − q) with q = ξᵀ Ξ⁻¹ ξ.

use crate::linalg;
use crate::moments::MomentTable;
use crate::{Error, Result};

/// Condition-number guard for the moment matrix solve.
pub const CONDITION_LIMIT: f64 = 1e12;

/// A designed rank-L detector: moment inputs, weights and predicted SINR.
#[derive(Debug, Clone)]
pub struct DetectorDesign {
    pub rank: usize,
    /// Row-major L×L matrix Ξ.
    pub xi_matrix: Vec<f64>,
    /// L-vector ξ.
    pub xi_vector: Vec<f64>,
    pub weights: Vec<f64>,
    /// Linear-scale output SINR.
    pub sinr: f64,
}

impl DetectorDesign {
    pub fn sinr_db(&self) -> f64 {
        crate::to_db(self.sinr)
    }
}

/// Assemble (Ξ, ξ) for one user class from a moment table.
/// Needs table depth ≥ 2L.
pub fn build_moment_inputs(
    table: &MomentTable,
    class_index: usize,
    noise_variance: f64,
    rank: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    assert!(rank >= 1);
    let need = 2 * rank;
    if table.depth < need {
        return Err(Error::TableDepth {
            have: table.depth,
            need,
            rank,
        });
    }
    let r = &table.r_values[class_index];
    let mut xi = vec![0.0; rank * rank];
    for i in 1..=rank {
        for j in 1..=rank {
            xi[(i - 1) * rank + (j - 1)] = r[i + j] + noise_variance * r[i + j - 1];
        }
    }
    let xiv = (1..=rank).map(|i| r[i]).collect();
    Ok((xi, xiv))
}

/// Wiener-Hopf weights w = Ξ⁻¹ ξ.
///
/// The solve runs on the Jacobi-equilibrated matrix; the raw condition
/// number is still checked against [`CONDITION_LIMIT`] first. Note that
/// the output SINR is invariant under any rescaling w → c·w, so the weight
/// normalization itself carries no performance meaning.
pub fn mmse_weights(xi_matrix: &[f64], xi_vector: &[f64]) -> Result<Vec<f64>> {
    solve_moment_system(xi_matrix, xi_vector, None)
}

/// Wiener-Hopf weights with a Tikhonov ridge of 1e−12·tr(Ξ)/L added to the
/// diagonal, for ranks where the Krylov moment matrix turns numerically
/// singular.
pub fn mmse_weights_ridged(xi_matrix: &[f64], xi_vector: &[f64]) -> Result<Vec<f64>> {
    let n = xi_vector.len();
    let trace: f64 = (0..n).map(|i| xi_matrix[i * n + i]).sum();
    solve_moment_system(xi_matrix, xi_vector, Some(1e-12 * trace / n as f64))
}

fn solve_moment_system(
    xi_matrix: &[f64],
    xi_vector: &[f64],
    ridge: Option<f64>,
) -> Result<Vec<f64>> {
    let n = xi_vector.len();
    assert_eq!(xi_matrix.len(), n * n);
    let mut a = xi_matrix.to_vec();
    if let Some(rho) = ridge {
        for i in 0..n {
            a[i * n + i] += rho;
        }
    }
    // Jacobi equilibration keeps the Cholesky well scaled when the moments
    // span many orders of magnitude; the SINR is invariant under this
    // diagonal similarity, so the guard applies to the system actually
    // factorized.
    let d: Vec<f64> = (0..n)
        .map(|i| {
            let v = a[i * n + i];
            if v > 0.0 {
                1.0 / v.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let mut b = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            b[i * n + j] = a[i * n + j] * d[i] * d[j];
        }
    }
    if ridge.is_none() {
        let cond = linalg::sym_condition(&b, n);
        if !cond.is_finite() || cond > CONDITION_LIMIT {
            return Err(Error::IllConditioned {
                cond,
                limit: CONDITION_LIMIT,
            });
        }
    }
    let rhs: Vec<f64> = (0..n).map(|i| xi_vector[i] * d[i]).collect();
    let l = linalg::cholesky(&b, n).ok_or(Error::IllConditioned {
        cond: f64::INFINITY,
        limit: CONDITION_LIMIT,
    })?;
    let u = linalg::chol_solve(&l, n, &rhs);
    let mut w: Vec<f64> = (0..n).map(|i| u[i] * d[i]).collect();
    // Iterative refinement against the raw system, with compensated
    // residuals: the rows of Ξw cancel across many orders of magnitude and
    // a plain f64 residual would floor the refinement too early.
    for _ in 0..3 {
        let resid: Vec<f64> = (0..n)
            .map(|i| {
                xi_vector[i]
                    - dot_compensated(a[i * n..(i + 1) * n].iter().cloned().zip(w.iter().cloned()))
            })
            .collect();
        let scaled: Vec<f64> = (0..n).map(|i| resid[i] * d[i]).collect();
        let corr = linalg::chol_solve(&l, n, &scaled);
        for i in 0..n {
            w[i] += corr[i] * d[i];
        }
    }
    Ok(w)
}

use crate::linalg::dot_compensated;

fn quadratic_form(weights: &[f64], matrix: &[f64]) -> f64 {
    let n = weights.len();
    // two compensated passes: v = Ξw row by row (where the cancellation
    // lives), then wᵀv
    let v: Vec<f64> = (0..n)
        .map(|i| {
            dot_compensated(
                matrix[i * n..(i + 1) * n]
                    .iter()
                    .cloned()
                    .zip(weights.iter().cloned()),
            )
        })
        .collect();
    dot_compensated(weights.iter().cloned().zip(v))
}

/// Output SINR of a multistage detector with arbitrary weights:
/// (wᵀξ)² / (wᵀ(Ξ − ξξᵀ)w). Invariant under w → c·w.
pub fn sinr_general(weights: &[f64], xi_matrix: &[f64], xi_vector: &[f64]) -> Result<f64> {
    let n = xi_vector.len();
    assert_eq!(weights.len(), n);
    let signal = dot_compensated(weights.iter().cloned().zip(xi_vector.iter().cloned()));
    let quad = quadratic_form(weights, xi_matrix);
    let denom = quad - signal * signal;
    if denom <= 0.0 {
        return Err(Error::DegenerateSinr(format!(
            "interference-plus-noise power {denom:.3e} is not positive"
        )));
    }
    Ok(signal * signal / denom)
}

/// Output SINR of the rank-L multistage Wiener filter: q/(1 − q) with
/// q = ξᵀ Ξ⁻¹ ξ.
pub fn sinr_wiener(xi_matrix: &[f64], xi_vector: &[f64]) -> Result<f64> {
    let w = mmse_weights(xi_matrix, xi_vector)?;
    let q = dot_compensated(w.iter().cloned().zip(xi_vector.iter().cloned()));
    if q >= 1.0 {
        return Err(Error::DegenerateSinr(format!(
            "quadratic form q = {q} reached 1; the moment matrix has broken down numerically"
        )));
    }
    Ok(q / (1.0 - q))
}

/// Complete Wiener design (per-class weights) from a moment table.
pub fn wiener_design(
    table: &MomentTable,
    class_index: usize,
    noise_variance: f64,
    rank: usize,
) -> Result<DetectorDesign> {
    let (xi, xiv) = build_moment_inputs(table, class_index, noise_variance, rank)?;
    let weights = mmse_weights(&xi, &xiv)?;
    let sinr = sinr_wiener(&xi, &xiv)?;
    Ok(DetectorDesign {
        rank,
        xi_matrix: xi,
        xi_vector: xiv,
        weights,
        sinr,
    })
}

/// Polynomial-expansion design: one weight vector for all users, built
/// from the class-averaged eigenvalue moments m^{(ℓ)} in place of the
/// per-class R_ℓ. The reported `sinr` refers to the averaged moment
/// inputs; evaluate [`sinr_general`] against a specific class's (Ξ, ξ)
/// for that class's operating point.
pub fn polynomial_expansion_design(
    table: &MomentTable,
    noise_variance: f64,
    rank: usize,
) -> Result<DetectorDesign> {
    let need = 2 * rank;
    if table.depth < need {
        return Err(Error::TableDepth {
            have: table.depth,
            need,
            rank,
        });
    }
    let m = |k: usize| table.eig_moments[k - 1];
    let mut xi = vec![0.0; rank * rank];
    for i in 1..=rank {
        for j in 1..=rank {
            xi[(i - 1) * rank + (j - 1)] = m(i + j) + noise_variance * m(i + j - 1);
        }
    }
    let xiv: Vec<f64> = (1..=rank).map(m).collect();
    let weights = mmse_weights(&xi, &xiv)?;
    let sinr = sinr_wiener(&xi, &xiv)?;
    Ok(DetectorDesign {
        rank,
        xi_matrix: xi,
        xi_vector: xiv,
        weights,
        sinr,
    })
}

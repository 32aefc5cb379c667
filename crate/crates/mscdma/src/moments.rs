//! Asymptotic moment engines.
//!
//! Four routes compute the large-system limits R_ℓ(λ, τ̃) of the diagonal
//! elements of powers of the correlation matrix, and the eigenvalue moments
//! m^{(ℓ)} = E{R_ℓ}:
//!
//! * [`matrix_recursion`]: the general coupled matrix recursion over the
//!   folded frequency axis; valid for any delay distribution and both
//!   front-end types.
//! * [`uniform_delay_recursion`]: scalar specialization for uniform chip
//!   delays and bandlimited pulses behind a Type-A front-end.
//! * [`small_bandwidth_recursion`]: scalar specialization for bandwidth at most
//!   half the chip rate; delay-independent.
//! * [`polynomial_recursion`]: the polynomial-substitution form of the scalar
//!   recursions; all pulse influence enters through the ℰ_s coefficients.
//!
//! [`closed_form_moments`] and [`mp_moment_oracle`] provide independent
//! evaluation paths used as test oracles.

use crate::linalg::CMat;
use crate::pulse::{ChipPulse, FrontEnd};
use crate::quad;
use crate::{Error, Result};
use std::f64::consts::PI;
use std::io::Write;

/// One atom of the joint received-power / chip-delay distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerDelayAtom {
    /// Received power λ = |a|².
    pub power: f64,
    /// Chip delay τ̃ ∈ [0, T_c). Ignored when the ensemble has uniform delays.
    pub delay: f64,
    /// Probability mass.
    pub prob: f64,
}

/// Macroscopic description of the large system.
#[derive(Debug, Clone)]
pub struct SystemEnsemble {
    /// System load β = K/N.
    pub load: f64,
    pub chip_interval: f64,
    pub oversampling: u32,
    /// Flat noise level N₀ before front-end scaling.
    pub n0: f64,
    /// Noise variance σ² of the sampled observables (front-end scaled).
    pub noise_variance: f64,
    pub atoms: Vec<PowerDelayAtom>,
    /// λ ⫫ τ̃ with τ̃ uniform on [0, T_c); the atoms then carry the power
    /// marginal only.
    pub uniform_delay: bool,
}

impl SystemEnsemble {
    pub fn new(
        load: f64,
        pulse: &ChipPulse,
        n0: f64,
        atoms: Vec<PowerDelayAtom>,
        uniform_delay: bool,
    ) -> Result<Self> {
        if !(load > 0.0) {
            return Err(Error::Precondition(format!(
                "load must be positive, got {load}"
            )));
        }
        if atoms.is_empty() {
            return Err(Error::Precondition(
                "need at least one power/delay atom".into(),
            ));
        }
        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "atom probabilities sum to {total}, expected 1"
            )));
        }
        for a in &atoms {
            if a.power < 0.0 || a.prob < 0.0 {
                return Err(Error::Precondition(
                    "powers and probabilities must be ≥ 0".into(),
                ));
            }
            if !uniform_delay && !(0.0..pulse.chip_interval).contains(&a.delay) {
                return Err(Error::Precondition(format!(
                    "atom delay {} outside [0, T_c)",
                    a.delay
                )));
            }
        }
        Ok(Self {
            load,
            chip_interval: pulse.chip_interval,
            oversampling: pulse.oversampling(),
            n0,
            noise_variance: pulse.noise_variance(n0),
            atoms,
            uniform_delay,
        })
    }

    /// Equal received powers, uniform chip delays.
    pub fn equal_power_uniform_delay(load: f64, pulse: &ChipPulse, n0: f64) -> Result<Self> {
        Self::new(
            load,
            pulse,
            n0,
            vec![PowerDelayAtom {
                power: 1.0,
                delay: 0.0,
                prob: 1.0,
            }],
            true,
        )
    }

    /// Equal powers, all delays at a single value (chip-synchronous).
    pub fn equal_power_fixed_delay(
        load: f64,
        pulse: &ChipPulse,
        n0: f64,
        delay: f64,
    ) -> Result<Self> {
        Self::new(
            load,
            pulse,
            n0,
            vec![PowerDelayAtom {
                power: 1.0,
                delay,
                prob: 1.0,
            }],
            false,
        )
    }

    /// Power moment m^{(s)}_{|A|²} = Σ p_j λ_j^s.
    pub fn power_moment(&self, s: u32) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.prob * a.power.powi(s as i32))
            .sum()
    }

    fn power_moments(&self, depth: usize) -> Vec<f64> {
        (1..=depth as u32).map(|s| self.power_moment(s)).collect()
    }
}

/// Which recursion produced a moment table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    MatrixRecursion,
    UniformDelay,
    SmallBandwidth,
    Polynomial,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Provenance::MatrixRecursion => "matrix-recursion",
            Provenance::UniformDelay => "uniform-delay",
            Provenance::SmallBandwidth => "small-bandwidth",
            Provenance::Polynomial => "polynomial",
        };
        f.write_str(s)
    }
}

/// A user class of the moment table.
#[derive(Debug, Clone)]
pub struct MomentClass {
    pub power: f64,
    /// None for delay-independent engines and for delay-averaged classes.
    pub delay: Option<f64>,
    pub weight: f64,
}

/// Frequency sample of the T-recursion (matrix engines keep r×r blocks,
/// scalar engines keep scalars).
#[derive(Debug, Clone)]
pub struct TSample {
    pub omega: f64,
    pub matrices: Vec<CMat>,
}

/// Output of a moment engine: per-class R_ℓ limits, eigenvalue moments and
/// the auxiliary recursion quantities.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub provenance: Provenance,
    pub depth: usize,
    pub load: f64,
    pub chip_interval: f64,
    pub oversampling: u32,
    pub noise_variance: f64,
    pub classes: Vec<MomentClass>,
    /// r_values[class][ℓ] for ℓ = 0..=depth (R_0 = 1).
    pub r_values: Vec<Vec<f64>>,
    /// eig_moments[ℓ−1] = m^{(ℓ)} for ℓ = 1..=depth.
    pub eig_moments: Vec<f64>,
    /// ν_0..ν_{depth−1} for the scalar engines.
    pub nu_values: Option<Vec<f64>>,
    /// f(R_0)..f(R_{depth−1}) for the scalar engines.
    pub f_values: Option<Vec<f64>>,
    /// T_ℓ samples on the frequency grid (matrix engines).
    pub t_samples: Vec<TSample>,
    /// Scalar T_ℓ(ω) samples: (ω, [T_0(ω)..T_depth(ω)]).
    pub t_scalars: Vec<(f64, Vec<f64>)>,
    /// Relative spread of R_ℓ across delay quadrature nodes (uniform-delay
    /// matrix recursion only; 0 elsewhere).
    pub tau_spread: f64,
}

impl MomentTable {
    pub fn r_value(&self, class: usize, ell: usize) -> f64 {
        self.r_values[class][ell]
    }

    /// m^{(ℓ)}, 1-based.
    pub fn eig_moment(&self, ell: usize) -> f64 {
        self.eig_moments[ell - 1]
    }

    /// Locate a class by power (and delay, when given).
    pub fn find_class(&self, power: f64, delay: Option<f64>, tol: f64) -> Option<usize> {
        self.classes.iter().position(|c| {
            (c.power - power).abs() <= tol
                && match (delay, c.delay) {
                    (None, _) => true,
                    (Some(d), Some(cd)) => (cd - d).abs() <= tol,
                    (Some(_), None) => false,
                }
        })
    }

    /// Serialize to the documented text format: `#`-prefixed header lines,
    /// an `[r_values]` CSV block (ell,class,power,delay,r_value) and an
    /// `[eig_moments]` CSV block (ell,value).
    pub fn write_text(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "# mscdma moment table")?;
        writeln!(out, "# provenance: {}", self.provenance)?;
        writeln!(out, "# load: {}", self.load)?;
        writeln!(out, "# chip_interval: {}", self.chip_interval)?;
        writeln!(out, "# oversampling: {}", self.oversampling)?;
        writeln!(out, "# noise_variance: {}", self.noise_variance)?;
        writeln!(out, "# depth: {}", self.depth)?;
        writeln!(out, "# classes: {}", self.classes.len())?;
        writeln!(out, "[r_values]")?;
        writeln!(out, "ell,class,power,delay,r_value")?;
        for (ci, class) in self.classes.iter().enumerate() {
            for ell in 1..=self.depth {
                let delay = class.delay.map(|d| format!("{d:.12e}")).unwrap_or_default();
                writeln!(
                    out,
                    "{ell},{ci},{:.12e},{delay},{:.12e}",
                    class.power, self.r_values[ci][ell]
                )?;
            }
        }
        writeln!(out, "[eig_moments]")?;
        writeln!(out, "ell,value")?;
        for ell in 1..=self.depth {
            writeln!(out, "{ell},{:.12e}", self.eig_moments[ell - 1])?;
        }
        Ok(())
    }

    /// Minimum eigenvalue of the Hankel matrix [m^{(i+j)}] (m^{(0)} = 1),
    /// scaled by its largest entry; a valid moment sequence keeps this
    /// nonnegative.
    pub fn hankel_min_eigenvalue(&self) -> f64 {
        let half = self.depth / 2;
        let n = half + 1;
        let m = |k: usize| if k == 0 { 1.0 } else { self.eig_moments[k - 1] };
        let mut h = vec![0.0; n * n];
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = m(i + j);
                scale = scale.max(m(i + j).abs());
            }
        }
        let eigs = crate::linalg::sym_eigenvalues(&h, n);
        eigs.into_iter().fold(f64::INFINITY, f64::min) / scale
    }
}

/// Options for the matrix recursion.
#[derive(Debug, Clone)]
pub struct MatrixRecursionOptions {
    /// Total frequency-node budget over Ω ∈ [−π, π] (panel-split
    /// Gauss–Legendre).
    pub grid_size: usize,
    /// Gauss–Legendre nodes for the delay expectation under uniform delays.
    pub delay_nodes: usize,
    /// Extra (power, delay) classes evaluated with zero probability weight;
    /// they see the recursion but do not influence the expectations.
    pub probes: Vec<(f64, f64)>,
}

impl Default for MatrixRecursionOptions {
    fn default() -> Self {
        Self {
            grid_size: 1024,
            delay_nodes: 32,
            probes: Vec::new(),
        }
    }
}

/// General matrix recursion for the asymptotic diagonal elements
/// R_ℓ(λ, τ̃) and the frequency blocks T_ℓ(Ω).
pub fn matrix_recursion(
    ensemble: &SystemEnsemble,
    pulse: &ChipPulse,
    depth: usize,
    grid_size: usize,
) -> Result<MomentTable> {
    matrix_recursion_with(
        ensemble,
        pulse,
        depth,
        &MatrixRecursionOptions {
            grid_size,
            ..MatrixRecursionOptions::default()
        },
    )
}

pub fn matrix_recursion_with(
    ensemble: &SystemEnsemble,
    pulse: &ChipPulse,
    depth: usize,
    opts: &MatrixRecursionOptions,
) -> Result<MomentTable> {
    if opts.grid_size < 64 {
        return Err(Error::Precondition(format!(
            "frequency grid must have at least 64 nodes, got {}",
            opts.grid_size
        )));
    }
    check_pulse_ensemble(ensemble, pulse)?;
    let r = pulse.oversampling() as usize;
    let tc = pulse.chip_interval;
    let grid = pulse.folded_grid(opts.grid_size);
    let g = grid.len();

    // Internal classes: (power, delay, weight, owning atom or probe marker).
    struct Class {
        power: f64,
        delay: f64,
        weight: f64,
        atom: Option<usize>,
    }
    let mut classes: Vec<Class> = Vec::new();
    if ensemble.uniform_delay {
        let (gx, gw) = quad::gauss_legendre(opts.delay_nodes);
        for (ai, atom) in ensemble.atoms.iter().enumerate() {
            for (&x, &w) in gx.iter().zip(&gw) {
                classes.push(Class {
                    power: atom.power,
                    delay: 0.5 * tc * (x + 1.0),
                    weight: atom.prob * 0.5 * w,
                    atom: Some(ai),
                });
            }
        }
    } else {
        for (ai, atom) in ensemble.atoms.iter().enumerate() {
            classes.push(Class {
                power: atom.power,
                delay: atom.delay,
                weight: atom.prob,
                atom: Some(ai),
            });
        }
    }
    for &(power, delay) in &opts.probes {
        classes.push(Class {
            power,
            delay,
            weight: 0.0,
            atom: None,
        });
    }
    let nc = classes.len();

    // Δ-vectors and their outer products per (node, class).
    let mut deltas = Vec::with_capacity(g);
    let mut outers = Vec::with_capacity(g);
    for &omega in &grid.nodes {
        let mut drow = Vec::with_capacity(nc);
        let mut orow = Vec::with_capacity(nc);
        for class in &classes {
            let d = pulse.delta_vector(omega, class.delay);
            orow.push(d.outer());
            drow.push(d);
        }
        deltas.push(drow);
        outers.push(orow);
    }

    // Recursion state.
    let mut r_vals: Vec<Vec<f64>> = vec![vec![0.0; depth + 1]; nc];
    for rv in r_vals.iter_mut() {
        rv[0] = 1.0;
    }
    let mut t_mats: Vec<Vec<CMat>> = (0..g)
        .map(|_| {
            let mut v = Vec::with_capacity(depth + 1);
            v.push(CMat::identity(r));
            v
        })
        .collect();
    // f-matrices per node, indexed by the R-order they were built from.
    let mut f_mats: Vec<Vec<CMat>> = vec![Vec::with_capacity(depth); g];
    // g-values per class, indexed by the T-order they were built from.
    let mut g_vals: Vec<Vec<f64>> = vec![Vec::with_capacity(depth); nc];

    let beta = ensemble.load;
    for ell in 1..=depth {
        let s_new = ell - 1;
        // f(R_{s_new}, Ω) = β Σ_c w_c λ_c R_{s_new}(c) Q_c(Ω)
        for node in 0..g {
            let mut f = CMat::zeros(r, r);
            for (ci, class) in classes.iter().enumerate() {
                let coeff = beta * class.weight * class.power * r_vals[ci][s_new];
                if coeff == 0.0 {
                    continue;
                }
                for (fv, qv) in f.data.iter_mut().zip(&outers[node][ci].data) {
                    *fv += coeff * qv;
                }
            }
            f_mats[node].push(f);
        }
        // g(T_{s_new}, λ, τ) = (λ/2π) ∫ Δᴴ T_{s_new} Δ dΩ
        for (ci, class) in classes.iter().enumerate() {
            let mut acc = 0.0;
            for node in 0..g {
                acc += grid.weights[node] * deltas[node][ci].quadratic_form(&t_mats[node][s_new]);
            }
            g_vals[ci].push(class.power * acc / (2.0 * PI));
        }
        // T_ℓ(Ω) = Σ_{s<ℓ} f(R_{ℓ−s−1}, Ω) T_s(Ω)
        for node in 0..g {
            let mut t = CMat::zeros(r, r);
            for s in 0..ell {
                let prod = f_mats[node][ell - 1 - s].mul(&t_mats[node][s]);
                for (tv, pv) in t.data.iter_mut().zip(&prod.data) {
                    *tv += pv;
                }
            }
            t_mats[node].push(t);
        }
        // R_ℓ = Σ_{s<ℓ} g(T_{ℓ−s−1}) R_s
        for ci in 0..nc {
            let mut val = 0.0;
            for s in 0..ell {
                val += g_vals[ci][ell - 1 - s] * r_vals[ci][s];
            }
            if !val.is_finite() {
                return Err(Error::NonFinite {
                    depth: ell,
                    class: ci,
                    detail: format!(
                        "R_{} diverged for power {} delay {}",
                        ell, classes[ci].power, classes[ci].delay
                    ),
                });
            }
            r_vals[ci][ell] = val;
        }
    }

    let eig_moments: Vec<f64> = (1..=depth)
        .map(|ell| {
            classes
                .iter()
                .enumerate()
                .map(|(ci, c)| c.weight * r_vals[ci][ell])
                .sum()
        })
        .collect();

    // Aggregate uniform-delay quadrature nodes back to per-atom classes.
    let mut out_classes = Vec::new();
    let mut out_r = Vec::new();
    let mut tau_spread = 0.0f64;
    if ensemble.uniform_delay {
        for (ai, atom) in ensemble.atoms.iter().enumerate() {
            let members: Vec<usize> = classes
                .iter()
                .enumerate()
                .filter(|(_, c)| c.atom == Some(ai))
                .map(|(i, _)| i)
                .collect();
            let mut avg = vec![0.0; depth + 1];
            for &ci in &members {
                for ell in 0..=depth {
                    avg[ell] += classes[ci].weight / atom.prob * r_vals[ci][ell];
                }
            }
            for ell in 1..=depth {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &ci in &members {
                    lo = lo.min(r_vals[ci][ell]);
                    hi = hi.max(r_vals[ci][ell]);
                }
                tau_spread = tau_spread.max((hi - lo) / avg[ell].abs().max(1e-300));
            }
            out_classes.push(MomentClass {
                power: atom.power,
                delay: None,
                weight: atom.prob,
            });
            out_r.push(avg);
        }
    } else {
        for (ci, class) in classes.iter().enumerate() {
            if class.atom.is_none() {
                continue;
            }
            out_classes.push(MomentClass {
                power: class.power,
                delay: Some(class.delay),
                weight: class.weight,
            });
            out_r.push(r_vals[ci].clone());
        }
    }
    // Probe classes are appended last in declaration order.
    for (ci, class) in classes.iter().enumerate() {
        if class.atom.is_none() {
            out_classes.push(MomentClass {
                power: class.power,
                delay: Some(class.delay),
                weight: 0.0,
            });
            out_r.push(r_vals[ci].clone());
        }
    }

    let t_samples: Vec<TSample> = grid
        .nodes
        .iter()
        .zip(t_mats)
        .map(|(&omega, mats)| TSample {
            omega,
            matrices: mats,
        })
        .collect();

    Ok(MomentTable {
        provenance: Provenance::MatrixRecursion,
        depth,
        load: beta,
        chip_interval: tc,
        oversampling: r as u32,
        noise_variance: ensemble.noise_variance,
        classes: out_classes,
        r_values: out_r,
        eig_moments,
        nu_values: None,
        f_values: None,
        t_samples,
        t_scalars: Vec::new(),
        tau_spread,
    })
}

/// Scalar recursion for uniform chip delays behind a Type-A front-end
/// (bandwidth at most r/(2T_c)).
pub fn uniform_delay_recursion(
    ensemble: &SystemEnsemble,
    pulse: &ChipPulse,
    depth: usize,
) -> Result<MomentTable> {
    if !ensemble.uniform_delay {
        return Err(Error::Precondition(
            "the scalar uniform-delay recursion needs uniform chip delays".into(),
        ));
    }
    if pulse.front_end == FrontEnd::TypeB {
        return Err(Error::Precondition(
            "the scalar uniform-delay recursion needs the oversampling front-end".into(),
        ));
    }
    check_pulse_ensemble(ensemble, pulse)?;
    scalar_recursion(ensemble, pulse, depth, ScalarVariant::UniformDelay)
}

/// Scalar recursion for bandwidth at most half the chip rate; the result
/// does not depend on the delay distribution at all.
pub fn small_bandwidth_recursion(
    ensemble: &SystemEnsemble,
    pulse: &ChipPulse,
    depth: usize,
) -> Result<MomentTable> {
    let limit = 1.0 / (2.0 * pulse.chip_interval);
    if pulse.bandwidth() > limit * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "bandwidth {:.6} exceeds 1/(2 T_c) = {:.6}",
            pulse.bandwidth(),
            limit
        )));
    }
    check_pulse_ensemble(ensemble, pulse)?;
    scalar_recursion(ensemble, pulse, depth, ScalarVariant::SmallBandwidth)
}

#[derive(Clone, Copy, PartialEq)]
enum ScalarVariant {
    UniformDelay,
    SmallBandwidth,
}

fn scalar_recursion(
    ensemble: &SystemEnsemble,
    pulse: &ChipPulse,
    depth: usize,
    variant: ScalarVariant,
) -> Result<MomentTable> {
    let r = pulse.oversampling() as f64;
    let tc = pulse.chip_interval;
    let beta = ensemble.load;
    let grid = pulse.support_grid(2048);
    let g = grid.len();
    let mag2: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&w| pulse.continuous_spectrum(w).norm_sqr())
        .collect();

    let t0 = match variant {
        ScalarVariant::UniformDelay => 1.0,
        ScalarVariant::SmallBandwidth => tc / r,
    };
    let nu_scale = match variant {
        ScalarVariant::UniformDelay => r / (2.0 * PI * tc),
        ScalarVariant::SmallBandwidth => r * r / (2.0 * PI * tc),
    };

    let na = ensemble.atoms.len();
    let mut r_vals: Vec<Vec<f64>> = vec![vec![0.0; depth + 1]; na];
    for rv in r_vals.iter_mut() {
        rv[0] = 1.0;
    }
    let mut t_vals: Vec<Vec<f64>> = vec![Vec::with_capacity(depth + 1); g];
    for tv in t_vals.iter_mut() {
        tv.push(t0);
    }
    let mut f_vals: Vec<f64> = Vec::with_capacity(depth);
    let mut nu_vals: Vec<f64> = Vec::with_capacity(depth);

    for ell in 1..=depth {
        let s_new = ell - 1;
        // f(R_{s_new}); the uniform-delay form carries β, the
        // small-bandwidth form does not (β sits in its T-recursion).
        let mean: f64 = ensemble
            .atoms
            .iter()
            .enumerate()
            .map(|(ai, a)| a.prob * a.power * r_vals[ai][s_new])
            .sum();
        f_vals.push(match variant {
            ScalarVariant::UniformDelay => beta * mean,
            ScalarVariant::SmallBandwidth => mean,
        });
        // ν_{s_new} = nu_scale ∫ |Φ|² T_{s_new} dω
        let nu: f64 = (0..g)
            .map(|n| grid.weights[n] * mag2[n] * t_vals[n][s_new])
            .sum::<f64>()
            * nu_scale;
        nu_vals.push(nu);
        // T_ℓ(ω)
        for n in 0..g {
            let mut sum = 0.0;
            for s in 0..ell {
                let f = match variant {
                    ScalarVariant::UniformDelay => f_vals[ell - 1 - s],
                    ScalarVariant::SmallBandwidth => beta * f_vals[ell - 1 - s],
                };
                sum += f * t_vals[n][s];
            }
            t_vals[n].push(r / tc * mag2[n] / tc * sum);
        }
        // R_ℓ(λ) = Σ λ R_s ν_{ℓ−s−1}
        for (ai, atom) in ensemble.atoms.iter().enumerate() {
            let mut val = 0.0;
            for s in 0..ell {
                val += atom.power * r_vals[ai][s] * nu_vals[ell - 1 - s];
            }
            if !val.is_finite() {
                return Err(Error::NonFinite {
                    depth: ell,
                    class: ai,
                    detail: format!("R_{} diverged for power {}", ell, atom.power),
                });
            }
            r_vals[ai][ell] = val;
        }
    }

    let eig_moments: Vec<f64> = (1..=depth)
        .map(|ell| {
            ensemble
                .atoms
                .iter()
                .enumerate()
                .map(|(ai, a)| a.prob * r_vals[ai][ell])
                .sum()
        })
        .collect();

    let classes = ensemble
        .atoms
        .iter()
        .map(|a| MomentClass {
            power: a.power,
            delay: None,
            weight: a.prob,
        })
        .collect();

    Ok(MomentTable {
        provenance: match variant {
            ScalarVariant::UniformDelay => Provenance::UniformDelay,
            ScalarVariant::SmallBandwidth => Provenance::SmallBandwidth,
        },
        depth,
        load: beta,
        chip_interval: tc,
        oversampling: pulse.oversampling(),
        noise_variance: ensemble.noise_variance,
        classes,
        r_values: r_vals,
        eig_moments,
        nu_values: Some(nu_vals),
        f_values: Some(f_vals),
        t_samples: Vec::new(),
        t_scalars: grid.nodes.iter().cloned().zip(t_vals).collect(),
        tau_spread: 0.0,
    })
}

fn check_pulse_ensemble(ensemble: &SystemEnsemble, pulse: &ChipPulse) -> Result<()> {
    if (ensemble.chip_interval - pulse.chip_interval).abs() > 1e-12 {
        return Err(Error::Precondition(
            "ensemble and pulse disagree on the chip interval".into(),
        ));
    }
    if ensemble.oversampling != pulse.oversampling() {
        return Err(Error::Precondition(
            "ensemble and pulse disagree on the sampling rate".into(),
        ));
    }
    Ok(())
}

/// Dense real polynomial in one variable (ascending coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn one() -> Self {
        Poly(vec![1.0])
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// x · p(x)
    pub fn shift_up(&self) -> Poly {
        let mut c = Vec::with_capacity(self.0.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.0);
        Poly(c)
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add_scaled(&mut self, other: &Poly, k: f64) {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), 0.0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Replace each monomial x^k (k ≥ 1) by `table[k−1]`; the constant
    /// term passes through.
    pub fn substitute(&self, table: &[f64]) -> f64 {
        let mut acc = self.0.first().copied().unwrap_or(0.0);
        for (k, &c) in self.0.iter().enumerate().skip(1) {
            acc += c * table[k - 1];
        }
        acc
    }
}

/// The polynomial pair (ρ_ℓ, μ_ℓ) of the substitution algorithm, plus the
/// substitution tables they consume.
#[derive(Debug, Clone)]
pub struct MomentPolynomials {
    pub rho: Vec<Poly>,
    pub mu: Vec<Poly>,
    /// ℰ_s / T_c for s = 1..=depth.
    pub energy_over_tc: Vec<f64>,
    /// m^{(s)}_{|A|²} for s = 1..=depth.
    pub power_moments: Vec<f64>,
    /// U_0..U_{depth−1} (equal to the ν_ℓ of the scalar recursion).
    pub u_values: Vec<f64>,
    /// V_0..V_{depth−1} (equal to f(R_ℓ)/β).
    pub v_values: Vec<f64>,
}

/// Maximum recursion depth of the polynomial algorithm; dense coefficient
/// growth stays within double precision up to here.
pub const MAX_POLYNOMIAL_DEPTH: usize = 16;

/// Polynomial substitution algorithm: carries the full λ-dependence of
/// R_ℓ(λ) as a polynomial ρ_ℓ and the spectrum dependence as μ_ℓ, then
/// substitutes ℰ_s/T_c and the power moments.
pub fn polynomial_recursion(
    ensemble: &SystemEnsemble,
    pulse: &ChipPulse,
    depth: usize,
) -> Result<(MomentPolynomials, MomentTable)> {
    check_pulse_ensemble(ensemble, pulse)?;
    let half_chip_rate = 1.0 / (2.0 * pulse.chip_interval);
    let small_band = pulse.bandwidth() <= half_chip_rate * (1.0 + 1e-12);
    let uniform_type_a = ensemble.uniform_delay && pulse.front_end != FrontEnd::TypeB;
    if !small_band && !uniform_type_a {
        return Err(Error::Precondition(
            "the polynomial engine needs uniform delays behind the oversampling front-end, or bandwidth at most 1/(2 T_c)".into(),
        ));
    }
    let energies: Result<Vec<f64>> = (1..=depth as u32)
        .map(|s| pulse.energy_coefficient(s))
        .collect();
    let tc = pulse.chip_interval;
    let energy_over_tc: Vec<f64> = energies?.into_iter().map(|e| e / tc).collect();
    let power_moments = ensemble.power_moments(depth);
    let polys = polynomial_recursion_from_tables(
        ensemble.load,
        pulse.oversampling(),
        tc,
        &energy_over_tc,
        &power_moments,
        depth,
    )?;
    let table = polynomials_to_table(ensemble, pulse, depth, &polys);
    Ok((polys, table))
}

/// The core polynomial recursion on raw substitution tables.
/// `energy_over_tc[s−1]` holds ℰ_s/T_c and `power_moments[s−1]` holds
/// m^{(s)}_{|A|²}, both for s = 1..=depth.
pub fn polynomial_recursion_from_tables(
    load: f64,
    oversampling: u32,
    chip_interval: f64,
    energy_over_tc: &[f64],
    power_moments: &[f64],
    depth: usize,
) -> Result<MomentPolynomials> {
    if depth > MAX_POLYNOMIAL_DEPTH {
        return Err(Error::Precondition(format!(
            "polynomial recursion depth {depth} exceeds the supported maximum {MAX_POLYNOMIAL_DEPTH}"
        )));
    }
    if energy_over_tc.len() < depth || power_moments.len() < depth {
        return Err(Error::Precondition(
            "substitution tables shorter than the requested depth".into(),
        ));
    }
    let r = oversampling as f64;
    let beta = load;
    let mut rho = vec![Poly::one()];
    let mut mu = vec![Poly::one()];
    let mut u_values: Vec<f64> = Vec::with_capacity(depth);
    let mut v_values: Vec<f64> = Vec::with_capacity(depth);
    for ell in 1..=depth {
        // u_{ℓ−1}(y) = r · y · μ_{ℓ−1}(y) → U_{ℓ−1}
        let u_poly = mu[ell - 1].shift_up().scale(r);
        u_values.push(u_poly.substitute(energy_over_tc));
        // v_{ℓ−1}(z) = z · ρ_{ℓ−1}(z) → V_{ℓ−1}
        let v_poly = rho[ell - 1].shift_up();
        v_values.push(v_poly.substitute(power_moments));
        // ρ_ℓ(z) = Σ_s z U_{ℓ−s−1} ρ_s(z)
        let mut rho_l = Poly(vec![]);
        for s in 0..ell {
            rho_l.add_scaled(&rho[s].shift_up(), u_values[ell - 1 - s]);
        }
        // μ_ℓ(y) = (r/T_c) Σ_s β y V_{ℓ−s−1} μ_s(y)
        let mut mu_l = Poly(vec![]);
        for s in 0..ell {
            mu_l.add_scaled(&mu[s].shift_up(), v_values[ell - 1 - s]);
        }
        let mu_l = mu_l.scale(r / chip_interval * beta);
        if rho_l.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                depth: ell,
                class: 0,
                detail: "polynomial coefficients overflowed".into(),
            });
        }
        rho.push(rho_l);
        mu.push(mu_l);
    }
    Ok(MomentPolynomials {
        rho,
        mu,
        energy_over_tc: energy_over_tc[..depth].to_vec(),
        power_moments: power_moments[..depth].to_vec(),
        u_values,
        v_values,
    })
}

fn polynomials_to_table(
    ensemble: &SystemEnsemble,
    pulse: &ChipPulse,
    depth: usize,
    polys: &MomentPolynomials,
) -> MomentTable {
    let classes: Vec<MomentClass> = ensemble
        .atoms
        .iter()
        .map(|a| MomentClass {
            power: a.power,
            delay: None,
            weight: a.prob,
        })
        .collect();
    let r_values: Vec<Vec<f64>> = ensemble
        .atoms
        .iter()
        .map(|a| {
            (0..=depth)
                .map(|ell| polys.rho[ell].eval(a.power))
                .collect()
        })
        .collect();
    let eig_moments: Vec<f64> = (1..=depth)
        .map(|ell| polys.rho[ell].substitute(&polys.power_moments))
        .collect();
    let f_values = polys
        .v_values
        .iter()
        .map(|v| ensemble.load * v)
        .collect::<Vec<_>>();
    MomentTable {
        provenance: Provenance::Polynomial,
        depth,
        load: ensemble.load,
        chip_interval: pulse.chip_interval,
        oversampling: pulse.oversampling(),
        noise_variance: ensemble.noise_variance,
        classes,
        r_values,
        eig_moments,
        nu_values: Some(polys.u_values.clone()),
        f_values: Some(f_values),
        t_samples: Vec::new(),
        t_scalars: Vec::new(),
        tau_spread: 0.0,
    }
}

/// First five eigenvalue moments in closed form, as polynomials in the
/// load, the energy coefficients and the power moments.
pub fn closed_form_moments(ensemble: &SystemEnsemble, pulse: &ChipPulse) -> Result<[f64; 5]> {
    check_pulse_ensemble(ensemble, pulse)?;
    let mut e = [0.0; 5];
    for (i, v) in e.iter_mut().enumerate() {
        *v = pulse.energy_coefficient(i as u32 + 1)?;
    }
    let mut m = [0.0; 5];
    for (i, v) in m.iter_mut().enumerate() {
        *v = ensemble.power_moment(i as u32 + 1);
    }
    Ok(closed_form_moments_from_tables(
        ensemble.load,
        pulse.oversampling(),
        pulse.chip_interval,
        &e,
        &m,
    ))
}

/// Closed forms on raw tables: e[s−1] = ℰ_s, m[s−1] = m^{(s)}_{|A|²}.
pub fn closed_form_moments_from_tables(
    beta: f64,
    oversampling: u32,
    chip_interval: f64,
    e: &[f64; 5],
    m: &[f64; 5],
) -> [f64; 5] {
    let c = oversampling as f64 / chip_interval;
    let (e1, e2, e3, e4, e5) = (e[0], e[1], e[2], e[3], e[4]);
    let (m1, m2, m3, m4, m5) = (m[0], m[1], m[2], m[3], m[4]);
    let mm1 = c * m1 * e1;
    let mm2 = c.powi(2) * (beta * m1 * m1 * e2 + m2 * e1 * e1);
    let mm3 = c.powi(3)
        * (beta * beta * e3 * m1.powi(3) + 3.0 * beta * e1 * e2 * m1 * m2 + e1.powi(3) * m3);
    let mm4 = c.powi(4)
        * (beta.powi(3) * e4 * m1.powi(4)
            + 2.0 * beta * beta * e2 * e2 * m1 * m1 * m2
            + 4.0 * beta * beta * e1 * e3 * m1 * m1 * m2
            + 4.0 * beta * e1 * e1 * e2 * m1 * m3
            + 2.0 * beta * e1 * e1 * e2 * m2 * m2
            + e1.powi(4) * m4);
    let mm5 = c.powi(5)
        * (beta.powi(4) * e5 * m1.powi(5)
            + 5.0 * beta.powi(3) * e1 * e4 * m1.powi(3) * m2
            + 5.0 * beta.powi(3) * e2 * e3 * m1.powi(3) * m2
            + 5.0 * beta * beta * e1 * e1 * e3 * m1 * m1 * m3
            + 5.0 * beta * beta * e1 * e1 * e3 * m1 * m2 * m2
            + 5.0 * beta * beta * e1 * e2 * e2 * m1 * m2 * m2
            + 5.0 * beta * beta * e1 * e2 * e2 * m1 * m1 * m3
            + 5.0 * beta * e1.powi(3) * e2 * m1 * m4
            + 5.0 * beta * e1.powi(3) * e2 * m2 * m3
            + e1.powi(5) * m5);
    [mm1, mm2, mm3, mm4, mm5]
}

/// Eigenvalue moment of the standard Wishart/Marchenko–Pastur family:
/// Σ_{i=0}^{s−1} C(s,i) C(s,i+1) β^i / s.
pub fn mp_moment_oracle(beta: f64, order: u32) -> f64 {
    assert!(order >= 1);
    let s = order as i64;
    (0..s)
        .map(|i| binomial(s, i) * binomial(s, i + 1) * beta.powi(i as i32) / s as f64)
        .sum()
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::FrontEnd;

    fn nyquist() -> ChipPulse {
        ChipPulse::sinc(1.0, 1.0, FrontEnd::TypeA { oversampling: 1 }).unwrap()
    }

    fn unit_atoms() -> Vec<PowerDelayAtom> {
        vec![PowerDelayAtom {
            power: 1.0,
            delay: 0.0,
            prob: 1.0,
        }]
    }

    #[test]
    fn mp_oracle_values() {
        assert!((mp_moment_oracle(0.7, 1) - 1.0).abs() < 1e-15);
        assert!((mp_moment_oracle(0.5, 2) - 1.5).abs() < 1e-15);
        assert!((mp_moment_oracle(0.5, 3) - 2.75).abs() < 1e-15);
        assert!((mp_moment_oracle(0.5, 4) - 5.625).abs() < 1e-15);
        assert!((mp_moment_oracle(0.5, 5) - 12.3125).abs() < 1e-15);
    }

    #[test]
    fn matrix_recursion_depth_zero_is_initialization() {
        let pulse = nyquist();
        let ens = SystemEnsemble::new(0.5, &pulse, 0.1, unit_atoms(), false).unwrap();
        let table = matrix_recursion(&ens, &pulse, 0, 128).unwrap();
        assert_eq!(table.r_values[0][0], 1.0);
        for s in &table.t_samples {
            assert!((s.matrices[0].fro_norm() - 1.0).abs() < 1e-14); // I_1
        }
    }

    #[test]
    fn matrix_recursion_reduces_to_marchenko_pastur() {
        let pulse = nyquist();
        let ens = SystemEnsemble::new(0.5, &pulse, 0.1, unit_atoms(), false).unwrap();
        let table = matrix_recursion(&ens, &pulse, 3, 256).unwrap();
        assert!((table.eig_moment(1) - 1.0).abs() < 1e-12);
        assert!((table.eig_moment(2) - 1.5).abs() < 1e-12);
        assert!((table.eig_moment(3) - 2.75).abs() < 1e-12);
    }

    #[test]
    fn uniform_delay_first_steps() {
        let pulse = nyquist();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1).unwrap();
        let table = uniform_delay_recursion(&ens, &pulse, 2).unwrap();
        let nu = table.nu_values.as_ref().unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-12);
        assert!((table.r_value(0, 1) - 1.0).abs() < 1e-12);
        // R_2 = λ ν_1 + λ² ν_0² with ν_1 = β ℰ_2
        assert!((nu[1] - 0.5).abs() < 1e-12);
        assert!((table.r_value(0, 2) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn uniform_delay_linear_first_step_any_pulse() {
        for pulse in [
            ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap(),
            ChipPulse::root_raised_cosine(0.3, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap(),
        ] {
            let atoms = vec![
                PowerDelayAtom {
                    power: 0.5,
                    delay: 0.0,
                    prob: 0.5,
                },
                PowerDelayAtom {
                    power: 1.5,
                    delay: 0.0,
                    prob: 0.5,
                },
            ];
            let ens = SystemEnsemble::new(0.75, &pulse, 0.1, atoms, true).unwrap();
            let table = uniform_delay_recursion(&ens, &pulse, 1).unwrap();
            let r = pulse.oversampling() as f64;
            let e1 = pulse.energy_coefficient(1).unwrap();
            for (ci, atom) in ens.atoms.iter().enumerate() {
                let want = atom.power * r * e1 / pulse.chip_interval;
                assert!((table.r_value(ci, 1) - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn uniform_delay_rejects_bad_inputs() {
        let pulse = nyquist();
        let ens = SystemEnsemble::new(0.5, &pulse, 0.1, unit_atoms(), false).unwrap();
        assert!(uniform_delay_recursion(&ens, &pulse, 2).is_err());
        let pb = ChipPulse::root_raised_cosine(0.2, 1.0, FrontEnd::TypeB).unwrap();
        let ens_b = SystemEnsemble::equal_power_uniform_delay(0.5, &pb, 0.1).unwrap();
        assert!(uniform_delay_recursion(&ens_b, &pb, 2).is_err());
    }

    #[test]
    fn small_bandwidth_matches_uniform_delay_in_overlap() {
        let pulse = nyquist();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1).unwrap();
        let a = uniform_delay_recursion(&ens, &pulse, 6).unwrap();
        let b = small_bandwidth_recursion(&ens, &pulse, 6).unwrap();
        for ell in 1..=6 {
            assert!((a.r_value(0, ell) - b.r_value(0, ell)).abs() < 1e-10);
            assert!((a.eig_moment(ell) - b.eig_moment(ell)).abs() < 1e-10);
        }
    }

    #[test]
    fn small_bandwidth_is_delay_independent() {
        let pulse = nyquist();
        let single = SystemEnsemble::new(0.5, &pulse, 0.1, unit_atoms(), false).unwrap();
        let spread = SystemEnsemble::new(
            0.5,
            &pulse,
            0.1,
            vec![
                PowerDelayAtom {
                    power: 1.0,
                    delay: 0.0,
                    prob: 0.4,
                },
                PowerDelayAtom {
                    power: 1.0,
                    delay: 0.3,
                    prob: 0.3,
                },
                PowerDelayAtom {
                    power: 1.0,
                    delay: 0.7,
                    prob: 0.3,
                },
            ],
            false,
        )
        .unwrap();
        let a = small_bandwidth_recursion(&single, &pulse, 6).unwrap();
        let b = small_bandwidth_recursion(&spread, &pulse, 6).unwrap();
        for ell in 1..=6 {
            for class in 0..b.classes.len() {
                assert!((b.r_value(class, ell) - a.r_value(0, ell)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn small_bandwidth_rejects_wide_band() {
        let pulse = ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1).unwrap();
        assert!(small_bandwidth_recursion(&ens, &pulse, 2).is_err());
    }

    #[test]
    fn small_bandwidth_oversampling_scaling() {
        let p1 = nyquist();
        let p2 = ChipPulse::sinc(1.0, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let e1 = SystemEnsemble::equal_power_uniform_delay(0.5, &p1, 0.1).unwrap();
        let e2 = SystemEnsemble::equal_power_uniform_delay(0.5, &p2, 0.1).unwrap();
        let a = small_bandwidth_recursion(&e1, &p1, 6).unwrap();
        let b = small_bandwidth_recursion(&e2, &p2, 6).unwrap();
        for ell in 1..=6 {
            let ratio = b.r_value(0, ell) / a.r_value(0, ell);
            assert!((ratio - 2f64.powi(ell as i32)).abs() < 1e-10, "ℓ = {ell}");
        }
    }

    #[test]
    fn polynomial_recursion_low_order_moments() {
        let pulse = ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let atoms = vec![
            PowerDelayAtom {
                power: 0.5,
                delay: 0.0,
                prob: 0.25,
            },
            PowerDelayAtom {
                power: 1.2,
                delay: 0.0,
                prob: 0.75,
            },
        ];
        let ens = SystemEnsemble::new(0.6, &pulse, 0.1, atoms, true).unwrap();
        let (_, table) = polynomial_recursion(&ens, &pulse, 2).unwrap();
        let c = 2.0; // r/T_c
        let e1 = 1.0;
        let e2 = pulse.energy_coefficient(2).unwrap();
        let m1 = ens.power_moment(1);
        let m2 = ens.power_moment(2);
        assert!((table.eig_moment(1) - c * m1 * e1).abs() < 1e-12);
        let want2 = c * c * (0.6 * m1 * m1 * e2 + m2 * e1 * e1);
        assert!((table.eig_moment(2) - want2).abs() < 1e-12);
    }

    #[test]
    fn polynomial_recursion_matches_scalar_engine() {
        let pulse = ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let atoms = vec![
            PowerDelayAtom {
                power: 0.4,
                delay: 0.0,
                prob: 0.5,
            },
            PowerDelayAtom {
                power: 1.6,
                delay: 0.0,
                prob: 0.5,
            },
        ];
        let ens = SystemEnsemble::new(0.5, &pulse, 0.1, atoms, true).unwrap();
        let (_, alg) = polynomial_recursion(&ens, &pulse, 8).unwrap();
        let cor = uniform_delay_recursion(&ens, &pulse, 8).unwrap();
        for ell in 1..=8 {
            for class in 0..2 {
                let a = alg.r_value(class, ell);
                let b = cor.r_value(class, ell);
                assert!(((a - b) / b).abs() < 1e-10, "class {class} ℓ {ell}");
            }
            assert!(
                ((alg.eig_moment(ell) - cor.eig_moment(ell)) / cor.eig_moment(ell)).abs() < 1e-10
            );
        }
    }

    #[test]
    fn polynomial_recursion_sinc_load_equivalence() {
        // moments of an async sinc system at load β equal (r/T_c)^ℓ times
        // the Nyquist values at load β/γ
        let gamma = 1.6;
        let beta = 0.8;
        let pulse = ChipPulse::sinc(gamma, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let ens = SystemEnsemble::equal_power_uniform_delay(beta, &pulse, 0.1).unwrap();
        let (_, table) = polynomial_recursion(&ens, &pulse, 6).unwrap();
        let sync = nyquist();
        let ens_sync = SystemEnsemble::equal_power_uniform_delay(beta / gamma, &sync, 0.1).unwrap();
        let (_, sync_table) = polynomial_recursion(&ens_sync, &sync, 6).unwrap();
        for ell in 1..=6 {
            let want = 2f64.powi(ell as i32) * sync_table.eig_moment(ell);
            assert!(
                ((table.eig_moment(ell) - want) / want).abs() < 1e-10,
                "ℓ = {ell}"
            );
        }
    }

    #[test]
    fn polynomial_engine_rejects_chip_matched_wideband() {
        // chip-rate sampling of a wide pulse keeps the limits delay
        // dependent, outside the scalar reduction
        let pulse = ChipPulse::root_raised_cosine(0.5, 1.0, FrontEnd::TypeB).unwrap();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1).unwrap();
        assert!(polynomial_recursion(&ens, &pulse, 4).is_err());
        // the zero-rolloff boundary case is fine
        let narrow = ChipPulse::root_raised_cosine(0.0, 1.0, FrontEnd::TypeB).unwrap();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &narrow, 0.1).unwrap();
        assert!(polynomial_recursion(&ens, &narrow, 4).is_ok());
    }

    #[test]
    fn polynomial_recursion_depth_cap() {
        let pulse = nyquist();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1).unwrap();
        assert!(polynomial_recursion(&ens, &pulse, 17).is_err());
    }

    #[test]
    fn closed_forms_match_on_mp_point() {
        let pulse = nyquist();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1).unwrap();
        let cf = closed_form_moments(&ens, &pulse).unwrap();
        for (i, want) in [1.0, 1.5, 2.75, 5.625, 12.3125].into_iter().enumerate() {
            assert!((cf[i] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_forms_beta_to_zero() {
        let e = [1.0, 0.8, 0.7, 0.6, 0.5];
        let m = [1.1, 1.3, 1.7, 2.3, 3.1];
        let got = closed_form_moments_from_tables(0.0, 2, 1.0, &e, &m);
        for ell in 1..=5usize {
            let want = 2f64.powi(ell as i32) * m[ell - 1] * e[0].powi(ell as i32);
            assert!((got[ell - 1] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_table_text_format() {
        let pulse = nyquist();
        let ens = SystemEnsemble::equal_power_uniform_delay(0.5, &pulse, 0.1).unwrap();
        let table = uniform_delay_recursion(&ens, &pulse, 3).unwrap();
        let mut buf = Vec::new();
        table.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# provenance: uniform-delay"));
        assert!(text.contains("[r_values]"));
        assert!(text.contains("[eig_moments]"));
        assert!(text.lines().any(|l| l.starts_with("3,0,")));
    }

    #[test]
    fn hankel_psd() {
        let pulse = nyquist();
        let ens = SystemEnsemble::equal_power_uniform_delay(1.0, &pulse, 0.1).unwrap();
        let table = uniform_delay_recursion(&ens, &pulse, 8).unwrap();
        assert!(table.hankel_min_eigenvalue() > -1e-8);
    }
}

//! Quadrature rules used by the moment engines and the energy coefficients.
//!
//! All spectral integrands here are piecewise smooth with known breakpoints
//! (band edges, roll-off knees, fold points), so the work-horse is
//! Gauss–Legendre applied panel-by-panel between breakpoints. The energy
//! coefficients additionally go through an adaptive composite Simpson rule
//! so that the two paths stay independent of each other.

use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to machine
/// precision for the orders used here (n ≤ 128).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let (mut p, mut dp) = legendre_pair(n, x);
        for _ in 0..100 {
            let dx = -p / dp;
            x += dx;
            let pd = legendre_pair(n, x);
            p = pd.0;
            dp = pd.1;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial P_n at x.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A fixed quadrature grid: nodes with matching weights.
#[derive(Debug, Clone)]
pub struct Grid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Grid {
    /// Integrate a scalar function sampled on the grid.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weighted sum over precomputed samples (must align with `nodes`).
    pub fn weighted_sum(&self, samples: &[f64]) -> f64 {
        samples.iter().zip(&self.weights).map(|(s, w)| s * w).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Build a Gauss–Legendre panel grid over `[breaks[0], breaks[last]]`,
/// splitting at every interior breakpoint and spending roughly
/// `total_nodes` nodes proportionally to panel width (at least `min_per`
/// per panel).
pub fn panel_grid(breaks: &[f64], total_nodes: usize, min_per: usize) -> Grid {
    assert!(breaks.len() >= 2);
    let span: f64 = breaks.last().unwrap() - breaks[0];
    let mut nodes = Vec::with_capacity(total_nodes + breaks.len() * min_per);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let width = b - a;
        if width <= 0.0 {
            continue;
        }
        let n = ((total_nodes as f64 * width / span).round() as usize).max(min_per);
        let (xs, ws) = gauss_legendre(n);
        let half = 0.5 * width;
        let mid = 0.5 * (a + b);
        for (x, w) in xs.iter().zip(&ws) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    Grid { nodes, weights }
}

/// Sort, deduplicate (within `tol`) and clamp a breakpoint list to [lo, hi],
/// always including both ends.
pub fn normalize_breaks(mut points: Vec<f64>, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    points.push(lo);
    points.push(hi);
    points.retain(|&x| x >= lo - tol && x <= hi + tol);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::with_capacity(points.len());
    for x in points {
        let x = x.clamp(lo, hi);
        if out.last().map_or(true, |&l| x - l > tol) {
            out.push(x);
        }
    }
    if out.len() < 2 {
        out = vec![lo, hi];
    }
    out
}

/// Adaptive composite Simpson on [a, b] with relative tolerance `rel_tol`.
///
/// Errors out (instead of silently returning) when the recursion exhausts
/// `max_depth` without meeting the tolerance.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    // Scale for the relative test. The floor stops the refinement once the
    // residual is at machine level: endpoint discontinuities otherwise
    // shrink the residual and the tolerance at the same rate forever.
    let scale = whole.abs().max(1e-300);
    let floor = 1e-14 * (scale + 1.0);
    simpson_rec(
        f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        rel_tol * scale,
        floor,
        max_depth,
    )
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    floor: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps.max(floor) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "interval [{a:.6}, {b:.6}] did not converge (residual {:.3e})",
            delta.abs()
        )));
    }
    let l = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, floor, depth - 1)?;
    let r = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, floor, depth - 1)?;
    Ok(l + r)
}

/// Adaptive Simpson over a breakpoint-split domain.
pub fn adaptive_simpson_split(f: &dyn Fn(f64) -> f64, breaks: &[f64], rel_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        total += adaptive_simpson(f, pair[0], pair[1], rel_tol, 48)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree 15 is exact for 8 nodes
        let val: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn panel_grid_handles_breaks() {
        let g = panel_grid(&[0.0, 0.5, 1.0], 64, 8);
        // step function with a jump exactly at the panel boundary
        let val = g.integrate(|x| if x < 0.5 { 1.0 } else { 3.0 });
        assert!((val - 2.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_meets_tolerance() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 40).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn normalize_breaks_dedups() {
        let b = normalize_breaks(vec![0.5, 0.5 + 1e-14, -2.0, 7.0], 0.0, 1.0, 1e-12);
        assert_eq!(b.len(), 3);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 1.0);
    }
}

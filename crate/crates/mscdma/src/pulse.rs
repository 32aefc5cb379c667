//! Chip-pulse waveforms and every spectral-domain quantity derived from
//! them: the folded (aliased) discrete-time transform, Δ-vectors, Q-kernels,
//! the scalar chip-rate-sampling kernel, energy coefficients ℰ_s and the
//! Fourier phase vectors.
//!
//! All quantities are defined at the front-end output. A Type-A front-end
//! is an ideal lowpass with cut-off πr/T_c sampled at rate r/T_c; a Type-B
//! front-end is a chip-matched filter sampled at the chip rate.

use crate::linalg::CMat;
use crate::quad::{self, Grid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::BufRead;

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Chip waveform family, each normalized to unit energy.
#[derive(Debug, Clone)]
pub enum PulseKind {
    /// Ideal bandlimited (sinc) pulse with bandwidth γ/(2T_c), γ ∈ (0, 2].
    Sinc { gamma: f64 },
    /// Root-raised-cosine pulse with the given roll-off ∈ [0, 1].
    RootRaisedCosine { rolloff: f64 },
    /// Spectrum samples on a uniform frequency grid (rad/s), linearly
    /// interpolated.
    Tabulated {
        omega_min: f64,
        omega_max: f64,
        values: Vec<Complex64>,
    },
}

/// Discrete-time front-end producing the observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontEnd {
    /// Ideal lowpass with cut-off πr/T_c, sampled at rate r/T_c.
    TypeA { oversampling: u32 },
    /// Chip-matched filter sampled at the chip rate (r = 1).
    TypeB,
}

/// A chip pulse together with its chip interval and front-end.
#[derive(Debug, Clone)]
pub struct ChipPulse {
    pub kind: PulseKind,
    pub chip_interval: f64,
    pub front_end: FrontEnd,
    /// Energy E_ψ of the continuous pulse before front-end normalization.
    energy: f64,
}

impl ChipPulse {
    pub fn sinc(gamma: f64, chip_interval: f64, front_end: FrontEnd) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 2.0) {
            return Err(Error::InvalidPulse(format!(
                "sinc gamma must lie in (0, 2], got {gamma}"
            )));
        }
        if front_end == FrontEnd::TypeB && (gamma - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPulse(format!(
                "front-end Type B needs a root-Nyquist pulse; sinc with gamma = {gamma} is not"
            )));
        }
        Self::build(PulseKind::Sinc { gamma }, chip_interval, front_end, 1.0)
    }

    pub fn root_raised_cosine(
        rolloff: f64,
        chip_interval: f64,
        front_end: FrontEnd,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&rolloff) {
            return Err(Error::InvalidPulse(format!(
                "roll-off must lie in [0, 1], got {rolloff}"
            )));
        }
        Self::build(
            PulseKind::RootRaisedCosine { rolloff },
            chip_interval,
            front_end,
            1.0,
        )
    }

    /// Tabulated spectrum from (ω, Ψ(ω)) samples; resampled onto a uniform
    /// grid of `grid_len` points (4096 when `None`).
    pub fn tabulated(
        mut samples: Vec<(f64, Complex64)>,
        chip_interval: f64,
        front_end: FrontEnd,
        grid_len: Option<usize>,
    ) -> Result<Self> {
        if front_end == FrontEnd::TypeB {
            return Err(Error::InvalidPulse(
                "front-end Type B needs a root-Nyquist pulse; tabulated spectra are not checked for that".into(),
            ));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidPulse(
                "tabulated pulse needs at least two samples".into(),
            ));
        }
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let omega_min = samples[0].0;
        let omega_max = samples.last().unwrap().0;
        if !(omega_max > omega_min) {
            return Err(Error::InvalidPulse("degenerate frequency grid".into()));
        }
        let n = grid_len.unwrap_or(4096).max(2);
        let mut values = Vec::with_capacity(n);
        let step = (omega_max - omega_min) / (n - 1) as f64;
        let mut idx = 0usize;
        for i in 0..n {
            let w = omega_min + step * i as f64;
            while idx + 2 < samples.len() && samples[idx + 1].0 < w {
                idx += 1;
            }
            let (w0, v0) = samples[idx];
            let (w1, v1) = samples[idx + 1];
            let t = if w1 > w0 {
                ((w - w0) / (w1 - w0)).clamp(0.0, 1.0)
            } else {
                0.0
            };
            values.push(v0 + (v1 - v0) * t);
        }
        let kind = PulseKind::Tabulated {
            omega_min,
            omega_max,
            values,
        };
        // E_ψ from the stored grid (trapezoid is adequate on the storage grid).
        let energy = {
            let mut acc = 0.0;
            let vals = match &kind {
                PulseKind::Tabulated { values, .. } => values,
                _ => unreachable!(),
            };
            for i in 0..vals.len() {
                let w = if i == 0 || i == vals.len() - 1 {
                    0.5
                } else {
                    1.0
                };
                acc += w * vals[i].norm_sqr();
            }
            acc * step / (2.0 * PI)
        };
        if energy <= 0.0 {
            return Err(Error::InvalidPulse(
                "tabulated spectrum has zero energy".into(),
            ));
        }
        Self::build(kind, chip_interval, front_end, energy)
    }

    /// Load a tabulated pulse from the two-column text format:
    /// one `ω re,im` pair per line, `#` comments allowed.
    pub fn tabulated_from_reader(
        reader: impl BufRead,
        chip_interval: f64,
        front_end: FrontEnd,
        grid_len: Option<usize>,
    ) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |s: Option<&str>, what: &str| -> Result<f64> {
                s.and_then(|v| v.parse::<f64>().ok()).ok_or_else(|| {
                    Error::Config(format!("pulse file line {}: bad {what}", lineno + 1))
                })
            };
            let omega = parse(parts.next(), "frequency")?;
            let value = parts.next().ok_or_else(|| {
                Error::Config(format!("pulse file line {}: missing value", lineno + 1))
            })?;
            let (re, im) = value.split_once(',').ok_or_else(|| {
                Error::Config(format!(
                    "pulse file line {}: value must be re,im",
                    lineno + 1
                ))
            })?;
            let re = parse(Some(re), "real part")?;
            let im = parse(Some(im), "imaginary part")?;
            samples.push((omega, Complex64::new(re, im)));
        }
        Self::tabulated(samples, chip_interval, front_end, grid_len)
    }

    fn build(
        kind: PulseKind,
        chip_interval: f64,
        front_end: FrontEnd,
        energy: f64,
    ) -> Result<Self> {
        if !(chip_interval > 0.0) {
            return Err(Error::InvalidPulse(format!(
                "chip interval must be positive, got {chip_interval}"
            )));
        }
        let pulse = Self {
            kind,
            chip_interval,
            front_end,
            energy,
        };
        if let FrontEnd::TypeA { oversampling } = front_end {
            if oversampling == 0 {
                return Err(Error::InvalidPulse("oversampling must be ≥ 1".into()));
            }
            let limit = oversampling as f64 / (2.0 * pulse.chip_interval);
            if pulse.bandwidth() > limit * (1.0 + 1e-12) {
                return Err(Error::InvalidPulse(format!(
                    "bandwidth {:.6} exceeds r/(2 T_c) = {:.6}; the sampling theorem needs a larger oversampling factor",
                    pulse.bandwidth(),
                    limit
                )));
            }
        }
        Ok(pulse)
    }

    /// One-sided bandwidth B in Hz·2π⁻¹ terms, i.e. the pulse occupies
    /// |ω| ≤ 2πB.
    pub fn bandwidth(&self) -> f64 {
        match &self.kind {
            PulseKind::Sinc { gamma } => gamma / (2.0 * self.chip_interval),
            PulseKind::RootRaisedCosine { rolloff } => (1.0 + rolloff) / (2.0 * self.chip_interval),
            PulseKind::Tabulated {
                omega_min,
                omega_max,
                ..
            } => omega_max.abs().max(omega_min.abs()) / (2.0 * PI),
        }
    }

    /// Oversampling factor r of the front-end (1 for Type B).
    pub fn oversampling(&self) -> u32 {
        match self.front_end {
            FrontEnd::TypeA { oversampling } => oversampling,
            FrontEnd::TypeB => 1,
        }
    }

    /// Energy E_ψ of the continuous-time pulse.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Noise variance at the front-end output for a given flat noise level
    /// N₀: σ² = N₀ r/(E_ψ T_c) for Type A, N₀/(E_ψ T_c) for Type B.
    pub fn noise_variance(&self, n0: f64) -> f64 {
        match self.front_end {
            FrontEnd::TypeA { oversampling } => {
                n0 * oversampling as f64 / (self.energy * self.chip_interval)
            }
            FrontEnd::TypeB => n0 / (self.energy * self.chip_interval),
        }
    }

    /// Base spectrum Ψ(ω) of the transmitted chip pulse (interior value at
    /// jump points; [`Self::jump_halving`] supplies the midpoint).
    fn base_spectrum(&self, omega: f64) -> Complex64 {
        match &self.kind {
            PulseKind::Sinc { gamma } => {
                let edge = PI * gamma / self.chip_interval;
                let tol = 1e-12 * edge.max(1.0);
                if omega.abs() <= edge + tol {
                    Complex64::new((self.chip_interval / gamma).sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            PulseKind::RootRaisedCosine { rolloff } => {
                let s = raised_cosine_energy_spectrum(*rolloff, omega * self.chip_interval);
                Complex64::new((self.chip_interval * s).sqrt(), 0.0)
            }
            PulseKind::Tabulated {
                omega_min,
                omega_max,
                values,
            } => {
                if omega < *omega_min || omega > *omega_max {
                    return Complex64::new(0.0, 0.0);
                }
                let step = (omega_max - omega_min) / (values.len() - 1) as f64;
                let pos = (omega - omega_min) / step;
                let i = (pos.floor() as usize).min(values.len() - 2);
                let t = pos - i as f64;
                values[i] + (values[i + 1] - values[i]) * t
            }
        }
    }

    /// 0.5 exactly at jump frequencies of the spectrum, 1 elsewhere. The
    /// front-end output takes the midpoint of its own one-sided limits at a
    /// jump, so alias sums that hit a band edge match the generic points.
    fn jump_halving(&self, omega: f64) -> f64 {
        let edge = match &self.kind {
            PulseKind::Sinc { gamma } => PI * gamma / self.chip_interval,
            PulseKind::RootRaisedCosine { rolloff } if *rolloff < 1e-12 => {
                PI / self.chip_interval
            }
            _ => return 1.0,
        };
        if (omega.abs() - edge).abs() <= 1e-12 * edge.max(1.0) {
            0.5
        } else {
            1.0
        }
    }

    /// Φ(ω) at the front-end output. Type A truncates Ψ/√E_ψ to the lowpass
    /// band; Type B returns |Ψ(ω)|²/√E_ψ. Out-of-band frequencies give 0.
    pub fn continuous_spectrum(&self, omega: f64) -> Complex64 {
        let scale = 1.0 / self.energy.sqrt();
        match self.front_end {
            FrontEnd::TypeA { oversampling } => {
                let cutoff = PI * oversampling as f64 / self.chip_interval;
                if omega.abs() > cutoff {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.base_spectrum(omega) * (self.jump_halving(omega) * scale)
                }
            }
            FrontEnd::TypeB => {
                let psi = self.base_spectrum(omega);
                Complex64::new(psi.norm_sqr() * self.jump_halving(omega) * scale, 0.0)
            }
        }
    }

    /// Support half-width of Φ in ω (rad/s).
    pub fn support_half_width(&self) -> f64 {
        let b = 2.0 * PI * self.bandwidth();
        match self.front_end {
            FrontEnd::TypeA { oversampling } => {
                b.min(PI * oversampling as f64 / self.chip_interval)
            }
            FrontEnd::TypeB => b,
        }
    }

    /// Spectrum breakpoints (band edges, roll-off knees) in ω, for
    /// piecewise-smooth quadrature.
    pub fn spectrum_breakpoints(&self) -> Vec<f64> {
        let tc = self.chip_interval;
        let mut pts = match &self.kind {
            PulseKind::Sinc { gamma } => vec![-PI * gamma / tc, PI * gamma / tc],
            PulseKind::RootRaisedCosine { rolloff } => {
                let inner = PI * (1.0 - rolloff) / tc;
                let outer = PI * (1.0 + rolloff) / tc;
                vec![-outer, -inner, 0.0, inner, outer]
            }
            PulseKind::Tabulated {
                omega_min,
                omega_max,
                ..
            } => vec![*omega_min, 0.0, *omega_max],
        };
        pts.retain(|w| w.abs() <= self.support_half_width() + 1e-12);
        pts
    }

    /// The folded (aliased) transform φ(Ω, τ) of the sampled chip waveform:
    /// (1/T_c) Σ_s e^{j(τ/T_c)(Ω+2πs)} Φ*((Ω+2πs)/T_c), summed over the
    /// aliases that intersect the pulse support. 2π-periodic in Ω.
    pub fn folded_transform(&self, omega_norm: f64, tau: f64) -> Complex64 {
        let tc = self.chip_interval;
        let half_width = self.support_half_width() * tc; // in Ω units
        let lo = ((-half_width - omega_norm) / (2.0 * PI) - 1e-9).ceil() as i64;
        let hi = ((half_width - omega_norm) / (2.0 * PI) + 1e-9).floor() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for s in lo..=hi {
            let x = omega_norm + 2.0 * PI * s as f64;
            let phi = self.continuous_spectrum(x / tc);
            if phi.re == 0.0 && phi.im == 0.0 {
                continue;
            }
            acc += (J * (tau / tc) * x).exp() * phi.conj();
        }
        acc / tc
    }

    /// Δ-vector: entry t (1-based) is φ(Ω, τ − (t−1) T_c/r).
    pub fn delta_vector(&self, omega_norm: f64, tau: f64) -> DeltaVector {
        let r = self.oversampling() as usize;
        let tc = self.chip_interval;
        let entries = (0..r)
            .map(|t| self.folded_transform(omega_norm, tau - t as f64 * tc / r as f64))
            .collect();
        DeltaVector { entries }
    }

    /// Q(Ω, τ) = Δ Δᴴ, the rank-one kernel of the matrix moment recursion.
    pub fn q_matrix(&self, omega_norm: f64, tau: f64) -> QMatrix {
        let delta = self.delta_vector(omega_norm, tau);
        let r = delta.entries.len();
        let mut data = CMat::zeros(r, r);
        for k in 0..r {
            for l in 0..r {
                data[(k, l)] = delta.entries[k] * delta.entries[l].conj();
            }
        }
        QMatrix {
            omega: omega_norm,
            tau: Some(tau),
            data,
        }
    }

    /// The delay-averaged part Q(Ω) of the kernel, in closed form:
    /// (Q)_{kℓ} = (1/T_c²) Σ_s |Φ((Ω+2πs)/T_c)|² e^{−j(k−ℓ)(Ω+2πs)/r}.
    /// Averaging Q(Ω, τ) over τ uniform on [0, T_c) gives exactly this.
    pub fn q_matrix_tau_avg(&self, omega_norm: f64) -> QMatrix {
        let r = self.oversampling() as usize;
        let tc = self.chip_interval;
        let half_width = self.support_half_width() * tc;
        let lo = ((-half_width - omega_norm) / (2.0 * PI) - 1e-9).ceil() as i64;
        let hi = ((half_width - omega_norm) / (2.0 * PI) + 1e-9).floor() as i64;
        let mut data = CMat::zeros(r, r);
        for s in lo..=hi {
            let x = omega_norm + 2.0 * PI * s as f64;
            let mag = self.continuous_spectrum(x / tc).norm_sqr();
            if mag == 0.0 {
                continue;
            }
            for k in 0..r {
                for l in 0..r {
                    let phase = -(k as f64 - l as f64) / r as f64 * x;
                    data[(k, l)] += mag * (J * phase).exp();
                }
            }
        }
        for v in data.data.iter_mut() {
            *v /= tc * tc;
        }
        QMatrix {
            omega: omega_norm,
            tau: None,
            data,
        }
    }

    /// ℰ_s = (1/(2π T_c^s)) ∫ T_c |Φ(ω)|^{2s} dω over the pulse support.
    ///
    /// Sinc pulses use the exact closed form γ^{1−s}; everything else goes
    /// through adaptive Simpson split at the spectrum breakpoints with
    /// relative tolerance 1e−10.
    pub fn energy_coefficient(&self, s: u32) -> Result<f64> {
        assert!(s >= 1, "energy coefficient order must be ≥ 1");
        if let (PulseKind::Sinc { gamma }, FrontEnd::TypeA { .. }) = (&self.kind, self.front_end) {
            return Ok(gamma.powi(1 - s as i32));
        }
        self.energy_coefficient_quadrature(s)
    }

    /// The quadrature path for ℰ_s, usable as an independent cross-check of
    /// the closed forms.
    pub fn energy_coefficient_quadrature(&self, s: u32) -> Result<f64> {
        let tc = self.chip_interval;
        let w = self.support_half_width();
        let breaks = quad::normalize_breaks(self.spectrum_breakpoints(), -w, w, 1e-12 * w.max(1.0));
        let f = |omega: f64| self.continuous_spectrum(omega).norm_sqr().powi(s as i32);
        let integral = quad::adaptive_simpson_split(&f, &breaks, 1e-10)
            .map_err(|e| Error::Quadrature(format!("energy coefficient s = {s}: {e}")))?;
        Ok(integral * tc / (2.0 * PI * tc.powi(s as i32)))
    }

    /// Frequency-domain grid over the pulse support with panels split at
    /// the breakpoints (for the scalar moment recursions).
    pub(crate) fn support_grid(&self, total_nodes: usize) -> Grid {
        let w = self.support_half_width();
        let breaks = quad::normalize_breaks(self.spectrum_breakpoints(), -w, w, 1e-12 * w.max(1.0));
        quad::panel_grid(&breaks, total_nodes, 8)
    }

    /// Grid over Ω ∈ [−π, π] with panels split at the folded images of the
    /// spectrum breakpoints (for the matrix moment recursion).
    pub(crate) fn folded_grid(&self, total_nodes: usize) -> Grid {
        let mut breaks = vec![-PI, PI];
        for w in self.spectrum_breakpoints() {
            let mut x = w * self.chip_interval;
            x -= (x / (2.0 * PI)).round() * 2.0 * PI;
            // fold points land symmetrically; keep both signs
            breaks.push(x);
            breaks.push(-x);
        }
        let breaks = quad::normalize_breaks(breaks, -PI, PI, 1e-12);
        quad::panel_grid(&breaks, total_nodes, 8)
    }
}

/// The r folded-transform samples Δ_{φ,r}(Ω, τ).
#[derive(Debug, Clone)]
pub struct DeltaVector {
    pub entries: Vec<Complex64>,
}

impl DeltaVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Quadratic form Δᴴ M Δ (real part; the form is real for Hermitian M).
    pub fn quadratic_form(&self, m: &CMat) -> f64 {
        let r = self.entries.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..r {
            let ci = self.entries[i].conj();
            for j in 0..r {
                acc += ci * m[(i, j)] * self.entries[j];
            }
        }
        acc.re
    }

    /// Outer product Δ Δᴴ.
    pub fn outer(&self) -> CMat {
        let r = self.entries.len();
        let mut out = CMat::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                out[(i, j)] = self.entries[i] * self.entries[j].conj();
            }
        }
        out
    }
}

/// Hermitian PSD kernel Q(Ω, τ) (or its delay average when `tau` is None).
#[derive(Debug, Clone)]
pub struct QMatrix {
    pub omega: f64,
    pub tau: Option<f64>,
    pub data: CMat,
}

impl QMatrix {
    pub fn dim(&self) -> usize {
        self.data.rows
    }

    pub fn hermitian_error(&self) -> f64 {
        self.data.hermitian_error()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.data.min_eigenvalue_hermitian()
    }
}

/// Energy spectrum S(x) of a unit-energy raised-cosine family member,
/// expressed in the normalized frequency x = ωT_c.
pub fn raised_cosine_energy_spectrum(rolloff: f64, x: f64) -> f64 {
    let x = x.abs();
    if rolloff < 1e-12 {
        // degenerate brick wall
        return if x <= PI * (1.0 + 1e-12) { 1.0 } else { 0.0 };
    }
    let inner = PI * (1.0 - rolloff);
    let outer = PI * (1.0 + rolloff);
    if x <= inner {
        1.0
    } else if x < outer {
        0.5 * (1.0 - ((x - PI) / (2.0 * rolloff)).sin())
    } else {
        0.0
    }
}

/// Closed form of ℰ_s for a root-raised-cosine pulse behind a Type-A
/// front-end: ℰ_s = 1 − θ + 2θ·C(2s, s)/4^s (Wallis integral over the
/// roll-off band). Matches the quadrature path to machine precision.
pub fn rrc_energy_closed_form(rolloff: f64, s: u32) -> f64 {
    1.0 - rolloff + 2.0 * rolloff * central_binomial_ratio(s)
}

/// C(2s, s) / 4^s computed stably.
fn central_binomial_ratio(s: u32) -> f64 {
    let mut v = 1.0;
    for k in 1..=s {
        v *= (2.0 * k as f64 - 1.0) / (2.0 * k as f64);
    }
    v
}

/// Scalar kernel Q(Ω, τ) for chip-rate sampling of a root-raised-cosine
/// pulse (Type-B front-end, r = 1): piecewise in Ω with a cos(2πτ/T_c)
/// delay dependence. `tau_frac` is τ/T_c.
pub fn q_scalar_frontend_b(rolloff: f64, omega_norm: f64, tau_frac: f64) -> f64 {
    let x = omega_norm.abs();
    let inner = PI * (1.0 - rolloff);
    if x <= inner {
        return 1.0;
    }
    if x > PI {
        // reduce by periodicity
        let wrapped = omega_norm - (omega_norm / (2.0 * PI)).round() * 2.0 * PI;
        return q_scalar_frontend_b(rolloff, wrapped, tau_frac);
    }
    let s2 = ((x - PI) / (2.0 * rolloff)).sin().powi(2);
    0.5 + 0.5 * s2 + 0.5 * (2.0 * PI * tau_frac).cos() * (1.0 - s2)
}

/// Unit-norm Fourier phase vector e(Ω) = (1/√r)(1, e^{−jΩ/r}, …,
/// e^{−j(r−1)Ω/r})ᵀ.
pub fn fourier_phase_vector(omega_norm: f64, r: u32) -> Vec<Complex64> {
    let scale = 1.0 / (r as f64).sqrt();
    (0..r)
        .map(|t| (J * (-(t as f64) * omega_norm / r as f64)).exp() * scale)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sinc_a(gamma: f64, r: u32) -> ChipPulse {
        ChipPulse::sinc(gamma, 1.0, FrontEnd::TypeA { oversampling: r }).unwrap()
    }

    #[test]
    fn sinc_spectrum_values() {
        let p = sinc_a(1.0, 1);
        assert!((p.continuous_spectrum(0.0).re - 1.0).abs() < 1e-15);
        assert_eq!(p.continuous_spectrum(2.0 * PI).norm(), 0.0);
    }

    #[test]
    fn rrc_spectrum_band_edge_and_energy() {
        let p =
            ChipPulse::root_raised_cosine(0.5, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let mag2 = p.continuous_spectrum(PI).norm_sqr();
        assert!((mag2 - 0.5).abs() < 1e-12);
        // unit energy: (1/2π) ∫ S dω = 1
        let e1 = p.energy_coefficient(1).unwrap();
        assert!((e1 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn folded_transform_nyquist_is_one() {
        let p = sinc_a(1.0, 1);
        for &omega in &[-2.5, -0.9, 0.0, 0.4, 1.2, 3.0] {
            let v = p.folded_transform(omega, 0.0);
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12, "Ω = {omega}");
        }
    }

    #[test]
    fn folded_transform_shift_identity() {
        for pulse in [
            sinc_a(1.5, 2),
            ChipPulse::root_raised_cosine(0.3, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap(),
        ] {
            for &(omega, tau) in &[(0.7, 0.3), (-1.2, 0.11), (2.9, 0.77)] {
                let lhs = pulse.folded_transform(omega, tau + pulse.chip_interval);
                let rhs = (J * omega).exp() * pulse.folded_transform(omega, tau);
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn folded_transform_periodicity() {
        let p = sinc_a(1.5, 2);
        for &(omega, tau) in &[(0.3, 0.0), (1.1, 0.4), (-2.0, 0.9)] {
            let a = p.folded_transform(omega, tau);
            let b = p.folded_transform(omega + 2.0 * PI, tau);
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn delta_vector_matches_definition() {
        let p = sinc_a(1.0, 2);
        let d = p.delta_vector(0.0, 0.0);
        assert_eq!(d.len(), 2);
        assert!((d.entries[0] - p.folded_transform(0.0, 0.0)).norm() < 1e-15);
        assert!((d.entries[1] - p.folded_transform(0.0, -0.5)).norm() < 1e-15);
        let d1 = sinc_a(1.0, 1).delta_vector(0.3, 0.2);
        assert_eq!(d1.len(), 1);
        assert!((d1.entries[0] - sinc_a(1.0, 1).folded_transform(0.3, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn q_matrix_sinc_regions() {
        // inner region: (1/γ) [[1, e^{jΩ/2}], [e^{-jΩ/2}, 1]]
        let gamma = 1.5;
        let p = sinc_a(gamma, 2);
        let omega = 0.3; // |Ω| < 2π(1 − γ/2) = π/2
        let q = p.q_matrix(omega, 0.0);
        assert!((q.data[(0, 0)].re - 1.0 / gamma).abs() < 1e-12);
        assert!((q.data[(1, 1)].re - 1.0 / gamma).abs() < 1e-12);
        let expect01 = Complex64::from_polar(1.0 / gamma, omega / 2.0);
        assert!((q.data[(0, 1)] - expect01).norm() < 1e-12);
        assert!(q.hermitian_error() < 1e-14);
        // outer region: (1/γ) [[4, 0], [0, 0]]
        let omega = 2.5; // > π/2
        let q = p.q_matrix(omega, 0.0);
        assert!((q.data[(0, 0)].re - 4.0 / gamma).abs() < 1e-12);
        assert!(q.data[(0, 1)].norm() < 1e-12);
        assert!(q.data[(1, 1)].norm() < 1e-12);
        assert!(q.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn q_matrix_tau_average_matches_closed_form() {
        let p = sinc_a(1.5, 2);
        for &omega in &[0.2, 1.9, -2.7] {
            let closed = p.q_matrix_tau_avg(omega);
            // deterministic mean over 10⁴ equispaced delays (periodic in τ,
            // so the uniform grid average is spectrally accurate)
            let n = 10_000;
            let mut avg = CMat::zeros(2, 2);
            for i in 0..n {
                let tau = (i as f64 + 0.5) / n as f64;
                let q = p.q_matrix(omega, tau);
                for (a, b) in avg.data.iter_mut().zip(&q.data.data) {
                    *a += b / n as f64;
                }
            }
            for (a, b) in avg.data.iter().zip(&closed.data.data) {
                assert!((a - b).norm() < 1e-10, "Ω = {omega}");
            }
        }
    }

    #[test]
    fn q_scalar_frontend_b_branches() {
        // flat branch
        assert!((q_scalar_frontend_b(0.4, 0.3, 0.77) - 1.0).abs() < 1e-15);
        // band edge at Ω = π, τ = 0 gives 1
        for theta in [0.2, 0.5, 1.0] {
            assert!((q_scalar_frontend_b(theta, PI, 0.0) - 1.0).abs() < 1e-12);
        }
        // cross-check against the generic folded-transform path
        let theta = 0.5;
        let p = ChipPulse::root_raised_cosine(theta, 1.0, FrontEnd::TypeB).unwrap();
        for &(omega, tau) in &[(0.9 * PI, 0.25), (-0.95 * PI, 0.6), (0.2, 0.1)] {
            let generic = p.folded_transform(omega, tau).norm_sqr();
            let scalar = q_scalar_frontend_b(theta, omega, tau);
            assert!(
                (generic - scalar).abs() < 1e-10,
                "Ω = {omega}, τ = {tau}: {generic} vs {scalar}"
            );
        }
    }

    #[test]
    fn energy_coefficients_sinc() {
        for &gamma in &[1.0, 1.25, 1.5, 2.0] {
            let p = sinc_a(gamma, 2);
            for s in 1..=8u32 {
                let closed = p.energy_coefficient(s).unwrap();
                let quadrature = p.energy_coefficient_quadrature(s).unwrap();
                assert!(
                    (closed - gamma.powi(1 - s as i32)).abs() < 1e-14,
                    "γ = {gamma}, s = {s}"
                );
                assert!((closed - quadrature).abs() < 1e-10, "γ = {gamma}, s = {s}");
            }
        }
        // γ = 2, s = 3 → 1/4
        assert!((sinc_a(2.0, 2).energy_coefficient(3).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn energy_coefficients_rrc_closed_form() {
        for &theta in &[0.0, 0.22, 0.5, 1.0] {
            let p = ChipPulse::root_raised_cosine(theta, 1.0, FrontEnd::TypeA { oversampling: 2 })
                .unwrap();
            for s in 1..=6u32 {
                let q = p.energy_coefficient(s).unwrap();
                let c = rrc_energy_closed_form(theta, s);
                assert!((q - c).abs() < 1e-10, "θ = {theta}, s = {s}: {q} vs {c}");
            }
            assert!((p.energy_coefficient(1).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_coefficient_chip_interval_invariance() {
        let a =
            ChipPulse::root_raised_cosine(0.4, 1.0, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        let b =
            ChipPulse::root_raised_cosine(0.4, 2.5, FrontEnd::TypeA { oversampling: 2 }).unwrap();
        for s in 1..=4u32 {
            let ea = a.energy_coefficient(s).unwrap();
            let eb = b.energy_coefficient(s).unwrap();
            assert!((ea - eb).abs() < 1e-9, "s = {s}");
        }
    }

    #[test]
    fn phase_vector_values() {
        let e = fourier_phase_vector(PI, 2);
        assert!((e[0] - Complex64::new(1.0 / 2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((e[1] - Complex64::new(0.0, -1.0 / 2f64.sqrt())).norm() < 1e-15);
        let norm: f64 = e.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
        assert_eq!(fourier_phase_vector(0.7, 1).len(), 1);
        for &omega in &[-3.0, -0.2, 1.4] {
            let e = fourier_phase_vector(omega, 4);
            let norm: f64 = e.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn constructor_rejections() {
        assert!(ChipPulse::sinc(2.1, 1.0, FrontEnd::TypeA { oversampling: 4 }).is_err());
        assert!(ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeB).is_err());
        assert!(ChipPulse::sinc(1.0, 1.0, FrontEnd::TypeB).is_ok());
        // bandwidth above r/(2Tc)
        assert!(ChipPulse::sinc(1.5, 1.0, FrontEnd::TypeA { oversampling: 1 }).is_err());
        assert!(
            ChipPulse::root_raised_cosine(0.2, 1.0, FrontEnd::TypeA { oversampling: 1 }).is_err()
        );
        assert!(ChipPulse::root_raised_cosine(1.2, 1.0, FrontEnd::TypeB).is_err());
    }

    #[test]
    fn tabulated_round_trip() {
        // tabulate the Nyquist sinc spectrum and compare folded transforms
        let tc = 1.0;
        let samples: Vec<(f64, Complex64)> = (0..=400)
            .map(|i| {
                let w = -PI + 2.0 * PI * i as f64 / 400.0;
                (w, Complex64::new(1.0, 0.0))
            })
            .collect();
        let tab =
            ChipPulse::tabulated(samples, tc, FrontEnd::TypeA { oversampling: 1 }, None).unwrap();
        let exact = ChipPulse::sinc(1.0, tc, FrontEnd::TypeA { oversampling: 1 }).unwrap();
        for &(omega, tau) in &[(0.3, 0.0), (1.2, 0.4)] {
            let a = tab.folded_transform(omega, tau);
            let b = exact.folded_transform(omega, tau);
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn tabulated_text_format() {
        let text = "# ω  Ψ\n-3.141592653589793 1.0,0.0\n0.0 1.0,0.0\n3.141592653589793 1.0,0.0\n";
        let p = ChipPulse::tabulated_from_reader(
            std::io::BufReader::new(text.as_bytes()),
            1.0,
            FrontEnd::TypeA { oversampling: 1 },
            Some(64),
        )
        .unwrap();
        assert!((p.energy() - 1.0).abs() < 1e-6);
        assert!((p.bandwidth() - 0.5).abs() < 1e-12);
    }
}

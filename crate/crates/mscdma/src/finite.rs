//! Finite-(N, K) Monte Carlo oracle.
//!
//! Builds the exact randomly spread system over a truncated, centered
//! window of symbol intervals: per-user block-circulant pulse matrices,
//! virtual spreading columns, and the banded block-bidiagonal transfer
//! matrix. Empirical diagonal elements of powers of the correlation matrix
//! and signal-level detector SINRs are estimated without ever forming a
//! dense correlation matrix.
//!
//! Everything is deterministic given the config seed: every random draw
//! comes from a counter-split ChaCha stream keyed by (purpose, symbol,
//! user) or (purpose, trial), so results do not depend on evaluation
//! order.

use crate::linalg::{acc_hmul, acc_mul, CMat};
use crate::pulse::{ChipPulse, FrontEnd};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Per-user time delays over the symbol interval.
#[derive(Debug, Clone)]
pub enum DelaySpec {
    /// All users aligned (synchronous).
    Synchronous,
    /// Explicit list, ascending with the first entry 0 (reference user).
    Fixed(Vec<f64>),
    /// Reference user at 0, the rest i.i.d. uniform on [0, T_s), sorted.
    Uniform,
}

/// Received amplitudes a_k.
#[derive(Debug, Clone)]
pub enum PowerSpec {
    Equal,
    Fixed(Vec<f64>),
}

/// Configuration of one finite system realization.
#[derive(Debug, Clone)]
pub struct FiniteSystemConfig {
    pub spreading_factor: usize,
    pub users: usize,
    pub pulse: ChipPulse,
    /// Window length in symbols; odd, ≥ 3, statistics read at the center.
    pub window: usize,
    pub delays: DelaySpec,
    pub powers: PowerSpec,
    pub n0: f64,
    pub seed: u64,
    /// Allocation guard for the windowed transfer matrix, in bytes.
    pub memory_cap: usize,
}

/// Default allocation guard: 2 GiB.
pub const DEFAULT_MEMORY_CAP: usize = 2 << 30;

impl FiniteSystemConfig {
    pub fn new(
        spreading_factor: usize,
        users: usize,
        pulse: ChipPulse,
        window: usize,
        delays: DelaySpec,
        powers: PowerSpec,
        n0: f64,
        seed: u64,
    ) -> Self {
        Self {
            spreading_factor,
            users,
            pulse,
            window,
            delays,
            powers,
            n0,
            seed,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

/// A realized finite system: banded transfer blocks and the sampled
/// delays/amplitudes behind them.
#[derive(Debug)]
pub struct FiniteSystem {
    pub spreading_factor: usize,
    pub users: usize,
    pub oversampling: usize,
    pub window: usize,
    pub chip_interval: f64,
    /// Realized delays τ_k ∈ [0, T_s).
    pub delays: Vec<f64>,
    pub amplitudes: Vec<f64>,
    /// Upper rN×K transfer blocks H_u per symbol.
    pub h_up: Vec<CMat>,
    /// Lower rN×K transfer blocks H_d per symbol.
    pub h_down: Vec<CMat>,
    /// Front-end noise variance per sample for the config's N₀.
    pub noise_variance: f64,
    /// Master seed; symbol/noise trial streams split from it.
    pub seed: u64,
}

// RNG stream purposes.
const STREAM_SPREADING: u64 = 1;
const STREAM_DELAYS: u64 = 2;
const STREAM_SYMBOLS: u64 = 4;
const STREAM_NOISE: u64 = 5;

fn stream_rng(seed: u64, purpose: u64, a: u64, b: u64) -> ChaCha8Rng {
    debug_assert!(a < (1 << 24) && b < (1 << 24));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((purpose << 48) | (a << 24) | b);
    rng
}

fn complex_gaussians(rng: &mut ChaCha8Rng, n: usize, variance: f64) -> Vec<Complex64> {
    let scale = (variance / 2.0).sqrt();
    (0..n)
        .map(|_| {
            // Box–Muller on uniform draws keeps the dependency surface small.
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let mag = (-2.0 * u1.ln()).sqrt() * scale;
            Complex64::from_polar(mag, 2.0 * PI * u2)
        })
        .collect()
}

/// The r-block-wise circulant pulse matrix (rN×N): block-row b is the
/// circular right shift of block-row b−1, and the defining sequences are
/// the N-point inverse transforms of the folded spectrum samples
/// c_t(Ω_n) = φ(Ω_n, τ̃ − (t−1)T_c/r), Ω_n = 2πn/N.
pub fn build_circulant(pulse: &ChipPulse, n: usize, tau_frac: f64) -> CMat {
    let r = pulse.oversampling() as usize;
    let tc = pulse.chip_interval;
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n);
    // c_t sequences via inverse DFT of the spectrum samples
    let mut seqs: Vec<Vec<Complex64>> = Vec::with_capacity(r);
    for t in 0..r {
        let tau = tau_frac - t as f64 * tc / r as f64;
        let mut buf: Vec<Complex64> = (0..n)
            .map(|i| pulse.folded_transform(2.0 * PI * i as f64 / n as f64, tau))
            .collect();
        ifft.process(&mut buf);
        for v in buf.iter_mut() {
            *v /= n as f64;
        }
        seqs.push(buf);
    }
    let mut c = CMat::zeros(r * n, n);
    for b in 0..n {
        for t in 0..r {
            let row = c.row_mut(b * r + t);
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = seqs[t][(i + n - b) % n];
            }
        }
    }
    c
}

struct UserMask {
    /// Per phase t: the spectrum factor applied to the user's spreading
    /// DFT, mask[t][f] = φ(−2πf/N, τ̃ − t·T_c/r).
    phases: Vec<Vec<Complex64>>,
    chips_delay: usize,
}

/// Build the finite system for a config (delays and powers sampled or
/// validated, spreading drawn per (symbol, user) stream).
pub fn build_system(config: &FiniteSystemConfig) -> Result<FiniteSystem> {
    let n = config.spreading_factor;
    let k = config.users;
    let m = config.window;
    if k < 1 || n < 2 {
        return Err(Error::Precondition(format!(
            "need K ≥ 1 and N ≥ 2, got K = {k}, N = {n}"
        )));
    }
    if m < 3 || m % 2 == 0 {
        return Err(Error::Precondition(format!(
            "window must be odd and ≥ 3 symbols, got {m}"
        )));
    }
    let r = config.pulse.oversampling() as usize;
    let need = m
        .checked_mul(2 * r * n * k * std::mem::size_of::<Complex64>())
        .unwrap_or(usize::MAX);
    if need > config.memory_cap {
        return Err(Error::MemoryCap {
            need,
            cap: config.memory_cap,
        });
    }
    let tc = config.pulse.chip_interval;
    let ts = tc * n as f64;

    let delays = match &config.delays {
        DelaySpec::Synchronous => vec![0.0; k],
        DelaySpec::Fixed(list) => {
            if list.len() != k {
                return Err(Error::Precondition(format!(
                    "delay list has {} entries for {k} users",
                    list.len()
                )));
            }
            if list[0] != 0.0 {
                return Err(Error::Precondition(
                    "the reference user's delay must be 0".into(),
                ));
            }
            for w in list.windows(2) {
                if w[1] < w[0] {
                    return Err(Error::Precondition("delays must be ascending".into()));
                }
            }
            if list.iter().any(|&t| t < 0.0 || t >= ts) {
                return Err(Error::Precondition("delays must lie in [0, T_s)".into()));
            }
            list.clone()
        }
        DelaySpec::Uniform => {
            let mut rng = stream_rng(config.seed, STREAM_DELAYS, 0, 0);
            let mut list: Vec<f64> = std::iter::once(0.0)
                .chain((1..k).map(|_| rng.gen_range(0.0..ts)))
                .collect();
            list.sort_by(|a, b| a.partial_cmp(b).unwrap());
            list
        }
    };
    let amplitudes = match &config.powers {
        PowerSpec::Equal => vec![1.0; k],
        PowerSpec::Fixed(list) => {
            if list.len() != k {
                return Err(Error::Precondition(format!(
                    "amplitude list has {} entries for {k} users",
                    list.len()
                )));
            }
            list.clone()
        }
    };

    build_from_parts(config, delays, amplitudes)
}

fn build_from_parts(
    config: &FiniteSystemConfig,
    delays: Vec<f64>,
    amplitudes: Vec<f64>,
) -> Result<FiniteSystem> {
    let n = config.spreading_factor;
    let k = config.users;
    let m = config.window;
    let r = config.pulse.oversampling() as usize;
    let tc = config.pulse.chip_interval;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    // Spectral masks per user; shared across symbols.
    let masks: Vec<UserMask> = delays
        .iter()
        .map(|&tau| {
            let chips = ((tau / tc).floor() as usize).min(n - 1);
            let tau_frac = tau - chips as f64 * tc;
            let phases = (0..r)
                .map(|t| {
                    let shifted = tau_frac - t as f64 * tc / r as f64;
                    (0..n)
                        .map(|f| {
                            config
                                .pulse
                                .folded_transform(-2.0 * PI * f as f64 / n as f64, shifted)
                        })
                        .collect()
                })
                .collect();
            UserMask {
                phases,
                chips_delay: chips,
            }
        })
        .collect();

    let mut h_up = Vec::with_capacity(m);
    let mut h_down = Vec::with_capacity(m);
    let mut shat = vec![Complex64::new(0.0, 0.0); n];
    let mut phase_buf = vec![Complex64::new(0.0, 0.0); n];
    for sym in 0..m {
        let mut up = CMat::zeros(r * n, k);
        let mut down = CMat::zeros(r * n, k);
        for (user, mask) in masks.iter().enumerate() {
            // spreading streams are keyed relative to the window center, so
            // a wider window extends the same realization instead of
            // drawing a fresh one
            let key = ((1u64 << 20) + sym as u64) - (m / 2) as u64;
            let mut rng = stream_rng(config.seed, STREAM_SPREADING, key, user as u64);
            let s = complex_gaussians(&mut rng, n, 1.0 / n as f64);
            shat.copy_from_slice(&s);
            fft.process(&mut shat);
            let offset = r * mask.chips_delay;
            let amp = amplitudes[user];
            for (t, phase_mask) in mask.phases.iter().enumerate() {
                for ((dst, src), g) in phase_buf.iter_mut().zip(&shat).zip(phase_mask) {
                    *dst = src * g;
                }
                ifft.process(&mut phase_buf);
                for (b, &v) in phase_buf.iter().enumerate() {
                    let row = offset + b * r + t;
                    let v = v * amp / n as f64;
                    if row < r * n {
                        up[(row, user)] = v;
                    } else {
                        down[(row - r * n, user)] = v;
                    }
                }
            }
        }
        h_up.push(up);
        h_down.push(down);
    }

    Ok(FiniteSystem {
        spreading_factor: n,
        users: k,
        oversampling: r,
        window: m,
        chip_interval: tc,
        delays,
        amplitudes,
        h_up,
        h_down,
        noise_variance: config.pulse.noise_variance(config.n0),
        seed: config.seed,
    })
}

/// Chip-rate-sampling (Type B) system: the front-end samples at instants
/// offset by `sampling_phase`, which shifts every user's effective delay.
/// The user whose delay equals the phase sees a perfectly aligned matched
/// filter.
pub fn frontend_b_system(config: &FiniteSystemConfig, sampling_phase: f64) -> Result<FiniteSystem> {
    if config.pulse.front_end != FrontEnd::TypeB {
        return Err(Error::Precondition(
            "chip-rate sampling needs a Type-B (chip-matched) pulse".into(),
        ));
    }
    let n = config.spreading_factor;
    let k = config.users;
    let ts = config.pulse.chip_interval * n as f64;
    let base = match &config.delays {
        DelaySpec::Synchronous => vec![0.0; k],
        DelaySpec::Fixed(list) => list.clone(),
        DelaySpec::Uniform => {
            let mut rng = stream_rng(config.seed, STREAM_DELAYS, 0, 0);
            let mut list: Vec<f64> = std::iter::once(0.0)
                .chain((1..k).map(|_| rng.gen_range(0.0..ts)))
                .collect();
            list.sort_by(|a, b| a.partial_cmp(b).unwrap());
            list
        }
    };
    if base.len() != k {
        return Err(Error::Precondition("delay list length mismatch".into()));
    }
    let shifted: Vec<f64> = base
        .iter()
        .map(|&t| (t - sampling_phase).rem_euclid(ts))
        .collect();
    let amplitudes = match &config.powers {
        PowerSpec::Equal => vec![1.0; k],
        PowerSpec::Fixed(list) => list.clone(),
    };
    build_from_parts(config, shifted, amplitudes)
}

/// Stacked vectors over the window are kept as one block per symbol.
pub type BlockVec = Vec<Vec<Complex64>>;

impl FiniteSystem {
    pub fn central_symbol(&self) -> usize {
        self.window / 2
    }

    fn samples_per_symbol(&self) -> usize {
        self.oversampling * self.spreading_factor
    }

    /// The stacked column h_k^{(m)} (all window blocks).
    pub fn column(&self, user: usize, symbol: usize) -> BlockVec {
        let rn = self.samples_per_symbol();
        let mut blocks: BlockVec = vec![vec![Complex64::new(0.0, 0.0); rn]; self.window];
        for (slot, &v) in blocks[symbol]
            .iter_mut()
            .zip(self.h_up[symbol].col(user).iter())
        {
            *slot = v;
        }
        if symbol + 1 < self.window {
            for (slot, &v) in blocks[symbol + 1]
                .iter_mut()
                .zip(self.h_down[symbol].col(user).iter())
            {
                *slot = v;
            }
        }
        blocks
    }

    /// y = 𝓗 x (x has K entries per symbol block).
    pub fn apply(&self, x: &BlockVec) -> BlockVec {
        let rn = self.samples_per_symbol();
        let mut y: BlockVec = vec![vec![Complex64::new(0.0, 0.0); rn]; self.window];
        for i in 0..self.window {
            mat_vec_acc(&self.h_up[i], &x[i], &mut y[i]);
            if i > 0 {
                mat_vec_acc(&self.h_down[i - 1], &x[i - 1], &mut y[i]);
            }
        }
        y
    }

    /// w = 𝓗ᴴ y.
    pub fn apply_adjoint(&self, y: &BlockVec) -> BlockVec {
        let mut w: BlockVec = vec![vec![Complex64::new(0.0, 0.0); self.users]; self.window];
        for j in 0..self.window {
            math_vec_acc(&self.h_up[j], &y[j], &mut w[j]);
            if j + 1 < self.window {
                math_vec_acc(&self.h_down[j], &y[j + 1], &mut w[j]);
            }
        }
        w
    }

    /// v ← 𝓣 v = 𝓗 (𝓗ᴴ v).
    pub fn t_apply(&self, v: &BlockVec) -> BlockVec {
        self.apply(&self.apply_adjoint(v))
    }

    /// Multi-column version of [`Self::t_apply`] (blocks are rN×P).
    pub fn t_apply_block(&self, v: &[CMat]) -> Vec<CMat> {
        let p = v[0].cols;
        let mut w: Vec<CMat> = (0..self.window)
            .map(|_| CMat::zeros(self.users, p))
            .collect();
        for j in 0..self.window {
            acc_hmul(&mut w[j], &self.h_up[j], &v[j]);
            if j + 1 < self.window {
                acc_hmul(&mut w[j], &self.h_down[j], &v[j + 1]);
            }
        }
        let rn = self.samples_per_symbol();
        let mut y: Vec<CMat> = (0..self.window).map(|_| CMat::zeros(rn, p)).collect();
        for i in 0..self.window {
            acc_mul(&mut y[i], &self.h_up[i], &w[i]);
            if i > 0 {
                acc_mul(&mut y[i], &self.h_down[i - 1], &w[i - 1]);
            }
        }
        y
    }

    fn guard_symbol(&self, ell: usize, symbol: usize) -> Result<()> {
        let third = self.window / 3;
        if symbol < third || symbol >= self.window - third {
            return Err(Error::Precondition(format!(
                "symbol {symbol} is outside the central third of the {}-symbol window; edge statistics carry truncation bias",
                self.window
            )));
        }
        let margin = symbol.min(self.window - 1 - symbol);
        if ell > margin + 1 {
            return Err(Error::Precondition(format!(
                "order {ell} reaches beyond the window margin {margin} at symbol {symbol}"
            )));
        }
        Ok(())
    }

    /// Empirical (𝓡^ℓ)_{k,m} = h_k^{(m)ᴴ} 𝓣^{ℓ−1} h_k^{(m)}, computed by
    /// repeated banded application (never forming 𝓡 densely).
    pub fn empirical_diag_moment(&self, ell: usize, user: usize, symbol: usize) -> Result<f64> {
        assert!(ell >= 1);
        self.guard_symbol(ell, symbol)?;
        let h = self.column(user, symbol);
        let mut v = h.clone();
        for _ in 1..ell {
            v = self.t_apply(&v);
        }
        Ok(block_dot(&h, &v).re)
    }

    /// All orders 1..=max_ell for a probe set of users at one symbol, in a
    /// single sweep of banded products.
    pub fn empirical_diag_moments_batch(
        &self,
        max_ell: usize,
        users: &[usize],
        symbol: usize,
    ) -> Result<Vec<Vec<f64>>> {
        assert!(max_ell >= 1);
        self.guard_symbol(max_ell, symbol)?;
        let rn = self.samples_per_symbol();
        let p = users.len();
        let mut v0: Vec<CMat> = (0..self.window).map(|_| CMat::zeros(rn, p)).collect();
        for (ci, &user) in users.iter().enumerate() {
            for (row, &val) in self.h_up[symbol].col(user).iter().enumerate() {
                v0[symbol][(row, ci)] = val;
            }
            if symbol + 1 < self.window {
                for (row, &val) in self.h_down[symbol].col(user).iter().enumerate() {
                    v0[symbol + 1][(row, ci)] = val;
                }
            }
        }
        let mut out = Vec::with_capacity(max_ell);
        let mut v = v0.clone();
        for ell in 1..=max_ell {
            if ell > 1 {
                v = self.t_apply_block(&v);
            }
            let mut row = Vec::with_capacity(p);
            for ci in 0..p {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..self.window {
                    for r in 0..rn {
                        acc += v0[b][(r, ci)].conj() * v[b][(r, ci)];
                    }
                }
                row.push(acc.re);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Signal-level SINR of a rank-L multistage detector for one user at
    /// the central symbol, over i.i.d. unit-variance symbols and complex
    /// Gaussian front-end noise of variance σ² per sample. Interference-free
    /// runs return +∞.
    pub fn signal_level_sinr(
        &self,
        weights: &[f64],
        user: usize,
        n0: f64,
        trials: usize,
        pulse: &ChipPulse,
    ) -> Result<f64> {
        let (signal, resid) = self.signal_level_components(weights, user, n0, trials, pulse)?;
        if resid <= 1e-24 * signal.max(f64::MIN_POSITIVE) {
            return Ok(f64::INFINITY);
        }
        Ok(signal / resid)
    }

    /// Exact conditional output SINR of the detector on this realization
    /// (no symbol or noise sampling): with f = Σ_ℓ w_ℓ 𝓣^ℓ h, the useful
    /// power is (fᴴh)² and the interference power ‖𝓗ᴴf‖² − (fᴴh)², plus
    /// σ²‖f‖² of filtered noise.
    pub fn conditional_sinr(
        &self,
        weights: &[f64],
        user: usize,
        n0: f64,
        pulse: &ChipPulse,
    ) -> Result<f64> {
        let rank = weights.len();
        let symbol = self.central_symbol();
        self.guard_symbol(rank, symbol)?;
        let sigma2 = pulse.noise_variance(n0);
        let h = self.column(user, symbol);
        let mut f: BlockVec =
            vec![vec![Complex64::new(0.0, 0.0); self.samples_per_symbol()]; self.window];
        let mut iterate = h.clone();
        for (idx, &w) in weights.iter().enumerate() {
            for (fb, ib) in f.iter_mut().zip(&iterate) {
                for (fv, iv) in fb.iter_mut().zip(ib) {
                    *fv += w * iv;
                }
            }
            if idx + 1 < rank {
                iterate = self.t_apply(&iterate);
            }
        }
        let gain = block_dot(&f, &h).re;
        let projected = self.apply_adjoint(&f);
        let total: f64 = projected.iter().flatten().map(|z| z.norm_sqr()).sum();
        let noise: f64 = sigma2 * f.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
        let denom = (total - gain * gain) + noise;
        if denom <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(gain * gain / denom)
    }

    /// Raw (signal power, interference-plus-noise power) estimates behind
    /// [`Self::signal_level_sinr`]; exposing the pieces lets callers pool
    /// several realizations into one ratio.
    ///
    /// The useful-signal gain g = Σ_ℓ w_ℓ hᴴ𝓣^ℓh is computed exactly (it is
    /// deterministic given the realization); the trials only estimate the
    /// residual power E|b̂ − g·b|².
    pub fn signal_level_components(
        &self,
        weights: &[f64],
        user: usize,
        n0: f64,
        trials: usize,
        pulse: &ChipPulse,
    ) -> Result<(f64, f64)> {
        assert!(trials >= 1);
        let rank = weights.len();
        let symbol = self.central_symbol();
        self.guard_symbol(rank, symbol)?;
        let sigma2 = pulse.noise_variance(n0);
        let rn = self.samples_per_symbol();
        let h = self.column(user, symbol);

        let gain: f64 = {
            let mut acc = 0.0;
            let mut iterate = h.clone();
            for (idx, &w) in weights.iter().enumerate() {
                acc += w * block_dot(&h, &iterate).re;
                if idx + 1 < rank {
                    iterate = self.t_apply(&iterate);
                }
            }
            acc
        };

        let mut resid_sum = 0.0;
        for trial in 0..trials {
            let mut sym_rng = stream_rng(self.seed, STREAM_SYMBOLS, trial as u64, 0);
            let mut noise_rng = stream_rng(self.seed, STREAM_NOISE, trial as u64, 0);
            let b: BlockVec = (0..self.window)
                .map(|_| complex_gaussians(&mut sym_rng, self.users, 1.0))
                .collect();
            let mut y = self.apply(&b);
            if sigma2 > 0.0 {
                for block in y.iter_mut() {
                    for (slot, noise) in
                        block
                            .iter_mut()
                            .zip(complex_gaussians(&mut noise_rng, rn, sigma2))
                    {
                        *slot += noise;
                    }
                }
            }
            // b̂ = Σ_ℓ w_ℓ hᴴ 𝓣^ℓ y; the last stage needs no further T-apply
            let mut estimate = Complex64::new(0.0, 0.0);
            let mut iterate = y;
            for (idx, &w) in weights.iter().enumerate() {
                estimate += w * block_dot(&h, &iterate);
                if idx + 1 < rank {
                    iterate = self.t_apply(&iterate);
                }
            }
            resid_sum += (estimate - gain * b[symbol][user]).norm_sqr();
        }
        Ok((gain * gain, resid_sum / trials as f64))
    }
}

fn mat_vec_acc(a: &CMat, x: &[Complex64], y: &mut [Complex64]) {
    debug_assert_eq!(a.cols, x.len());
    debug_assert_eq!(a.rows, y.len());
    for i in 0..a.rows {
        let row = a.row(i);
        let mut acc = Complex64::new(0.0, 0.0);
        for (av, xv) in row.iter().zip(x) {
            acc += av * xv;
        }
        y[i] += acc;
    }
}

fn math_vec_acc(a: &CMat, x: &[Complex64], y: &mut [Complex64]) {
    debug_assert_eq!(a.rows, x.len());
    debug_assert_eq!(a.cols, y.len());
    for i in 0..a.rows {
        let row = a.row(i);
        let xv = x[i];
        for (yv, av) in y.iter_mut().zip(row) {
            *yv += av.conj() * xv;
        }
    }
}

fn block_dot(a: &BlockVec, b: &BlockVec) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (ab, bb) in a.iter().zip(b) {
        for (x, y) in ab.iter().zip(bb) {
            acc += x.conj() * y;
        }
    }
    acc
}

/// The spreading sequence drawn for a (symbol, user) slot under a master
/// seed: i.i.d. complex Gaussian entries of variance 1/N. The symbol is
/// addressed by its offset from the window center, matching the
/// construction in [`build_system`]. Exposed so external checks can
/// reproduce the exact system.
pub fn spreading_sequence(
    seed: u64,
    offset_from_center: i64,
    user: usize,
    n: usize,
) -> Vec<Complex64> {
    let key = ((1i64 << 20) + offset_from_center) as u64;
    let mut rng = stream_rng(seed, STREAM_SPREADING, key, user as u64);
    complex_gaussians(&mut rng, n, 1.0 / n as f64)
}

//! Gaussian decay laws.
//!
//! Weak coupling: each ground-state block factor is a four-frequency sum
//! `Σ_l c_l e^{iΩ_l t}` with signed weights `Σ_l c_l = 1`. Treating the
//! frequencies as steps of a random walk, the product over modes becomes
//! `exp(i a t - s² t²/2)` with the cumulative variance `s² = Σ_k var_k`.
//!
//! Strong coupling: `α₊₋ ≈ π/2`, the block factors collapse to two terms
//! oscillating at `±(Ω₊ + Ω₋)`, and `F` oscillates at `E ≈ 4g` under a
//! Gaussian envelope whose width follows from the spread of `Ω₊ + Ω₋`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::echo::{coherence_series, four_term_coefficients, EchoSeries, InitialState};
use crate::error::{param, Error, Result};
use crate::spectrum::{mode_data, spectral_sums_direct, ChainSpec, FieldSet, ModeData};

/// Four signed weights and frequencies of one block factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPoint {
    /// `+(Ω₊+Ω₋)`, `-(Ω₊+Ω₋)`, `+(Ω₊-Ω₋)`, `-(Ω₊-Ω₋)`
    pub freqs: [f64; 4],
    pub coeffs: [f64; 4],
}

impl FourPoint {
    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.freqs
            .iter()
            .zip(&self.coeffs)
            .map(|(&w, &c)| c * Complex64::from_polar(1.0, w * t))
            .sum()
    }

    /// Mean frequency `Σ c_l Ω_l`.
    pub fn mean(&self) -> f64 {
        self.freqs.iter().zip(&self.coeffs).map(|(w, c)| c * w).sum()
    }

    /// `Σ c_l Ω_l² - a²`.
    pub fn variance(&self) -> f64 {
        let second: f64 = self.freqs.iter().zip(&self.coeffs).map(|(w, c)| c * w * w).sum();
        let a = self.mean();
        second - a * a
    }
}

pub fn four_point_decomposition(mode: &ModeData) -> FourPoint {
    let sum = mode.plus.omega + mode.minus.omega;
    let diff = mode.plus.omega - mode.minus.omega;
    // coefficient order in `four_term_coefficients` follows the exponents
    // (+sum, -diff, +diff, -sum)
    let c = four_term_coefficients(mode);
    FourPoint {
        freqs: [sum, -sum, diff, -diff],
        coeffs: [c[0], c[3], c[2], c[1]],
    }
}

/// How to obtain the random-walk variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthMethod {
    /// Mean and variance of every mode's four-point decomposition.
    Direct,
    /// `a_k = 4g cos θ_k^i`, `var_k = 16 g² sin² θ_k^i`.
    Leading,
    /// Ising continuum limit `8 g² M / max(λ_i², 1)`.
    ClosedIsing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkStep {
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkStats {
    /// Per-mode statistics for `k = 1..=M`; empty for [`WidthMethod::ClosedIsing`].
    pub steps: Vec<WalkStep>,
    /// Cumulative variance `s²`.
    pub s2: f64,
}

pub fn walk_stats(chain: &ChainSpec, fields: &FieldSet, method: WidthMethod) -> Result<WalkStats> {
    let g = fields.g;
    match method {
        WidthMethod::Direct => {
            let steps: Vec<WalkStep> = mode_data(chain, fields)
                .iter()
                .map(|m| {
                    let fp = four_point_decomposition(m);
                    WalkStep { mean: fp.mean(), variance: fp.variance() }
                })
                .collect();
            let s2 = steps.iter().map(|s| s.variance).sum();
            Ok(WalkStats { steps, s2 })
        }
        WidthMethod::Leading => {
            let steps: Vec<WalkStep> = mode_data(chain, fields)
                .iter()
                .map(|m| {
                    let (s, c) = m.initial.theta.sin_cos();
                    WalkStep { mean: 4.0 * g * c, variance: 16.0 * g * g * s * s }
                })
                .collect();
            let s2 = 16.0 * g * g * spectral_sums_direct(fields.lambda_i, chain).s0;
            Ok(WalkStats { steps, s2 })
        }
        WidthMethod::ClosedIsing => {
            chain.require_ising("closed-form Gaussian width")?;
            let m = chain.modes() as f64;
            let l2 = fields.lambda_i * fields.lambda_i;
            let s2 = 8.0 * g * g * m / l2.max(1.0);
            Ok(WalkStats { steps: Vec::new(), s2 })
        }
    }
}

/// `exp(-s² t² / 2)`.
pub fn weak_gaussian_f(t: f64, s2: f64) -> f64 {
    (-0.5 * s2 * t * t).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeMethod {
    /// Weighted mean and spread of `Ω₊ + Ω₋` with weights
    /// `sin²(θ_k^g - θ_k^i)`, taking `θ^g = θ^{(λ₊)}`.
    Direct,
    /// Ising closed form `(M / 8g²)(λ_i² + 1) / max(λ_i⁴, 1)`.
    ClosedIsing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeModel {
    /// Peak frequency `E`.
    pub e_freq: f64,
    /// `Ω₊ + Ω₋ - E` for `k = 1..=M` (Direct only).
    pub delta: Vec<f64>,
    /// `sin²(θ_k^g - θ_k^i)` (Direct only).
    pub weights: Vec<f64>,
    pub theta_g: Vec<f64>,
    /// Envelope width parameter `s̃²`.
    pub s2_tilde: f64,
}

impl EnvelopeModel {
    pub fn value(&self, t: f64) -> f64 {
        weak_gaussian_f(t, self.s2_tilde)
    }

    /// Peak times `nπ/E` for `n = 0, step, 2 step, ...` up to `t_max`.
    pub fn peak_times(&self, t_max: f64, step: usize) -> Vec<f64> {
        let dt = std::f64::consts::PI / self.e_freq;
        let step = step.max(1);
        (0..)
            .step_by(step)
            .map(|n| n as f64 * dt)
            .take_while(|t| *t <= t_max)
            .collect()
    }
}

pub fn envelope_model(chain: &ChainSpec, fields: &FieldSet, method: EnvelopeMethod) -> Result<EnvelopeModel> {
    match method {
        EnvelopeMethod::Direct => {
            let modes = mode_data(chain, fields);
            let theta_g: Vec<f64> = modes.iter().map(|m| m.plus.theta).collect();
            let weights: Vec<f64> = modes
                .iter()
                .zip(&theta_g)
                .map(|(m, tg)| (tg - m.initial.theta).sin().powi(2))
                .collect();
            let sums: Vec<f64> = modes.iter().map(|m| m.plus.omega + m.minus.omega).collect();
            let wsum: f64 = weights.iter().sum();
            if wsum == 0.0 {
                return param("envelope weights vanish for every mode (initial and + branches coincide)");
            }
            let e_freq = weights.iter().zip(&sums).map(|(w, s)| w * s).sum::<f64>() / wsum;
            let delta: Vec<f64> = sums.iter().map(|s| s - e_freq).collect();
            // unnormalised, as opposed to the normalised mean above
            let s2_tilde = weights.iter().zip(&delta).map(|(w, d)| w * d * d).sum();
            Ok(EnvelopeModel { e_freq, delta, weights, theta_g, s2_tilde })
        }
        EnvelopeMethod::ClosedIsing => {
            chain.require_ising("closed-form envelope width")?;
            let m = chain.modes() as f64;
            let g = fields.g;
            if g == 0.0 {
                return param("closed-form envelope width diverges at g = 0");
            }
            let l2 = fields.lambda_i * fields.lambda_i;
            let s2_tilde = if l2 > 1.0 {
                m / (8.0 * g * g * l2 * l2) * (l2 + 1.0)
            } else {
                m / (8.0 * g * g) * (l2 + 1.0)
            };
            Ok(EnvelopeModel {
                e_freq: 4.0 * g,
                delta: Vec::new(),
                weights: Vec::new(),
                theta_g: Vec::new(),
                s2_tilde,
            })
        }
    }
}

/// Largest `|cos α₊₋|` tolerated by the two-term strong-coupling form.
pub const STRONG_GUARD: f64 = 0.1;

/// Two-term strong-coupling product, precomputed for repeated evaluation.
#[derive(Debug, Clone)]
pub struct StrongSimplified {
    /// `(Ω₊ + Ω₋, cos² α₊ᵢ, sin² α₊ᵢ)` per mode.
    terms: Vec<(f64, f64, f64)>,
}

impl StrongSimplified {
    pub fn new(modes: &[ModeData]) -> Result<Self> {
        let mut worst = (0.0f64, 0usize);
        for m in modes {
            let c = m.alphas().plus_minus.cos().abs();
            if c > worst.0 {
                worst = (c, m.mode.k);
            }
        }
        if worst.0 >= STRONG_GUARD {
            return Err(Error::StrongCouplingGuard { max_cos: worst.0, k: worst.1 });
        }
        let terms = modes
            .iter()
            .map(|m| {
                let (s, c) = m.alphas().plus_initial.sin_cos();
                (m.plus.omega + m.minus.omega, c * c, s * s)
            })
            .collect();
        Ok(Self { terms })
    }

    pub fn log_f(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(w, c2, s2)| {
                // |c2 e^{iwt} + s2 e^{-iwt}|² = c2² + s2² + 2 c2 s2 cos(2wt)
                let n2 = c2 * c2 + s2 * s2 + 2.0 * c2 * s2 * (2.0 * w * t).cos();
                0.5 * n2.max(0.0).ln()
            })
            .sum()
    }

    pub fn f(&self, t: f64) -> f64 {
        self.log_f(t).exp()
    }
}

/// Strong-coupling two-term approximation of `F(t)`.
pub fn strong_simplified_f(modes: &[ModeData], t: f64) -> Result<f64> {
    Ok(StrongSimplified::new(modes)?.f(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub s2: f64,
    /// `max |ln F - fit|` over the window.
    pub residual: f64,
    pub samples: usize,
}

pub const MIN_FIT_SAMPLES: usize = 8;

/// Default fit window on `F`.
pub const FIT_WINDOW: (f64, f64) = (0.05, 0.95);

/// Least-squares `s²` of `ln F = -s² t²/2` (line through the origin) using
/// samples with `low < F < high`.
pub fn gaussian_fit(times: &[f64], f: &[f64], window: (f64, f64)) -> Result<GaussianFit> {
    fit_where(times, f, |v| v > window.0 && v < window.1)
}

/// As [`gaussian_fit`] but with the window closed at both ends.
pub fn gaussian_fit_closed(times: &[f64], f: &[f64], window: (f64, f64)) -> Result<GaussianFit> {
    fit_where(times, f, |v| v >= window.0 && v <= window.1)
}

pub fn gaussian_fit_series(series: &EchoSeries, window: (f64, f64)) -> Result<GaussianFit> {
    gaussian_fit(&series.times, &series.f_values, window)
}

fn fit_where(times: &[f64], f: &[f64], keep: impl Fn(f64) -> bool) -> Result<GaussianFit> {
    if times.len() != f.len() {
        return param("times and F samples differ in length");
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(f)
        .filter(|(_, &v)| keep(v))
        .map(|(&t, &v)| (0.5 * t * t, v.ln()))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples { found: pts.len(), needed: MIN_FIT_SAMPLES });
    }
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let s2 = -sxy / sxx;
    let residual = pts.iter().map(|(x, y)| (y + s2 * x).abs()).fold(0.0, f64::max);
    Ok(GaussianFit { s2, residual, samples: pts.len() })
}

/// Weak-coupling widths from every route, plus a fit to the exact decay.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakWidthReport {
    pub direct: f64,
    pub leading: f64,
    pub closed: Option<f64>,
    pub fit: Option<GaussianFit>,
}

/// Strong-coupling envelope estimates, plus a fit to the exact peaks.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongWidthReport {
    pub e_freq: f64,
    pub direct: f64,
    pub closed: Option<f64>,
    pub fit: Option<GaussianFit>,
}

/// `F` grid that follows the predicted Gaussian down to ~1%.
fn decay_horizon(s2: f64) -> f64 {
    (2.0 * 100f64.ln() / s2).sqrt()
}

pub fn weak_width_report(chain: &ChainSpec, fields: &FieldSet) -> Result<WeakWidthReport> {
    let direct = walk_stats(chain, fields, WidthMethod::Direct)?.s2;
    let leading = walk_stats(chain, fields, WidthMethod::Leading)?.s2;
    let closed = if chain.is_ising() {
        Some(walk_stats(chain, fields, WidthMethod::ClosedIsing)?.s2)
    } else {
        None
    };
    let fit = if leading > 0.0 {
        let horizon = decay_horizon(leading);
        let times: Vec<f64> = (0..=400).map(|i| horizon * i as f64 / 400.0).collect();
        let series = coherence_series(chain, fields, &InitialState::Ground, &times)?;
        gaussian_fit_series(&series, FIT_WINDOW).ok()
    } else {
        None
    };
    Ok(WeakWidthReport { direct, leading, closed, fit })
}

/// Exact `F` at the envelope peaks `nπ/E`, thinned to at most `max_points`.
pub fn peak_samples(
    chain: &ChainSpec,
    fields: &FieldSet,
    envelope: &EnvelopeModel,
    t_max: f64,
    max_points: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n_peaks = (t_max * envelope.e_freq / std::f64::consts::PI).floor() as usize + 1;
    let step = n_peaks.div_ceil(max_points.max(1));
    let times = envelope.peak_times(t_max, step);
    let series = coherence_series(chain, fields, &InitialState::Ground, &times)?;
    Ok((series.times, series.f_values))
}

pub fn strong_width_report(chain: &ChainSpec, fields: &FieldSet) -> Result<StrongWidthReport> {
    let env = envelope_model(chain, fields, EnvelopeMethod::Direct)?;
    let closed = if chain.is_ising() {
        Some(envelope_model(chain, fields, EnvelopeMethod::ClosedIsing)?.s2_tilde)
    } else {
        None
    };
    let fit = if env.s2_tilde > 0.0 {
        let (t, f) = peak_samples(chain, fields, &env, decay_horizon(env.s2_tilde), 2000)?;
        gaussian_fit(&t, &f, FIT_WINDOW).ok()
    } else {
        None
    };
    Ok(StrongWidthReport { e_freq: env.e_freq, direct: env.s2_tilde, closed, fit })
}

/// `F` from the strong-coupling two-term form on a time grid.
pub fn strong_simplified_series(chain: &ChainSpec, fields: &FieldSet, times: &[f64]) -> Result<Vec<f64>> {
    let s = StrongSimplified::new(&mode_data(chain, fields))?;
    Ok(times.par_iter().map(|&t| s.f(t)).collect())
}

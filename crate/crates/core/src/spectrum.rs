//! Momentum modes and single-mode spectra of the XY chain.
//!
//! After Jordan-Wigner and Fourier transformation the chain Hamiltonian with
//! field `λ` splits into independent `(k, -k)` blocks. Each block is described
//! by the dispersion
//!
//! ```text
//! ε_k = λ - cos x_k,   Ω_k = 2 sqrt(ε_k² + γ² sin² x_k),   cos θ_k = 2 ε_k / Ω_k
//! ```
//!
//! with `x_k = 2πk/N`. Everything downstream (echo factors, random-walk
//! statistics, envelope widths) is a function of `(Ω, θ)` for the four field
//! labels `λ_i`, `λ_e`, `λ_+ = λ_e + g`, `λ_- = λ_e - g`.

use std::f64::consts::PI;

use crate::error::{param, Error, Result};

/// Below this quasiparticle energy the Bogoliubov angle is 0/0 and is pinned to zero.
pub const DEGENERATE_OMEGA: f64 = 1e-12;

/// Ring geometry and in-plane anisotropy of the environment chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    n: usize,
    gamma: f64,
}

impl ChainSpec {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return param(format!("chain size N must be even and >= 4 (got {n})"));
        }
        if !gamma.is_finite() {
            return param(format!("anisotropy gamma must be finite (got {gamma})"));
        }
        Ok(Self { n, gamma })
    }

    /// Transverse-field Ising chain (`γ = 1`).
    pub fn ising(n: usize) -> Result<Self> {
        Self::new(n, 1.0)
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of paired momentum modes `M = N/2`.
    pub fn modes(&self) -> usize {
        self.n / 2
    }

    pub fn is_ising(&self) -> bool {
        self.gamma == 1.0
    }

    pub(crate) fn require_ising(&self, method: &'static str) -> Result<()> {
        if self.is_ising() {
            Ok(())
        } else {
            Err(Error::RequiresIsing { method, gamma: self.gamma })
        }
    }

    /// Momentum angle `2πk/N` for any integer label.
    pub fn momentum(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n as f64
    }
}

/// The four field labels of a quench with central-spin coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSet {
    pub lambda_i: f64,
    pub lambda_e: f64,
    pub g: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl FieldSet {
    pub fn new(lambda_i: f64, lambda_e: f64, g: f64) -> Result<Self> {
        if !(lambda_i.is_finite() && lambda_e.is_finite() && g.is_finite()) {
            return param("fields and coupling must be finite");
        }
        if g < 0.0 {
            return param(format!("coupling g must be non-negative (got {g})"));
        }
        Ok(Self {
            lambda_i,
            lambda_e,
            g,
            lambda_plus: lambda_e + g,
            lambda_minus: lambda_e - g,
        })
    }

    /// Pure quench echo: the chain starts in the ground state of the evolving field.
    pub fn loschmidt(lambda: f64, g: f64) -> Result<Self> {
        Self::new(lambda, lambda, g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: usize,
    pub x: f64,
}

/// Paired modes `k = 1..=M`, `x_k = 2πk/N`.
pub fn mode_grid(chain: &ChainSpec) -> Vec<Mode> {
    (1..=chain.modes())
        .map(|k| Mode { k, x: chain.momentum(k) })
        .collect()
}

/// Single-particle data of one mode at one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub epsilon: f64,
    pub omega: f64,
    pub theta: f64,
}

impl Dispersion {
    pub fn at(lambda: f64, gamma: f64, x: f64) -> Self {
        let epsilon = lambda - x.cos();
        let pairing = gamma * x.sin();
        let omega = 2.0 * epsilon.hypot(pairing);
        // same angle as arccos(2 epsilon / omega) on [0, pi], without its loss of precision near 0 and pi
        let theta = if omega <= DEGENERATE_OMEGA { 0.0 } else { pairing.abs().atan2(epsilon) };
        Self { epsilon, omega, theta }
    }
}

pub fn dispersion_data(lambda: f64, chain: &ChainSpec) -> Vec<(Mode, Dispersion)> {
    mode_grid(chain)
        .into_iter()
        .map(|m| (m, Dispersion::at(lambda, chain.gamma(), m.x)))
        .collect()
}

/// Half the difference of two Bogoliubov angles; the rotation between the
/// quasiparticle vacua of two fields.
pub fn alpha_angle(theta_a: f64, theta_b: f64) -> f64 {
    0.5 * (theta_a - theta_b)
}

/// Pairwise half-angle differences between the `+`, `-` and initial branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alphas {
    pub plus_minus: f64,
    pub plus_initial: f64,
    pub minus_initial: f64,
}

/// Everything one `(k, -k)` block needs: dispersion at `λ_i`, `λ_+` and `λ_-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub mode: Mode,
    pub initial: Dispersion,
    pub plus: Dispersion,
    pub minus: Dispersion,
}

impl ModeData {
    pub fn new(mode: Mode, chain: &ChainSpec, fields: &FieldSet) -> Self {
        let gamma = chain.gamma();
        Self {
            mode,
            initial: Dispersion::at(fields.lambda_i, gamma, mode.x),
            plus: Dispersion::at(fields.lambda_plus, gamma, mode.x),
            minus: Dispersion::at(fields.lambda_minus, gamma, mode.x),
        }
    }

    pub fn alphas(&self) -> Alphas {
        Alphas {
            plus_minus: alpha_angle(self.plus.theta, self.minus.theta),
            plus_initial: alpha_angle(self.plus.theta, self.initial.theta),
            minus_initial: alpha_angle(self.minus.theta, self.initial.theta),
        }
    }
}

/// Mode data for `k = 1..=M`.
pub fn mode_data(chain: &ChainSpec, fields: &FieldSet) -> Vec<ModeData> {
    mode_grid(chain)
        .into_iter()
        .map(|m| ModeData::new(m, chain, fields))
        .collect()
}

/// Weighted sums of `sin² θ_k` at the initial field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSums {
    /// `Σ sin² θ_k`
    pub s0: f64,
    /// `Σ sin² θ_k sin² x_k`
    pub s1: f64,
    /// `Σ sin² θ_k sin⁴ x_k`
    pub s2: f64,
}

pub fn spectral_sums_direct(lambda_i: f64, chain: &ChainSpec) -> SpectralSums {
    let mut sums = SpectralSums { s0: 0.0, s1: 0.0, s2: 0.0 };
    for (mode, d) in dispersion_data(lambda_i, chain) {
        let w = d.theta.sin().powi(2);
        let sx2 = mode.x.sin().powi(2);
        sums.s0 += w;
        sums.s1 += w * sx2;
        sums.s2 += w * sx2 * sx2;
    }
    sums
}

/// Continuum limits of the spectral sums for the Ising chain.
pub fn spectral_sums_closed(lambda_i: f64, chain: &ChainSpec) -> Result<SpectralSums> {
    chain.require_ising("closed-form spectral sums")?;
    let m = chain.modes() as f64;
    let l2 = lambda_i * lambda_i;
    Ok(if l2 > 1.0 {
        SpectralSums {
            s0: m / (2.0 * l2),
            s1: m / 8.0 * (3.0 * l2 - 1.0) / (l2 * l2),
            s2: m / (32.0 * l2 * l2 * l2) * (10.0 * l2 * l2 - 5.0 * l2 + 1.0),
        }
    } else {
        SpectralSums {
            s0: m / 2.0,
            s1: m / 8.0 * (3.0 - l2),
            s2: m / 32.0 * (10.0 - 5.0 * l2 + l2 * l2),
        }
    })
}

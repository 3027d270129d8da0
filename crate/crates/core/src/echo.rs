//! Exact decoherence factor of the central spin.
//!
//! The central spin splits the chain evolution into two branches with fields
//! `λ_±`, and the off-diagonal element of its reduced density matrix is
//! multiplied by `D(t) = Tr[U₊(t) ρ_E U₋†(t)]`. For a Gaussian (ground or
//! thermal) initial state of the quadratic chain, `D` factorises over the
//! `(k, -k)` blocks `k = 1..M-1` and the two unpaired modes `k = 0` and
//! `k = M`.
//!
//! Per-block phases that are common to all states of a block (the
//! `-2cos x` shifts) are dropped, so the phase of `D` is fixed only up to a
//! parameter-dependent global factor. `F = |D|` is unaffected.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{param, Result};
use crate::spectrum::{ChainSpec, FieldSet, Mode, ModeData};

/// State of the chain at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// Ground state of the chain at field `λ_i`.
    Ground,
    /// Gibbs state of the chain at field `λ_i` (`k_B = 1`).
    Thermal { temperature: f64 },
}

impl InitialState {
    /// Gibbs state at `temperature`; zero temperature is the ground state.
    pub fn thermal(temperature: f64) -> Result<Self> {
        if !temperature.is_finite() || temperature < 0.0 {
            return param(format!("temperature must be finite and >= 0 (got {temperature})"));
        }
        if temperature == 0.0 {
            Ok(Self::Ground)
        } else {
            Ok(Self::Thermal { temperature })
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            Self::Ground => None,
            Self::Thermal { temperature } => Some(1.0 / temperature),
        }
    }

    pub fn temperature(&self) -> f64 {
        match *self {
            Self::Ground => 0.0,
            Self::Thermal { temperature } => temperature,
        }
    }
}

/// Closed form used for a single ground-state block factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeFormula {
    /// Four-exponential sum. Canonical; agrees with the block oracle in phase.
    FourTerm,
    /// Trigonometric form exactly as originally printed. Both imaginary terms
    /// carry `sin(Ω₊t) cos(Ω₋t)`, so it departs from the oracle whenever
    /// `g ≠ 0` and `cos 2α₋ᵢ ≠ 0`. Kept for comparison only.
    TrigonometricAsPrinted,
}

/// Ground-state factor `D_k(t)` of one `(k, -k)` block.
pub fn mode_decoherence_ground(mode: &ModeData, t: f64, formula: ModeFormula) -> Complex64 {
    let (sp, cp) = (mode.plus.omega * t).sin_cos();
    let (sm, cm) = (mode.minus.omega * t).sin_cos();
    match formula {
        ModeFormula::FourTerm => {
            let c = four_term_coefficients(mode);
            let ep = Complex64::new(cp, sp);
            let em = Complex64::new(cm, sm);
            c[0] * ep * em + c[1] * ep.conj() * em + c[2] * ep * em.conj() + c[3] * (ep * em).conj()
        }
        ModeFormula::TrigonometricAsPrinted => {
            let a = mode.alphas();
            let re = (2.0 * a.plus_minus).cos() * sp * sm + cp * cm;
            let im = (2.0 * a.plus_initial).cos() * sp * cm - (2.0 * a.minus_initial).cos() * sp * cm;
            Complex64::new(re, im)
        }
    }
}

/// Signed weights of `e^{it(Ω₊+Ω₋)}`, `e^{it(-Ω₊+Ω₋)}`, `e^{it(Ω₊-Ω₋)}`,
/// `e^{-it(Ω₊+Ω₋)}` in the ground-state block factor. They sum to one.
pub(crate) fn four_term_coefficients(mode: &ModeData) -> [f64; 4] {
    let a = mode.alphas();
    let (s_pm, c_pm) = a.plus_minus.sin_cos();
    let (s_pi, c_pi) = a.plus_initial.sin_cos();
    let (s_mi, c_mi) = a.minus_initial.sin_cos();
    [
        -s_pm * c_pi * s_mi,
        c_pm * s_pi * s_mi,
        c_pm * c_pi * c_mi,
        s_pm * s_pi * c_mi,
    ]
}

/// Block overlaps `cos 2α` reused by the thermal factor.
#[derive(Debug, Clone, Copy)]
struct ThermalBlock {
    omega_plus: f64,
    omega_minus: f64,
    cos_pm: f64,
    cos_pi: f64,
    cos_mi: f64,
    /// `e^{-βΩ_i}`, always in `[0, 1]`.
    q: f64,
}

impl ThermalBlock {
    fn new(mode: &ModeData, beta: f64) -> Self {
        Self {
            omega_plus: mode.plus.omega,
            omega_minus: mode.minus.omega,
            cos_pm: (mode.plus.theta - mode.minus.theta).cos(),
            cos_pi: (mode.plus.theta - mode.initial.theta).cos(),
            cos_mi: (mode.minus.theta - mode.initial.theta).cos(),
            q: (-beta * mode.initial.omega).exp(),
        }
    }

    fn factor(&self, t: f64) -> Complex64 {
        let (sp, cp) = (self.omega_plus * t).sin_cos();
        let (sm, cm) = (self.omega_minus * t).sin_cos();
        let a = self.cos_pm * sp * sm + cp * cm;
        let b = self.cos_pi * sp * cm - self.cos_mi * sm * cp;
        let q = self.q;
        let z = (1.0 + q) * (1.0 + q);
        Complex64::new((1.0 + q * q) * a + 2.0 * q, (1.0 - q * q) * b) / z
    }
}

/// Complex thermal factor of one `(k, -k)` block at inverse temperature `beta`.
pub fn thermal_mode_factor(mode: &ModeData, beta: f64, t: f64) -> Complex64 {
    ThermalBlock::new(mode, beta).factor(t)
}

/// Thermal coherence factor `F_k(t)` of one block.
pub fn mode_decoherence_thermal(mode: &ModeData, temperature: f64, t: f64) -> Result<f64> {
    if !temperature.is_finite() || temperature <= 0.0 {
        return param(format!("temperature must be positive (got {temperature})"));
    }
    Ok(thermal_mode_factor(mode, 1.0 / temperature, t).norm())
}

/// Occupation probabilities `(p_empty, p_full)` of a single fermion mode with
/// energy `energy`.
fn occupation(energy: f64, init: &InitialState) -> (f64, f64) {
    match init.beta() {
        None => {
            if energy < 0.0 {
                (0.0, 1.0)
            } else {
                (1.0, 0.0)
            }
        }
        Some(beta) => {
            if energy >= 0.0 {
                let r = (-beta * energy).exp();
                (1.0 / (1.0 + r), r / (1.0 + r))
            } else {
                let r = (beta * energy).exp();
                (r / (1.0 + r), 1.0 / (1.0 + r))
            }
        }
    }
}

/// Factor of a self-paired mode (`x = 0` or `x = π`). Its occupation is
/// conserved by both branches, which differ in single-particle energy by `4g`.
pub fn unpaired_factor(x: f64, fields: &FieldSet, init: &InitialState, t: f64) -> Complex64 {
    let energy = 2.0 * (fields.lambda_i - x.cos());
    let (p0, p1) = occupation(energy, init);
    p0 + p1 * Complex64::from_polar(1.0, -4.0 * fields.g * t)
}

/// Parameters and samples of `D(t)` and `F(t) = |D(t)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoSeries {
    pub chain: ChainSpec,
    pub fields: FieldSet,
    pub init: InitialState,
    pub times: Vec<f64>,
    pub d_values: Vec<Complex64>,
    pub f_values: Vec<f64>,
    /// `Σ_k ln|D_k|`; `-∞` once any factor vanishes.
    pub log_f: Vec<f64>,
}

/// One sample of the factorised echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoPoint {
    pub d: Complex64,
    pub f: f64,
    pub log_f: f64,
}

#[derive(Debug, Clone)]
enum Blocks {
    Ground(Vec<([f64; 4], f64, f64)>),
    Thermal(Vec<ThermalBlock>),
}

/// Precomputed block data for fast repeated evaluation of `D(t)`.
#[derive(Debug, Clone)]
pub struct EchoEvaluator {
    /// `λ₊ = λ₋`: both branches evolve identically and `D ≡ 1`.
    trivial: bool,
    blocks: Blocks,
    /// `(p_empty, p_full)` for `x = 0` and `x = π`.
    unpaired: [(f64, f64); 2],
    g: f64,
}

impl EchoEvaluator {
    pub fn new(chain: &ChainSpec, fields: &FieldSet, init: &InitialState) -> Result<Self> {
        if let InitialState::Thermal { temperature } = init {
            if !temperature.is_finite() || *temperature <= 0.0 {
                return param(format!("temperature must be positive (got {temperature})"));
            }
        }
        let m = chain.modes();
        let paired = (1..m).map(|k| {
            let mode = Mode { k, x: chain.momentum(k) };
            ModeData::new(mode, chain, fields)
        });
        let blocks = match init.beta() {
            None => Blocks::Ground(
                paired
                    .map(|md| (four_term_coefficients(&md), md.plus.omega, md.minus.omega))
                    .collect(),
            ),
            Some(beta) => Blocks::Thermal(paired.map(|md| ThermalBlock::new(&md, beta)).collect()),
        };
        let unpaired = [0.0, std::f64::consts::PI]
            .map(|x| occupation(2.0 * (fields.lambda_i - x.cos()), init));
        let trivial = fields.lambda_plus == fields.lambda_minus;
        Ok(Self { trivial, blocks, unpaired, g: fields.g })
    }

    pub fn eval(&self, t: f64) -> EchoPoint {
        let mut acc = LogPolar::default();
        if self.trivial {
            return acc.finish();
        }
        match &self.blocks {
            Blocks::Ground(blocks) => {
                for &(c, wp, wm) in blocks {
                    let (sp, cp) = (wp * t).sin_cos();
                    let (sm, cm) = (wm * t).sin_cos();
                    let ep = Complex64::new(cp, sp);
                    let em = Complex64::new(cm, sm);
                    let both = ep * em;
                    let diff = ep * em.conj();
                    let d = c[0] * both + c[1] * diff.conj() + c[2] * diff + c[3] * both.conj();
                    acc.push(d);
                }
            }
            Blocks::Thermal(blocks) => {
                for b in blocks {
                    acc.push(b.factor(t));
                }
            }
        }
        let rotor = Complex64::from_polar(1.0, -4.0 * self.g * t);
        for &(p0, p1) in &self.unpaired {
            acc.push(p0 + p1 * rotor);
        }
        acc.finish()
    }
}

/// Running product kept as a log-modulus plus a unit phasor, so that
/// 10⁵ factors below one never underflow.
#[derive(Debug, Clone, Copy)]
struct LogPolar {
    log_mod: f64,
    phase: Complex64,
    count: u32,
}

impl Default for LogPolar {
    fn default() -> Self {
        Self { log_mod: 0.0, phase: Complex64::new(1.0, 0.0), count: 0 }
    }
}

impl LogPolar {
    #[inline]
    fn push(&mut self, d: Complex64) {
        let n2 = d.norm_sqr();
        if n2 == 0.0 {
            self.log_mod = f64::NEG_INFINITY;
            return;
        }
        self.log_mod += 0.5 * n2.ln();
        self.phase *= d / n2.sqrt();
        self.count += 1;
        if self.count.is_multiple_of(64) {
            self.phase /= self.phase.norm();
        }
    }

    fn finish(self) -> EchoPoint {
        let f = self.log_mod.exp();
        let d = if f == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase / self.phase.norm() * f
        };
        EchoPoint { d, f, log_f: self.log_mod }
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    match times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        Some(t) => param(format!("times must be finite and non-negative (got {t})")),
        None => Ok(()),
    }
}

/// Exact `D(t)` and `F(t)` on a time grid. Time points are evaluated in
/// parallel; each product runs over the modes in fixed order.
pub fn coherence_series(
    chain: &ChainSpec,
    fields: &FieldSet,
    init: &InitialState,
    times: &[f64],
) -> Result<EchoSeries> {
    check_times(times)?;
    let eval = EchoEvaluator::new(chain, fields, init)?;
    let points: Vec<EchoPoint> = times.par_iter().map(|&t| eval.eval(t)).collect();
    Ok(EchoSeries {
        chain: *chain,
        fields: *fields,
        init: *init,
        times: times.to_vec(),
        d_values: points.iter().map(|p| p.d).collect(),
        f_values: points.iter().map(|p| p.f).collect(),
        log_f: points.iter().map(|p| p.log_f).collect(),
    })
}

/// Reduced density matrix of the central spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,
}

impl QubitDensity {
    pub fn new(rho11: f64, rho22: f64, rho12: Complex64) -> Result<Self> {
        if rho11 < 0.0 || rho22 < 0.0 || (rho11 + rho22 - 1.0).abs() > 1e-12 {
            return param("qubit populations must be non-negative and sum to one");
        }
        if rho12.norm_sqr() > rho11 * rho22 + 1e-12 {
            return param("qubit coherence exceeds the positivity bound");
        }
        Ok(Self { rho11, rho22, rho12 })
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus_state() -> Self {
        Self { rho11: 0.5, rho22: 0.5, rho12: Complex64::new(0.5, 0.0) }
    }
}

/// Populations are conserved; the coherence is multiplied by `D(t)`.
pub fn reduced_density(rho0: &QubitDensity, d: Complex64) -> QubitDensity {
    QubitDensity { rho12: rho0.rho12 * d, ..*rho0 }
}

//! Self-checks run by `centralspin validate`.
//!
//! Each suite is a [`ValidationSuite`] trait object in a [`SuiteRegistry`];
//! randomised draws come from a ChaCha stream seeded with [`DEFAULT_SEED`]
//! unless another seed is given, so reports are reproducible.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use centralspin::echo::{mode_decoherence_ground, thermal_mode_factor};
use centralspin::gaussian::{envelope_model, walk_stats, EnvelopeMethod, WidthMethod};
use centralspin::oracle::{block_propagator, fock_coherence_ed, mode_factor_oracle, PropagatorMethod};
use centralspin::spectrum::{spectral_sums_closed, spectral_sums_direct, Mode};
use centralspin::{coherence_series, ChainSpec, FieldSet, InitialState, ModeData, ModeFormula};

use crate::csv::fmt_g;

pub const DEFAULT_SEED: u64 = 0x00C0_FFEE;

/// One checked quantity: passes when `observed <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub tolerance: f64,
    pub observed: f64,
    /// Where the worst case occurred.
    pub detail: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.observed <= self.tolerance
    }
}

pub trait ValidationSuite: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, seed: u64) -> Vec<Check>;
}

/// Running maximum that remembers where it was attained.
struct Worst {
    value: f64,
    detail: String,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0, detail: "-".into() }
    }

    fn update(&mut self, value: f64, detail: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() || self.detail == "-" {
            self.value = value;
            self.detail = detail();
        }
    }

    fn check(self, suite: &'static str, name: &str, tolerance: f64) -> Check {
        Check { suite, name: name.into(), tolerance, observed: self.value, detail: self.detail }
    }
}

fn mode(chain: &ChainSpec, fields: &FieldSet, k: usize) -> ModeData {
    ModeData::new(Mode { k, x: chain.momentum(k) }, chain, fields)
}

fn random_setup(rng: &mut ChaCha8Rng, max_half: usize, g_max: f64) -> (ChainSpec, FieldSet) {
    let n = 2 * rng.gen_range(2..max_half);
    let gamma = if rng.gen_bool(0.5) { 1.0 } else { rng.gen_range(0.2..1.5) };
    let chain = ChainSpec::new(n, gamma).expect("valid chain");
    let fields = FieldSet::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..g_max))
        .expect("valid fields");
    (chain, fields)
}

fn describe(chain: &ChainSpec, fields: &FieldSet) -> String {
    format!(
        "N={} gamma={} lambda_i={} lambda_e={} g={}",
        chain.sites(),
        fmt_g(chain.gamma()),
        fmt_g(fields.lambda_i),
        fmt_g(fields.lambda_e),
        fmt_g(fields.g)
    )
}

struct Identity;

impl ValidationSuite for Identity {
    fn name(&self) -> &'static str {
        "identity"
    }

    fn run(&self, seed: u64) -> Vec<Check> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<(ChainSpec, FieldSet, InitialState)> = (0..1000)
            .map(|_| {
                let n = 2 * rng.gen_range(2..200);
                let gamma = if rng.gen_bool(0.5) { 1.0 } else { rng.gen_range(-1.5..1.5) };
                let chain = ChainSpec::new(n, gamma).expect("valid chain");
                let fields = FieldSet::new(
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(0.0..600.0),
                )
                .expect("valid fields");
                let init = if rng.gen_bool(0.5) {
                    InitialState::Ground
                } else {
                    InitialState::thermal(rng.gen_range(0.01..20.0)).expect("valid temperature")
                };
                (chain, fields, init)
            })
            .collect();
        let times: Vec<f64> = (0..=20).map(f64::from).collect();
        let results: Vec<(f64, f64)> = draws
            .par_iter()
            .map(|(chain, fields, init)| {
                let at_zero = coherence_series(chain, fields, init, &[0.0]).expect("valid draw");
                let free = FieldSet::new(fields.lambda_i, fields.lambda_e, 0.0).expect("valid fields");
                let flat = coherence_series(chain, &free, init, &times).expect("valid draw");
                let dev = flat.f_values.iter().map(|f| (f - 1.0).abs()).fold(0.0, f64::max);
                ((at_zero.f_values[0] - 1.0).abs(), dev)
            })
            .collect();
        let mut origin = Worst::new();
        let mut uncoupled = Worst::new();
        for ((chain, fields, init), (a, b)) in draws.iter().zip(results) {
            origin.update(a, || format!("{} init={init:?}", describe(chain, fields)));
            uncoupled.update(b, || format!("{} init={init:?} (g set to 0)", describe(chain, fields)));
        }
        vec![
            origin.check(self.name(), "|F(0) - 1| over 1000 draws", 1e-12),
            uncoupled.check(self.name(), "|F(t) - 1| at g = 0, t in [0, 20]", 1e-12),
        ]
    }
}

struct Block;

impl ValidationSuite for Block {
    fn name(&self) -> &'static str {
        "block"
    }

    fn run(&self, seed: u64) -> Vec<Check> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB10C);
        let mut ground = Worst::new();
        let mut printed = Worst::new();
        for _ in 0..500 {
            let (chain, fields) = random_setup(&mut rng, 50, 1.0);
            let k = rng.gen_range(1..=chain.modes());
            let t = rng.gen_range(0.0..10.0);
            let m = mode(&chain, &fields, k);
            let o = mode_factor_oracle(k, &chain, &fields, &InitialState::Ground, t).expect("valid mode");
            let d = mode_decoherence_ground(&m, t, ModeFormula::FourTerm);
            ground.update((d - o).norm(), || format!("k={k} t={} {}", fmt_g(t), describe(&chain, &fields)));
            let p = mode_decoherence_ground(&m, t, ModeFormula::TrigonometricAsPrinted);
            printed.update((p.norm() - o.norm()).abs(), || format!("k={k} t={} {}", fmt_g(t), describe(&chain, &fields)));
        }
        let mut propagators = Worst::new();
        let mut unitarity = Worst::new();
        for _ in 0..200 {
            let (chain, _) = random_setup(&mut rng, 50, 1.0);
            let k = rng.gen_range(1..=chain.modes());
            let lambda = rng.gen_range(-2.0..2.0);
            let t = rng.gen_range(0.0..10.0);
            let a = block_propagator(k, lambda, &chain, t, PropagatorMethod::Analytic).expect("valid mode");
            let n = block_propagator(k, lambda, &chain, t, PropagatorMethod::Numeric).expect("valid mode");
            let where_ = || format!("k={k} lambda={} t={} N={} gamma={}", fmt_g(lambda), fmt_g(t), chain.sites(), fmt_g(chain.gamma()));
            propagators.update((a - n).iter().map(|z| z.norm()).fold(0.0, f64::max), where_);
            let id = n * n.adjoint();
            let dev = id
                .iter()
                .enumerate()
                .map(|(i, z)| (z - if i % 5 == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).norm())
                .fold(0.0, f64::max);
            unitarity.update(dev, where_);
        }
        let mut printed_check = printed.check(self.name(), "printed trigonometric form vs oracle (informational)", f64::INFINITY);
        printed_check.detail = format!("largest |F| gap at {}", printed_check.detail);
        vec![
            ground.check(self.name(), "four-term D_k vs 4x4 oracle, 500 cases", 1e-10),
            propagators.check(self.name(), "analytic vs numeric propagator, 200 cases", 1e-10),
            unitarity.check(self.name(), "propagator unitarity", 1e-12),
            printed_check,
        ]
    }
}

struct Fock;

impl ValidationSuite for Fock {
    fn name(&self) -> &'static str {
        "fock"
    }

    fn run(&self, _seed: u64) -> Vec<Check> {
        let times = [0.0, 0.5, 1.0, 2.0, 5.0];
        let chain = ChainSpec::ising(8).expect("valid chain");
        let mut checks = Vec::new();
        for (label, init) in [("ground", InitialState::Ground), ("thermal T=1", InitialState::Thermal { temperature: 1.0 })] {
            let mut worst = Worst::new();
            for (li, le, g) in [(0.5, 1.0, 0.05), (1.0, 1.0, 0.25)] {
                let fields = FieldSet::new(li, le, g).expect("valid fields");
                let ed = fock_coherence_ed(&chain, &fields, &init, &times).expect("small chain");
                let product = coherence_series(&chain, &fields, &init, &times).expect("valid parameters");
                for ((t, a), b) in times.iter().zip(&ed.series.f_values).zip(&product.f_values) {
                    worst.update((a - b).abs(), || format!("t={} {}", fmt_g(*t), describe(&chain, &fields)));
                }
                if let Some(d) = ed.degeneracy {
                    log::warn!("degenerate ED ground state at {}: gap {:e}", describe(&chain, &fields), d.gap);
                }
            }
            checks.push(worst.check(self.name(), &format!("N=8 ED vs product, {label}"), 1e-8));
        }
        checks
    }
}

struct Thermal;

impl ValidationSuite for Thermal {
    fn name(&self) -> &'static str {
        "thermal"
    }

    fn run(&self, seed: u64) -> Vec<Check> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7E);
        let mut block = Worst::new();
        for _ in 0..300 {
            let (chain, fields) = random_setup(&mut rng, 30, 1.0);
            let k = rng.gen_range(1..chain.modes());
            let temp = rng.gen_range(0.05..10.0);
            let t = rng.gen_range(0.0..10.0);
            let init = InitialState::Thermal { temperature: temp };
            let o = mode_factor_oracle(k, &chain, &fields, &init, t).expect("valid mode");
            let d = thermal_mode_factor(&mode(&chain, &fields, k), 1.0 / temp, t);
            block.update((d - o).norm(), || format!("k={k} T={} t={} {}", fmt_g(temp), fmt_g(t), describe(&chain, &fields)));
        }

        let mut cold = Worst::new();
        let times: Vec<f64> = (0..40).map(|i| f64::from(i) * 0.5).collect();
        for li in [0.0, 0.5, 1.5] {
            let chain = ChainSpec::ising(200).expect("valid chain");
            let fields = FieldSet::new(li, 1.0, 0.05).expect("valid fields");
            // βΩ_min > 40 with Ω_min ≥ 2|1 - |λ_i||
            let temp = 2.0 * (1.0 - f64::abs(li)).abs() / 50.0;
            let init = InitialState::thermal(temp).expect("valid temperature");
            let g = coherence_series(&chain, &fields, &InitialState::Ground, &times).expect("valid parameters");
            let c = coherence_series(&chain, &fields, &init, &times).expect("valid parameters");
            for (a, b) in g.f_values.iter().zip(&c.f_values) {
                cold.update((a - b).abs(), || format!("T={} {}", fmt_g(temp), describe(&chain, &fields)));
            }
        }
        vec![
            block.check(self.name(), "thermal block factor vs 4x4 oracle, 300 cases", 1e-10),
            cold.check(self.name(), "thermal F -> ground F at beta*Omega_min > 40", 1e-8),
        ]
    }
}

struct Widths;

impl ValidationSuite for Widths {
    fn name(&self) -> &'static str {
        "widths"
    }

    fn run(&self, _seed: u64) -> Vec<Check> {
        let mut envelope = Worst::new();
        let mut frequency = Worst::new();
        let chain = ChainSpec::ising(800).expect("valid chain");
        for li in [0.0, 0.5, 1.5] {
            let fields = FieldSet::new(li, 1.0, 500.0).expect("valid fields");
            let d = envelope_model(&chain, &fields, EnvelopeMethod::Direct).expect("strong coupling");
            let c = envelope_model(&chain, &fields, EnvelopeMethod::ClosedIsing).expect("Ising chain");
            envelope.update(((d.s2_tilde - c.s2_tilde) / c.s2_tilde).abs(), || describe(&chain, &fields));
            frequency.update((d.e_freq / 2000.0 - 1.0).abs(), || describe(&chain, &fields));
        }

        let mut sums = Worst::new();
        let chain = ChainSpec::ising(10_000).expect("valid chain");
        for li in [0.0, 0.5, 1.0, 1.5, 2.0] {
            let d = spectral_sums_direct(li, &chain);
            let c = spectral_sums_closed(li, &chain).expect("Ising chain");
            for (name, a, b) in [("s0", d.s0, c.s0), ("s1", d.s1, c.s1), ("s2", d.s2, c.s2)] {
                sums.update(((a - b) / b).abs(), || format!("{name} at lambda_i={li} M=5000"));
            }
        }

        let mut walk = Worst::new();
        let chain = ChainSpec::ising(2000).expect("valid chain");
        let fields = FieldSet::new(0.5, 1.0, 0.01).expect("valid fields");
        let direct = walk_stats(&chain, &fields, WidthMethod::Direct).expect("any chain");
        let leading = walk_stats(&chain, &fields, WidthMethod::Leading).expect("any chain");
        walk.update(((direct.s2 - leading.s2) / leading.s2).abs(), || describe(&chain, &fields));

        vec![
            envelope.check(self.name(), "envelope s2_tilde direct vs closed, g=500", 0.02),
            frequency.check(self.name(), "peak frequency E vs 4g, g=500", 0.005),
            sums.check(self.name(), "spectral sums direct vs closed, M=5000", 0.01),
            walk.check(self.name(), "direct vs leading s^2, g=0.01", 0.05),
        ]
    }
}

#[derive(Clone)]
pub struct SuiteRegistry {
    suites: BTreeMap<&'static str, Arc<dyn ValidationSuite>>,
}

impl SuiteRegistry {
    pub fn builtin() -> Self {
        let mut r = Self { suites: BTreeMap::new() };
        r.register(Arc::new(Identity));
        r.register(Arc::new(Block));
        r.register(Arc::new(Fock));
        r.register(Arc::new(Thermal));
        r.register(Arc::new(Widths));
        r
    }

    pub fn register(&mut self, suite: Arc<dyn ValidationSuite>) {
        self.suites.insert(suite.name(), suite);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.keys().copied().collect()
    }

    /// Runs the named suite, or every suite for `"all"`.
    pub fn run(&self, name: &str, seed: u64) -> Option<Report> {
        let selected: Vec<&Arc<dyn ValidationSuite>> = if name == "all" {
            self.suites.values().collect()
        } else {
            vec![self.suites.get(name)?]
        };
        let checks = selected.iter().flat_map(|s| s.run(seed)).collect();
        Some(Report { seed, checks })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut s = format!("validation (seed {})\n", self.seed);
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {}: {}  observed={} tol={}  at {}",
                if c.passed() { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                fmt_g(c.observed),
                fmt_g(c.tolerance),
                c.detail
            );
        }
        match self.checks.iter().find(|c| !c.passed()) {
            Some(c) => {
                let _ = writeln!(s, "first failure: {}: {} at {}", c.suite, c.name, c.detail);
            }
            None => {
                let _ = writeln!(s, "all {} checks passed", self.checks.len());
            }
        }
        s
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use centralspin::echo::mode_decoherence_ground;
use centralspin::gaussian::{
    envelope_model, gaussian_fit, gaussian_fit_closed, peak_samples, walk_stats, weak_gaussian_f, EnvelopeMethod,
    WidthMethod, FIT_WINDOW,
};
use centralspin::oracle::{fock_coherence_ed, mode_factor_oracle};
use centralspin::spectrum::{spectral_sums_closed, spectral_sums_direct, Mode};
use centralspin::{coherence_series, ChainSpec, FieldSet, InitialState, ModeData, ModeFormula};
use centralspin_cli::commands::timeseries_csv;
use centralspin_cli::RunConfig;

const SEED: u64 = 20_240_601;

/// Largest `F` over `t ∈ [10, 100]` at `N = 100`, frozen from the first validated run.
const GOLDEN_REVIVAL_N100: f64 = 0.862_418_419_6;
/// `(T*, F(t*, T*))` of the thermal scan, frozen from the first validated run.
const GOLDEN_THERMAL_PEAK: (f64, f64) = (0.56, 0.618_814_570_8);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: String) -> Outcome {
    Outcome { pass, summary }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn mode(chain: &ChainSpec, fields: &FieldSet, k: usize) -> ModeData {
    ModeData::new(Mode { k, x: chain.momentum(k) }, chain, fields)
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let times: Vec<f64> = (0..=40).map(|i| f64::from(i) * 0.5).collect();
    let (mut origin, mut free) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let chain = ChainSpec::new(2 * rng.gen_range(2..200), rng.gen_range(-1.5..1.5)).unwrap();
        let li = rng.gen_range(-2.0..2.0);
        let le = rng.gen_range(-2.0..2.0);
        let fields = FieldSet::new(li, le, rng.gen_range(0.0..600.0)).unwrap();
        let init = if rng.gen_bool(0.5) {
            InitialState::Ground
        } else {
            InitialState::thermal(rng.gen_range(0.01..20.0)).unwrap()
        };
        let s = coherence_series(&chain, &fields, &init, &[0.0]).unwrap();
        origin = origin.max((s.f_values[0] - 1.0).abs());
        let uncoupled = FieldSet::new(li, le, 0.0).unwrap();
        let s = coherence_series(&chain, &uncoupled, &init, &times).unwrap();
        free = s.f_values.iter().fold(free, |m, f| m.max((f - 1.0).abs()));
    }
    let elapsed = start.elapsed();
    outcome(
        origin <= 1e-12 && free <= 1e-12 && within(elapsed, 10.0),
        format!("max|F(0)-1| = {origin:.2e}, max|F-1| at g=0 = {free:.2e} (tol 1e-12), {elapsed:.2?}"),
    )
}

fn block_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let (mut worst, mut printed_off) = (0.0f64, 0usize);
    for _ in 0..500 {
        let chain = ChainSpec::ising(2 * rng.gen_range(2..100)).unwrap();
        let fields = FieldSet::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..1.0)).unwrap();
        let k = rng.gen_range(1..=chain.modes());
        let t = rng.gen_range(0.0..10.0);
        let m = mode(&chain, &fields, k);
        let oracle = mode_factor_oracle(k, &chain, &fields, &InitialState::Ground, t).unwrap();
        worst = worst.max((mode_decoherence_ground(&m, t, ModeFormula::FourTerm) - oracle).norm());
        let printed = mode_decoherence_ground(&m, t, ModeFormula::TrigonometricAsPrinted);
        if (printed.norm() - oracle.norm()).abs() > 1e-10 {
            printed_off += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && within(elapsed, 10.0),
        format!(
            "max|D_k - oracle| = {worst:.2e} (tol 1e-10); printed trigonometric variant off in {printed_off}/500, {elapsed:.2?}"
        ),
    )
}

fn fock_oracle() -> Outcome {
    let start = Instant::now();
    let chain = ChainSpec::ising(8).unwrap();
    let times = [0.0, 0.5, 1.0, 2.0, 5.0];
    let mut worst = [0.0f64; 2];
    for (li, le, g) in [(0.5, 1.0, 0.05), (1.0, 1.0, 0.25)] {
        let fields = FieldSet::new(li, le, g).unwrap();
        for (slot, init) in [InitialState::Ground, InitialState::thermal(1.0).unwrap()].iter().enumerate() {
            let ed = fock_coherence_ed(&chain, &fields, init, &times).unwrap();
            let product = coherence_series(&chain, &fields, init, &times).unwrap();
            for (a, b) in ed.series.f_values.iter().zip(&product.f_values) {
                worst[slot] = worst[slot].max((a - b).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst[0] <= 1e-8 && worst[1] <= 1e-8 && within(elapsed, 60.0),
        format!("ground {:.2e}, thermal {:.2e} (tol 1e-8), {elapsed:.2?}", worst[0], worst[1]),
    )
}

fn spectral_closed_forms() -> Outcome {
    let chain = ChainSpec::ising(10_000).unwrap();
    let mut worst = 0.0f64;
    for li in [0.0, 0.5, 1.0, 1.5, 2.0] {
        let d = spectral_sums_direct(li, &chain);
        let c = spectral_sums_closed(li, &chain).unwrap();
        worst = worst.max(rel(d.s0, c.s0)).max(rel(d.s1, c.s1)).max(rel(d.s2, c.s2));
    }
    outcome(worst <= 0.01, format!("max relative error {worst:.2e} over s0, s1, s2 (tol 1e-2)"))
}

fn weak_gaussian() -> Outcome {
    let start = Instant::now();
    let chain = ChainSpec::ising(100_000).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for li in [0.5, 1.5] {
        let fields = FieldSet::new(li, 1.0, 0.05).unwrap();
        let leading = walk_stats(&chain, &fields, WidthMethod::Leading).unwrap().s2;
        let closed = walk_stats(&chain, &fields, WidthMethod::ClosedIsing).unwrap().s2;
        let horizon = 1.2 * (2.0 * 100f64.ln() / closed).sqrt();
        let times: Vec<f64> = (0..=500).map(|i| horizon * f64::from(i) / 500.0).collect();
        let exact = coherence_series(&chain, &fields, &InitialState::Ground, &times).unwrap();
        let (mut dev_leading, mut dev_closed) = (0.0f64, 0.0f64);
        for (&t, &f) in times.iter().zip(&exact.f_values) {
            if f < 0.01 {
                break;
            }
            dev_leading = dev_leading.max((f - weak_gaussian_f(t, leading)).abs());
            dev_closed = dev_closed.max((f - weak_gaussian_f(t, closed)).abs());
        }
        let fit = gaussian_fit(&times, &exact.f_values, FIT_WINDOW).unwrap();
        let fit_err = rel(fit.s2, closed);
        pass &= dev_leading <= 0.05 && dev_closed <= 0.05 && fit_err <= 0.05;
        parts.push(format!(
            "lambda_i={li}: |dF| sum-form {dev_leading:.4}, closed {dev_closed:.4}; fit s2 {:.2} vs {closed:.2} ({:.2}%)",
            fit.s2,
            100.0 * fit_err
        ));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, 30.0);
    outcome(pass, format!("{}; {elapsed:.2?}", parts.join("; ")))
}

fn weak_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let chain = ChainSpec::ising(2000).unwrap();
    let g = 0.01;
    let (mut var_err, mut mean_err) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let fields = FieldSet::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), g).unwrap();
        let direct = walk_stats(&chain, &fields, WidthMethod::Direct).unwrap();
        let law = 16.0 * g * g * spectral_sums_direct(fields.lambda_i, &chain).s0;
        var_err = var_err.max(rel(direct.s2, law));
        let modes = centralspin::spectrum::mode_data(&chain, &fields);
        for (step, m) in direct.steps.iter().zip(&modes) {
            mean_err = mean_err.max((step.mean - 4.0 * g * m.initial.theta.cos()).abs());
        }
    }
    outcome(
        var_err <= 0.05 && mean_err <= 0.05 * g,
        format!("max rel s2 error {var_err:.2e} (tol 5e-2), max |a_k - 4g cos| {mean_err:.2e} (tol {:.0e})", 0.05 * g),
    )
}

fn strong_envelope() -> Outcome {
    let start = Instant::now();
    let chain = ChainSpec::ising(800).unwrap();
    let g = 500.0;
    let mut pass = true;
    let mut parts = Vec::new();
    for li in [0.5, 1.5] {
        let fields = FieldSet::new(li, 1.0, g).unwrap();
        let direct = envelope_model(&chain, &fields, EnvelopeMethod::Direct).unwrap();
        let closed = envelope_model(&chain, &fields, EnvelopeMethod::ClosedIsing).unwrap();
        let e_err = rel(direct.e_freq, 4.0 * g);
        let width_err = rel(direct.s2_tilde, closed.s2_tilde);
        let t_max = (2.0 * 100f64.ln() / closed.s2_tilde).sqrt();
        let (t, f) = peak_samples(&chain, &fields, &direct, t_max, 4000).unwrap();
        let fit = gaussian_fit_closed(&t, &f, (0.1, 0.9)).unwrap();
        let fit_err = rel(fit.s2, closed.s2_tilde);
        pass &= e_err <= 0.005 && width_err <= 0.02 && fit_err <= 0.10;
        parts.push(format!(
            "lambda_i={li}: (a) E/4g-1 {e_err:.1e} (b) {:.2}% (c) fit {:.2}% over {} peaks",
            100.0 * width_err,
            100.0 * fit_err,
            fit.samples
        ));
    }
    let elapsed = start.elapsed();
    pass &= within(elapsed, 30.0);
    outcome(pass, format!("{}; {elapsed:.2?}", parts.join("; ")))
}

fn width_scaling() -> Outcome {
    let chain = ChainSpec::ising(800).unwrap();
    let s_tilde = |g: f64| {
        let fields = FieldSet::new(0.5, 1.0, g).unwrap();
        envelope_model(&chain, &fields, EnvelopeMethod::ClosedIsing).unwrap().s2_tilde
    };
    let ratio = s_tilde(1000.0) / s_tilde(500.0);
    let chain = ChainSpec::ising(10_000).unwrap();
    let s2 = |l2: f64| {
        let fields = FieldSet::new(l2.sqrt(), 1.0, 0.05).unwrap();
        walk_stats(&chain, &fields, WidthMethod::ClosedIsing).unwrap().s2
    };
    let h = 1e-4;
    let left = (s2(1.0) - s2(1.0 - h)) / h;
    let right = (s2(1.0 + h) - s2(1.0)) / h;
    let jump = (right - left).abs() > 0.1 * left.abs().max(right.abs());
    outcome(
        ratio == 0.25 && jump,
        format!("s2_tilde(2g)/s2_tilde(g) = {ratio}; d s2/d lambda_i^2 left {left:.4}, right {right:.4}"),
    )
}

fn late_max(n: usize) -> f64 {
    let chain = ChainSpec::ising(n).unwrap();
    let fields = FieldSet::new(1.0, 1.0, 0.05).unwrap();
    let times: Vec<f64> = (1000..=10_000).map(|i| f64::from(i) * 0.01).collect();
    let s = coherence_series(&chain, &fields, &InitialState::Ground, &times).unwrap();
    s.f_values.iter().cloned().fold(0.0, f64::max)
}

fn revivals() -> Outcome {
    let small = late_max(100);
    let large = late_max(10_000);
    let golden_ok = (small - GOLDEN_REVIVAL_N100).abs() <= 1e-6;
    outcome(
        small > 5.0 * large && golden_ok,
        format!("max F on [10,100]: N=100 {small:.10}, N=10^4 {large:.3e}; golden {GOLDEN_REVIVAL_N100}"),
    )
}

fn thermal_peak() -> Outcome {
    let chain = ChainSpec::ising(200).unwrap();
    let fields = FieldSet::new(1.0, 1.0, 0.05).unwrap();
    // first crossing of F = 1/2 by the ground-state curve
    let f_ground = |t: f64| coherence_series(&chain, &fields, &InitialState::Ground, &[t]).unwrap().f_values[0];
    let (mut lo, mut hi) = (0.0, 0.01);
    while f_ground(hi) > 0.5 {
        lo = hi;
        hi += 0.01;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f_ground(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_star = 0.5 * (lo + hi);
    let f_at = |temp: f64| {
        let init = InitialState::thermal(temp).unwrap();
        coherence_series(&chain, &fields, &init, &[t_star]).unwrap().f_values[0]
    };
    let cold = f_at(0.01);
    let (t_peak, f_peak) = (1..=2000)
        .map(|i| f64::from(i) * 0.01)
        .map(|temp| (temp, f_at(temp)))
        .fold((0.0, f64::MIN), |best, p| if p.1 > best.1 { p } else { best });
    let golden_ok = (t_peak - GOLDEN_THERMAL_PEAK.0).abs() < 1e-9 && (f_peak - GOLDEN_THERMAL_PEAK.1).abs() <= 1e-6;
    outcome(
        f_peak > cold && golden_ok,
        format!("t* = {t_star:.6}: F(T=0.01) = {cold:.6}, max at T* = {t_peak:.2} with F = {f_peak:.10}; golden {GOLDEN_THERMAL_PEAK:?}"),
    )
}

fn performance() -> Outcome {
    let mut cfg = RunConfig::default();
    cfg.apply_text("n=100000\ng=0.05\nlambda_i=0.5\nlambda_e=1\nt_max=1\nt_steps=500\napprox=weak,closed")
        .unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let first = pool.install(|| timeseries_csv(&cfg)).unwrap();
    let elapsed = start.elapsed();
    let second = pool.install(|| timeseries_csv(&cfg)).unwrap();
    let identical = first.as_bytes() == second.as_bytes();
    outcome(
        within(elapsed, 5.0) && identical,
        format!("N=10^5 x 500 points, 1 thread: {elapsed:.2?}; identical output: {identical}"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("identity suite", identity_suite),
        ("block-oracle equivalence", block_oracle),
        ("Fock ED equivalence", fock_oracle),
        ("spectral closed forms", spectral_closed_forms),
        ("weak-coupling Gaussian", weak_gaussian),
        ("weak-coupling asymptotic laws", weak_laws),
        ("strong-coupling envelope", strong_envelope),
        ("width scaling laws", width_scaling),
        ("revival structure", revivals),
        ("thermal non-monotonicity", thermal_peak),
        ("performance and determinism", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.summary);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

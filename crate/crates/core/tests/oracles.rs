use centralspin::echo::{mode_decoherence_ground, thermal_mode_factor};
use centralspin::oracle::{fock_coherence_ed, fock_spectrum, mode_factor_oracle};
use centralspin::spectrum::{mode_data, Dispersion, Mode};
use centralspin::{coherence_series, ChainSpec, FieldSet, InitialState, ModeData, ModeFormula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn mode(chain: &ChainSpec, fields: &FieldSet, k: usize) -> ModeData {
    ModeData::new(Mode { k, x: chain.momentum(k) }, chain, fields)
}

#[test]
fn four_term_form_matches_block_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let chain = ChainSpec::new(2 * rng.gen_range(2..50), rng.gen_range(0.2..1.5)).unwrap();
        let fields = FieldSet::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..1.0)).unwrap();
        let k = rng.gen_range(1..=chain.modes());
        let t = rng.gen_range(0.0..10.0);
        let analytic = mode_decoherence_ground(&mode(&chain, &fields, k), t, ModeFormula::FourTerm);
        let oracle = mode_factor_oracle(k, &chain, &fields, &InitialState::Ground, t).unwrap();
        worst = worst.max((analytic - oracle).norm());
    }
    assert!(worst <= 1e-10, "worst deviation {worst:e}");
}

#[test]
fn block_oracle_example_point() {
    let chain = ChainSpec::ising(8).unwrap();
    let fields = FieldSet::new(1.0, 1.0, 0.05).unwrap();
    let m = mode(&chain, &fields, 1);
    let oracle = mode_factor_oracle(1, &chain, &fields, &InitialState::Ground, 1.0).unwrap();
    assert!((mode_decoherence_ground(&m, 1.0, ModeFormula::FourTerm) - oracle).norm() < 1e-10);

    let init = InitialState::thermal(1.0).unwrap();
    let oracle = mode_factor_oracle(1, &chain, &fields, &init, 1.0).unwrap();
    assert!((thermal_mode_factor(&m, 1.0, 1.0) - oracle).norm() < 1e-10);
}

#[test]
fn thermal_factor_matches_block_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..300 {
        let chain = ChainSpec::new(2 * rng.gen_range(2..30), rng.gen_range(0.2..1.5)).unwrap();
        let fields = FieldSet::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..1.0)).unwrap();
        let k = rng.gen_range(1..chain.modes());
        let temp = rng.gen_range(0.05..10.0);
        let t = rng.gen_range(0.0..10.0);
        let init = InitialState::thermal(temp).unwrap();
        let analytic = thermal_mode_factor(&mode(&chain, &fields, k), 1.0 / temp, t);
        let oracle = mode_factor_oracle(k, &chain, &fields, &init, t).unwrap();
        assert!((analytic - oracle).norm() < 1e-10, "k={k} T={temp} t={t}");
    }
}

#[test]
fn printed_trigonometric_form_is_confirmed_only_where_it_equals_canonical() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut disagreements = 0;
    for _ in 0..300 {
        let chain = ChainSpec::ising(2 * rng.gen_range(2..30)).unwrap();
        let fields = FieldSet::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.01..1.0)).unwrap();
        let k = rng.gen_range(1..chain.modes());
        let t = rng.gen_range(0.1..10.0);
        let m = mode(&chain, &fields, k);
        let oracle = mode_factor_oracle(k, &chain, &fields, &InitialState::Ground, t).unwrap().norm();
        let canonical = mode_decoherence_ground(&m, t, ModeFormula::FourTerm).norm();
        let printed = mode_decoherence_ground(&m, t, ModeFormula::TrigonometricAsPrinted).norm();
        assert!((canonical - oracle).abs() < 1e-10);
        if (printed - oracle).abs() < 1e-10 {
            assert!((printed - canonical).abs() < 1e-10);
        } else {
            disagreements += 1;
        }
    }
    assert!(disagreements > 0, "the printed form was expected to differ somewhere");
}

#[test]
fn cold_thermal_oracle_is_ground_oracle() {
    let chain = ChainSpec::ising(10).unwrap();
    let fields = FieldSet::new(0.4, 1.2, 0.2).unwrap();
    // Ω_min ≥ 2(1 - 0.4), so βΩ_min > 40 at T = 0.02
    let cold = InitialState::thermal(0.02).unwrap();
    for k in 1..=4 {
        for t in [0.5, 2.0, 7.0] {
            let g = mode_factor_oracle(k, &chain, &fields, &InitialState::Ground, t).unwrap();
            let c = mode_factor_oracle(k, &chain, &fields, &cold, t).unwrap();
            assert!((g - c).norm() < 1e-8);
        }
    }
}

const TIMES: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

fn compare_with_ed(chain: &ChainSpec, fields: &FieldSet, init: &InitialState) -> f64 {
    let ed = fock_coherence_ed(chain, fields, init, &TIMES).unwrap();
    let product = coherence_series(chain, fields, init, &TIMES).unwrap();
    ed.series
        .f_values
        .iter()
        .zip(&product.f_values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[test]
fn fock_ed_matches_product_ground() {
    let chain = ChainSpec::ising(8).unwrap();
    for (li, le, g) in [(0.5, 1.0, 0.05), (1.0, 1.0, 0.25), (1.5, 0.7, 0.4)] {
        let fields = FieldSet::new(li, le, g).unwrap();
        let dev = compare_with_ed(&chain, &fields, &InitialState::Ground);
        assert!(dev <= 1e-8, "({li}, {le}, {g}): {dev:e}");
    }
}

#[test]
fn fock_ed_matches_product_thermal() {
    let chain = ChainSpec::ising(8).unwrap();
    let init = InitialState::thermal(1.0).unwrap();
    for (li, le, g) in [(0.5, 1.0, 0.05), (1.0, 1.0, 0.25)] {
        let fields = FieldSet::new(li, le, g).unwrap();
        let dev = compare_with_ed(&chain, &fields, &init);
        assert!(dev <= 1e-8, "({li}, {le}, {g}): {dev:e}");
    }
}

#[test]
fn fock_ed_matches_product_anisotropic() {
    let chain = ChainSpec::new(10, 0.6).unwrap();
    let fields = FieldSet::new(0.3, 0.8, 0.15).unwrap();
    for init in [InitialState::Ground, InitialState::thermal(0.7).unwrap()] {
        assert!(compare_with_ed(&chain, &fields, &init) <= 1e-8);
    }
}

#[test]
fn fock_ed_cold_limit() {
    let chain = ChainSpec::ising(8).unwrap();
    let fields = FieldSet::new(0.5, 1.0, 0.05).unwrap();
    let ground = fock_coherence_ed(&chain, &fields, &InitialState::Ground, &TIMES).unwrap();
    let cold = fock_coherence_ed(&chain, &fields, &InitialState::thermal(0.02).unwrap(), &TIMES).unwrap();
    for (a, b) in ground.series.f_values.iter().zip(&cold.series.f_values) {
        assert!((a - b).abs() < 1e-8);
    }
}

/// Many-body levels assembled from single-particle data: each paired block
/// contributes `c - Ω`, `c`, `c` or `c + Ω` around `c = -2(λ + cos x)`, each
/// unpaired mode contributes `0` or `-2(λ + cos x)`, on top of `λN`.
fn quasiparticle_levels(chain: &ChainSpec, lambda: f64) -> Vec<f64> {
    let n = chain.sites();
    let m = chain.modes();
    let mut levels = vec![lambda * n as f64];
    let mut extend = |options: Vec<f64>| {
        levels = levels.iter().flat_map(|e| options.iter().map(move |o| e + o)).collect();
    };
    for k in 1..m {
        // the ring's momentum ±x pairs with the (π - x) mode of the dispersion
        let x = chain.momentum(k);
        let d = Dispersion::at(lambda, chain.gamma(), PI - x);
        let c = -2.0 * d.epsilon;
        extend(vec![c - d.omega, c, c, c + d.omega]);
    }
    for x in [0.0, PI] {
        extend(vec![0.0, -2.0 * (lambda + f64::cos(x))]);
    }
    levels.sort_by(f64::total_cmp);
    levels
}

#[test]
fn fock_spectrum_is_quasiparticle_sums() {
    for gamma in [1.0, 0.4] {
        let chain = ChainSpec::new(8, gamma).unwrap();
        for lambda in [0.5, 1.0, 1.5] {
            let ed = fock_spectrum(&chain, lambda).unwrap();
            let qp = quasiparticle_levels(&chain, lambda);
            assert_eq!(ed.len(), qp.len());
            for (a, b) in ed.iter().zip(&qp) {
                assert!((a - b).abs() < 1e-10, "γ={gamma} λ={lambda}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn block_oracle_agrees_with_every_mode_of_a_series() {
    let chain = ChainSpec::new(12, 0.9).unwrap();
    let fields = FieldSet::new(0.2, 1.3, 0.3).unwrap();
    for m in mode_data(&chain, &fields).iter().take(chain.modes() - 1) {
        for t in [0.0, 1.0, 4.0] {
            let o = mode_factor_oracle(m.mode.k, &chain, &fields, &InitialState::Ground, t).unwrap();
            assert!((mode_decoherence_ground(m, t, ModeFormula::FourTerm) - o).norm() < 1e-10);
        }
    }
}

use bec_core::exact::{
    condensate_fraction, occupation_sum_direct, occupation_sum_direct_with_cutoff,
    occupation_sum_series, solve_fugacity, threshold_temperature, ENERGY_CUTOFF,
};
use bec_core::semiclassical::tc0;
use bec_core::sfun::polylog;
use bec_core::trap::{Shape, TrapSpec};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Plain triple loop over every quantum number up to `n_max` per axis.
fn triple_loop(trap: &TrapSpec, z: f64, t: f64, n_max: u32) -> f64 {
    let [d1, d2, d3] = trap.spacings();
    // Kahan summation: 2.7e7 terms would otherwise drift by ~1e-11.
    let (mut total, mut carry) = (0.0f64, 0.0f64);
    for a in 0..=n_max {
        for b in 0..=n_max {
            for c in 0..=n_max {
                let e = a as f64 * d1 + b as f64 * d2 + c as f64 * d3;
                let y = 1.0 / ((e / t).exp() / z - 1.0) - carry;
                let next = total + y;
                carry = (next - total) - y;
                total = next;
            }
        }
    }
    total
}

/// Bisection on `z` against the enumerated evaluator.
fn brute_force_fraction(trap: &TrapSpec, n: f64, t: f64) -> f64 {
    let (mut lo, mut hi) = (1e-12, 1.0 - 1e-14);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if occupation_sum_direct(trap, mid, t).unwrap() > n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    z / (1.0 - z) / n
}

fn suite() -> Vec<TrapSpec> {
    vec![
        TrapSpec::isotropic(),
        TrapSpec::new(Shape::Disk, 2.0).unwrap(),
        TrapSpec::new(Shape::Disk, 3.2).unwrap(),
        TrapSpec::new(Shape::Cigar, 4.0).unwrap(),
        TrapSpec::new(Shape::Cigar, 10.4).unwrap(),
    ]
}

#[test]
fn isotropic_series_and_direct_match_triple_loop() {
    let trap = TrapSpec::isotropic();
    let oracle = triple_loop(&trap, 0.9, 5.0, 300);
    assert!(rel(occupation_sum_direct(&trap, 0.9, 5.0).unwrap(), oracle) < 1e-12);
    assert!(rel(occupation_sum_series(&trap, 0.9, 5.0).unwrap(), oracle) < 1e-10);
}

#[test]
fn disk_near_unit_fugacity() {
    let trap = TrapSpec::new(Shape::Disk, 4.0).unwrap();
    let a = occupation_sum_series(&trap, 0.999, 20.0).unwrap();
    let b = occupation_sum_direct(&trap, 0.999, 20.0).unwrap();
    assert!(rel(a, b) < 1e-9, "{a} vs {b}");
}

#[test]
fn evaluators_agree_on_suite() {
    for trap in suite() {
        for z in [0.1, 0.9, 0.999] {
            for t in [2.0, 5.0, 20.0] {
                let a = occupation_sum_series(&trap, z, t).unwrap();
                let b = occupation_sum_direct(&trap, z, t).unwrap();
                assert!(rel(a, b) < 1e-9, "{trap} z={z} t={t}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn direct_truncation_is_honest() {
    for trap in suite() {
        for z in [0.1, 0.9, 0.999] {
            for t in [2.0, 5.0, 20.0] {
                let a = occupation_sum_direct(&trap, z, t).unwrap();
                let b = occupation_sum_direct_with_cutoff(&trap, z, t, 2.0 * ENERGY_CUTOFF).unwrap();
                assert!(rel(a, b) < 1e-10, "{trap} z={z} t={t}");
            }
        }
    }
}

#[test]
fn high_temperature_tracks_bose_function() {
    // Leading semiclassical term: excited atoms ~ t^3 Li_3(z) / (d1 d2 d3).
    let trap = TrapSpec::new(Shape::Cigar, 2.0).unwrap();
    let (z, t) = (0.5, 400.0);
    let n = occupation_sum_series(&trap, z, t).unwrap() - z / (1.0 - z);
    let leading = t.powi(3) * polylog(3.0, z).unwrap().value / 4.0;
    assert!(rel(n, leading) < 0.01);
}

#[test]
fn condensed_and_normal_regimes_match_brute_force() {
    let trap = TrapSpec::isotropic();
    let n = 1e4;
    let scale = tc0(&trap, n).unwrap();
    let cold = condensate_fraction(&trap, n, 0.5 * scale).unwrap();
    let cold_oracle = brute_force_fraction(&trap, n, 0.5 * scale);
    assert!(cold > 0.5 && rel(cold, cold_oracle) < 1e-8);
    let hot = condensate_fraction(&trap, n, 1.5 * scale).unwrap();
    let hot_oracle = brute_force_fraction(&trap, n, 1.5 * scale);
    assert!(hot < 0.01 && rel(hot, hot_oracle) < 1e-6);
    let above = condensate_fraction(&trap, n, 1.2 * scale).unwrap();
    assert!(above < 0.005 && rel(above, brute_force_fraction(&trap, n, 1.2 * scale)) < 1e-6);
}

#[test]
fn nearly_frozen_gas() {
    let trap = TrapSpec::isotropic();
    let f = condensate_fraction(&trap, 100.0, 0.01).unwrap();
    assert!(f > 0.97);
    assert!(rel(f, brute_force_fraction(&trap, 100.0, 0.01)) < 1e-9);
}

#[test]
fn threshold_examples() {
    let iso = TrapSpec::isotropic();
    let n = 1e6;
    let t = threshold_temperature(&iso, n, 0.001).unwrap();
    let ratio = t.t_threshold / tc0(&iso, n).unwrap();
    assert!(ratio > 0.95 && ratio < 1.02, "{ratio}");
    // Coarse brute-force scan brackets the root.
    let scale = tc0(&iso, n).unwrap();
    let below = brute_force_fraction(&iso, n, 0.99 * t.t_threshold);
    let above = brute_force_fraction(&iso, n, 1.01 * t.t_threshold);
    assert!(below > 0.001 && above < 0.001);
    assert!(t.iterations > 0 && t.residual.abs() <= 1e-9);

    let half = threshold_temperature(&iso, 1000.0, 0.5).unwrap();
    let scale_small = tc0(&iso, 1000.0).unwrap();
    assert!(half.t_threshold < scale_small);
    let f = brute_force_fraction(&iso, 1000.0, half.t_threshold);
    assert!((f - 0.5).abs() < 1e-6);
    let _ = scale;
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn occupation_monotone(
        shape in prop_oneof![Just(Shape::Disk), Just(Shape::Cigar)],
        s in 1.0f64..12.0,
        z in 0.01f64..0.99,
        t in 0.5f64..40.0,
    ) {
        let trap = TrapSpec::new(shape, s).unwrap();
        let base = occupation_sum_series(&trap, z, t).unwrap();
        prop_assert!(occupation_sum_series(&trap, z + 0.005, t).unwrap() > base);
        prop_assert!(occupation_sum_series(&trap, z, t * 1.05).unwrap() > base);
    }

    #[test]
    fn solved_states_close_the_budget(
        shape in prop_oneof![Just(Shape::Isotropic), Just(Shape::Disk), Just(Shape::Cigar)],
        s in 1.0f64..20.0,
        log_n in 1.0f64..9.0,
        t_ratio in 0.05f64..3.0,
    ) {
        let s = if shape == Shape::Isotropic { 1.0 } else { s };
        let trap = TrapSpec::new(shape, s).unwrap();
        let n = 10f64.powf(log_n);
        let t = t_ratio * tc0(&trap, n).unwrap();
        let st = solve_fugacity(&trap, n, t).unwrap();
        prop_assert!(rel(st.n0, st.z / st.one_minus_z) < 1e-12);
        prop_assert!(st.f0 >= 0.0 && st.f0 < 1.0);
        prop_assert!(st.residual.abs() <= 1e-10);
        prop_assert!(st.z > 0.0 && st.z < 1.0);
    }
}

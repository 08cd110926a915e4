//! Randomized invariants. Every property here holds exactly for the real
//! quantities; the tolerances only absorb floating-point evaluation error.

use proptest::prelude::*;

use hga_core::applications::poly::{verify_bounds, PolynomialCoeffs};
use hga_core::kernels::{s_function, KernelParam};
use hga_core::simple;
use hga_core::solve::{solve_f_equation, solve_phi_equation};
use hga_core::{arithmetic_bounds, geometric_bounds, harmonic_bounds, WeightedSample};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn sample_strategy() -> impl Strategy<Value = WeightedSample> {
    (2usize..=8)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0.02f64..50.0, n),
                proptest::collection::vec(0.05f64..1.0, n),
            )
        })
        .prop_map(|(values, raw_w)| {
            let s: f64 = raw_w.iter().sum();
            let weights: Vec<f64> = raw_w.iter().map(|w| w / s).collect();
            WeightedSample::new(&values, &weights).unwrap()
        })
}

proptest! {
    #[test]
    fn sharp_intervals_contain_the_true_mean(sample in sample_strategy()) {
        let m = sample.means();
        let w = sample.weights();

        let hb = harmonic_bounds(w, m.a, m.g).unwrap();
        prop_assert!(hb.lower <= m.h * (1.0 + 1e-11) && m.h <= hb.upper * (1.0 + 1e-11),
            "h={} not in [{}, {}]", m.h, hb.lower, hb.upper);

        let gb = geometric_bounds(w, m.a, m.h).unwrap();
        prop_assert!(gb.lower <= m.g * (1.0 + 1e-11) && m.g <= gb.upper * (1.0 + 1e-11),
            "g={} not in [{}, {}]", m.g, gb.lower, gb.upper);

        let ab = arithmetic_bounds(w, m.h, m.g).unwrap();
        prop_assert!(ab.lower <= m.a * (1.0 + 1e-11) && m.a <= ab.upper * (1.0 + 1e-11),
            "a={} not in [{}, {}]", m.a, ab.lower, ab.upper);
    }

    #[test]
    fn reciprocal_duality_round_trips(sample in sample_strategy()) {
        let dual = sample.reciprocal_dual();
        let back = dual.reciprocal_dual();
        for (x, y) in sample.values().iter().zip(back.values()) {
            prop_assert!(rel(*x, *y) < 1e-15);
        }
        let m = sample.means();
        let dm = dual.means();
        prop_assert!(rel(dm.h, 1.0 / m.a) < 1e-13);
        prop_assert!(rel(dm.g, 1.0 / m.g) < 1e-13);
        prop_assert!(rel(dm.a, 1.0 / m.h) < 1e-13);
    }

    #[test]
    fn witnesses_attain_the_endpoints(sample in sample_strategy()) {
        // The extremal configurations handed back with each interval must be
        // genuine samples with the two known means, whose third mean equals
        // the endpoint they certify.
        let m = sample.means();
        let w = sample.weights();
        let hb = harmonic_bounds(w, m.a, m.g).unwrap();
        for (witness, endpoint) in [(&hb.lower_witness, hb.lower), (&hb.upper_witness, hb.upper)] {
            let wm = witness.means();
            prop_assert!(rel(wm.a, m.a) < 1e-10, "witness a drifted: {} vs {}", wm.a, m.a);
            prop_assert!(rel(wm.g, m.g) < 1e-10, "witness g drifted: {} vs {}", wm.g, m.g);
            prop_assert!(rel(wm.h, endpoint) < 1e-10, "witness h vs endpoint");
        }
    }

    #[test]
    fn phi_squared_below_f_everywhere(
        alpha in 0.01f64..0.5,
        frac in 1e-6f64..1.0,
    ) {
        // Both kernels are means of the same two-valued sample, harmonic vs
        // geometric, so phi^2 <= f across the whole domain.
        let param = KernelParam::new(alpha).unwrap();
        let x = frac * param.upper_limit();
        let f = param.f_kernel(x).unwrap();
        let phi2 = param.phi_squared(x).unwrap();
        prop_assert!(phi2 <= f + 1e-14, "x={x}: {phi2} > {f}");
    }

    #[test]
    fn solver_roots_reproduce_the_ratio(
        alpha in 0.02f64..=0.5,
        ratio in 0.01f64..0.999,
    ) {
        let param = KernelParam::new(alpha).unwrap();
        let fr = solve_f_equation(alpha, ratio).unwrap();
        prop_assert!(rel(param.f_kernel(fr.xi0).unwrap(), ratio) < 1e-10);
        prop_assert!(rel(param.f_kernel(fr.xi1).unwrap(), ratio) < 1e-10);
        let pr = solve_phi_equation(alpha, ratio).unwrap();
        prop_assert!(rel(param.phi_squared(pr.xi0).unwrap(), ratio) < 1e-10);
        prop_assert!(rel(param.phi_squared(pr.xi1).unwrap(), ratio) < 1e-10);
        // Both root pairs straddle the peak.
        prop_assert!(fr.xi0 <= 1.0 && 1.0 <= fr.xi1);
        prop_assert!(pr.xi0 <= 1.0 && 1.0 <= pr.xi1);
    }

    #[test]
    fn simple_bounds_never_beat_sharp_bounds(sample in sample_strategy()) {
        let m = sample.means();
        let alpha = sample.min_weight().1;

        let sharp = harmonic_bounds(sample.weights(), m.a, m.g).unwrap();
        let cheap = simple::harmonic_lower(m.a, m.g, alpha).unwrap();
        prop_assert!(cheap <= sharp.lower * (1.0 + 1e-13),
            "simple harmonic lower {} above sharp {}", cheap, sharp.lower);
        prop_assert!(cheap <= m.h * (1.0 + 1e-13));

        let sharp = arithmetic_bounds(sample.weights(), m.h, m.g).unwrap();
        let cheap = simple::arithmetic_upper(m.h, m.g, alpha).unwrap();
        prop_assert!(cheap >= sharp.upper * (1.0 - 1e-13),
            "simple arithmetic upper {} below sharp {}", cheap, sharp.upper);
        prop_assert!(cheap >= m.a * (1.0 - 1e-13));
    }

    #[test]
    fn s_has_the_sign_of_minus_t(t in -50.0f64..0.999) {
        prop_assume!(t.abs() > 1e-6);
        let s = s_function(t).unwrap();
        if t > 0.0 {
            prop_assert!(s < 0.0, "s({t}) = {s}");
        } else {
            prop_assert!(s > 0.0, "s({t}) = {s}");
        }
    }

    #[test]
    fn polynomial_bounds_hold_for_random_positive_roots(
        roots in proptest::collection::vec(0.1f64..10.0, 2..=8)
    ) {
        let p = PolynomialCoeffs::from_roots(&roots).unwrap();
        let report = verify_bounds(&p).unwrap();
        prop_assert!(report.holds,
            "lower={} observed={} upper={}", report.lower, report.observed, report.upper);
    }

    #[test]
    fn geometric_interval_contains_g_when_h_and_a_are_known(sample in sample_strategy()) {
        let m = sample.means();
        let n = sample.len();
        let alpha = sample.min_weight().1;
        let iv = simple::geometric_interval(m.h, m.a, alpha, n).unwrap();
        prop_assert!(iv.lower <= m.g * (1.0 + 1e-13) && m.g <= iv.upper * (1.0 + 1e-13),
            "g={} not in [{}, {}]", m.g, iv.lower, iv.upper);
    }
}

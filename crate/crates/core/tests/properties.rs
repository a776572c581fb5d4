use num_rational::BigRational;
use proptest::prelude::*;

use quartic::dynamics::{integrate, measure_period, steps_for_cycles, Method};
use quartic::lindstedt::expand;
use quartic::model::{
    isochronicity_second_order_quantum, quantum_isochronicity_quadratic, reduce_quantum, PhysicalParams, Truncation,
};
use quartic::separatrix::{dw_orbit_period, dw_period, dw_turning_points};
use quartic::trigpoly::rat;

fn q(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

proptest! {
    // Closed-form classical frequency, written out in rationals, against the
    // engine's series in b = 4 l / (m w^2).
    #[test]
    fn closed_form_equals_series_exactly(
        m in 1i64..20, w in 1i64..20, l in 0i64..40, a in 1i64..30, order in 1u32..=2,
    ) {
        let (m, w, l, a) = (q(m, 4), q(w, 4), q(l, 400), q(a, 10));
        let a2 = &a * &a;
        let w2 = &w * &w;
        let mut closed = q(1, 1) + q(3, 2) * &a2 * &l / (&m * &w2);
        if order == 2 {
            closed -= q(21, 16) * &a2 * &a2 * &l * &l / (&m * &m * &w2 * &w2);
        }
        let b = q(4, 1) * &l / (&m * &w2);
        let sol = expand(order).unwrap();
        let mut series = q(1, 1);
        let mut bk = q(1, 1);
        for c in sol.omega_corrections() {
            bk = &bk * &b;
            series += c.eval_exact(&a) * &bk;
        }
        prop_assert_eq!(closed, series);
    }

    #[test]
    fn dw_period_increases_with_amplitude(b in 0.2f64..3.0, e in 0.1f64..3.0, s1 in 0.01f64..1.0, s2 in 0.01f64..1.0) {
        prop_assume!((s1 - s2).abs() > 1e-3);
        let top = dw_turning_points(b, e).unwrap().k_plus.sqrt();
        let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(dw_period(b, e, lo * top).unwrap() < dw_period(b, e, hi * top).unwrap());
    }

    #[test]
    fn isochronicity_roots_have_small_residuals(m in 0.5f64..2.0, w in 0.5f64..2.0, h in 0.2f64..2.0, a in 0.2f64..2.0) {
        let p = PhysicalParams::quantum(m, w, 0.0, h).unwrap();
        if let Ok(rep) = isochronicity_second_order_quantum(&p, a) {
            let (qa, qb, qc) = quantum_isochronicity_quadratic(&p, a);
            for r in rep.lambda_roots {
                let terms = [qa * r * r, qb * r, qc];
                let scale: f64 = terms.iter().map(|t| t.abs()).sum();
                prop_assert!(terms.iter().sum::<f64>().abs() / scale < 1e-10);
            }
        }
    }
}

#[test]
fn truncated_b_gap_is_second_order_in_hbar() {
    let gap = |h: f64| {
        let p = PhysicalParams::quantum(1.0, 1.0, 0.025, h).unwrap();
        let exact = reduce_quantum(&p, Truncation::Exact).unwrap().b;
        let cut = reduce_quantum(&p, Truncation::FirstOrderHbar).unwrap().b;
        (exact - cut).abs()
    };
    for h in [0.4, 0.2, 0.1] {
        let ratio = gap(h) / gap(h / 2.0);
        assert!((3.6..4.4).contains(&ratio), "hbar {h}: {ratio}");
    }
}

// Launch from rest at the outer turning point, where -x^2/2 + b x^4/4 = E,
// and compare the round-trip period with the quadrature.
#[test]
fn dw_period_matches_simulation_grid() {
    for b in [0.5, 1.0, 2.0] {
        for e in [0.5, 2.0] {
            let tp = dw_turning_points(b, e).unwrap();
            let x0 = tp.k_plus.sqrt();
            assert!(((-0.5 * x0 * x0 + 0.25 * b * x0.powi(4)) - e).abs() < 1e-12);
            let expected = dw_orbit_period(b, e).unwrap();
            assert_eq!(expected, 2.0 * dw_period(b, e, x0).unwrap());
            let dt = 1e-3;
            let tr = integrate(-1.0, b, x0, dt, steps_for_cycles(2.0 * std::f64::consts::PI / expected, 6.5, dt), Method::Rk4)
                .unwrap();
            let measured = measure_period(&tr).unwrap().period;
            let rel = (measured - expected).abs() / expected;
            assert!(rel < 1e-4, "b {b} E {e}: measured {measured} quadrature {expected}");
        }
    }
}

mod common;

use common::rel_err;
use proptest::prelude::*;
use qaskey::qcore::{phi_coefficients, phi_series, qpoch_finite, qpoch_inf};
use qaskey::QContext;

const GRID: [f64; 5] = [-0.5, -0.1, 0.1, 0.5, 0.9];

#[test]
fn q_binomial_theorem_over_grid() {
    for q in [0.3, 0.5, 0.9] {
        let c = QContext::new(q).unwrap().extended();
        for a in GRID {
            for z in GRID {
                let series = phi_series(&[a], &[], z, &c).unwrap().value;
                let closed = qpoch_inf(a * z, &c).unwrap() / qpoch_inf(z, &c).unwrap();
                assert!(
                    rel_err(series, closed) < 10.0 * c.eps_trunc,
                    "a={a} z={z} q={q}: {series} vs {closed}"
                );
            }
        }
    }
}

#[test]
fn standard_mode_holds_at_moderate_q() {
    for q in [0.3, 0.5] {
        let c = QContext::new(q).unwrap();
        for a in GRID {
            for z in GRID {
                let series = phi_series(&[a], &[], z, &c).unwrap().value;
                let closed = qpoch_inf(a * z, &c).unwrap() / qpoch_inf(z, &c).unwrap();
                assert!(rel_err(series, closed) < 10.0 * c.eps_trunc, "a={a} z={z} q={q}");
            }
        }
    }
}

#[test]
fn terminating_coefficients_sum_to_series() {
    let c = QContext::new(0.5).unwrap();
    let q = 0.5f64;
    let upper = [q.powi(-4), 0.3, 0.7];
    let lower = [0.2, -0.4];
    let coeffs = phi_coefficients(&upper, &lower, &c).unwrap();
    assert_eq!(coeffs.len(), 5);
    for z in [0.1f64, 0.5, 0.9, 2.0] {
        let direct: f64 = coeffs.iter().enumerate().map(|(k, ck)| ck * z.powi(k as i32)).sum();
        let series = phi_series(&upper, &lower, z, &c).unwrap();
        assert_eq!(series.trunc_bound, 0.0);
        assert!((series.value - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }
}

proptest! {
    #[test]
    fn finite_products_telescope(a in -0.9f64..0.9, m in 0usize..15, n in 0usize..15, q in 0.1f64..0.9) {
        // (a;q)_{m+n} = (a;q)_m (a q^m;q)_n
        let lhs = qpoch_finite(a, m + n, q);
        let rhs = qpoch_finite(a, m, q) * qpoch_finite(a * q.powi(m as i32), n, q);
        prop_assert!((lhs - rhs).abs() <= 64.0 * f64::EPSILON * lhs.abs().max(rhs.abs()).max(1e-300));
    }
}

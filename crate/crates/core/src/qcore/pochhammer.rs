use super::context::{Precision, QContext, SeriesValue};
use super::dd::DoubleDouble;
use crate::error::{QError, Result};

/// Order `k` of a q-Pochhammer symbol `(a;q)_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochOrder {
    /// Finite order. Negative values are rejected at evaluation time.
    Finite(i64),
    Infinite,
}

impl PochOrder {
    pub fn finite(k: usize) -> Self {
        PochOrder::Finite(k as i64)
    }
}

/// `(a;q)_k` for finite `k`, or the infinite product truncated at the first
/// `j` with `|a| q^j < eps_trunc`.
///
/// The infinite case folds the first-order tail `exp(-a q^j / (1 - q))` into the
/// value; `trunc_bound` covers the second-order remainder plus accumulated
/// rounding of the factors.
pub fn qpoch(a: f64, k: PochOrder, ctx: &QContext) -> Result<SeriesValue> {
    match k {
        PochOrder::Finite(k) if k < 0 => Err(QError::Domain(format!(
            "q-Pochhammer order must be nonnegative, got {k}"
        ))),
        PochOrder::Finite(k) => {
            let k = k as usize;
            let value = match ctx.precision {
                Precision::Standard => qpoch_finite(a, k, ctx.q()),
                Precision::Extended => qpoch_finite_dd(a, k, ctx.q()).to_f64(),
            };
            Ok(SeriesValue::exact(value, k))
        }
        PochOrder::Infinite => qpoch_infinite(a, ctx),
    }
}

fn qpoch_infinite(a: f64, ctx: &QContext) -> Result<SeriesValue> {
    let q = ctx.q();
    let mut j = 0usize;
    let mut aqj = a;
    let value;
    match ctx.precision {
        Precision::Standard => {
            let mut prod = 1.0;
            while aqj.abs() >= ctx.eps_trunc {
                if j >= ctx.max_terms {
                    return Err(QError::TruncationFailure {
                        partial: prod,
                        terms: j,
                    });
                }
                prod *= 1.0 - aqj;
                aqj *= q;
                j += 1;
            }
            value = prod;
        }
        Precision::Extended => {
            let qd = DoubleDouble::from_f64(q);
            let mut aqd = DoubleDouble::from_f64(a);
            let mut prod = DoubleDouble::ONE;
            while aqd.hi.abs() >= ctx.eps_trunc {
                if j >= ctx.max_terms {
                    return Err(QError::TruncationFailure {
                        partial: prod.to_f64(),
                        terms: j,
                    });
                }
                prod = prod * DoubleDouble::one_minus(aqd);
                aqd = aqd * qd;
                j += 1;
            }
            aqj = aqd.to_f64();
            value = prod.to_f64();
        }
    }
    let tail = aqj / (1.0 - q);
    let value = value * (-tail).exp();
    let rounding = match ctx.precision {
        Precision::Standard => (j as f64 + 1.0) * f64::EPSILON,
        Precision::Extended => f64::EPSILON,
    };
    Ok(SeriesValue {
        value,
        trunc_bound: value.abs() * (tail * tail + rounding),
        terms_used: j,
    })
}

/// Plain `∏_{j<k} (1 - a q^j)` in double precision.
#[inline]
pub fn qpoch_finite(a: f64, k: usize, q: f64) -> f64 {
    let mut prod = 1.0;
    let mut aqj = a;
    for _ in 0..k {
        prod *= 1.0 - aqj;
        aqj *= q;
    }
    prod
}

fn qpoch_finite_dd(a: f64, k: usize, q: f64) -> DoubleDouble {
    let qd = DoubleDouble::from_f64(q);
    let mut aqj = DoubleDouble::from_f64(a);
    let mut prod = DoubleDouble::ONE;
    for _ in 0..k {
        prod = prod * DoubleDouble::one_minus(aqj);
        aqj = aqj * qd;
    }
    prod
}

/// Value of `(a;q)_∞` without the error estimate.
pub fn qpoch_inf(a: f64, ctx: &QContext) -> Result<f64> {
    qpoch_infinite(a, ctx).map(|s| s.value)
}

/// `∏_i (params_i; q)_k`.
pub fn multi_qpoch(params: &[f64], k: PochOrder, ctx: &QContext) -> Result<f64> {
    if params.is_empty() {
        return Err(QError::Domain(
            "multi_qpoch needs at least one parameter".into(),
        ));
    }
    params
        .iter()
        .try_fold(1.0, |acc, &a| Ok(acc * qpoch(a, k, ctx)?.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    #[test]
    fn finite_examples() {
        let c = ctx(0.5);
        assert_eq!(qpoch(0.7, PochOrder::Finite(0), &c).unwrap().value, 1.0);
        assert_eq!(qpoch(0.5, PochOrder::Finite(1), &c).unwrap().value, 0.5);
        let v = qpoch(0.3, PochOrder::Finite(2), &c).unwrap();
        assert!((v.value - 0.595).abs() < 1e-15);
        assert_eq!(v.trunc_bound, 0.0);
        assert_eq!(v.terms_used, 2);
    }

    #[test]
    fn infinite_of_zero_is_one() {
        let v = qpoch(0.0, PochOrder::Infinite, &ctx(0.5)).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.terms_used, 0);
    }

    #[test]
    fn negative_order_is_domain_error() {
        assert!(matches!(
            qpoch(0.3, PochOrder::Finite(-1), &ctx(0.5)),
            Err(QError::Domain(_))
        ));
    }

    #[test]
    fn too_few_terms_reports_partial() {
        let c = ctx(0.9).with_max_terms(10).unwrap();
        match qpoch(0.5, PochOrder::Infinite, &c) {
            Err(QError::TruncationFailure { terms, partial }) => {
                assert_eq!(terms, 10);
                assert!((partial - qpoch_finite(0.5, 10, 0.9)).abs() < 1e-15);
            }
            other => panic!("expected truncation failure, got {other:?}"),
        }
    }

    #[test]
    fn euler_function_reference() {
        // (1/2; 1/2)_∞ = 0.288788095086602421278899721929...
        let v = qpoch(0.5, PochOrder::Infinite, &ctx(0.5)).unwrap();
        assert!((v.value - 0.288_788_095_086_602_4).abs() < 1e-15);
        let e = qpoch(0.5, PochOrder::Infinite, &ctx(0.5).extended()).unwrap();
        assert!((e.value - 0.288_788_095_086_602_4).abs() < 1e-16);
    }

    #[test]
    fn multi_examples() {
        let c = ctx(0.5);
        assert_eq!(multi_qpoch(&[0.2, 0.4], PochOrder::Finite(0), &c).unwrap(), 1.0);
        assert!((multi_qpoch(&[0.5, 0.25], PochOrder::Finite(1), &c).unwrap() - 0.375).abs() < 1e-16);
        let single = multi_qpoch(&[0.3], PochOrder::Finite(4), &c).unwrap();
        assert_eq!(single, qpoch(0.3, PochOrder::Finite(4), &c).unwrap().value);
        assert!(multi_qpoch(&[], PochOrder::Finite(1), &c).is_err());
    }

    proptest! {
        #[test]
        fn one_step_recurrence(a in -0.99f64..0.99, k in 0usize..40, q in 0.05f64..0.95) {
            let c = ctx(q);
            let lhs = qpoch(a, PochOrder::finite(k + 1), &c).unwrap().value;
            let rhs = qpoch(a, PochOrder::finite(k), &c).unwrap().value * (1.0 - a * q.powi(k as i32));
            prop_assert!((lhs - rhs).abs() <= 16.0 * f64::EPSILON * rhs.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn infinite_product_splits(a in -0.95f64..0.95, n in 0usize..=10, q in 0.1f64..0.9) {
            let c = ctx(q);
            let full = qpoch(a, PochOrder::Infinite, &c).unwrap();
            let head = qpoch(a, PochOrder::finite(n), &c).unwrap();
            let tail = qpoch(a * q.powi(n as i32), PochOrder::Infinite, &c).unwrap();
            let split = head.value * tail.value;
            let head_rounding = (n as f64 + 1.0) * f64::EPSILON * split.abs();
            let budget = full.trunc_bound + tail.trunc_bound * head.value.abs() + head_rounding;
            prop_assert!((full.value - split).abs() <= budget,
                "full {} split {} budget {}", full.value, split, budget);
        }
    }
}

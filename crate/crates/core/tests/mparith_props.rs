use core::f64::consts::PI;

use kmreduce_core::mparith::*;
use proptest::prelude::*;

const CASES: u32 = 1000;

fn polar(r: f64, t: f64, ctx: PrecisionContext) -> HValue {
    HValue::from_f64(r * t.cos(), r * t.sin(), ctx)
}

fn ctx(bits: u32) -> PrecisionContext {
    PrecisionContext::new(bits).unwrap()
}

fn base(r: f64, t: f64, c: PrecisionContext) -> QBase {
    QBase::new(polar(r, t, c)).unwrap()
}

/// Keeps every factor 1 - a q^j with j in [lo, hi] well away from zero.
fn clear(a: &HValue, q: &QBase, lo: i64, hi: i64) -> bool {
    min_factor_distance(a, q, lo, hi) > 1e-3
}

// Shifted arguments are formed with guard bits so the comparison measures the
// functions rather than the rounding of their inputs.
fn recurrence(bits: u32, ar: f64, at: f64, qr: f64, qt: f64, k: i64) -> Result<(), TestCaseError> {
    let c = ctx(bits);
    let (a, q) = (polar(ar, at, c), base(qr, qt, c));
    prop_assume!(clear(&a, &q, k.min(0) - 1, k.max(0) + 1));
    let lhs = qpoch_finite(&a, &q, k + 1).unwrap();
    let w = c.guarded();
    let step = (&a.with_precision(w) * &q.with_precision(w).pow(k)).one_minus().with_precision(c);
    let rhs = &qpoch_finite(&a, &q, k).unwrap() * &step;
    let err = lhs.rel_distance(&rhs, 0.0);
    prop_assert!(err <= 10.0 * c.eps(), "k={k} err={err:e}");
    Ok(())
}

fn branches(bits: u32, ar: f64, at: f64, qr: f64, qt: f64, k: i64) -> Result<(), TestCaseError> {
    let c = ctx(bits);
    let (a, q) = (polar(ar, at, c), base(qr, qt, c));
    prop_assume!(clear(&a, &q, -k - 1, 1));
    let w = c.guarded();
    let (aw, qw) = (a.with_precision(w), q.with_precision(w));
    let back = qpoch_finite(&(&aw * &qw.pow(-k)), &qw, k).unwrap().with_precision(c);
    let prod = &qpoch_finite(&a, &q, -k).unwrap() * &back;
    let err = prod.rel_distance(&HValue::one(c), 0.0);
    prop_assert!(err <= 10.0 * c.eps(), "k={k} err={err:e}");
    Ok(())
}

fn splitting(bits: u32, ar: f64, at: f64, qr: f64, qt: f64, m: i64) -> Result<(), TestCaseError> {
    let c = ctx(bits);
    let (a, q) = (polar(ar, at, c), base(qr, qt, c));
    prop_assume!(clear(&a, &q, 0, m + 1));
    let (whole, t0) = qpoch_inf_with_tail(&a, &q);
    let (rest, t1) = qpoch_inf_with_tail(&(&a * &q.pow(m)), &q);
    let split = &qpoch_finite(&a, &q, m).unwrap() * &rest;
    let err = whole.rel_distance(&split, 0.0);
    let tol = 100.0 * c.eps() + t0 + t1;
    prop_assert!(err <= tol, "m={m} err={err:e} tol={tol:e}");
    Ok(())
}

fn gamma_ratio(bits: u32, x: f64, y: f64, k: i64) -> Result<(), TestCaseError> {
    let c = ctx(bits);
    let a = HValue::from_f64(x, y, c);
    let direct = poch_classical(&a, k).unwrap();
    let via = (&log_gamma(&a.add_i64(k)).unwrap() - &log_gamma(&a).unwrap()).exp();
    let err = direct.rel_distance(&via, 0.0);
    prop_assert!(err <= 100.0 * c.eps(), "a={x}+{y}i k={k} err={err:e}");
    Ok(())
}

macro_rules! kernel_props {
    ($name:ident, $bits:expr) => {
        mod $name {
            use super::*;

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(CASES))]

                #[test]
                fn qpoch_recurrence(ar in 0.05f64..3.0, at in -PI..PI, qr in 0.05f64..0.95, qt in -PI..PI, k in -20i64..=20) {
                    recurrence($bits, ar, at, qr, qt, k)?;
                }

                #[test]
                fn qpoch_branch_consistency(ar in 0.05f64..3.0, at in -PI..PI, qr in 0.05f64..0.95, qt in -PI..PI, k in 0i64..=20) {
                    branches($bits, ar, at, qr, qt, k)?;
                }

                #[test]
                fn qpoch_product_splitting(ar in 0.05f64..3.0, at in -PI..PI, qr in 0.05f64..0.9, qt in -PI..PI, m in 0i64..=20) {
                    splitting($bits, ar, at, qr, qt, m)?;
                }

                #[test]
                fn poch_gamma_recurrence(x in 0.1f64..8.0, y in -4.0f64..4.0, k in 0i64..=20) {
                    gamma_ratio($bits, x, y, k)?;
                }
            }
        }
    };
}

kernel_props!(bits128, 128);
kernel_props!(bits256, 256);

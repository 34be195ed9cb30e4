//! q-shifted factorials over all integer indices and infinite q-products.


use super::context::PrecisionContext;
use super::value::HValue;
use crate::error::{Error, Result};

/// The base q of a basic hypergeometric computation, with 0 < |q| < 1.
#[derive(Clone, Debug)]
pub struct QBase {
    q: HValue,
    q_inv: HValue,
    log2_abs: f64,
}

impl QBase {
    pub fn new(q: HValue) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidQBase);
        }
        let n = q.norm_sqr();
        if n.cmp_real(&HValue::one(q.ctx())) != core::cmp::Ordering::Less {
            return Err(Error::InvalidQBase);
        }
        let q_inv = q.recip()?;
        let log2_abs = q.log2_abs();
        Ok(Self { q, q_inv, log2_abs })
    }

    pub fn value(&self) -> &HValue {
        &self.q
    }

    pub fn inverse(&self) -> &HValue {
        &self.q_inv
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.q.ctx()
    }

    /// log2 |q| (strictly negative).
    pub fn log2_abs(&self) -> f64 {
        self.log2_abs
    }

    /// q^k for any integer k.
    pub fn pow(&self, k: i64) -> HValue {
        if k >= 0 {
            self.q.powi(k).expect("nonnegative power")
        } else {
            self.q_inv.powi(-k).expect("nonnegative power")
        }
    }

    /// `x * q^k`.
    pub fn shift(&self, x: &HValue, k: i64) -> HValue {
        if k == 0 {
            x.clone()
        } else {
            x * &self.pow(k)
        }
    }

    pub fn with_precision(&self, ctx: PrecisionContext) -> Self {
        Self::new(self.q.with_precision(ctx)).expect("rounding preserves |q| < 1")
    }
}

/// (a; q)_k for k in Z.
///
/// For k < 0 the reciprocal product `1 / prod_{j=1}^{-k} (1 - a q^{-j})` is
/// formed directly. Products are accumulated with the context's guard bits.
pub fn qpoch_finite(a: &HValue, q: &QBase, k: i64) -> Result<HValue> {
    let ctx = a.ctx();
    let v = if k >= 0 {
        raw_product(a, q, k)
    } else {
        let den = raw_product(a, q, k);
        if den.is_zero() {
            return Err(Error::DivisionByZeroPole { offset: vanishing_offset(a, q, k) });
        }
        den.recip()?
    };
    Ok(v.with_precision(ctx))
}

/// 1 / (a; q)_k for k in Z; zero is a legitimate value for k < 0.
pub fn qpoch_finite_recip(a: &HValue, q: &QBase, k: i64) -> Result<HValue> {
    let ctx = a.ctx();
    let v = if k >= 0 {
        let v = raw_product(a, q, k);
        if v.is_zero() {
            return Err(Error::DivisionByZeroPole { offset: vanishing_offset(a, q, k) });
        }
        v.recip()?
    } else {
        raw_product(a, q, k)
    };
    Ok(v.with_precision(ctx))
}

/// prod_{j=0}^{k-1} (1 - a q^j) for k >= 0, prod_{j=1}^{-k} (1 - a q^{-j})
/// for k < 0, at guarded precision.
fn raw_product(a: &HValue, q: &QBase, k: i64) -> HValue {
    let wide = a.ctx().guarded();
    let q = q.with_precision(wide);
    let mut acc = HValue::one(wide);
    let (mut x, step, n) = if k >= 0 {
        (a.with_precision(wide), q.value().clone(), k)
    } else {
        (&a.with_precision(wide) * q.inverse(), q.inverse().clone(), -k)
    };
    for j in 0..n {
        acc = &acc * &x.one_minus();
        if j + 1 < n {
            x = &x * &step;
        }
    }
    acc
}

fn vanishing_offset(a: &HValue, q: &QBase, k: i64) -> i64 {
    let (lo, hi) = if k >= 0 { (0, k) } else { (k, 0) };
    for j in lo..hi {
        if q.shift(a, j).one_minus().is_zero() {
            return j;
        }
    }
    lo
}

/// (a; q)_inf truncated once |a q^j| drops below 2^{-(bits + guard)}.
pub fn qpoch_inf(a: &HValue, q: &QBase) -> HValue {
    qpoch_inf_with_tail(a, q).0
}

/// As [`qpoch_inf`], also returning a bound on the relative size of the
/// neglected tail factor.
pub fn qpoch_inf_with_tail(a: &HValue, q: &QBase) -> (HValue, f64) {
    let ctx = a.ctx();
    let mut acc = HValue::one(ctx);
    if a.is_zero() {
        return (acc, 0.0);
    }
    let cutoff = -((ctx.bits() + ctx.guard_digits()) as f64);
    let mut x = a.clone();
    let mut l = a.log2_abs();
    while l >= cutoff {
        acc = &acc * &x.one_minus();
        x = &x * q.value();
        l += q.log2_abs();
    }
    // |log prod_{j>=J}(1 - x_j)| <= 2 sum |x_j| once |x_j| < 1/2
    let tail = 2.0 * libm::exp2(l) / (1.0 - libm::exp2(q.log2_abs()));
    (acc, tail)
}

/// Product of (a_i; q)_k over a list; empty list gives 1.
pub fn qpoch_list(list: &[HValue], q: &QBase, k: i64) -> Result<HValue> {
    let mut acc = HValue::one(q.ctx());
    for a in list {
        acc = &acc * &qpoch_finite(a, q, k)?;
    }
    Ok(acc)
}

/// Product of infinite q-products over a list.
pub fn qpoch_inf_list(list: &[HValue], q: &QBase) -> HValue {
    let mut acc = HValue::one(q.ctx());
    for a in list {
        acc = &acc * &qpoch_inf(a, q);
    }
    acc
}

/// `prod num (x)_inf / prod den (x)_inf`, failing if a denominator vanishes.
pub fn qpoch_inf_ratio(num: &[HValue], den: &[HValue], q: &QBase) -> Result<HValue> {
    let n = qpoch_inf_list(num, q);
    let d = qpoch_inf_list(den, q);
    if d.is_zero() {
        return Err(Error::DivisionByZeroPole { offset: 0 });
    }
    n.checked_div(&d)
}

/// `prod num (x)_k / prod den (x)_k`.
pub fn qpoch_ratio(num: &[HValue], den: &[HValue], q: &QBase, k: i64) -> Result<HValue> {
    let mut acc = HValue::one(q.ctx());
    for a in num {
        acc = &acc * &qpoch_finite(a, q, k)?;
    }
    for b in den {
        acc = &acc * &qpoch_finite_recip(b, q, k)?;
    }
    Ok(acc)
}

/// Minimum of |1 - a q^j| over j in [lo, hi), as a double.
pub fn min_factor_distance(a: &HValue, q: &QBase, lo: i64, hi: i64) -> f64 {
    let mut best = f64::INFINITY;
    if lo >= hi {
        return best;
    }
    let mut x = q.shift(a, lo);
    for _ in lo..hi {
        let d = x.one_minus().abs_f64();
        if d < best {
            best = d;
        }
        x = &x * q.value();
    }
    best
}

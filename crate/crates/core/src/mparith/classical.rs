//! Rising factorials and the complex log-gamma function.

use alloc::vec::Vec;

use super::context::PrecisionContext;
use super::value::HValue;
use crate::error::{Error, Result};

/// Rising factorial (a)_k for k in Z, accumulated with guard bits.
pub fn poch_classical(a: &HValue, k: i64) -> Result<HValue> {
    let v = if k >= 0 {
        raw_product(a, k)
    } else {
        let den = raw_product(a, k);
        if den.is_zero() {
            return Err(Error::DivisionByZeroPole { offset: vanishing(a, k) });
        }
        den.recip()?
    };
    Ok(v.with_precision(a.ctx()))
}

/// 1 / (a)_k for k in Z; zero is a legitimate value for k < 0.
pub fn poch_classical_recip(a: &HValue, k: i64) -> Result<HValue> {
    let v = if k >= 0 {
        let v = raw_product(a, k);
        if v.is_zero() {
            return Err(Error::DivisionByZeroPole { offset: vanishing(a, k) });
        }
        v.recip()?
    } else {
        raw_product(a, k)
    };
    Ok(v.with_precision(a.ctx()))
}

/// a (a+1) ... (a+k-1) for k >= 0, (a-1) ... (a+k) for k < 0.
fn raw_product(a: &HValue, k: i64) -> HValue {
    let a = a.with_precision(a.ctx().guarded());
    let mut acc = HValue::one(a.ctx());
    if k >= 0 {
        for j in 0..k {
            acc = &acc * &a.add_i64(j);
        }
    } else {
        for j in 1..=(-k) {
            acc = &acc * &a.sub_i64(j);
        }
    }
    acc
}

fn vanishing(a: &HValue, k: i64) -> i64 {
    let (lo, hi) = if k >= 0 { (0, k) } else { (k, 0) };
    (lo..hi).find(|&j| a.add_i64(j).is_zero()).unwrap_or(lo)
}

/// True when z is a real integer <= 0.
pub fn is_nonpositive_integer(z: &HValue) -> bool {
    z.is_integer() && !z.re().is_positive()
}

/// Principal branch of log Gamma(z).
///
/// z is shifted right by an integer N until the Stirling series converges to
/// the working precision, then log Gamma(z) = log Gamma(z+N) - sum log(z+j).
/// The subtracted logarithms are the principal ones, so on the negative real
/// axis the result is the limit from the upper half-plane.
pub fn log_gamma(z: &HValue) -> Result<HValue> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAtNonPositiveInteger);
    }
    let out_ctx = z.ctx();
    let bits = out_ctx.bits() + 32;
    let ctx = PrecisionContext::with_guard(bits, out_ctx.guard_digits())?;
    let z = z.with_precision(ctx);

    let terms = (bits as usize) / 10 + 4;
    let k2 = 2.0 * terms as f64;
    let x_min = k2 / (2.0 * core::f64::consts::PI * core::f64::consts::E)
        * libm::exp2(bits as f64 / k2)
        + 1.0;
    let re = z.re_f64();
    let shift = if re < x_min { libm::ceil(x_min - re) as i64 } else { 0 };

    let w = z.add_i64(shift);
    let mut value = stirling(&w, terms)?;
    if shift > 0 {
        let mut prod = HValue::one(ctx);
        let mut arg_sum = 0.0;
        for j in 0..shift {
            let f = z.add_i64(j);
            arg_sum += f.arg_f64();
            prod = &prod * &f;
        }
        let mut l = prod.ln()?;
        let turns = libm::round((arg_sum - l.im_f64()) / (2.0 * core::f64::consts::PI));
        if turns != 0.0 {
            let two_pi_k = HValue::pi(ctx).mul_i64(2 * turns as i64);
            l = &l + &(&two_pi_k * &HValue::from_f64(0.0, 1.0, ctx));
        }
        value = &value - &l;
    }
    Ok(value.with_precision(out_ctx))
}

/// (w - 1/2) log w - w + log(2 pi)/2 + sum B_2k / (2k(2k-1) w^(2k-1)).
fn stirling(w: &HValue, terms: usize) -> Result<HValue> {
    let ctx = w.ctx();
    let lw = w.ln()?;
    let half = HValue::from_ratio(1, 2, ctx);
    let two_pi = HValue::pi(ctx).mul_i64(2);
    let mut acc = &(&(w - &half) * &lw) - w;
    acc = &acc + &(&two_pi.ln()? * &half);

    let bern = bernoulli_even(terms, ctx);
    let inv = w.recip()?;
    let inv2 = &inv * &inv;
    let mut pw = inv;
    let tol = ctx.log2_eps() - 8.0;
    let scale = acc.log2_abs().max(0.0);
    for (k, b) in bern.iter().enumerate() {
        let kk = (k + 1) as i64;
        let t = &(b * &pw) / &HValue::from_i64(2 * kk * (2 * kk - 1), ctx);
        acc = &acc + &t;
        if t.log2_abs() < tol + scale {
            break;
        }
        pw = &pw * &inv2;
    }
    Ok(acc)
}

/// B_2, B_4, ..., B_2n from the integer tangent numbers.
fn bernoulli_even(n: usize, ctx: PrecisionContext) -> Vec<HValue> {
    // T_k stays below (2k)!, so this many bits keeps every step exact.
    let mut log2_fact = 0.0;
    for j in 1..=(2 * n) {
        log2_fact += libm::log2(j as f64);
    }
    let exact_bits = (log2_fact as u32 + 64).max(ctx.bits());
    let wide = PrecisionContext::new(exact_bits.min(PrecisionContext::MAX_BITS)).expect("bounded");

    let mut t: Vec<HValue> = Vec::with_capacity(n + 1);
    t.push(HValue::zero(wide));
    let mut fact = HValue::one(wide);
    for k in 1..=n {
        t.push(fact.clone());
        fact = fact.mul_i64(k as i64);
    }
    for k in 2..=n {
        for j in k..=n {
            let a = t[j - 1].mul_i64((j - k) as i64);
            let b = t[j].mul_i64((j - k + 2) as i64);
            t[j] = &a + &b;
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let four_k = HValue::from_i64(2, wide).powi(2 * k as i64).expect("positive");
        let den = &four_k * &four_k.sub_i64(1);
        let mut b = &t[k].mul_i64(2 * k as i64) / &den;
        if k % 2 == 0 {
            b = -b;
        }
        out.push(b.with_precision(ctx));
    }
    out
}

/// Gamma(z) = exp(log Gamma(z)).
pub fn gamma(z: &HValue) -> Result<HValue> {
    Ok(log_gamma(z)?.exp())
}

/// Accumulates a ratio of gamma functions in log space and exponentiates once.
#[derive(Clone, Debug)]
pub struct GammaProduct {
    log: HValue,
}

impl GammaProduct {
    pub fn new(ctx: PrecisionContext) -> Self {
        Self { log: HValue::zero(ctx) }
    }

    pub fn num(&mut self, z: &HValue) -> Result<&mut Self> {
        self.log = &self.log + &log_gamma(z)?;
        Ok(self)
    }

    pub fn den(&mut self, z: &HValue) -> Result<&mut Self> {
        self.log = &self.log - &log_gamma(z)?;
        Ok(self)
    }

    pub fn value(&self) -> HValue {
        self.log.exp()
    }
}

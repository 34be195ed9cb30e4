use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use super::context::PrecisionContext;
use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) fn consts() -> Consts {
    Consts::new().expect("constant cache allocation")
}

/// Double approximation of a real, without overflow checks beyond f64 range.
pub(crate) fn real_to_f64(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, sign, exp, _)) => {
            if x.is_zero() || words.is_empty() {
                return 0.0;
            }
            let top = words[words.len() - 1] as f64 / 18446744073709551616.0;
            let v = libm::ldexp(top, exp);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

/// log2 |x| from the exponent and leading mantissa word; never underflows.
pub(crate) fn real_log2_abs(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, _, exp, _)) if !x.is_zero() && !words.is_empty() => {
            let top = words[words.len() - 1] as f64 / 18446744073709551616.0;
            exp as f64 + libm::log2(top)
        }
        _ => f64::NEG_INFINITY,
    }
}

/// Arbitrary-precision complex number tied to its precision context.
#[derive(Clone)]
pub struct HValue {
    re: BigFloat,
    im: BigFloat,
    ctx: PrecisionContext,
}

impl HValue {
    pub(crate) fn from_parts(re: BigFloat, im: BigFloat, ctx: PrecisionContext) -> Self {
        Self { re, im, ctx }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::from_i64(0, ctx)
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Self::from_i64(1, ctx)
    }

    pub fn from_i64(v: i64, ctx: PrecisionContext) -> Self {
        Self {
            re: BigFloat::from_i64(v, ctx.p()),
            im: BigFloat::from_i64(0, ctx.p()),
            ctx,
        }
    }

    /// Exact conversion of a pair of doubles.
    pub fn from_f64(re: f64, im: f64, ctx: PrecisionContext) -> Self {
        Self {
            re: BigFloat::from_f64(re, ctx.p()),
            im: BigFloat::from_f64(im, ctx.p()),
            ctx,
        }
    }

    /// `num / den` rounded once to the working precision.
    pub fn from_ratio(num: i64, den: i64, ctx: PrecisionContext) -> Self {
        let n = BigFloat::from_i64(num, ctx.p());
        let d = BigFloat::from_i64(den, ctx.p());
        Self::from_parts(n.div(&d, ctx.p(), RM), BigFloat::from_i64(0, ctx.p()), ctx)
    }

    /// Parses decimal strings directly at the target precision.
    pub fn parse(re: &str, im: &str, ctx: PrecisionContext) -> Result<Self> {
        let mut cc = consts();
        let parse = |s: &str, cc: &mut Consts| {
            let v = BigFloat::parse(s.trim(), Radix::Dec, ctx.p(), RM, cc);
            if v.is_nan() || v.is_inf() {
                Err(Error::Parse(s.to_string()))
            } else {
                Ok(v)
            }
        };
        let re = parse(re, &mut cc)?;
        let im = parse(im, &mut cc)?;
        Ok(Self { re, im, ctx })
    }

    pub fn parse_real(re: &str, ctx: PrecisionContext) -> Result<Self> {
        Self::parse(re, "0", ctx)
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    /// Rounds (or widens) to another precision context.
    pub fn with_precision(&self, ctx: PrecisionContext) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        let _ = re.set_precision(ctx.p(), RM);
        let _ = im.set_precision(ctx.p(), RM);
        Self { re, im, ctx }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    /// True when the value is a real integer (exactly).
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_int()
    }

    /// Exact integer value when representable in an i64.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        let f = real_to_f64(&self.re);
        if f.abs() > 9.0e15 {
            return None;
        }
        let k = f as i64;
        if self.sub_i64(k).is_zero() {
            Some(k)
        } else {
            None
        }
    }

    pub fn re_f64(&self) -> f64 {
        real_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        real_to_f64(&self.im)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re_f64(), self.im_f64())
    }

    /// |self| as a double (may underflow to 0 for tiny values).
    pub fn abs_f64(&self) -> f64 {
        libm::exp2(self.log2_abs())
    }

    /// log2 |self|, computed without underflow; -inf for zero.
    pub fn log2_abs(&self) -> f64 {
        let a = real_log2_abs(&self.re);
        let b = real_log2_abs(&self.im);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * libm::log2(1.0 + libm::exp2(2.0 * (lo - hi)))
    }

    /// Principal argument as a double.
    pub fn arg_f64(&self) -> f64 {
        let (x, y) = self.scaled_pair();
        libm::atan2(y, x)
    }

    /// (re, im) scaled by a common power of two so neither under/overflows.
    fn scaled_pair(&self) -> (f64, f64) {
        let s = self.log2_abs();
        if !s.is_finite() {
            return (0.0, 0.0);
        }
        let shift = -(libm::floor(s) as i32);
        let sc = |x: &BigFloat| {
            let mut y = x.clone();
            if !y.is_zero() {
                if let Some(e) = y.exponent() {
                    y.set_exponent(e + shift);
                }
            }
            real_to_f64(&y)
        };
        (sc(&self.re), sc(&self.im))
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(self.re.clone(), self.im.clone().neg(), self.ctx)
    }

    /// |self|^2 as a real HValue.
    pub fn norm_sqr(&self) -> Self {
        let p = self.ctx.p();
        let v = self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM);
        Self::from_parts(v, BigFloat::from_i64(0, p), self.ctx)
    }

    /// |self| as a real HValue.
    pub fn abs(&self) -> Self {
        let p = self.ctx.p();
        let n = self.norm_sqr();
        Self::from_parts(n.re.sqrt(p, RM), BigFloat::from_i64(0, p), self.ctx)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.bits() != other.ctx.bits() {
            Err(Error::PrecisionMismatch { left: self.ctx.bits(), right: other.ctx.bits() })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.div_unchecked(other))
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        let p = self.ctx.p();
        Self::from_parts(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), self.ctx)
    }

    fn sub_unchecked(&self, o: &Self) -> Self {
        let p = self.ctx.p();
        Self::from_parts(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), self.ctx)
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let p = self.ctx.p();
        if self.im.is_zero() && o.im.is_zero() {
            return Self::from_parts(
                self.re.mul(&o.re, p, RM),
                BigFloat::from_i64(0, p),
                self.ctx,
            );
        }
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Self::from_parts(re, im, self.ctx)
    }

    fn div_unchecked(&self, o: &Self) -> Self {
        let p = self.ctx.p();
        if o.im.is_zero() {
            return Self::from_parts(self.re.div(&o.re, p, RM), self.im.div(&o.re, p, RM), self.ctx);
        }
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        Self::from_parts(re.div(&den, p, RM), im.div(&den, p, RM), self.ctx)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.ctx).checked_div(self)
    }

    pub fn add_i64(&self, k: i64) -> Self {
        let p = self.ctx.p();
        Self::from_parts(self.re.add(&BigFloat::from_i64(k, p), p, RM), self.im.clone(), self.ctx)
    }

    pub fn sub_i64(&self, k: i64) -> Self {
        self.add_i64(-k)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let p = self.ctx.p();
        let f = BigFloat::from_i64(k, p);
        Self::from_parts(self.re.mul(&f, p, RM), self.im.mul(&f, p, RM), self.ctx)
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        let p = self.ctx.p();
        Self::from_parts(BigFloat::from_i64(1, p).sub(&self.re, p, RM), self.im.clone().neg(), self.ctx)
    }

    /// Integer power by binary exponentiation; negative powers via reciprocal.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let mut base = if k < 0 { self.recip()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// Complex exponential.
    pub fn exp(&self) -> Self {
        let p = self.ctx.p();
        let mut cc = consts();
        let r = self.re.exp(p, RM, &mut cc);
        if self.im.is_zero() {
            return Self::from_parts(r, BigFloat::from_i64(0, p), self.ctx);
        }
        let c = self.im.cos(p, RM, &mut cc);
        let s = self.im.sin(p, RM, &mut cc);
        Self::from_parts(r.mul(&c, p, RM), r.mul(&s, p, RM), self.ctx)
    }

    /// Principal logarithm, imaginary part in (-pi, pi].
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.ctx.p();
        let mut cc = consts();
        let m = self.norm_sqr().re;
        let half = BigFloat::from_f64(0.5, p);
        let re = m.ln(p, RM, &mut cc).mul(&half, p, RM);
        let im = self.arg_real(&mut cc);
        Ok(Self::from_parts(re, im, self.ctx))
    }

    fn arg_real(&self, cc: &mut Consts) -> BigFloat {
        let p = self.ctx.p();
        let x = &self.re;
        let y = &self.im;
        if y.is_zero() {
            return if x.is_negative() { cc.pi(p, RM) } else { BigFloat::from_i64(0, p) };
        }
        if x.is_zero() {
            let hp = cc.pi(p, RM).div(&BigFloat::from_i64(2, p), p, RM);
            return if y.is_negative() { hp.neg() } else { hp };
        }
        let t = y.div(x, p, RM).atan(p, RM, cc);
        if x.is_positive() {
            t
        } else if y.is_positive() {
            t.add(&cc.pi(p, RM), p, RM)
        } else {
            t.sub(&cc.pi(p, RM), p, RM)
        }
    }

    /// Real HValue equal to pi.
    pub fn pi(ctx: PrecisionContext) -> Self {
        let mut cc = consts();
        Self::from_parts(cc.pi(ctx.p(), RM), BigFloat::from_i64(0, ctx.p()), ctx)
    }

    /// Principal k-th root.
    pub fn root(&self, k: u32) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let l = self.ln()?;
        let inv = Self::from_ratio(1, k as i64, self.ctx);
        Ok(l.mul_unchecked(&inv).exp())
    }

    /// Decimal rendering of the real and imaginary parts at full precision.
    pub fn to_decimal(&self) -> (String, String) {
        (real_decimal(&self.re), real_decimal(&self.im))
    }

    /// Exact comparison of real parts (both values must be real).
    pub fn cmp_real(&self, other: &Self) -> Ordering {
        match self.re.cmp(&other.re) {
            Some(c) if c < 0 => Ordering::Less,
            Some(c) if c > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Exact equality of both components.
    pub fn exact_eq(&self, other: &Self) -> bool {
        self.re.cmp(&other.re) == Some(0) && self.im.cmp(&other.im) == Some(0)
    }

    /// Relative distance |self - other| / max(|self|, |other|), as a double.
    /// Falls back to the absolute distance when both are below `floor`.
    pub fn rel_distance(&self, other: &Self, floor: f64) -> f64 {
        let d = self.sub_unchecked(other).abs_f64();
        let s = libm::fmax(self.abs_f64(), other.abs_f64());
        if s <= floor {
            d
        } else {
            d / s
        }
    }
}

fn real_decimal(x: &BigFloat) -> String {
    if x.is_zero() {
        return String::from("0");
    }
    let mut cc = consts();
    x.format(Radix::Dec, RM, &mut cc).unwrap_or_else(|_| String::from("NaN"))
}

impl fmt::Debug for HValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "HValue({:e}{:+e}i @{}b)", re, im, self.ctx.bits())
    }
}

impl fmt::Display for HValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal();
        write!(f, "{} + {}i", re, im)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&HValue> for &HValue {
            type Output = HValue;
            fn $m(self, o: &HValue) -> HValue {
                self.check(o).expect("HValue precision mismatch");
                HValue::$checked(self, o)
            }
        }
        impl $tr<HValue> for HValue {
            type Output = HValue;
            fn $m(self, o: HValue) -> HValue {
                (&self).$m(&o)
            }
        }
        impl $tr<&HValue> for HValue {
            type Output = HValue;
            fn $m(self, o: &HValue) -> HValue {
                (&self).$m(o)
            }
        }
        impl $tr<HValue> for &HValue {
            type Output = HValue;
            fn $m(self, o: HValue) -> HValue {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, add_unchecked);
binop!(Sub, sub, sub_unchecked);
binop!(Mul, mul, mul_unchecked);

impl Div<&HValue> for &HValue {
    type Output = HValue;
    fn div(self, o: &HValue) -> HValue {
        self.checked_div(o).expect("HValue division")
    }
}
impl Div<HValue> for HValue {
    type Output = HValue;
    fn div(self, o: HValue) -> HValue {
        (&self).div(&o)
    }
}
impl Div<&HValue> for HValue {
    type Output = HValue;
    fn div(self, o: &HValue) -> HValue {
        (&self).div(o)
    }
}
impl Div<HValue> for &HValue {
    type Output = HValue;
    fn div(self, o: HValue) -> HValue {
        self.div(&o)
    }
}

impl Neg for &HValue {
    type Output = HValue;
    fn neg(self) -> HValue {
        HValue::from_parts(self.re.clone().neg(), self.im.clone().neg(), self.ctx)
    }
}
impl Neg for HValue {
    type Output = HValue;
    fn neg(self) -> HValue {
        -&self
    }
}

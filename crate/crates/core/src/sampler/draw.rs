use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::SampleConfig;
use crate::error::Result;
use crate::mparith::{HValue, PrecisionContext, QBase};

/// Random source for one parameter set. Every drawn number passes through a
/// 16-significant-digit decimal so the emitted values have short exact
/// decimal spellings.
pub(crate) struct Draw<'a> {
    pub rng: ChaCha8Rng,
    pub cfg: &'a SampleConfig,
    pub ctx: PrecisionContext,
    pub q: Option<QBase>,
}

impl<'a> Draw<'a> {
    pub fn uni(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            lo
        } else {
            self.rng.gen_range(lo..hi)
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        if hi <= lo {
            lo
        } else {
            self.rng.gen_range(lo..=hi)
        }
    }

    pub fn usize(&mut self, lo: usize, hi: usize) -> usize {
        self.int(lo as i64, hi as i64) as usize
    }

    /// A phase angle at least `edge` radians away from the real axis.
    pub fn angle(&mut self) -> f64 {
        let edge = self.cfg.real_axis_gap;
        let t = self.uni(edge, PI - edge);
        if self.rng.gen_bool(0.5) {
            t
        } else {
            -t
        }
    }

    pub fn lit(&self, re: f64, im: f64) -> HValue {
        HValue::parse(&format!("{re:.15e}"), &format!("{im:.15e}"), self.ctx).expect("finite literal")
    }

    pub fn polar(&self, r: f64, t: f64) -> HValue {
        self.lit(r * libm::cos(t), r * libm::sin(t))
    }

    /// modulus * U(1 - j, 1 + j) * phase, with the configured jitter j.
    pub fn around(&mut self, modulus: f64) -> HValue {
        let j = self.cfg.jitter;
        let r = modulus * self.uni(1.0 - j, 1.0 + j);
        let t = self.angle();
        self.polar(r, t)
    }

    /// A free complex parameter with modulus log-uniform in the band.
    pub fn free(&mut self) -> HValue {
        let (lo, hi) = self.cfg.magnitude_band;
        let r = libm::exp(self.uni(libm::log(lo), libm::log(hi)));
        let t = self.angle();
        self.polar(r, t)
    }

    pub fn frees(&mut self, n: usize) -> Vec<HValue> {
        (0..n).map(|_| self.free()).collect()
    }

    pub fn arounds(&mut self, n: usize, modulus: f64) -> Vec<HValue> {
        (0..n).map(|_| self.around(modulus)).collect()
    }

    /// A dyadic rational k/1024 in [lo, hi].
    pub fn dyadic(&mut self, lo: f64, hi: f64) -> HValue {
        let k = self.int(libm::ceil(lo * 1024.0) as i64, libm::floor(hi * 1024.0) as i64);
        HValue::from_ratio(k, 1024, self.ctx)
    }

    pub fn dyadics(&mut self, n: usize, lo: f64, hi: f64) -> Vec<HValue> {
        (0..n).map(|_| self.dyadic(lo, hi)).collect()
    }

    /// q with modulus in the configured range, optionally capped.
    pub fn draw_q(&mut self, cap: Option<f64>) -> Result<QBase> {
        let (lo, hi) = self.cfg.q_modulus_range;
        let hi = cap.map_or(hi, |c| hi.min(c).max(lo));
        let r = self.uni(lo, hi);
        let t = self.angle();
        QBase::new(self.polar(r, t))
    }

    pub fn qb(&self) -> &QBase {
        self.q.as_ref().expect("q-mode draw")
    }

    pub fn qpow(&self, k: i64) -> HValue {
        self.qb().pow(k)
    }

    pub fn ints(&mut self, n: usize, lo: i64, hi: i64) -> Vec<i64> {
        (0..n).map(|_| self.int(lo, hi)).collect()
    }
}

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{sum_box, Arith, Domain, Factor, LatticeSum, SumDiagnostics, TermSpec, TruncationPolicy};
use crate::mparith::{
    poch_classical, poch_classical_recip, qpoch_finite, qpoch_finite_recip, qpoch_inf, GammaProduct, HValue,
    PrecisionContext,
};

/// One side of an identity: a closed-form prefactor times an optional sum.
#[derive(Clone, Debug)]
pub struct SidePlan {
    pub prefactor: HValue,
    /// Smallest distance of any prefactor denominator factor from zero.
    pub clearance: f64,
    pub sum: Option<PlanSum>,
}

#[derive(Clone, Debug)]
pub enum PlanSum {
    Lattice(LatticeSum),
    Nested(NestedSum),
}

impl SidePlan {
    pub fn closed(pre: Prefactor) -> Self {
        Self { prefactor: pre.value, clearance: pre.clearance, sum: None }
    }

    pub fn with_sum(pre: Prefactor, sum: LatticeSum) -> Self {
        Self { prefactor: pre.value, clearance: pre.clearance, sum: Some(PlanSum::Lattice(sum)) }
    }

    pub fn lattice(&self) -> Option<&LatticeSum> {
        match &self.sum {
            Some(PlanSum::Lattice(l)) => Some(l),
            _ => None,
        }
    }

    /// True when no truncation is involved.
    pub fn is_finite(&self) -> bool {
        match &self.sum {
            None | Some(PlanSum::Nested(_)) => true,
            Some(PlanSum::Lattice(l)) => l.domain.is_finite(),
        }
    }

    pub fn evaluate(
        &self,
        policy: &TruncationPolicy,
        ctx: PrecisionContext,
        reference: bool,
    ) -> Result<(HValue, SumDiagnostics)> {
        let (s, d) = match &self.sum {
            None => {
                let mut d = SumDiagnostics::exact(0, 0);
                d.largest_term = self.prefactor.abs_f64();
                return Ok((self.prefactor.clone(), d));
            }
            Some(PlanSum::Lattice(l)) if reference => l.evaluate_reference(policy, ctx)?,
            Some(PlanSum::Lattice(l)) => l.evaluate(policy, ctx)?,
            Some(PlanSum::Nested(n)) => n.evaluate(ctx)?,
        };
        // diagnostics in the units of the whole side
        let scale = self.prefactor.abs_f64();
        let mut d = d;
        d.largest_term *= scale;
        d.largest_shell_tail *= scale;
        d.tail_threshold *= scale;
        Ok((&self.prefactor * &s, d))
    }

    /// Pole scan of every summand factor over the window at `radius`.
    pub fn scan(&self, radius: u32, clearance: f64, ctx: PrecisionContext) -> Result<()> {
        if self.clearance < clearance {
            return Err(Error::NearPole { distance: self.clearance, clearance });
        }
        match &self.sum {
            None => Ok(()),
            Some(PlanSum::Lattice(l)) => l.scan(radius, clearance, ctx),
            Some(PlanSum::Nested(n)) => n.scan(clearance, ctx),
        }
    }
}

/// A box sum whose summand also has factors indexed by the partial sums
/// x_1 + ... + x_i.
#[derive(Clone, Debug)]
pub struct NestedSum {
    pub arith: Arith,
    pub m: Vec<i64>,
    pub coord: Vec<Factor>,
    pub total: Factor,
    /// prefix[i] is indexed by x_1 + ... + x_{i+1}.
    pub prefix: Vec<Factor>,
}

impl NestedSum {
    pub fn term_at(&self, x: &[i64], ctx: PrecisionContext) -> Result<HValue> {
        let mut acc = HValue::one(ctx);
        for (k, f) in self.coord.iter().enumerate() {
            acc = &acc * &f.eval(&self.arith, x[k], ctx)?;
        }
        let mut part = 0;
        for (i, f) in self.prefix.iter().enumerate() {
            part += x[i];
            acc = &acc * &f.eval(&self.arith, part, ctx)?;
        }
        let tot: i64 = x.iter().sum();
        Ok(&acc * &self.total.eval(&self.arith, tot, ctx)?)
    }

    pub fn evaluate(&self, ctx: PrecisionContext) -> Result<(HValue, SumDiagnostics)> {
        sum_box(ctx, &self.m, |x| self.term_at(x, ctx))
    }

    fn scan(&self, clearance: f64, ctx: PrecisionContext) -> Result<()> {
        let tot: i64 = self.m.iter().sum();
        for (f, &mi) in self.coord.iter().zip(&self.m) {
            f.table(&self.arith, 0, mi, Some(clearance), ctx)?;
        }
        for f in self.prefix.iter().chain(core::iter::once(&self.total)) {
            f.table(&self.arith, 0, tot, Some(clearance), ctx)?;
        }
        Ok(())
    }
}

/// A closed-form product together with its pole clearance.
#[derive(Clone, Debug)]
pub struct Prefactor {
    pub value: HValue,
    pub clearance: f64,
}

/// Accumulates closed-form prefactors: infinite q-products, shifted
/// factorials, gamma ratios (in log space) and plain scalars.
pub(crate) struct Pre<'a> {
    arith: &'a Arith,
    ctx: PrecisionContext,
    acc: HValue,
    gamma: Option<GammaProduct>,
    clearance: f64,
}

impl<'a> Pre<'a> {
    pub fn new(arith: &'a Arith, ctx: PrecisionContext) -> Self {
        Self { arith, ctx, acc: HValue::one(ctx), gamma: None, clearance: f64::INFINITY }
    }

    fn note(&mut self, d: f64) {
        self.clearance = libm::fmin(self.clearance, d);
    }

    pub fn mul(&mut self, x: &HValue) -> &mut Self {
        self.acc = &self.acc * x;
        self
    }

    pub fn inf_num(&mut self, xs: &[HValue]) -> Result<&mut Self> {
        let q = self.arith.q().ok_or(Error::MissingParameter("q".into()))?;
        for x in xs {
            self.acc = &self.acc * &qpoch_inf(x, q);
        }
        Ok(self)
    }

    pub fn inf_den(&mut self, xs: &[HValue]) -> Result<&mut Self> {
        let q = self.arith.q().ok_or(Error::MissingParameter("q".into()))?.clone();
        for x in xs {
            // factors with |x q^j| < 1/2 are at distance > 1/2 from zero
            let mut cur = x.clone();
            while cur.log2_abs() >= -1.0 {
                self.note(cur.one_minus().abs_f64());
                cur = &cur * q.value();
            }
            let v = qpoch_inf(x, &q);
            if v.is_zero() {
                return Err(Error::DivisionByZeroPole { offset: 0 });
            }
            self.acc = self.acc.checked_div(&v)?;
        }
        Ok(self)
    }

    fn factors_note(&mut self, x: &HValue, lo: i64, hi: i64) {
        // distances of the j-th factors, lo <= j < hi
        match self.arith {
            Arith::Q(q) => {
                if lo < hi {
                    let mut cur = q.shift(x, lo);
                    for _ in lo..hi {
                        self.note(cur.one_minus().abs_f64());
                        cur = &cur * q.value();
                    }
                }
            }
            Arith::Classical => {
                for j in lo..hi {
                    self.note(x.add_i64(j).abs_f64());
                }
            }
        }
    }

    /// Multiplies (x)_k.
    pub fn poch_num(&mut self, x: &HValue, k: i64) -> Result<&mut Self> {
        if k < 0 {
            self.factors_note(x, k, 0);
        }
        let v = match self.arith {
            Arith::Q(q) => qpoch_finite(x, q, k)?,
            Arith::Classical => poch_classical(x, k)?,
        };
        self.acc = &self.acc * &v;
        Ok(self)
    }

    /// Divides by (x)_k.
    pub fn poch_den(&mut self, x: &HValue, k: i64) -> Result<&mut Self> {
        if k > 0 {
            self.factors_note(x, 0, k);
        }
        let v = match self.arith {
            Arith::Q(q) => qpoch_finite_recip(x, q, k)?,
            Arith::Classical => poch_classical_recip(x, k)?,
        };
        self.acc = &self.acc * &v;
        Ok(self)
    }

    pub fn poch_nums(&mut self, xs: &[HValue], k: i64) -> Result<&mut Self> {
        for x in xs {
            self.poch_num(x, k)?;
        }
        Ok(self)
    }

    pub fn poch_dens(&mut self, xs: &[HValue], k: i64) -> Result<&mut Self> {
        for x in xs {
            self.poch_den(x, k)?;
        }
        Ok(self)
    }

    fn gamma_note(&mut self, z: &HValue) {
        let (re, im) = z.to_f64_pair();
        if re < 0.5 {
            let fr = libm::fabs(re - libm::round(re));
            self.note(libm::hypot(fr, im));
        }
    }

    pub fn gamma_num(&mut self, z: &HValue) -> Result<&mut Self> {
        self.gamma_note(z);
        self.gamma.get_or_insert_with(|| GammaProduct::new(self.ctx)).num(z)?;
        Ok(self)
    }

    pub fn gamma_den(&mut self, z: &HValue) -> Result<&mut Self> {
        self.gamma_note(z);
        self.gamma.get_or_insert_with(|| GammaProduct::new(self.ctx)).den(z)?;
        Ok(self)
    }

    pub fn finish(&mut self) -> Prefactor {
        let mut value = self.acc.clone();
        if let Some(g) = &self.gamma {
            value = &value * &g.value();
        }
        Prefactor { value, clearance: self.clearance }
    }
}

/// Coordinate factors prod_k (u_i - u_k - m_k)_{x_i} / (1 + u_i - u_k)_{x_i}
/// (classical) or prod_k (q^{-m_k} u_i/u_k)_{x_i} / (q u_i/u_k)_{x_i}.
pub(crate) fn km_coord(arith: &Arith, u: &[HValue], m: &[i64]) -> Vec<Factor> {
    (0..u.len())
        .map(|i| {
            let mut f = Factor::new();
            for k in 0..u.len() {
                match arith {
                    Arith::Q(q) => {
                        let r = &u[i] / &u[k];
                        f = f.num(q.shift(&r, -m[k])).den(q.shift(&r, 1));
                    }
                    Arith::Classical => {
                        let d = &u[i] - &u[k];
                        f = f.num(d.sub_i64(m[k])).den(d.add_i64(1));
                    }
                }
            }
            f
        })
        .collect()
}

/// Appends `extra[i]` to each coordinate factor.
pub(crate) fn extend(mut base: Vec<Factor>, extra: Vec<Factor>) -> Vec<Factor> {
    for (b, e) in base.iter_mut().zip(extra) {
        b.num.extend(e.num);
        b.den.extend(e.den);
        if let Some(p) = e.power {
            *b = core::mem::take(b).power(p);
        }
    }
    base
}

/// Index s with x = q^s (q-case) or x = s (classical), if any.
fn lattice_index(arith: &Arith, x: &HValue) -> Option<i64> {
    let ctx = x.ctx();
    let slack = ctx.eps() * 4294967296.0;
    match arith {
        Arith::Q(q) => {
            if x.is_zero() {
                return None;
            }
            let s = libm::round(x.log2_abs() / q.log2_abs());
            if !(libm::fabs(s) < 1e6) {
                return None;
            }
            let s = s as i64;
            let r = (x * &q.pow(-s)).one_minus().abs_f64();
            (r <= slack).then_some(s)
        }
        Arith::Classical => {
            let (re, im) = x.to_f64_pair();
            if !(libm::fabs(re) < 1e6) {
                return None;
            }
            let s = libm::round(re) as i64;
            let r = x.sub_i64(s).abs_f64();
            (r <= slack * libm::fmax(1.0, libm::fabs(re)) && libm::fabs(im) <= slack).then_some(s)
        }
    }
}

/// Index bounds outside which a factor vanishes identically: a numerator
/// (q^{-j})_k is zero for k > j, a reciprocal (q^j)_k is zero for k <= -j.
pub(crate) fn factor_support(arith: &Arith, f: &Factor) -> (Option<i64>, Option<i64>) {
    let mut lo: Option<i64> = None;
    let mut hi: Option<i64> = None;
    for x in &f.num {
        if let Some(s) = lattice_index(arith, x) {
            let j = -s;
            if j >= 0 {
                hi = Some(hi.map_or(j, |h| h.min(j)));
            }
        }
    }
    for x in &f.den {
        if let Some(j) = lattice_index(arith, x) {
            if j >= 1 {
                let b = 1 - j;
                lo = Some(lo.map_or(b, |l| l.max(b)));
            }
        }
    }
    (lo, hi)
}

/// Replaces an infinite domain by a finite one when the summand's factors
/// vanish outside a bounded region.
pub(crate) fn terminate(domain: Domain, term: &TermSpec) -> Domain {
    let n = domain.dim();
    let mut lo: Vec<Option<i64>> = vec![None; n];
    let mut hi: Vec<Option<i64>> = vec![None; n];
    for (k, f) in term.coord.iter().enumerate().take(n) {
        let (l, h) = factor_support(&term.arith, f);
        lo[k] = l;
        hi[k] = h;
    }
    let (_, tot_hi) = factor_support(&term.arith, &term.total);
    let all = |v: &[Option<i64>]| v.iter().all(|x| x.is_some());
    let unwrap = |v: &[Option<i64>]| v.iter().map(|x| x.unwrap()).collect::<Vec<i64>>();
    match domain {
        Domain::Hyperplane(_, total) => {
            if all(&hi) {
                let h = unwrap(&hi);
                let sh: i64 = h.iter().sum();
                for k in 0..n {
                    let b = total - (sh - h[k]);
                    lo[k] = Some(lo[k].map_or(b, |l| l.max(b)));
                }
            } else if all(&lo) {
                let l = unwrap(&lo);
                let sl: i64 = l.iter().sum();
                for k in 0..n {
                    let b = total - (sl - l[k]);
                    hi[k] = Some(hi[k].map_or(b, |h| h.min(b)));
                }
            }
            if all(&lo) && all(&hi) {
                Domain::BoundedHyperplane(unwrap(&lo), unwrap(&hi), total)
            } else {
                Domain::Hyperplane(n, total)
            }
        }
        Domain::Orthant(_) => {
            if all(&hi) {
                let h = unwrap(&hi);
                Domain::BoundedBox(vec![0; n], h)
            } else if let Some(t) = tot_hi {
                Domain::Simplex(n, t)
            } else {
                Domain::Orthant(n)
            }
        }
        Domain::Lattice(_) => {
            if all(&lo) && all(&hi) {
                Domain::BoundedBox(unwrap(&lo), unwrap(&hi))
            } else {
                Domain::Lattice(n)
            }
        }
        d => d,
    }
}

/// A lattice sum whose domain is tightened to the summand's support.
pub(crate) fn series(domain: Domain, term: TermSpec) -> LatticeSum {
    let d = terminate(domain, &term);
    LatticeSum::new(d, term)
}

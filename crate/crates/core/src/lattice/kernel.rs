//! Separable summands and the index sets they are summed over.
//!
//! Every series in the registry has a summand of the form
//!
//! ```text
//! Delta-ratio(y) * prod_k F_k(y_k) * G(|y|) * prod_k (1 - c_k q^{y_k+|y|}) / (1 - c_k)
//! ```
//!
//! where each F_k and G is a ratio of shifted factorials times a power. The
//! reference path evaluates each factor from scratch at every index. The
//! accelerated path tabulates F_k and G over the needed index window by the
//! recurrence (a)_{k+1} = (a)_k (1 - a q^k), then multiplies table entries.

use alloc::vec;
use alloc::vec::Vec;

use super::engine;
use super::{vandermonde_ratio, vandermonde_ratio_additive, SumDiagnostics, TruncationPolicy};
use crate::error::{Error, Result};
use crate::mparith::{
    poch_classical, poch_classical_recip, qpoch_finite, qpoch_finite_recip, HValue,
    PrecisionContext, QBase,
};

/// Shifted factorials in base q, or classical rising factorials.
#[derive(Clone, Debug)]
pub enum Arith {
    Q(QBase),
    Classical,
}

impl Arith {
    pub fn q(&self) -> Option<&QBase> {
        match self {
            Arith::Q(q) => Some(q),
            Arith::Classical => None,
        }
    }

    fn poch(&self, x: &HValue, k: i64) -> Result<HValue> {
        match self {
            Arith::Q(q) => qpoch_finite(x, q, k),
            Arith::Classical => poch_classical(x, k),
        }
    }

    fn poch_recip(&self, x: &HValue, k: i64) -> Result<HValue> {
        match self {
            Arith::Q(q) => qpoch_finite_recip(x, q, k),
            Arith::Classical => poch_classical_recip(x, k),
        }
    }

    /// The j-th factor of (x)_k given the running shift `cur` = x q^j or x + j.
    fn factor(&self, cur: &HValue) -> HValue {
        match self {
            Arith::Q(_) => cur.one_minus(),
            Arith::Classical => cur.clone(),
        }
    }

    fn step_up(&self, cur: &HValue) -> HValue {
        match self {
            Arith::Q(q) => cur * q.value(),
            Arith::Classical => cur.add_i64(1),
        }
    }

    fn step_down(&self, cur: &HValue) -> HValue {
        match self {
            Arith::Q(q) => cur * q.inverse(),
            Arith::Classical => cur.sub_i64(1),
        }
    }
}

/// `prod num (x)_k / prod den (x)_k * power^k` as a function of one index k.
#[derive(Clone, Debug, Default)]
pub struct Factor {
    pub num: Vec<HValue>,
    pub den: Vec<HValue>,
    pub power: Option<HValue>,
}

impl Factor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, x: HValue) -> Self {
        self.num.push(x);
        self
    }

    pub fn den(mut self, x: HValue) -> Self {
        self.den.push(x);
        self
    }

    pub fn nums(mut self, xs: impl IntoIterator<Item = HValue>) -> Self {
        self.num.extend(xs);
        self
    }

    pub fn dens(mut self, xs: impl IntoIterator<Item = HValue>) -> Self {
        self.den.extend(xs);
        self
    }

    /// Multiplies `power^k` into the factor.
    pub fn power(mut self, x: HValue) -> Self {
        self.power = Some(match self.power {
            Some(p) => &p * &x,
            None => x,
        });
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.num.is_empty() && self.den.is_empty() && self.power.is_none()
    }

    /// Direct evaluation at index k.
    ///
    /// Factors that vanish in the direction of travel away from 0 are taken
    /// first, so a zero numerator (k >= 0) or zero reciprocal denominator
    /// (k < 0) short-circuits the poles beyond it.
    pub fn eval(&self, arith: &Arith, k: i64, ctx: PrecisionContext) -> Result<HValue> {
        let mut acc = HValue::one(ctx);
        let (first, second): (&[HValue], &[HValue]) = if k >= 0 {
            (&self.num, &self.den)
        } else {
            (&self.den, &self.num)
        };
        for x in first {
            let v = if k >= 0 { arith.poch(x, k)? } else { arith.poch_recip(x, k)? };
            if v.is_zero() {
                return Ok(v);
            }
            acc = &acc * &v;
        }
        for x in second {
            let v = if k >= 0 { arith.poch_recip(x, k)? } else { arith.poch(x, k)? };
            acc = &acc * &v;
        }
        if let Some(p) = &self.power {
            acc = &acc * &p.powi(k)?;
        }
        Ok(acc)
    }

    /// Tabulates the factor on [lo, hi] (which must contain 0 or be
    /// adjacent to it) by the one-step recurrence.
    pub(crate) fn table(
        &self,
        arith: &Arith,
        lo: i64,
        hi: i64,
        clearance: Option<f64>,
        ctx: PrecisionContext,
    ) -> Result<Table> {
        let a = lo.min(0);
        let b = hi.max(0);
        let len = (b - a + 1) as usize;
        let mut vals = vec![HValue::zero(ctx); len];
        let mut hits = 0u64;
        let at = |k: i64| (k - a) as usize;
        vals[at(0)] = HValue::one(ctx);
        let near = |f: &HValue| -> Result<()> {
            if let Some(c) = clearance {
                let d = f.abs_f64();
                if d < c {
                    return Err(Error::NearPole { distance: d, clearance: c });
                }
            }
            Ok(())
        };
        let power_inv = match &self.power {
            Some(p) if a < 0 => Some(p.recip()?),
            _ => None,
        };

        // upward: v(k+1) = v(k) * prod(num factor_k) / prod(den factor_k) * power
        let mut num_cur = self.num.clone();
        let mut den_cur = self.den.clone();
        for k in 0..b {
            let mut v = vals[at(k)].clone();
            let mut dprod = HValue::one(ctx);
            for x in &den_cur {
                let f = arith.factor(x);
                near(&f)?;
                dprod = &dprod * &f;
            }
            if !v.is_zero() {
                for x in &num_cur {
                    v = &v * &arith.factor(x);
                }
                if let Some(p) = &self.power {
                    v = &v * p;
                }
            }
            vals[at(k + 1)] = if v.is_zero() {
                if dprod.is_zero() {
                    hits += 1;
                }
                v
            } else if dprod.is_zero() {
                return Err(Error::DivisionByZeroPole { offset: k });
            } else {
                v.checked_div(&dprod)?
            };
            num_cur.iter_mut().for_each(|x| *x = arith.step_up(x));
            den_cur.iter_mut().for_each(|x| *x = arith.step_up(x));
        }

        // downward: v(k-1) = v(k) * prod(den factor_{k-1}) / prod(num factor_{k-1}) / power
        let mut num_cur: Vec<HValue> = self.num.iter().map(|x| arith.step_down(x)).collect();
        let mut den_cur: Vec<HValue> = self.den.iter().map(|x| arith.step_down(x)).collect();
        let mut k = 0;
        while k > a {
            let mut v = vals[at(k)].clone();
            let mut nprod = HValue::one(ctx);
            for x in &num_cur {
                let f = arith.factor(x);
                near(&f)?;
                nprod = &nprod * &f;
            }
            if !v.is_zero() {
                for x in &den_cur {
                    v = &v * &arith.factor(x);
                }
                if let Some(pi) = &power_inv {
                    v = &v * pi;
                }
            }
            vals[at(k - 1)] = if v.is_zero() {
                if nprod.is_zero() {
                    hits += 1;
                }
                v
            } else if nprod.is_zero() {
                return Err(Error::DivisionByZeroPole { offset: k - 1 });
            } else {
                v.checked_div(&nprod)?
            };
            num_cur.iter_mut().for_each(|x| *x = arith.step_down(x));
            den_cur.iter_mut().for_each(|x| *x = arith.step_down(x));
            k -= 1;
        }
        Ok(Table { lo: a, vals, hits })
    }
}

/// Values of a one-index factor on a contiguous window.
#[derive(Clone, Debug)]
pub(crate) struct Table {
    lo: i64,
    vals: Vec<HValue>,
    hits: u64,
}

impl Table {
    fn get(&self, k: i64) -> &HValue {
        &self.vals[(k - self.lo) as usize]
    }
}

/// A separable summand.
#[derive(Clone, Debug)]
pub struct TermSpec {
    pub arith: Arith,
    /// Vandermonde nodes (multiplicative in the q-case, additive otherwise).
    pub nodes: Option<Vec<HValue>>,
    /// One factor per coordinate, indexed by y_k; empty means none.
    pub coord: Vec<Factor>,
    /// Factor indexed by |y|.
    pub total: Factor,
    /// Coefficients c_k of prod_k (1 - c_k q^{y_k + |y|}) / (1 - c_k).
    pub coupled: Option<Vec<HValue>>,
}

impl TermSpec {
    pub fn new(arith: Arith) -> Self {
        Self { arith, nodes: None, coord: Vec::new(), total: Factor::new(), coupled: None }
    }

    pub fn nodes(mut self, z: Vec<HValue>) -> Self {
        self.nodes = Some(z);
        self
    }

    pub fn coord(mut self, f: Vec<Factor>) -> Self {
        self.coord = f;
        self
    }

    pub fn total(mut self, f: Factor) -> Self {
        self.total = f;
        self
    }

    pub fn coupled(mut self, c: Vec<HValue>) -> Self {
        self.coupled = Some(c);
        self
    }

    /// Reference evaluation from scratch at one index.
    pub fn eval(&self, y: &[i64], ctx: PrecisionContext) -> Result<HValue> {
        let mut acc = HValue::one(ctx);
        for (k, f) in self.coord.iter().enumerate() {
            let v = f.eval(&self.arith, y[k], ctx)?;
            if v.is_zero() {
                return Ok(v);
            }
            acc = &acc * &v;
        }
        let tot: i64 = y.iter().sum();
        let v = self.total.eval(&self.arith, tot, ctx)?;
        if v.is_zero() {
            return Ok(v);
        }
        acc = &acc * &v;
        if let Some(z) = &self.nodes {
            let v = match &self.arith {
                Arith::Q(q) => vandermonde_ratio(z, y, q)?,
                Arith::Classical => vandermonde_ratio_additive(z, y)?,
            };
            acc = &acc * &v;
        }
        if let Some(c) = &self.coupled {
            let q = self.arith.q().ok_or(Error::InvalidDimension("coupled factor needs q".into()))?;
            for (k, ck) in c.iter().enumerate() {
                let num = (ck * &q.pow(y[k] + tot)).one_minus();
                let den = ck.one_minus();
                acc = &acc * &num.checked_div(&den)?;
            }
        }
        Ok(acc)
    }

    fn prepare(
        &self,
        dim: usize,
        coord_rng: &[(i64, i64)],
        tot_rng: (i64, i64),
        clearance: Option<f64>,
        ctx: PrecisionContext,
    ) -> Result<Prepared> {
        let coord = self
            .coord
            .iter()
            .zip(coord_rng)
            .map(|(f, &(lo, hi))| f.table(&self.arith, lo, hi, clearance, ctx))
            .collect::<Result<Vec<_>>>()?;
        let total = self.total.table(&self.arith, tot_rng.0, tot_rng.1, clearance, ctx)?;
        let nodes = match &self.nodes {
            None => None,
            Some(z) => {
                if z.len() != dim {
                    return Err(Error::InvalidDimension(alloc::format!("{} nodes in dimension {}", z.len(), dim)));
                }
                let mut delta = HValue::one(ctx);
                for i in 0..dim {
                    for j in (i + 1)..dim {
                        let d = &z[i] - &z[j];
                        if d.is_zero() {
                            return Err(Error::DegenerateNodes);
                        }
                        if let Some(c) = clearance {
                            let rel = d.abs_f64() / libm::fmax(z[i].abs_f64(), z[j].abs_f64());
                            if rel < c {
                                return Err(Error::NearPole { distance: rel, clearance: c });
                            }
                        }
                        delta = &delta * &d;
                    }
                }
                let inv = delta.recip()?;
                let shifted = match &self.arith {
                    Arith::Q(_) => NodeTables::Mult(
                        z.iter()
                            .zip(coord_rng)
                            .map(|(zi, &(lo, hi))| shifted_nodes(&self.arith, zi, lo, hi))
                            .collect(),
                    ),
                    Arith::Classical => {
                        let mut d = Vec::new();
                        for i in 0..dim {
                            for j in (i + 1)..dim {
                                d.push(&z[i] - &z[j]);
                            }
                        }
                        NodeTables::Add(d)
                    }
                };
                Some((shifted, inv))
            }
        };
        let coupled = match &self.coupled {
            None => None,
            Some(c) => {
                let q = self.arith.q().ok_or(Error::InvalidDimension("coupled factor needs q".into()))?;
                let lo = coord_rng.iter().map(|r| r.0).min().unwrap_or(0) + tot_rng.0;
                let hi = coord_rng.iter().map(|r| r.1).max().unwrap_or(0) + tot_rng.1;
                let mut den = HValue::one(ctx);
                for ck in c {
                    let f = ck.one_minus();
                    if let Some(cl) = clearance {
                        let d = f.abs_f64();
                        if d < cl {
                            return Err(Error::NearPole { distance: d, clearance: cl });
                        }
                    }
                    den = &den * &f;
                }
                let pow = shifted_nodes(&Arith::Q(q.clone()), &HValue::one(ctx), lo, hi);
                Some((c.clone(), pow, den.recip()?))
            }
        };
        Ok(Prepared { coord, total, nodes, coupled })
    }
}

fn shifted_nodes(arith: &Arith, z: &HValue, lo: i64, hi: i64) -> Table {
    let q = arith.q().expect("multiplicative nodes");
    let mut vals = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    let mut x = q.shift(z, lo);
    for _ in lo..=hi {
        vals.push(x.clone());
        x = &x * q.value();
    }
    Table { lo, vals, hits: 0 }
}

enum NodeTables {
    Mult(Vec<Table>),
    Add(Vec<HValue>),
}

struct Prepared {
    coord: Vec<Table>,
    total: Table,
    nodes: Option<(NodeTables, HValue)>,
    coupled: Option<(Vec<HValue>, Table, HValue)>,
}

impl Prepared {
    fn hits(&self) -> u64 {
        self.coord.iter().map(|t| t.hits).sum::<u64>() + self.total.hits
    }

    fn term(&self, y: &[i64]) -> HValue {
        let tot: i64 = y.iter().sum();
        let mut acc = self.total.get(tot).clone();
        if acc.is_zero() {
            return acc;
        }
        for (k, t) in self.coord.iter().enumerate() {
            let v = t.get(y[k]);
            if v.is_zero() {
                return v.clone();
            }
            acc = &acc * v;
        }
        if let Some((tables, inv)) = &self.nodes {
            match tables {
                NodeTables::Mult(w) => {
                    for i in 0..y.len() {
                        for j in (i + 1)..y.len() {
                            acc = &acc * &(w[i].get(y[i]) - w[j].get(y[j]));
                        }
                    }
                }
                NodeTables::Add(d) => {
                    let mut idx = 0;
                    for i in 0..y.len() {
                        for j in (i + 1)..y.len() {
                            acc = &acc * &d[idx].add_i64(y[i] - y[j]);
                            idx += 1;
                        }
                    }
                }
            }
            acc = &acc * inv;
        }
        if let Some((c, pow, inv)) = &self.coupled {
            for (k, ck) in c.iter().enumerate() {
                acc = &acc * &(ck * pow.get(y[k] + tot)).one_minus();
            }
            acc = &acc * inv;
        }
        acc
    }
}

/// Index set of a lattice sum.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// 0 <= x_i <= m_i.
    Box(Vec<i64>),
    /// 0 <= x_i <= m_i, |x| = N.
    BoxHyperplane(Vec<i64>, i64),
    /// x_i >= 0, |x| <= N, in the given dimension.
    Simplex(usize, i64),
    /// lo_i <= x_i <= hi_i.
    BoundedBox(Vec<i64>, Vec<i64>),
    /// lo_i <= x_i <= hi_i, |x| = N.
    BoundedHyperplane(Vec<i64>, Vec<i64>, i64),
    /// y in Z^n with |y| = N (truncated by the policy radius).
    Hyperplane(usize, i64),
    /// y_i >= 0 (truncated by total degree).
    Orthant(usize),
    /// All of Z^n (truncated by max |y_i|).
    Lattice(usize),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Box(m) | Domain::BoxHyperplane(m, _) => m.len(),
            Domain::BoundedBox(lo, _) | Domain::BoundedHyperplane(lo, _, _) => lo.len(),
            Domain::Simplex(n, _) | Domain::Hyperplane(n, _) | Domain::Orthant(n) | Domain::Lattice(n) => *n,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Domain::Hyperplane(..) | Domain::Orthant(_) | Domain::Lattice(_))
    }

    /// Coordinate windows and |y| window covering the domain at `radius`.
    pub fn windows(&self, radius: i64) -> (Vec<(i64, i64)>, (i64, i64)) {
        let n = self.dim();
        match self {
            Domain::Box(m) => (m.iter().map(|&v| (0, v)).collect(), (0, m.iter().sum())),
            Domain::BoxHyperplane(m, t) => (m.iter().map(|&v| (0, v.min(*t).max(0))).collect(), (*t, *t)),
            Domain::Simplex(_, t) => (vec![(0, (*t).max(0)); n], (0, (*t).max(0))),
            Domain::BoundedBox(lo, hi) => (
                lo.iter().zip(hi).map(|(&a, &b)| (a, b)).collect(),
                (lo.iter().sum(), hi.iter().sum()),
            ),
            Domain::BoundedHyperplane(lo, hi, t) => (lo.iter().zip(hi).map(|(&a, &b)| (a, b)).collect(), (*t, *t)),
            Domain::Hyperplane(_, t) => (vec![(-radius, radius); n], (*t, *t)),
            Domain::Orthant(_) => (vec![(0, radius); n], (0, radius)),
            Domain::Lattice(_) => (vec![(-radius, radius); n], (-(n as i64) * radius, n as i64 * radius)),
        }
    }
}

/// A summand together with its index set.
#[derive(Clone, Debug)]
pub struct LatticeSum {
    pub domain: Domain,
    pub term: TermSpec,
}

impl LatticeSum {
    pub fn new(domain: Domain, term: TermSpec) -> Self {
        Self { domain, term }
    }

    /// Reference summand at one index.
    pub fn term_at(&self, y: &[i64], ctx: PrecisionContext) -> Result<HValue> {
        self.term.eval(y, ctx)
    }

    /// Sums with tabulated factors.
    pub fn evaluate(&self, policy: &TruncationPolicy, ctx: PrecisionContext) -> Result<(HValue, SumDiagnostics)> {
        let (cw, tw) = self.domain.windows(policy.radius as i64);
        let prep = self.term.prepare(self.domain.dim(), &cw, tw, None, ctx)?;
        let (v, mut d) = self.run(policy, ctx, |y| Ok(prep.term(y)))?;
        d.pole_hits += prep.hits();
        Ok((v, d))
    }

    /// Sums with every summand computed from scratch.
    pub fn evaluate_reference(&self, policy: &TruncationPolicy, ctx: PrecisionContext) -> Result<(HValue, SumDiagnostics)> {
        self.run(policy, ctx, |y| self.term.eval(y, ctx))
    }

    /// Checks every denominator factor over the window at `radius` stays at
    /// least `clearance` away from zero.
    pub fn scan(&self, radius: u32, clearance: f64, ctx: PrecisionContext) -> Result<()> {
        let (cw, tw) = self.domain.windows(radius as i64);
        self.term.prepare(self.domain.dim(), &cw, tw, Some(clearance), ctx).map(|_| ())
    }

    fn run<F>(&self, policy: &TruncationPolicy, ctx: PrecisionContext, term: F) -> Result<(HValue, SumDiagnostics)>
    where
        F: FnMut(&[i64]) -> Result<HValue>,
    {
        match &self.domain {
            Domain::Box(m) => engine::sum_box(ctx, m, term),
            Domain::BoxHyperplane(m, t) => engine::sum_box_hyperplane(ctx, m, *t, term),
            Domain::Simplex(n, t) => engine::sum_simplex(ctx, *n, *t, term),
            Domain::BoundedBox(lo, hi) => engine::sum_bounded_box(ctx, lo, hi, term),
            Domain::BoundedHyperplane(lo, hi, t) => engine::sum_bounded_hyperplane(ctx, lo, hi, *t, term),
            Domain::Hyperplane(n, t) => engine::sum_hyperplane_bilateral(ctx, *n, *t, policy, term),
            Domain::Orthant(n) => engine::sum_orthant(ctx, *n, policy, term),
            Domain::Lattice(n) => engine::sum_lattice_bilateral(ctx, *n, policy, term),
        }
    }
}

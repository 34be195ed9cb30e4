//! Ordinary hypergeometric analogues (q -> 1).

use alloc::vec;
use alloc::vec::Vec;

use super::params::ParamSet;
use super::plan::{extend, km_coord, series, NestedSum, PlanSum, Pre, SidePlan};
use crate::error::Result;
use crate::lattice::{Arith, Domain, Factor, LatticeSum, TermSpec};
use crate::mparith::{HValue, PrecisionContext};

struct Cl<'a> {
    ps: &'a ParamSet,
    arith: Arith,
    ctx: PrecisionContext,
}

impl<'a> Cl<'a> {
    fn new(ps: &'a ParamSet) -> Self {
        Self { ps, arith: Arith::Classical, ctx: ps.ctx }
    }

    fn v(&self, name: &str) -> Result<Vec<HValue>> {
        Ok(self.ps.vector(name)?.to_vec())
    }

    fn s(&self, name: &str) -> Result<HValue> {
        Ok(self.ps.scalar(name)?.clone())
    }

    fn ints(&self, name: &str) -> Result<Vec<i64>> {
        Ok(self.ps.int_vec(name)?.to_vec())
    }

    fn int(&self, k: i64) -> HValue {
        HValue::from_i64(k, self.ctx)
    }

    fn sum(&self, xs: &[HValue]) -> HValue {
        let mut acc = HValue::zero(self.ctx);
        for x in xs {
            acc = &acc + x;
        }
        acc
    }

    fn pre(&self) -> Pre<'_> {
        Pre::new(&self.arith, self.ctx)
    }

    fn term_nodes(&self, z: &[HValue]) -> TermSpec {
        let t = TermSpec::new(self.arith.clone());
        if z.len() >= 2 {
            t.nodes(z.to_vec())
        } else {
            t
        }
    }

    /// Box sum with nodes c and coordinate factors
    /// prod_k (c_i - c_k - m_k)_{x_i}/(1 + c_i - c_k)_{x_i} times `extra`.
    fn cbox(&self, c: &[HValue], m: &[i64], extra: Vec<Factor>, total: Factor) -> LatticeSum {
        let coord = extend(km_coord(&self.arith, c, m), extra);
        LatticeSum::new(Domain::Box(m.to_vec()), self.term_nodes(c).coord(coord).total(total))
    }
}

fn sign(m: i64) -> i64 {
    if m % 2 == 0 {
        1
    } else {
        -1
    }
}

struct Km {
    c: Vec<HValue>,
    m: Vec<i64>,
    a: HValue,
    b: HValue,
}

fn km_params(cl: &Cl) -> Result<Km> {
    Ok(Km { c: cl.v("c")?, m: cl.ints("m")?, a: cl.s("a")?, b: cl.s("b")? })
}

/// Pairs (c_i, m_i) with m_i != 0; the ratio (c + m)_k / (c)_k is 1 otherwise.
fn shifted<'a>(c: &'a [HValue], m: &'a [i64]) -> impl Iterator<Item = (&'a HValue, i64)> + 'a {
    c.iter().zip(m).filter(|(_, &mi)| mi != 0).map(|(ci, &mi)| (ci, mi))
}

/// sum_k (a, b, c_i + m_i)_k / (d, 1, c_i)_k as a one-variable series.
fn f_series(cl: &Cl, k: &Km, d: &HValue) -> LatticeSum {
    let f = Factor::new()
        .num(k.a.clone())
        .num(k.b.clone())
        .nums(shifted(&k.c, &k.m).map(|(ci, mi)| ci.add_i64(mi)))
        .den(d.clone())
        .den(cl.int(1))
        .dens(shifted(&k.c, &k.m).map(|(ci, _)| ci.clone()));
    series(Domain::Orthant(1), TermSpec::new(cl.arith.clone()).coord(vec![f]))
}

pub(crate) fn km_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let k = km_params(&cl)?;
    let s = f_series(&cl, &k, &k.b.add_i64(1));
    Ok(SidePlan::with_sum(cl.pre().finish(), s))
}

pub(crate) fn km_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let Km { c, m, a, b } = km_params(&cl)?;
    let mut pre = cl.pre();
    pre.gamma_num(&b.add_i64(1))?.gamma_num(&a.one_minus())?.gamma_den(&(&b - &a).add_i64(1))?;
    for (ci, &mi) in c.iter().zip(&m) {
        pre.poch_num(&(ci - &b), mi)?.poch_den(ci, mi)?;
    }
    Ok(SidePlan::closed(pre.finish()))
}

pub(crate) fn kmg_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let k = km_params(&cl)?;
    let s = f_series(&cl, &k, &cl.s("d")?);
    Ok(SidePlan::with_sum(cl.pre().finish(), s))
}

/// Gamma(d) Gamma(d-a-b-shift) / (Gamma(d-a) Gamma(d-b)).
fn gauss_gamma(pre: &mut Pre, a: &HValue, b: &HValue, d: &HValue, shift: i64) -> Result<()> {
    pre.gamma_num(d)?.gamma_num(&(&(d - a) - b).sub_i64(shift))?;
    pre.gamma_den(&(d - a))?.gamma_den(&(d - b))?;
    Ok(())
}

pub(crate) fn kmg_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let Km { c, m, a, b } = km_params(&cl)?;
    let d = cl.s("d")?;
    let mm: i64 = m.iter().sum();
    let mut pre = cl.pre();
    gauss_gamma(&mut pre, &a, &b, &d, 0)?;
    for (ci, &mi) in c.iter().zip(&m) {
        pre.poch_num(&(ci - &d).add_i64(1), mi)?.poch_den(ci, mi)?;
    }
    pre.poch_num(&a, mm)?.poch_den(&(&(&a + &b) - &d).add_i64(1), mm)?;
    let extra = c.iter().map(|ci| Factor::new().num(ci - &a).den((ci - &d).add_i64(1))).collect();
    let total = Factor::new().num((&b - &d).add_i64(1)).den((-&a).add_i64(1 - mm));
    Ok(SidePlan::with_sum(pre.finish(), cl.cbox(&c, &m, extra, total)))
}

pub(crate) fn us_lhs(ps: &ParamSet) -> Result<SidePlan> {
    kmg_lhs(ps)
}

pub(crate) fn us_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let Km { c, m, a, b } = km_params(&cl)?;
    let d = cl.s("d")?;
    let r = c.len();
    let mut pre = cl.pre();
    gauss_gamma(&mut pre, &a, &b, &d, 0)?;
    let coord = m.iter().map(|&mi| Factor::new().num(cl.int(-mi)).den(cl.int(1))).collect();
    let total = Factor::new()
        .num(a.clone())
        .num(b.clone())
        .den((&(&a + &b) - &d).add_i64(1))
        .den(c[r - 1].clone());
    let prefix = (0..r.saturating_sub(1))
        .map(|i| Factor::new().num(c[i + 1].add_i64(m[i + 1])).den(c[i].clone()))
        .collect();
    let nested = NestedSum { arith: cl.arith.clone(), m, coord, total, prefix };
    let pre = pre.finish();
    Ok(SidePlan { prefactor: pre.value, clearance: pre.clearance, sum: Some(PlanSum::Nested(nested)) })
}

pub(crate) fn bi_lhs(ps: &ParamSet) -> Result<SidePlan> {
    kmg_lhs(ps)
}

pub(crate) fn bi_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let Km { c, m, a, b } = km_params(&cl)?;
    let d = cl.s("d")?;
    let mm: i64 = m.iter().sum();
    let mut pre = cl.pre();
    pre.mul(&cl.int(sign(mm)));
    gauss_gamma(&mut pre, &a, &b, &d, mm)?;
    for (ci, &mi) in c.iter().zip(&m) {
        pre.poch_num(&(ci - &d).add_i64(1), mi)?;
    }
    let extra = c
        .iter()
        .map(|ci| Factor::new().num(ci - &a).num(ci - &b).den(ci.clone()).den((ci - &d).add_i64(1)))
        .collect();
    Ok(SidePlan::with_sum(pre.finish(), cl.cbox(&c, &m, extra, Factor::new())))
}

struct H {
    n: usize,
    a: Vec<HValue>,
    b: Vec<HValue>,
    z: Vec<HValue>,
    c: Vec<HValue>,
    m: Vec<i64>,
}

fn h_params(cl: &Cl, with_c: bool) -> Result<H> {
    let (c, m) = if with_c { (cl.v("c")?, cl.ints("m")?) } else { (Vec::new(), Vec::new()) };
    Ok(H { n: cl.ps.dim("n")? as usize, a: cl.v("a")?, b: cl.v("b")?, z: cl.v("z")?, c, m })
}

/// Summand Delta(z+y)/Delta(z) prod (c_i+z_k+m_i, a_i+z_k)_{y_k} / (c_i+z_k, b_i+z_k)_{y_k}.
fn h_term(cl: &Cl, h: &H) -> TermSpec {
    let coord = h
        .z
        .iter()
        .map(|zk| {
            Factor::new()
                .nums(shifted(&h.c, &h.m).map(|(ci, mi)| (ci + zk).add_i64(mi)))
                .nums(h.a.iter().map(|ai| ai + zk))
                .dens(shifted(&h.c, &h.m).map(|(ci, _)| ci + zk))
                .dens(h.b.iter().map(|bi| bi + zk))
        })
        .collect();
    cl.term_nodes(&h.z).coord(coord)
}

fn ha_lhs(ps: &ParamSet, with_c: bool) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let h = h_params(&cl, with_c)?;
    let s = series(Domain::Hyperplane(h.n, 0), h_term(&cl, &h));
    Ok(SidePlan::with_sum(cl.pre().finish(), s))
}

fn ha_rhs(ps: &ParamSet, with_c: bool) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let H { n, a, b, z, c, m } = h_params(&cl, with_c)?;
    let (sa, sb, sz) = (cl.sum(&a), cl.sum(&b), cl.sum(&z));
    let mm: i64 = m.iter().sum();
    let nn = n as i64;
    let mut pre = cl.pre();
    pre.gamma_num(&(&sb - &sa).add_i64(1 - mm - nn))?;
    pre.gamma_den(&(-&(&sa + &sz)).add_i64(1 - mm))?;
    pre.gamma_den(&(&sb + &sz).add_i64(1 - nn))?;
    for i in 0..n {
        for k in 0..n {
            pre.gamma_num(&(-&(&a[k] + &z[i])).add_i64(1))?;
            pre.gamma_num(&(&b[i] + &z[k]))?;
            pre.gamma_den(&(&b[i] - &a[k]))?;
            pre.gamma_den(&(&z[k] - &z[i]).add_i64(1))?;
        }
    }
    for k in 0..n {
        for (ci, &mi) in c.iter().zip(&m) {
            pre.poch_num(&(ci - &b[k]).add_i64(1), mi)?;
            pre.poch_den(&(ci + &z[k]), mi)?;
        }
    }
    let pre = pre.finish();
    if c.is_empty() {
        return Ok(SidePlan::closed(pre));
    }
    let extra = c
        .iter()
        .map(|ci| {
            Factor::new().nums(a.iter().map(|ak| ci - ak)).dens(b.iter().map(|bk| (ci - bk).add_i64(1)))
        })
        .collect();
    let total = Factor::new().num(&cl.int(nn) - &(&sb + &sz)).den((-&(&sa + &sz)).add_i64(1 - mm));
    Ok(SidePlan::with_sum(pre, cl.cbox(&c, &m, extra, total)))
}

pub(crate) fn h5_lhs(ps: &ParamSet) -> Result<SidePlan> {
    ha_lhs(ps, false)
}

pub(crate) fn h5_rhs(ps: &ParamSet) -> Result<SidePlan> {
    ha_rhs(ps, false)
}

pub(crate) fn tha_lhs(ps: &ParamSet) -> Result<SidePlan> {
    ha_lhs(ps, true)
}

pub(crate) fn tha_rhs(ps: &ParamSet) -> Result<SidePlan> {
    ha_rhs(ps, true)
}

fn hb_lhs(ps: &ParamSet, with_c: bool) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let h = h_params(&cl, with_c)?;
    let s = series(Domain::Lattice(h.n), h_term(&cl, &h));
    Ok(SidePlan::with_sum(cl.pre().finish(), s))
}

fn hb_rhs(ps: &ParamSet, with_c: bool) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let H { n, a, b, z, c, m } = h_params(&cl, with_c)?;
    let (sa, sb) = (cl.sum(&a), cl.sum(&b));
    let mm: i64 = m.iter().sum();
    let nn = n as i64;
    let mut pre = cl.pre();
    pre.mul(&cl.int(sign(mm)));
    pre.gamma_num(&(&sb - &sa).sub_i64(mm + nn))?;
    for bi in &b {
        for ak in &a {
            pre.gamma_den(&(bi - ak))?;
        }
    }
    for zi in &z {
        for zk in &z {
            pre.gamma_den(&(zk - zi).add_i64(1))?;
        }
    }
    for zk in &z {
        for (ai, bi) in a.iter().zip(&b) {
            pre.gamma_num(&(-&(ai + zk)).add_i64(1))?;
            pre.gamma_num(&(bi + zk))?;
        }
    }
    for (ci, &mi) in c.iter().zip(&m) {
        for bk in &b {
            pre.poch_num(&(ci - bk).add_i64(1), mi)?;
        }
        for zk in &z {
            pre.poch_den(&(ci + zk), mi)?;
        }
    }
    let pre = pre.finish();
    if c.is_empty() {
        return Ok(SidePlan::closed(pre));
    }
    let extra = c
        .iter()
        .map(|ci| {
            Factor::new().nums(a.iter().map(|ak| ci - ak)).dens(b.iter().map(|bk| (ci - bk).add_i64(1)))
        })
        .collect();
    Ok(SidePlan::with_sum(pre, cl.cbox(&c, &m, extra, Factor::new())))
}

pub(crate) fn h2_lhs(ps: &ParamSet) -> Result<SidePlan> {
    hb_lhs(ps, false)
}

pub(crate) fn h2_rhs(ps: &ParamSet) -> Result<SidePlan> {
    hb_rhs(ps, false)
}

pub(crate) fn thb_lhs(ps: &ParamSet) -> Result<SidePlan> {
    hb_lhs(ps, true)
}

pub(crate) fn thb_rhs(ps: &ParamSet) -> Result<SidePlan> {
    hb_rhs(ps, true)
}

struct H3 {
    c: Vec<HValue>,
    m: Vec<i64>,
    a: HValue,
    b: HValue,
    d: HValue,
    e: HValue,
}

fn h3_params(cl: &Cl) -> Result<H3> {
    Ok(H3 { c: cl.v("c")?, m: cl.ints("m")?, a: cl.s("a")?, b: cl.s("b")?, d: cl.s("d")?, e: cl.s("e")? })
}

pub(crate) fn h3_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let H3 { c, m, a, b, d, e } = h3_params(&cl)?;
    let f = Factor::new()
        .num(a)
        .num(b)
        .nums(shifted(&c, &m).map(|(ci, mi)| ci.add_i64(mi)))
        .den(d)
        .den(e)
        .dens(shifted(&c, &m).map(|(ci, _)| ci.clone()));
    let s = series(Domain::Lattice(1), TermSpec::new(cl.arith.clone()).coord(vec![f]));
    Ok(SidePlan::with_sum(cl.pre().finish(), s))
}

pub(crate) fn h3_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cl = Cl::new(ps);
    let H3 { c, m, a, b, d, e } = h3_params(&cl)?;
    let mm: i64 = m.iter().sum();
    let mut pre = cl.pre();
    pre.mul(&cl.int(sign(mm)));
    for (ci, &mi) in c.iter().zip(&m) {
        pre.poch_num(&(ci - &d).add_i64(1), mi)?;
        pre.poch_num(&(ci - &e).add_i64(1), mi)?;
        pre.poch_den(ci, mi)?;
    }
    pre.gamma_num(&(&(&(&d + &e) - &a) - &b).sub_i64(mm + 1))?;
    pre.gamma_num(&a.one_minus())?.gamma_num(&b.one_minus())?;
    pre.gamma_num(&d)?.gamma_num(&e)?;
    for x in [&d, &e] {
        for y in [&a, &b] {
            pre.gamma_den(&(x - y))?;
        }
    }
    let extra = c
        .iter()
        .map(|ci| {
            Factor::new()
                .num(ci - &a)
                .num(ci - &b)
                .den((ci - &d).add_i64(1))
                .den((ci - &e).add_i64(1))
        })
        .collect();
    Ok(SidePlan::with_sum(pre.finish(), cl.cbox(&c, &m, extra, Factor::new())))
}

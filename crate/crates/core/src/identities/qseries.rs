//! Multilateral q-series: the U(n) 6psi6 sum, the reduction theorem and the
//! corollaries whose left-hand side is an infinite multiple series.

use alloc::vec::Vec;

use super::params::{prod, ParamSet};
use super::plan::{extend, km_coord, series, Pre, SidePlan};
use crate::error::Result;
use crate::lattice::{Arith, Domain, Factor, LatticeSum, TermSpec};
use crate::mparith::{HValue, PrecisionContext, QBase};

pub(crate) struct Cx<'a> {
    pub ps: &'a ParamSet,
    pub q: QBase,
    pub arith: Arith,
    pub ctx: PrecisionContext,
}

impl<'a> Cx<'a> {
    pub fn new(ps: &'a ParamSet) -> Result<Self> {
        let q = ps.qbase()?.clone();
        Ok(Self { ps, arith: Arith::Q(q.clone()), q, ctx: ps.ctx })
    }

    pub fn qv(&self) -> &HValue {
        self.q.value()
    }

    /// x q^k.
    pub fn sh(&self, x: &HValue, k: i64) -> HValue {
        self.q.shift(x, k)
    }

    pub fn pw(&self, k: i64) -> HValue {
        self.q.pow(k)
    }

    pub fn v(&self, name: &str) -> Result<Vec<HValue>> {
        Ok(self.ps.vector(name)?.to_vec())
    }

    pub fn s(&self, name: &str) -> Result<HValue> {
        Ok(self.ps.scalar(name)?.clone())
    }

    pub fn ints(&self, name: &str) -> Result<Vec<i64>> {
        Ok(self.ps.int_vec(name)?.to_vec())
    }

    pub fn prod(&self, xs: &[HValue]) -> HValue {
        prod(self.ctx, xs)
    }

    pub fn pre(&self) -> Pre<'_> {
        Pre::new(&self.arith, self.ctx)
    }

    pub fn term(&self) -> TermSpec {
        TermSpec::new(self.arith.clone())
    }

    /// A term with Vandermonde nodes (omitted below two nodes).
    pub fn term_nodes(&self, z: &[HValue]) -> TermSpec {
        let t = self.term();
        if z.len() >= 2 {
            t.nodes(z.to_vec())
        } else {
            t
        }
    }
}

/// prod_{i,k} (b_i/a_k, q z_k/z_i)_inf / (q/(a_k z_i), b_i z_k)_inf.
pub(crate) fn dbl(cx: &Cx, pre: &mut Pre, a: &[HValue], b: &[HValue], z: &[HValue]) -> Result<()> {
    let n = z.len();
    for i in 0..n {
        for k in 0..n {
            pre.inf_num(&[&b[i] / &a[k], &(cx.qv() * &z[k]) / &z[i]])?;
            pre.inf_den(&[cx.qv() / &(&a[k] * &z[i]), &b[i] * &z[k]])?;
        }
    }
    Ok(())
}

/// The reciprocal of [`dbl`].
fn dbl_inv(cx: &Cx, pre: &mut Pre, a: &[HValue], b: &[HValue], z: &[HValue]) -> Result<()> {
    let n = z.len();
    for i in 0..n {
        for k in 0..n {
            pre.inf_num(&[cx.qv() / &(&a[k] * &z[i]), &b[i] * &z[k]])?;
            pre.inf_den(&[&b[i] / &a[k], &(cx.qv() * &z[k]) / &z[i]])?;
        }
    }
    Ok(())
}

/// Summand Delta(zq^y)/Delta(z) prod (c_i z_k q^{m_i}, a_i z_k)_{y_k} / (c_i z_k, b_i z_k)_{y_k}.
pub(crate) fn u_term(cx: &Cx, a: &[HValue], b: &[HValue], z: &[HValue], c: &[HValue], m: &[i64]) -> TermSpec {
    let coord = z
        .iter()
        .map(|zk| {
            Factor::new()
                .nums(a.iter().map(|ai| ai * zk))
                .nums(c.iter().zip(m).map(|(ci, &mi)| cx.sh(&(ci * zk), mi)))
                .dens(b.iter().map(|bi| bi * zk))
                .dens(c.iter().map(|ci| ci * zk))
        })
        .collect();
    cx.term_nodes(z).coord(coord)
}

/// Box sum over 0 <= x <= m with nodes c of the reduction theorem.
fn km_box(cx: &Cx, c: &[HValue], m: &[i64], a: &[HValue], b: &[HValue], total: Factor, domain: Domain) -> LatticeSum {
    let extra = c
        .iter()
        .map(|ci| Factor::new().nums(a.iter().map(|ak| ci / ak)).dens(b.iter().map(|bk| &(cx.qv() * ci) / bk)))
        .collect();
    let coord = extend(km_coord(&cx.arith, c, m), extra);
    LatticeSum::new(domain, cx.term_nodes(c).coord(coord).total(total))
}

struct U {
    n: i64,
    a: Vec<HValue>,
    b: Vec<HValue>,
    z: Vec<HValue>,
    c: Vec<HValue>,
    m: Vec<i64>,
}

fn u_params(cx: &Cx, with_c: bool) -> Result<U> {
    let (c, m) = if with_c { (cx.v("c")?, cx.ints("m")?) } else { (Vec::new(), Vec::new()) };
    Ok(U { n: cx.ps.dim("n")?, a: cx.v("a")?, b: cx.v("b")?, z: cx.v("z")?, c, m })
}

fn shifted_lhs(ps: &ParamSet, with_c: bool, total: i64) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let u = u_params(&cx, with_c)?;
    let pre = cx.pre().finish();
    let t = u_term(&cx, &u.a, &u.b, &u.z, &u.c, &u.m);
    Ok(SidePlan::with_sum(pre, series(Domain::Hyperplane(u.n as usize, total), t)))
}

fn shifted_rhs(ps: &ParamSet, with_c: bool, big_n: i64) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { n, a, b, z, c, m } = u_params(&cx, with_c)?;
    let (aa, bb, zz) = (cx.prod(&a), cx.prod(&b), cx.prod(&z));
    let az = &aa * &zz;
    let bz = &bb * &zz;
    let mm: i64 = m.iter().sum();
    let mut pre = cx.pre();
    if big_n != 0 {
        pre.mul(&cx.pw(big_n * (big_n - 1) / 2));
        pre.mul(&(-&(&cx.pw(mm) * &az)).powi(big_n)?);
    }
    pre.inf_num(&[&cx.pw(1 - mm - big_n) / &az, cx.sh(&bz, 1 + big_n - n)])?;
    pre.inf_den(&[cx.qv().clone(), &cx.pw(1 - mm - n) * &(&bb / &aa)])?;
    dbl(&cx, &mut pre, &a, &b, &z)?;
    for k in 0..z.len() {
        for (ci, &mi) in c.iter().zip(&m) {
            pre.poch_num(&cx.sh(&(&b[k] / ci), -mi), mi)?;
            pre.poch_den(&(&cx.pw(1 - mi) / &(ci * &z[k])), mi)?;
        }
    }
    let pre = pre.finish();
    let total = Factor::new()
        .num(&cx.pw(n - big_n) / &bz)
        .den(&cx.pw(1 - mm - big_n) / &az)
        .power(cx.qv().clone());
    Ok(SidePlan::with_sum(pre, km_box(&cx, &c, &m, &a, &b, total, Domain::Box(m.clone()))))
}

pub(crate) fn gi_lhs(ps: &ParamSet) -> Result<SidePlan> {
    shifted_lhs(ps, false, 0)
}

pub(crate) fn gi_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { n, a, b, z, .. } = u_params(&cx, false)?;
    let (aa, bb, zz) = (cx.prod(&a), cx.prod(&b), cx.prod(&z));
    let mut pre = cx.pre();
    pre.inf_num(&[cx.qv() / &(&aa * &zz), cx.sh(&(&bb * &zz), 1 - n)])?;
    pre.inf_den(&[cx.qv().clone(), cx.sh(&(&bb / &aa), 1 - n)])?;
    dbl(&cx, &mut pre, &a, &b, &z)?;
    Ok(SidePlan::closed(pre.finish()))
}

pub(crate) fn thm1_lhs(ps: &ParamSet) -> Result<SidePlan> {
    shifted_lhs(ps, true, 0)
}

pub(crate) fn thm1_rhs(ps: &ParamSet) -> Result<SidePlan> {
    shifted_rhs(ps, true, 0)
}

pub(crate) fn thm1s_lhs(ps: &ParamSet) -> Result<SidePlan> {
    shifted_lhs(ps, true, ps.dim("N")?)
}

pub(crate) fn thm1s_rhs(ps: &ParamSet) -> Result<SidePlan> {
    shifted_rhs(ps, true, ps.dim("N")?)
}

struct C1 {
    n: i64,
    a: HValue,
    b: HValue,
    d: HValue,
    c: Vec<HValue>,
    z: Vec<HValue>,
    e: Vec<HValue>,
    f: Vec<HValue>,
    m: Vec<i64>,
}

fn c1_params(cx: &Cx) -> Result<C1> {
    Ok(C1 {
        n: cx.ps.dim("n")?,
        a: cx.s("a")?,
        b: cx.s("b")?,
        d: cx.s("d")?,
        c: cx.v("c")?,
        z: cx.v("z")?,
        e: cx.v("e")?,
        f: cx.v("f")?,
        m: cx.ints("m")?,
    })
}

pub(crate) fn c1_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let C1 { n, a, b, d, c, z, e, f, m } = c1_params(&cx)?;
    let (cc, ee) = (cx.prod(&c), cx.prod(&e));
    let mm: i64 = m.iter().sum();
    let aq = &a * cx.qv();
    let modulus = &(&a.powi(n + 1)? * &cx.pw(1 - mm)) / &(&(&(&b * &cc) * &d) * &ee);
    let total = Factor::new()
        .num(b.clone())
        .nums(c.iter().zip(&z).map(|(ck, zk)| ck * zk))
        .nums(f.iter().cloned())
        .den(&aq / &d)
        .dens(z.iter().zip(&e).map(|(zk, ek)| &(&aq * zk) / ek))
        .dens(f.iter().zip(&m).map(|(fi, &mi)| cx.sh(fi, -mi)))
        .power(modulus);
    let coord = (0..z.len())
        .map(|k| {
            let zk = &z[k];
            Factor::new()
                .num(&d * zk)
                .nums((0..z.len()).map(|i| &(&e[i] * zk) / &z[i]))
                .nums(f.iter().zip(&m).map(|(fi, &mi)| &cx.sh(&(&a * zk), 1 + mi) / fi))
                .den(&(&aq * zk) / &b)
                .dens((0..z.len()).map(|i| &(&aq * zk) / &(&c[i] * &z[i])))
                .dens(f.iter().map(|fi| &(&aq * zk) / fi))
        })
        .collect();
    let coupled = z.iter().map(|zk| &a * zk).collect();
    let t = cx.term_nodes(&z).coord(coord).total(total).coupled(coupled);
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Lattice(n as usize), t)))
}

pub(crate) fn c1_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let C1 { n, a, b, d, c, z, e, f, m } = c1_params(&cx)?;
    let (cc, ee) = (cx.prod(&c), cx.prod(&e));
    let mm: i64 = m.iter().sum();
    let q = cx.qv().clone();
    let aq = &a * &q;
    let de = &d * &ee;
    let bc = &b * &cc;
    let an = a.powi(n)?;
    let mut pre = cx.pre();
    pre.inf_num(&[&cx.sh(&a, 1 - mm) / &de, &cx.sh(&an, 1) / &bc, &aq / &(&b * &d)])?;
    pre.inf_den(&[&cx.sh(&(&an * &a), 1 - mm) / &(&bc * &de), &aq / &d, &q / &b])?;
    let nn = z.len();
    for i in 0..nn {
        for k in 0..nn {
            pre.inf_num(&[&(&aq * &z[k]) / &(&(&e[k] * &c[i]) * &z[i]), &(&q * &z[k]) / &z[i]])?;
            pre.inf_den(&[&(&q * &z[k]) / &(&e[k] * &z[i]), &(&aq * &z[k]) / &(&c[i] * &z[i])])?;
        }
    }
    for k in 0..nn {
        let zk = &z[k];
        pre.inf_num(&[&aq / &(&(&d * &c[k]) * zk), &q / &(&a * zk), &(&aq * zk) / &(&b * &e[k]), &aq * zk])?;
        pre.inf_den(&[&q / &(&c[k] * zk), &q / &(&d * zk), &(&aq * zk) / &b, &(&aq * zk) / &e[k]])?;
    }
    for k in 0..nn {
        for (fi, &mi) in f.iter().zip(&m) {
            let g = cx.sh(fi, -mi);
            pre.poch_num(&(&g / &(&c[k] * &z[k])), mi)?;
            pre.poch_den(&(&g / &(&a * &z[k])), mi)?;
        }
    }
    for (fi, &mi) in f.iter().zip(&m) {
        let g = cx.sh(fi, -mi);
        pre.poch_num(&(&g / &b), mi)?;
        pre.poch_den(&g, mi)?;
    }
    let finv: Vec<HValue> = f.iter().map(|x| x.recip()).collect::<Result<_>>()?;
    let total = Factor::new().num(&bc / &an).den(&cx.sh(&a, 1 - mm) / &de).power(q.clone());
    let extra = f
        .iter()
        .map(|fi| {
            Factor::new()
                .nums((0..nn).map(|k| &(&aq * &z[k]) / &(&e[k] * fi)))
                .num(&aq / &(&d * fi))
                .dens((0..nn).map(|k| &(&(&q * &c[k]) * &z[k]) / fi))
                .den(&(&q * &b) / fi)
        })
        .collect();
    let coord = extend(km_coord(&cx.arith, &finv, &m), extra);
    let t = cx.term_nodes(&finv).coord(coord).total(total);
    Ok(SidePlan::with_sum(pre.finish(), LatticeSum::new(Domain::Box(m), t)))
}

pub(crate) fn st_lhs(ps: &ParamSet) -> Result<SidePlan> {
    thm1_lhs(ps)
}

pub(crate) fn st_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { n, a, b, z, c, m } = u_params(&cx, true)?;
    let w = cx.v("w")?;
    let q = cx.qv().clone();
    let mut pre = cx.pre();
    let nn = n as usize;
    for i in 0..nn {
        for k in 0..nn {
            pre.inf_num(&[&q / &(&a[k] * &w[i]), &b[i] * &w[k], &(&q * &z[k]) / &z[i]])?;
            pre.inf_den(&[&q / &(&a[k] * &z[i]), &b[i] * &z[k], &(&q * &w[k]) / &w[i]])?;
        }
    }
    for k in 0..nn {
        for (ci, &mi) in c.iter().zip(&m) {
            pre.poch_num(&(ci * &w[k]), mi)?;
            pre.poch_den(&(ci * &z[k]), mi)?;
        }
    }
    let t = u_term(&cx, &a, &b, &w, &c, &m);
    Ok(SidePlan::with_sum(pre.finish(), series(Domain::Hyperplane(nn, 0), t)))
}

pub(crate) fn csc_lhs(ps: &ParamSet) -> Result<SidePlan> {
    thm1_lhs(ps)
}

pub(crate) fn csc_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { a, b, z, c, m, .. } = u_params(&cx, true)?;
    let mut pre = cx.pre();
    dbl(&cx, &mut pre, &a, &b, &z)?;
    for k in 0..z.len() {
        for (ci, &mi) in c.iter().zip(&m) {
            pre.poch_num(&(&(cx.qv() * ci) / &b[k]), mi)?;
            pre.poch_den(&(ci * &z[k]), mi)?;
        }
    }
    Ok(SidePlan::closed(pre.finish()))
}

pub(crate) fn chu_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let n = ps.dim("n")?;
    let (z, a, c, m) = (cx.v("z")?, cx.v("a")?, cx.v("c")?, cx.ints("m")?);
    let (b, d) = (cx.s("b")?, cx.s("d")?);
    let coord = z
        .iter()
        .map(|zk| {
            Factor::new()
                .nums(c.iter().zip(&m).map(|(ci, &mi)| cx.sh(&(ci * zk), mi)))
                .nums(a.iter().map(|ai| ai * zk))
                .num(&b * zk)
                .dens(c.iter().map(|ci| ci * zk))
                .dens(a.iter().map(|ai| &(cx.qv() * ai) * zk))
                .den(&d * zk)
        })
        .collect();
    let t = cx.term_nodes(&z).coord(coord);
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Hyperplane(n as usize, 0), t)))
}

pub(crate) fn chu_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, a, c, m) = (cx.v("z")?, cx.v("a")?, cx.v("c")?, cx.ints("m")?);
    let (b, d) = (cx.s("b")?, cx.s("d")?);
    let q = cx.qv().clone();
    let az = &cx.prod(&a) * &cx.prod(&z);
    let mut pre = cx.pre();
    pre.inf_num(&[&q / &(&az * &b), &az * &d])?;
    for ai in &a {
        for ak in &a {
            pre.inf_num(&[&(&q * ak) / ai])?;
        }
    }
    for zi in &z {
        for zk in &z {
            pre.inf_num(&[&(&q * zk) / zi])?;
        }
    }
    for ak in &a {
        pre.inf_num(&[&(&q * ak) / &b, &d / ak])?;
    }
    pre.inf_den(core::slice::from_ref(&q))?;
    for ak in &a {
        for zi in &z {
            pre.inf_den(&[&q / &(ak * zi), &(&q * ak) * zi])?;
        }
    }
    for zk in &z {
        pre.inf_den(&[&q / &(&b * zk), &d * zk])?;
    }
    for (ci, &mi) in c.iter().zip(&m) {
        pre.poch_num(&(ci * &az), mi)?;
        for aj in &a {
            pre.poch_num(&(ci / aj), mi)?;
        }
        for zk in &z {
            pre.poch_den(&(ci * zk), mi)?;
        }
    }
    Ok(SidePlan::closed(pre.finish()))
}

struct Pk {
    n: i64,
    a: HValue,
    b: HValue,
    d: HValue,
    z: Vec<HValue>,
    e: Vec<HValue>,
    f: Vec<HValue>,
    m: Vec<i64>,
}

fn pk_params(cx: &Cx) -> Result<Pk> {
    Ok(Pk {
        n: cx.ps.dim("n")?,
        a: cx.s("a")?,
        b: cx.s("b")?,
        d: cx.s("d")?,
        z: cx.v("z")?,
        e: cx.v("e")?,
        f: cx.v("f")?,
        m: cx.ints("m")?,
    })
}

pub(crate) fn pk_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let Pk { n, a, b, d, z, e, f, m } = pk_params(&cx)?;
    let ee = cx.prod(&e);
    let mm: i64 = m.iter().sum();
    let aq = &a * cx.qv();
    let modulus = &cx.sh(&a, 1 - mm) / &(&(&b * &d) * &ee);
    let total = Factor::new()
        .num(b.clone())
        .nums(z.iter().map(|zk| &a * zk))
        .nums(f.iter().cloned())
        .den(&aq / &d)
        .dens(z.iter().zip(&e).map(|(zk, ek)| &(&aq * zk) / ek))
        .dens(f.iter().zip(&m).map(|(fi, &mi)| cx.sh(fi, -mi)))
        .power(modulus);
    let coord = (0..z.len())
        .map(|k| {
            let zk = &z[k];
            Factor::new()
                .num(&d * zk)
                .nums((0..z.len()).map(|i| &(&e[i] * zk) / &z[i]))
                .nums(f.iter().zip(&m).map(|(fi, &mi)| &cx.sh(&(&a * zk), 1 + mi) / fi))
                .den(&(&aq * zk) / &b)
                .dens((0..z.len()).map(|i| &(cx.qv() * zk) / &z[i]))
                .dens(f.iter().map(|fi| &(&aq * zk) / fi))
        })
        .collect();
    let coupled = z.iter().map(|zk| &a * zk).collect();
    let t = cx.term_nodes(&z).coord(coord).total(total).coupled(coupled);
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Orthant(n as usize), t)))
}

pub(crate) fn pk_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let Pk { a, b, d, z, e, f, m, .. } = pk_params(&cx)?;
    let ee = cx.prod(&e);
    let mm: i64 = m.iter().sum();
    let q = cx.qv().clone();
    let aq = &a * &q;
    let de = &d * &ee;
    let mut pre = cx.pre();
    pre.inf_num(&[&cx.sh(&a, 1 - mm) / &de, &aq / &(&b * &d)])?;
    pre.inf_den(&[&cx.sh(&a, 1 - mm) / &(&b * &de), &aq / &d])?;
    for (zk, ek) in z.iter().zip(&e) {
        pre.inf_num(&[&(&aq * zk) / &(&b * ek), &aq * zk])?;
        pre.inf_den(&[&(&aq * zk) / &b, &(&aq * zk) / ek])?;
    }
    for (fi, &mi) in f.iter().zip(&m) {
        let g = cx.sh(fi, -mi);
        pre.poch_num(&(&g / &b), mi)?;
        pre.poch_den(&g, mi)?;
    }
    let finv: Vec<HValue> = f.iter().map(|x| x.recip()).collect::<Result<_>>()?;
    let total = Factor::new().num(b.clone()).den(&cx.sh(&a, 1 - mm) / &de).power(q.clone());
    let extra = f
        .iter()
        .map(|fi| {
            Factor::new()
                .nums(z.iter().zip(&e).map(|(zk, ek)| &(&aq * zk) / &(ek * fi)))
                .num(&aq / &(&d * fi))
                .dens(z.iter().map(|zk| &(&aq * zk) / fi))
                .den(&(&q * &b) / fi)
        })
        .collect();
    let coord = extend(km_coord(&cx.arith, &finv, &m), extra);
    let t = cx.term_nodes(&finv).coord(coord).total(total);
    Ok(SidePlan::with_sum(pre.finish(), LatticeSum::new(Domain::Box(m), t)))
}

pub(crate) fn pkb_lhs(ps: &ParamSet) -> Result<SidePlan> {
    thm1s_lhs(ps)
}

pub(crate) fn pkb_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { a, b, z, c, m, .. } = u_params(&cx, true)?;
    let big_n = ps.dim("N")?;
    let mut pre = cx.pre();
    dbl(&cx, &mut pre, &a, &b, &z)?;
    for k in 0..z.len() {
        for (ci, &mi) in c.iter().zip(&m) {
            pre.poch_num(&(&(cx.qv() * ci) / &b[k]), mi)?;
            pre.poch_den(&(ci * &z[k]), mi)?;
        }
    }
    let s = km_box(&cx, &c, &m, &a, &b, Factor::new(), Domain::BoxHyperplane(m.clone(), big_n));
    Ok(SidePlan::with_sum(pre.finish(), s))
}

pub(crate) fn c1p_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { n, a, b, z, c, m } = u_params(&cx, true)?;
    let t = u_term(&cx, &a, &b, &z, &c, &m).total(Factor::new().power(cx.s("t")?));
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Lattice(n as usize), t)))
}

/// (AZt, q/AZt)_inf / (t, q^{1-n}B/(At))_inf / (q^n At/B)_M times dbl.
fn psi1_prefactor(cx: &Cx, pre: &mut Pre, a: &[HValue], b: &[HValue], z: &[HValue], t: &HValue, mm: i64) -> Result<()> {
    let n = z.len() as i64;
    let (aa, bb, zz) = (cx.prod(a), cx.prod(b), cx.prod(z));
    let azt = &(&aa * &zz) * t;
    pre.inf_num(&[azt.clone(), cx.qv() / &azt])?;
    pre.inf_den(&[t.clone(), &cx.sh(&bb, 1 - n) / &(&aa * t)])?;
    pre.poch_den(&(&cx.sh(&aa, n) * &(t / &bb)), mm)?;
    dbl(cx, pre, a, b, z)
}

pub(crate) fn c1p_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { n, a, b, z, c, m } = u_params(&cx, true)?;
    let t = cx.s("t")?;
    let mm: i64 = m.iter().sum();
    let mut pre = cx.pre();
    psi1_prefactor(&cx, &mut pre, &a, &b, &z, &t, mm)?;
    for k in 0..z.len() {
        for (ci, &mi) in c.iter().zip(&m) {
            pre.poch_num(&(&(cx.qv() * ci) / &b[k]), mi)?;
            pre.poch_den(&(ci * &z[k]), mi)?;
        }
    }
    let x = &cx.sh(&cx.prod(&a), n + mm) * &(&t / &cx.prod(&b));
    let s = km_box(&cx, &c, &m, &a, &b, Factor::new().power(x), Domain::Box(m.clone()));
    Ok(SidePlan::with_sum(pre.finish(), s))
}

/// Summand of the generalized 1psi1 series with factors (d_i q^{l_i})_{|y|}/(d_i)_{|y|}.
fn cn_term(cx: &Cx, a: &[HValue], b: &[HValue], z: &[HValue], d: &[HValue], l: &[i64], t: &HValue) -> TermSpec {
    let total = Factor::new()
        .nums(d.iter().zip(l).map(|(di, &li)| cx.sh(di, li)))
        .dens(d.iter().cloned())
        .power(t.clone());
    u_term(cx, a, b, z, &[], &[]).total(total)
}

pub(crate) fn cn_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { n, a, b, z, .. } = u_params(&cx, false)?;
    let (d, l, t) = (cx.v("d")?, cx.ints("l")?, cx.s("t")?);
    let term = cn_term(&cx, &a, &b, &z, &d, &l, &t);
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Lattice(n as usize), term)))
}

pub(crate) fn cn_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { n, a, b, z, .. } = u_params(&cx, false)?;
    let (d, l, t) = (cx.v("d")?, cx.ints("l")?, cx.s("t")?);
    let ll: i64 = l.iter().sum();
    let (aa, bb, zz) = (cx.prod(&a), cx.prod(&b), cx.prod(&z));
    let mut pre = cx.pre();
    psi1_prefactor(&cx, &mut pre, &a, &b, &z, &t, ll)?;
    let qbz = &cx.pw(n) / &(&bb * &zz);
    for (di, &li) in d.iter().zip(&l) {
        pre.poch_num(&(&qbz * di), li)?;
        pre.poch_den(di, li)?;
    }
    let az = &aa * &zz;
    let x = &cx.sh(&aa, n + ll) * &(&t / &bb);
    let extra = d.iter().map(|di| Factor::new().num(di / &az).den(&qbz * di)).collect();
    let coord = extend(km_coord(&cx.arith, &d, &l), extra);
    let term = cx.term_nodes(&d).coord(coord).total(Factor::new().power(x));
    Ok(SidePlan::with_sum(pre.finish(), LatticeSum::new(Domain::Box(l), term)))
}

pub(crate) fn cmn_lhs(ps: &ParamSet) -> Result<SidePlan> {
    cn_lhs(ps)
}

pub(crate) fn cmn_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let U { a, b, z, .. } = u_params(&cx, false)?;
    let (ta, tb, tz) = (cx.v("ta")?, cx.v("tb")?, cx.v("tz")?);
    let (d, l, t, u) = (cx.v("d")?, cx.ints("l")?, cx.s("t")?, cx.s("u")?);
    let azt = &(&cx.prod(&a) * &cx.prod(&z)) * &t;
    let azut = &azt * &u;
    let mut pre = cx.pre();
    pre.inf_num(&[azt.clone(), cx.qv() / &azt])?;
    pre.inf_den(&[azut.clone(), cx.qv() / &azut])?;
    dbl(&cx, &mut pre, &a, &b, &z)?;
    dbl_inv(&cx, &mut pre, &ta, &tb, &tz)?;
    let ud: Vec<HValue> = d.iter().map(|di| &u * di).collect();
    for ((udi, di), &li) in ud.iter().zip(&d).zip(&l) {
        pre.poch_num(udi, li)?;
        pre.poch_den(di, li)?;
    }
    let term = cn_term(&cx, &ta, &tb, &tz, &ud, &l, &t);
    Ok(SidePlan::with_sum(pre.finish(), series(Domain::Lattice(tz.len()), term)))
}

//! Terminating multiple sums and transformations, plus the one-variable
//! reductions.

use alloc::vec;
use alloc::vec::Vec;

use super::params::ParamSet;
use super::plan::{extend, km_coord, series, SidePlan};
use super::qseries::Cx;
use crate::error::Result;
use crate::lattice::{Domain, Factor, LatticeSum};
use crate::mparith::HValue;

fn recips(v: &[HValue]) -> Result<Vec<HValue>> {
    v.iter().map(|x| x.recip()).collect()
}

/// Box sum over 0 <= x <= m, nodes z, with the Karlsson-Minton coordinate
/// factors, extra coordinate factors and a total factor.
fn zbox(cx: &Cx, z: &[HValue], m: &[i64], extra: Vec<Factor>, total: Factor, coupled: Option<Vec<HValue>>) -> LatticeSum {
    let coord = extend(km_coord(&cx.arith, z, m), extra);
    let mut t = cx.term_nodes(z).coord(coord).total(total);
    if let Some(c) = coupled {
        t = t.coupled(c);
    }
    LatticeSum::new(Domain::Box(m.to_vec()), t)
}

struct Kc {
    n: usize,
    p: i64,
    big_n: i64,
    a: HValue,
    d: HValue,
    z: Vec<HValue>,
    e: Vec<HValue>,
    f: Vec<HValue>,
    g: Vec<HValue>,
}

fn kc_params(cx: &Cx) -> Result<Kc> {
    Ok(Kc {
        n: cx.ps.dim("n")? as usize,
        p: cx.ps.dim("p")?,
        big_n: cx.ps.dim("N")?,
        a: cx.s("a")?,
        d: cx.s("d")?,
        z: cx.v("z")?,
        e: cx.v("e")?,
        f: cx.v("f")?,
        g: cx.v("g")?,
    })
}

pub(crate) fn kc_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let Kc { n, p, big_n, a, d, z, e, f, g } = kc_params(&cx)?;
    let q = cx.qv().clone();
    let aq = &a * &q;
    let def = &(&(&d * &cx.prod(&e)) * &cx.prod(&f)) * &cx.prod(&g);
    let x = &cx.sh(&a.powi(p + 1)?, p + big_n + 1) / &def;
    let total = Factor::new()
        .num(cx.pw(-big_n))
        .nums(z.iter().map(|zk| &a * zk))
        .nums(f.iter().cloned())
        .den(&aq / &d)
        .dens(z.iter().zip(&e).map(|(zk, ek)| &(&aq * zk) / ek))
        .dens(g.iter().map(|gi| &aq / gi))
        .power(x);
    let coord = z
        .iter()
        .map(|zk| {
            Factor::new()
                .num(&d * zk)
                .nums(z.iter().zip(&e).map(|(zi, ei)| &(ei * zk) / zi))
                .nums(g.iter().map(|gi| gi * zk))
                .den(cx.sh(&(&a * zk), 1 + big_n))
                .dens(z.iter().map(|zi| &(&q * zk) / zi))
                .dens(f.iter().map(|fi| &(&aq * zk) / fi))
        })
        .collect();
    let coupled = z.iter().map(|zk| &a * zk).collect();
    let t = cx.term_nodes(&z).coord(coord).total(total).coupled(coupled);
    Ok(SidePlan::with_sum(cx.pre().finish(), LatticeSum::new(Domain::Simplex(n, big_n), t)))
}

pub(crate) fn kc_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let Kc { p, big_n, a, d, z, e, f, g, .. } = kc_params(&cx)?;
    let q = cx.qv().clone();
    let aq = &a * &q;
    let def = &(&(&d * &cx.prod(&e)) * &cx.prod(&f)) * &cx.prod(&g);
    let k = &cx.sh(&a.powi(p + 1)?, p + 1) / &def;
    let mut pre = cx.pre();
    pre.poch_num(&k, big_n)?.poch_den(&(&aq / &d), big_n)?;
    for (zk, ek) in z.iter().zip(&e) {
        pre.poch_num(&(&aq * zk), big_n)?.poch_den(&(&(&aq * zk) / ek), big_n)?;
    }
    for (fi, gi) in f.iter().zip(&g) {
        pre.poch_num(fi, big_n)?.poch_den(&(&aq / gi), big_n)?;
    }
    let finv = recips(&f)?;
    let total = Factor::new().num(cx.pw(-big_n)).den(k).power(q.clone());
    let coord = f
        .iter()
        .map(|fi| {
            Factor::new()
                .nums(z.iter().zip(&e).map(|(zk, ek)| &(&aq * zk) / &(fi * ek)))
                .num(&aq / &(&d * fi))
                .nums(g.iter().map(|gk| &aq / &(gk * fi)))
                .dens(z.iter().map(|zk| &(&aq * zk) / fi))
                .den(&cx.pw(1 - big_n) / fi)
                .dens(f.iter().map(|fk| &(&q * fk) / fi))
        })
        .collect();
    let t = cx.term_nodes(&finv).coord(coord).total(total);
    Ok(SidePlan::with_sum(pre.finish(), LatticeSum::new(Domain::Simplex(f.len(), big_n), t)))
}

/// Sum over 0 <= y_k <= N, |y| = N, of
/// Delta(zq^y)/Delta(z) prod (a_i z_k, b_j z_k)_{y_k} / (q z_k/z_i, w_j z_k)_{y_k}.
fn kt_side(cx: &Cx, a: &[HValue], z: &[HValue], b: &[HValue], w: &[HValue], big_n: i64) -> LatticeSum {
    let q = cx.qv();
    let coord = z
        .iter()
        .map(|zk| {
            Factor::new()
                .nums(a.iter().map(|ai| ai * zk))
                .nums(b.iter().map(|bi| bi * zk))
                .dens(z.iter().map(|zi| &(q * zk) / zi))
                .dens(w.iter().map(|wi| wi * zk))
        })
        .collect();
    let t = cx.term_nodes(z).coord(coord);
    LatticeSum::new(Domain::BoxHyperplane(vec![big_n; z.len()], big_n), t)
}

pub(crate) fn kt_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (a, z, b, w) = (cx.v("a")?, cx.v("z")?, cx.v("b")?, cx.v("w")?);
    let s = kt_side(&cx, &a, &z, &b, &w, ps.dim("N")?);
    Ok(SidePlan::with_sum(cx.pre().finish(), s))
}

pub(crate) fn kt_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (a, z, b, w) = (cx.v("a")?, cx.v("z")?, cx.v("b")?, cx.v("w")?);
    // w_i/b_k and w_i/a_k in the numerator; w_i z_k in the denominator
    let bi = recips(&b)?;
    let ai = recips(&a)?;
    let s = kt_side(&cx, &bi, &w, &ai, &z, ps.dim("N")?);
    Ok(SidePlan::with_sum(cx.pre().finish(), s))
}

pub(crate) fn mc_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m) = (cx.v("z")?, cx.ints("m")?);
    let (a, b, c, d) = (cx.s("a")?, cx.s("b")?, cx.s("c")?, cx.s("d")?);
    let extra = z.iter().map(|zi| Factor::new().num(&b * zi).den(&d * zi)).collect();
    let total = Factor::new().num(a).den(c).power(cx.qv().clone());
    Ok(SidePlan::with_sum(cx.pre().finish(), zbox(&cx, &z, &m, extra, total, None)))
}

pub(crate) fn mc_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m) = (cx.v("z")?, cx.ints("m")?);
    let (a, b, d) = (cx.s("a")?, cx.s("b")?, cx.s("d")?);
    let mm: i64 = m.iter().sum();
    let mut pre = cx.pre();
    pre.poch_num(&(&d / &b), mm)?.poch_den(&(&d / &(&a * &b)), mm)?;
    for (zi, &mi) in z.iter().zip(&m) {
        let dz = &d * zi;
        pre.poch_num(&(&dz / &a), mi)?.poch_den(&dz, mi)?;
    }
    Ok(SidePlan::closed(pre.finish()))
}

pub(crate) fn cmd_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let big_n = ps.dim("N")?;
    let (z, e, d) = (cx.v("z")?, cx.v("e")?, cx.s("d")?);
    let ee = cx.prod(&e);
    let q = cx.qv();
    let coord = z
        .iter()
        .map(|zi| {
            Factor::new()
                .num(&(&d * zi) / &ee)
                .nums(z.iter().zip(&e).map(|(zk, ek)| &(ek * zi) / zk))
                .den(&d * zi)
                .dens(z.iter().map(|zk| &(q * zi) / zk))
        })
        .collect();
    let t = cx.term_nodes(&z).coord(coord);
    let dom = Domain::BoxHyperplane(vec![big_n; z.len()], big_n);
    Ok(SidePlan::with_sum(cx.pre().finish(), LatticeSum::new(dom, t)))
}

pub(crate) fn cmd_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let big_n = ps.dim("N")?;
    let (z, e, d) = (cx.v("z")?, cx.v("e")?, cx.s("d")?);
    let mut pre = cx.pre();
    pre.poch_num(&cx.prod(&e), big_n)?.poch_den(cx.qv(), big_n)?;
    for (zi, ei) in z.iter().zip(&e) {
        let dz = &d * zi;
        pre.poch_num(&(&dz / ei), big_n)?.poch_den(&dz, big_n)?;
    }
    Ok(SidePlan::closed(pre.finish()))
}

pub(crate) fn mnc_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m) = (cx.v("z")?, cx.ints("m")?);
    let [a, b, c, d, e, f] = ["a", "b", "c", "d", "e", "f"].map(|k| cx.s(k));
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    let extra = z
        .iter()
        .map(|zi| Factor::new().num(&b * zi).num(&c * zi).den(&e * zi).den(&f * zi))
        .collect();
    let total = Factor::new().num(a).den(d).power(cx.qv().clone());
    Ok(SidePlan::with_sum(cx.pre().finish(), zbox(&cx, &z, &m, extra, total, None)))
}

pub(crate) fn mnc_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m) = (cx.v("z")?, cx.ints("m")?);
    let [a, b, c, d, e, f] = ["a", "b", "c", "d", "e", "f"].map(|k| cx.s(k));
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    let mm: i64 = m.iter().sum();
    let bd = &cx.sh(&b, 1 - mm) / &d;
    let mut pre = cx.pre();
    pre.poch_num(&(&f / &b), mm)?.poch_den(&(&cx.pw(1 - mm) / &d), mm)?;
    for (zi, &mi) in z.iter().zip(&m) {
        pre.poch_num(&(&bd * zi), mi)?.poch_den(&(&f * zi), mi)?;
    }
    let extra = z
        .iter()
        .map(|zi| Factor::new().num(&b * zi).num(&(&e * zi) / &a).den(&e * zi).den(&bd * zi))
        .collect();
    let total = Factor::new().num(&e / &c).den(&cx.sh(&b, 1 - mm) / &f).power(cx.qv().clone());
    Ok(SidePlan::with_sum(pre.finish(), zbox(&cx, &z, &m, extra, total, None)))
}

fn pbt_side(cx: &Cx, z: &[HValue], m: &[i64], b: &HValue, e: &HValue, big_n: i64, l: i64) -> LatticeSum {
    let mm: i64 = m.iter().sum();
    let extra = z
        .iter()
        .map(|zi| {
            Factor::new()
                .num(b * zi)
                .num(cx.sh(&(e * zi), l))
                .den(e * zi)
                .den(cx.sh(&(b * zi), l - mm))
        })
        .collect();
    let coord = extend(km_coord(&cx.arith, z, m), extra);
    let t = cx.term_nodes(z).coord(coord);
    LatticeSum::new(Domain::BoxHyperplane(m.to_vec(), big_n), t)
}

pub(crate) fn pbt_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m, b, e) = (cx.v("z")?, cx.ints("m")?, cx.s("b")?, cx.s("e")?);
    let s = pbt_side(&cx, &z, &m, &b, &e, ps.dim("N")?, ps.dim("L")?);
    Ok(SidePlan::with_sum(cx.pre().finish(), s))
}

pub(crate) fn pbt_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m, b, e) = (cx.v("z")?, cx.ints("m")?, cx.s("b")?, cx.s("e")?);
    let (big_n, l) = (ps.dim("N")?, ps.dim("L")?);
    let mm: i64 = m.iter().sum();
    let q = cx.qv().clone();
    let qm = cx.pw(-mm);
    let mut pre = cx.pre();
    pre.poch_num(&q, l)?.poch_num(&qm, big_n)?;
    pre.poch_den(&q, big_n)?.poch_den(&qm, l)?;
    for (zi, &mi) in z.iter().zip(&m) {
        let bz = &b * zi;
        pre.poch_num(&cx.sh(&bz, big_n - mm), mi)?.poch_den(&cx.sh(&bz, l - mm), mi)?;
    }
    Ok(SidePlan::with_sum(pre.finish(), pbt_side(&cx, &z, &m, &b, &e, l, big_n)))
}

/// The well-poised box sum with coupled factors (1 - a z_i q^{x_i+|x|})/(1 - a z_i).
#[allow(clippy::too_many_arguments)]
fn wp_box(
    cx: &Cx,
    z: &[HValue],
    m: &[i64],
    a: &HValue,
    coord_num: [HValue; 3],
    coord_den: [HValue; 3],
    tot_num: [HValue; 3],
    tot_den: [HValue; 3],
) -> LatticeSum {
    let extra = z
        .iter()
        .map(|zi| Factor::new().nums(coord_num.iter().map(|x| x * zi)).dens(coord_den.iter().map(|x| x * zi)))
        .collect();
    let total = Factor::new()
        .nums(tot_num)
        .nums(z.iter().map(|zi| a * zi))
        .dens(tot_den)
        .dens(z.iter().zip(m).map(|(zi, &mi)| cx.sh(&(a * zi), 1 + mi)))
        .power(cx.qv().clone());
    let coupled = z.iter().map(|zi| a * zi).collect();
    zbox(cx, z, m, extra, total, Some(coupled))
}

pub(crate) fn mnb_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m) = (cx.v("z")?, cx.ints("m")?);
    let [a, b, c, d, e, f, g] = ["a", "b", "c", "d", "e", "f", "g"].map(|k| cx.s(k));
    let (a, b, c, d, e, f, g) = (a?, b?, c?, d?, e?, f?, g?);
    let aq = &a * cx.qv();
    let s = wp_box(
        &cx,
        &z,
        &m,
        &a,
        [b.clone(), c.clone(), d.clone()],
        [&aq / &e, &aq / &f, &aq / &g],
        [e, f, g],
        [&aq / &b, &aq / &c, &aq / &d],
    );
    Ok(SidePlan::with_sum(cx.pre().finish(), s))
}

pub(crate) fn mnb_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let (z, m) = (cx.v("z")?, cx.ints("m")?);
    let [a, b, c, d, e, f, g] = ["a", "b", "c", "d", "e", "f", "g"].map(|k| cx.s(k));
    let (a, b, c, d, e, f, g) = (a?, b?, c?, d?, e?, f?, g?);
    let lam = ps.lambda()?;
    let q = cx.qv().clone();
    let aq = &a * &q;
    let lq = &lam * &q;
    let mm: i64 = m.iter().sum();
    let mut pre = cx.pre();
    pre.mul(&(&a / &lam).powi(mm)?);
    pre.poch_nums(&[&lq / &c, &lq / &d], mm)?;
    pre.poch_dens(&[&aq / &c, &aq / &d], mm)?;
    for (zi, &mi) in z.iter().zip(&m) {
        pre.poch_nums(&[&aq * zi, &(&lq * zi) / &g], mi)?;
        pre.poch_dens(&[&lq * zi, &(&aq * zi) / &g], mi)?;
    }
    let s = wp_box(
        &cx,
        &z,
        &m,
        &lam,
        [&aq / &(&e * &f), c.clone(), d.clone()],
        [&aq / &e, &aq / &f, &lq / &g],
        [&aq / &(&b * &e), &aq / &(&b * &f), g.clone()],
        [&aq / &b, &lq / &c, &lq / &d],
    );
    Ok(SidePlan::with_sum(pre.finish(), s))
}

struct One {
    a: HValue,
    b: HValue,
    c: HValue,
    d: HValue,
    f: Vec<HValue>,
    m: Vec<i64>,
}

fn one_params(cx: &Cx) -> Result<One> {
    Ok(One { a: cx.s("a")?, b: cx.s("b")?, c: cx.s("c")?, d: cx.s("d")?, f: cx.v("f")?, m: cx.ints("m")? })
}

/// Very-well-poised one-variable summand: coupled [a], factors from `num`/`den`
/// together with (f_i, a q^{1+m_i}/f_i)_y / (q^{-m_i} f_i, aq/f_i)_y.
fn vwp_term(cx: &Cx, a: &HValue, f: &[HValue], m: &[i64], num: Vec<HValue>, den: Vec<HValue>, w: HValue) -> Factor {
    let aq = a * cx.qv();
    Factor::new()
        .nums(num)
        .nums(f.iter().cloned())
        .nums(f.iter().zip(m).map(|(fi, &mi)| &cx.sh(a, 1 + mi) / fi))
        .dens(den)
        .dens(f.iter().zip(m).map(|(fi, &mi)| cx.sh(fi, -mi)))
        .dens(f.iter().map(|fi| &aq / fi))
        .power(w)
}

/// prod (q^{-m_i} f_i/b, q^{-m_i} f_i/c)_{m_i} / (q^{-m_i} f_i, q^{-m_i} f_i/a)_{m_i}.
fn f_ratio(cx: &Cx, pre: &mut super::plan::Pre, o: &One) -> Result<()> {
    for (fi, &mi) in o.f.iter().zip(&o.m) {
        let g = cx.sh(fi, -mi);
        pre.poch_nums(&[&g / &o.b, &g / &o.c], mi)?;
        pre.poch_dens(&[g.clone(), &g / &o.a], mi)?;
    }
    Ok(())
}

fn f_box(cx: &Cx, o: &One, total: Factor, num: impl Fn(&HValue) -> [HValue; 2]) -> Result<LatticeSum> {
    let finv = recips(&o.f)?;
    let q = cx.qv();
    let extra = o
        .f
        .iter()
        .map(|fi| Factor::new().nums(num(fi)).den(&(q * &o.b) / fi).den(&(q * &o.c) / fi))
        .collect();
    Ok(zbox(cx, &finv, &o.m, extra, total, None))
}

pub(crate) fn c2_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let o = one_params(&cx)?;
    let e = cx.s("e")?;
    let aq = &o.a * cx.qv();
    let mm: i64 = o.m.iter().sum();
    let w = &cx.sh(&(&o.a * &o.a), 1 - mm) / &(&(&(&o.b * &o.c) * &o.d) * &e);
    let f = vwp_term(
        &cx,
        &o.a,
        &o.f,
        &o.m,
        vec![o.b.clone(), o.c.clone(), o.d.clone(), e.clone()],
        vec![&aq / &o.b, &aq / &o.c, &aq / &o.d, &aq / &e],
        w,
    );
    let t = cx.term().coord(vec![f]).coupled(vec![o.a.clone()]);
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Lattice(1), t)))
}

pub(crate) fn c2_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let o = one_params(&cx)?;
    let e = cx.s("e")?;
    let One { a, b, c, d, .. } = &o;
    let q = cx.qv().clone();
    let aq = a * &q;
    let mm: i64 = o.m.iter().sum();
    let de = d * &e;
    let w = &cx.sh(&(a * a), 1 - mm) / &(&(b * c) * &de);
    let mut pre = cx.pre();
    pre.inf_num(&[
        q.clone(),
        aq.clone(),
        &q / a,
        &aq / &(b * c),
        &aq / &(b * d),
        &aq / &(b * &e),
        &aq / &(c * d),
        &aq / &(c * &e),
        &cx.sh(a, 1 - mm) / &de,
    ])?;
    pre.inf_den(&[&q / b, &q / c, &q / d, &q / &e, &aq / b, &aq / c, &aq / d, &aq / &e, w])?;
    f_ratio(&cx, &mut pre, &o)?;
    let total = Factor::new().num(&(b * c) / a).den(&cx.sh(a, 1 - mm) / &de).power(q.clone());
    let s = f_box(&cx, &o, total, |fi| [&aq / &(d * fi), &aq / &(&e * fi)])?;
    Ok(SidePlan::with_sum(pre.finish(), s))
}

pub(crate) fn c3_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let o = one_params(&cx)?;
    let q = cx.qv().clone();
    let aq = &o.a * &q;
    let mm: i64 = o.m.iter().sum();
    let w = &cx.sh(&o.a, 1 - mm) / &(&(&o.b * &o.c) * &o.d);
    let f = vwp_term(
        &cx,
        &o.a,
        &o.f,
        &o.m,
        vec![o.a.clone(), o.b.clone(), o.c.clone(), o.d.clone()],
        vec![q.clone(), &aq / &o.b, &aq / &o.c, &aq / &o.d],
        w,
    );
    let t = cx.term().coord(vec![f]).coupled(vec![o.a.clone()]);
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Orthant(1), t)))
}

pub(crate) fn c3_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let o = one_params(&cx)?;
    let One { a, b, c, d, .. } = &o;
    let q = cx.qv().clone();
    let aq = a * &q;
    let mm: i64 = o.m.iter().sum();
    let w = &cx.sh(a, 1 - mm) / &(&(b * c) * d);
    let qd = &cx.pw(1 - mm) / d;
    let mut pre = cx.pre();
    pre.inf_num(&[aq.clone(), &aq / &(b * c), &aq / &(b * d), &aq / &(c * d)])?;
    pre.inf_den(&[&aq / b, &aq / c, &aq / d, w])?;
    f_ratio(&cx, &mut pre, &o)?;
    pre.poch_num(&qd, mm)?;
    let total = Factor::new().num(&(b * c) / a).den(qd).power(q.clone());
    let s = f_box(&cx, &o, total, |fi| [&aq / &(d * fi), &q / fi])?;
    Ok(SidePlan::with_sum(pre.finish(), s))
}

struct L23 {
    a: HValue,
    b: HValue,
    d: HValue,
    c: Vec<HValue>,
    m: Vec<i64>,
}

fn l23_params(cx: &Cx) -> Result<L23> {
    Ok(L23 { a: cx.s("a")?, b: cx.s("b")?, d: cx.s("d")?, c: cx.v("c")?, m: cx.ints("m")? })
}

pub(crate) fn l23_lhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let L23 { a, b, d, c, m } = l23_params(&cx)?;
    let mm: i64 = m.iter().sum();
    let w = &cx.sh(&d, -mm) / &(&a * &b);
    let f = Factor::new()
        .num(a)
        .num(b)
        .nums(c.iter().zip(&m).map(|(ci, &mi)| cx.sh(ci, mi)))
        .den(cx.qv().clone())
        .den(d)
        .dens(c.iter().cloned())
        .power(w);
    let t = cx.term().coord(vec![f]);
    Ok(SidePlan::with_sum(cx.pre().finish(), series(Domain::Orthant(1), t)))
}

fn l23_pre<'a>(cx: &'a Cx, o: &L23) -> Result<super::plan::Pre<'a>> {
    let mm: i64 = o.m.iter().sum();
    let mut pre = cx.pre();
    pre.inf_num(&[&o.d / &o.a, &o.d / &o.b])?;
    pre.inf_den(&[o.d.clone(), &cx.sh(&o.d, -mm) / &(&o.a * &o.b)])?;
    Ok(pre)
}

pub(crate) fn l2_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let o = l23_params(&cx)?;
    let L23 { a, b, d, c, m } = &o;
    let q = cx.qv().clone();
    let mm: i64 = m.iter().sum();
    let mut pre = l23_pre(&cx, &o)?;
    for (ci, &mi) in c.iter().zip(m) {
        pre.poch_num(&(&(&q * ci) / d), mi)?.poch_den(ci, mi)?;
    }
    pre.mul(&(d / &q).powi(mm)?);
    let qa = &cx.pw(1 - mm) / a;
    pre.poch_num(&qa, mm)?;
    let extra = c.iter().map(|ci| Factor::new().num(ci / a).den(&(&q * ci) / d)).collect();
    let total = Factor::new().num(&(&q * b) / d).den(qa).power(&q / b);
    Ok(SidePlan::with_sum(pre.finish(), zbox(&cx, c, m, extra, total, None)))
}

pub(crate) fn l3_rhs(ps: &ParamSet) -> Result<SidePlan> {
    let cx = Cx::new(ps)?;
    let o = l23_params(&cx)?;
    let L23 { a, b, d, c, m } = &o;
    let q = cx.qv().clone();
    let mut pre = l23_pre(&cx, &o)?;
    for (ci, &mi) in c.iter().zip(m) {
        pre.poch_num(&(&cx.sh(d, -mi) / ci), mi)?;
    }
    let extra = c
        .iter()
        .map(|ci| Factor::new().num(ci / a).num(ci / b).den(ci.clone()).den(&(&q * ci) / d))
        .collect();
    let total = Factor::new().power(q.clone());
    Ok(SidePlan::with_sum(pre.finish(), zbox(&cx, c, m, extra, total, None)))
}

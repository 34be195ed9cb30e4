use alloc::vec;
use alloc::vec::Vec;

use super::draw::Draw;
use super::{DegenerationKind, DimLimits};
use crate::error::Result;
use crate::identities::{IdentityId, ParamSet};
use crate::mparith::{HValue, QBase};

/// Discrete layout of one parameter set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Shape {
    pub n: usize,
    /// p, r or the length of l, depending on the identity.
    pub p: usize,
    pub m: Vec<i64>,
    pub big_n: i64,
    pub big_l: i64,
    pub s: usize,
    /// Classical termination orders (a = -M or a_k = -M_k - z_k).
    pub mk: Vec<i64>,
    /// Classical denominator shifts b_k = B_k - z_k.
    pub bk: Vec<i64>,
    pub special: Option<DegenerationKind>,
}

fn prod(xs: &[HValue], ctx: crate::mparith::PrecisionContext) -> HValue {
    let mut acc = HValue::one(ctx);
    for x in xs {
        acc = &acc * x;
    }
    acc
}

fn qmod(q: &QBase, k: i64) -> f64 {
    libm::exp2(k as f64 * q.log2_abs())
}

fn total(m: &[i64]) -> i64 {
    m.iter().sum()
}

fn lower(max: usize, want: usize) -> usize {
    want.min(max)
}

pub(crate) fn choose_shape(id: IdentityId, d: &mut Draw, lim: &DimLimits) -> Shape {
    use IdentityId::*;
    let mut sh = Shape {
        n: 1,
        p: 0,
        m: Vec::new(),
        big_n: 0,
        big_l: 0,
        s: 1,
        mk: Vec::new(),
        bk: Vec::new(),
        special: None,
    };
    let (n_lo, n_hi) = lim.n;
    let (p_lo, p_hi) = lim.p;
    let (m_lo, m_hi) = lim.m;
    let (nn_lo, nn_hi) = lim.big_n;
    let (r_lo, r_hi) = lim.r;
    let lattice_n = n_hi.min(2);
    match id {
        Gustafson6Psi6 => sh.n = d.usize(lower(n_hi, 2).max(n_lo), n_hi),
        Thm1 | Thm1Shifted | CorSt | CorCsc | CorChuUn | CorPkb => {
            sh.n = d.usize(lower(n_hi, 2).max(n_lo), n_hi);
            let (p_top, cap) = if matches!(id, CorChuUn | CorCsc) { (p_hi.min(2), m_hi.min(2)) } else { (p_hi, m_hi) };
            sh.p = d.usize(p_lo.max(1).min(p_top), p_top);
            sh.m = d.ints(sh.p, m_lo, cap);
            if id == Thm1Shifted {
                sh.big_n = d.int(-nn_hi.min(2), nn_hi.min(2));
            }
            if id == CorPkb {
                // the right side is an empty sum once N > |m|
                sh.big_n = d.int(nn_lo.min(total(&sh.m)), nn_hi.min(total(&sh.m)));
            }
        }
        CorC1 | CorPk | CorC1p => {
            sh.n = d.usize(n_lo, lattice_n.max(n_lo));
            sh.p = d.usize(p_lo.max(1).min(p_hi), p_hi);
            sh.m = d.ints(sh.p, m_lo, m_hi.min(2));
        }
        CorKajiharaWatson | CorKajiharaBailey => {
            sh.n = d.usize(n_lo, n_hi);
            sh.p = d.usize(p_lo.max(1).min(p_hi), p_hi);
            sh.big_n = d.int(nn_lo, nn_hi);
        }
        CorMilneSaalschutz | CorMnc | CorMnb | EqPbt => {
            sh.n = d.usize(n_lo, n_hi);
            sh.m = d.ints(sh.n, m_lo, m_hi);
            if id == EqPbt {
                let mm = total(&sh.m);
                sh.big_n = d.int(0, mm);
                sh.big_l = d.int(0, mm);
            }
        }
        CorMilneDougall => {
            sh.n = d.usize(n_lo, n_hi);
            sh.big_n = d.int(nn_lo, nn_hi);
        }
        CorC2 | CorC3 | Cor2l | Cor3l => {
            sh.p = d.usize(p_lo.max(1).min(p_hi), p_hi);
            sh.m = d.ints(sh.p, m_lo, m_hi);
        }
        CorCn | CorCmn => {
            sh.n = d.usize(n_lo, lattice_n.max(n_lo));
            sh.p = d.usize(r_lo, r_hi);
            sh.m = d.ints(sh.p, m_lo, m_hi.min(2));
            if id == CorCmn {
                sh.s = d.usize(1, lattice_n.max(1));
            }
        }
        ClKm | ClKmg | ClUs | ClBi => {
            sh.p = d.usize(r_lo.max(1), r_hi.max(1));
            let big_m = d.int(1, 3);
            loop {
                sh.m = d.ints(sh.p, m_lo, m_hi.min(2));
                if total(&sh.m) <= big_m {
                    break;
                }
            }
            sh.mk = vec![big_m];
        }
        Cl5h5 | ClThmA => {
            sh.n = d.usize(lower(n_hi, 2).max(n_lo), n_hi);
            if id == ClThmA {
                sh.p = d.usize(p_lo.max(1).min(p_hi), p_hi);
                sh.m = d.ints(sh.p, m_lo, m_hi.min(2));
            }
            sh.mk = d.ints(sh.n, 1, 2);
        }
        Cl2h2 | ClThmB => {
            sh.n = d.usize(n_lo, n_hi);
            if id == ClThmB {
                sh.p = d.usize(p_lo.max(1).min(p_hi), p_hi);
                sh.m = d.ints(sh.p, m_lo, m_hi.min(2));
            }
            sh.mk = d.ints(sh.n, 1, 2);
            sh.bk = d.ints(sh.n, 1, 2);
        }
        Cl3h3 => {
            sh.p = d.usize(p_lo.max(1).min(p_hi), p_hi);
            sh.m = d.ints(sh.p, m_lo, m_hi.min(2));
            sh.mk = vec![d.int(1, 3)];
            sh.bk = vec![d.int(1, 3)];
        }
    }
    sh
}

/// (a, b, z) with |q^{1-M-n} B/A| = rho exactly; b_n is solved last.
fn balanced(d: &mut Draw, n: usize, mm: i64, rho: f64) -> (Vec<HValue>, Vec<HValue>, Vec<HValue>) {
    let z = d.frees(n);
    let lq = libm::log(d.qb().value().abs_f64());
    let need = libm::exp((1 - mm - n as i64) as f64 * lq) / rho;
    let per = libm::pow(need, 1.0 / n as f64);
    let a = d.arounds(n, libm::sqrt(per));
    let mut b = d.arounds(n - 1, 1.0 / libm::sqrt(per));
    let aa = prod(&a, d.ctx);
    let rest = prod(&b, d.ctx);
    let t = d.angle();
    let r = d.polar(rho, t);
    let bn = &(&(&r * &aa) * &d.qpow(mm + n as i64 - 1)) / &rest;
    b.push(bn);
    (a, b, z)
}

fn set_u(ps: &mut ParamSet, a: Vec<HValue>, b: Vec<HValue>, z: Vec<HValue>) {
    ps.set_dim("n", z.len() as i64);
    ps.set_vector("a", a).set_vector("b", b).set_vector("z", z);
}

fn set_cm(ps: &mut ParamSet, name: &str, c: Vec<HValue>, m: &[i64], dim: &str, ints: &str) {
    ps.set_dim(dim, m.len() as i64);
    ps.set_vector(name, c).set_ints(ints, m.to_vec());
}

pub(crate) fn build(id: IdentityId, d: &mut Draw, sh: &Shape) -> Result<ParamSet> {
    use IdentityId::*;
    if id.is_classical() {
        return build_classical(id, d, sh);
    }
    // the hyperplane in three variables decays too slowly near |q| = 0.7
    let cap = (id == CorChuUn && sh.n >= 3).then_some(0.5);
    let q = d.draw_q(cap)?;
    d.q = Some(q.clone());
    let ctx = d.ctx;
    let mut ps = ParamSet::new(ctx, Some(q.clone()));
    let rho = d.cfg.target_modulus;
    let mm = total(&sh.m);
    let n = sh.n;
    match id {
        Gustafson6Psi6 => {
            let (a, b, z) = balanced(d, n, 0, rho);
            set_u(&mut ps, a, b, z);
        }
        Thm1 | Thm1Shifted => {
            let (a, b, z) = balanced(d, n, mm, rho);
            set_u(&mut ps, a, b, z);
            let c = d.frees(sh.p);
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            if id == Thm1Shifted {
                ps.set_dim("N", sh.big_n);
            }
        }
        CorSt => {
            let (a, b, z) = balanced(d, n, mm, rho);
            let w = if sh.special == Some(DegenerationKind::PermutedNodes) {
                let mut w = z.clone();
                w.rotate_left(1);
                w
            } else {
                let mut w = d.frees(n - 1);
                let zz = prod(&z, ctx);
                w.push(&zz / &prod(&w, ctx));
                w
            };
            set_u(&mut ps, a, b, z);
            ps.set_vector("w", w);
            let c = d.frees(sh.p);
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
        }
        CorCsc => {
            let z = d.frees(n);
            let zz = prod(&z, ctx);
            let qa = q.log2_abs() * core::f64::consts::LN_2;
            let need = libm::exp((1 - mm) as f64 * qa) / rho;
            let per_a = libm::pow(need / zz.abs_f64(), 1.0 / n as f64);
            let mut a = d.arounds(n - 1, per_a);
            let t = d.angle();
            let r = d.polar(rho, t);
            let an = &d.qpow(1 - mm) / &(&(&r * &zz) * &prod(&a, ctx));
            a.push(an);
            let per_b = libm::exp(qa) / libm::pow(zz.abs_f64(), 1.0 / n as f64);
            let mut b = d.arounds(n - 1, per_b);
            let bn = &d.qpow(n as i64) / &(&zz * &prod(&b, ctx));
            b.push(bn);
            set_u(&mut ps, a, b, z);
            let c = d.frees(sh.p);
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
        }
        CorChuUn => {
            let z = d.frees(n);
            let a = d.frees(n - 1);
            let c = d.frees(sh.p);
            let b = d.around(1.5);
            let t = d.angle();
            let dd = &(&d.polar(rho * rho, t) * &b) * &d.qpow(mm);
            ps.set_dim("n", n as i64).set_vector("z", z).set_vector("a", a);
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            ps.set_scalar("b", b).set_scalar("d", dd);
        }
        CorPkb => {
            let z = d.frees(n);
            let mut a = d.frees(n - 1);
            let zz = prod(&z, ctx);
            let an = &d.qpow(-mm) / &(&zz * &prod(&a, ctx));
            a.push(an);
            let b: Vec<HValue> = z.iter().map(|zi| q.value() / zi).collect();
            set_u(&mut ps, a, b, z);
            let c = d.frees(sh.p);
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            ps.set_dim("N", sh.big_n);
        }
        CorC1 => {
            let f = d.frees(sh.p);
            let z = d.frees(n);
            let c = d.frees(n);
            let e = d.frees(n);
            let b = d.free();
            let dd = d.free();
            let t = d.angle();
            let x = &(&(&(&(&d.polar(rho, t) * &b) * &prod(&c, ctx)) * &dd) * &prod(&e, ctx)) * &d.qpow(mm - 1);
            let a = x.root(n as u32 + 1)?;
            ps.set_dim("n", n as i64);
            ps.set_vector("z", z).set_vector("c", c).set_vector("e", e);
            set_cm(&mut ps, "f", f, &sh.m, "p", "m");
            ps.set_scalar("a", a).set_scalar("b", b).set_scalar("d", dd);
        }
        CorPk => {
            let f = d.frees(sh.p);
            let z = d.frees(n);
            let e = d.frees(n);
            let b = d.free();
            let dd = d.free();
            let t = d.angle();
            let a = &(&(&(&d.polar(rho, t) * &b) * &dd) * &prod(&e, ctx)) * &d.qpow(mm - 1);
            ps.set_dim("n", n as i64);
            ps.set_vector("z", z).set_vector("e", e);
            set_cm(&mut ps, "f", f, &sh.m, "p", "m");
            ps.set_scalar("a", a).set_scalar("b", b).set_scalar("d", dd);
        }
        CorKajiharaWatson => {
            let f = d.frees(sh.p);
            let g = d.frees(sh.p);
            let z = d.frees(n);
            let e = d.frees(n);
            let a = d.free();
            let dd = d.free();
            ps.set_dim("n", n as i64).set_dim("p", sh.p as i64).set_dim("N", sh.big_n);
            ps.set_vector("f", f).set_vector("g", g).set_vector("z", z).set_vector("e", e);
            ps.set_scalar("a", a).set_scalar("d", dd);
        }
        CorKajiharaBailey => {
            let a = d.frees(n);
            let z = d.frees(n);
            let b = d.frees(sh.p);
            let mut w = d.frees(sh.p - 1);
            let abz = &(&prod(&a, ctx) * &prod(&b, ctx)) * &prod(&z, ctx);
            w.push(&abz / &prod(&w, ctx));
            ps.set_dim("n", n as i64).set_dim("p", sh.p as i64).set_dim("N", sh.big_n);
            ps.set_vector("a", a).set_vector("z", z).set_vector("b", b).set_vector("w", w);
        }
        CorMilneSaalschutz => {
            let z = d.frees(n);
            let (a, b, c) = (d.free(), d.free(), d.free());
            let dd = &(&(&d.qpow(1 - mm) * &a) * &b) / &c;
            set_cm(&mut ps, "z", z, &sh.m, "n", "m");
            ps.set_scalar("a", a).set_scalar("b", b).set_scalar("c", c).set_scalar("d", dd);
        }
        CorMilneDougall => {
            let z = d.frees(n);
            let e = d.frees(n);
            let dd = d.free();
            ps.set_dim("n", n as i64).set_dim("N", sh.big_n);
            ps.set_vector("z", z).set_vector("e", e).set_scalar("d", dd);
        }
        CorC2 => {
            let f = d.frees(sh.p);
            let a = d.free();
            // spread the size of bcde evenly to keep transients short
            let k = libm::pow(a.abs_f64() * a.abs_f64() * qmod(&q, 1 - mm) / rho, 0.25);
            let b = d.around(k);
            let c = d.around(k);
            let dd = d.around(k);
            let t = d.angle();
            let den = &(&(&b * &c) * &dd) * &d.polar(rho, t);
            let e = &(&(&a * &a) * &d.qpow(1 - mm)) / &den;
            set_cm(&mut ps, "f", f, &sh.m, "p", "m");
            ps.set_scalar("a", a).set_scalar("b", b).set_scalar("c", c).set_scalar("d", dd).set_scalar("e", e);
        }
        CorC3 => {
            let f = d.frees(sh.p);
            let a = d.free();
            let k = libm::pow(a.abs_f64() * qmod(&q, 1 - mm) / rho, 1.0 / 3.0);
            let (b, c) = (d.around(k), d.around(k));
            let t = d.angle();
            let den = &(&b * &c) * &d.polar(rho, t);
            let dd = &(&a * &d.qpow(1 - mm)) / &den;
            set_cm(&mut ps, "f", f, &sh.m, "p", "m");
            ps.set_scalar("a", a).set_scalar("b", b).set_scalar("c", c).set_scalar("d", dd);
        }
        Cor2l | Cor3l => {
            let c = d.frees(sh.p);
            let b = d.free();
            let (a, dd) = if sh.special == Some(DegenerationKind::DEqualsBq) {
                // |q^{1-|m|}/a| = rho
                let lq = q.log2_abs() * core::f64::consts::LN_2;
                let a = d.around(libm::exp((1 - mm) as f64 * lq) / rho);
                (a, &b * q.value())
            } else {
                let a = d.free();
                let t = d.angle();
                let dd = &(&(&d.polar(rho, t) * &a) * &b) * &d.qpow(mm);
                (a, dd)
            };
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            ps.set_scalar("a", a).set_scalar("b", b).set_scalar("d", dd);
        }
        CorMnc => {
            let z = d.frees(n);
            let [a, b, c, dd, e] = [(); 5].map(|_| d.free());
            let f = &(&(&(&d.qpow(1 - mm) * &a) * &b) * &c) / &(&dd * &e);
            set_cm(&mut ps, "z", z, &sh.m, "n", "m");
            for (k, v) in [("a", a), ("b", b), ("c", c), ("d", dd), ("e", e), ("f", f)] {
                ps.set_scalar(k, v);
            }
        }
        EqPbt => {
            let z = d.frees(n);
            let (b, e) = (d.free(), d.free());
            set_cm(&mut ps, "z", z, &sh.m, "n", "m");
            ps.set_dim("N", sh.big_n).set_dim("L", sh.big_l);
            ps.set_scalar("b", b).set_scalar("e", e);
        }
        CorMnb => {
            let z = d.frees(n);
            let [a, b, c, dd, e, f] = [(); 6].map(|_| d.free());
            let den = &(&(&(&b * &c) * &dd) * &e) * &f;
            let g = &(&(&(&a * &a) * &a) * &d.qpow(2 + mm)) / &den;
            set_cm(&mut ps, "z", z, &sh.m, "n", "m");
            for (k, v) in [("a", a), ("b", b), ("c", c), ("d", dd), ("e", e), ("f", f), ("g", g)] {
                ps.set_scalar(k, v);
            }
        }
        CorC1p => {
            let tm = d.cfg.t_modulus;
            let (a, b, z) = balanced(d, n, mm, tm * tm);
            set_u(&mut ps, a, b, z);
            let c = d.frees(sh.p);
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            let t = d.angle();
            let t = d.polar(tm, t);
            ps.set_scalar("t", t);
        }
        CorCn | CorCmn => {
            let tm = d.cfg.t_modulus;
            let (a, b, z) = balanced(d, n, mm, tm * tm);
            let dv = d.frees(sh.p);
            let t = d.angle();
            let t = d.polar(tm, t);
            if id == CorCmn {
                let u = d.free();
                let (mut ta, mut tb, tz) = balanced(d, sh.s, mm, tm * tm);
                ta.pop();
                tb.pop();
                let tzz = prod(&tz, ctx);
                let az = &prod(&a, ctx) * &prod(&z, ctx);
                let bz = &prod(&b, ctx) * &prod(&z, ctx);
                let ta_s = &(&u * &az) / &(&prod(&ta, ctx) * &tzz);
                let tb_s = &(&(&u * &bz) * &d.qpow(sh.s as i64 - n as i64)) / &(&prod(&tb, ctx) * &tzz);
                ta.push(ta_s);
                tb.push(tb_s);
                ps.set_dim("s", sh.s as i64);
                ps.set_vector("ta", ta).set_vector("tb", tb).set_vector("tz", tz).set_scalar("u", u);
            }
            set_u(&mut ps, a, b, z);
            set_cm(&mut ps, "d", dv, &sh.m, "r", "l");
            ps.set_scalar("t", t);
        }
        _ => unreachable!("classical ids handled above"),
    }
    Ok(ps)
}

fn build_classical(id: IdentityId, d: &mut Draw, sh: &Shape) -> Result<ParamSet> {
    use IdentityId::*;
    let ctx = d.ctx;
    let term = d.cfg.terminating;
    let mut ps = ParamSet::new(ctx, None);
    let mm = total(&sh.m);
    let int = |k: i64| HValue::from_i64(k, ctx);
    match id {
        ClKm | ClKmg | ClUs | ClBi => {
            let c = d.dyadics(sh.p, 0.5, 3.0);
            let big_m = sh.mk[0];
            let a = if term { int(-big_m) } else { &int(1 - mm) - &d.dyadic(0.5, 1.5) };
            let b = d.dyadic(0.3, 2.0);
            set_cm(&mut ps, "c", c, &sh.m, "r", "m");
            if id != ClKm {
                let dd = if sh.special == Some(DegenerationKind::DEqualsBPlus1) {
                    b.add_i64(1)
                } else if term {
                    &b.add_i64(mm) + &d.dyadic(0.5, 2.0)
                } else {
                    &(&b + &a).add_i64(mm) + &d.dyadic(0.5, 2.0)
                };
                ps.set_scalar("d", dd);
            }
            ps.set_scalar("a", a).set_scalar("b", b);
        }
        Cl5h5 | ClThmA => {
            let n = sh.n;
            let z = d.dyadics(n, 0.1, 2.0);
            let a: Vec<HValue> = if term {
                (0..n).map(|k| &int(-sh.mk[k]) - &z[k]).collect()
            } else {
                (0..n).map(|k| &(-&d.dyadic(0.2, 1.8)) - &z[k]).collect()
            };
            let mut b = d.dyadics(n, 0.5, 2.0);
            let mut sa = HValue::zero(ctx);
            for x in &a {
                sa = &sa + x;
            }
            b[n - 1] = (&b[n - 1] + &sa).add_i64(n as i64 + mm);
            set_u(&mut ps, a, b, z);
            if id == ClThmA {
                let c = d.dyadics(sh.p, 0.3, 2.0);
                set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            }
        }
        Cl2h2 | ClThmB => {
            let n = sh.n;
            let z = d.dyadics(n, 0.1, 2.0);
            let mut a: Vec<HValue> = if term {
                (0..n).map(|k| &int(-sh.mk[k]) - &z[k]).collect()
            } else {
                (0..n).map(|k| &(-&d.dyadic(0.2, 1.8)) - &z[k]).collect()
            };
            a.push(d.dyadic(0.1, 1.0));
            let mut b: Vec<HValue> = if term {
                (0..n).map(|k| &int(sh.bk[k]) - &z[k]).collect()
            } else {
                (0..n).map(|k| &d.dyadic(1.2, 2.8) - &z[k]).collect()
            };
            b.push(d.dyadic(0.5, 2.0));
            let mut sa = HValue::zero(ctx);
            for x in &a {
                sa = &sa + x;
            }
            let mut sb = HValue::zero(ctx);
            for x in &b[..n] {
                sb = &sb + x;
            }
            b[n] = (&(&b[n] + &sa) - &sb).add_i64(n as i64 + mm + 2);
            ps.set_dim("n", n as i64);
            ps.set_vector("a", a).set_vector("b", b).set_vector("z", z);
            if id == ClThmB {
                let c = d.dyadics(sh.p, 0.3, 2.0);
                set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            }
        }
        Cl3h3 => {
            let c = d.dyadics(sh.p, 0.3, 2.0);
            let (a, dd) = if term {
                (int(-sh.mk[0]), int(sh.bk[0]))
            } else {
                (-&d.dyadic(0.2, 1.8), d.dyadic(1.2, 2.8))
            };
            let b = d.dyadic(0.2, 1.0);
            let e = (&d.dyadic(0.5, 2.0) + &b).add_i64(mm + 2);
            set_cm(&mut ps, "c", c, &sh.m, "p", "m");
            ps.set_scalar("a", a).set_scalar("b", b).set_scalar("d", dd).set_scalar("e", e);
        }
        _ => unreachable!("q-mode ids handled by build"),
    }
    Ok(ps)
}

/// Shapes for the documented degenerations of an identity.
pub(crate) fn degenerate_shapes(id: IdentityId, base: &Shape) -> Vec<(DegenerationKind, Shape)> {
    use DegenerationKind::*;
    use IdentityId::*;
    let kinds: &[DegenerationKind] = match id {
        Gustafson6Psi6 | Cl2h2 | Cl5h5 => &[SingleVariable],
        Thm1 | CorC1 | CorCsc | CorChuUn | CorPk | CorC1p | ClThmA | ClThmB => {
            &[AllMZero, SomeMZero, EmptyP, SingleVariable]
        }
        Thm1Shifted | CorPkb => &[AllMZero, SomeMZero, EmptyP, SingleVariable, ZeroN],
        CorSt => &[AllMZero, EmptyP, SingleVariable, PermutedNodes],
        CorKajiharaWatson | CorKajiharaBailey | CorMilneDougall => &[SingleVariable, ZeroN],
        CorMilneSaalschutz | CorMnc | CorMnb => &[AllMZero, SomeMZero, SingleVariable],
        EqPbt => &[AllMZero, SingleVariable, ZeroN],
        CorC2 | CorC3 | Cor3l | ClKm | ClBi | Cl3h3 => &[AllMZero, SomeMZero, EmptyP],
        Cor2l => &[AllMZero, SomeMZero, EmptyP, DEqualsBq],
        ClKmg => &[AllMZero, SomeMZero, EmptyP, DEqualsBPlus1],
        ClUs => &[AllMZero, SomeMZero],
        CorCn | CorCmn => &[AllMZero, SingleVariable],
    };
    kinds
        .iter()
        .map(|&k| {
            let mut s = base.clone();
            match k {
                AllMZero => s.m.iter_mut().for_each(|x| *x = 0),
                SomeMZero => {
                    if s.m.len() < 2 {
                        s.m.resize(2, 1);
                        s.p = s.p.max(2);
                        if matches!(id, CorMilneSaalschutz | CorMnc | CorMnb) {
                            s.n = s.m.len();
                        }
                    }
                    s.m[0] = 0;
                    s.m[1] = s.m[1].max(1);
                    if let Some(big_m) = s.mk.first_mut() {
                        if matches!(id, ClKm | ClKmg | ClUs | ClBi) {
                            *big_m = (*big_m).max(total(&s.m));
                        }
                    }
                }
                EmptyP => {
                    s.p = 0;
                    s.m.clear();
                }
                SingleVariable => {
                    s.n = 1;
                    s.mk.truncate(1);
                    s.bk.truncate(1);
                    if matches!(id, CorMilneSaalschutz | CorMnc | CorMnb | EqPbt) {
                        s.m.truncate(1);
                        if id == EqPbt {
                            s.big_n = s.big_n.min(total(&s.m));
                            s.big_l = s.big_l.min(total(&s.m));
                        }
                    }
                    if id == CorCmn {
                        s.s = 1;
                    }
                }
                ZeroN => s.big_n = 0,
                DEqualsBPlus1 => {
                    // a box with a single point would make the collapse trivial
                    if total(&s.m) == 0 {
                        if s.m.is_empty() {
                            s.m.push(0);
                            s.p = 1;
                        }
                        s.m[0] = 1;
                    }
                    if let Some(big_m) = s.mk.first_mut() {
                        *big_m = (*big_m).max(total(&s.m));
                    }
                }
                PermutedNodes | DEqualsBq => {}
            }
            if id == CorPkb {
                s.big_n = s.big_n.min(total(&s.m));
            }
            if id == EqPbt {
                let mm = total(&s.m);
                s.big_n = s.big_n.min(mm);
                s.big_l = s.big_l.min(mm);
            }
            s.special = Some(k);
            (k, s)
        })
        .collect()
}

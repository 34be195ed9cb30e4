use alloc::vec;
use alloc::vec::Vec;

use super::constraint::{min_int, node_separation, node_separation_additive, residual, Constraint};
use super::params::{Len, ParamSet, Schema};
use super::{classical as cl, qfinite as qf, qseries as qs, IdentityDescriptor, IdentityId};
use crate::error::Result;
use crate::mparith::HValue;

fn m_sum(ps: &ParamSet) -> Result<i64> {
    ps.int_sum("m")
}

fn sc(ps: &ParamSet, k: &str) -> Result<HValue> {
    Ok(ps.scalar(k)?.clone())
}

/// |q^{1-M-n} B/A| with M = |m| (or |l|).
fn ab_modulus(ps: &ParamSet, ints: &str) -> Result<f64> {
    let n = ps.dim("n")?;
    let mm = ps.int_sum(ints)?;
    let v = &ps.qpow(1 - mm - n)? * &ps.prod("b")?.checked_div(&ps.prod("a")?)?;
    Ok(v.abs_f64())
}

fn thm1_modulus(ps: &ParamSet) -> Result<f64> {
    ab_modulus(ps, "m")
}

fn z_sep(ps: &ParamSet) -> Result<f64> {
    Ok(node_separation(ps.vector("z")?))
}

fn m_nonneg(ps: &ParamSet) -> Result<f64> {
    Ok(min_int(ps.int_vec("m")?))
}

fn n_pos(ps: &ParamSet) -> Result<f64> {
    Ok((ps.dim("n")? - 1) as f64)
}

fn big_n_nonneg(ps: &ParamSet) -> Result<f64> {
    Ok(ps.dim("N")? as f64)
}

fn t_abs(ps: &ParamSet) -> Result<f64> {
    Ok(ps.scalar("t")?.abs_f64())
}

fn thm1_constraint() -> Constraint {
    Constraint::modulus("|q^{1-|m|-n}B/A| < 1", thm1_modulus)
}

fn base(q: bool) -> Schema {
    Schema::new(q)
}

fn u_schema(with_c: bool) -> Schema {
    let s = base(true).dim("n").vector("a", Len::Dim("n")).vector("b", Len::Dim("n")).vector("z", Len::Dim("n"));
    if with_c {
        s.dim("p").vector("c", Len::Dim("p")).ints("m", Len::Dim("p"))
    } else {
        s
    }
}

fn standard(extra: Vec<Constraint>) -> Vec<Constraint> {
    let mut v = vec![
        Constraint::nonneg("n >= 1", n_pos),
        Constraint::nonneg("m_i >= 0", m_nonneg),
        Constraint::nonvanishing("z_i != z_j", z_sep),
    ];
    v.extend(extra);
    v
}

fn desc(
    id: IdentityId,
    schema: Schema,
    constraints: Vec<Constraint>,
    anchor: &'static str,
    dependent: Option<&'static str>,
    lhs: super::SideFn,
    rhs: super::SideFn,
) -> IdentityDescriptor {
    IdentityDescriptor { id, schema, constraints, anchor, dependent, lhs, rhs }
}

pub(crate) fn descriptor(id: IdentityId) -> IdentityDescriptor {
    use IdentityId::*;
    match id {
        Gustafson6Psi6 => desc(
            id,
            u_schema(false),
            vec![
                Constraint::nonneg("n >= 1", n_pos),
                Constraint::nonvanishing("z_i != z_j", z_sep),
                Constraint::modulus("|q^{1-n}B/A| < 1", |ps| {
                    let n = ps.dim("n")?;
                    Ok((&ps.qpow(1 - n)? * &ps.prod("b")?.checked_div(&ps.prod("a")?)?).abs_f64())
                }),
            ],
            "multivariable U(n) 6psi6 sum (Gustafson)",
            None,
            qs::gi_lhs,
            qs::gi_rhs,
        ),
        Thm1 => desc(
            id,
            u_schema(true),
            standard(vec![thm1_constraint()]),
            "master reduction of a multilateral Karlsson-Minton type U(n) series",
            None,
            qs::thm1_lhs,
            qs::thm1_rhs,
        ),
        Thm1Shifted => desc(
            id,
            u_schema(true).dim("N"),
            standard(vec![thm1_constraint()]),
            "master reduction with summation over |y| = N",
            None,
            qs::thm1s_lhs,
            qs::thm1s_rhs,
        ),
        CorC1 => desc(
            id,
            base(true)
                .dim("n")
                .dim("p")
                .scalar("a")
                .scalar("b")
                .scalar("d")
                .vector("c", Len::Dim("n"))
                .vector("z", Len::Dim("n"))
                .vector("e", Len::Dim("n"))
                .vector("f", Len::Dim("p"))
                .ints("m", Len::Dim("p")),
            standard(vec![
                Constraint::modulus("|a^{n+1}q^{1-|m|}/(bCdE)| < 1", |ps| {
                    let n = ps.dim("n")?;
                    let a = sc(ps, "a")?;
                    let den = &(&(&sc(ps, "b")? * &ps.prod("c")?) * &sc(ps, "d")?) * &ps.prod("e")?;
                    Ok((&a.powi(n + 1)? * &ps.qpow(1 - m_sum(ps)?)?).checked_div(&den)?.abs_f64())
                }),
                Constraint::nonvanishing("f_i != f_j", |ps| Ok(node_separation(ps.vector("f")?))),
            ]),
            "well-poised bilateral U(n) series over the full lattice",
            None,
            qs::c1_lhs,
            qs::c1_rhs,
        ),
        CorSt => desc(
            id,
            u_schema(true).vector("w", Len::Dim("n")),
            standard(vec![
                thm1_constraint(),
                Constraint::equality("Z = W", |ps| Ok(residual(&ps.prod("z")?, &ps.prod("w")?))),
                Constraint::nonvanishing("w_i != w_j", |ps| Ok(node_separation(ps.vector("w")?))),
            ]),
            "the reduced sum depends on z only through Z",
            Some("w[n]"),
            qs::st_lhs,
            qs::st_rhs,
        ),
        CorCsc => desc(
            id,
            u_schema(true),
            standard(vec![
                Constraint::modulus("|q^{1-|m|}/(AZ)| < 1", |ps| {
                    let az = &ps.prod("a")? * &ps.prod("z")?;
                    Ok(ps.qpow(1 - m_sum(ps)?)?.checked_div(&az)?.abs_f64())
                }),
                Constraint::equality("BZ = q^n", |ps| {
                    Ok(residual(&(&ps.prod("b")? * &ps.prod("z")?), &ps.qpow(ps.dim("n")?)?))
                }),
            ]),
            "balanced case where the finite sum collapses to a product",
            Some("b[n]"),
            qs::csc_lhs,
            qs::csc_rhs,
        ),
        CorChuUn => desc(
            id,
            base(true)
                .dim("n")
                .dim("p")
                .vector("z", Len::Dim("n"))
                .vector("a", Len::DimPlus("n", -1))
                .vector("c", Len::Dim("p"))
                .ints("m", Len::Dim("p"))
                .scalar("b")
                .scalar("d"),
            standard(vec![Constraint::modulus("|q^{-|m|}d/b| < 1", |ps| {
                Ok((&ps.qpow(-m_sum(ps)?)? * &sc(ps, "d")?).checked_div(&sc(ps, "b")?)?.abs_f64())
            })]),
            "U(n) extension of Chu's bilateral Karlsson-Minton sum",
            None,
            qs::chu_lhs,
            qs::chu_rhs,
        ),
        CorPk => desc(
            id,
            base(true)
                .dim("n")
                .dim("p")
                .scalar("a")
                .scalar("b")
                .scalar("d")
                .vector("z", Len::Dim("n"))
                .vector("e", Len::Dim("n"))
                .vector("f", Len::Dim("p"))
                .ints("m", Len::Dim("p")),
            standard(vec![
                Constraint::modulus("|aq^{1-|m|}/(bdE)| < 1", |ps| {
                    let den = &(&sc(ps, "b")? * &sc(ps, "d")?) * &ps.prod("e")?;
                    Ok((&sc(ps, "a")? * &ps.qpow(1 - m_sum(ps)?)?).checked_div(&den)?.abs_f64())
                }),
                Constraint::nonvanishing("f_i != f_j", |ps| Ok(node_separation(ps.vector("f")?))),
            ]),
            "unilateral well-poised U(n) series",
            None,
            qs::pk_lhs,
            qs::pk_rhs,
        ),
        CorPkb => desc(
            id,
            u_schema(true).dim("N"),
            standard(vec![
                Constraint::nonneg("N >= 0", big_n_nonneg),
                Constraint::equality("AZ = q^{-|m|}", |ps| {
                    Ok(residual(&(&ps.prod("a")? * &ps.prod("z")?), &ps.qpow(-m_sum(ps)?)?))
                }),
                Constraint::equality("BZ = q^n", |ps| {
                    Ok(residual(&(&ps.prod("b")? * &ps.prod("z")?), &ps.qpow(ps.dim("n")?)?))
                }),
            ]),
            "terminating balanced form of the shifted reduction",
            Some("a[n]"),
            qs::pkb_lhs,
            qs::pkb_rhs,
        ),
        CorKajiharaWatson => desc(
            id,
            base(true)
                .dim("n")
                .dim("p")
                .dim("N")
                .scalar("a")
                .scalar("d")
                .vector("z", Len::Dim("n"))
                .vector("e", Len::Dim("n"))
                .vector("f", Len::Dim("p"))
                .vector("g", Len::Dim("p")),
            vec![
                Constraint::nonneg("n >= 1", n_pos),
                Constraint::nonneg("N >= 0", big_n_nonneg),
                Constraint::nonvanishing("z_i != z_j", z_sep),
                Constraint::nonvanishing("f_i != f_j", |ps| Ok(node_separation(ps.vector("f")?))),
            ],
            "terminating very-well-poised transformation (Kajihara type)",
            None,
            qf::kc_lhs,
            qf::kc_rhs,
        ),
        CorKajiharaBailey => desc(
            id,
            base(true)
                .dim("n")
                .dim("p")
                .dim("N")
                .vector("a", Len::Dim("n"))
                .vector("z", Len::Dim("n"))
                .vector("b", Len::Dim("p"))
                .vector("w", Len::Dim("p")),
            vec![
                Constraint::nonneg("n >= 1", n_pos),
                Constraint::nonneg("p >= 1", |ps| Ok((ps.dim("p")? - 1) as f64)),
                Constraint::nonneg("N >= 0", big_n_nonneg),
                Constraint::equality("W = ABZ", |ps| {
                    let abz = &(&ps.prod("a")? * &ps.prod("b")?) * &ps.prod("z")?;
                    Ok(residual(&ps.prod("w")?, &abz))
                }),
                Constraint::nonvanishing("z_i != z_j", z_sep),
                Constraint::nonvanishing("w_i != w_j", |ps| Ok(node_separation(ps.vector("w")?))),
            ],
            "Bailey-type transformation between terminating U(n) and U(p) sums",
            Some("w[p]"),
            qf::kt_lhs,
            qf::kt_rhs,
        ),
        CorMilneSaalschutz => desc(
            id,
            base(true)
                .dim("n")
                .vector("z", Len::Dim("n"))
                .ints("m", Len::Dim("n"))
                .scalar("a")
                .scalar("b")
                .scalar("c")
                .scalar("d"),
            standard(vec![Constraint::equality("q^{1-|m|}ab = cd", |ps| {
                let lhs = &(&ps.qpow(1 - m_sum(ps)?)? * &sc(ps, "a")?) * &sc(ps, "b")?;
                Ok(residual(&lhs, &(&sc(ps, "c")? * &sc(ps, "d")?)))
            })]),
            "multivariable q-Saalschutz summation (Milne)",
            Some("d"),
            qf::mc_lhs,
            qf::mc_rhs,
        ),
        CorMilneDougall => desc(
            id,
            base(true)
                .dim("n")
                .dim("N")
                .vector("z", Len::Dim("n"))
                .vector("e", Len::Dim("n"))
                .scalar("d"),
            vec![
                Constraint::nonneg("n >= 1", n_pos),
                Constraint::nonneg("N >= 0", big_n_nonneg),
                Constraint::nonvanishing("z_i != z_j", z_sep),
            ],
            "multivariable q-Dougall type summation (Milne)",
            None,
            qf::cmd_lhs,
            qf::cmd_rhs,
        ),
        CorC2 => desc(
            id,
            base(true)
                .dim("p")
                .scalar("a")
                .scalar("b")
                .scalar("c")
                .scalar("d")
                .scalar("e")
                .vector("f", Len::Dim("p"))
                .ints("m", Len::Dim("p")),
            vec![
                Constraint::nonneg("m_i >= 0", m_nonneg),
                Constraint::nonvanishing("f_i != f_j", |ps| Ok(node_separation(ps.vector("f")?))),
                Constraint::modulus("|a^2q^{1-|m|}/(bcde)| < 1", |ps| {
                    let a = sc(ps, "a")?;
                    let den = &(&(&sc(ps, "b")? * &sc(ps, "c")?) * &sc(ps, "d")?) * &sc(ps, "e")?;
                    Ok((&(&a * &a) * &ps.qpow(1 - m_sum(ps)?)?).checked_div(&den)?.abs_f64())
                }),
            ],
            "one-variable very-well-poised bilateral Karlsson-Minton series",
            Some("e"),
            qf::c2_lhs,
            qf::c2_rhs,
        ),
        CorC3 => desc(
            id,
            base(true)
                .dim("p")
                .scalar("a")
                .scalar("b")
                .scalar("c")
                .scalar("d")
                .vector("f", Len::Dim("p"))
                .ints("m", Len::Dim("p")),
            vec![
                Constraint::nonneg("m_i >= 0", m_nonneg),
                Constraint::nonvanishing("f_i != f_j", |ps| Ok(node_separation(ps.vector("f")?))),
                Constraint::modulus("|aq^{1-|m|}/(bcd)| < 1", |ps| {
                    let den = &(&sc(ps, "b")? * &sc(ps, "c")?) * &sc(ps, "d")?;
                    Ok((&sc(ps, "a")? * &ps.qpow(1 - m_sum(ps)?)?).checked_div(&den)?.abs_f64())
                }),
            ],
            "one-variable very-well-poised unilateral series",
            Some("d"),
            qf::c3_lhs,
            qf::c3_rhs,
        ),
        Cor2l | Cor3l => desc(
            id,
            base(true)
                .dim("p")
                .scalar("a")
                .scalar("b")
                .scalar("d")
                .vector("c", Len::Dim("p"))
                .ints("m", Len::Dim("p")),
            vec![
                Constraint::nonneg("m_i >= 0", m_nonneg),
                Constraint::nonvanishing("c_i != c_j", |ps| Ok(node_separation(ps.vector("c")?))),
                Constraint::modulus("|dq^{-|m|}/(ab)| < 1", |ps| {
                    let ab = &sc(ps, "a")? * &sc(ps, "b")?;
                    Ok((&sc(ps, "d")? * &ps.qpow(-m_sum(ps)?)?).checked_div(&ab)?.abs_f64())
                }),
            ],
            if id == Cor2l {
                "q-analogue of the Karlsson-Minton summation for r+2 phi r+1"
            } else {
                "second reduction of the unilateral Karlsson-Minton series"
            },
            Some("d"),
            qf::l23_lhs,
            if id == Cor2l { qf::l2_rhs } else { qf::l3_rhs },
        ),
        CorMnc => desc(
            id,
            base(true)
                .dim("n")
                .vector("z", Len::Dim("n"))
                .ints("m", Len::Dim("n"))
                .scalar("a")
                .scalar("b")
                .scalar("c")
                .scalar("d")
                .scalar("e")
                .scalar("f"),
            standard(vec![Constraint::equality("q^{1-|m|}abc = def", |ps| {
                let l = &(&(&ps.qpow(1 - m_sum(ps)?)? * &sc(ps, "a")?) * &sc(ps, "b")?) * &sc(ps, "c")?;
                let r = &(&sc(ps, "d")? * &sc(ps, "e")?) * &sc(ps, "f")?;
                Ok(residual(&l, &r))
            })]),
            "multivariable analogue of Sears' transformation",
            Some("f"),
            qf::mnc_lhs,
            qf::mnc_rhs,
        ),
        EqPbt => desc(
            id,
            base(true)
                .dim("n")
                .dim("N")
                .dim("L")
                .vector("z", Len::Dim("n"))
                .ints("m", Len::Dim("n"))
                .scalar("b")
                .scalar("e"),
            standard(vec![
                Constraint::nonneg("N >= 0", big_n_nonneg),
                Constraint::nonneg("L >= 0", |ps| Ok(ps.dim("L")? as f64)),
            ]),
            "finite hyperplane sum evaluated in two ways",
            None,
            qf::pbt_lhs,
            qf::pbt_rhs,
        ),
        CorMnb => desc(
            id,
            base(true)
                .dim("n")
                .vector("z", Len::Dim("n"))
                .ints("m", Len::Dim("n"))
                .scalar("a")
                .scalar("b")
                .scalar("c")
                .scalar("d")
                .scalar("e")
                .scalar("f")
                .scalar("g"),
            standard(vec![Constraint::equality("bcdefg = a^3q^{2+|m|}", |ps| {
                let mut l = sc(ps, "b")?;
                for k in ["c", "d", "e", "f", "g"] {
                    l = &l * ps.scalar(k)?;
                }
                let a = sc(ps, "a")?;
                Ok(residual(&l, &(&(&a * &a) * &(&a * &ps.qpow(2 + m_sum(ps)?)?))))
            })]),
            "multivariable Bailey transformation of well-poised Karlsson-Minton sums",
            Some("g"),
            qf::mnb_lhs,
            qf::mnb_rhs,
        ),
        CorC1p => desc(
            id,
            u_schema(true).scalar("t"),
            standard(vec![
                Constraint::modulus("|q^{1-|m|-n}B/A| < |t|", |ps| Ok(thm1_modulus(ps)? / t_abs(ps)?)),
                Constraint::modulus("|t| < 1", t_abs),
            ]),
            "Karlsson-Minton extension of the multivariable 1psi1 sum",
            None,
            qs::c1p_lhs,
            qs::c1p_rhs,
        ),
        CorCn | CorCmn => {
            let mut schema = base(true)
                .dim("n")
                .dim("r")
                .vector("a", Len::Dim("n"))
                .vector("b", Len::Dim("n"))
                .vector("z", Len::Dim("n"))
                .vector("d", Len::Dim("r"))
                .ints("l", Len::Dim("r"))
                .scalar("t");
            let mut cs = vec![
                Constraint::nonneg("n >= 1", n_pos),
                Constraint::nonneg("l_i >= 0", |ps| Ok(min_int(ps.int_vec("l")?))),
                Constraint::nonvanishing("z_i != z_j", z_sep),
                Constraint::nonvanishing("d_i != d_j", |ps| Ok(node_separation(ps.vector("d")?))),
                Constraint::modulus("|q^{1-|l|-n}B/A| < |t|", |ps| Ok(ab_modulus(ps, "l")? / t_abs(ps)?)),
                Constraint::modulus("|t| < 1", t_abs),
            ];
            if id == CorCmn {
                schema = schema
                    .dim("s")
                    .vector("ta", Len::Dim("s"))
                    .vector("tb", Len::Dim("s"))
                    .vector("tz", Len::Dim("s"))
                    .scalar("u");
                cs.extend([
                    Constraint::nonneg("s >= 1", |ps| Ok((ps.dim("s")? - 1) as f64)),
                    Constraint::nonvanishing("tz_i != tz_j", |ps| Ok(node_separation(ps.vector("tz")?))),
                    Constraint::equality("tA tZ = uAZ", |ps| {
                        let l = &ps.prod("ta")? * &ps.prod("tz")?;
                        let r = &(&sc(ps, "u")? * &ps.prod("a")?) * &ps.prod("z")?;
                        Ok(residual(&l, &r))
                    }),
                    Constraint::equality("tB tZ = q^{s-n}uBZ", |ps| {
                        let l = &ps.prod("tb")? * &ps.prod("tz")?;
                        let k = ps.dim("s")? - ps.dim("n")?;
                        let r = &(&(&sc(ps, "u")? * &ps.prod("b")?) * &ps.prod("z")?) * &ps.qpow(k)?;
                        Ok(residual(&l, &r))
                    }),
                    Constraint::modulus("|q^{1-|l|-s}tB/tA| < |t|", |ps| {
                        let s = ps.dim("s")?;
                        let v = &ps.qpow(1 - ps.int_sum("l")? - s)? * &ps.prod("tb")?.checked_div(&ps.prod("ta")?)?;
                        Ok(v.abs_f64() / t_abs(ps)?)
                    }),
                ]);
            }
            desc(
                id,
                schema,
                cs,
                if id == CorCn {
                    "multivariable 1psi1 sum with Karlsson-Minton factors in |y|"
                } else {
                    "transformation between U(n) and U(s) 1psi1 type series"
                },
                if id == CorCmn { Some("ta[s], tb[s]") } else { None },
                if id == CorCn { qs::cn_lhs } else { qs::cmn_lhs },
                if id == CorCn { qs::cn_rhs } else { qs::cmn_rhs },
            )
        }
        ClKm | ClKmg | ClUs | ClBi => {
            let mut schema = base(false)
                .dim("r")
                .vector("c", Len::Dim("r"))
                .ints("m", Len::Dim("r"))
                .scalar("a")
                .scalar("b");
            let mut cs = vec![
                Constraint::nonneg("m_i >= 0", m_nonneg),
                Constraint::nonvanishing("c_i - c_j not an integer", |ps| {
                    Ok(node_separation_additive(ps.vector("c")?))
                }),
            ];
            if id == ClKm {
                cs.push(Constraint::real_part("Re(a + |m|) < 1", |ps| {
                    Ok(1.0 - sc(ps, "a")?.re_f64() - m_sum(ps)? as f64)
                }));
            } else {
                schema = schema.scalar("d");
                cs.push(Constraint::real_part("Re(a + |m| + b - d) < 0", |ps| {
                    let v = &(&sc(ps, "d")? - &sc(ps, "a")?) - &sc(ps, "b")?;
                    Ok(v.re_f64() - m_sum(ps)? as f64)
                }));
            }
            if id == ClUs {
                cs.push(Constraint::nonneg("r >= 1", |ps| Ok((ps.dim("r")? - 1) as f64)));
            }
            let (anchor, lhs, rhs): (&'static str, super::SideFn, super::SideFn) = match id {
                ClKm => ("Karlsson-Minton summation of r+2 F r+1 at unit argument", cl::km_lhs, cl::km_rhs),
                ClKmg => ("Karlsson-Minton series with general denominator d", cl::kmg_lhs, cl::kmg_rhs),
                ClUs => ("nested alternative finite form of the general series", cl::us_lhs, cl::us_rhs),
                _ => ("classical limit of the second unilateral reduction", cl::bi_lhs, cl::bi_rhs),
            };
            desc(id, schema, cs, anchor, Some("a"), lhs, rhs)
        }
        Cl5h5 | ClThmA => {
            let mut schema = base(false)
                .dim("n")
                .vector("a", Len::Dim("n"))
                .vector("b", Len::Dim("n"))
                .vector("z", Len::Dim("n"));
            if id == ClThmA {
                schema = schema.dim("p").vector("c", Len::Dim("p")).ints("m", Len::Dim("p"));
            }
            let cs = vec![
                Constraint::nonneg("n >= 1", n_pos),
                Constraint::nonneg("m_i >= 0", |ps| if ps.ints.contains_key("m") { m_nonneg(ps) } else { Ok(0.0) }),
                Constraint::nonvanishing("z_i - z_j not an integer", |ps| {
                    Ok(node_separation_additive(ps.vector("z")?))
                }),
                Constraint::real_part("Re(|b| - |a|) > n + |m| - 1", |ps| {
                    let mm = if ps.ints.contains_key("m") { m_sum(ps)? } else { 0 };
                    let v = &ps.sum("b")? - &ps.sum("a")?;
                    Ok(v.re_f64() - (ps.dim("n")? + mm - 1) as f64)
                }),
            ];
            let (anchor, lhs, rhs): (&'static str, super::SideFn, super::SideFn) = if id == Cl5h5 {
                ("multivariable Dougall 5H5 sum on the hyperplane |y| = 0", cl::h5_lhs, cl::h5_rhs)
            } else {
                ("classical limit of the master reduction", cl::tha_lhs, cl::tha_rhs)
            };
            desc(id, schema, cs, anchor, None, lhs, rhs)
        }
        Cl2h2 | ClThmB => {
            let mut schema = base(false)
                .dim("n")
                .vector("a", Len::DimPlus("n", 1))
                .vector("b", Len::DimPlus("n", 1))
                .vector("z", Len::Dim("n"));
            if id == ClThmB {
                schema = schema.dim("p").vector("c", Len::Dim("p")).ints("m", Len::Dim("p"));
            }
            let cs = vec![
                Constraint::nonneg("n >= 1", n_pos),
                Constraint::nonneg("m_i >= 0", |ps| if ps.ints.contains_key("m") { m_nonneg(ps) } else { Ok(0.0) }),
                Constraint::nonvanishing("z_i - z_j not an integer", |ps| {
                    Ok(node_separation_additive(ps.vector("z")?))
                }),
                Constraint::real_part("Re(|b| - |a|) > n + |m|", |ps| {
                    let mm = if ps.ints.contains_key("m") { m_sum(ps)? } else { 0 };
                    let v = &ps.sum("b")? - &ps.sum("a")?;
                    Ok(v.re_f64() - (ps.dim("n")? + mm) as f64)
                }),
            ];
            let (anchor, lhs, rhs): (&'static str, super::SideFn, super::SideFn) = if id == Cl2h2 {
                ("multivariable Dougall 2H2 sum over the full lattice", cl::h2_lhs, cl::h2_rhs)
            } else {
                ("full-lattice classical Karlsson-Minton reduction", cl::thb_lhs, cl::thb_rhs)
            };
            desc(id, schema, cs, anchor, None, lhs, rhs)
        }
        Cl3h3 => desc(
            id,
            base(false)
                .dim("p")
                .vector("c", Len::Dim("p"))
                .ints("m", Len::Dim("p"))
                .scalar("a")
                .scalar("b")
                .scalar("d")
                .scalar("e"),
            vec![
                Constraint::nonneg("m_i >= 0", m_nonneg),
                Constraint::nonvanishing("c_i - c_j not an integer", |ps| {
                    Ok(node_separation_additive(ps.vector("c")?))
                }),
                Constraint::real_part("Re(d + e - a - b) > |m| + 1", |ps| {
                    let v = &(&(&sc(ps, "d")? + &sc(ps, "e")?) - &sc(ps, "a")?) - &sc(ps, "b")?;
                    Ok(v.re_f64() - (m_sum(ps)? + 1) as f64)
                }),
            ],
            "bilateral 2H2 with Karlsson-Minton factors (Bailey's 3H3 when p = 1)",
            None,
            cl::h3_lhs,
            cl::h3_rhs,
        ),
    }
}

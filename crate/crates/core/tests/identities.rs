use std::collections::BTreeSet;

use kmreduce_core::identities::*;
use kmreduce_core::lattice::TruncationPolicy;
use kmreduce_core::mparith::HValue;
use kmreduce_core::sampler::{sample_at, SampleConfig};
use kmreduce_core::Error;

fn has(id: IdentityId, kind: ConstraintKind, expr: &str) -> bool {
    constraints(id).iter().any(|c| c.kind == kind && c.expression == expr)
}

#[test]
fn registry_ids_unique_and_parse() {
    let all = list_identities();
    assert_eq!(all.len(), IdentityId::ALL.len());
    let names: BTreeSet<&str> = all.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(names.len(), all.len());
    for d in &all {
        assert_eq!(d.id.as_str().parse::<IdentityId>().unwrap(), d.id);
        assert!(!d.anchor.is_empty());
        assert!(!d.constraints.is_empty(), "{}", d.id);
    }
    assert_eq!("cor_mc".parse::<IdentityId>().unwrap(), IdentityId::CorMilneSaalschutz);
    assert!(matches!(lookup_str("nope"), Err(Error::UnknownIdentity(_))));
}

#[test]
fn stated_hypotheses_present() {
    assert!(has(IdentityId::Thm1, ConstraintKind::ModulusLt1, "|q^{1-|m|-n}B/A| < 1"));
    assert!(has(IdentityId::CorC1p, ConstraintKind::ModulusLt1, "|q^{1-|m|-n}B/A| < |t|"));
    assert!(has(IdentityId::CorC1p, ConstraintKind::ModulusLt1, "|t| < 1"));
    assert!(has(IdentityId::CorCsc, ConstraintKind::ExactEquality, "BZ = q^n"));
    assert!(has(IdentityId::ClKm, ConstraintKind::RealPartGt, "Re(a + |m|) < 1"));
}

#[test]
fn thm1_outside_modulus_bound_rejected() {
    let mut ps = sample_at(IdentityId::Thm1, &SampleConfig::default(), 0).unwrap();
    let mut b = ps.vector("b").unwrap().to_vec();
    b[0] = &b[0] * &HValue::from_i64(1_000_000, ps.ctx);
    ps.set_vector("b", b);
    let err = lhs_eval(IdentityId::Thm1, &ps, &TruncationPolicy::default()).unwrap_err();
    assert!(matches!(err, Error::ConstraintViolated { .. }), "{err}");
}

#[test]
fn missing_and_misshapen_parameters_rejected() {
    let ps = sample_at(IdentityId::Thm1, &SampleConfig::default(), 0).unwrap();
    let mut short = ps.clone();
    short.vectors.remove("a");
    assert!(matches!(lookup(IdentityId::Thm1).admit(&short), Err(Error::MissingParameter(_))));
    let mut wrong = ps.clone();
    let a = wrong.vector("a").unwrap()[..1].to_vec();
    wrong.set_dim("n", 3).set_vector("a", a);
    assert!(lookup(IdentityId::Thm1).admit(&wrong).is_err());
}

#[test]
fn both_sides_agree_on_first_sample() {
    let cfg = SampleConfig::default();
    let policy = TruncationPolicy { term_tol: 1e-22, ..TruncationPolicy::default() };
    for &id in IdentityId::ALL {
        let ps = sample_at(id, &cfg, 0).unwrap();
        let (l, ld) = lhs_eval(id, &ps, &policy).unwrap();
        let (r, rd) = rhs_eval(id, &ps, &policy).unwrap();
        assert!(ld.converged && rd.converged, "{id}");
        let err = l.rel_distance(&r, 1e-60);
        assert!(err <= 1e-20, "{id}: {err:e}");
    }
}

#[test]
fn finite_sides_are_exact_sums() {
    let ps = sample_at(IdentityId::CorKajiharaBailey, &SampleConfig::default(), 0).unwrap();
    let desc = lookup(IdentityId::CorKajiharaBailey);
    assert!(desc.lhs_plan(&ps).unwrap().is_finite());
    assert!(desc.rhs_plan(&ps).unwrap().is_finite());
    let (_, d) = lhs_eval(IdentityId::CorKajiharaBailey, &ps, &TruncationPolicy::default()).unwrap();
    assert!(d.converged);
    assert_eq!(d.largest_shell_tail, 0.0);
}

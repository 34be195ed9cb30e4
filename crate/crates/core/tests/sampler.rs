use kmreduce_core::identities::{lookup, ConstraintKind, IdentityId};
use kmreduce_core::sampler::*;

fn decimal(ps: &kmreduce_core::identities::ParamSet) -> String {
    let mut out = format!("{:?}|{:?}", ps.dims, ps.ints);
    if let Some(q) = &ps.q {
        out += &format!("|q={:?}", q.value().to_decimal());
    }
    for (k, v) in &ps.scalars {
        out += &format!("|{k}={:?}", v.to_decimal());
    }
    for (k, v) in &ps.vectors {
        let parts: Vec<_> = v.iter().map(|x| x.to_decimal()).collect();
        out += &format!("|{k}={parts:?}");
    }
    out
}

#[test]
fn same_seed_same_sets() {
    let cfg = SampleConfig::default();
    for &id in IdentityId::ALL {
        let a = sample(id, &cfg, 2).unwrap();
        let b = sample(id, &cfg, 2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(decimal(x), decimal(y), "{id}");
        }
        assert_eq!(decimal(&a[1]), decimal(&sample_at(id, &cfg, 1).unwrap()), "{id}");
    }
}

#[test]
fn seed_changes_sets() {
    let a = sample_at(IdentityId::Thm1, &SampleConfig::default(), 0).unwrap();
    let cfg = SampleConfig { seed: 7, ..SampleConfig::default() };
    let b = sample_at(IdentityId::Thm1, &cfg, 0).unwrap();
    assert_ne!(decimal(&a), decimal(&b));
}

#[test]
fn emitted_sets_are_admissible_with_margin() {
    let cfg = SampleConfig::default();
    for &id in IdentityId::ALL {
        let desc = lookup(id);
        for ps in sample(id, &cfg, 3).unwrap() {
            desc.admit(&ps).unwrap();
            check_admissible(id, &ps, &cfg).unwrap();
            for c in desc.constraints.iter().filter(|c| c.kind == ConstraintKind::ModulusLt1) {
                let m = c.measure(&ps).unwrap();
                assert!(m <= cfg.margin * c.threshold, "{id}: {} measured {m}", c.expression);
            }
            assert_eq!(ps.ctx.bits(), cfg.precision_bits);
            assert_eq!(ps.q.is_none(), id.is_classical(), "{id}");
        }
    }
}

#[test]
fn dimensions_respect_limits() {
    let cfg = SampleConfig::default();
    for &id in IdentityId::ALL {
        for ps in sample(id, &cfg, 4).unwrap() {
            if let Ok(n) = ps.dim("n") {
                assert!((1..=3).contains(&n), "{id} n={n}");
            }
            if let Ok(p) = ps.dim("p") {
                assert!((0..=3).contains(&p), "{id} p={p}");
            }
            if let Ok(m) = ps.int_vec("m") {
                assert!(m.iter().all(|&mi| (0..=3).contains(&mi)), "{id} m={m:?}");
            }
            if let Some(q) = &ps.q {
                assert!(q.value().abs_f64() <= 0.7, "{id}");
            }
        }
    }
}

#[test]
fn degenerations_cover_documented_cases() {
    let kinds = |id| -> Vec<DegenerationKind> { degenerate_suite(id).unwrap().into_iter().map(|(k, _)| k).collect() };
    assert!(kinds(IdentityId::Thm1).contains(&DegenerationKind::AllMZero));
    assert!(kinds(IdentityId::Cor2l).contains(&DegenerationKind::DEqualsBq));
    assert!(kinds(IdentityId::ClKmg).contains(&DegenerationKind::DEqualsBPlus1));
    assert!(kinds(IdentityId::CorSt).contains(&DegenerationKind::PermutedNodes));
    let cfg = SampleConfig::default();
    for &id in IdentityId::ALL {
        for (kind, ps) in degenerate_suite(id).unwrap() {
            lookup(id).admit(&ps).unwrap_or_else(|e| panic!("{id} {}: {e}", kind.as_str()));
            check_admissible(id, &ps, &cfg).unwrap_or_else(|e| panic!("{id} {}: {e}", kind.as_str()));
        }
    }
}

#[test]
fn permuted_nodes_are_a_permutation() {
    let (_, ps) = degenerate_suite(IdentityId::CorSt)
        .unwrap()
        .into_iter()
        .find(|(k, _)| *k == DegenerationKind::PermutedNodes)
        .unwrap();
    let z = ps.vector("z").unwrap();
    let w = ps.vector("w").unwrap();
    assert_eq!(z.len(), w.len());
    for wi in w {
        assert!(z.iter().any(|zi| zi.exact_eq(wi)));
    }
}

#[test]
fn invalid_config_rejected() {
    let bad = SampleConfig { margin: 1.5, ..SampleConfig::default() };
    assert!(sample_at(IdentityId::Thm1, &bad, 0).is_err());
    let bad = SampleConfig { q_modulus_range: (0.5, 1.2), ..SampleConfig::default() };
    assert!(bad.validate().is_err());
}

use kmreduce_core::lattice::*;
use kmreduce_core::mparith::*;
use proptest::prelude::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(256).unwrap()
}

fn c(re: f64, im: f64) -> HValue {
    HValue::from_f64(re, im, ctx())
}

fn qb(re: f64, im: f64) -> QBase {
    QBase::new(c(re, im)).unwrap()
}

#[test]
fn geometric_orthant() {
    let half = HValue::from_ratio(1, 2, ctx());
    let policy = TruncationPolicy { radius: 300, term_tol: 1e-70, ..TruncationPolicy::default() };
    let (v, d) = sum_orthant(ctx(), 1, &policy, |y| half.powi(y[0])).unwrap();
    assert!(d.converged);
    assert!((&v - &HValue::from_i64(2, ctx())).abs_f64() < 1e-70);
    assert!(d.largest_shell_tail < 1e-70);
}

#[test]
fn zero_term() {
    let zero = HValue::zero(ctx());
    let (v, d) = sum_lattice_bilateral(ctx(), 2, &TruncationPolicy::with_radius(6), |_| Ok(zero.clone())).unwrap();
    assert!(v.is_zero());
    assert_eq!(d.nonzero_terms, 0);
}

#[test]
fn box_of_constant() {
    let t = c(0.375, -1.25);
    let m = [2, 0, 3];
    let (v, d) = sum_box(ctx(), &m, |_| Ok(t.clone())).unwrap();
    assert!(v.exact_eq(&t.mul_i64(12)));
    assert_eq!(d.terms_evaluated, 12);
    let (e, _) = sum_box(ctx(), &[], |x| {
        assert!(x.is_empty());
        Ok(t.clone())
    })
    .unwrap();
    assert!(e.exact_eq(&t));
}

#[test]
fn box_hyperplane_counts() {
    let one = HValue::one(ctx());
    // points of [0,2]x[0,3] on x + y = 3
    let (v, _) = sum_box_hyperplane(ctx(), &[2, 3], 3, |_| Ok(one.clone())).unwrap();
    assert_eq!(v.to_i64(), Some(3));
    let (s, _) = sum_simplex(ctx(), 2, 2, |_| Ok(one.clone())).unwrap();
    assert_eq!(s.to_i64(), Some(6));
}

/// det [x_i^j] by expansion over permutations, n <= 4.
fn det_vandermonde(x: &[HValue]) -> HValue {
    let n = x.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = HValue::zero(ctx());
    permute(&mut perm, 0, &mut |p| {
        let mut t = HValue::one(ctx());
        for (i, &j) in p.iter().enumerate() {
            t = &t * &x[i].powi(j as i64).unwrap();
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        acc = if inversions % 2 == 0 { &acc + &t } else { &acc - &t };
    });
    acc
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vandermonde_matches_determinants(
        pts in proptest::collection::vec((0.2f64..2.0, -3.1f64..3.1), 1..=4),
        ys in proptest::collection::vec(-3i64..=3, 4),
        qr in 0.2f64..0.9,
        qt in -3.1f64..3.1,
    ) {
        let z: Vec<HValue> = pts.iter().enumerate().map(|(i, &(r, t))| c((r + i as f64) * t.cos(), (r + i as f64) * t.sin())).collect();
        let y = &ys[..z.len()];
        let q = qb(qr * qt.cos(), qr * qt.sin());
        let w: Vec<HValue> = z.iter().zip(y).map(|(zi, &yi)| q.shift(zi, yi)).collect();
        let expect = det_vandermonde(&w).checked_div(&det_vandermonde(&z)).unwrap();
        let got = vandermonde_ratio(&z, y, &q).unwrap();
        prop_assert!(got.rel_distance(&expect, 0.0) < 1e-60);

        let wa: Vec<HValue> = z.iter().zip(y).map(|(zi, &yi)| zi.add_i64(yi)).collect();
        let expect_a = det_vandermonde(&wa).checked_div(&det_vandermonde(&z)).unwrap();
        let got_a = vandermonde_ratio_additive(&z, y).unwrap();
        prop_assert!(got_a.rel_distance(&expect_a, 0.0) < 1e-60);
    }
}

#[test]
fn vandermonde_trivial_and_degenerate() {
    let z = [c(0.5, 0.1), c(-0.3, 0.7), c(1.1, -0.4)];
    let q = qb(0.4, 0.2);
    assert!(vandermonde_ratio(&z, &[0, 0, 0], &q).unwrap().exact_eq(&HValue::one(ctx())));
    let twin = [z[0].clone(), z[0].clone()];
    assert!(vandermonde_ratio(&twin, &[1, 0], &q).is_err());
    assert!(vandermonde_ratio(&z, &[1, 0], &q).is_err());
}

/// sum_k (a;q)_k / (b;q)_k z^k over Z against Ramanujan's product formula.
#[test]
fn one_psi_one_against_products() {
    let q = qb(0.3, 0.2);
    let (a, b, z) = (c(2.5, 0.7), c(0.3, -0.2), c(0.4, 0.3));
    let term = TermSpec::new(Arith::Q(q.clone())).coord(vec![Factor::new().num(a.clone()).den(b.clone()).power(z.clone())]);
    let sum = LatticeSum::new(Domain::Lattice(1), term);
    let policy = TruncationPolicy { radius: 260, term_tol: 1e-60, ..TruncationPolicy::default() };
    let (v, d) = sum.evaluate(&policy, ctx()).unwrap();
    let (r, _) = sum.evaluate_reference(&policy, ctx()).unwrap();
    assert!(d.converged);
    assert!(v.rel_distance(&r, 0.0) < 100.0 * ctx().eps());

    let az = &a * &z;
    let num = [q.value().clone(), b.checked_div(&a).unwrap(), az.clone(), q.value().checked_div(&az).unwrap()];
    let den = [b.clone(), q.value().checked_div(&a).unwrap(), z.clone(), b.checked_div(&az).unwrap()];
    let closed = qpoch_inf_ratio(&num, &den, &q).unwrap();
    assert!(v.rel_distance(&closed, 0.0) < 1e-55, "{:e}", v.rel_distance(&closed, 0.0));
}

#[test]
fn table_and_reference_agree_on_sampled_sums() {
    use kmreduce_core::identities::{lookup, IdentityId};
    use kmreduce_core::sampler::{sample_at, SampleConfig};
    let cfg = SampleConfig::default();
    for id in [IdentityId::Gustafson6Psi6, IdentityId::Thm1, IdentityId::CorC1] {
        for i in 0..2 {
            let ps = sample_at(id, &cfg, i).unwrap();
            let plan = lookup(id).lhs_plan(&ps).unwrap();
            let sum = plan.lattice().expect("lattice side");
            let policy = TruncationPolicy::with_radius(12);
            let (v, _) = sum.evaluate(&policy, ps.ctx).unwrap();
            let (r, _) = sum.evaluate_reference(&policy, ps.ctx).unwrap();
            let err = v.rel_distance(&r, 0.0);
            assert!(err < 100.0 * ps.ctx.eps(), "{id} sample {i}: {err:e}");
        }
    }
}

#[test]
fn bad_policy_rejected() {
    assert!(TruncationPolicy { radius: 0, ..TruncationPolicy::default() }.validate().is_err());
    assert!(TruncationPolicy { term_tol: 0.0, ..TruncationPolicy::default() }.validate().is_err());
    assert!(TruncationPolicy::default().validate().is_ok());
}

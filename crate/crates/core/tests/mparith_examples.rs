use kmreduce_core::mparith::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(256).unwrap()
}

fn real(s: &str) -> HValue {
    HValue::parse_real(s, ctx()).unwrap()
}

fn q(s: &str) -> QBase {
    QBase::new(real(s)).unwrap()
}

fn close(a: &HValue, b: &HValue, tol: f64) -> bool {
    a.rel_distance(b, 0.0) <= tol
}

#[test]
fn qpoch_finite_examples() {
    assert!(qpoch_finite(&real("0.3"), &q("0.5"), 0).unwrap().exact_eq(&HValue::one(ctx())));
    assert!(qpoch_finite(&real("0.5"), &q("0.5"), 3).unwrap().exact_eq(&real("0.328125")));
    assert!(qpoch_finite(&real("0.25"), &q("0.5"), -1).unwrap().exact_eq(&real("2")));
}

#[test]
fn qpoch_finite_pole() {
    let e = qpoch_finite(&real("0.25"), &q("0.5"), -3).unwrap_err();
    assert!(matches!(e, kmreduce_core::Error::DivisionByZeroPole { .. }));
}

#[test]
fn qpoch_inf_examples() {
    assert!(qpoch_inf(&HValue::zero(ctx()), &q("0.5")).exact_eq(&HValue::one(ctx())));
    let v = qpoch_inf(&real("0.5"), &q("0.5"));
    assert!((v.re_f64() - 0.288_788_095_1).abs() < 1e-10);
    let a5 = real("0.015625");
    let lhs = qpoch_inf(&a5, &q("0.5"));
    let rhs = &v / &qpoch_finite(&real("0.5"), &q("0.5"), 5).unwrap();
    assert!(close(&lhs, &rhs, 1e-70));
}

#[test]
fn qpoch_list_examples() {
    let qb = q("0.5");
    assert!(qpoch_list(&[], &qb, 7).unwrap().exact_eq(&HValue::one(ctx())));
    assert!(qpoch_list(&[real("0.5")], &qb, 3).unwrap().exact_eq(&real("0.328125")));
    let prod = &qpoch_finite(&real("0.2"), &qb, 2).unwrap() * &qpoch_finite(&real("0.3"), &qb, 2).unwrap();
    assert!(qpoch_list(&[real("0.2"), real("0.3")], &qb, 2).unwrap().exact_eq(&prod));
}

#[test]
fn poch_examples() {
    assert!(poch_classical(&real("2.5"), 0).unwrap().exact_eq(&HValue::one(ctx())));
    assert!(poch_classical(&real("3"), 4).unwrap().exact_eq(&real("360")));
    assert!(poch_classical(&real("3"), -1).unwrap().exact_eq(&real("0.5")));
}

#[test]
fn log_gamma_examples() {
    assert!(log_gamma(&real("1")).unwrap().abs_f64() < 1e-74);
    let sqrt_pi_log = &HValue::pi(ctx()).ln().unwrap() * &real("0.5");
    assert!(close(&log_gamma(&real("0.5")).unwrap(), &sqrt_pi_log, 1e-74));
    let l24 = real("24").ln().unwrap();
    assert!(close(&log_gamma(&real("5")).unwrap(), &l24, 1e-74));
    assert!(matches!(
        log_gamma(&real("-3")).unwrap_err(),
        kmreduce_core::Error::PoleAtNonPositiveInteger
    ));
}

#[test]
fn decimal_round_trip() {
    let x = &real("1") / &real("3");
    let (re, im) = x.to_decimal();
    println!("{re} {im}");
    let y = HValue::parse(&re, &im, ctx()).unwrap();
    assert!(x.exact_eq(&y));
}

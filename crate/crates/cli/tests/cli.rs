use std::process::Command;

use kmreduce::config::{ConfigFile, SuiteConfig};
use kmreduce::report::CheckReport;
use kmreduce::suite::{check_sample, exit_code};
use kmreduce::{radius_sweep, render_sweep, run_suite, rel_error, SuiteReport};
use kmreduce_core::identities::IdentityId;
use kmreduce_core::mparith::{HValue, PrecisionContext};
use kmreduce_core::sampler::sample_at;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_kmreduce"));
    c.env_remove("KMREDUCE_PREC_BITS");
    c
}

fn cfg(text: &str) -> SuiteConfig {
    ConfigFile::parse(&format!("precision_bits = 256\n{text}")).unwrap().resolve().unwrap()
}

#[test]
fn config_errors_name_line_and_field() {
    let err = ConfigFile::parse("samples = 3\ntolerence = 1e-20\n").unwrap_err();
    let msg = format!("{err:#}");
    assert!(msg.contains("line 2"), "{msg}");
    assert!(msg.contains("tolerence"), "{msg}");

    let err = ConfigFile::parse("[truncation]\nradius = \"big\"\n").unwrap_err();
    let msg = format!("{err:#}");
    assert!(msg.contains("line 2") && msg.contains("radius"), "{msg}");

    let err = ConfigFile::parse("identities = \"some\"\n").unwrap().resolve().unwrap_err();
    assert!(err.to_string().contains("identities"));
}

#[test]
fn config_defaults_and_overrides() {
    let c = cfg("");
    assert_eq!(c.identities.len(), IdentityId::ALL.len());
    assert_eq!(c.samples, 5);
    assert_eq!(c.tolerance, 1e-20);
    assert!((c.policy.term_tol / 1e-22 - 1.0).abs() < 1e-12);
    let c = cfg("identities = [\"thm1\", \"cor_mc\"]\ntolerance = 1e-12\n[truncation]\nradius = 16\n[sampler]\nseed = 9\nn = [1, 2]\n");
    assert_eq!(c.identities, vec![IdentityId::Thm1, IdentityId::CorMilneSaalschutz]);
    assert_eq!(c.policy.radius, 16);
    assert_eq!(c.sampler.radius, 16);
    assert_eq!(c.sampler.seed, 9);
    assert_eq!(c.sampler.dims.n, (1, 2));
    assert!((c.policy.term_tol / 1e-14 - 1.0).abs() < 1e-12);
}

#[test]
fn tolerance_tighter_than_precision_refused() {
    let err = ConfigFile::parse("precision_bits = 128\ntolerance = 1e-40\n").unwrap().resolve().unwrap_err();
    assert!(err.to_string().contains("tighter"), "{err}");
    assert!(ConfigFile::parse("precision_bits = 128\ntolerance = 1e-30\n").unwrap().resolve().is_ok());
    assert_eq!(SuiteConfig::tolerance_floor(256), (-248f64).exp2());
}

#[test]
fn rel_error_falls_back_to_absolute_near_zero() {
    let ctx = PrecisionContext::new(256).unwrap();
    let a = HValue::from_f64(1.0, 0.0, ctx);
    let b = HValue::from_f64(1.0 + 1e-10, 0.0, ctx);
    assert!((rel_error(&a, &b, 1.0) - 1e-10).abs() < 1e-15);
    let tiny = HValue::from_f64(1e-80, 0.0, ctx);
    let zero = HValue::zero(ctx);
    assert!(rel_error(&tiny, &zero, 1.0) <= 1e-80);
}

#[test]
fn report_round_trip_is_byte_identical() {
    let c = cfg("identities = [\"cor_2l\", \"cl_km\"]\nsamples = 2\n");
    let report = run_suite(&c).unwrap();
    let text = report.to_json();
    let again = SuiteReport::from_json(&text).unwrap().to_json();
    assert_eq!(text, again);
    let bad = text.replacen("\"schema_version\": 1", "\"schema_version\": 99", 1);
    assert!(SuiteReport::from_json(&bad).is_err());
}

#[test]
fn passed_requires_tolerance_and_convergence() {
    let c = cfg("identities = [\"gustafson_6psi6\"]\n");
    let good = check_sample(IdentityId::Gustafson6Psi6, &c, 0);
    assert!(good.passed);
    let mut short = c.clone();
    short.set_radius(2);
    short.sampler.radius = c.sampler.radius;
    let r = check_sample(IdentityId::Gustafson6Psi6, &short, 0);
    assert!(!r.passed);
    assert!(r.error.is_none());
    assert!(!r.lhs_diag.as_ref().unwrap().converged);
}

#[test]
fn evaluator_errors_become_failed_reports() {
    let c = cfg("");
    let mut ps = sample_at(IdentityId::Thm1, &c.sampler, 0).unwrap();
    let mut b = ps.vector("b").unwrap().to_vec();
    b[0] = &b[0] * &HValue::from_i64(1_000_000, ps.ctx);
    ps.set_vector("b", b);
    let r = kmreduce::suite::run_params(IdentityId::Thm1, &[ps], &c).unwrap();
    let rep: &CheckReport = &r.reports[0];
    assert!(!rep.passed);
    assert!(rep.error.as_deref().unwrap().contains("constraint violated"));
    assert_eq!(exit_code(&r), 1);
}

#[test]
fn empty_filter_gives_empty_report() {
    let c = cfg("identities = []\n");
    let r = run_suite(&c).unwrap();
    assert!(r.reports.is_empty());
    assert!(r.summary.groups.is_empty());
    assert_eq!(exit_code(&r), 0);
}

#[test]
fn cl_km_terminating_agrees_exactly() {
    let c = cfg("identities = [\"cl_km\"]\nsamples = 3\ntolerance = 1e-60\n");
    let r = run_suite(&c).unwrap();
    for rep in &r.reports {
        assert!(rep.passed, "{rep:?}");
        assert!(rep.rel_error_f64().unwrap() <= 1e-60);
    }
}

#[test]
fn sweep_decreases_and_matches_check() {
    let c = cfg("");
    let ps = sample_at(IdentityId::Gustafson6Psi6, &c.sampler, 0).unwrap();
    let rows = radius_sweep(IdentityId::Gustafson6Psi6, &ps, &c.policy, &[4, 8, 12, 16]).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].abs_error < w[0].abs_error, "{}", render_sweep(&rows));
    }
    let one = radius_sweep(IdentityId::Gustafson6Psi6, &ps, &c.policy, &[24]).unwrap();
    assert_eq!(one.len(), 1);
    let rep = check_sample(IdentityId::Gustafson6Psi6, &c, 0);
    assert!(one[0].rel_error <= 1e-20);
    assert!(rep.rel_error_f64().unwrap() <= 1e-20);
    let finite = sample_at(IdentityId::CorKajiharaBailey, &c.sampler, 0).unwrap();
    assert!(radius_sweep(IdentityId::CorKajiharaBailey, &finite, &c.policy, &[4]).is_err());
}

#[test]
fn cli_exit_codes() {
    let ok = bin().args(["check", "--id", "cor_2l", "--samples", "1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS"));

    let fail = bin().args(["check", "--id", "gustafson_6psi6", "--samples", "1", "--radius", "2"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));

    let usage = bin().args(["check", "--id", "no_such_identity"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("no_such_identity"));
}

#[test]
fn cli_writes_reports_and_reads_params() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let st = bin().args(["suite", "--id", "cor_c2", "--samples", "1", "--out"]).arg(&out).status().unwrap();
    assert!(st.success());
    let report = SuiteReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.reports.len(), 1);

    let params = dir.path().join("p.json");
    let p = serde_json::to_string(report.reports[0].params.as_ref().unwrap()).unwrap();
    std::fs::write(&params, p).unwrap();
    let again = dir.path().join("again.json");
    let st = bin().args(["check", "--id", "cor_c2", "--params"]).arg(&params).arg("--out").arg(&again).status().unwrap();
    assert!(st.success());
    let r2 = SuiteReport::from_json(&std::fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(r2.reports[0].lhs, report.reports[0].lhs);
    assert_eq!(r2.reports[0].rhs, report.reports[0].rhs);
}

#[test]
fn precision_env_is_a_default_only() {
    let run = |args: &[&str], env: Option<&str>| {
        let mut c = bin();
        if let Some(v) = env {
            c.env("KMREDUCE_PREC_BITS", v);
        }
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let st = c.args(args).arg("--out").arg(&out).status().unwrap();
        assert!(st.success());
        SuiteReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap().config["precision_bits"].clone()
    };
    let base = ["check", "--id", "cor_2l", "--samples", "1", "--tol", "1e-15"];
    assert_eq!(run(&base, None), "256");
    assert_eq!(run(&base, Some("192")), "192");
    let mut flagged = base.to_vec();
    flagged.extend(["--prec-bits", "160"]);
    assert_eq!(run(&flagged, Some("192")), "160");
}

#[test]
fn cli_list_and_degenerations() {
    let out = bin().arg("list").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success());
    assert!(text.contains("gustafson_6psi6") && text.contains("cl_3h3"));
    let out = bin().args(["degenerations", "--id", "cl_kmg"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("d=b+1"));
}

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Result};
use kmreduce_core::identities::{lookup, IdentityId, ParamSet};
use kmreduce_core::lattice::TruncationPolicy;
use kmreduce_core::mparith::HValue;
use kmreduce_core::sampler::{degenerate_suite_with, sample_at};
use rayon::prelude::*;

use crate::check::{check, failed, rel_error, CheckMeta};
use crate::config::SuiteConfig;
use crate::report::{real_str, CheckReport, Summary, SuiteReport, SCHEMA_VERSION};

fn describe(cfg: &SuiteConfig) -> BTreeMap<String, String> {
    let s = &cfg.sampler;
    let ids: Vec<&str> = cfg.identities.iter().map(|i| i.as_str()).collect();
    [
        ("identities", ids.join(",")),
        ("samples", cfg.samples.to_string()),
        ("tolerance", real_str(cfg.tolerance)),
        ("precision_bits", cfg.precision_bits.to_string()),
        ("radius", cfg.policy.radius.to_string()),
        ("term_tol", real_str(cfg.policy.term_tol)),
        ("stagnation_window", cfg.policy.stagnation_window.to_string()),
        ("max_terms", cfg.policy.max_terms.to_string()),
        ("seed", s.seed.to_string()),
        ("margin", real_str(s.margin)),
        ("pole_clearance", real_str(s.pole_clearance)),
        ("terminating", s.terminating.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Runs `jobs` in order, in parallel when asked; results keep job order.
fn run_jobs<J, F>(jobs: Vec<J>, parallel: bool, f: F) -> Vec<CheckReport>
where
    J: Send + Sync,
    F: Fn(&J) -> Vec<CheckReport> + Send + Sync,
{
    if parallel {
        jobs.par_iter().map(&f).collect::<Vec<_>>().into_iter().flatten().collect()
    } else {
        jobs.iter().flat_map(f).collect()
    }
}

fn finish(kind: &str, cfg: &SuiteConfig, reports: Vec<CheckReport>, t0: Instant) -> SuiteReport {
    let summary = Summary::from_reports(&reports, t0.elapsed().as_millis() as u64);
    SuiteReport { schema_version: SCHEMA_VERSION, kind: kind.into(), config: describe(cfg), reports, summary }
}

pub fn check_sample(id: IdentityId, cfg: &SuiteConfig, index: u64) -> CheckReport {
    let seed = cfg.sampler.seed;
    match sample_at(id, &cfg.sampler, index) {
        Ok(ps) => check(id, &ps, &cfg.policy, cfg.tolerance, &CheckMeta { sample: index.to_string(), seed }),
        Err(e) => failed(id, index.to_string(), seed, cfg.precision_bits, cfg.tolerance, e.to_string()),
    }
}

/// `samples` seeded checks per selected identity, in (id, index) order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let t0 = Instant::now();
    let jobs: Vec<(IdentityId, u64)> = cfg
        .identities
        .iter()
        .flat_map(|&id| (0..cfg.samples as u64).map(move |i| (id, i)))
        .collect();
    let reports = run_jobs(jobs, cfg.parallel, |&(id, i)| vec![check_sample(id, cfg, i)]);
    Ok(finish("suite", cfg, reports, t0))
}

/// The documented edge cases of each selected identity.
pub fn run_degenerations(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let t0 = Instant::now();
    let reports = run_jobs(cfg.identities.clone(), cfg.parallel, |&id| {
        let seed = cfg.sampler.seed;
        match degenerate_suite_with(id, &cfg.sampler) {
            Ok(sets) => sets
                .iter()
                .map(|(kind, ps)| {
                    let meta = CheckMeta { sample: kind.as_str().into(), seed };
                    check(id, ps, &cfg.policy, cfg.tolerance, &meta)
                })
                .collect(),
            Err(e) => vec![failed(id, "degenerations".into(), seed, cfg.precision_bits, cfg.tolerance, e.to_string())],
        }
    });
    Ok(finish("degenerations", cfg, reports, t0))
}

/// Checks of explicitly supplied parameter sets.
pub fn run_params(id: IdentityId, sets: &[ParamSet], cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let t0 = Instant::now();
    let reports = sets
        .iter()
        .enumerate()
        .map(|(i, ps)| {
            let meta = CheckMeta { sample: format!("input {i}"), seed: cfg.sampler.seed };
            check(id, ps, &cfg.policy, cfg.tolerance, &meta)
        })
        .collect();
    Ok(finish("check", cfg, reports, t0))
}

/// One radius of a convergence study.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub radius: u32,
    /// Value of the swept (infinite) side.
    pub value: HValue,
    pub abs_error: f64,
    pub rel_error: f64,
    pub shell_tail: f64,
    pub converged: bool,
}

/// Both sides at each radius, without early stopping, against the other
/// side evaluated at the largest radius requested.
pub fn radius_sweep(id: IdentityId, ps: &ParamSet, base: &TruncationPolicy, radii: &[u32]) -> Result<Vec<SweepRow>> {
    let desc = lookup(id);
    let (lp, rp) = (desc.lhs_plan(ps)?, desc.rhs_plan(ps)?);
    if lp.is_finite() && rp.is_finite() {
        bail!("{id} has no infinite side to sweep");
    }
    let Some(&top) = radii.iter().max() else {
        return Ok(Vec::new());
    };
    let policy = |r: u32| TruncationPolicy { radius: r, early_stop: false, ..base.clone() };
    // the infinite side is swept; the reference is the other side
    let (swept, reference) = if lp.is_finite() { (rp, lp) } else { (lp, rp) };
    let (target, _) = reference.evaluate(&policy(top), ps.ctx, false)?;
    radii
        .iter()
        .map(|&r| {
            let (v, d) = swept.evaluate(&policy(r), ps.ctx, false)?;
            let abs_error = (&v - &target).abs_f64();
            Ok(SweepRow {
                radius: r,
                rel_error: rel_error(&v, &target, d.largest_term),
                value: v,
                abs_error,
                shell_tail: d.largest_shell_tail,
                converged: d.converged,
            })
        })
        .collect()
}

/// Plain-text table of a sweep.
pub fn render_sweep(rows: &[SweepRow]) -> String {
    let mut out = format!("{:>6}  {:>24}  {:>12}  {:>12}  {:>12}\n", "radius", "value (re)", "|error|", "rel error", "shell max");
    for r in rows {
        out.push_str(&format!(
            "{:>6}  {:>24.16e}  {:>12.3e}  {:>12.3e}  {:>12.3e}\n",
            r.radius,
            r.value.re_f64(),
            r.abs_error,
            r.rel_error,
            r.shell_tail
        ));
    }
    out
}

/// Every report passed.
pub fn exit_code(report: &SuiteReport) -> i32 {
    if report.summary.all_passed {
        0
    } else {
        1
    }
}

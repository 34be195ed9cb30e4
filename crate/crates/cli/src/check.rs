use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use kmreduce_core::identities::{lhs_eval, rhs_eval, IdentityId, ParamSet};
use kmreduce_core::lattice::{SumDiagnostics, TruncationPolicy};
use kmreduce_core::mparith::HValue;

use crate::report::{real_str, CheckReport, Complex, DiagJson, ParamsJson};

/// Both sides of one evaluated identity.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub lhs: HValue,
    pub rhs: HValue,
    pub lhs_diag: SumDiagnostics,
    pub rhs_diag: SumDiagnostics,
    pub rel_error: f64,
}

/// |lhs - rhs| / max(|lhs|, |rhs|), or the absolute error when both sides
/// are below the rounding level of the sums that produced them.
pub fn rel_error(lhs: &HValue, rhs: &HValue, scale: f64) -> f64 {
    let eps = lhs.ctx().eps() * 65536.0 * scale.max(1.0);
    lhs.rel_distance(rhs, eps)
}

pub fn evaluate(id: IdentityId, ps: &ParamSet, policy: &TruncationPolicy) -> Result<Evaluation, String> {
    let run = || -> kmreduce_core::Result<Evaluation> {
        let (lhs, lhs_diag) = lhs_eval(id, ps, policy)?;
        let (rhs, rhs_diag) = rhs_eval(id, ps, policy)?;
        let scale = lhs_diag.largest_term.max(rhs_diag.largest_term);
        let rel_error = rel_error(&lhs, &rhs, scale);
        Ok(Evaluation { lhs, rhs, lhs_diag, rhs_diag, rel_error })
    };
    match catch_unwind(AssertUnwindSafe(run)) {
        Ok(Ok(e)) => Ok(e),
        Ok(Err(e)) => Err(e.to_string()),
        Err(p) => Err(panic_message(p)),
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    let msg = p
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into());
    format!("internal error: {msg}")
}

/// Context recorded alongside a check.
#[derive(Clone, Debug)]
pub struct CheckMeta {
    pub sample: String,
    pub seed: u64,
}

/// Evaluates both sides and fills a report; evaluator failures become failed
/// reports carrying the cause.
pub fn check(id: IdentityId, ps: &ParamSet, policy: &TruncationPolicy, tol: f64, meta: &CheckMeta) -> CheckReport {
    let t0 = Instant::now();
    let outcome = evaluate(id, ps, policy);
    let wall_time_ms = t0.elapsed().as_millis() as u64;
    let mut r = CheckReport {
        id: id.as_str().into(),
        sample: meta.sample.clone(),
        seed: meta.seed,
        precision_bits: ps.ctx.bits(),
        params: Some(ParamsJson::from_params(ps)),
        lhs: None,
        rhs: None,
        rel_error: None,
        tolerance: real_str(tol),
        passed: false,
        lhs_diag: None,
        rhs_diag: None,
        error: None,
        wall_time_ms,
    };
    match outcome {
        Ok(e) => {
            r.passed = e.rel_error <= tol && e.lhs_diag.converged && e.rhs_diag.converged;
            r.lhs = Some(Complex::from_value(&e.lhs));
            r.rhs = Some(Complex::from_value(&e.rhs));
            r.rel_error = Some(real_str(e.rel_error));
            r.lhs_diag = Some(DiagJson::from_diag(&e.lhs_diag));
            r.rhs_diag = Some(DiagJson::from_diag(&e.rhs_diag));
        }
        Err(msg) => r.error = Some(msg),
    }
    r
}

/// A failed report for a set that could not be produced at all.
pub fn failed(id: IdentityId, sample: String, seed: u64, bits: u32, tol: f64, error: String) -> CheckReport {
    CheckReport {
        id: id.as_str().into(),
        sample,
        seed,
        precision_bits: bits,
        params: None,
        lhs: None,
        rhs: None,
        rel_error: None,
        tolerance: real_str(tol),
        passed: false,
        lhs_diag: None,
        rhs_diag: None,
        error: Some(error),
        wall_time_ms: 0,
    }
}

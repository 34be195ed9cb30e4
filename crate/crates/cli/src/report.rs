use std::collections::BTreeMap;

use anyhow::{anyhow, Result};
use kmreduce_core::identities::ParamSet;
use kmreduce_core::lattice::SumDiagnostics;
use kmreduce_core::mparith::{HValue, PrecisionContext, QBase};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Decimal rendering of a float that survives a parse/print cycle.
pub fn real_str(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Complex {
    pub re: String,
    pub im: String,
}

impl Complex {
    pub fn from_value(v: &HValue) -> Self {
        let (re, im) = v.to_decimal();
        Self { re, im }
    }

    pub fn to_value(&self, ctx: PrecisionContext) -> Result<HValue> {
        Ok(HValue::parse(&self.re, &self.im, ctx)?)
    }
}

/// A ParamSet with every number as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub precision_bits: u32,
    pub q: Option<Complex>,
    pub dims: BTreeMap<String, i64>,
    pub ints: BTreeMap<String, Vec<i64>>,
    pub scalars: BTreeMap<String, Complex>,
    pub vectors: BTreeMap<String, Vec<Complex>>,
}

impl ParamsJson {
    pub fn from_params(ps: &ParamSet) -> Self {
        Self {
            precision_bits: ps.ctx.bits(),
            q: ps.q.as_ref().map(|q| Complex::from_value(q.value())),
            dims: ps.dims.clone(),
            ints: ps.ints.clone(),
            scalars: ps.scalars.iter().map(|(k, v)| (k.clone(), Complex::from_value(v))).collect(),
            vectors: ps
                .vectors
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(Complex::from_value).collect()))
                .collect(),
        }
    }

    pub fn to_params(&self) -> Result<ParamSet> {
        let ctx = PrecisionContext::new(self.precision_bits)?;
        let q = match &self.q {
            Some(c) => Some(QBase::new(c.to_value(ctx)?)?),
            None => None,
        };
        let mut ps = ParamSet::new(ctx, q);
        ps.dims = self.dims.clone();
        ps.ints = self.ints.clone();
        for (k, v) in &self.scalars {
            ps.scalars.insert(k.clone(), v.to_value(ctx)?);
        }
        for (k, v) in &self.vectors {
            let xs = v.iter().map(|c| c.to_value(ctx)).collect::<Result<Vec<_>>>()?;
            ps.vectors.insert(k.clone(), xs);
        }
        Ok(ps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagJson {
    pub terms_evaluated: u64,
    pub nonzero_terms: u64,
    pub largest_shell_tail: String,
    pub tail_threshold: String,
    pub largest_term: String,
    pub converged: bool,
    pub pole_hits: u64,
    pub radius_used: u32,
}

impl DiagJson {
    pub fn from_diag(d: &SumDiagnostics) -> Self {
        Self {
            terms_evaluated: d.terms_evaluated,
            nonzero_terms: d.nonzero_terms,
            largest_shell_tail: real_str(d.largest_shell_tail),
            tail_threshold: real_str(d.tail_threshold),
            largest_term: real_str(d.largest_term),
            converged: d.converged,
            pole_hits: d.pole_hits,
            radius_used: d.radius_used,
        }
    }

    pub fn largest_shell_tail(&self) -> f64 {
        self.largest_shell_tail.parse().unwrap_or(f64::NAN)
    }
}

/// One verification outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    /// Sample index, or the degeneration name.
    pub sample: String,
    pub seed: u64,
    pub precision_bits: u32,
    pub params: Option<ParamsJson>,
    pub lhs: Option<Complex>,
    pub rhs: Option<Complex>,
    pub rel_error: Option<String>,
    pub tolerance: String,
    pub passed: bool,
    pub lhs_diag: Option<DiagJson>,
    pub rhs_diag: Option<DiagJson>,
    pub error: Option<String>,
    pub wall_time_ms: u64,
}

impl CheckReport {
    pub fn rel_error_f64(&self) -> Option<f64> {
        self.rel_error.as_ref().and_then(|s| s.parse().ok())
    }

    /// The report with timing zeroed, for reproducibility comparisons.
    pub fn untimed(&self) -> Self {
        Self { wall_time_ms: 0, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub id: String,
    pub checks: usize,
    pub passed: usize,
    pub worst_rel_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub groups: Vec<GroupSummary>,
    pub checks: usize,
    pub passed: usize,
    pub all_passed: bool,
    pub wall_time_ms: u64,
}

impl Summary {
    pub fn from_reports(reports: &[CheckReport], wall_time_ms: u64) -> Self {
        let mut groups: Vec<GroupSummary> = Vec::new();
        for r in reports {
            if groups.last().map(|g| g.id != r.id).unwrap_or(true) {
                groups.push(GroupSummary { id: r.id.clone(), checks: 0, passed: 0, worst_rel_error: None });
            }
            let g = groups.last_mut().expect("group pushed");
            g.checks += 1;
            g.passed += r.passed as usize;
            let worst = g.worst_rel_error.as_ref().and_then(|s| s.parse::<f64>().ok());
            match (r.rel_error_f64(), worst) {
                (Some(e), Some(w)) if !(e <= w) => g.worst_rel_error = r.rel_error.clone(),
                (Some(_), None) => g.worst_rel_error = r.rel_error.clone(),
                _ => {}
            }
        }
        let passed = reports.iter().filter(|r| r.passed).count();
        Self { groups, checks: reports.len(), passed, all_passed: passed == reports.len(), wall_time_ms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub kind: String,
    pub config: BTreeMap<String, String>,
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(anyhow!("unsupported report schema version {}", r.schema_version));
        }
        Ok(r)
    }

    /// The report with every timing field zeroed.
    pub fn untimed(&self) -> Self {
        let mut r = self.clone();
        r.reports = r.reports.iter().map(CheckReport::untimed).collect();
        r.summary.wall_time_ms = 0;
        r
    }
}

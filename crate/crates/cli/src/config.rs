use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kmreduce_core::identities::IdentityId;
use kmreduce_core::lattice::TruncationPolicy;
use kmreduce_core::sampler::{DimLimits, SampleConfig};
use serde::{Deserialize, Serialize};

/// Overrides the default precision when neither the config nor a flag sets it.
pub const PREC_ENV: &str = "KMREDUCE_PREC_BITS";
pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_TOLERANCE: f64 = 1e-20;
/// Default term_tol as a fraction of the check tolerance.
pub const TERM_TOL_FRACTION: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdentityFilter {
    /// Only the string "all" is accepted.
    All(String),
    List(Vec<String>),
}

impl Default for IdentityFilter {
    fn default() -> Self {
        IdentityFilter::All("all".into())
    }
}

impl IdentityFilter {
    pub fn resolve(&self) -> Result<Vec<IdentityId>> {
        match self {
            IdentityFilter::All(s) if s == "all" => Ok(IdentityId::ALL.to_vec()),
            IdentityFilter::All(s) => bail!("identities must be \"all\" or a list, got {s:?}"),
            IdentityFilter::List(v) => v
                .iter()
                .map(|s| s.parse::<IdentityId>().map_err(anyhow::Error::from))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationSection {
    pub radius: Option<u32>,
    pub term_tol: Option<f64>,
    pub stagnation_window: Option<u32>,
    pub max_terms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerSection {
    pub seed: Option<u64>,
    pub q_modulus_range: Option<(f64, f64)>,
    pub magnitude_band: Option<(f64, f64)>,
    pub margin: Option<f64>,
    pub pole_clearance: Option<f64>,
    pub target_modulus: Option<f64>,
    pub t_modulus: Option<f64>,
    pub jitter: Option<f64>,
    pub real_axis_gap: Option<f64>,
    pub terminating: Option<bool>,
    pub max_attempts: Option<u32>,
    pub n: Option<(usize, usize)>,
    pub p: Option<(usize, usize)>,
    pub r: Option<(usize, usize)>,
    pub m: Option<(i64, i64)>,
    #[serde(rename = "N")]
    pub big_n: Option<(i64, i64)>,
    #[serde(rename = "L")]
    pub big_l: Option<(i64, i64)>,
}

/// The on-disk config: every field optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub identities: Option<IdentityFilter>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub precision_bits: Option<u32>,
    pub parallel: Option<bool>,
    pub output: Option<PathBuf>,
    pub truncation: TruncationSection,
    pub sampler: SamplerSection,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow::anyhow!("config: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}

/// A fully resolved suite configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub identities: Vec<IdentityId>,
    pub samples: usize,
    pub tolerance: f64,
    pub precision_bits: u32,
    pub policy: TruncationPolicy,
    pub sampler: SampleConfig,
    pub parallel: bool,
    pub output: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        ConfigFile::default().resolve().expect("defaults are valid")
    }
}

fn env_precision() -> Result<Option<u32>> {
    match std::env::var(PREC_ENV) {
        Ok(s) => Ok(Some(s.trim().parse().with_context(|| format!("{PREC_ENV}={s:?}"))?)),
        Err(_) => Ok(None),
    }
}

impl ConfigFile {
    pub fn resolve(&self) -> Result<SuiteConfig> {
        let precision_bits = match self.precision_bits {
            Some(b) => b,
            None => env_precision()?.unwrap_or(DEFAULT_PRECISION_BITS),
        };
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        let t = &self.truncation;
        let dp = TruncationPolicy::default();
        let policy = TruncationPolicy {
            radius: t.radius.unwrap_or(dp.radius),
            term_tol: t.term_tol.unwrap_or(tolerance * TERM_TOL_FRACTION),
            stagnation_window: t.stagnation_window.unwrap_or(dp.stagnation_window),
            max_terms: t.max_terms.unwrap_or(dp.max_terms),
            early_stop: true,
        };
        let s = &self.sampler;
        let ds = SampleConfig::default();
        let dd = DimLimits::default();
        let sampler = SampleConfig {
            seed: s.seed.unwrap_or(ds.seed),
            q_modulus_range: s.q_modulus_range.unwrap_or(ds.q_modulus_range),
            magnitude_band: s.magnitude_band.unwrap_or(ds.magnitude_band),
            margin: s.margin.unwrap_or(ds.margin),
            pole_clearance: s.pole_clearance.unwrap_or(ds.pole_clearance),
            dims: DimLimits {
                n: s.n.unwrap_or(dd.n),
                p: s.p.unwrap_or(dd.p),
                r: s.r.unwrap_or(dd.r),
                m: s.m.unwrap_or(dd.m),
                big_n: s.big_n.unwrap_or(dd.big_n),
                big_l: s.big_l.unwrap_or(dd.big_l),
            },
            target_modulus: s.target_modulus.unwrap_or(ds.target_modulus),
            t_modulus: s.t_modulus.unwrap_or(ds.t_modulus),
            jitter: s.jitter.unwrap_or(ds.jitter),
            real_axis_gap: s.real_axis_gap.unwrap_or(ds.real_axis_gap),
            terminating: s.terminating.unwrap_or(ds.terminating),
            precision_bits,
            radius: policy.radius,
            max_attempts: s.max_attempts.unwrap_or(ds.max_attempts),
        };
        let cfg = SuiteConfig {
            identities: self.identities.clone().unwrap_or_default().resolve()?,
            samples: self.samples.unwrap_or(5),
            tolerance,
            precision_bits,
            policy,
            sampler,
            parallel: self.parallel.unwrap_or(true),
            output: self.output.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SuiteConfig {
    /// Smallest tolerance the precision can honour: 2^(8 - bits).
    pub fn tolerance_floor(bits: u32) -> f64 {
        (8.0 - bits as f64).exp2()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            bail!("tolerance must be positive, got {}", self.tolerance);
        }
        let floor = Self::tolerance_floor(self.precision_bits);
        if self.tolerance < floor {
            bail!(
                "tolerance {:e} is tighter than {} bits support (minimum {:e})",
                self.tolerance,
                self.precision_bits,
                floor
            );
        }
        if self.sampler.precision_bits != self.precision_bits || self.sampler.radius != self.policy.radius {
            bail!("sampler precision and radius must match the suite");
        }
        self.policy.validate()?;
        self.sampler.validate()?;
        Ok(())
    }

    /// Applies a precision override keeping the sampler in step.
    pub fn set_precision(&mut self, bits: u32) {
        self.precision_bits = bits;
        self.sampler.precision_bits = bits;
    }

    pub fn set_radius(&mut self, radius: u32) {
        self.policy.radius = radius;
        self.sampler.radius = radius;
    }

    pub fn set_tolerance(&mut self, tol: f64, term_tol_follows: bool) {
        self.tolerance = tol;
        if term_tol_follows {
            self.policy.term_tol = tol * TERM_TOL_FRACTION;
        }
    }
}

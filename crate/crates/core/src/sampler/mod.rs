//! Seeded generation of admissible parameter sets.
//!
//! Every set is drawn from a ChaCha8 stream keyed by (seed, identity, index,
//! attempt), so a single set can be regenerated without replaying the ones
//! before it. Candidates failing the hypotheses, the margin or the pole scan
//! are redrawn.

mod draw;
mod recipes;

use alloc::string::ToString;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::identities::{lookup, ConstraintKind, IdentityId, ParamSet};
use crate::mparith::PrecisionContext;
use draw::Draw;
use recipes::{build, choose_shape, degenerate_shapes, Shape};

/// Inclusive ranges for the discrete parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct DimLimits {
    pub n: (usize, usize),
    pub p: (usize, usize),
    pub r: (usize, usize),
    pub m: (i64, i64),
    pub big_n: (i64, i64),
    pub big_l: (i64, i64),
}

impl Default for DimLimits {
    fn default() -> Self {
        Self { n: (1, 3), p: (0, 3), r: (1, 2), m: (0, 3), big_n: (0, 4), big_l: (0, 4) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub q_modulus_range: (f64, f64),
    /// Modulus range of free parameters.
    pub magnitude_band: (f64, f64),
    /// Every convergence modulus must be at most margin times its bound.
    pub margin: f64,
    pub pole_clearance: f64,
    pub dims: DimLimits,
    /// Modulus targeted when a balancing parameter sets the decay rate.
    pub target_modulus: f64,
    /// |t| for the series carrying an extra argument t.
    pub t_modulus: f64,
    /// Relative spread of moduli placed around a computed value.
    pub jitter: f64,
    /// Minimum angle between a drawn phase and the real axis.
    pub real_axis_gap: f64,
    /// Classical identities: choose parameters that make the series terminate.
    pub terminating: bool,
    pub precision_bits: u32,
    /// Truncation radius the pole scan covers (plus two).
    pub radius: u32,
    pub max_attempts: u32,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            seed: 0x6b6d_7265_6475_6365,
            q_modulus_range: (0.2, 0.7),
            magnitude_band: (0.3, 2.0),
            margin: 0.5,
            pole_clearance: 1e-2,
            dims: DimLimits::default(),
            target_modulus: 0.03,
            t_modulus: 0.03,
            jitter: 0.15,
            real_axis_gap: 0.15,
            terminating: true,
            precision_bits: 256,
            radius: 24,
            max_attempts: 200,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        let (qlo, qhi) = self.q_modulus_range;
        let (mlo, mhi) = self.magnitude_band;
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return bad("margin must lie in (0, 1)");
        }
        if !(self.pole_clearance > 0.0) {
            return bad("pole_clearance must be positive");
        }
        if !(qlo > 0.0 && qlo <= qhi && qhi < 1.0) {
            return bad("q_modulus_range must lie in (0, 1)");
        }
        if !(mlo > 0.0 && mlo <= mhi) {
            return bad("magnitude_band must be positive and ordered");
        }
        if !(self.target_modulus > 0.0 && self.target_modulus <= self.margin) {
            return bad("target_modulus must lie in (0, margin]");
        }
        if !(self.t_modulus > 0.0 && self.t_modulus <= self.margin) {
            return bad("t_modulus must lie in (0, margin]");
        }
        if !(0.0..1.0).contains(&self.jitter) || !(0.0..1.5).contains(&self.real_axis_gap) {
            return bad("jitter or real_axis_gap out of range");
        }
        let d = &self.dims;
        if d.n.0 < 1 || d.n.0 > d.n.1 || d.p.0 > d.p.1 || d.r.0 > d.r.1 || d.m.0 < 0 || d.m.0 > d.m.1 {
            return bad("dimension ranges");
        }
        if d.big_n.0 < 0 || d.big_n.0 > d.big_n.1 || d.big_l.0 < 0 || d.big_l.0 > d.big_l.1 {
            return bad("N or L range");
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be positive");
        }
        PrecisionContext::new(self.precision_bits)?;
        Ok(())
    }

    pub fn ctx(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.precision_bits)
    }
}

/// Edge cases the identities are expected to survive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegenerationKind {
    AllMZero,
    SomeMZero,
    EmptyP,
    SingleVariable,
    ZeroN,
    PermutedNodes,
    DEqualsBq,
    DEqualsBPlus1,
}

impl DegenerationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DegenerationKind::AllMZero => "m=0",
            DegenerationKind::SomeMZero => "some m_i=0",
            DegenerationKind::EmptyP => "p=0",
            DegenerationKind::SingleVariable => "n=1",
            DegenerationKind::ZeroN => "N=0",
            DegenerationKind::PermutedNodes => "w=permuted z",
            DegenerationKind::DEqualsBq => "d=bq",
            DegenerationKind::DEqualsBPlus1 => "d=b+1",
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn stream_seed(seed: u64, id: IdentityId, tag: u64, attempt: u32) -> u64 {
    let mut h = splitmix(seed);
    for b in id.as_str().bytes() {
        h = splitmix(h ^ b as u64);
    }
    h = splitmix(h ^ tag);
    splitmix(h ^ attempt as u64)
}

/// Hypotheses, margin on every modulus, and a pole scan of both sides.
pub fn check_admissible(id: IdentityId, ps: &ParamSet, cfg: &SampleConfig) -> Result<()> {
    let desc = lookup(id);
    desc.admit(ps)?;
    for c in &desc.constraints {
        if c.kind == ConstraintKind::ModulusLt1 {
            let m = c.measure(ps)?;
            if m > cfg.margin * c.threshold {
                return Err(Error::ConstraintViolated { constraint: c.expression.into(), measured: m });
            }
        }
    }
    let radius = cfg.radius + 2;
    (desc.lhs)(ps)?.scan(radius, cfg.pole_clearance, ps.ctx)?;
    (desc.rhs)(ps)?.scan(radius, cfg.pole_clearance, ps.ctx)?;
    Ok(())
}

fn draw_one<F>(id: IdentityId, cfg: &SampleConfig, tag: u64, shape: F) -> Result<ParamSet>
where
    F: Fn(&mut Draw) -> Shape,
{
    let ctx = cfg.ctx()?;
    for attempt in 0..cfg.max_attempts {
        let mut d = Draw {
            rng: ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, id, tag, attempt)),
            cfg,
            ctx,
            q: None,
        };
        let sh = shape(&mut d);
        if let Ok(ps) = build(id, &mut d, &sh) {
            if check_admissible(id, &ps, cfg).is_ok() {
                return Ok(ps);
            }
        }
    }
    Err(Error::ExhaustedAttempts { id: id.as_str().into(), attempts: cfg.max_attempts })
}

/// Parameter set number `index` of the stream for `id`.
pub fn sample_at(id: IdentityId, cfg: &SampleConfig, index: u64) -> Result<ParamSet> {
    cfg.validate()?;
    draw_one(id, cfg, index, |d| choose_shape(id, d, &cfg.dims))
}

pub fn sample(id: IdentityId, cfg: &SampleConfig, count: usize) -> Result<Vec<ParamSet>> {
    cfg.validate()?;
    (0..count as u64).map(|i| sample_at(id, cfg, i)).collect()
}

/// Edge-case parameter sets with the default configuration.
pub fn degenerate_suite(id: IdentityId) -> Result<Vec<(DegenerationKind, ParamSet)>> {
    degenerate_suite_with(id, &SampleConfig::default())
}

pub fn degenerate_suite_with(id: IdentityId, cfg: &SampleConfig) -> Result<Vec<(DegenerationKind, ParamSet)>> {
    cfg.validate()?;
    let probe = {
        let mut d = Draw {
            rng: ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, id, u64::MAX, 0)),
            cfg,
            ctx: cfg.ctx()?,
            q: None,
        };
        choose_shape(id, &mut d, &cfg.dims)
    };
    let kinds = degenerate_shapes(id, &probe);
    if kinds.is_empty() {
        return Err(Error::NoDegenerations(id.as_str().into()));
    }
    kinds
        .into_iter()
        .enumerate()
        .map(|(i, (kind, _))| {
            let tag = u64::MAX - 1 - i as u64;
            let ps = draw_one(id, cfg, tag, |d| {
                let base = choose_shape(id, d, &cfg.dims);
                degenerate_shapes(id, &base).swap_remove(i).1
            })?;
            Ok((kind, ps))
        })
        .collect()
}

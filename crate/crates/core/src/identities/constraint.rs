use core::fmt;

use super::params::ParamSet;
use crate::error::{Error, Result};
use crate::mparith::HValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    /// measured modulus < threshold.
    ModulusLt1,
    /// Relative residual of an equation; must vanish up to rounding.
    ExactEquality,
    /// Smallest relevant denominator distance > threshold.
    NonvanishingDenominator,
    /// Smallest integer parameter >= threshold.
    NonnegInteger,
    /// Re(expression) - bound > threshold.
    RealPartGt,
}

impl ConstraintKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstraintKind::ModulusLt1 => "modulus_lt_1",
            ConstraintKind::ExactEquality => "exact_equality",
            ConstraintKind::NonvanishingDenominator => "nonvanishing_denominator",
            ConstraintKind::NonnegInteger => "nonneg_integer",
            ConstraintKind::RealPartGt => "real_part_gt",
        }
    }
}

/// A machine-checkable hypothesis of an identity.
#[derive(Clone, Copy)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub expression: &'static str,
    pub threshold: f64,
    measure: fn(&ParamSet) -> Result<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintCheck {
    pub measured: f64,
    pub satisfied: bool,
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Constraint")
            .field("kind", &self.kind)
            .field("expression", &self.expression)
            .field("threshold", &self.threshold)
            .finish()
    }
}

impl Constraint {
    pub const fn new(kind: ConstraintKind, expression: &'static str, measure: fn(&ParamSet) -> Result<f64>) -> Self {
        let threshold = match kind {
            ConstraintKind::ModulusLt1 => 1.0,
            _ => 0.0,
        };
        Self { kind, expression, threshold, measure }
    }

    pub fn modulus(expression: &'static str, measure: fn(&ParamSet) -> Result<f64>) -> Self {
        Self::new(ConstraintKind::ModulusLt1, expression, measure)
    }

    pub fn equality(expression: &'static str, measure: fn(&ParamSet) -> Result<f64>) -> Self {
        Self::new(ConstraintKind::ExactEquality, expression, measure)
    }

    pub fn nonvanishing(expression: &'static str, measure: fn(&ParamSet) -> Result<f64>) -> Self {
        Self::new(ConstraintKind::NonvanishingDenominator, expression, measure)
    }

    pub fn nonneg(expression: &'static str, measure: fn(&ParamSet) -> Result<f64>) -> Self {
        Self::new(ConstraintKind::NonnegInteger, expression, measure)
    }

    pub fn real_part(expression: &'static str, measure: fn(&ParamSet) -> Result<f64>) -> Self {
        Self::new(ConstraintKind::RealPartGt, expression, measure)
    }

    pub fn measure(&self, ps: &ParamSet) -> Result<f64> {
        (self.measure)(ps)
    }

    pub fn check(&self, ps: &ParamSet) -> Result<ConstraintCheck> {
        let measured = self.measure(ps)?;
        let satisfied = match self.kind {
            ConstraintKind::ModulusLt1 => measured < self.threshold,
            ConstraintKind::ExactEquality => measured <= equality_slack(ps),
            ConstraintKind::NonvanishingDenominator | ConstraintKind::RealPartGt => measured > self.threshold,
            ConstraintKind::NonnegInteger => measured >= self.threshold,
        };
        Ok(ConstraintCheck { measured, satisfied })
    }

    /// Err(ConstraintViolated) unless satisfied.
    pub fn enforce(&self, ps: &ParamSet) -> Result<()> {
        let c = self.check(ps)?;
        if c.satisfied {
            Ok(())
        } else {
            Err(Error::ConstraintViolated { constraint: self.expression.into(), measured: c.measured })
        }
    }
}

/// Rounding allowance for an exact equation between computed parameters.
pub fn equality_slack(ps: &ParamSet) -> f64 {
    ps.ctx.eps() * 4294967296.0
}

/// Relative residual |lhs - rhs| / max(|lhs|, |rhs|).
pub(crate) fn residual(lhs: &HValue, rhs: &HValue) -> f64 {
    lhs.rel_distance(rhs, 0.0)
}

/// Smallest relative separation between entries of a node vector (1 when
/// fewer than two nodes).
pub(crate) fn node_separation(z: &[HValue]) -> f64 {
    let mut best = 1.0f64;
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            let d = (&z[i] - &z[j]).abs_f64() / libm::fmax(z[i].abs_f64(), z[j].abs_f64());
            best = libm::fmin(best, d);
        }
    }
    best
}

/// Smallest separation modulo the integers, for additive nodes.
pub(crate) fn node_separation_additive(z: &[HValue]) -> f64 {
    let mut best = 1.0f64;
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            let (re, im) = (&z[i] - &z[j]).to_f64_pair();
            let fr = libm::fabs(re - libm::round(re));
            best = libm::fmin(best, libm::hypot(fr, im));
        }
    }
    best
}

pub(crate) fn min_int(v: &[i64]) -> f64 {
    v.iter().copied().min().map(|x| x as f64).unwrap_or(0.0)
}

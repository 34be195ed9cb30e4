//! The identity registry: parameter schemas, hypotheses and evaluators for
//! both sides of every identity.

mod classical;
mod constraint;
mod params;
mod plan;
mod qfinite;
mod qseries;
mod registry;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use constraint::{equality_slack, Constraint, ConstraintCheck, ConstraintKind};
pub use params::{Len, ParamSet, Schema, Slot, SlotKind};
pub use plan::{NestedSum, PlanSum, Prefactor, SidePlan};

use crate::error::{Error, Result};
use crate::lattice::{SumDiagnostics, TruncationPolicy};
use crate::mparith::HValue;

macro_rules! identity_ids {
    ($($v:ident => $s:literal),* $(,)?) => {
        /// Stable identifier of a registry entry.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum IdentityId {
            $($v,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$v,)*];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(IdentityId::$v => $s,)*
                }
            }
        }

        impl FromStr for IdentityId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(IdentityId::$v),)*
                    "cor_mc" => Ok(IdentityId::CorMilneSaalschutz),
                    _ => Err(Error::UnknownIdentity(s.into())),
                }
            }
        }
    };
}

identity_ids! {
    Gustafson6Psi6 => "gustafson_6psi6",
    Thm1 => "thm1",
    Thm1Shifted => "thm1_shifted",
    CorC1 => "cor_c1",
    CorSt => "cor_st",
    CorCsc => "cor_csc",
    CorChuUn => "cor_chu_un",
    CorPk => "cor_pk",
    CorPkb => "cor_pkb",
    CorKajiharaWatson => "cor_kajihara_watson",
    CorKajiharaBailey => "cor_kajihara_bailey",
    CorMilneSaalschutz => "cor_milne_saalschutz",
    CorMilneDougall => "cor_milne_dougall",
    CorC2 => "cor_c2",
    CorC3 => "cor_c3",
    Cor2l => "cor_2l",
    Cor3l => "cor_3l",
    CorMnc => "cor_mnc",
    EqPbt => "eq_pbt",
    CorMnb => "cor_mnb",
    CorC1p => "cor_c1p",
    CorCn => "cor_cn",
    CorCmn => "cor_cmn",
    ClKm => "cl_km",
    ClKmg => "cl_kmg",
    ClUs => "cl_us",
    Cl5h5 => "cl_5h5",
    Cl2h2 => "cl_2h2",
    ClThmA => "cl_thm_a",
    ClThmB => "cl_thm_b",
    ClBi => "cl_bi",
    Cl3h3 => "cl_3h3",
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl IdentityId {
    /// True for identities without a base q.
    pub fn is_classical(&self) -> bool {
        self.as_str().starts_with("cl_")
    }
}

/// Builds one side of an identity from its parameters.
pub type SideFn = fn(&ParamSet) -> Result<SidePlan>;

/// A registry entry.
#[derive(Clone)]
pub struct IdentityDescriptor {
    pub id: IdentityId,
    pub schema: Schema,
    pub constraints: Vec<Constraint>,
    /// Short description of where the identity sits in the theory.
    pub anchor: &'static str,
    /// Parameter solved for to meet the exact constraints, e.g. `"d"` or `"b[n]"`.
    pub dependent: Option<&'static str>,
    pub lhs: SideFn,
    pub rhs: SideFn,
}

impl fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityDescriptor")
            .field("id", &self.id)
            .field("schema", &self.schema)
            .field("constraints", &self.constraints)
            .field("anchor", &self.anchor)
            .field("dependent", &self.dependent)
            .finish()
    }
}

impl IdentityDescriptor {
    /// Schema validation followed by every constraint.
    pub fn admit(&self, ps: &ParamSet) -> Result<()> {
        self.schema.validate(ps)?;
        for c in &self.constraints {
            c.enforce(ps)?;
        }
        Ok(())
    }

    pub fn lhs_plan(&self, ps: &ParamSet) -> Result<SidePlan> {
        self.admit(ps)?;
        (self.lhs)(ps)
    }

    pub fn rhs_plan(&self, ps: &ParamSet) -> Result<SidePlan> {
        self.admit(ps)?;
        (self.rhs)(ps)
    }
}

pub fn list_identities() -> Vec<IdentityDescriptor> {
    IdentityId::ALL.iter().map(|&id| registry::descriptor(id)).collect()
}

pub fn lookup(id: IdentityId) -> IdentityDescriptor {
    registry::descriptor(id)
}

pub fn lookup_str(name: &str) -> Result<IdentityDescriptor> {
    Ok(lookup(name.parse()?))
}

pub fn constraints(id: IdentityId) -> Vec<Constraint> {
    lookup(id).constraints
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Evaluate every summand from scratch instead of by recurrence tables.
    pub reference: bool,
}

pub fn lhs_eval(id: IdentityId, ps: &ParamSet, policy: &TruncationPolicy) -> Result<(HValue, SumDiagnostics)> {
    lhs_eval_with(id, ps, policy, EvalOptions::default())
}

pub fn rhs_eval(id: IdentityId, ps: &ParamSet, policy: &TruncationPolicy) -> Result<(HValue, SumDiagnostics)> {
    rhs_eval_with(id, ps, policy, EvalOptions::default())
}

pub fn lhs_eval_with(
    id: IdentityId,
    ps: &ParamSet,
    policy: &TruncationPolicy,
    opts: EvalOptions,
) -> Result<(HValue, SumDiagnostics)> {
    lookup(id).lhs_plan(ps)?.evaluate(policy, ps.ctx, opts.reference)
}

pub fn rhs_eval_with(
    id: IdentityId,
    ps: &ParamSet,
    policy: &TruncationPolicy,
    opts: EvalOptions,
) -> Result<(HValue, SumDiagnostics)> {
    lookup(id).rhs_plan(ps)?.evaluate(policy, ps.ctx, opts.reference)
}

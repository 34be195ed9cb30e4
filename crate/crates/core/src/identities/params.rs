use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mparith::{HValue, PrecisionContext, QBase};

/// Named parameters instantiating one identity.
///
/// Dimensions and integer offsets (`n`, `p`, `r`, `N`, `L`, ...) live in
/// `dims`; complex vectors (`a`, `b`, `z`, ...) in `vectors`; non-negative
/// integer vectors (`m`, `l`) in `ints`; single complex letters in `scalars`.
#[derive(Clone, Debug)]
pub struct ParamSet {
    pub ctx: PrecisionContext,
    pub q: Option<QBase>,
    pub dims: BTreeMap<String, i64>,
    pub vectors: BTreeMap<String, Vec<HValue>>,
    pub ints: BTreeMap<String, Vec<i64>>,
    pub scalars: BTreeMap<String, HValue>,
}

impl ParamSet {
    pub fn new(ctx: PrecisionContext, q: Option<QBase>) -> Self {
        Self {
            ctx,
            q,
            dims: BTreeMap::new(),
            vectors: BTreeMap::new(),
            ints: BTreeMap::new(),
            scalars: BTreeMap::new(),
        }
    }

    pub fn set_dim(&mut self, name: &str, v: i64) -> &mut Self {
        self.dims.insert(name.to_string(), v);
        self
    }

    pub fn set_vector(&mut self, name: &str, v: Vec<HValue>) -> &mut Self {
        self.vectors.insert(name.to_string(), v);
        self
    }

    pub fn set_ints(&mut self, name: &str, v: Vec<i64>) -> &mut Self {
        self.ints.insert(name.to_string(), v);
        self
    }

    pub fn set_scalar(&mut self, name: &str, v: HValue) -> &mut Self {
        self.scalars.insert(name.to_string(), v);
        self
    }

    pub fn qbase(&self) -> Result<&QBase> {
        self.q.as_ref().ok_or_else(|| Error::MissingParameter("q".into()))
    }

    pub fn dim(&self, name: &str) -> Result<i64> {
        self.dims.get(name).copied().ok_or_else(|| Error::MissingParameter(name.into()))
    }

    pub fn vector(&self, name: &str) -> Result<&[HValue]> {
        self.vectors.get(name).map(|v| v.as_slice()).ok_or_else(|| Error::MissingParameter(name.into()))
    }

    pub fn int_vec(&self, name: &str) -> Result<&[i64]> {
        self.ints.get(name).map(|v| v.as_slice()).ok_or_else(|| Error::MissingParameter(name.into()))
    }

    pub fn scalar(&self, name: &str) -> Result<&HValue> {
        self.scalars.get(name).ok_or_else(|| Error::MissingParameter(name.into()))
    }

    /// Product of a vector's entries (the capital-letter convention).
    pub fn prod(&self, name: &str) -> Result<HValue> {
        Ok(prod(self.ctx, self.vector(name)?))
    }

    /// Sum of a vector's entries.
    pub fn sum(&self, name: &str) -> Result<HValue> {
        let mut acc = HValue::zero(self.ctx);
        for x in self.vector(name)? {
            acc = &acc + x;
        }
        Ok(acc)
    }

    /// |m| for an integer vector.
    pub fn int_sum(&self, name: &str) -> Result<i64> {
        Ok(self.int_vec(name)?.iter().sum())
    }

    /// q^k, failing in classical mode.
    pub fn qpow(&self, k: i64) -> Result<HValue> {
        Ok(self.qbase()?.pow(k))
    }

    /// lambda = q a^2 / (b e f).
    pub fn lambda(&self) -> Result<HValue> {
        let a = self.scalar("a")?;
        let den = &(self.scalar("b")? * self.scalar("e")?) * self.scalar("f")?;
        (&(a * a) * self.qbase()?.value()).checked_div(&den)
    }

    /// Rounds every value to a new precision.
    pub fn with_precision(&self, ctx: PrecisionContext) -> Self {
        Self {
            ctx,
            q: self.q.as_ref().map(|q| q.with_precision(ctx)),
            dims: self.dims.clone(),
            vectors: self
                .vectors
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|x| x.with_precision(ctx)).collect()))
                .collect(),
            ints: self.ints.clone(),
            scalars: self.scalars.iter().map(|(k, v)| (k.clone(), v.with_precision(ctx))).collect(),
        }
    }
}

pub(crate) fn prod(ctx: PrecisionContext, xs: &[HValue]) -> HValue {
    let mut acc = HValue::one(ctx);
    for x in xs {
        acc = &acc * x;
    }
    acc
}

/// Length rule for a vector parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Len {
    /// Equal to a dimension.
    Dim(&'static str),
    /// A dimension plus a constant offset.
    DimPlus(&'static str, i64),
}

impl Len {
    fn resolve(&self, ps: &ParamSet) -> Result<usize> {
        let v = match *self {
            Len::Dim(d) => ps.dim(d)?,
            Len::DimPlus(d, k) => ps.dim(d)? + k,
        };
        usize::try_from(v).map_err(|_| Error::InvalidDimension(alloc::format!("{self:?} = {v}")))
    }
}

/// What a schema entry names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Dim,
    Scalar,
    Vector(Len),
    Ints(Len),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub name: &'static str,
    pub kind: SlotKind,
}

/// Required parameters of one identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub q_mode: bool,
    pub slots: Vec<Slot>,
}

impl Schema {
    pub fn new(q_mode: bool) -> Self {
        Self { q_mode, slots: Vec::new() }
    }

    pub fn dim(mut self, name: &'static str) -> Self {
        self.slots.push(Slot { name, kind: SlotKind::Dim });
        self
    }

    pub fn scalar(mut self, name: &'static str) -> Self {
        self.slots.push(Slot { name, kind: SlotKind::Scalar });
        self
    }

    pub fn vector(mut self, name: &'static str, len: Len) -> Self {
        self.slots.push(Slot { name, kind: SlotKind::Vector(len) });
        self
    }

    pub fn ints(mut self, name: &'static str, len: Len) -> Self {
        self.slots.push(Slot { name, kind: SlotKind::Ints(len) });
        self
    }

    pub fn slot(&self, name: &str) -> Option<&Slot> {
        self.slots.iter().find(|s| s.name == name)
    }

    /// Checks presence and lengths, and that integer vectors are non-negative.
    pub fn validate(&self, ps: &ParamSet) -> Result<()> {
        if self.q_mode != ps.q.is_some() {
            return Err(Error::MissingParameter(if self.q_mode { "q".into() } else { "q (classical mode)".into() }));
        }
        for s in &self.slots {
            match s.kind {
                SlotKind::Dim => {
                    ps.dim(s.name)?;
                }
                SlotKind::Scalar => {
                    ps.scalar(s.name)?;
                }
                SlotKind::Vector(len) => {
                    let want = len.resolve(ps)?;
                    let got = ps.vector(s.name)?.len();
                    if got != want {
                        return Err(Error::SchemaMismatch { name: s.name.into(), expected: want, found: got });
                    }
                }
                SlotKind::Ints(len) => {
                    let want = len.resolve(ps)?;
                    let v = ps.int_vec(s.name)?;
                    if v.len() != want {
                        return Err(Error::SchemaMismatch { name: s.name.into(), expected: want, found: v.len() });
                    }
                }
            }
        }
        for v in ps.vectors.values().flatten().chain(ps.scalars.values()) {
            if v.ctx() != ps.ctx {
                return Err(Error::PrecisionMismatch { left: v.ctx().bits(), right: ps.ctx.bits() });
            }
        }
        Ok(())
    }
}

use crate::error::{Error, Result};

/// Working precision shared by every value taking part in one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    bits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;
    pub const MAX_BITS: u32 = 1 << 16;
    pub const DEFAULT_GUARD: u32 = 16;

    pub fn new(bits: u32) -> Result<Self> {
        Self::with_guard(bits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(bits: u32, guard_digits: u32) -> Result<Self> {
        if !(Self::MIN_BITS..=Self::MAX_BITS).contains(&bits) {
            return Err(Error::InvalidPrecision { bits });
        }
        Ok(Self { bits, guard_digits })
    }

    /// Precision for a check at relative tolerance `tol`: twice the bits of
    /// `tol` plus 64 guard bits.
    pub fn for_tolerance(tol: f64) -> Self {
        let t = if tol > 0.0 && tol < 1.0 { tol } else { 0.5 };
        let need = libm::ceil(-2.0 * libm::log2(t)) as u32 + 64;
        Self::new(need.clamp(Self::MIN_BITS, Self::MAX_BITS)).expect("clamped")
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// log2 of the unit roundoff, exactly `1 - bits`.
    pub fn log2_eps(&self) -> f64 {
        1.0 - self.bits as f64
    }

    /// Unit roundoff `2^(1-bits)` as a double (underflows to 0 past ~1075 bits).
    pub fn eps(&self) -> f64 {
        libm::exp2(self.log2_eps())
    }

    /// The context widened by its guard digits, for accumulating long
    /// products that are rounded back afterwards.
    pub fn guarded(&self) -> Self {
        Self { bits: (self.bits + self.guard_digits).min(Self::MAX_BITS), guard_digits: self.guard_digits }
    }

    pub(crate) fn p(&self) -> usize {
        self.bits as usize
    }
}

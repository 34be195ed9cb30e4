//! Arbitrary-precision complex arithmetic and the scalar kernels shared by
//! every identity: q-shifted factorials for all integer indices, infinite
//! q-products, rising factorials and complex log-gamma.

mod classical;
mod context;
mod qpoch;
mod value;

pub use classical::{
    gamma, is_nonpositive_integer, log_gamma, poch_classical, poch_classical_recip, GammaProduct,
};
pub use context::PrecisionContext;
pub use qpoch::{
    min_factor_distance, qpoch_finite, qpoch_finite_recip, qpoch_inf, qpoch_inf_list,
    qpoch_inf_ratio, qpoch_inf_with_tail, qpoch_list, qpoch_ratio, QBase,
};
pub use value::HValue;


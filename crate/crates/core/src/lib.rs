//! Computational analysis of unilateral weighted shift operators.
//!
//! The library certifies moment infinite divisibility and related
//! positivity conditions of weighted shifts at finite order, and implements
//! the constructive operations that preserve or produce such shifts:
//! quotients, subshifts, Schur products and powers, Aluthge and inverse
//! Aluthge transforms, Berger measures, and two- and three-weight
//! completions. Arithmetic is exact (big rationals and rational-power
//! products) wherever the data allows, with floating point as the explicit
//! fallback.

pub mod certify;
pub mod completion;
pub mod error;
pub mod measures;
pub mod scalar;
pub mod seq_core;
pub mod shift_model;
pub mod transforms;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use shift_model::WeightedShift;

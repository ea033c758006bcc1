//! Greedy and lazy expansions in alternate bases.
//!
//! An alternate base is a tuple `(beta_0, ..., beta_{p-1})` of reals greater
//! than one used cyclically: `x = sum_n a_n / (beta_0 beta_1 ... beta_n)`.
//! The crate provides
//!
//! * [`AlternateBase`] with the greedy and lazy transformations, digit
//!   expansion, evaluation and the conjugacy between the two;
//! * [`measure`]: the closed-form invariant density of the greedy map,
//!   interval measures, digit frequencies and entropy;
//! * [`digitset`]: expansions in base `B = beta_{p-1} ... beta_0` over the
//!   digit set obtained by blocking `p` digits, and an exact procedure
//!   deciding where the two points of view disagree;
//! * [`oracle`]: brute-force tuple searches and ergodic estimators used to
//!   cross-check everything above.
//!
//! Everything is generic over [`Real`] (`f64` or `f32`); the aliases below
//! fix the scalar.

mod base;
mod cantor;
pub mod digitset;
mod error;
pub mod measure;
pub mod oracle;
mod scalar;
mod tuples;

pub use base::{AlternateBase, DigitWord, StatePoint};
pub use cantor::{greedy_expand_cantor, CantorBaseStream};
pub use error::{Error, Result};
pub use scalar::Real;
pub use tuples::ENUMERATION_LIMIT;

pub type AlternateBaseF64 = AlternateBase<f64>;
pub type AlternateBaseF32 = AlternateBase<f32>;
pub type StatePointF64 = StatePoint<f64>;
pub type StatePointF32 = StatePoint<f32>;
pub type DigitSetF64 = digitset::DigitSet<f64>;
pub type DensitySpecF64 = measure::DensitySpec<f64>;
pub type PiecewiseLinearMapF64 = measure::PiecewiseLinearMap<f64>;

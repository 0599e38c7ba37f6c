//! Explicit time evolution of plane waves and superoscillating initial data
//! under one-dimensional δ and δ′ point interactions.
//!
//! Kernels are generic over the real type ([`Real`]): `f64` for everyday
//! use, [`Dd`]/[`Td`]/[`Qd`] multi-word floats where superoscillation
//! cancellation eats double precision, and exact rationals
//! ([`BigRational`]) for coefficient bookkeeping.

// reference values are quoted with all the digits their oracles produced
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod a1_operator;
pub mod evolution;
pub mod fd_oracle;
pub mod multifloat;
pub mod lambda;
pub mod scalar;
pub mod superosc;
mod tables;

pub use error::{Error, Result};
pub use multifloat::MultiFloat;
pub use num_complex::Complex;
pub use num_rational::BigRational;
pub use scalar::{Real, Scalar};

/// Double-precision complex number, the default value type.
pub type ComplexScalar = Complex<f64>;
/// Double-double (~32 significant digits).
pub type Dd = MultiFloat<2>;
/// Triple-double (~48 significant digits).
pub type Td = MultiFloat<3>;
/// Quad-double (~64 significant digits).
pub type Qd = MultiFloat<4>;

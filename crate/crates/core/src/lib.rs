//! Exact computation of Hurwitz numbers for fixed ramification profile and
//! arbitrary genus, via connected correlators of E-operators on the charge-zero
//! infinite wedge space.
//!
//! The crate is organised as follows:
//! - [`exactalg`]: Laurent polynomials in `u = e^(hbar/2)` over exact rationals,
//!   q-integers, exact division and power-series coefficient extraction;
//! - [`wedge`]: partitions, Frobenius coordinates, ribbon calculus and the
//!   explicit action of the E-operators on basis vectors;
//! - [`correlator`]: the commutation-relation engine evaluating disconnected and
//!   connected vacuum correlators of E-operator words;
//! - [`hurwitz`]: Hurwitz numbers, structure coefficients, the classical
//!   fixed-degree formula, the orbifold variant and large-genus asymptotics;
//! - [`oracle`]: independent brute-force and convolution counts of transposition
//!   factorisations in symmetric groups;
//! - [`monotone`]: monotone Hurwitz numbers and the exponential-plus-linear
//!   model fit.
//!
//! All arithmetic is exact; there is no floating-point mode.

pub mod correlator;
pub mod error;
pub mod exactalg;
pub mod golden;
pub mod hurwitz;
pub mod monotone;
pub mod oracle;
pub mod wedge;

pub use error::Error;

/// Arbitrary-precision integer used throughout the numeric path.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout the numeric path.
pub type Rat = num_rational::BigRational;
/// Laurent polynomial in `u = e^(hbar/2)` with exact rational coefficients.
pub type Laurent = exactalg::LaurentPoly<Rat>;

pub use correlator::{CorrelatorResult, OperatorWord};
pub use exactalg::{ExpCombo, LaurentPoly, Parity, QIntProduct, QRational};
pub use wedge::{Partition, Ribbon, WedgeVector};

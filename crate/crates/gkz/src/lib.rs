//! Exact combinatorics of GKZ systems: umbrellas, characteristic cycles,
//! holonomic rank jumps and Gevrey irregularity, all in exact arithmetic.

pub mod charcycle;
pub mod error;
pub mod gevrey;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod polyhedra;
pub mod scalar;
pub mod semigroup;
pub mod umbrella;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use error::{GkzError, Result};
pub use lattice::{IntMatrix, Lattice, LatticeIndex};
pub use scalar::{OrderedField, PerturbedScalar};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Exact rational scalar.
pub type Rational = BigRational;
/// Rational polynomial in a positive infinitesimal.
pub type Eps = PerturbedScalar;

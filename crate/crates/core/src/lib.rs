//! Exact computations in the associative operad `As` and polynomial-identity theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: sparse vectors and canonical reduced row-echelon bases over an exact field.
//! * [`perm`]: permutations stored in sequence form `(σ⁻¹(1), …, σ⁻¹(n))`.
//! * [`operad`]: linear combinations of permutations with the operadic compositions.
//! * [`free`]: noncommutative polynomials, the parser, and the bridge `Φₙ` to `As(n)`.
//! * [`algebra`]: finite-dimensional algebras given by structure constants, and evaluation.
//! * [`ideal`]: bounded-arity operadic ideal slices, identity ideals and codimensions.
//!
//! All of the algebra is generic over a [`Scalar`] type. The concrete instantiation used by
//! the tooling is [`Rational`], with the aliases below.

pub mod algebra;
pub mod error;
pub mod free;
pub mod ideal;
pub mod linalg;
pub mod operad;
pub mod perm;
pub mod scalar;

pub use error::{Error, Result};
pub use operad::Mode;
pub use perm::Permutation;
pub use scalar::{parse_rational, Rational, Scalar};

/// Elements of `As(n) = ℚSₙ`.
pub type Element = operad::OperadElement<Rational>;
/// Noncommutative polynomials over ℚ.
pub type Poly = free::NcPoly<Rational>;
/// Multilinear polynomials over ℚ.
pub type Multilinear = free::MultilinearPoly<Rational>;
/// Structure-constant algebras over ℚ.
pub type Algebra = algebra::StructureAlgebra<Rational>;
/// Arity slices of operadic ideals over ℚ.
pub type Slice = ideal::IdealSlice<Rational>;
/// Generator sets over ℚ.
pub type Generators = ideal::GeneratorSet<Rational>;
/// Sparse rational vectors.
pub type Vector = linalg::SparseVector<Rational>;
/// Canonical rational row bases.
pub type Basis = linalg::RowBasis<Rational>;

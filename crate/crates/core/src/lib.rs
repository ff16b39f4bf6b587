//! Exact arithmetic invariants of Fermat and Kummer Calabi-Yau varieties
//! in positive characteristic: Jacobi sums, zeta functions, Newton slopes,
//! Artin-Mazur heights and period lattices.
//!
//! The algebraic core is generic over its scalar type. Cyclotomic integers
//! take any [`Coeff`], lattices any [`LatticeInt`], complex embeddings any
//! `num_traits::Float`. The aliases below fix the types used by the
//! high-level entry points.

pub mod arith;
pub mod character_sums;
pub mod cyclotomic;
pub mod error;
pub mod fermat;
pub mod finite_field;
pub mod kummer;
pub mod lattice;
pub mod padic;
pub mod scalar;
pub mod zeta;

pub use character_sums::{jacobi_sum, Character, JacobiCache, JacobiTable};
pub use cyclotomic::{Cyclotomic, CyclotomicBasis};
pub use error::{Error, Result};
pub use fermat::{
    artin_comparison, enumerate_alpha, fully_rigged_fermat, height_fermat, hodge_numbers_fermat,
    newton_slopes, stickelberger_ah, AlphaVector, HeightValue, HodgeVector, SlopeMultiset,
};
pub use finite_field::{build_field, FermatParams, FieldCache, FiniteField, FqElement};
pub use kummer::{
    kummer_example, kummer_example_height, kummer_height, AbelianData, EllipticCurve,
};
pub use lattice::{lattice_index, period_lattice, LatticeInt};
pub use padic::{PadicContext, Valuation};
pub use scalar::Coeff;
pub use zeta::{brute_force_point_count, point_count_from_zeta, zeta_fermat, ZetaData};

/// Cyclotomic integers with arbitrary-precision coefficients.
pub type CycInt = Cyclotomic<num_bigint::BigInt>;
/// Cyclotomic integers with machine coefficients, for small `q^r`.
pub type CycSmall = Cyclotomic<i64>;
/// Rationals used for slopes and lattice coordinates.
pub type Rational = num_rational::Ratio<num_bigint::BigInt>;
pub type QuadPoly = lattice::QuadraticPoly<num_bigint::BigInt>;
pub type QuadElement = lattice::QuadElement<num_bigint::BigInt>;
pub type QuadLattice = lattice::PeriodLattice<num_bigint::BigInt>;

//! Exact algebra and finite dynamics toolkit.
//!
//! Everything is generic over a coefficient [`Field`]; the two concrete fields
//! are [`PrimeField`] (`Z/pZ`, modulus chosen at run time) and [`Rationals`].
//! Type aliases for the common instantiations live at the crate root.

pub mod curves;
pub mod dynsys;
pub mod error;
pub mod field;
pub mod groebner;
pub mod inertia;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod sample;
pub mod weyl;

pub use error::{AlgebraError, Result};
pub use field::{Field, PrimeField, Rationals};
pub use linalg::Matrix;
pub use weyl::WeylOperator;
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{MPoly, PolyRing};

pub type Fp = PrimeField;
pub type Q = Rationals;

pub type MatrixFp = Matrix<PrimeField>;
pub type MatrixQ = Matrix<Rationals>;
pub type PolyRingFp = PolyRing<PrimeField>;
pub type PolyRingQ = PolyRing<Rationals>;
pub type PolyFp = MPoly<PrimeField>;
pub type PolyQ = MPoly<Rationals>;
pub type GroebnerFp = groebner::GroebnerBasis<PrimeField>;
pub type GroebnerQ = groebner::GroebnerBasis<Rationals>;
pub type WeylFp = WeylOperator<PrimeField>;
pub type WeylQ = WeylOperator<Rationals>;

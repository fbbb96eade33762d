//! Exact multigraded algebra of psi-classes on genus-0 moduli spaces.
//!
//! The crate builds the quadratic presentations of the section rings
//! `A_n` and `B_{n,m}` and checks them against independent computations:
//! closed-form Hilbert series, Gröbner bases, quadratic-dual dimensions and
//! points coming from configurations of marked points on the line.
//!
//! All arithmetic is exact. Generic code is written against the [`Field`]
//! trait; [`Rational`] and [`Fp`] are the two backends.

pub mod error;
pub mod geometry;
pub mod graded;
pub mod groebner;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod presentation;
pub mod scalar;
pub mod series;

pub use error::{Error, Result, ScalarError};
pub use graded::{graded_dim, graded_dim_with, DegreeVector, RankStrategy};
pub use geometry::{AffinePoint, PointConfig, Vanishing};
pub use groebner::{GroebnerBasis, KrullDimension};
pub use koszul::{KoszulReport, KoszulVerdict};
pub use monomial::{Monomial, MonomialOrder, OrderKind, VarIndex};
pub use poly::Poly;
pub use presentation::{build_an, build_bnm, AlgebraKind, PivotScheme, PresentationSpec};
pub use scalar::{Field, Fp, PrimeModulus, Rational};
pub use series::{Bound, TruncatedSeries};

/// Polynomial with rational coefficients.
pub type QPoly = Poly<Rational>;
/// Polynomial with prime-field coefficients.
pub type FpPoly = Poly<Fp>;
/// Presentation over the rationals.
pub type QPresentation = PresentationSpec<Rational>;
/// Presentation over a prime field.
pub type FpPresentation = PresentationSpec<Fp>;

//! Exact linear algebra and polynomial engines for supported cohomology,
//! localization torsors, and fixed-point formulas.
//!
//! Everything is generic over a [`Scalar`] field; the aliases below fix the
//! production choice of arbitrary-precision rationals.

pub mod cli;
pub mod cochain;
pub mod equivariant;
pub mod ktheory;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod random;
pub mod ratfunc;
pub mod scalar;
pub mod simplicial;
pub mod torsor;
pub mod univariate;

pub use scalar::Scalar;

pub type ExactScalar = num_rational::BigRational;
pub type ExactMatrix = linalg::Matrix<ExactScalar>;
pub type ExactAffineSubspace = linalg::AffineSubspace<ExactScalar>;
pub type ExactCochainComplex = cochain::CochainComplex<ExactScalar>;
pub type ExactCochainPair = cochain::CochainPair<ExactScalar>;
pub type ExactLocalizationSequence = torsor::LocalizationSequence<ExactScalar>;
pub type ExactLiftTorsor = torsor::LiftTorsor<ExactScalar>;
pub type ExactPoly = poly::GradedPoly<ExactScalar>;
pub type ExactRationalFunction = ratfunc::RationalFunction<ExactScalar>;
pub type ExactComponentAlgebra = equivariant::ComponentAlgebra<ExactScalar>;
pub type ExactEquivariantElement = equivariant::EquivariantElement<ExactScalar>;
pub type ExactFixedComponent = equivariant::FixedComponent<ExactScalar>;
pub type ExactLaurentPoly = ktheory::LaurentPoly<ExactScalar>;
pub type ExactLaurentRational = ktheory::LaurentRational<ExactScalar>;

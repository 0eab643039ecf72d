//! Inertia bounds for graphs.
//!
//! Graph constructions, weighted adjacency matrices and the certificates that
//! bound `n≥0(G)`, the minimum number of nonnegative eigenvalues over all
//! weighted adjacency matrices of `G`, together with exact and numeric
//! evaluation of the Lovász theta function.
//!
//! The floating-point kernels ([`spectra`], [`scaling`]) are generic over
//! [`Real`] and work in `f32` or `f64`; the exact kernels are generic over
//! commutative rings and instantiated with arbitrary-precision integers and
//! rationals. The aliases below fix the scalar types used by the verification
//! suites.

pub mod constructions;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod scaling;
pub mod spectra;
pub mod theta;
pub mod witnesses;

pub use graph::{spectral_params, ExpanderReport, Graph, GraphError};
pub use spectra::{InertiaMode, InertiaTriple, Polynomial, Spectrum, SymmetricMatrix};

/// Floating scalar accepted by the numeric kernels.
pub trait Real:
    nalgebra::RealField + Copy + num_traits::ToPrimitive + num_traits::FromPrimitive + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: nalgebra::RealField + Copy + num_traits::ToPrimitive + num_traits::FromPrimitive + Send + Sync + 'static
{
}

pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("representable constant")
}

/// Dense real symmetric matrix in double precision.
pub type Matrix = SymmetricMatrix<f64>;
/// Symmetric matrix with arbitrary-precision integer entries.
pub type IntegerSymmetricMatrix = SymmetricMatrix<num_bigint::BigInt>;
/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Polynomial with arbitrary-precision integer coefficients.
pub type IntegerPolynomial = Polynomial<num_bigint::BigInt>;

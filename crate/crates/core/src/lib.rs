//! Finite-degree truncations of composition operators on weighted Hardy
//! spaces of the unit ball 𝔹ₙ ⊂ ℂⁿ.
//!
//! The crate builds, in a fixed orthonormalized monomial basis:
//!
//! * truncated multivariate power series and their arithmetic ([`series`]),
//! * weighted Hardy spaces `H_s` (and general β-weighted spaces) with their
//!   monomial norms, inner products and reproducing kernels ([`space`]),
//! * the exact calculus of linear fractional self-maps of the ball and the
//!   involutive Möbius automorphisms φ_a ([`lfm`]),
//! * dense matrix compressions `P_D C_ψ P_D` of composition operators with
//!   adjoints, polar decompositions and normality/symmetry residuals
//!   ([`opmat`]),
//! * the conjugation constructions `J`, `𝒥_a = J W_a`, its unitary
//!   realignment for complex parameters, and the Takagi-based pipeline for
//!   linear symbols ([`symmetry`]).
//!
//! All numerics are generic over the real scalar type through [`Real`];
//! `f64` is the intended precision and the concrete aliases at the crate
//! root ([`Complex64`], [`Space64`], …) use it.
//!
//! # Conventions
//!
//! The Hermitian pairing `⟨x, y⟩` **always conjugates the second
//! argument**: `⟨x, y⟩ = Σ_j x_j · conj(y_j)`. This matters everywhere a
//! denominator `⟨z, C⟩ + d` or a kernel `K_w` appears; see
//! [`scalar::herm_dot`].
//!
//! Matrices of operators are expressed in the orthonormalized monomial
//! basis `ê_α = z^α / ‖z^α‖`, ordered by total degree and lexicographically
//! (z₁ > z₂ > …) within each degree; see [`mindex::enumerate_multiindices`].
//!
//! Antilinear operators are represented by the matrix `M` of the map
//! `v ↦ M · conj(v)`; an operator is a conjugation iff `M` is unitary and
//! symmetric.

pub mod error;
pub mod lfm;
pub mod mindex;
pub mod opmat;
pub mod scalar;
pub mod series;
pub mod space;
pub mod symmetry;

pub use error::{Error, Result};
pub use lfm::LinearFractionalMap;
pub use mindex::{enumerate_multiindices, MultiIndex};
pub use opmat::{AntilinearOperator, OperatorMatrix};
pub use scalar::Real;
pub use series::TruncatedSeries;
pub use space::{SpaceSpec, Weight};
pub use symmetry::{ConjugationCertificate, Exactness, Thresholds};

/// Default real scalar for desk-scale runs.
pub type Real64 = f64;
/// Complex scalar over [`Real64`].
pub type Complex64 = num_complex::Complex<f64>;
/// Truncated power series over [`Real64`].
pub type Series64 = TruncatedSeries<f64>;
/// Weighted Hardy space descriptor over [`Real64`].
pub type Space64 = SpaceSpec<f64>;
/// Linear fractional self-map over [`Real64`].
pub type Map64 = LinearFractionalMap<f64>;
/// Truncated linear operator over [`Real64`].
pub type Operator64 = OperatorMatrix<f64>;
/// Truncated antilinear operator over [`Real64`].
pub type Antilinear64 = AntilinearOperator<f64>;
/// Conjugation certificate over [`Real64`].
pub type Certificate64 = ConjugationCertificate<f64>;

//! Dense truncations of composition operators in the orthonormalized
//! monomial basis, together with adjoints, polar decomposition, operator
//! norms and the normality/symmetry residuals.
//!
//! The matrix of `C_ψ` is the compression `P_D C_ψ P_D`: the column for
//! the basis monomial `z^γ` holds the degree-≤D Taylor coefficients of
//! `ψ^γ = Π_j [ψ]_j^{γ_j}`, rescaled entrywise by `‖z^α‖ / ‖z^γ‖` to act
//! on the orthonormal basis `ê_α = z^α / ‖z^α‖`. For degree-preserving
//! (linear) symbols the compression is exact on polynomials of degree ≤ D;
//! for Möbius symbols it is an approximation whose defect vanishes as
//! D → ∞. Tests and reports distinguish those two regimes throughout.
//!
//! Antilinear operators are stored as the matrix `M` of `v ↦ M · conj(v)`;
//! such an operator is isometric iff `M` is unitary and a conjugation iff
//! additionally `M conj(M) = I` (equivalently `M` unitary symmetric).
//!
//! Residuals use the spectral norm; Frobenius variants are provided as a
//! cheaper diagnostic where reports ask for them.

use crate::error::{Error, Result};
use crate::lfm::LinearFractionalMap;
use crate::scalar::Real;
use crate::series::TruncatedSeries;
use crate::space::SpaceSpec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use std::sync::Arc;

/// Largest singular value; 0 for empty matrices.
pub fn spectral_norm<R: Real>(m: &DMatrix<Complex<R>>) -> R {
    if m.is_empty() {
        return R::zero();
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Smallest singular value.
pub fn sigma_min<R: Real>(m: &DMatrix<Complex<R>>) -> R {
    if m.is_empty() {
        return R::zero();
    }
    m.clone().svd(false, false).singular_values.min()
}

/// A linear operator on the truncated space, as a complex matrix in the
/// orthonormalized monomial basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<R: Real> {
    space: Arc<SpaceSpec<R>>,
    m: DMatrix<Complex<R>>,
}

impl<R: Real> OperatorMatrix<R> {
    /// Wraps an explicit matrix over a space, checking its size.
    pub fn from_matrix(space: Arc<SpaceSpec<R>>, m: DMatrix<Complex<R>>) -> Result<Self> {
        let n = space.basis_size();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}×{}, basis size is {n}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(OperatorMatrix { space, m })
    }

    /// The identity operator.
    pub fn identity(space: Arc<SpaceSpec<R>>) -> Self {
        let n = space.basis_size();
        OperatorMatrix {
            space,
            m: DMatrix::identity(n, n),
        }
    }

    /// The underlying space.
    pub fn space(&self) -> &Arc<SpaceSpec<R>> {
        &self.space
    }

    /// The matrix in the orthonormal basis.
    pub fn matrix(&self) -> &DMatrix<Complex<R>> {
        &self.m
    }

    /// Consumes into the raw matrix.
    pub fn into_matrix(self) -> DMatrix<Complex<R>> {
        self.m
    }

    /// Basis size N = binomial(n+D, n).
    pub fn basis_size(&self) -> usize {
        self.space.basis_size()
    }

    fn check_space(&self, other_space: &SpaceSpec<R>, what: &str) -> Result<()> {
        if **self.space() != *other_space {
            return Err(Error::SpaceMismatch(format!("{what}: operators live over different spaces")));
        }
        Ok(())
    }

    /// Conjugate transpose. Valid as the adjoint because the basis is
    /// orthonormal: ⟨T f, g⟩ = ⟨f, T* g⟩ exactly in the truncated space.
    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            space: Arc::clone(&self.space),
            m: self.m.adjoint(),
        }
    }

    /// Unitary polar factor W = U Vᴴ from the SVD M = U Σ Vᴴ, so that
    /// M = W · (V Σ Vᴴ) is the (right) polar decomposition with positive
    /// factor |T| = V Σ Vᴴ.
    ///
    /// `sigma_min_tol` guards invertibility; `None` uses the default
    /// 1e−10 · σ_max. Fails with [`Error::NotInvertible`] when the
    /// smallest singular value does not exceed the guard.
    pub fn polar_unitary(&self, sigma_min_tol: Option<R>) -> Result<Self> {
        let svd = self.m.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let tol = sigma_min_tol.unwrap_or_else(|| R::from_f64_lossy(1e-10) * smax);
        if smin <= tol {
            return Err(Error::NotInvertible {
                sigma_min: smin.as_f64(),
                tol: tol.as_f64(),
            });
        }
        let u = svd.u.expect("u requested");
        let v_t = svd.v_t.expect("v_t requested");
        Ok(OperatorMatrix {
            space: Arc::clone(&self.space),
            m: u * v_t,
        })
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> R {
        spectral_norm(&self.m)
    }

    /// Spectral norm of `M Mᴴ − Mᴴ M`, normalized by ‖M‖²; zero iff the
    /// truncated operator is normal.
    pub fn normality_residual(&self) -> R {
        let mh = self.m.adjoint();
        let comm = &self.m * &mh - &mh * &self.m;
        let denom = self.op_norm();
        if denom == R::zero() {
            return R::zero();
        }
        spectral_norm(&comm) / (denom * denom)
    }
}

/// The compression `P_D C_ψ P_D` of the composition operator with symbol ψ.
pub fn composition_matrix<R: Real>(
    space: &Arc<SpaceSpec<R>>,
    psi: &LinearFractionalMap<R>,
) -> Result<OperatorMatrix<R>> {
    if psi.n() != space.n() {
        return Err(Error::ShapeMismatch(format!(
            "symbol dimension {} does not match space dimension {}",
            psi.n(),
            space.n()
        )));
    }
    let n = space.n();
    let cutoff = space.cutoff();
    let nb = space.basis_size();
    let components: Vec<TruncatedSeries<R>> = (0..n)
        .map(|j| psi.component_series(j, cutoff))
        .collect::<Result<_>>()?;
    let scale = space.orthonormal_scaling();
    let mut m = DMatrix::from_element(nb, nb, Complex::default());
    // ψ^γ built incrementally in graded order: γ = (γ − e_j) + e_j with j
    // the first supported variable, so each column costs one series product.
    let mut powers: Vec<TruncatedSeries<R>> = Vec::with_capacity(nb);
    for (col, gamma) in space.basis().iter().enumerate() {
        let series = match gamma.first_support() {
            None => TruncatedSeries::one(n, cutoff),
            Some(j) => {
                let parent = gamma.lower(j).expect("nonzero support");
                let parent_idx = space
                    .index_of(&parent)
                    .expect("parent of a basis index is a basis index");
                powers[parent_idx].mul(&components[j])?
            }
        };
        for (alpha, c) in series.iter() {
            let row = space
                .index_of(alpha)
                .expect("series keys within cutoff by construction");
            m[(row, col)] = *c * Complex::new(scale[row] / scale[col], R::zero());
        }
        powers.push(series);
    }
    Ok(OperatorMatrix {
        space: Arc::clone(space),
        m,
    })
}

/// An antilinear operator `v ↦ M · conj(v)` on the truncated space.
#[derive(Debug, Clone)]
pub struct AntilinearOperator<R: Real> {
    space: Arc<SpaceSpec<R>>,
    m: DMatrix<Complex<R>>,
}

impl<R: Real> AntilinearOperator<R> {
    /// Wraps the matrix of `v ↦ M · conj(v)`.
    pub fn from_matrix(space: Arc<SpaceSpec<R>>, m: DMatrix<Complex<R>>) -> Result<Self> {
        let n = space.basis_size();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}×{}, basis size is {n}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(AntilinearOperator { space, m })
    }

    /// The underlying space.
    pub fn space(&self) -> &Arc<SpaceSpec<R>> {
        &self.space
    }

    /// The matrix M of the action v ↦ M · conj(v).
    pub fn matrix(&self) -> &DMatrix<Complex<R>> {
        &self.m
    }

    /// Applies the operator: M · conj(v).
    pub fn apply(&self, v: &DVector<Complex<R>>) -> DVector<Complex<R>> {
        &self.m * v.map(|c| c.conj())
    }

    /// ‖Mᴴ M − I‖ in spectral norm; zero iff the operator is isometric.
    pub fn isometry_residual(&self) -> R {
        let n = self.m.nrows();
        let g = self.m.adjoint() * &self.m - DMatrix::identity(n, n);
        spectral_norm(&g)
    }

    /// ‖M conj(M) − I‖ in spectral norm; zero iff the operator squares to
    /// the identity (together with isometry: iff it is a conjugation).
    pub fn involution_residual(&self) -> R {
        let n = self.m.nrows();
        let g = &self.m * self.m.map(|c| c.conj()) - DMatrix::identity(n, n);
        spectral_norm(&g)
    }
}

/// Composition of two antilinear operators, a *linear* operator:
/// `v ↦ M_P · conj(M_Q · conj(v)) = (M_P · conj(M_Q)) · v`.
pub fn antilinear_compose<R: Real>(
    p: &AntilinearOperator<R>,
    q: &AntilinearOperator<R>,
) -> Result<OperatorMatrix<R>> {
    if **p.space() != **q.space() {
        return Err(Error::SpaceMismatch(
            "antilinear composition over different spaces".into(),
        ));
    }
    OperatorMatrix::from_matrix(Arc::clone(p.space()), &p.m * q.m.map(|c| c.conj()))
}

/// Complex-symmetry residual `‖M_T − M_𝒥 · M_Tᵀ · conj(M_𝒥)‖ / ‖M_T‖` in
/// spectral norm — the matrix form of `T = 𝒥 T* 𝒥` for the antilinear
/// representation `𝒥 v = M_𝒥 · conj(v)`.
pub fn csym_residual<R: Real>(
    t: &OperatorMatrix<R>,
    j: &AntilinearOperator<R>,
) -> Result<R> {
    t.check_space(j.space(), "csym_residual")?;
    let denom = t.op_norm();
    if denom == R::zero() {
        return Ok(R::zero());
    }
    Ok(spectral_norm(&csym_defect(t, j)) / denom)
}

/// Frobenius-norm variant of [`csym_residual`]; cheaper diagnostic.
pub fn csym_residual_frobenius<R: Real>(
    t: &OperatorMatrix<R>,
    j: &AntilinearOperator<R>,
) -> Result<R> {
    t.check_space(j.space(), "csym_residual_frobenius")?;
    let denom = spectral_norm(&t.m);
    if denom == R::zero() {
        return Ok(R::zero());
    }
    Ok(csym_defect(t, j).norm() / denom)
}

fn csym_defect<R: Real>(
    t: &OperatorMatrix<R>,
    j: &AntilinearOperator<R>,
) -> DMatrix<Complex<R>> {
    &t.m - &j.m * t.m.transpose() * j.m.map(|c| c.conj())
}

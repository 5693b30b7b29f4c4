//! Weighted Hardy spaces on the unit ball: monomial norms, weight
//! sequences, inner products and truncated reproducing kernels.
//!
//! A space is determined by the dimension n, a truncation degree D and a
//! weight: either the kernel parameter s > 0 of the family `H_s` with
//! reproducing kernel `(1 − ⟨z, w⟩)^{−s}`, or an explicit positive sequence
//! β_0..β_D of norm ratios against the classical Hardy space `H²(𝔹ₙ)`.
//!
//! For `H_s` the monomial norms are `‖z^α‖² = α! / (s)_{|α|}` (rising
//! factorial), which reduces at s = n to the classical
//! `‖z^α‖²_{H²} = (n−1)! α! / (n−1+|α|)!`. The `H_s` formula is derived by
//! expanding the kernel; the test suite performs that derivation
//! numerically and cross-checks the s = n case against the classical
//! formula.

use crate::error::{Error, Result};
use crate::mindex::{enumerate_multiindices, MultiIndex};
use crate::scalar::{norm_sqr, rising_factorial, Real};
use crate::series::TruncatedSeries;
use nalgebra::DVector;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Weight data of a space: the `H_s` parameter or an explicit β sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight<R: Real> {
    /// The kernel family `H_s`, s > 0. s = n is the classical Hardy space,
    /// s > n the weighted Bergman spaces, s = 1 (n ≥ 2) the Drury–Arveson
    /// space.
    Parameter(R),
    /// Explicit β_0..β_D with β_m = ‖z^α‖/‖z^α‖_{H²} for |α| = m.
    /// Boundedness of composition operators on such a space is assumed,
    /// not checked; certificates carry this assumption.
    Explicit(Vec<R>),
}

/// Immutable descriptor of a truncated weighted Hardy space, with the
/// basis enumeration and all monomial norms precomputed.
#[derive(Debug, Clone)]
pub struct SpaceSpec<R: Real> {
    n: usize,
    cutoff: usize,
    weight: Weight<R>,
    basis: Vec<MultiIndex>,
    position: BTreeMap<MultiIndex, usize>,
    norm_sq: Vec<R>,
}

impl<R: Real> PartialEq for SpaceSpec<R> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cutoff == other.cutoff && self.weight == other.weight
    }
}

impl<R: Real> SpaceSpec<R> {
    /// Builds the space, enumerating the basis and precomputing norms.
    ///
    /// Fails when n = 0, when the weight is nonpositive or too short, or
    /// when a norm leaves double-precision range (the desk-scale guard).
    pub fn new(n: usize, weight: Weight<R>, cutoff: usize) -> Result<Self> {
        match &weight {
            Weight::Parameter(s) => {
                if *s <= R::zero() {
                    return Err(Error::InvalidArgument("weight parameter s must be > 0".into()));
                }
            }
            Weight::Explicit(beta) => {
                if beta.len() < cutoff + 1 {
                    return Err(Error::InvalidArgument(format!(
                        "explicit beta sequence needs {} entries for cutoff {}, got {}",
                        cutoff + 1,
                        cutoff,
                        beta.len()
                    )));
                }
                if beta.iter().take(cutoff + 1).any(|b| *b <= R::zero()) {
                    return Err(Error::InvalidArgument("beta weights must be positive".into()));
                }
            }
        }
        let basis = enumerate_multiindices(n, cutoff)?;
        let mut position = BTreeMap::new();
        for (i, alpha) in basis.iter().enumerate() {
            position.insert(alpha.clone(), i);
        }
        let norm_sq: Vec<R> = basis
            .iter()
            .map(|alpha| raw_norm_sq(n, &weight, alpha))
            .collect();
        for (i, v) in norm_sq.iter().enumerate() {
            if !(*v > R::zero()) || !num_traits::Float::is_finite(*v) {
                return Err(Error::InvalidArgument(format!(
                    "monomial norm for {} left floating-point range: {v:e}",
                    basis[i]
                )));
            }
        }
        Ok(SpaceSpec {
            n,
            cutoff,
            weight,
            basis,
            position,
            norm_sq,
        })
    }

    /// `H_s` space of dimension n truncated at degree D.
    pub fn hs(n: usize, s: R, cutoff: usize) -> Result<Self> {
        Self::new(n, Weight::Parameter(s), cutoff)
    }

    /// Ambient dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation degree D.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Weight data.
    pub fn weight(&self) -> &Weight<R> {
        &self.weight
    }

    /// Basis multi-indices in graded lexicographic order.
    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    /// Number of basis monomials N = binomial(n+D, n).
    pub fn basis_size(&self) -> usize {
        self.basis.len()
    }

    /// Position of α in the basis ordering.
    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.position.get(alpha).copied()
    }

    /// ‖z^α‖² in this space.
    pub fn monomial_norm_sq(&self, alpha: &MultiIndex) -> Result<R> {
        match self.index_of(alpha) {
            Some(i) => Ok(self.norm_sq[i]),
            None => Err(Error::OutOfRange(format!(
                "monomial {alpha} exceeds cutoff {} (or wrong dimension)",
                self.cutoff
            ))),
        }
    }

    /// ‖z^α‖² by basis position.
    pub fn norm_sq_at(&self, i: usize) -> R {
        self.norm_sq[i]
    }

    /// β_m = ‖z^α‖ / ‖z^α‖_{H²} for any |α| = m.
    pub fn beta(&self, m: usize) -> Result<R> {
        if m > self.cutoff {
            return Err(Error::OutOfRange(format!(
                "degree {m} exceeds cutoff {}",
                self.cutoff
            )));
        }
        Ok(match &self.weight {
            // β_m² = (n)_m / (s)_m
            Weight::Parameter(s) => num_traits::Float::sqrt(
                rising_factorial(R::from_f64_lossy(self.n as f64), m) / rising_factorial(*s, m),
            ),
            Weight::Explicit(beta) => beta[m],
        })
    }

    /// ‖z^α‖² in the classical Hardy space H²(𝔹ₙ).
    pub fn h2_norm_sq(&self, alpha: &MultiIndex) -> R {
        h2_norm_sq(self.n, alpha)
    }

    /// Inner product Σ_α c_α(f) · conj(c_α(g)) · ‖z^α‖².
    pub fn inner_product(
        &self,
        f: &TruncatedSeries<R>,
        g: &TruncatedSeries<R>,
    ) -> Result<Complex<R>> {
        if f.dim() != self.n || f.cutoff() != self.cutoff {
            return Err(Error::ShapeMismatch(format!(
                "series (n={}, D={}) does not match space (n={}, D={})",
                f.dim(),
                f.cutoff(),
                self.n,
                self.cutoff
            )));
        }
        if g.dim() != self.n || g.cutoff() != self.cutoff {
            return Err(Error::ShapeMismatch("second series does not match space".into()));
        }
        let mut acc = Complex::default();
        for (alpha, cf) in f.iter() {
            let cg = g.coeff(alpha);
            if cg != Complex::default() {
                acc += *cf * cg.conj() * Complex::new(self.monomial_norm_sq(alpha)?, R::zero());
            }
        }
        Ok(acc)
    }

    /// Truncated reproducing kernel K_w: coefficient `conj(w)^α / ‖z^α‖²`
    /// on z^α. For `H_s` this is `((s)_{|α|} / α!) · conj(w)^α`. The
    /// reproducing property `⟨f, K_w⟩ = f(w)` holds at float level for
    /// polynomials of degree ≤ D.
    pub fn kernel_series(&self, w: &[Complex<R>]) -> Result<TruncatedSeries<R>> {
        if w.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "point dimension {} does not match space dimension {}",
                w.len(),
                self.n
            )));
        }
        if norm_sqr(w) >= R::one() {
            return Err(Error::OutOfDomain("kernel point must satisfy ‖w‖ < 1".into()));
        }
        let wbar: Vec<Complex<R>> = w.iter().map(|c| c.conj()).collect();
        let mut k = TruncatedSeries::zero(self.n, self.cutoff);
        for (i, alpha) in self.basis.iter().enumerate() {
            let coeff = alpha.eval(&wbar) / Complex::new(self.norm_sq[i], R::zero());
            k.set_coeff(alpha.clone(), coeff);
        }
        Ok(k)
    }

    /// Diagonal N with N_α = ‖z^α‖ = sqrt(monomial_norm_sq(α)), basis
    /// order. Multiplying monomial coefficients componentwise by N yields
    /// coordinates in the orthonormal basis ê_α = z^α/‖z^α‖.
    pub fn orthonormal_scaling(&self) -> DVector<R> {
        DVector::from_iterator(
            self.basis.len(),
            self.norm_sq.iter().map(|v| num_traits::Float::sqrt(*v)),
        )
    }

    /// Coordinates of a series in the orthonormal basis.
    pub fn to_orthonormal_vec(&self, f: &TruncatedSeries<R>) -> Result<DVector<Complex<R>>> {
        if f.dim() != self.n || f.cutoff() != self.cutoff {
            return Err(Error::ShapeMismatch("series does not match space".into()));
        }
        let scale = self.orthonormal_scaling();
        let mut v = DVector::from_element(self.basis.len(), Complex::default());
        for (alpha, c) in f.iter() {
            let i = self
                .index_of(alpha)
                .expect("series keys within cutoff by construction");
            v[i] = *c * Complex::new(scale[i], R::zero());
        }
        Ok(v)
    }

    /// Series with the given orthonormal-basis coordinates.
    pub fn from_orthonormal_vec(&self, v: &DVector<Complex<R>>) -> Result<TruncatedSeries<R>> {
        if v.len() != self.basis.len() {
            return Err(Error::ShapeMismatch(format!(
                "vector length {} does not match basis size {}",
                v.len(),
                self.basis.len()
            )));
        }
        let scale = self.orthonormal_scaling();
        let mut f = TruncatedSeries::zero(self.n, self.cutoff);
        for (i, alpha) in self.basis.iter().enumerate() {
            f.set_coeff(alpha.clone(), v[i] / Complex::new(scale[i], R::zero()));
        }
        Ok(f)
    }
}

/// ‖z^α‖² in H²(𝔹ₙ): (n−1)! α! / (n−1+|α|)! = α! / (n)_{|α|}.
pub fn h2_norm_sq<R: Real>(n: usize, alpha: &MultiIndex) -> R {
    alpha.factorial::<R>() / rising_factorial(R::from_f64_lossy(n as f64), alpha.degree())
}

fn raw_norm_sq<R: Real>(n: usize, weight: &Weight<R>, alpha: &MultiIndex) -> R {
    match weight {
        // ‖z^α‖² = α! / (s)_{|α|}, from expanding (1 − ⟨z,w⟩)^{−s}
        Weight::Parameter(s) => alpha.factorial::<R>() / rising_factorial(*s, alpha.degree()),
        Weight::Explicit(beta) => {
            let b = beta[alpha.degree()];
            b * b * h2_norm_sq(n, alpha)
        }
    }
}

/// `(s)_m` helper re-exported for tests that expand kernels by hand.
pub fn pochhammer<R: Real>(s: R, m: usize) -> R {
    rising_factorial(s, m)
}

//! Multi-indices α ∈ ℕⁿ and their graded lexicographic enumeration.
//!
//! A [`MultiIndex`] is the exponent vector of a monomial
//! `z^α = z₁^{α₁} ⋯ zₙ^{αₙ}`. The basis ordering used everywhere in this
//! crate is *graded lexicographic*: by total degree `|α|` ascending, and
//! within one degree lexicographically with `z₁ > z₂ > … > zₙ` (so `(1,0)`
//! precedes `(0,1)`). Degree-graded blocks make exactness of truncation for
//! degree-preserving symbols visible as block-diagonal structure.

use crate::error::{Error, Result};
use crate::scalar::Real;
use num_complex::Complex;
use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial in n complex variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// Wraps an exponent vector. The length is the ambient dimension.
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "multi-index needs dimension >= 1");
        MultiIndex(exponents)
    }

    /// Zero multi-index (the constant monomial) in dimension n.
    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree |α| = Σ_j α_j.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Exponent of the j-th variable (0-based).
    pub fn exponent(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// Exponents as a slice.
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// α + e_j: bumps the j-th exponent.
    pub fn bump(&self, j: usize) -> Self {
        let mut e = self.0.clone();
        e[j] += 1;
        MultiIndex(e)
    }

    /// α − e_j when α_j > 0.
    pub fn lower(&self, j: usize) -> Option<Self> {
        if self.0[j] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[j] -= 1;
        Some(MultiIndex(e))
    }

    /// Position of the first nonzero exponent, if any.
    pub fn first_support(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// α! = Π_j α_j! as a real scalar.
    pub fn factorial<R: Real>(&self) -> R {
        self.0
            .iter()
            .map(|&e| crate::scalar::factorial::<R>(e as usize))
            .fold(R::one(), |a, b| a * b)
    }

    /// Monomial power z^α = Π_j z_j^{α_j}.
    pub fn eval<R: Real>(&self, z: &[Complex<R>]) -> Complex<R> {
        assert_eq!(z.len(), self.dim(), "point dimension mismatch");
        let mut acc = Complex::new(R::one(), R::zero());
        for (j, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                acc *= z[j];
            }
        }
        acc
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.dim(), other.dim(), "comparing mixed dimensions");
        self.degree()
            .cmp(&other.degree())
            // z₁ > z₂ > …: the larger leading exponents come first.
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All multi-indices of dimension n and degree ≤ d, in graded
/// lexicographic order. The result has exactly `binomial(n+d, n)` entries
/// and is a prefix of the enumeration for any larger cutoff.
pub fn enumerate_multiindices(n: usize, d: usize) -> Result<Vec<MultiIndex>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "ambient dimension must be >= 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(basis_size(n, d));
    let mut scratch = vec![0u32; n];
    for degree in 0..=d {
        emit_degree(&mut out, &mut scratch, 0, degree as u32);
    }
    Ok(out)
}

/// Writes all compositions of `remaining` into positions `pos..` of
/// `scratch`, leading exponent largest first.
fn emit_degree(out: &mut Vec<MultiIndex>, scratch: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(MultiIndex(scratch.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        scratch[pos] = e;
        emit_degree(out, scratch, pos + 1, remaining - e);
    }
}

/// `binomial(n + d, n)`: number of monomials of degree ≤ d in n variables.
pub fn basis_size(n: usize, d: usize) -> usize {
    // n is small (≤ a handful); compute the product form exactly in u128.
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 1..=n {
        num *= (d + k) as u128;
        den *= k as u128;
    }
    (num / den) as usize
}

//! Truncated multivariate power series over ℂⁿ.
//!
//! A [`TruncatedSeries`] stores the coefficients of a power series up to a
//! fixed total-degree cutoff D; every operation discards terms of degree
//! above the cutoff. Coefficients are kept in a sparse map keyed by
//! [`MultiIndex`] in graded lexicographic order, with entries of negligible
//! modulus dropped on insertion. Absent key means coefficient zero.

use crate::error::{Error, Result};
use crate::mindex::MultiIndex;
use crate::scalar::{herm_dot, norm_sqr, Real};
use num_complex::Complex;
use std::collections::BTreeMap;

/// Modulus below which a stored coefficient is dropped outright.
/// Canonicalization only; well above underflow, far below anything a test
/// can observe.
const DROP_MODULUS: f64 = 1e-300;

/// Default absolute tolerance for coefficientwise series comparison.
pub const SERIES_EQ_TOL: f64 = 1e-12;

/// Degree-truncated power series Σ_{|α| ≤ D} c_α z^α.
#[derive(Debug, Clone)]
pub struct TruncatedSeries<R: Real> {
    dim: usize,
    cutoff: usize,
    coeffs: BTreeMap<MultiIndex, Complex<R>>,
}

impl<R: Real> TruncatedSeries<R> {
    /// The zero series in n variables at cutoff D.
    pub fn zero(dim: usize, cutoff: usize) -> Self {
        assert!(dim >= 1, "series needs dimension >= 1");
        TruncatedSeries {
            dim,
            cutoff,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series c.
    pub fn constant(dim: usize, cutoff: usize, c: Complex<R>) -> Self {
        let mut s = Self::zero(dim, cutoff);
        s.set_coeff(MultiIndex::zero(dim), c);
        s
    }

    /// The constant series 1.
    pub fn one(dim: usize, cutoff: usize) -> Self {
        Self::constant(dim, cutoff, Complex::new(R::one(), R::zero()))
    }

    /// The single-term series c · z^α (dropped when |α| exceeds the cutoff).
    pub fn monomial(alpha: MultiIndex, cutoff: usize, c: Complex<R>) -> Self {
        let mut s = Self::zero(alpha.dim(), cutoff);
        s.set_coeff(alpha, c);
        s
    }

    /// Number of variables n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation degree D.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Coefficient on z^α (zero when absent).
    pub fn coeff(&self, alpha: &MultiIndex) -> Complex<R> {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    /// Stored (index, coefficient) pairs in graded lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex<R>)> {
        self.coeffs.iter()
    }

    /// Number of stored coefficients.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Sets the coefficient on z^α, canonicalizing tiny moduli to absent.
    /// Terms beyond the cutoff are discarded.
    pub fn set_coeff(&mut self, alpha: MultiIndex, c: Complex<R>) {
        assert_eq!(alpha.dim(), self.dim, "multi-index dimension mismatch");
        if alpha.degree() > self.cutoff {
            return;
        }
        // hypot-based norm stays exact through the subnormal range
        if c.norm() < R::from_f64_lossy(DROP_MODULUS) {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, c);
        }
    }

    /// Adds `c` to the coefficient on z^α.
    pub fn add_to_coeff(&mut self, alpha: MultiIndex, c: Complex<R>) {
        let cur = self.coeff(&alpha);
        self.set_coeff(alpha, cur + c);
    }

    fn check_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.dim != other.dim || self.cutoff != other.cutoff {
            return Err(Error::ShapeMismatch(format!(
                "{op}: (n={}, D={}) vs (n={}, D={})",
                self.dim, self.cutoff, other.dim, other.cutoff
            )));
        }
        Ok(())
    }

    /// Coefficientwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "series_add")?;
        let mut out = self.clone();
        for (alpha, c) in other.iter() {
            out.add_to_coeff(alpha.clone(), *c);
        }
        Ok(out)
    }

    /// Coefficientwise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-Complex::new(R::one(), R::zero())))
    }

    /// Scales every coefficient by k.
    pub fn scale(&self, k: Complex<R>) -> Self {
        let mut out = Self::zero(self.dim, self.cutoff);
        for (alpha, c) in self.iter() {
            out.set_coeff(alpha.clone(), *c * k);
        }
        out
    }

    /// Cauchy product, discarding all terms of degree above the cutoff.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "series_mul")?;
        let mut out = Self::zero(self.dim, self.cutoff);
        for (a, ca) in self.iter() {
            let da = a.degree();
            if da > self.cutoff {
                continue;
            }
            for (b, cb) in other.iter() {
                if da + b.degree() > self.cutoff {
                    // within one BTreeMap the degree is not monotone, so no
                    // early break; skipping is enough at desk scale
                    continue;
                }
                let mut e: Vec<u32> = a.exponents().to_vec();
                for (j, &eb) in b.exponents().iter().enumerate() {
                    e[j] += eb;
                }
                out.add_to_coeff(MultiIndex::new(e), *ca * *cb);
            }
        }
        Ok(out)
    }

    /// f^k by binary exponentiation; k = 0 gives the constant series 1.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.dim, self.cutoff);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("shapes agree by construction");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("shapes agree by construction");
            }
        }
        result
    }

    /// Evaluates Σ_α c_α z^α at the point z.
    pub fn eval(&self, z: &[Complex<R>]) -> Complex<R> {
        assert_eq!(z.len(), self.dim, "point dimension mismatch");
        self.iter()
            .map(|(alpha, c)| *c * alpha.eval(z))
            .fold(Complex::default(), |a, b| a + b)
    }

    /// The degree-m homogeneous part as a series with the same cutoff.
    pub fn homogeneous_part(&self, m: usize) -> Self {
        let mut out = Self::zero(self.dim, self.cutoff);
        for (alpha, c) in self.iter().filter(|(a, _)| a.degree() == m) {
            out.set_coeff(alpha.clone(), *c);
        }
        out
    }

    /// Largest coefficientwise difference |c_α(self) − c_α(other)|.
    pub fn max_coeff_diff(&self, other: &Self) -> R {
        let mut worst = R::zero();
        for alpha in self.coeffs.keys().chain(other.coeffs.keys()) {
            let d = (self.coeff(alpha) - other.coeff(alpha)).norm();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Coefficientwise equality within an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: R) -> bool {
        self.dim == other.dim && self.cutoff == other.cutoff && self.max_coeff_diff(other) <= tol
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> R {
        self.coeffs
            .values()
            .map(|c| c.norm())
            .fold(R::zero(), |a, b| if b > a { b } else { a })
    }
}

/// Degree-1 series of the Hermitian pairing `⟨z, c⟩ = Σ_j conj(c_j) z_j`.
///
/// The coefficient vector is conjugated: this is the pairing against a
/// fixed second argument, exactly as in the map denominator `⟨z, C⟩ + d`.
pub fn linear_form<R: Real>(c: &[Complex<R>], cutoff: usize) -> TruncatedSeries<R> {
    let n = c.len();
    assert!(n >= 1, "linear form needs dimension >= 1");
    let mut s = TruncatedSeries::zero(n, cutoff);
    for (j, cj) in c.iter().enumerate() {
        s.set_coeff(MultiIndex::zero(n).bump(j), cj.conj());
    }
    s
}

/// Truncated expansion of `1 / (d + ⟨z, c⟩)`.
///
/// Returns `(1/d) Σ_{m=0..D} (−⟨z, c⟩ / d)^m`; the product
/// `(d + ⟨z, c⟩) · result` equals 1 up to terms of degree above the cutoff.
/// The intended use has ‖c‖ < |d| so the affine form is nonvanishing on the
/// closed ball (not checked beyond d ≠ 0).
pub fn reciprocal_affine<R: Real>(
    d: Complex<R>,
    c: &[Complex<R>],
    cutoff: usize,
) -> Result<TruncatedSeries<R>> {
    if d.norm_sqr() == R::zero() {
        return Err(Error::SingularDenominator);
    }
    let n = c.len();
    let inv_d = Complex::new(R::one(), R::zero()) / d;
    if norm_sqr(c) == R::zero() {
        return Ok(TruncatedSeries::constant(n, cutoff, inv_d));
    }
    // -⟨z,c⟩/d, then Horner: 1/d · (1 + t(1 + t(1 + …)))
    let t = linear_form(c, cutoff).scale(-inv_d);
    let mut acc = TruncatedSeries::one(n, cutoff);
    for _ in 0..cutoff {
        acc = t.mul(&acc)?.add(&TruncatedSeries::one(n, cutoff))?;
    }
    Ok(acc.scale(inv_d))
}

/// Evaluates the Hermitian pairing series contract directly; test oracle
/// support for [`linear_form`].
pub fn linear_form_value<R: Real>(c: &[Complex<R>], z: &[Complex<R>]) -> Complex<R> {
    herm_dot(z, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    type S = TruncatedSeries<f64>;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn add_identity_and_doubling() {
        let mut f = S::zero(2, 3);
        f.set_coeff(mi(&[1, 0]), c(1.0, 0.0));
        f.set_coeff(mi(&[0, 2]), c(0.0, -2.0));
        let zero = S::zero(2, 3);
        assert!(f.add(&zero).unwrap().approx_eq(&f, 0.0));

        let z1 = S::monomial(mi(&[1, 0]), 2, c(1.0, 0.0));
        let two_z1 = z1.add(&z1).unwrap();
        assert_eq!(two_z1.coeff(&mi(&[1, 0])), c(2.0, 0.0));

        let cancel = f.add(&f.scale(c(-1.0, 0.0))).unwrap();
        assert_eq!(cancel.support_len(), 0);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let f = S::zero(2, 3);
        let g = S::zero(2, 4);
        assert!(matches!(f.add(&g), Err(Error::ShapeMismatch(_))));
        let h = S::zero(1, 3);
        assert!(matches!(f.mul(&h), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn mul_identity_and_difference_of_squares() {
        let mut f = S::zero(1, 2);
        f.set_coeff(mi(&[0]), c(1.0, 0.0));
        f.set_coeff(mi(&[1]), c(1.0, 0.0));
        let mut g = S::zero(1, 2);
        g.set_coeff(mi(&[0]), c(1.0, 0.0));
        g.set_coeff(mi(&[1]), c(-1.0, 0.0));
        let prod = f.mul(&g).unwrap();
        // (1+z)(1−z) = 1 − z²
        assert_eq!(prod.coeff(&mi(&[0])), c(1.0, 0.0));
        assert_eq!(prod.coeff(&mi(&[1])), c(0.0, 0.0));
        assert_eq!(prod.coeff(&mi(&[2])), c(-1.0, 0.0));

        let one = S::one(1, 2);
        assert!(one.mul(&f).unwrap().approx_eq(&f, 0.0));
    }

    #[test]
    fn mul_truncates_above_cutoff() {
        let z1 = S::monomial(mi(&[1, 0]), 2, c(1.0, 0.0));
        let z2 = S::monomial(mi(&[0, 1]), 2, c(1.0, 0.0));
        let z1z2 = z1.mul(&z2).unwrap();
        assert_eq!(z1z2.coeff(&mi(&[1, 1])), c(1.0, 0.0));
        // degree 3 is cut
        let cubed = z1z2.mul(&z1).unwrap();
        assert_eq!(cubed.support_len(), 0);
    }

    #[test]
    fn pow_zero_and_cube() {
        let z = S::monomial(mi(&[1]), 3, c(1.0, 0.0));
        assert!(z.pow(0).approx_eq(&S::one(1, 3), 0.0));
        let z3 = z.pow(3);
        assert_eq!(z3.coeff(&mi(&[3])), c(1.0, 0.0));
        assert_eq!(z3.support_len(), 1);
    }

    #[test]
    fn pow_matches_naive_product() {
        // deterministic pseudo-random series, unit-scale coefficients
        let mut f = S::zero(2, 6);
        let mut s = 0.17f64;
        for alpha in crate::mindex::enumerate_multiindices(2, 6).unwrap() {
            s = (s * 997.0 + 0.123).fract();
            let re = 2.0 * s - 1.0;
            s = (s * 997.0 + 0.123).fract();
            let im = 2.0 * s - 1.0;
            f.set_coeff(alpha, c(re, im));
        }
        for k in [1u32, 2, 3, 5, 8] {
            let fast = f.pow(k);
            let mut slow = S::one(2, 6);
            for _ in 0..k {
                slow = slow.mul(&f).unwrap();
            }
            assert!(
                fast.max_coeff_diff(&slow) < 1e-13 * slow.max_coeff().max(1.0),
                "k = {k}"
            );
        }
    }

    #[test]
    fn linear_form_conjugates() {
        let s = linear_form(&[c(0.0, 1.0)], 3);
        // ⟨z, i⟩ = conj(i) z = −i z
        assert_eq!(s.coeff(&mi(&[1])), c(0.0, -1.0));

        let zero = linear_form(&[c(0.0, 0.0), c(0.0, 0.0)], 3);
        assert_eq!(zero.support_len(), 0);

        // eval at z = c gives ‖c‖²
        let v = [c(0.3, -0.4), c(0.1, 0.2)];
        let form = linear_form(&v, 3);
        let val = form.eval(&v);
        assert!((val - c(norm_sqr(&v), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reciprocal_affine_geometric_series() {
        // 1/(1 − a z) = Σ a^m z^m for real a
        let a = 0.37f64;
        let s = reciprocal_affine(c(1.0, 0.0), &[c(-a, 0.0)], 8).unwrap();
        for m in 0..=8u32 {
            let expect = a.powi(m as i32);
            assert!((s.coeff(&mi(&[m])) - c(expect, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_affine_constant_and_singular() {
        let s = reciprocal_affine(c(0.0, 2.0), &[c(0.0, 0.0)], 5).unwrap();
        assert_eq!(s.coeff(&mi(&[0])), c(0.0, -0.5));
        assert_eq!(s.support_len(), 1);
        assert!(matches!(
            reciprocal_affine(c(0.0, 0.0), &[c(1.0, 0.0)], 5),
            Err(Error::SingularDenominator)
        ));
    }

    #[test]
    fn reciprocal_affine_product_check() {
        // (d + ⟨z,c⟩) · reciprocal = 1 up to degree > D, random (d, c)
        let mut s = 0.41f64;
        for _ in 0..10 {
            let mut next = || {
                s = (s * 997.0 + 0.123).fract();
                2.0 * s - 1.0
            };
            let d = c(next() + 2.0, next()); // keep |d| away from 0
            let cv = [c(next(), next()), c(next(), next())];
            let recip = reciprocal_affine(d, &cv, 7).unwrap();
            let affine = linear_form(&cv, 7)
                .add(&S::constant(2, 7, d))
                .unwrap();
            let prod = affine.mul(&recip).unwrap();
            assert!(prod.sub(&S::one(2, 7)).unwrap().max_coeff() < 1e-13);
        }
    }

    #[test]
    fn eval_examples() {
        let one = S::one(3, 4);
        assert_eq!(one.eval(&[c(9.0, 1.0), c(0.0, 0.0), c(1.0, 1.0)]), c(1.0, 0.0));

        let alpha = mi(&[2, 1, 1]);
        let mono = S::monomial(alpha, 4, c(1.0, 0.0));
        let ones = [c(1.0, 0.0); 3];
        assert_eq!(mono.eval(&ones), c(1.0, 0.0));
    }

    /// Independent evaluation oracle: nested per-variable Horner.
    fn horner_eval(f: &S, z: &[Complex64]) -> Complex64 {
        fn go(f: &S, z: &[Complex64], var: usize, prefix: &mut Vec<u32>) -> Complex64 {
            let n = f.dim();
            if var == n {
                return f.coeff(&mi(prefix));
            }
            let used: u32 = prefix.iter().sum();
            let deg_left = f.cutoff() as u32 - used.min(f.cutoff() as u32);
            // Horner in z[var]: the coefficients are the inner sums
            let mut acc = Complex64::default();
            for e in (0..=deg_left).rev() {
                prefix.push(e);
                let inner = go(f, z, var + 1, prefix);
                prefix.pop();
                acc = acc * z[var] + inner;
            }
            acc
        }
        go(f, z, 0, &mut Vec::new())
    }

    #[test]
    fn eval_matches_horner_oracle() {
        let mut f = S::zero(2, 5);
        let mut s = 0.73f64;
        for alpha in crate::mindex::enumerate_multiindices(2, 5).unwrap() {
            s = (s * 997.0 + 0.123).fract();
            let re = 2.0 * s - 1.0;
            s = (s * 997.0 + 0.123).fract();
            f.set_coeff(alpha, c(re, 2.0 * s - 1.0));
        }
        for trial in 0..8 {
            let t = trial as f64 * 0.11;
            let z = [c(0.3 * t.sin(), 0.2 * t.cos()), c(-0.25 * t.cos(), 0.15)];
            let direct = f.eval(&z);
            let oracle = horner_eval(&f, &z);
            assert!((direct - oracle).norm() < 1e-13, "trial {trial}");
        }
    }

    #[test]
    fn homogeneous_part_splits() {
        let mut f = S::zero(2, 3);
        f.set_coeff(mi(&[0, 0]), c(1.0, 0.0));
        f.set_coeff(mi(&[1, 1]), c(2.0, 0.0));
        f.set_coeff(mi(&[3, 0]), c(3.0, 0.0));
        assert_eq!(f.homogeneous_part(2).support_len(), 1);
        assert_eq!(f.homogeneous_part(1).support_len(), 0);
        let resum = f
            .homogeneous_part(0)
            .add(&f.homogeneous_part(1))
            .unwrap()
            .add(&f.homogeneous_part(2))
            .unwrap()
            .add(&f.homogeneous_part(3))
            .unwrap();
        assert!(resum.approx_eq(&f, 0.0));
    }
}

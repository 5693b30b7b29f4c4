//! Linear fractional self-maps of the unit ball and the involutive Möbius
//! automorphisms φ_a.
//!
//! A map `ψ(z) = (A z + B) / (⟨z, C⟩ + d)` is stored by its data
//! `(A, B, C, d)` together with the (n+1)×(n+1) associated matrix
//! `[[A, B], [Cᴴ, d]]`, which composes by matrix multiplication. The data
//! is projective; maps are normalized so that d = 1, and the sufficient
//! self-map condition ‖C‖ < |d| is enforced at construction.
//!
//! `φ_a(z) = (a − P_a z − s_a Q_a z) / (1 − ⟨z, a⟩)` interchanges 0 and a
//! and is an involution; here `P_a` is the orthogonal projection onto the
//! line through a, `Q_a = I − P_a` and `s_a = sqrt(1 − ‖a‖²)`.

use crate::error::{Error, Result};
use crate::mindex::MultiIndex;
use crate::scalar::{herm_dot, norm, norm_sqr, Real};
use crate::series::{reciprocal_affine, TruncatedSeries};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Float;

/// Möbius parameter: the interchanged point a and s_a = sqrt(1 − ‖a‖²).
#[derive(Debug, Clone)]
pub struct MobiusParams<R: Real> {
    a: Vec<Complex<R>>,
    s_a: R,
}

impl<R: Real> MobiusParams<R> {
    /// Validates ‖a‖ < 1 and fixes s_a.
    pub fn new(a: Vec<Complex<R>>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("parameter needs dimension >= 1".into()));
        }
        let nsq = norm_sqr(&a);
        if nsq >= R::one() {
            return Err(Error::OutOfDomain(format!(
                "Moebius parameter must satisfy ‖a‖ < 1, got ‖a‖ = {:e}",
                Float::sqrt(nsq)
            )));
        }
        Ok(MobiusParams {
            a,
            s_a: Float::sqrt(R::one() - nsq),
        })
    }

    /// The interchanged point a.
    pub fn a(&self) -> &[Complex<R>] {
        &self.a
    }

    /// s_a = sqrt(1 − ‖a‖²) ∈ (0, 1].
    pub fn s_a(&self) -> R {
        self.s_a
    }
}

/// Linear fractional map data (A, B, C, d), normalized to d = 1.
#[derive(Debug, Clone)]
pub struct LinearFractionalMap<R: Real> {
    a: DMatrix<Complex<R>>,
    b: DVector<Complex<R>>,
    c: DVector<Complex<R>>,
    d: Complex<R>,
}

impl<R: Real> LinearFractionalMap<R> {
    /// Builds a map from its (A, B, C, d) data.
    ///
    /// Enforces the sufficient denominator condition ‖C‖ < |d| (which also
    /// rules out d = 0) and normalizes the projective data so that d = 1.
    pub fn new(
        a: DMatrix<Complex<R>>,
        b: DVector<Complex<R>>,
        c: DVector<Complex<R>>,
        d: Complex<R>,
    ) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n || b.len() != n || c.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "map data must be square n×n with n-vectors: A is {}×{}, B has {}, C has {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        let cn = c.norm();
        let dn = d.norm();
        if !(cn < dn) {
            return Err(Error::OutOfDomain(format!(
                "denominator condition ‖C‖ < |d| violated: ‖C‖ = {cn:e}, |d| = {dn:e}"
            )));
        }
        // scale the associated matrix by 1/d: C picks up conj(1/d)
        let inv = Complex::new(R::one(), R::zero()) / d;
        Ok(LinearFractionalMap {
            a: a * inv,
            b: b * inv,
            c: c * inv.conj(),
            d: Complex::new(R::one(), R::zero()),
        })
    }

    /// The identity map z ↦ z.
    pub fn identity(n: usize) -> Self {
        LinearFractionalMap {
            a: DMatrix::identity(n, n),
            b: DVector::from_element(n, Complex::default()),
            c: DVector::from_element(n, Complex::default()),
            d: Complex::new(R::one(), R::zero()),
        }
    }

    /// The linear symbol φ_V(z) = V z for ‖V‖ ≤ 1 (operator norm).
    pub fn linear_map(v: DMatrix<Complex<R>>) -> Result<Self> {
        let n = v.nrows();
        if n == 0 || v.ncols() != n {
            return Err(Error::ShapeMismatch("linear symbol must be square".into()));
        }
        let op = v.clone().svd(false, false).singular_values.max();
        if op > R::one() + R::from_f64_lossy(1e-12) {
            return Err(Error::NotASelfMap(format!(
                "operator norm {op:e} exceeds 1"
            )));
        }
        Ok(LinearFractionalMap {
            a: v,
            b: DVector::from_element(n, Complex::default()),
            c: DVector::from_element(n, Complex::default()),
            d: Complex::new(R::one(), R::zero()),
        })
    }

    /// Ambient dimension n.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Numerator matrix A.
    pub fn a(&self) -> &DMatrix<Complex<R>> {
        &self.a
    }

    /// Numerator offset B.
    pub fn b(&self) -> &DVector<Complex<R>> {
        &self.b
    }

    /// Denominator vector C (the pairing conjugates it).
    pub fn c_vec(&self) -> &DVector<Complex<R>> {
        &self.c
    }

    /// Denominator constant d (1 after normalization).
    pub fn d(&self) -> Complex<R> {
        self.d
    }

    /// The (n+1)×(n+1) associated matrix [[A, B], [Cᴴ, d]].
    pub fn associated_matrix(&self) -> DMatrix<Complex<R>> {
        let n = self.n();
        DMatrix::from_fn(n + 1, n + 1, |i, j| {
            if i < n && j < n {
                self.a[(i, j)]
            } else if i < n {
                self.b[i]
            } else if j < n {
                self.c[j].conj()
            } else {
                self.d
            }
        })
    }

    /// Rebuilds a map from an associated matrix, normalizing d to 1.
    pub fn from_associated_matrix(m: &DMatrix<Complex<R>>) -> Result<Self> {
        let n = m.nrows().saturating_sub(1);
        if n == 0 || m.ncols() != n + 1 {
            return Err(Error::ShapeMismatch(
                "associated matrix must be (n+1)×(n+1), n >= 1".into(),
            ));
        }
        let a = DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
        let b = DVector::from_fn(n, |i, _| m[(i, n)]);
        let c = DVector::from_fn(n, |j, _| m[(n, j)].conj());
        Self::new(a, b, c, m[(n, n)])
    }

    /// Evaluates ψ(z) = (A z + B) / (⟨z, C⟩ + d).
    pub fn apply(&self, z: &[Complex<R>]) -> Result<Vec<Complex<R>>> {
        if z.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "point dimension {} does not match map dimension {}",
                z.len(),
                self.n()
            )));
        }
        let zc = DVector::from_column_slice(z);
        let denom = herm_dot(z, self.c.as_slice()) + self.d;
        let scale = R::from_f64_lossy(4.0) * R::epsilon() * (self.d.norm() + self.c.norm() * zc.norm());
        if denom.norm() <= scale {
            return Err(Error::SingularPoint);
        }
        let num = &self.a * zc + &self.b;
        Ok(num.iter().map(|x| x / denom).collect())
    }

    /// Composition ψ ∘ χ: associated matrices multiply, and the result's
    /// pointwise action is `z ↦ ψ(χ(z))`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.n() != inner.n() {
            return Err(Error::ShapeMismatch("composing maps of different dimension".into()));
        }
        let m = self.associated_matrix() * inner.associated_matrix();
        Self::from_associated_matrix(&m)
    }

    /// Projective involution test: m_ψ² = λ I for some λ ≠ 0, checked by
    /// normalizing m_ψ² by its largest-modulus entry and comparing to the
    /// identity entrywise within `tol`.
    pub fn is_involution(&self, tol: R) -> bool {
        let m = self.associated_matrix();
        let m2 = &m * &m;
        let lambda = m2
            .iter()
            .copied()
            .max_by(|x, y| x.norm().partial_cmp(&y.norm()).expect("finite entries"))
            .unwrap_or_default();
        if lambda.norm() == R::zero() {
            return false;
        }
        let k = m2.nrows();
        for i in 0..k {
            for j in 0..k {
                let expect = if i == j {
                    Complex::new(R::one(), R::zero())
                } else {
                    Complex::default()
                };
                if (m2[(i, j)] / lambda - expect).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Truncated Taylor series of the j-th component (0-based),
    /// `[ψ]_j = ((A z + B)_j) · 1/(⟨z, C⟩ + d)`.
    pub fn component_series(&self, j: usize, cutoff: usize) -> Result<TruncatedSeries<R>> {
        let n = self.n();
        if j >= n {
            return Err(Error::OutOfRange(format!(
                "component {j} out of range for dimension {n}"
            )));
        }
        let mut numerator = TruncatedSeries::zero(n, cutoff);
        numerator.set_coeff(MultiIndex::zero(n), self.b[j]);
        for k in 0..n {
            numerator.set_coeff(MultiIndex::zero(n).bump(k), self.a[(j, k)]);
        }
        let recip = reciprocal_affine(self.d, self.c.as_slice(), cutoff)?;
        numerator.mul(&recip)
    }
}

/// The involutive Möbius automorphism φ_a interchanging 0 and a, as a
/// linear fractional map: A = −(P_a + s_a Q_a), B = a, C = −a, d = 1.
/// For a = 0 this is z ↦ −z.
pub fn mobius<R: Real>(a: &[Complex<R>]) -> Result<LinearFractionalMap<R>> {
    let params = MobiusParams::new(a.to_vec())?;
    let n = a.len();
    let nsq = norm_sqr(a);
    let s_a = params.s_a();
    let mat = if nsq == R::zero() {
        // P_0 = 0, Q_0 = I, s_0 = 1
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(-R::one(), R::zero())
            } else {
                Complex::default()
            }
        })
    } else {
        DMatrix::from_fn(n, n, |i, j| {
            // P_a = a aᴴ / ⟨a, a⟩ entrywise: a_i conj(a_j) / ‖a‖²
            let p = a[i] * a[j].conj() / Complex::new(nsq, R::zero());
            let q = if i == j {
                Complex::new(R::one(), R::zero()) - p
            } else {
                -p
            };
            -(p + q * Complex::new(s_a, R::zero()))
        })
    };
    LinearFractionalMap::new(
        mat,
        DVector::from_column_slice(a),
        DVector::from_iterator(n, a.iter().map(|x| -x)),
        Complex::new(R::one(), R::zero()),
    )
}

/// Euclidean norm helper for raw slices, re-exported for callers sampling
/// points in the ball.
pub fn ball_norm<R: Real>(z: &[Complex<R>]) -> R {
    norm(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    type Map = LinearFractionalMap<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    struct Lcg(u64);
    impl Lcg {
        fn next_unit(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        fn ball_point(&mut self, n: usize, max_norm: f64) -> Vec<Complex64> {
            let v: Vec<Complex64> = (0..n)
                .map(|_| c(2.0 * self.next_unit() - 1.0, 2.0 * self.next_unit() - 1.0))
                .collect();
            let r = max_norm * self.next_unit() / (norm_sqr(&v).sqrt() + 1e-12);
            v.iter().map(|x| x * r).collect()
        }
    }

    #[test]
    fn mobius_at_zero_is_minus_identity() {
        let m = mobius::<f64>(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { c(-1.0, 0.0) } else { c(0.0, 0.0) };
                assert_eq!(m.a()[(i, j)], expect);
            }
        }
        assert_eq!(m.b()[0], c(0.0, 0.0));
        assert_eq!(m.c_vec()[0], c(0.0, 0.0));
        assert_eq!(m.d(), c(1.0, 0.0));
    }

    #[test]
    fn mobius_univariate_half() {
        // φ_{1/2}(z) = (1/2 − z)/(1 − z/2): P_a = 1, Q_a = 0 in n = 1
        let m = mobius::<f64>(&[c(0.5, 0.0)]).unwrap();
        assert!((m.a()[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((m.b()[0] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((m.c_vec()[0] - c(-0.5, 0.0)).norm() < 1e-15);
        let z = [c(0.3, 0.1)];
        let got = m.apply(&z).unwrap();
        let expect = (c(0.5, 0.0) - z[0]) / (c(1.0, 0.0) - z[0] * 0.5);
        assert!((got[0] - expect).norm() < 1e-15);
    }

    #[test]
    fn mobius_rejects_boundary() {
        assert!(matches!(
            mobius::<f64>(&[c(1.0, 0.0)]),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            mobius::<f64>(&[c(0.8, 0.0), c(0.7, 0.0)]),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn interchange_property_sampled() {
        let mut rng = Lcg(0x5eed);
        for n in 1..=3usize {
            for _ in 0..50 {
                let mut a = rng.ball_point(n, 0.95);
                // push a few samples right at ‖a‖ = 0.95
                if rng.next_unit() < 0.2 {
                    let r = norm_sqr(&a).sqrt();
                    if r > 1e-6 {
                        a = a.iter().map(|x| x * (0.95 / r)).collect();
                    }
                }
                let m = mobius(&a).unwrap();
                let at_zero = m.apply(&vec![c(0.0, 0.0); n]).unwrap();
                let at_a = m.apply(&a).unwrap();
                for j in 0..n {
                    assert!((at_zero[j] - a[j]).norm() < 1e-12);
                    assert!(at_a[j].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn identity_applies() {
        let id = Map::identity(3);
        let z = [c(0.1, 0.2), c(-0.3, 0.0), c(0.0, 0.4)];
        let got = id.apply(&z).unwrap();
        for j in 0..3 {
            assert_eq!(got[j], z[j]);
        }
    }

    #[test]
    fn mobius_is_a_self_map_sampled() {
        let mut rng = Lcg(0xba11);
        for _ in 0..100 {
            let a = rng.ball_point(2, 0.9);
            let m = mobius(&a).unwrap();
            let z = rng.ball_point(2, 0.999);
            let w = m.apply(&z).unwrap();
            assert!(norm_sqr(&w) < 1.0, "image left the ball");
        }
    }

    #[test]
    fn compose_with_identity() {
        let a = [c(0.2, 0.3), c(-0.1, 0.25)];
        let m = mobius(&a).unwrap();
        let composed = m.compose(&Map::identity(2)).unwrap();
        // d-normalized data is unique, so compare directly
        assert!((composed.associated_matrix() - m.associated_matrix()).norm() < 1e-14);
    }

    #[test]
    fn mobius_squared_is_projectively_identity() {
        let mut rng = Lcg(0xf00d);
        for n in 1..=3usize {
            for _ in 0..20 {
                let a = rng.ball_point(n, 0.9);
                let m = mobius(&a).unwrap();
                let sq = m.compose(&m).unwrap();
                // after d-normalization the composite is exactly I
                let diff = sq.associated_matrix() - DMatrix::<Complex64>::identity(n + 1, n + 1);
                assert!(diff.norm() < 1e-11, "n={n} ‖m²−I‖={}", diff.norm());
                assert!(m.is_involution(1e-11));
            }
        }
    }

    #[test]
    fn compose_matches_pointwise() {
        let mut rng = Lcg(0xcafe);
        let psi = mobius(&[c(0.3, -0.2), c(0.1, 0.15)]).unwrap();
        let chi = mobius(&[c(-0.25, 0.1), c(0.05, 0.3)]).unwrap();
        let composed = psi.compose(&chi).unwrap();
        for _ in 0..50 {
            let z = rng.ball_point(2, 0.8);
            let direct = composed.apply(&z).unwrap();
            let nested = psi.apply(&chi.apply(&z).unwrap()).unwrap();
            for j in 0..2 {
                assert!((direct[j] - nested[j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn involution_examples() {
        let half = Map::linear_map(DMatrix::from_element(1, 1, c(0.5, 0.0))).unwrap();
        assert!(!half.is_involution(1e-11));
        let neg = Map::linear_map(DMatrix::from_element(1, 1, c(-1.0, 0.0))).unwrap();
        assert!(neg.is_involution(1e-14));
    }

    #[test]
    fn linear_map_examples() {
        let id = Map::linear_map(DMatrix::identity(2, 2)).unwrap();
        assert!((id.associated_matrix() - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-15);

        let zero = Map::linear_map(DMatrix::from_element(2, 2, c(0.0, 0.0))).unwrap();
        let z = [c(0.4, 0.1), c(0.0, -0.2)];
        let w = zero.apply(&z).unwrap();
        assert!(norm_sqr(&w) == 0.0);

        // unitary diagonal symbol is accepted
        let theta = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::from_polar(1.0, 0.7),
            Complex64::from_polar(1.0, -1.3),
        ]));
        assert!(Map::linear_map(theta).is_ok());

        let too_big = DMatrix::from_element(1, 1, c(1.5, 0.0));
        assert!(matches!(
            Map::linear_map(too_big),
            Err(Error::NotASelfMap(_))
        ));
    }

    #[test]
    fn component_series_linear_symbol() {
        let v = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.25), c(-0.1, 0.0), c(0.3, 0.0)]);
        let m = Map::linear_map(v.clone()).unwrap();
        for j in 0..2 {
            let s = m.component_series(j, 4).unwrap();
            for k in 0..2 {
                let alpha = MultiIndex::zero(2).bump(k);
                assert_eq!(s.coeff(&alpha), v[(j, k)]);
            }
            assert_eq!(s.support_len(), v.row(j).iter().filter(|x| x.norm() > 0.0).count());
        }
    }

    #[test]
    fn component_series_mobius_half_hand_oracle() {
        // (1/2 − z)/(1 − z/2) = (1/2 − z)·Σ (z/2)^m
        //                     = 1/2 − (3/4) z − (3/8) z² − (3/16) z³ − …
        let m = mobius::<f64>(&[c(0.5, 0.0)]).unwrap();
        let s = m.component_series(0, 5).unwrap();
        let expect = [0.5, -0.75, -0.375, -0.1875, -0.09375, -0.046875];
        for (k, e) in expect.iter().enumerate() {
            let alpha = MultiIndex::new(vec![k as u32]);
            assert!(
                (s.coeff(&alpha) - c(*e, 0.0)).norm() < 1e-15,
                "coefficient {k}"
            );
        }
    }

    #[test]
    fn component_series_converges_pointwise() {
        let mut rng = Lcg(0xabcd);
        let m = mobius(&[c(0.35, 0.1), c(-0.2, 0.05)]).unwrap();
        let mut prev_worst = f64::INFINITY;
        for cutoff in [4usize, 8, 16] {
            let comps: Vec<_> = (0..2)
                .map(|j| m.component_series(j, cutoff).unwrap())
                .collect();
            let mut worst = 0.0f64;
            let mut rng_local = Lcg(rng.0);
            for _ in 0..20 {
                let z = rng_local.ball_point(2, 0.5);
                let exact = m.apply(&z).unwrap();
                for j in 0..2 {
                    worst = worst.max((comps[j].eval(&z) - exact[j]).norm());
                }
            }
            assert!(worst < prev_worst || worst < 1e-13, "no decay at D={cutoff}");
            prev_worst = worst;
        }
        assert!(prev_worst < 1e-6);
    }

    #[test]
    fn real_parameter_gives_real_coefficients() {
        let m = mobius(&[c(0.4, 0.0), c(-0.3, 0.0)]).unwrap();
        for j in 0..2 {
            let s = m.component_series(j, 8).unwrap();
            for (_, coeff) in s.iter() {
                assert!(coeff.im.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn component_formula_two_routes_agree() {
        // Route 1: (A,B,C,d) data from the projection form.
        // Route 2: the expanded component formula
        //   [(1 − t/⟨a,a⟩ + s_a t/⟨a,a⟩) a_j − s_a z_j] / (1 − ⟨z,a⟩),
        //   t = ⟨z,a⟩, built directly out of series arithmetic.
        let a = [c(0.3, -0.25), c(-0.15, 0.2)];
        let cutoff = 7;
        let m = mobius(&a).unwrap();
        let nsq = norm_sqr(&a);
        let s_a = (1.0 - nsq).sqrt();
        let t = crate::series::linear_form(&a, cutoff); // ⟨z, a⟩
        let minus_a: Vec<Complex64> = a.iter().map(|x| -x).collect();
        let recip = reciprocal_affine(c(1.0, 0.0), &minus_a, cutoff).unwrap(); // 1/(1 − ⟨z,a⟩)
        for j in 0..2 {
            let coef = (c(s_a, 0.0) - c(1.0, 0.0)) / c(nsq, 0.0); // (s_a − 1)/⟨a,a⟩
            let mut numerator = t.scale(coef * a[j]);
            numerator.add_to_coeff(MultiIndex::zero(2), a[j]);
            let mut zj = TruncatedSeries::zero(2, cutoff);
            zj.set_coeff(MultiIndex::zero(2).bump(j), c(-s_a, 0.0));
            let numerator = numerator.add(&zj).unwrap();
            let route2 = numerator.mul(&recip).unwrap();
            let route1 = m.component_series(j, cutoff).unwrap();
            assert!(
                route1.max_coeff_diff(&route2) < 1e-14,
                "component {j}: {}",
                route1.max_coeff_diff(&route2)
            );
        }
    }

    #[test]
    fn apply_denominator_matches_scalar_loop() {
        let m = mobius(&[c(0.3, 0.4), c(0.1, -0.2)]).unwrap();
        let z = [c(0.2, -0.1), c(-0.3, 0.25)];
        let mut denom = m.d();
        for j in 0..2 {
            denom += z[j] * m.c_vec()[j].conj();
        }
        let got = m.apply(&z).unwrap();
        let num0 = m.a()[(0, 0)] * z[0] + m.a()[(0, 1)] * z[1] + m.b()[0];
        assert!((got[0] - num0 / denom).norm() < 1e-15);
    }

    #[test]
    fn singular_point_detected() {
        // ψ(z) = z / (1 + 2⟨z, e₁⟩) formally; ‖C‖ < |d| fails, so build
        // a milder map and evaluate where the denominator vanishes:
        // C = −0.5 e₁, d = 1 vanishes at z₁ = 2 — outside the ball, but
        // apply() accepts any point.
        let m = Map::new(
            DMatrix::identity(1, 1),
            DVector::from_element(1, c(0.0, 0.0)),
            DVector::from_element(1, c(-0.5, 0.0)),
            c(1.0, 0.0),
        )
        .unwrap();
        assert!(matches!(m.apply(&[c(2.0, 0.0)]), Err(Error::SingularPoint)));
    }
}

//! Scalar abstraction and small numeric helpers shared across the crate.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the whole crate is generic over: `f32` or `f64`.
///
/// Bundles the `num-traits` float surface with nalgebra's `RealField` so
/// that `Complex<R>` matrices admit SVD and Hermitian eigendecompositions.
pub trait Real:
    nalgebra::RealField + Float + FromPrimitive + ToPrimitive + Copy + Default + std::fmt::LowerExp
{
    /// Converts an `f64` constant, saturating through the usual `as` cast.
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 constant")
    }

    /// Lossy view as `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Hermitian pairing `⟨x, y⟩ = Σ_j x_j · conj(y_j)`.
///
/// The second argument is conjugated, never the first. The linear
/// fractional map denominator `⟨z, C⟩ + d` and the kernel expansions rely
/// on this orientation.
pub fn herm_dot<R: Real>(x: &[Complex<R>], y: &[Complex<R>]) -> Complex<R> {
    assert_eq!(x.len(), y.len(), "herm_dot: length mismatch");
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| a * b.conj())
        .fold(Complex::default(), |acc, t| acc + t)
}

/// Squared Euclidean norm of a complex vector.
pub fn norm_sqr<R: Real>(x: &[Complex<R>]) -> R {
    x.iter().map(|c| c.norm_sqr()).fold(R::zero(), |a, b| a + b)
}

/// Euclidean norm of a complex vector.
pub fn norm<R: Real>(x: &[Complex<R>]) -> R {
    Float::sqrt(norm_sqr(x))
}

/// Rising factorial `(x)_m = x (x+1) ⋯ (x+m−1)`, with `(x)_0 = 1`.
pub fn rising_factorial<R: Real>(x: R, m: usize) -> R {
    let mut acc = R::one();
    let mut term = x;
    for _ in 0..m {
        acc = acc * term;
        term = term + R::one();
    }
    acc
}

/// `m!` as a real scalar.
pub fn factorial<R: Real>(m: usize) -> R {
    rising_factorial(R::one(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn herm_dot_conjugates_second_argument() {
        let x = [Complex64::new(0.0, 1.0)];
        let y = [Complex64::new(0.0, 1.0)];
        // ⟨i, i⟩ = i · conj(i) = 1
        assert_eq!(herm_dot(&x, &y), Complex64::new(1.0, 0.0));
        let z = [Complex64::new(1.0, 0.0)];
        // ⟨1, i⟩ = conj(i) = −i
        assert_eq!(herm_dot(&z, &x), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn rising_factorial_values() {
        assert_eq!(rising_factorial(1.0f64, 4), 24.0); // (1)_4 = 4!
        assert_eq!(rising_factorial(2.0f64, 3), 24.0); // 2·3·4
        assert_eq!(rising_factorial(0.5f64, 0), 1.0);
        assert_eq!(factorial::<f64>(5), 120.0);
    }
}

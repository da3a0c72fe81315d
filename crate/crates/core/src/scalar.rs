//! Two interchangeable scalar backends for the operator algebra.
//!
//! [`Exact`] is a Gaussian rational `a + b·i` with arbitrary-precision
//! rational parts; equality is decidable, so operator identities can be
//! certified exactly at rational sample points.  [`num_complex::Complex64`]
//! is the floating backend used by the solvers.  Generic code is written
//! against the [`Scalar`] trait and runs unchanged on either.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// Errors from scalar field operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Field operations shared by the exact and floating backends.
pub trait Scalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Send
    + Sync
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn try_inv(&self) -> Result<Self, ScalarError>;
    /// Rounds to a complex float; exact for the float backend.
    fn to_complex_f64(&self) -> Complex64;
    /// Equality up to `tol` for floats; exact equality for the exact
    /// backend, where `tol` is ignored.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
}

/// Default relative tolerance for float-backend comparisons.
pub const FLOAT_TOL: f64 = 1e-12;

/// An exact Gaussian rational scalar.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Exact {
    re: BigRational,
    im: BigRational,
}

impl Exact {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Exact { re, im }
    }

    pub fn from_big_rational(re: BigRational) -> Self {
        Exact {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }
}

impl std::ops::Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        if Scalar::is_zero(&self) {
            return rhs;
        }
        if Scalar::is_zero(&rhs) {
            return self;
        }
        Exact {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl std::ops::Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        if Scalar::is_zero(&rhs) {
            return self;
        }
        Exact {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl std::ops::Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        // Pure-real and pure-imaginary operands dominate the operator
        // algebra; branching spares most of the big-rational products.
        let (a_re, a_im) = (self.re.is_zero(), self.im.is_zero());
        let (b_re, b_im) = (rhs.re.is_zero(), rhs.im.is_zero());
        match (a_im, a_re, b_im, b_re) {
            (true, _, true, _) => Exact {
                re: self.re * rhs.re,
                im: BigRational::zero(),
            },
            (true, _, _, true) => Exact {
                re: BigRational::zero(),
                im: self.re * rhs.im,
            },
            (_, true, true, _) => Exact {
                re: BigRational::zero(),
                im: self.im * rhs.re,
            },
            (_, true, _, true) => Exact {
                re: -(self.im * rhs.im),
                im: BigRational::zero(),
            },
            (true, _, _, _) => Exact {
                re: &self.re * &rhs.re,
                im: self.re * rhs.im,
            },
            (_, _, true, _) => Exact {
                re: &self.re * &rhs.re,
                im: self.im * rhs.re,
            },
            (_, true, _, _) => Exact {
                re: -(&self.im * &rhs.im),
                im: self.im * rhs.re,
            },
            (_, _, _, true) => Exact {
                re: -(&self.im * &rhs.im),
                im: self.re * rhs.im,
            },
            _ => Exact {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl std::ops::Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for Exact {
    fn zero() -> Self {
        Exact {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn one() -> Self {
        Exact::from_ratio(1, 1)
    }

    fn i() -> Self {
        Exact {
            re: BigRational::zero(),
            im: BigRational::from(BigInt::from(1)),
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Exact {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conj(&self) -> Self {
        Exact {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn try_inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(Exact {
            re: &self.re / &norm,
            im: -&self.im / &norm,
        })
    }

    fn to_complex_f64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().expect("rational fits in f64"),
            self.im.to_f64().expect("rational fits in f64"),
        )
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }

    fn try_inv(&self) -> Result<Self, ScalarError> {
        if Scalar::is_zero(self) {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.inv())
    }

    fn to_complex_f64(&self) -> Complex64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1.0f64.max(self.norm()).max(other.norm());
        (self - other).norm() <= tol * scale
    }
}

/// Random-rational sampling for the exact identity checks.
///
/// Numerators are drawn from `[-97, 97] \ {0}` and denominators from
/// `[1, 97]`; momentum samples are rejected until they sit off every
/// reflection hyperplane.
pub mod sampling {
    use super::*;
    use crate::weyl;

    pub fn random_rational(rng: &mut impl Rng) -> BigRational {
        let mut num = 0i64;
        while num == 0 {
            num = rng.random_range(-97..=97);
        }
        let den = rng.random_range(1..=97);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    /// A rational momentum vector with `⟨k, α⟩ ≠ 0` for every root.
    pub fn random_generic_momentum(rng: &mut impl Rng) -> [BigRational; 3] {
        loop {
            let k = [
                random_rational(rng),
                random_rational(rng),
                random_rational(rng),
            ];
            if weyl::is_generic_rational(&k) {
                return k;
            }
        }
    }

    /// A nonzero rational coupling pair `(g_s, g_l)`.
    pub fn random_couplings(rng: &mut impl Rng) -> (BigRational, BigRational) {
        (random_rational(rng), random_rational(rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gaussian_product() {
        // (1 + i)(1 − i) = 2
        let one_plus_i = Exact::one() + Exact::i();
        let one_minus_i = Exact::one() - Exact::i();
        assert_eq!(one_plus_i * one_minus_i, Exact::from_ratio(2, 1));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(Exact::zero().try_inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(
            Scalar::try_inv(&Complex64::new(0.0, 0.0)),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn exact_thirds_sum_to_one() {
        let sum = Exact::from_ratio(2, 3) + Exact::from_ratio(1, 3);
        assert_eq!(sum, Exact::one());
    }

    #[test]
    fn field_axioms_hold_exactly_on_random_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let a = Exact::new(
                sampling::random_rational(&mut rng),
                sampling::random_rational(&mut rng),
            );
            let b = Exact::new(
                sampling::random_rational(&mut rng),
                sampling::random_rational(&mut rng),
            );
            let c = Exact::new(
                sampling::random_rational(&mut rng),
                sampling::random_rational(&mut rng),
            );
            assert_eq!(
                (a.clone() * b.clone()) * c.clone(),
                a.clone() * (b.clone() * c.clone())
            );
            assert_eq!(a.try_inv().unwrap() * a.clone(), Exact::one());
            assert_eq!(
                a.clone() * (b.clone() + c.clone()),
                a.clone() * b.clone() + a.clone() * c.clone()
            );
        }
    }

    #[test]
    fn exact_rounds_to_float() {
        let x = Exact::from_ratio(-3, 4) + Exact::i() * Exact::from_ratio(1, 8);
        let z = x.to_complex_f64();
        assert_eq!(z, Complex64::new(-0.75, 0.125));
    }

    #[test]
    fn float_approx_eq_is_relative() {
        let a = Complex64::new(1e6, 0.0);
        let b = Complex64::new(1e6 + 1e-7, 0.0);
        assert!(a.approx_eq(&b, 1e-12));
        assert!(!a.approx_eq(&Complex64::new(1e6 + 1.0, 0.0), 1e-12));
    }

    #[test]
    fn sampled_momenta_are_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let k = sampling::random_generic_momentum(&mut rng);
            assert!(crate::weyl::is_generic_rational(&k));
        }
    }
}

//! Scalar kernels.
//!
//! Everything algebraic in this crate is generic over [`Scalar`], which has
//! exactly two implementations: `f64`, and arbitrary-precision rationals
//! ([`Rational`]).  Connection, curvature and every residual formula are
//! polynomial in the structure constants and the field components, so
//! rational inputs stay rational all the way through and identity checks can
//! assert literal zeros instead of small floats.
//!
//! The float kernel compares against [`Tol::algebraic`]; the exact kernel
//! ignores tolerances entirely.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational scalar.  Sixth-order curvature expressions on
/// models with denominators up to 10 overflow i64 intermediates, so the
/// integer backing must be a bignum.
pub type Rational = num::BigRational;

/// Tolerance context for float-kernel decisions.
#[derive(Clone, Copy, Debug)]
pub struct Tol {
    /// Absolute tolerance on algebraic residuals and case dispatch.
    pub algebraic: f64,
}

impl Tol {
    pub const DEFAULT_ALGEBRAIC: f64 = 1e-10;

    pub fn new(algebraic: f64) -> Self {
        Tol { algebraic }
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol::new(Tol::DEFAULT_ALGEBRAIC)
    }
}

/// Common interface of the two scalar kernels.
///
/// Arithmetic is by value; operands are cloned at call sites where reuse is
/// needed.  For `f64` clones are copies, for [`Rational`] they are refcount
/// bumps on the digit storage plus small allocations, cheap next to the
/// arithmetic itself.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
{
    /// True when arithmetic in this kernel is exact.
    const EXACT: bool;

    fn from_int(n: i64) -> Self;

    /// `num/den` as an exact ratio.  Panics on `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn abs(&self) -> Self;

    /// Square root when one exists inside the kernel.  Rationals: both
    /// numerator and denominator must be perfect squares.  Floats: any
    /// nonnegative value qualifies.
    fn sqrt_exact(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Zero test: literal for the exact kernel, `|x| <= tol.algebraic` for
    /// floats.
    fn is_negligible(&self, tol: &Tol) -> bool;

    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(f64::sqrt(*self))
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, tol: &Tol) -> bool {
        f64::abs(*self) <= tol.algebraic
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        // Ratio keeps the denominator positive and the fraction reduced, so
        // it suffices that both parts are perfect squares.
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        num::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, _tol: &Tol) -> bool {
        self.is_zero()
    }
}

/// Parse a scalar from integer or `p/q` text.  Used by catalog constructors
/// and the CLI; floats take the float path in the CLI instead.
pub fn ratio_from_str<S: Scalar>(text: &str) -> Option<S> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(S::from_ratio(p, q))
    } else {
        let p: i64 = t.parse().ok()?;
        Some(S::from_int(p))
    }
}

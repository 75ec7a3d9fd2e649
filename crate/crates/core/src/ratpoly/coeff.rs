use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Complex floating point value used wherever irrational or non-real
/// quantities enter a computation.
pub type ComplexValue = Complex64;

/// Coefficient field of a [`Poly`](super::Poly).
///
/// Implemented for exact rationals and for complex doubles. Code that is
/// generic over `Coeff` runs exactly when instantiated with [`Rational`] and
/// falls back to tolerance-based zero tests for [`ComplexValue`].
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn to_complex(&self) -> ComplexValue;

    fn magnitude(&self) -> f64;

    /// Zero test relative to `scale`. Exact coefficients ignore the scale.
    fn negligible(&self, scale: f64) -> bool;

    /// The value as an exact rational, when it is one.
    fn as_rational(&self) -> Option<Rational>;

    /// A float value in this coefficient type, when representable.
    fn from_complex(z: ComplexValue) -> Option<Self>;
}

/// Relative tolerance used for float zero tests throughout the crate.
pub const FLOAT_ZERO_TOL: f64 = 1e-9;

impl Coeff for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_complex(&self) -> ComplexValue {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn from_complex(_z: ComplexValue) -> Option<Self> {
        None
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }

    fn to_complex(&self) -> ComplexValue {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_ZERO_TOL * scale.max(1e-300)
    }

    fn as_rational(&self) -> Option<Rational> {
        None
    }

    fn from_complex(z: ComplexValue) -> Option<Self> {
        Some(z)
    }
}

/// Converts a rational to the nearest double without overflowing on large
/// numerators and denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Both parts may exceed f64 range; shift them into range first.
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = (nb - db).clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        Rational::new(n.clone(), d.clone() << (shift as usize))
    } else {
        Rational::new(n.clone() << ((-shift) as usize), d.clone())
    };
    let base = scaled.to_f64().unwrap_or(0.0);
    base * 2f64.powi(shift as i32)
}

/// Exact conversion of a finite double into a rational.
pub fn f64_to_rational(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient ring for [`Polynomial`](super::Polynomial).
///
/// Two instantiations exist: exact big rationals for symbolic checks and
/// `Complex64` for the numeric solver path.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_integer(n: i64) -> Self;

    fn to_complex(&self) -> Complex64;

    /// Text form used by the canonical serialization.
    fn render(&self) -> String;
}

impl Coefficient for BigRational {
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Coefficient for Complex64 {
    fn from_integer(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.im < 0.0 {
            format!("({}-{}i)", self.re, -self.im)
        } else {
            format!("({}+{}i)", self.re, self.im)
        }
    }
}

/// Nearest `f64`; falls back to a scaled quotient when numerator and
/// denominator overflow individually.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

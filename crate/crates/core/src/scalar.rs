//! Scalar traits shared by configurations, polynomials and the numerical code.
//!
//! [`Scalar`] is the coefficient ring: `f32`, `f64` or exact [`BigRational`].
//! [`Real`] adds the floating-point operations needed by every evaluation
//! routine in [`crate::model`], [`crate::linalg`] and [`crate::classify`].

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, One, ToPrimitive, Zero};

/// A coefficient ring usable in configurations and polynomial systems.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + ToPrimitive
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// Whether the arithmetic of this type is exact.
    const EXACT: bool;

    /// Coefficient string used in serialized systems: an integer, `num/den`,
    /// or a 17-significant-digit decimal for floating types.
    fn to_coeff_string(&self) -> String;

    /// Inverse of [`Scalar::to_coeff_string`]; also accepts plain decimals.
    fn parse_coeff(s: &str) -> Option<Self>;

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        self.approx_f64().is_finite()
    }

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

/// Floating-point scalar.
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in every Real type")
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn to_coeff_string(&self) -> String {
                format_f64(*self as f64)
            }

            fn parse_coeff(s: &str) -> Option<Self> {
                parse_rational(s)
                    .and_then(|r| r.to_f64())
                    .or_else(|| s.trim().parse::<f64>().ok())
                    .map(|x| x as $t)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn to_coeff_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn parse_coeff(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

/// Formats a float with 17 significant digits, enough for exact round trip.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses `"a/b"`, an integer, or a finite decimal (with optional exponent)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut numer = BigInt::from_str(&format!("0{int_part}{frac_part}")).ok()?;
    if negative {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    Some(value)
}

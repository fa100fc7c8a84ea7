//! Exact upper bounds on the number of isolated zeros of polynomial systems.
//!
//! Every bound is an instance of `k (2k - 1)^{v - 1}` for a system of
//! polynomials of degree at most `k` in `v` variables. Each specialized
//! formula is evaluated as written and carries the `(k, v)` pair it
//! instantiates, so the two can be compared exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn new(value: BigUint) -> Self {
        Self(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Whether `count <= self`.
    pub fn admits(&self, count: usize) -> bool {
        BigUint::from(count) <= self.0
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for BigCount {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BigUint::from_str(s.trim())
            .map(Self)
            .map_err(|_| Error::InvalidArgument(format!("not a nonnegative integer: {s:?}")))
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Degree cap `k` and variable count `v` of the system a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub degree: u64,
    #[serde(rename = "numVars")]
    pub num_vars: u64,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k = {}, v = {}", self.degree, self.num_vars)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: BigCount,
    pub certificate: Certificate,
}

/// `k (2k - 1)^{v - 1}`.
pub fn thom_milnor(k: u64, num_vars: u64) -> Result<BigCount> {
    if k == 0 || num_vars == 0 {
        return Err(Error::InvalidArgument("degree and variable count must be positive".into()));
    }
    let base = BigUint::from(k) * 2u32 - 1u32;
    Ok(BigCount(BigUint::from(k) * pow(base, num_vars - 1)?))
}

fn pow(base: BigUint, exp: u64) -> Result<BigUint> {
    let exp = u32::try_from(exp).map_err(|_| Error::InvalidArgument("exponent too large".into()))?;
    Ok(if exp == 0 { BigUint::one() } else { Pow::pow(base, exp) })
}

fn positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be positive")));
    }
    Ok(())
}

fn checked(v: Option<u64>) -> Result<u64> {
    v.ok_or_else(|| Error::InvalidArgument("arguments too large".into()))
}

/// `(1 + (n-1)(m+2)) (1 + 2(n-1)(m+2))^{d-1}` for even `m`.
pub fn bound_maxwell_even(n: u64, m: u64, d: u64) -> Result<Bound> {
    positive("n", n)?;
    positive("d", d)?;
    if m % 2 == 1 {
        return Err(Error::OddExponent(u32::try_from(m).unwrap_or(u32::MAX)));
    }
    let step = BigUint::from(n - 1) * (m + 2);
    let value = (BigUint::one() + &step) * pow(BigUint::one() + step * 2u32, d - 1)?;
    let degree = checked((n - 1).checked_mul(m + 2).and_then(|x| x.checked_add(1)))?;
    Ok(Bound { value: BigCount(value), certificate: Certificate { degree, num_vars: d } })
}

/// `(m + 4)(2m + 7)^{d + n}`, valid for every `m`.
pub fn bound_maxwell_general(n: u64, m: u64, d: u64) -> Result<Bound> {
    positive("n", n)?;
    positive("d", d)?;
    let value = BigUint::from(m + 4) * pow(BigUint::from(2 * m + 7), d + n)?;
    Ok(Bound { value: BigCount(value), certificate: Certificate { degree: m + 4, num_vars: d + n + 1 } })
}

/// `(α(2n - 1) - 1)(2α(2n - 1) - 3)^{d-1}` for even `α`.
pub fn bound_sinr(n: u64, alpha: u64, d: u64) -> Result<Bound> {
    positive("n", n)?;
    positive("d", d)?;
    positive("alpha", alpha)?;
    if alpha % 2 == 1 {
        return Err(Error::OddExponent(u32::try_from(alpha).unwrap_or(u32::MAX)));
    }
    let a = BigUint::from(alpha) * (2 * n - 1);
    let value = (&a - 1u32) * pow(a * 2u32 - 3u32, d - 1)?;
    let degree = checked(alpha.checked_mul(2 * n - 1))? - 1;
    Ok(Bound { value: BigCount(value), certificate: Certificate { degree, num_vars: d } })
}

/// Which of the two published Newton-problem bounds to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NewtonBoundVariant {
    /// `4 · 7^{d+n}`, from the degree-4 slack system.
    #[default]
    Theorem,
    /// `(1 + 3n)(1 + 6n)^{d+n}`, the alternate closed form.
    Summary,
}

pub fn bound_newton(n: u64, d: u64) -> Result<Bound> {
    bound_newton_variant(n, d, NewtonBoundVariant::Theorem)
}

pub fn bound_newton_variant(n: u64, d: u64, variant: NewtonBoundVariant) -> Result<Bound> {
    positive("n", n)?;
    positive("d", d)?;
    Ok(match variant {
        NewtonBoundVariant::Theorem => Bound {
            value: BigCount(BigUint::from(4u32) * pow(BigUint::from(7u32), d + n)?),
            certificate: Certificate { degree: 4, num_vars: d + n + 1 },
        },
        NewtonBoundVariant::Summary => Bound {
            value: BigCount(BigUint::from(1 + 3 * n) * pow(BigUint::from(1 + 6 * n), d + n)?),
            certificate: Certificate { degree: 1 + 3 * n, num_vars: d + n + 1 },
        },
    })
}

/// `4 · 7^{n(n-1)/2 + nd - 1}` isolated central configurations.
pub fn bound_central(n: u64, d: u64) -> Result<Bound> {
    if n < 2 {
        return Err(Error::InvalidArgument("central configurations need n ≥ 2".into()));
    }
    positive("d", d)?;
    let vars = n * (n - 1) / 2 + n * d;
    Ok(Bound {
        value: BigCount(BigUint::from(4u32) * pow(BigUint::from(7u32), vars - 1)?),
        certificate: Certificate { degree: 4, num_vars: vars },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn val(b: Result<Bound>) -> String {
        b.unwrap().value.to_string()
    }

    #[test]
    fn thom_milnor_values() {
        assert_eq!(thom_milnor(1, 5).unwrap().to_string(), "1");
        assert_eq!(thom_milnor(2, 3).unwrap().to_string(), "18");
        assert_eq!(thom_milnor(2, 4).unwrap().to_string(), "54");
        assert_eq!(thom_milnor(3, 1).unwrap().to_string(), "3");
        assert!(thom_milnor(0, 1).is_err());
        assert!(thom_milnor(1, 0).is_err());
    }

    #[test]
    fn maxwell_values() {
        assert_eq!(val(bound_maxwell_even(2, 2, 2)), "45");
        assert_eq!(val(bound_maxwell_even(1, 0, 7)), "1");
        assert_eq!(val(bound_maxwell_even(3, 2, 3)), "2601");
        assert_eq!(bound_maxwell_even(2, 1, 2), Err(Error::OddExponent(1)));
        assert_eq!(val(bound_maxwell_general(2, 1, 3)), "295245");
        assert_eq!(val(bound_maxwell_general(1, 0, 1)), "196");
    }

    #[test]
    fn sinr_values() {
        assert_eq!(val(bound_sinr(2, 2, 2)), "45");
        assert_eq!(val(bound_sinr(2, 2, 3)), "405");
        assert_eq!(val(bound_sinr(1, 2, 2)), "1");
        assert_eq!(bound_sinr(2, 3, 2), Err(Error::OddExponent(3)));
    }

    #[test]
    fn newton_values() {
        assert_eq!(val(bound_newton(2, 2)), "9604");
        assert_eq!(val(bound_newton(1, 1)), "196");
        assert_eq!(val(bound_newton_variant(1, 1, NewtonBoundVariant::Summary)), "196");
        assert_ne!(bound_newton_variant(2, 1, NewtonBoundVariant::Summary), bound_newton(2, 1));
    }

    #[test]
    fn central_values() {
        assert_eq!(val(bound_central(2, 1)), "196");
        assert_eq!(val(bound_central(3, 2)), "23059204");
        assert_eq!(val(bound_central(4, 3)), (BigUint::from(4u32) * Pow::pow(BigUint::from(7u32), 17u32)).to_string());
        assert!(bound_central(1, 3).is_err());
        // 64 digits: far beyond 64-bit integers
        assert_eq!(val(bound_central(10, 3)).len(), 64);
    }

    proptest! {
        #[test]
        fn decimal_round_trip(k in 1u64..40, v in 1u64..30) {
            let b = thom_milnor(k, v).unwrap();
            let s = serde_json::to_string(&b).unwrap();
            prop_assert_eq!(serde_json::from_str::<BigCount>(&s).unwrap(), b);
        }
    }
}

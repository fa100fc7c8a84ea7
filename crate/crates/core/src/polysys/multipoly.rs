use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial over a coefficient ring `C`.
///
/// Terms are kept in a `BTreeMap`, so iteration order (and therefore
/// serialization) is deterministic. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<C> {
    num_vars: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: C) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, C::one())
    }

    /// The polynomial `x_var`.
    pub fn var(num_vars: usize, var: usize) -> Self {
        assert!(var < num_vars, "variable index out of range");
        let mut e = vec![0; num_vars];
        e[var] = 1;
        let mut p = Self::zero(num_vars);
        p.add_term(e, C::one());
        p
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Result<Self> {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::DimensionMismatch { expected: num_vars, got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Option<&C> {
        self.terms.get(e)
    }

    /// Max total degree over the terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut p = Self::zero(self.num_vars);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a.clone() * c.clone());
        }
        p
    }

    /// Power by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.num_vars);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            let k = C::from_u32(e[var]).expect("exponent fits the coefficient type");
            p.add_term(e2, c.clone() * k);
        }
        p
    }

    /// Sparse evaluation: powers of each variable are tabulated once, then
    /// every term costs one product per variable. Exact for exact `C`.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: point.len() });
        }
        let powers = self.power_table(point);
        Ok(self.terms.iter().fold(C::zero(), |acc, (e, c)| {
            let mono = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .fold(c.clone(), |m, (v, &k)| m * powers[v][k as usize].clone());
            acc + mono
        }))
    }

    fn power_table(&self, point: &[C]) -> Vec<Vec<C>> {
        let mut max_exp = vec![0u32; self.num_vars];
        for e in self.terms.keys() {
            for (m, &k) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        point
            .iter()
            .zip(&max_exp)
            .map(|(x, &m)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                row.push(C::one());
                for k in 1..=m as usize {
                    let next = row[k - 1].clone() * x.clone();
                    row.push(next);
                }
                row
            })
            .collect()
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut p = MultiPoly::zero(self.num_vars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }
}

impl<C: Real> MultiPoly<C> {
    /// `Σ |c_e| |x^e|`: the magnitude against which a floating-point
    /// evaluation of this polynomial should be judged.
    pub fn eval_abs(&self, point: &[C]) -> Result<C> {
        let abs: Vec<C> = point.iter().map(|x| x.abs()).collect();
        self.map_coeffs(|c| c.abs()).eval(&abs)
    }
}

impl<C: Scalar> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl<C: Scalar> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl<C: Scalar> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut p = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca.clone() * cb.clone());
            }
        }
        p
    }
}

impl<C: Scalar> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.scale(&-C::one())
    }
}

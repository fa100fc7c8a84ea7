//! Potentials of the four equilibrium problems and their analytic derivatives.
//!
//! Every family is evaluated in floating point ([`Real`]); configurations are
//! generic over [`Scalar`] so that the same validated parameters can also feed
//! the exact polynomial builders in [`crate::polysys`].

mod central;
mod maxwell;
mod newton;
mod sinr;

use std::ops::Deref;

pub use central::{
    central_jacobian, central_residual, central_residual_flat, central_residual_scale, CentralConfig,
    MassConvention,
};
pub use maxwell::{
    eval_maxwell, grad_maxwell, hessian_maxwell, maxwell_grad_constant, mixed_jacobian, MaxwellConfig,
};
pub use newton::{eval_newton, grad_newton, hessian_newton, NewtonConfig};
pub use sinr::{eval_sinr, grad_sinr, hessian_sinr, InverseSinr, SinrConfig};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{lit, Real, Scalar};

/// Exclusion radius around each site, relative to the configuration scale.
pub const EXCLUSION_FACTOR: f64 = 1e-9;

/// A point of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T>(Vec<T>);

impl<T> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Point<U> {
        Point(self.0.iter().map(f).collect())
    }
}

impl<T> Deref for Point<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> From<Vec<T>> for Point<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

/// A scalar field with analytic first and second derivatives.
pub trait Potential<T: Real> {
    fn dim(&self) -> usize;
    fn value(&self, p: &[T]) -> Result<T>;
    fn gradient(&self, p: &[T]) -> Result<Vec<T>>;
    fn hessian(&self, p: &[T]) -> Result<Matrix<T>>;
    /// Sum of the magnitudes of the individual contributions to the gradient.
    /// A critical point is judged against this, which makes the residual test
    /// scale-free.
    fn gradient_scale(&self, p: &[T]) -> Result<T>;
    fn sites(&self) -> &[Point<T>];
    fn exclusion_radius(&self) -> f64;
}

/// Max pairwise distance of the sites, or 1 for a single site.
pub fn configuration_scale<T: Scalar>(sites: &[Point<T>]) -> f64 {
    let mut scale: f64 = 0.0;
    for (i, a) in sites.iter().enumerate() {
        for b in &sites[i + 1..] {
            let d2: f64 = a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| {
                    let t = x.approx_f64() - y.approx_f64();
                    t * t
                })
                .sum();
            scale = scale.max(d2.sqrt());
        }
    }
    if scale > 0.0 {
        scale
    } else {
        1.0
    }
}

pub(crate) fn validate_sites<T: Scalar>(dim: usize, sites: &[Point<T>]) -> Result<()> {
    if dim == 0 {
        return Err(Error::Validation("d ≥ 1".into()));
    }
    if sites.is_empty() {
        return Err(Error::Validation("n ≥ 1".into()));
    }
    for (i, s) in sites.iter().enumerate() {
        if s.dim() != dim {
            return Err(Error::Validation(format!("site {} must have {dim} coordinates", i + 1)));
        }
        if !s.iter().all(Scalar::is_finite_value) {
            return Err(Error::Validation(format!("site {} has non-finite coordinates", i + 1)));
        }
    }
    for i in 0..sites.len() {
        for j in (i + 1)..sites.len() {
            if sites[i] == sites[j] {
                return Err(Error::Validation(format!(
                    "sites pairwise distinct (sites {} and {} coincide)",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_len<T>(p: &[T], dim: usize) -> Result<()> {
    if p.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    Ok(())
}

/// Fails with `SingularPoint` when `p` is within `radius` of a site.
pub(crate) fn check_clear<T: Real>(sites: &[Point<T>], p: &[T], radius: f64) -> Result<()> {
    let r2 = lit::<T>(radius * radius);
    for (i, s) in sites.iter().enumerate() {
        let d2 = s.iter().zip(p).fold(T::zero(), |acc, (&x, &y)| acc + (y - x) * (y - x));
        if d2 <= r2 {
            return Err(Error::SingularPoint { site: i });
        }
    }
    Ok(())
}

/// One point-source term `q·|p - x|^{-m}` (or `q·log|p - x|` for `m = 0`)
/// evaluated at `p`.
pub(crate) struct PowerTerm<T> {
    pub diff: Vec<T>,
    pub dist: T,
    pub weight: T,
    pub exponent: u32,
}

impl<T: Real> PowerTerm<T> {
    pub fn new(site: &[T], weight: T, exponent: u32, p: &[T]) -> Self {
        let diff: Vec<T> = p.iter().zip(site).map(|(&a, &b)| a - b).collect();
        let dist = diff.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        Self { diff, dist, weight, exponent }
    }

    pub fn value(&self) -> T {
        if self.exponent == 0 {
            self.weight * self.dist.ln()
        } else {
            self.weight * self.dist.powi(-(self.exponent as i32))
        }
    }

    /// `c(m) q / r^{m+2}`, the common factor of gradient and Hessian.
    fn factor(&self) -> T {
        maxwell_grad_constant::<T>(self.exponent) * self.weight * self.dist.powi(-(self.exponent as i32 + 2))
    }

    pub fn add_gradient(&self, acc: &mut [T]) {
        let f = self.factor();
        for (a, &x) in acc.iter_mut().zip(&self.diff) {
            *a = *a + f * x;
        }
    }

    pub fn gradient_norm(&self) -> T {
        self.factor().abs() * self.dist
    }

    pub fn add_hessian(&self, acc: &mut Matrix<T>) {
        let f = self.factor();
        let m2 = lit::<T>(self.exponent as f64 + 2.0);
        let inv_r2 = (self.dist * self.dist).recip();
        for i in 0..self.diff.len() {
            acc[(i, i)] = acc[(i, i)] + f;
        }
        acc.add_outer(-f * m2 * inv_r2, &self.diff, &self.diff);
    }
}

/// Gradient and Hessian of a quotient `num / den` from the jets of its parts.
pub(crate) struct Jet<T> {
    pub value: T,
    pub grad: Vec<T>,
    pub hess: Matrix<T>,
}

impl<T: Real> Jet<T> {
    pub fn quotient(num: &Jet<T>, den: &Jet<T>) -> Jet<T> {
        let d = num.grad.len();
        let s = num.value / den.value;
        let grad: Vec<T> = (0..d).map(|k| (num.grad[k] - s * den.grad[k]) / den.value).collect();
        let hess = Matrix::from_fn_symmetric(d, |k, l| {
            (num.hess[(k, l)] - s * den.hess[(k, l)] - grad[k] * den.grad[l] - grad[l] * den.grad[k])
                / den.value
        });
        Jet { value: s, grad, hess }
    }
}

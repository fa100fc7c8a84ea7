use super::{check_clear, check_len, configuration_scale, validate_sites, Point, Potential, PowerTerm, EXCLUSION_FACTOR};
use crate::error::{Error, Result};
use crate::linalg::{norm, Matrix};
use crate::scalar::{Real, Scalar};

/// Point masses with an added quadratic term:
/// `F(p) = ½|p|² + Σ m_i / |p - x_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonConfig<T> {
    dim: usize,
    sites: Vec<Point<T>>,
    masses: Vec<T>,
    scale: f64,
}

impl<T: Scalar> NewtonConfig<T> {
    pub fn new(dim: usize, sites: Vec<Point<T>>, masses: Vec<T>) -> Result<Self> {
        validate_sites(dim, &sites)?;
        if masses.len() != sites.len() {
            return Err(Error::Validation("one mass per site".into()));
        }
        if let Some(i) = masses.iter().position(|m| *m <= T::zero() || !m.is_finite_value()) {
            return Err(Error::Validation(format!("m_i > 0 (mass {} is not positive)", i + 1)));
        }
        let scale = configuration_scale(&sites);
        Ok(Self { dim, sites, masses, scale })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Point<T>] {
        &self.sites
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> NewtonConfig<U> {
        NewtonConfig {
            dim: self.dim,
            sites: self.sites.iter().map(|s| s.map(&f)).collect(),
            masses: self.masses.iter().map(&f).collect(),
            scale: self.scale,
        }
    }
}

impl<T: Real> NewtonConfig<T> {
    fn terms<'a>(&'a self, p: &'a [T]) -> impl Iterator<Item = PowerTerm<T>> + 'a {
        self.sites.iter().zip(&self.masses).map(move |(x, &m)| PowerTerm::new(x, m, 1, p))
    }

    fn prepare(&self, p: &[T]) -> Result<()> {
        check_len(p, self.dim)?;
        check_clear(&self.sites, p, self.exclusion_radius())
    }
}

impl<T: Real> Potential<T> for NewtonConfig<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, p: &[T]) -> Result<T> {
        self.prepare(p)?;
        let half = T::one() / (T::one() + T::one());
        let quad = half * p.iter().fold(T::zero(), |acc, &x| acc + x * x);
        Ok(self.terms(p).fold(quad, |acc, t| acc + t.value()))
    }

    fn gradient(&self, p: &[T]) -> Result<Vec<T>> {
        self.prepare(p)?;
        let mut g = p.to_vec();
        self.terms(p).for_each(|t| t.add_gradient(&mut g));
        Ok(g)
    }

    fn hessian(&self, p: &[T]) -> Result<Matrix<T>> {
        self.prepare(p)?;
        let mut h = Matrix::identity(self.dim);
        self.terms(p).for_each(|t| t.add_hessian(&mut h));
        h.mirror_upper();
        Ok(h)
    }

    fn gradient_scale(&self, p: &[T]) -> Result<T> {
        self.prepare(p)?;
        Ok(self.terms(p).fold(norm(p), |acc, t| acc + t.gradient_norm()))
    }

    fn sites(&self) -> &[Point<T>] {
        &self.sites
    }

    fn exclusion_radius(&self) -> f64 {
        EXCLUSION_FACTOR * self.scale
    }
}

pub fn eval_newton<T: Real>(cfg: &NewtonConfig<T>, p: &[T]) -> Result<T> {
    cfg.value(p)
}

pub fn grad_newton<T: Real>(cfg: &NewtonConfig<T>, p: &[T]) -> Result<Vec<T>> {
    cfg.gradient(p)
}

pub fn hessian_newton<T: Real>(cfg: &NewtonConfig<T>, p: &[T]) -> Result<Matrix<T>> {
    cfg.hessian(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_mass(dim: usize) -> NewtonConfig<f64> {
        NewtonConfig::new(dim, vec![Point::new(vec![0.0; dim])], vec![1.0]).unwrap()
    }

    #[test]
    fn unit_sphere_is_critical() {
        let c = unit_mass(2);
        let g = grad_newton(&c, &[0.6, 0.8]).unwrap();
        assert!(g.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn gradient_off_the_sphere() {
        let g = grad_newton(&unit_mass(2), &[2.0, 0.0]).unwrap();
        assert_eq!(g, vec![1.75, 0.0]);
    }

    #[test]
    fn hessian_on_the_sphere_has_tangent_zero_modes() {
        let h = hessian_newton(&unit_mass(3), &[0.0, 0.0, 1.0]).unwrap();
        assert!((h[(2, 2)] - 3.0).abs() < 1e-15);
        assert!(h[(0, 0)].abs() < 1e-15 && h[(1, 1)].abs() < 1e-15);
    }

    #[test]
    fn masses_must_be_positive() {
        let r = NewtonConfig::new(1, vec![Point::new(vec![0.0])], vec![-1.0]);
        assert!(matches!(r, Err(Error::Validation(m)) if m.contains("m_i > 0")));
    }
}

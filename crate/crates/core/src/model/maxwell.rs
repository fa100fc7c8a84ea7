use super::{check_clear, check_len, configuration_scale, validate_sites, Point, Potential, PowerTerm, EXCLUSION_FACTOR};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{lit, Real, Scalar};

/// Point charges `q_i` at `x_i` generating `V(p) = Σ q_i |p - x_i|^{-m}`
/// (`Σ q_i log|p - x_i|` when `m = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellConfig<T> {
    dim: usize,
    sites: Vec<Point<T>>,
    charges: Vec<T>,
    exponent: u32,
    scale: f64,
}

impl<T: Scalar> MaxwellConfig<T> {
    pub fn new(dim: usize, sites: Vec<Point<T>>, charges: Vec<T>, exponent: u32) -> Result<Self> {
        validate_sites(dim, &sites)?;
        if charges.len() != sites.len() {
            return Err(Error::Validation(format!(
                "one charge per site ({} sites, {} charges)",
                sites.len(),
                charges.len()
            )));
        }
        if let Some(i) = charges.iter().position(|q| q.is_zero() || !q.is_finite_value()) {
            return Err(Error::Validation(format!("|q_i| > 0 (charge {} is zero)", i + 1)));
        }
        let scale = configuration_scale(&sites);
        Ok(Self { dim, sites, charges, exponent, scale })
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

    pub fn charges(&self) -> &[T] {
        &self.charges
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Max pairwise site distance (1 for a single site).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MaxwellConfig<U> {
        MaxwellConfig {
            dim: self.dim,
            sites: self.sites.iter().map(|s| s.map(&f)).collect(),
            charges: self.charges.iter().map(&f).collect(),
            exponent: self.exponent,
            scale: self.scale,
        }
    }
}

/// The constant `c(m)` in `∇V = c(m) Σ q_i (p - x_i) / |p - x_i|^{m+2}`:
/// `-m` for `m > 0` and `1` for the logarithmic potential.
pub fn maxwell_grad_constant<T: Real>(m: u32) -> T {
    if m == 0 {
        T::one()
    } else {
        -lit::<T>(m as f64)
    }
}

impl<T: Real> MaxwellConfig<T> {
    fn terms<'a>(&'a self, p: &'a [T]) -> impl Iterator<Item = PowerTerm<T>> + 'a {
        self.sites
            .iter()
            .zip(&self.charges)
            .map(move |(x, &q)| PowerTerm::new(x, q, self.exponent, p))
    }

    fn prepare(&self, p: &[T]) -> Result<()> {
        check_len(p, self.dim)?;
        check_clear(&self.sites, p, self.exclusion_radius())
    }
}

impl<T: Real> Potential<T> for MaxwellConfig<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, p: &[T]) -> Result<T> {
        self.prepare(p)?;
        Ok(self.terms(p).fold(T::zero(), |acc, t| acc + t.value()))
    }

    fn gradient(&self, p: &[T]) -> Result<Vec<T>> {
        self.prepare(p)?;
        let mut g = vec![T::zero(); self.dim];
        self.terms(p).for_each(|t| t.add_gradient(&mut g));
        Ok(g)
    }

    fn hessian(&self, p: &[T]) -> Result<Matrix<T>> {
        self.prepare(p)?;
        let mut h = Matrix::zeros(self.dim, self.dim);
        self.terms(p).for_each(|t| t.add_hessian(&mut h));
        h.mirror_upper();
        Ok(h)
    }

    fn gradient_scale(&self, p: &[T]) -> Result<T> {
        self.prepare(p)?;
        Ok(self.terms(p).fold(T::zero(), |acc, t| acc + t.gradient_norm()))
    }

    fn sites(&self) -> &[Point<T>] {
        &self.sites
    }

    fn exclusion_radius(&self) -> f64 {
        EXCLUSION_FACTOR * self.scale
    }
}

pub fn eval_maxwell<T: Real>(cfg: &MaxwellConfig<T>, p: &[T]) -> Result<T> {
    cfg.value(p)
}

pub fn grad_maxwell<T: Real>(cfg: &MaxwellConfig<T>, p: &[T]) -> Result<Vec<T>> {
    cfg.gradient(p)
}

pub fn hessian_maxwell<T: Real>(cfg: &MaxwellConfig<T>, p: &[T]) -> Result<Matrix<T>> {
    cfg.hessian(p)
}

/// `∂²U/∂p_j ∂a_k`, where `U(p, a)` is the potential with site `h` moved to `a`.
///
/// Written entrywise; it agrees with `-c(m) q_h |p - a|^{-(m+2)} (I - (m+2) v vᵀ)`,
/// `v = (p - a)/|p - a|`, which has full rank `d` for every `m ≥ 0`.
pub fn mixed_jacobian<T: Real>(cfg: &MaxwellConfig<T>, p: &[T], h: usize) -> Result<Matrix<T>> {
    check_len(p, cfg.dim)?;
    let a = cfg
        .sites
        .get(h)
        .ok_or_else(|| Error::InvalidArgument(format!("site index {h} out of range")))?;
    check_clear(std::slice::from_ref(a), p, cfg.exclusion_radius()).map_err(|_| Error::SingularPoint { site: h })?;
    let m = cfg.exponent;
    let q = cfg.charges[h];
    let c = maxwell_grad_constant::<T>(m);
    let diff: Vec<T> = p.iter().zip(a.iter()).map(|(&x, &y)| x - y).collect();
    let r2 = diff.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let r = r2.sqrt();
    let m2 = lit::<T>(m as f64 + 2.0);
    let inv_m2 = r.powi(-(m as i32 + 2));
    let inv_m4 = r.powi(-(m as i32 + 4));
    Ok(Matrix::from_fn(cfg.dim, cfg.dim, |j, k| {
        // d/da_k of c q (p_j - a_j) r^{-(m+2)}
        let off = c * m2 * q * diff[j] * diff[k] * inv_m4;
        if j == k {
            off - c * q * inv_m2
        } else {
            off
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jacobi_eigen;

    fn cfg(dim: usize, sites: &[&[f64]], q: &[f64], m: u32) -> MaxwellConfig<f64> {
        MaxwellConfig::new(dim, sites.iter().map(|s| Point::new(s.to_vec())).collect(), q.to_vec(), m).unwrap()
    }

    #[test]
    fn single_charge_values() {
        let c = cfg(1, &[&[0.0]], &[1.0], 2);
        assert_eq!(eval_maxwell(&c, &[2.0]).unwrap(), 0.25);
        assert_eq!(grad_maxwell(&c, &[1.0]).unwrap(), vec![-2.0]);
    }

    #[test]
    fn log_potential_of_symmetric_pair_vanishes_at_midpoint() {
        let c = cfg(2, &[&[-1.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0], 0);
        assert_eq!(eval_maxwell(&c, &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn dipole_potential_is_zero_on_bisector() {
        let c = cfg(3, &[&[-1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]], &[1.0, -1.0], 1);
        assert_eq!(eval_maxwell(&c, &[0.0, 1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn equal_pair_has_zero_gradient_at_midpoint() {
        let c = cfg(3, &[&[-1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]], &[1.0, 1.0], 1);
        assert_eq!(grad_maxwell(&c, &[0.0, 0.0, 0.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn equal_pair_hessian_at_midpoint() {
        // V = 1/|p - e1| + 1/|p + e1|: d²/dx² gives 2 + 2, transverse -1 - 1.
        let c = cfg(3, &[&[-1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]], &[1.0, 1.0], 1);
        let h = hessian_maxwell(&c, &[0.0, 0.0, 0.0]).unwrap();
        let want = [[4.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, -2.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[(i, j)] - want[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn evaluation_inside_exclusion_ball_is_singular() {
        let c = cfg(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[1.0, 1.0], 1);
        assert_eq!(eval_maxwell(&c, &[1.0, 1e-10]), Err(Error::SingularPoint { site: 1 }));
        assert!(grad_maxwell(&c, &[1.0, 1e-8]).is_ok());
        assert_eq!(mixed_jacobian(&c, &[0.0, 0.0], 0), Err(Error::SingularPoint { site: 0 }));
    }

    #[test]
    fn dimension_is_checked() {
        let c = cfg(2, &[&[0.0, 0.0]], &[1.0], 1);
        assert_eq!(grad_maxwell(&c, &[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn config_invariants() {
        let p = |v: &[f64]| Point::new(v.to_vec());
        let dup = MaxwellConfig::new(1, vec![p(&[1.0]), p(&[1.0])], vec![1.0, 1.0], 1);
        assert!(matches!(dup, Err(Error::Validation(m)) if m.contains("sites pairwise distinct")));
        let zero = MaxwellConfig::new(1, vec![p(&[0.0]), p(&[1.0])], vec![1.0, 0.0], 1);
        assert!(matches!(zero, Err(Error::Validation(m)) if m.contains("|q_i| > 0")));
        let wrong = MaxwellConfig::new(2, vec![p(&[0.0])], vec![1.0], 1);
        assert!(wrong.is_err());
    }

    #[test]
    fn mixed_jacobian_spectrum() {
        let c = cfg(3, &[&[0.0, 0.0, 0.0], &[0.3, -1.0, 2.0]], &[1.5, -2.0], 1);
        let p = [0.7, 0.2, -0.4];
        let mj = mixed_jacobian(&c, &p, 1).unwrap();
        let r = ((0.7f64 - 0.3).powi(2) + 1.2f64.powi(2) + 2.4f64.powi(2)).sqrt();
        // -c(1) q / r^3 = 1 * (-2) / r^3
        let s = -2.0 / r.powi(3);
        let eig = jacobi_eigen(&Matrix::from_fn_symmetric(3, |i, j| mj[(i, j)]));
        let mut want = [s * (1.0 - 3.0), s, s];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in eig.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-13 * s.abs());
        }
    }
}

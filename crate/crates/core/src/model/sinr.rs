use super::{check_clear, check_len, configuration_scale, validate_sites, Jet, Point, Potential, PowerTerm, EXCLUSION_FACTOR};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Real, Scalar};

/// Stations `x_j` with powers `ψ_j`, path-loss exponent `α` and noise `N`;
/// the field is `SINR(x_i, ·)` for the focus station `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrConfig<T> {
    dim: usize,
    sites: Vec<Point<T>>,
    powers: Vec<T>,
    alpha: u32,
    noise: T,
    focus: usize,
    beta: Option<T>,
    scale: f64,
}

impl<T: Scalar> SinrConfig<T> {
    /// `focus` is zero-based.
    pub fn new(
        dim: usize,
        sites: Vec<Point<T>>,
        powers: Vec<T>,
        alpha: u32,
        noise: T,
        focus: usize,
        beta: Option<T>,
    ) -> Result<Self> {
        validate_sites(dim, &sites)?;
        if powers.len() != sites.len() {
            return Err(Error::Validation("one power per site".into()));
        }
        if let Some(j) = powers.iter().position(|x| *x <= T::zero() || !x.is_finite_value()) {
            return Err(Error::Validation(format!("ψ_j > 0 (power {} is not positive)", j + 1)));
        }
        if alpha == 0 || alpha % 2 == 1 {
            return Err(Error::Validation(format!("α even (got α = {alpha})")));
        }
        if noise < T::zero() || !noise.is_finite_value() {
            return Err(Error::Validation("N ≥ 0".into()));
        }
        if focus >= sites.len() {
            return Err(Error::Validation(format!("focus index in 1..{}", sites.len())));
        }
        if let Some(b) = &beta {
            if *b < T::one() {
                return Err(Error::Validation("β ≥ 1".into()));
            }
        }
        let scale = configuration_scale(&sites);
        Ok(Self { dim, sites, powers, alpha, noise, focus, beta, scale })
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

    pub fn powers(&self) -> &[T] {
        &self.powers
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn noise(&self) -> &T {
        &self.noise
    }

    /// Zero-based index of the focus station.
    pub fn focus(&self) -> usize {
        self.focus
    }

    pub fn beta(&self) -> Option<&T> {
        self.beta.as_ref()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SinrConfig<U> {
        SinrConfig {
            dim: self.dim,
            sites: self.sites.iter().map(|s| s.map(&f)).collect(),
            powers: self.powers.iter().map(&f).collect(),
            alpha: self.alpha,
            noise: f(&self.noise),
            focus: self.focus,
            beta: self.beta.as_ref().map(&f),
            scale: self.scale,
        }
    }
}

impl<T: Real> SinrConfig<T> {
    fn prepare(&self, p: &[T]) -> Result<()> {
        check_len(p, self.dim)?;
        check_clear(&self.sites, p, self.exclusion_radius())
    }

    fn term(&self, j: usize, p: &[T]) -> PowerTerm<T> {
        PowerTerm::new(&self.sites[j], self.powers[j], self.alpha, p)
    }

    fn term_jet(&self, j: usize, p: &[T]) -> Jet<T> {
        let t = self.term(j, p);
        let mut grad = vec![T::zero(); self.dim];
        t.add_gradient(&mut grad);
        let mut hess = Matrix::zeros(self.dim, self.dim);
        t.add_hessian(&mut hess);
        hess.mirror_upper();
        Jet { value: t.value(), grad, hess }
    }

    /// Signal `ψ_i |x_i - p|^{-α}` and interference-plus-noise denominator.
    fn signal_and_interference(&self, p: &[T]) -> (Jet<T>, Jet<T>) {
        let signal = self.term_jet(self.focus, p);
        let mut den = Jet { value: self.noise, grad: vec![T::zero(); self.dim], hess: Matrix::zeros(self.dim, self.dim) };
        for j in (0..self.n()).filter(|&j| j != self.focus) {
            let t = self.term_jet(j, p);
            den.value = den.value + t.value;
            for (a, b) in den.grad.iter_mut().zip(&t.grad) {
                *a = *a + *b;
            }
            den.hess.add_scaled(T::one(), &t.hess);
        }
        (signal, den)
    }

    /// `(|∇f| g + f Σ_j |∇g_j|) / g²` for the quotient `f/g`.
    fn quotient_scale(&self, p: &[T], reciprocal: bool) -> T {
        let focus = self.term(self.focus, p);
        let f = focus.value();
        let f_grad = focus.gradient_norm();
        let mut g = self.noise;
        let mut g_grad = T::zero();
        for j in (0..self.n()).filter(|&j| j != self.focus) {
            let t = self.term(j, p);
            g = g + t.value();
            g_grad = g_grad + t.gradient_norm();
        }
        if reciprocal {
            (g_grad * f + g * f_grad) / (f * f)
        } else {
            (f_grad * g + f * g_grad) / (g * g)
        }
    }
}

impl<T: Real> Potential<T> for SinrConfig<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, p: &[T]) -> Result<T> {
        self.prepare(p)?;
        let (f, g) = self.signal_and_interference(p);
        Ok(f.value / g.value)
    }

    fn gradient(&self, p: &[T]) -> Result<Vec<T>> {
        self.prepare(p)?;
        let (f, g) = self.signal_and_interference(p);
        Ok(Jet::quotient(&f, &g).grad)
    }

    fn hessian(&self, p: &[T]) -> Result<Matrix<T>> {
        self.prepare(p)?;
        let (f, g) = self.signal_and_interference(p);
        Ok(Jet::quotient(&f, &g).hess)
    }

    fn gradient_scale(&self, p: &[T]) -> Result<T> {
        self.prepare(p)?;
        Ok(self.quotient_scale(p, false))
    }

    fn sites(&self) -> &[Point<T>] {
        &self.sites
    }

    fn exclusion_radius(&self) -> f64 {
        EXCLUSION_FACTOR * self.scale
    }
}

/// The reciprocal field `1 / SINR(x_i, ·)`.
///
/// It has the same critical points as `SINR(x_i, ·)`, with the same
/// degeneracy, because the field is strictly positive.
#[derive(Debug, Clone, Copy)]
pub struct InverseSinr<'a, T>(pub &'a SinrConfig<T>);

impl<T: Real> Potential<T> for InverseSinr<'_, T> {
    fn dim(&self) -> usize {
        self.0.dim
    }

    fn value(&self, p: &[T]) -> Result<T> {
        self.0.prepare(p)?;
        let (f, g) = self.0.signal_and_interference(p);
        Ok(g.value / f.value)
    }

    fn gradient(&self, p: &[T]) -> Result<Vec<T>> {
        self.0.prepare(p)?;
        let (f, g) = self.0.signal_and_interference(p);
        Ok(Jet::quotient(&g, &f).grad)
    }

    fn hessian(&self, p: &[T]) -> Result<Matrix<T>> {
        self.0.prepare(p)?;
        let (f, g) = self.0.signal_and_interference(p);
        Ok(Jet::quotient(&g, &f).hess)
    }

    fn gradient_scale(&self, p: &[T]) -> Result<T> {
        self.0.prepare(p)?;
        Ok(self.0.quotient_scale(p, true))
    }

    fn sites(&self) -> &[Point<T>] {
        &self.0.sites
    }

    fn exclusion_radius(&self) -> f64 {
        self.0.exclusion_radius()
    }
}

pub fn eval_sinr<T: Real>(cfg: &SinrConfig<T>, p: &[T]) -> Result<T> {
    cfg.value(p)
}

pub fn grad_sinr<T: Real>(cfg: &SinrConfig<T>, p: &[T]) -> Result<Vec<T>> {
    cfg.gradient(p)
}

pub fn hessian_sinr<T: Real>(cfg: &SinrConfig<T>, p: &[T]) -> Result<Matrix<T>> {
    cfg.hessian(p)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn two_station() -> SinrConfig<f64> {
        SinrConfig::new(
            2,
            vec![Point::new(vec![0.0, 0.0]), Point::new(vec![1.0, 0.0])],
            vec![1.0, 1.0],
            2,
            0.0,
            0,
            None,
        )
        .unwrap()
    }

    #[test]
    fn direct_evaluation() {
        // (1/4) / (1/1)
        assert!((eval_sinr(&two_station(), &[2.0, 0.0]).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_is_inverse() {
        let c = two_station();
        let p = [0.3, 0.8];
        let s = eval_sinr(&c, &p).unwrap();
        let inv = InverseSinr(&c).value(&p).unwrap();
        assert!((s * inv - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_odd_alpha_and_bad_focus() {
        let sites = vec![Point::new(vec![0.0, 0.0]), Point::new(vec![1.0, 0.0])];
        let odd = SinrConfig::new(2, sites.clone(), vec![1.0, 1.0], 3, 0.0, 0, None);
        assert!(matches!(odd, Err(Error::Validation(m)) if m.contains("α even")));
        let focus = SinrConfig::new(2, sites.clone(), vec![1.0, 1.0], 2, 0.0, 2, None);
        assert!(focus.is_err());
        let beta = SinrConfig::new(2, sites, vec![1.0, 1.0], 2, 0.0, 0, Some(0.5));
        assert!(beta.is_err());
    }
}

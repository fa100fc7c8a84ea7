use super::{check_len, Point};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{lit, Real, Scalar};

/// Which mass multiplies the pair term of body `i` in
/// `λ x_i = Σ_{j≠i} m_* |x_i - x_j|^{-3} (x_i - x_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MassConvention {
    /// `m_j`, the usual celestial-mechanics form.
    #[default]
    Standard,
    /// `m_i`, as the equation is sometimes printed.
    AsWritten,
}

/// `n` bodies in `R^d` with positive masses. Solutions are normalized:
/// the multiplier `λ` is fixed to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralConfig<T> {
    dim: usize,
    masses: Vec<T>,
    convention: MassConvention,
    scale: f64,
}

impl<T: Scalar> CentralConfig<T> {
    pub fn new(dim: usize, masses: Vec<T>, convention: MassConvention) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("d ≥ 1".into()));
        }
        if masses.len() < 2 {
            return Err(Error::Validation("n ≥ 2".into()));
        }
        if let Some(i) = masses.iter().position(|m| *m <= T::zero() || !m.is_finite_value()) {
            return Err(Error::Validation(format!("masses > 0 (mass {} is not positive)", i + 1)));
        }
        let total: f64 = masses.iter().map(Scalar::approx_f64).sum();
        Ok(Self { dim, masses, convention, scale: total.cbrt() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn convention(&self) -> MassConvention {
        self.convention
    }

    /// Cube root of the total mass, the length scale of normalized solutions.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn exclusion_radius(&self) -> f64 {
        super::EXCLUSION_FACTOR * self.scale
    }

    /// Mass multiplying the `(i, j)` pair term in body `i`'s equation.
    pub fn pair_weight(&self, i: usize, j: usize) -> &T {
        match self.convention {
            MassConvention::Standard => &self.masses[j],
            MassConvention::AsWritten => &self.masses[i],
        }
    }

    pub fn with_convention(&self, convention: MassConvention) -> Self {
        Self { convention, ..self.clone() }
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CentralConfig<U> {
        CentralConfig {
            dim: self.dim,
            masses: self.masses.iter().map(f).collect(),
            convention: self.convention,
            scale: self.scale,
        }
    }
}

struct Pair<T> {
    diff: Vec<T>,
    inv_r3: T,
    inv_r2: T,
}

impl<T: Real> CentralConfig<T> {
    /// Pair geometry for `i < j`, failing on coincident bodies.
    fn pairs(&self, x: &[T]) -> Result<Vec<Vec<Option<Pair<T>>>>> {
        let (n, d) = (self.n(), self.dim);
        let excl = lit::<T>(self.exclusion_radius());
        let mut out: Vec<Vec<Option<Pair<T>>>> = (0..n).map(|_| (0..n).map(|_| None).collect()).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let diff: Vec<T> = (0..d).map(|k| x[i * d + k] - x[j * d + k]).collect();
                let r2 = diff.iter().fold(T::zero(), |acc, &t| acc + t * t);
                let r = r2.sqrt();
                if r <= excl {
                    return Err(Error::CoincidentBodies(i, j));
                }
                out[i][j] = Some(Pair { diff, inv_r3: (r2 * r).recip(), inv_r2: r2.recip() });
            }
        }
        Ok(out)
    }
}

/// Per-body residual `x_i - Σ_{j≠i} m_* |x_i - x_j|^{-3} (x_i - x_j)`.
pub fn central_residual<T: Real>(cfg: &CentralConfig<T>, positions: &[Point<T>]) -> Result<Vec<Vec<T>>> {
    if positions.len() != cfg.n() {
        return Err(Error::DimensionMismatch { expected: cfg.n(), got: positions.len() });
    }
    let mut flat = Vec::with_capacity(cfg.n() * cfg.dim());
    for p in positions {
        check_len(p, cfg.dim())?;
        flat.extend_from_slice(p);
    }
    let r = central_residual_flat(cfg, &flat)?;
    Ok(r.chunks(cfg.dim()).map(<[T]>::to_vec).collect())
}

/// [`central_residual`] on the flattened coordinate vector `(x_1, …, x_n)`.
pub fn central_residual_flat<T: Real>(cfg: &CentralConfig<T>, x: &[T]) -> Result<Vec<T>> {
    let (n, d) = (cfg.n(), cfg.dim());
    check_len(x, n * d)?;
    let pairs = cfg.pairs(x)?;
    let mut res = x.to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            let pair = pairs[i][j].as_ref().expect("pair computed");
            let wi = *cfg.pair_weight(i, j) * pair.inv_r3;
            let wj = *cfg.pair_weight(j, i) * pair.inv_r3;
            for k in 0..d {
                res[i * d + k] = res[i * d + k] - wi * pair.diff[k];
                res[j * d + k] = res[j * d + k] + wj * pair.diff[k];
            }
        }
    }
    Ok(res)
}

/// Jacobian of [`central_residual_flat`] with respect to the positions.
pub fn central_jacobian<T: Real>(cfg: &CentralConfig<T>, x: &[T]) -> Result<Matrix<T>> {
    let (n, d) = (cfg.n(), cfg.dim());
    check_len(x, n * d)?;
    let pairs = cfg.pairs(x)?;
    let three = lit::<T>(3.0);
    let mut jac = Matrix::identity(n * d);
    for i in 0..n {
        for j in (i + 1)..n {
            let pair = pairs[i][j].as_ref().expect("pair computed");
            // K = ∂/∂u (u |u|^{-3}) at u = x_i - x_j
            let kern = Matrix::from_fn_symmetric(d, |a, b| {
                let delta = if a == b { T::one() } else { T::zero() };
                pair.inv_r3 * (delta - three * pair.diff[a] * pair.diff[b] * pair.inv_r2)
            });
            for (row_body, col_self, col_other, w) in [
                (i, i, j, *cfg.pair_weight(i, j)),
                (j, j, i, *cfg.pair_weight(j, i)),
            ] {
                for a in 0..d {
                    for b in 0..d {
                        let v = w * kern[(a, b)];
                        let r = row_body * d + a;
                        jac[(r, col_self * d + b)] = jac[(r, col_self * d + b)] - v;
                        jac[(r, col_other * d + b)] = jac[(r, col_other * d + b)] + v;
                    }
                }
            }
        }
    }
    Ok(jac)
}

/// `Σ_i (|x_i| + Σ_{j≠i} m_* / |x_i - x_j|²)`, the magnitude scale of the
/// residual terms.
pub fn central_residual_scale<T: Real>(cfg: &CentralConfig<T>, x: &[T]) -> Result<T> {
    let (n, d) = (cfg.n(), cfg.dim());
    check_len(x, n * d)?;
    let pairs = cfg.pairs(x)?;
    let mut total = T::zero();
    for i in 0..n {
        total = total + x[i * d..(i + 1) * d].iter().fold(T::zero(), |acc, &t| acc + t * t).sqrt();
        for j in (i + 1)..n {
            let pair = pairs[i][j].as_ref().expect("pair computed");
            total = total + (*cfg.pair_weight(i, j) + *cfg.pair_weight(j, i)) * pair.inv_r2;
        }
    }
    Ok(total)
}

//! Damped Newton iteration with a backtracking line search on `½|r|²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SearchRegion;
use crate::error::Result;
use crate::linalg::{dot, jacobi_eigen, norm, pinv_apply, Matrix};
use crate::model::{central_jacobian, central_residual_flat, central_residual_scale, CentralConfig, Potential};

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1.0 / (1u64 << 30) as f64;
/// Eigenvalue cut for the symmetric (Hessian) pseudo-inverse.
const SYMMETRIC_CUT: f64 = 1e-12;
/// Eigenvalue cut for `JᵀJ`; singular values below `1e-7 σ_max` are dropped.
const NORMAL_CUT: f64 = 1e-14;
const POLISH_STEPS: usize = 3;

/// A square system `r(x) = 0` together with the magnitude its residual is
/// judged against.
pub(crate) trait RootSystem: Sync {
    fn residual(&self, x: &[f64]) -> Result<(Vec<f64>, f64)>;
    fn jacobian(&self, x: &[f64]) -> Result<Matrix<f64>>;
    fn symmetric(&self) -> bool;
}

/// Critical points of a potential: `r = ∇F`, Jacobian = Hessian.
pub(crate) struct GradientSystem<'a, P>(pub &'a P);

impl<P: Potential<f64> + Sync> RootSystem for GradientSystem<'_, P> {
    fn residual(&self, x: &[f64]) -> Result<(Vec<f64>, f64)> {
        Ok((self.0.gradient(x)?, self.0.gradient_scale(x)?))
    }

    fn jacobian(&self, x: &[f64]) -> Result<Matrix<f64>> {
        self.0.hessian(x)
    }

    fn symmetric(&self) -> bool {
        true
    }
}

/// Normalized central configurations with `σ_ij = |x_i - x_j|^{-1}` substituted.
pub(crate) struct CentralSystem<'a>(pub &'a CentralConfig<f64>);

impl RootSystem for CentralSystem<'_> {
    fn residual(&self, x: &[f64]) -> Result<(Vec<f64>, f64)> {
        Ok((central_residual_flat(self.0, x)?, central_residual_scale(self.0, x)?))
    }

    fn jacobian(&self, x: &[f64]) -> Result<Matrix<f64>> {
        central_jacobian(self.0, x)
    }

    fn symmetric(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub(crate) struct NewtonOptions {
    pub max_iter: usize,
    pub residual_tol: f64,
    /// Longest step taken in one iteration.
    pub step_cap: f64,
    /// Iterates leaving this box are abandoned.
    pub containment: SearchRegion,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Converged {
    pub x: Vec<f64>,
    /// `|r| / scale` at `x`.
    pub ratio: f64,
}

fn ratio(r: &[f64], scale: f64) -> f64 {
    let n = norm(r);
    if scale > 0.0 {
        n / scale
    } else if n == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Minimum-norm Newton direction and the directional derivative of `½|r|²`.
fn direction<S: RootSystem>(sys: &S, x: &[f64], r: &[f64], cap: f64) -> Result<(Vec<f64>, f64)> {
    let jac = sys.jacobian(x)?;
    let (mut step, grad_phi) = if sys.symmetric() {
        let eig = jacobi_eigen(&jac);
        (pinv_apply(&eig, r, SYMMETRIC_CUT), jac.mul_vec(r))
    } else {
        let jt = jac.transpose();
        let b = jt.mul_vec(r);
        let eig = jacobi_eigen(&jt.matmul(&jac));
        (pinv_apply(&eig, &b, NORMAL_CUT), b)
    };
    step.iter_mut().for_each(|s| *s = -*s);
    let len = norm(&step);
    if len > cap {
        step.iter_mut().for_each(|s| *s *= cap / len);
    }
    let slope = dot(&grad_phi, &step);
    Ok((step, slope))
}

fn evaluate<S: RootSystem>(sys: &S, x: &[f64], opts: &NewtonOptions) -> Option<(Vec<f64>, f64)> {
    if !opts.containment.contains(x) {
        return None;
    }
    sys.residual(x).ok().filter(|(r, s)| r.iter().all(|v| v.is_finite()) && s.is_finite())
}

/// Runs damped Newton from `x0`. Returns `None` when the iterate leaves the
/// containment box, enters an exclusion ball, stalls, or runs out of
/// iterations.
pub(crate) fn damped_newton<S: RootSystem>(sys: &S, x0: &[f64], opts: &NewtonOptions) -> Option<Converged> {
    let mut x = x0.to_vec();
    let (mut r, mut scale) = evaluate(sys, &x, opts)?;
    for _ in 0..=opts.max_iter {
        if ratio(&r, scale) <= opts.residual_tol {
            return Some(polish(sys, Converged { ratio: ratio(&r, scale), x }, opts));
        }
        let (step, slope) = direction(sys, &x, &r, opts.step_cap).ok()?;
        if !(slope < 0.0) {
            return None;
        }
        let phi = 0.5 * dot(&r, &r);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            if let Some((rt, st)) = evaluate(sys, &trial, opts) {
                if 0.5 * dot(&rt, &rt) <= phi + ARMIJO * t * slope {
                    x = trial;
                    r = rt;
                    scale = st;
                    break;
                }
            }
            t *= 0.5;
            if t < MIN_STEP {
                return None;
            }
        }
    }
    None
}

/// A few undamped steps past acceptance, kept only while they improve the
/// residual ratio.
fn polish<S: RootSystem>(sys: &S, mut best: Converged, opts: &NewtonOptions) -> Converged {
    for _ in 0..POLISH_STEPS {
        if best.ratio == 0.0 {
            break;
        }
        let Some((r, _)) = evaluate(sys, &best.x, opts) else { break };
        let Ok((step, _)) = direction(sys, &best.x, &r, opts.step_cap) else { break };
        let trial: Vec<f64> = best.x.iter().zip(&step).map(|(a, s)| a + s).collect();
        match evaluate(sys, &trial, opts) {
            Some((rt, st)) if ratio(&rt, st) < best.ratio => best = Converged { ratio: ratio(&rt, st), x: trial },
            _ => break,
        }
    }
    best
}

/// Smallest radius of a site-local start, relative to the ball radius.
const LOCAL_DEPTH: f64 = 1e-4;

/// Where starts come from: the search box, and optionally balls around the
/// sites that odd-numbered starts sample with log-uniform radius, so that
/// small basins next to weak sources are reached.
#[derive(Debug, Clone)]
pub(crate) struct Sampler<'a> {
    pub region: &'a SearchRegion,
    pub balls: Vec<(Vec<f64>, f64)>,
}

impl Sampler<'_> {
    /// Start `index` of the run seeded with `seed`, drawn from its own
    /// ChaCha stream so the sample set does not depend on scheduling.
    pub(crate) fn start(&self, seed: u64, index: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        if index % 2 == 1 && !self.balls.is_empty() {
            let (center, radius) = &self.balls[rng.random_range(0..self.balls.len())];
            let dir = loop {
                let v: Vec<f64> = center.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
                let len = norm(&v);
                if len > 0.1 && len <= 1.0 {
                    break v.into_iter().map(|x| x / len).collect::<Vec<_>>();
                }
            };
            let r = radius * LOCAL_DEPTH.powf(rng.random::<f64>());
            return center.iter().zip(&dir).map(|(c, u)| c + r * u).collect();
        }
        let region = self.region;
        region.lo.iter().zip(&region.hi).map(|(&lo, &hi)| rng.random_range(lo..hi)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Hit {
    pub start: usize,
    pub x: Vec<f64>,
    pub ratio: f64,
}

/// Runs every start, in parallel when a pool is available, and returns the
/// converged ones in start order.
pub(crate) fn multistart<S: RootSystem>(
    sys: &S,
    seed: u64,
    starts: usize,
    sampler: &Sampler<'_>,
    opts: &NewtonOptions,
    threads: Option<usize>,
) -> Vec<Hit> {
    let run = |k: usize| {
        let x0 = sampler.start(seed, k);
        damped_newton(sys, &x0, opts).map(|c| Hit { start: k, x: c.x, ratio: c.ratio })
    };
    let collect = || (0..starts).into_par_iter().filter_map(run).collect::<Vec<_>>();
    match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(collect),
            Err(_) => (0..starts).filter_map(run).collect(),
        },
        None => collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MaxwellConfig, Point};

    fn opts() -> NewtonOptions {
        NewtonOptions {
            max_iter: 100,
            residual_tol: 1e-12,
            step_cap: 2.0,
            containment: SearchRegion { lo: vec![-30.0; 3], hi: vec![30.0; 3] },
        }
    }

    #[test]
    fn converges_to_midpoint_of_equal_pair() {
        let cfg = MaxwellConfig::new(
            3,
            vec![Point::new(vec![-1.0, 0.0, 0.0]), Point::new(vec![1.0, 0.0, 0.0])],
            vec![1.0, 1.0],
            1,
        )
        .unwrap();
        let c = damped_newton(&GradientSystem(&cfg), &[0.3, 0.2, -0.1], &opts()).unwrap();
        assert!(c.x.iter().all(|v| v.abs() < 1e-10), "{:?}", c.x);
    }

    #[test]
    fn start_points_do_not_depend_on_order() {
        let region = SearchRegion { lo: vec![-1.0, 0.0], hi: vec![1.0, 5.0] };
        let sampler = Sampler { region: &region, balls: vec![(vec![0.0, 1.0], 0.5)] };
        let a = sampler.start(9, 18);
        let _ = sampler.start(9, 3);
        assert_eq!(a, sampler.start(9, 18));
        assert_ne!(a, sampler.start(9, 20));
        assert!(region.contains(&a));
        let local = sampler.start(9, 17);
        let r = crate::linalg::distance(&local, &[0.0, 1.0]);
        assert!((0.5 * LOCAL_DEPTH..=0.5).contains(&r));
    }
}

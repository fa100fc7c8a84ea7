//! Tracing a positive-dimensional critical set through a degenerate point.

use super::newton::{damped_newton, Converged, GradientSystem, NewtonOptions};
use crate::classify::DEGENERACY_TOL;
use crate::linalg::{distance, dot, jacobi_eigen, norm};
use crate::model::Potential;

/// Steps taken in each direction along the kernel.
const WALK_STEPS: usize = 120;
/// Step length in dedup radii.
const STEP_FACTOR: f64 = 0.5;
/// Newton iterations allowed when pulling a step back onto the critical set.
const REPOLISH_ITER: usize = 20;

/// Orthonormal basis of the near-kernel of the Hessian at `x`, or empty when
/// the Hessian is nondegenerate.
fn kernel<P: Potential<f64>>(pot: &P, x: &[f64]) -> Vec<Vec<f64>> {
    let Ok(h) = pot.hessian(x) else { return Vec::new() };
    let eig = jacobi_eigen(&h);
    let top = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if top == 0.0 {
        return (0..x.len()).map(|k| eig.vector(k)).collect();
    }
    (0..x.len()).filter(|&k| eig.values[k].abs() < DEGENERACY_TOL * top).map(|k| eig.vector(k)).collect()
}

fn project(dir: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; dir.len()];
    for b in basis {
        let c = dot(dir, b);
        out.iter_mut().zip(b).for_each(|(o, v)| *o += c * v);
    }
    out
}

/// Walks both ways along the kernel direction from a degenerate critical
/// point, re-converging after every step. Returns the new critical points;
/// empty when `start` is nondegenerate or the walk stalls immediately.
pub(crate) fn trace<P: Potential<f64> + Sync>(
    sys: &GradientSystem<'_, P>,
    pot: &P,
    start: &[f64],
    radius: f64,
    opts: &NewtonOptions,
) -> Vec<Converged> {
    let basis = kernel(pot, start);
    if basis.is_empty() || basis.len() == start.len() {
        return Vec::new();
    }
    let h = STEP_FACTOR * radius;
    let polish_opts = NewtonOptions { max_iter: REPOLISH_ITER, step_cap: h, ..opts.clone() };
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let mut x = start.to_vec();
        let mut dir: Vec<f64> = basis[0].iter().map(|v| sign * v).collect();
        for _ in 0..WALK_STEPS {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + h * b).collect();
            let Some(next) = damped_newton(sys, &trial, &polish_opts) else { break };
            let gap = distance(&next.x, &x);
            if gap < 0.25 * h || gap > radius {
                break;
            }
            let basis = kernel(pot, &next.x);
            let mut turned = project(&dir, &basis);
            let len = norm(&turned);
            if len < 0.5 {
                break;
            }
            turned.iter_mut().for_each(|v| *v /= len);
            dir = turned;
            x = next.x.clone();
            out.push(next);
        }
    }
    out
}

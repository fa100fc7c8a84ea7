//! Central configurations: multistart on the normalized equations, then a
//! quotient by rotations about the origin.

use std::time::Instant;

use super::newton::{multistart, CentralSystem, Hit, Sampler};
use super::{finish, CriticalPoint, SolveReport, SolverSettings};
use crate::error::Result;
use crate::linalg::{distance, norm};
use crate::model::{CentralConfig, Point};
use crate::problem::ProblemConfig;

/// Below this normalized volume a tuple of bodies counts as affinely
/// dependent.
const ORIENTATION_TOL: f64 = 1e-6;

/// Rotation-invariant description of a configuration: labeled pairwise
/// distances, distances to the origin, and the orientation of the first
/// affinely independent `(d+1)`-tuple of bodies (0 if there is none).
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub distances: Vec<f64>,
    pub norms: Vec<f64>,
    pub orientation: i8,
}

impl Signature {
    fn continuous(&self) -> Vec<f64> {
        self.distances.iter().chain(&self.norms).copied().collect()
    }
}

fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap_or(c);
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in (c + 1)..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Signature of the flattened positions `x` of `n` bodies in `R^d`; `scale`
/// sets the volume threshold for orientation.
pub fn central_signature(n: usize, d: usize, x: &[f64], scale: f64) -> Signature {
    let body = |i: usize| &x[i * d..(i + 1) * d];
    let mut distances = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            distances.push(distance(body(i), body(j)));
        }
    }
    let norms = (0..n).map(|i| norm(body(i))).collect();
    let mut orientation = 0;
    if n > d {
        let mut idx: Vec<usize> = (0..=d).collect();
        loop {
            let rows: Vec<Vec<f64>> =
                idx[1..].iter().map(|&i| body(i).iter().zip(body(idx[0])).map(|(a, b)| a - b).collect()).collect();
            let det = determinant(rows);
            if det.abs() > ORIENTATION_TOL * scale.powi(d as i32) {
                orientation = if det > 0.0 { 1 } else { -1 };
                break;
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Signature { distances, norms, orientation }
}

/// Normalized central configurations up to rotation. `count` is the number
/// of signature classes.
pub fn solve_central(cfg: &CentralConfig<f64>, s: &SolverSettings) -> Result<SolveReport> {
    let clock = Instant::now();
    let (n, d) = (cfg.n(), cfg.dim());
    s.validate(n * d)?;
    let problem = ProblemConfig::Central(cfg.clone());
    let bound = problem.bound(s.newton_bound)?;
    let slack = problem.slack_system()?;
    let opts = s.newton_options(cfg.scale());
    let sys = CentralSystem(cfg);
    let sampler = Sampler { region: &s.search_region, balls: Vec::new() };
    let hits: Vec<Hit> = multistart(&sys, s.seed, s.starts, &sampler, &opts, s.threads);

    let sigs: Vec<Signature> = hits.iter().map(|h| central_signature(n, d, &h.x, cfg.scale())).collect();
    let mut found = Vec::new();
    for orientation in [-1i8, 0, 1] {
        let group: Vec<usize> = (0..hits.len()).filter(|&k| sigs[k].orientation == orientation).collect();
        let keys: Vec<Vec<f64>> = group.iter().map(|&k| sigs[k].continuous()).collect();
        for cluster in super::dedup(&keys, s.dedup_radius) {
            let members: Vec<usize> = cluster.members.iter().map(|&m| group[m]).collect();
            let rep = super::best_member(&hits, &members);
            let slack_residual = super::slack_residual(&slack, &problem, &hits[rep].x)?;
            if slack_residual >= super::SLACK_TOL {
                continue;
            }
            found.push((
                members.clone(),
                CriticalPoint {
                    location: Point::new(hits[rep].x.clone()),
                    grad_residual: hits[rep].ratio,
                    slack_residual,
                    morse_index: None,
                    degenerate: false,
                    cluster_id: 0,
                    hits: members.len(),
                    diameter: cluster.diameter,
                    on_continuum: false,
                },
            ));
        }
    }
    let raw: Vec<Vec<f64>> = hits.into_iter().map(|h| h.x).collect();
    finish(&problem, s, bound, &raw, found, clock)
}

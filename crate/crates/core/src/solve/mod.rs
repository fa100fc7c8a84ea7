//! Locating critical points numerically: seeded multistart damped Newton,
//! clustering of the hits, verification against the slack systems, and the
//! independent oracles used to cross-check the solver.

mod central;
mod continuum;
mod dedup;
mod newton;
mod oracle;

pub use central::{central_signature, solve_central, Signature};
pub use dedup::{continuum_suspect, dedup, Cluster, CONTINUUM_DIAMETER_FACTOR, CONTINUUM_MIN_HITS};
pub use oracle::{complex_oracle_m0_d2, line_oracle_d1, OracleRoot};

use std::time::Instant;

use crate::bounds::{Bound, NewtonBoundVariant};
use crate::error::{Error, Result};
use crate::linalg::distance;
use crate::model::{configuration_scale, Point, Potential};
use crate::polysys::PolySystem;
use crate::problem::ProblemConfig;

use newton::{multistart, GradientSystem, Hit, NewtonOptions, Sampler};

/// Slack systems must vanish to this relative accuracy at accepted points.
pub const SLACK_TOL: f64 = 1e-8;
/// Iterates may wander this many half-widths away from the search box.
const CONTAINMENT_FACTOR: f64 = 10.0;

/// Axis-aligned box `[lo_k, hi_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SearchRegion {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.lo.len() && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Same center, half-widths multiplied by `factor`.
    pub fn inflated(&self, factor: f64) -> Self {
        let (lo, hi) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| {
                let (c, r) = (0.5 * (l + h), 0.5 * (h - l) * factor);
                (c - r, c + r)
            })
            .unzip();
        Self { lo, hi }
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }

    pub fn cube(dim: usize, half: f64) -> Self {
        Self { lo: vec![-half; dim], hi: vec![half; dim] }
    }

    fn diagonal(&self) -> f64 {
        distance(&self.lo, &self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub seed: u64,
    pub starts: usize,
    pub max_iter: usize,
    /// Accepted points satisfy `|r| ≤ residual_tol · (sum of term magnitudes)`.
    pub residual_tol: f64,
    pub dedup_radius: f64,
    pub exclusion_radius: f64,
    pub search_region: SearchRegion,
    pub newton_bound: NewtonBoundVariant,
    /// Worker threads; `None` uses the global pool. Does not affect results.
    pub threads: Option<usize>,
}

impl SolverSettings {
    /// Defaults scaled to the configuration.
    pub fn for_problem(problem: &ProblemConfig<f64>) -> Self {
        let d = problem.dim();
        let n = problem.n();
        let scale = problem.scale();
        let search_region = match problem {
            ProblemConfig::Maxwell(c) => site_box(c.sites(), scale),
            ProblemConfig::Sinr(c) => site_box(c.sites(), scale),
            ProblemConfig::Newton(c) => {
                let total: f64 = c.masses().iter().sum();
                site_box(c.sites(), scale).union(&SearchRegion::cube(d, 2.0 * total.cbrt()))
            }
            ProblemConfig::Central(c) => {
                let total: f64 = c.masses().iter().sum();
                SearchRegion::cube(n * d, 2.0 * total.cbrt())
            }
        };
        Self {
            seed: 0,
            starts: 200 * d * n,
            max_iter: 100,
            residual_tol: 1e-12,
            dedup_radius: 1e-6 * scale,
            exclusion_radius: 1e-9 * scale,
            search_region,
            newton_bound: NewtonBoundVariant::default(),
            threads: None,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!("{name} > 0")))
            }
        };
        positive("residualTol", self.residual_tol)?;
        positive("dedupRadius", self.dedup_radius)?;
        positive("exclusionRadius", self.exclusion_radius)?;
        if self.starts == 0 {
            return Err(Error::Validation("starts ≥ 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Validation("maxIter ≥ 1".into()));
        }
        let r = &self.search_region;
        if r.lo.len() != dim || r.hi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: r.lo.len() });
        }
        if !r.lo.iter().zip(&r.hi).all(|(l, h)| l < h && l.is_finite() && h.is_finite()) {
            return Err(Error::Validation("searchRegion lo < hi".into()));
        }
        Ok(())
    }

    fn newton_options(&self, step_cap: f64) -> NewtonOptions {
        NewtonOptions {
            max_iter: self.max_iter,
            residual_tol: self.residual_tol,
            step_cap,
            containment: self.search_region.inflated(CONTAINMENT_FACTOR),
        }
    }
}

/// Bounding box of the sites, each half-width at least half the scale,
/// inflated 3×.
fn site_box(sites: &[Point<f64>], scale: f64) -> SearchRegion {
    let d = sites[0].dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for s in sites {
        for k in 0..d {
            lo[k] = lo[k].min(s[k]);
            hi[k] = hi[k].max(s[k]);
        }
    }
    for k in 0..d {
        let c = 0.5 * (lo[k] + hi[k]);
        let r = 3.0 * (0.5 * (hi[k] - lo[k])).max(0.5 * scale);
        lo[k] = c - r;
        hi[k] = c + r;
    }
    SearchRegion { lo, hi }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    /// A point of `R^d`, or the flattened body positions for central
    /// configurations.
    pub location: Point<f64>,
    /// `|∇| / (sum of term magnitudes)` at `location`.
    pub grad_residual: f64,
    /// Relative residual of the slack system after back-substituting `σ`.
    pub slack_residual: f64,
    pub morse_index: Option<usize>,
    pub degenerate: bool,
    pub cluster_id: usize,
    /// Raw hits merged into this point.
    pub hits: usize,
    pub diameter: f64,
    /// Part of a positive-dimensional family; excluded from `count`.
    pub on_continuum: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawHit {
    pub x: Vec<f64>,
    pub cluster_id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub problem: ProblemConfig<f64>,
    pub settings: SolverSettings,
    pub points: Vec<CriticalPoint>,
    /// Isolated critical points (classes, for central configurations).
    pub count: usize,
    pub bound: Bound,
    pub bound_respected: bool,
    pub continuum_suspected: bool,
    pub wall_time: f64,
    /// Every converged start and continuum sample, tagged with its cluster.
    pub raw_hits: Vec<RawHit>,
}

impl SolveReport {
    pub fn isolated_points(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.points.iter().filter(|p| !p.on_continuum)
    }
}

/// Locates critical points of the problem's potential (or central
/// configurations). Fails with `BoundViolation` if more isolated points are
/// found than the bound allows.
pub fn find_critical_points(problem: &ProblemConfig<f64>, s: &SolverSettings) -> Result<SolveReport> {
    match problem {
        ProblemConfig::Maxwell(c) => solve_gradient(problem, c, s),
        ProblemConfig::Sinr(c) => solve_gradient(problem, c, s),
        ProblemConfig::Newton(c) => solve_gradient(problem, c, s),
        ProblemConfig::Central(c) => solve_central(c, s),
    }
}

fn solve_gradient<P: Potential<f64> + Sync>(
    problem: &ProblemConfig<f64>,
    pot: &P,
    s: &SolverSettings,
) -> Result<SolveReport> {
    let clock = Instant::now();
    s.validate(pot.dim())?;
    let bound = problem.bound(s.newton_bound)?;
    let slack = problem.slack_system()?;
    let scale = configuration_scale(pot.sites());
    let opts = s.newton_options(scale.max(s.search_region.diagonal() * 0.25));
    let sys = GradientSystem(pot);
    let outside = |x: &[f64]| pot.sites().iter().all(|site| distance(site, x) > s.exclusion_radius);

    let sampler = Sampler { region: &s.search_region, balls: site_balls(pot.sites(), scale) };
    let mut hits: Vec<Hit> = multistart(&sys, s.seed, s.starts, &sampler, &opts, s.threads);
    hits.retain(|h| outside(&h.x));

    // Degenerate representatives get their kernel direction traced, so that
    // continua show up as long chains instead of scattered isolated hits.
    let points: Vec<Vec<f64>> = hits.iter().map(|h| h.x.clone()).collect();
    let first = dedup(&points, s.dedup_radius);
    let mut traced: Vec<Hit> = Vec::new();
    for cluster in &first {
        let rep = best_member(&hits, &cluster.members);
        for x in continuum::trace(&sys, pot, &hits[rep].x, s.dedup_radius, &opts) {
            if outside(&x.x) {
                traced.push(Hit { start: s.starts + traced.len(), x: x.x, ratio: x.ratio });
            }
        }
    }
    hits.extend(traced);

    let points: Vec<Vec<f64>> = hits.iter().map(|h| h.x.clone()).collect();
    let clusters = dedup(&points, s.dedup_radius);
    let mut found = Vec::new();
    for cluster in &clusters {
        let rep = &hits[best_member(&hits, &cluster.members)];
        let slack_residual = slack_residual(&slack, problem, &rep.x)?;
        if slack_residual >= SLACK_TOL {
            continue;
        }
        found.push((
            cluster.members.clone(),
            CriticalPoint {
                location: Point::new(rep.x.clone()),
                grad_residual: rep.ratio,
                slack_residual,
                morse_index: None,
                degenerate: false,
                cluster_id: 0,
                hits: cluster.members.len(),
                diameter: cluster.diameter,
                on_continuum: cluster.is_continuum(s.dedup_radius),
            },
        ));
    }
    finish(problem, s, bound, &hits.into_iter().map(|h| h.x).collect::<Vec<_>>(), found, clock)
}

/// Ball around each site reaching halfway to its nearest neighbour.
fn site_balls(sites: &[Point<f64>], scale: f64) -> Vec<(Vec<f64>, f64)> {
    sites
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let nearest = sites
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| distance(a, b))
                .fold(2.0 * scale, f64::min);
            (a.to_vec(), 0.5 * nearest)
        })
        .collect()
}

fn slack_residual(slack: &PolySystem<f64>, problem: &ProblemConfig<f64>, x: &[f64]) -> Result<f64> {
    let z = match problem {
        ProblemConfig::Maxwell(c) => crate::polysys::point_with_slacks(c.sites(), x),
        ProblemConfig::Newton(c) => crate::polysys::point_with_slacks(c.sites(), x),
        ProblemConfig::Sinr(_) => x.to_vec(),
        ProblemConfig::Central(c) => crate::polysys::positions_with_slacks(c.n(), c.dim(), x),
    };
    slack.relative_residual(&z)
}

fn best_member(hits: &[Hit], members: &[usize]) -> usize {
    *members
        .iter()
        .min_by(|&&a, &&b| hits[a].ratio.total_cmp(&hits[b].ratio).then(a.cmp(&b)))
        .expect("clusters are nonempty")
}

/// Orders points canonically, assigns cluster ids, counts isolated points and
/// enforces the bound.
fn finish(
    problem: &ProblemConfig<f64>,
    s: &SolverSettings,
    bound: Bound,
    raw: &[Vec<f64>],
    mut found: Vec<(Vec<usize>, CriticalPoint)>,
    clock: Instant,
) -> Result<SolveReport> {
    let key = |p: &CriticalPoint| -> Vec<i64> {
        p.location.iter().map(|v| (v / s.dedup_radius).round() as i64).collect()
    };
    found.sort_by(|a, b| {
        key(&a.1).cmp(&key(&b.1)).then_with(|| {
            a.1.location
                .iter()
                .zip(b.1.location.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let mut raw_hits = Vec::new();
    let mut points = Vec::new();
    for (id, (members, mut point)) in found.into_iter().enumerate() {
        point.cluster_id = id;
        raw_hits.extend(members.iter().map(|&m| RawHit { x: raw[m].clone(), cluster_id: id }));
        points.push(point);
    }
    let count = points.iter().filter(|p| !p.on_continuum).count();
    let continuum_suspected = points.iter().any(|p| p.on_continuum);
    if !bound.value.admits(count) {
        return Err(Error::BoundViolation { count, bound: bound.value.to_string() });
    }
    Ok(SolveReport {
        problem: problem.clone(),
        settings: s.clone(),
        points,
        count,
        bound,
        bound_respected: true,
        continuum_suspected,
        wall_time: clock.elapsed().as_secs_f64(),
        raw_hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MaxwellConfig, NewtonConfig};

    fn pt(v: &[f64]) -> Point<f64> {
        Point::new(v.to_vec())
    }

    #[test]
    fn equal_pair_has_one_point_at_midpoint() {
        let cfg = MaxwellConfig::new(3, vec![pt(&[-1.0, 0.0, 0.0]), pt(&[1.0, 0.0, 0.0])], vec![1.0, 1.0], 1).unwrap();
        let problem = ProblemConfig::Maxwell(cfg);
        let mut s = SolverSettings::for_problem(&problem);
        s.seed = 1;
        let r = find_critical_points(&problem, &s).unwrap();
        assert_eq!(r.count, 1);
        assert!(!r.continuum_suspected);
        assert!(r.points[0].location.iter().all(|v| v.abs() < 1e-10));
        assert!(r.points[0].grad_residual <= s.residual_tol);
        assert!(r.points[0].slack_residual < SLACK_TOL);
    }

    #[test]
    fn single_mass_sphere_is_a_continuum() {
        let cfg = NewtonConfig::new(3, vec![pt(&[0.0, 0.0, 0.0])], vec![1.0]).unwrap();
        let problem = ProblemConfig::Newton(cfg);
        let s = SolverSettings::for_problem(&problem);
        let r = find_critical_points(&problem, &s).unwrap();
        assert!(r.continuum_suspected);
        for h in &r.raw_hits {
            let radius = h.x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((radius - 1.0).abs() < 1e-8, "{radius}");
        }
    }

    #[test]
    fn settings_validation() {
        let cfg = MaxwellConfig::new(2, vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0])], vec![1.0, 1.0], 0).unwrap();
        let problem = ProblemConfig::Maxwell(cfg);
        let mut s = SolverSettings::for_problem(&problem);
        assert_eq!(s.starts, 800);
        s.starts = 0;
        assert!(matches!(find_critical_points(&problem, &s), Err(Error::Validation(_))));
    }

    #[test]
    fn region_helpers() {
        let r = SearchRegion { lo: vec![0.0, 0.0], hi: vec![2.0, 4.0] };
        let big = r.inflated(2.0);
        assert_eq!(big.lo, vec![-1.0, -2.0]);
        assert_eq!(big.hi, vec![3.0, 6.0]);
        assert!(big.contains(&[2.5, -1.0]) && !r.contains(&[2.5, -1.0]));
        let u = r.union(&SearchRegion::cube(2, 1.0));
        assert_eq!(u.lo, vec![-1.0, -1.0]);
    }
}

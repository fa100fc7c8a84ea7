//! Morse index and degeneracy of critical points from the analytic Hessian.

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, Matrix};
use crate::model::Potential;
use crate::problem::ProblemConfig;
use crate::scalar::{lit, Real};
use crate::solve::{SolveReport, CONTINUUM_DIAMETER_FACTOR};

/// Hessians with `|λ|_min / |λ|_max` below this are degenerate.
pub const DEGENERACY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct Classification<T> {
    /// Number of negative eigenvalues; `None` when degenerate.
    pub morse_index: Option<usize>,
    pub degenerate: bool,
    /// Ascending.
    pub eigenvalues: Vec<T>,
    pub condition_ratio: T,
}

pub fn classify_hessian<T: Real>(h: &Matrix<T>, tol: T) -> Classification<T> {
    let eigenvalues = jacobi_eigen(h).values;
    let (lo, hi) = eigenvalues
        .iter()
        .fold((T::infinity(), T::zero()), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
    let condition_ratio = if hi > T::zero() { lo / hi } else { T::zero() };
    let degenerate = condition_ratio < tol;
    let morse_index = (!degenerate).then(|| eigenvalues.iter().filter(|v| **v < T::zero()).count());
    Classification { morse_index, degenerate, eigenvalues, condition_ratio }
}

pub fn classify_potential<T: Real, P: Potential<T>>(pot: &P, p: &[T], tol: T) -> Result<Classification<T>> {
    Ok(classify_hessian(&pot.hessian(p)?, tol))
}

/// Classifies `p` with the default tolerance. Central configurations have no
/// potential Hessian here and are rejected.
pub fn classify_point<T: Real>(problem: &ProblemConfig<T>, p: &[T]) -> Result<Classification<T>> {
    let tol = lit(DEGENERACY_TOL);
    match problem {
        ProblemConfig::Maxwell(c) => classify_potential(c, p, tol),
        ProblemConfig::Sinr(c) => classify_potential(c, p, tol),
        ProblemConfig::Newton(c) => classify_potential(c, p, tol),
        ProblemConfig::Central(_) => {
            Err(Error::InvalidArgument("central configurations are not classified by a Hessian".into()))
        }
    }
}

/// Fills in Morse data for every point and raises `continuum_suspected` when
/// a wide cluster consists of degenerate hits only.
pub fn classify_report(mut report: SolveReport) -> SolveReport {
    if matches!(report.problem, ProblemConfig::Central(_)) {
        return report;
    }
    let radius = report.settings.dedup_radius;
    for point in &mut report.points {
        if let Ok(c) = classify_point(&report.problem, &point.location) {
            point.morse_index = c.morse_index;
            point.degenerate = c.degenerate;
        }
    }
    for point in &report.points {
        if point.diameter <= CONTINUUM_DIAMETER_FACTOR * radius || !point.degenerate {
            continue;
        }
        let all_degenerate = report
            .raw_hits
            .iter()
            .filter(|h| h.cluster_id == point.cluster_id)
            .all(|h| classify_point(&report.problem, &h.x).is_ok_and(|c| c.degenerate));
        if all_degenerate {
            report.continuum_suspected = true;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InverseSinr, MaxwellConfig, NewtonConfig, Point, SinrConfig};
    use crate::solve::{find_critical_points, SolverSettings};

    fn pt(v: &[f64]) -> Point<f64> {
        Point::new(v.to_vec())
    }

    fn pair() -> ProblemConfig<f64> {
        ProblemConfig::Maxwell(
            MaxwellConfig::new(3, vec![pt(&[-1.0, 0.0, 0.0]), pt(&[1.0, 0.0, 0.0])], vec![1.0, 1.0], 1).unwrap(),
        )
    }

    #[test]
    fn midpoint_of_equal_pair() {
        let c = classify_point(&pair(), &[0.0, 0.0, 0.0]).unwrap();
        assert!(!c.degenerate);
        // eigenvalues {-2, -2, 4}: two negative directions
        assert_eq!(c.morse_index, Some(2));
        assert!((c.eigenvalues[0] + 2.0).abs() < 1e-12 && (c.eigenvalues[2] - 4.0).abs() < 1e-12);
        let positive = c.eigenvalues.iter().filter(|v| **v > 0.0).count();
        assert_eq!(c.morse_index.unwrap() + positive, 3);
    }

    #[test]
    fn square_axis_points_are_degenerate() {
        let sites = vec![pt(&[1.0, 1.0, 0.0]), pt(&[-1.0, 1.0, 0.0]), pt(&[-1.0, -1.0, 0.0]), pt(&[1.0, -1.0, 0.0])];
        let cfg = MaxwellConfig::new(3, sites, vec![1.0, -1.0, 1.0, -1.0], 1).unwrap();
        for z in [-2.0, 0.0, 0.5, 3.0] {
            assert!(classify_point(&ProblemConfig::Maxwell(cfg.clone()), &[0.0, 0.0, z]).unwrap().degenerate);
        }
    }

    #[test]
    fn sinr_and_reciprocal_agree_at_critical_points() {
        let sites = vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[0.0, 2.0])];
        let cfg = SinrConfig::new(2, sites, vec![1.0, 1.0, 1.0], 2, 0.5, 0, None).unwrap();
        let problem = ProblemConfig::Sinr(cfg.clone());
        let report = find_critical_points(&problem, &SolverSettings::for_problem(&problem)).unwrap();
        assert!(!report.points.is_empty());
        for p in &report.points {
            let a = classify_potential(&cfg, &p.location, DEGENERACY_TOL).unwrap();
            let b = classify_potential(&InverseSinr(&cfg), &p.location, DEGENERACY_TOL).unwrap();
            assert_eq!(a.degenerate, b.degenerate);
        }
    }

    #[test]
    fn reports() {
        let r = classify_report(find_critical_points(&pair(), &SolverSettings::for_problem(&pair())).unwrap());
        assert_eq!(r.points.iter().filter(|p| !p.degenerate).count(), 1);

        let mut empty = r.clone();
        empty.points.clear();
        empty.raw_hits.clear();
        let out = classify_report(empty.clone());
        assert_eq!(out, empty);

        let newton = ProblemConfig::Newton(NewtonConfig::new(3, vec![pt(&[0.0, 0.0, 0.0])], vec![1.0]).unwrap());
        let r = classify_report(find_critical_points(&newton, &SolverSettings::for_problem(&newton)).unwrap());
        assert!(r.points.iter().all(|p| p.degenerate));
        assert!(r.continuum_suspected);
    }

    #[test]
    fn central_points_are_not_classified() {
        let cfg = crate::model::CentralConfig::new(2, vec![1.0, 1.0], Default::default()).unwrap();
        assert!(classify_point(&ProblemConfig::Central(cfg), &[0.5, 0.0, -0.5, 0.0]).is_err());
    }
}

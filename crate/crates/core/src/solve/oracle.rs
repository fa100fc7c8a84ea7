//! Solver-independent reference answers for the planar logarithmic and the
//! collinear problems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{configuration_scale, grad_maxwell, MaxwellConfig, Point};

const ABERTH_MAX_ITER: usize = 500;
/// Leading coefficients below this fraction of the largest one are dropped.
const LEADING_CUT: f64 = 1e-12;
/// Roots closer than this fraction of the configuration scale are merged.
const MULTIPLICITY_RADIUS: f64 = 1e-6;

/// A root of the oracle polynomial as a point of the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRoot {
    pub point: Point<f64>,
    pub multiplicity: usize,
}

/// Coefficients, constant term first.
fn poly_mul_linear(p: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * root;
    }
    out
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// All roots of `p` (degree ≥ 1) by simultaneous Aberth–Ehrlich iteration.
fn aberth(p: &[Complex64]) -> Vec<Complex64> {
    let deg = p.len() - 1;
    let lead = p[deg];
    let center = -p[deg - 1] / (lead * deg as f64);
    // Cauchy bound on |z - 0| is enough to size the initial circle.
    let radius = 1.0 + p[..deg].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = std::f64::consts::TAU * (k as f64 + 0.25) / deg as f64 + 0.4;
            center + Complex64::from_polar(0.5 * radius, angle)
        })
        .collect();
    for _ in 0..ABERTH_MAX_ITER {
        let mut moved = 0.0f64;
        for k in 0..deg {
            let (v, dv) = horner(p, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Newton on `p` from `z`, keeping the best iterate.
fn newton_polish(p: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = horner(p, z).0.norm();
    for _ in 0..50 {
        let (v, dv) = horner(p, z);
        if v.norm() == 0.0 || dv.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        let r = horner(p, next).0.norm();
        if r >= best {
            break;
        }
        best = r;
        z = next;
    }
    z
}

/// Critical points of `Σ q_i log|p - x_i|` in the plane, as the roots of
/// `P(z) = Σ_i q_i Π_{j≠i} (z - x_j)` (the numerator of the conjugate
/// gradient). Roots landing on a site are dropped.
pub fn complex_oracle_m0_d2(cfg: &MaxwellConfig<f64>) -> Result<Vec<OracleRoot>> {
    if cfg.dim() != 2 || cfg.exponent() != 0 {
        return Err(Error::InvalidArgument("the complex oracle needs d = 2 and m = 0".into()));
    }
    let sites: Vec<Complex64> = cfg.sites().iter().map(|s| Complex64::new(s[0], s[1])).collect();
    let n = sites.len();
    let mut poly = vec![Complex64::new(0.0, 0.0); n];
    for (i, &q) in cfg.charges().iter().enumerate() {
        let mut term = vec![Complex64::new(q, 0.0)];
        for (j, &x) in sites.iter().enumerate() {
            if j != i {
                term = poly_mul_linear(&term, x);
            }
        }
        for (acc, c) in poly.iter_mut().zip(term) {
            *acc += c;
        }
    }
    let top = poly.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while poly.len() > 1 && poly.last().is_some_and(|c| c.norm() <= LEADING_CUT * top) {
        poly.pop();
    }
    if poly.len() < 2 {
        return Ok(Vec::new());
    }
    let scale = configuration_scale(cfg.sites());
    let roots: Vec<Complex64> = aberth(&poly).into_iter().map(|z| newton_polish(&poly, z)).collect();

    let merge = MULTIPLICITY_RADIUS * scale;
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in roots {
        match groups.iter_mut().find(|g| g.iter().any(|w| (w - z).norm() <= merge)) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    let mut out = Vec::new();
    for g in groups {
        let k = g.len();
        let mean = g.iter().sum::<Complex64>() / k as f64;
        // A root of multiplicity k is a simple root of the (k-1)-th derivative.
        let mut dk = poly.clone();
        for _ in 1..k {
            dk = derivative(&dk);
        }
        let z = newton_polish(&dk, mean);
        if sites.iter().any(|s| (s - z).norm() <= cfg.scale() * crate::model::EXCLUSION_FACTOR) {
            continue;
        }
        out.push(OracleRoot { point: Point::new(vec![z.re, z.im]), multiplicity: k });
    }
    out.sort_by(|a, b| a.point[0].total_cmp(&b.point[0]).then(a.point[1].total_cmp(&b.point[1])));
    Ok(out)
}

/// Critical points on the line for same-sign charges: one per gap between
/// consecutive sites, by bisection on `V'` down to adjacent floats.
pub fn line_oracle_d1(cfg: &MaxwellConfig<f64>) -> Result<Vec<Point<f64>>> {
    if cfg.dim() != 1 {
        return Err(Error::InvalidArgument("the line oracle needs d = 1".into()));
    }
    let positive = cfg.charges()[0] > 0.0;
    if cfg.charges().iter().any(|&q| (q > 0.0) != positive) {
        return Err(Error::InvalidArgument("the line oracle needs same-sign charges".into()));
    }
    let mut xs: Vec<f64> = cfg.sites().iter().map(|s| s[0]).collect();
    xs.sort_by(f64::total_cmp);
    let dv = |x: f64| grad_maxwell(cfg, &[x]).map(|g| g[0]);
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let gap = w[1] - w[0];
        let (mut a, mut b) = (w[0] + 1e-6 * gap, w[1] - 1e-6 * gap);
        let (mut fa, fb) = (dv(a)?, dv(b)?);
        if fa.signum() == fb.signum() {
            return Err(Error::InvalidArgument("no sign change of V' in a gap".into()));
        }
        loop {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = dv(mid)?;
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        let x = if dv(a)?.abs() <= dv(b)?.abs() { a } else { b };
        out.push(Point::new(vec![x]));
    }
    Ok(out)
}

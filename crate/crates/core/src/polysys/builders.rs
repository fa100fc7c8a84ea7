//! Builders for the polynomial reformulations of the four problems.

use super::{MultiPoly, PolySystem, Provenance};
use crate::error::{Error, Result};
use crate::model::{CentralConfig, MaxwellConfig, NewtonConfig, Point, SinrConfig};
use crate::scalar::{Real, Scalar};

fn position_vars(d: usize) -> Vec<String> {
    (1..=d).map(|k| format!("p{k}")).collect()
}

fn sigma_vars(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("sigma{j}")).collect()
}

/// `Σ_k (p_k - x_k)²` with `p_k` the variables `offset..offset+d`.
fn squared_distance<C: Scalar>(num_vars: usize, offset: usize, site: &[C]) -> MultiPoly<C> {
    site.iter().enumerate().fold(MultiPoly::zero(num_vars), |acc, (k, x)| {
        let diff = &MultiPoly::var(num_vars, offset + k) - &MultiPoly::constant(num_vars, x.clone());
        &acc + &(&diff * &diff)
    })
}

/// `p_k - x_k` as a polynomial.
fn coordinate_offset<C: Scalar>(num_vars: usize, var: usize, x: &C) -> MultiPoly<C> {
    &MultiPoly::var(num_vars, var) - &MultiPoly::constant(num_vars, x.clone())
}

/// Products of all factors but one, via prefix and suffix products.
fn leave_one_out_products<C: Scalar>(num_vars: usize, factors: &[MultiPoly<C>]) -> Vec<MultiPoly<C>> {
    let n = factors.len();
    let mut prefix = vec![MultiPoly::one(num_vars)];
    for f in factors {
        let next = prefix.last().expect("non-empty") * f;
        prefix.push(next);
    }
    let mut suffix = vec![MultiPoly::one(num_vars); n + 1];
    for i in (0..n).rev() {
        suffix[i] = &suffix[i + 1] * &factors[i];
    }
    (0..n).map(|i| &prefix[i] * &suffix[i + 1]).collect()
}

/// Equations whose zeros are the critical points of the potential when `m`
/// is even: `Σ_i q_i (p_k - x_ik) Π_{j≠i} |p - x_j|^{m+2}`, one per coordinate.
pub fn build_maxwell_even<C: Scalar>(cfg: &MaxwellConfig<C>) -> Result<PolySystem<C>> {
    let m = cfg.exponent();
    if m % 2 == 1 {
        return Err(Error::OddExponent(m));
    }
    let d = cfg.dim();
    let half = (m + 2) / 2;
    let norms: Vec<MultiPoly<C>> = cfg.sites().iter().map(|x| squared_distance(d, 0, x).pow(half)).collect();
    let others = leave_one_out_products(d, &norms);
    let polys = (0..d)
        .map(|k| {
            cfg.sites().iter().zip(cfg.charges()).zip(&others).fold(
                MultiPoly::zero(d),
                |acc, ((x, q), rest)| &acc + &(&coordinate_offset(d, k, &x[k]) * rest).scale(q),
            )
        })
        .collect();
    Ok(PolySystem::new(position_vars(d), polys, Provenance::Eee1, vec![]))
}

/// Slack form valid for every `m`: `Σ_i q_i (p_k - x_ik) σ_i^{m+2}` for each
/// coordinate, followed by `σ_j² |p - x_j|² - 1` for each site.
pub fn build_maxwell_slack<C: Scalar>(cfg: &MaxwellConfig<C>) -> Result<PolySystem<C>> {
    let (d, n, m) = (cfg.dim(), cfg.n(), cfg.exponent());
    let nv = d + n;
    let mut polys = Vec::with_capacity(nv);
    for k in 0..d {
        let eq = cfg.sites().iter().zip(cfg.charges()).enumerate().fold(MultiPoly::zero(nv), |acc, (i, (x, q))| {
            let sigma = MultiPoly::var(nv, d + i).pow(m + 2);
            &acc + &(&coordinate_offset(nv, k, &x[k]) * &sigma).scale(q)
        });
        polys.push(eq);
    }
    polys.extend(slack_constraints(nv, cfg.sites()));
    let mut vars = position_vars(d);
    vars.extend(sigma_vars(n));
    Ok(PolySystem::new(vars, polys, Provenance::Eee2221, sigma_vars(n)))
}

fn slack_constraints<C: Scalar>(nv: usize, sites: &[Point<C>]) -> Vec<MultiPoly<C>> {
    let d = nv - sites.len();
    sites
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let s2 = MultiPoly::var(nv, d + j).pow(2);
            &(&s2 * &squared_distance(nv, 0, x)) - &MultiPoly::one(nv)
        })
        .collect()
}

/// Numerator `f` and denominator `g` with `SINR(x_i, p) = f(p) / g(p)`:
/// `f = ψ_i Π_{j≠i} |x_j - p|^α`,
/// `g = Σ_{j≠i} ψ_j Π_{k≠j} |x_k - p|^α + N Π_k |x_k - p|^α`.
pub fn sinr_fraction<C: Scalar>(cfg: &SinrConfig<C>) -> Result<(MultiPoly<C>, MultiPoly<C>)> {
    let alpha = cfg.alpha();
    if alpha % 2 == 1 {
        return Err(Error::OddExponent(alpha));
    }
    let d = cfg.dim();
    let i = cfg.focus();
    let powers: Vec<MultiPoly<C>> = cfg.sites().iter().map(|x| squared_distance(d, 0, x).pow(alpha / 2)).collect();
    let others = leave_one_out_products(d, &powers);
    let f = others[i].scale(&cfg.powers()[i]);
    let mut g = (0..cfg.n())
        .filter(|&j| j != i)
        .fold(MultiPoly::zero(d), |acc, j| &acc + &others[j].scale(&cfg.powers()[j]));
    if !cfg.noise().is_zero() {
        let all = &others[0] * &powers[0];
        g = &g + &all.scale(cfg.noise());
    }
    Ok((f, g))
}

/// `∂_m f · g - f · ∂_m g` for every coordinate `m`.
pub fn build_sinr<C: Scalar>(cfg: &SinrConfig<C>) -> Result<PolySystem<C>> {
    let (f, g) = sinr_fraction(cfg)?;
    let d = cfg.dim();
    let polys = (0..d)
        .map(|m| &(&f.partial_derivative(m) * &g) - &(&f * &g.partial_derivative(m)))
        .collect();
    Ok(PolySystem::new(position_vars(d), polys, Provenance::SinrEee, vec![]))
}

/// `p_k - Σ_i m_i (p_k - x_ik) σ_i³` for each coordinate, then the slack
/// constraints `σ_j² |p - x_j|² - 1`.
pub fn build_newton_slack<C: Scalar>(cfg: &NewtonConfig<C>) -> Result<PolySystem<C>> {
    let (d, n) = (cfg.dim(), cfg.n());
    let nv = d + n;
    let mut polys = Vec::with_capacity(nv);
    for k in 0..d {
        let pull = cfg.sites().iter().zip(cfg.masses()).enumerate().fold(MultiPoly::zero(nv), |acc, (i, (x, m))| {
            let sigma = MultiPoly::var(nv, d + i).pow(3);
            &acc + &(&coordinate_offset(nv, k, &x[k]) * &sigma).scale(m)
        });
        polys.push(&MultiPoly::var(nv, k) - &pull);
    }
    polys.extend(slack_constraints(nv, cfg.sites()));
    let mut vars = position_vars(d);
    vars.extend(sigma_vars(n));
    Ok(PolySystem::new(vars, polys, Provenance::NewtonEee, sigma_vars(n)))
}

/// Index of `σ_ij` (`i < j`) among the slack variables, lexicographic in `(i, j)`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Normalized central configurations: `x_ik - Σ_{j≠i} m_* σ_ij³ (x_ik - x_jk)`
/// for every body and coordinate, then `σ_ij² |x_i - x_j|² - 1` for `i < j`.
pub fn build_central<C: Scalar>(cfg: &CentralConfig<C>) -> Result<PolySystem<C>> {
    let (d, n) = (cfg.dim(), cfg.n());
    let npairs = n * (n - 1) / 2;
    let nv = n * d + npairs;
    let x = |i: usize, k: usize| MultiPoly::<C>::var(nv, i * d + k);
    let sigma = |i: usize, j: usize| MultiPoly::<C>::var(nv, n * d + pair_index(n, i, j));

    let mut polys = Vec::with_capacity(nv);
    for i in 0..n {
        for k in 0..d {
            let pull = (0..n).filter(|&j| j != i).fold(MultiPoly::zero(nv), |acc, j| {
                let diff = &x(i, k) - &x(j, k);
                &acc + &(&sigma(i, j).pow(3) * &diff).scale(cfg.pair_weight(i, j))
            });
            polys.push(&x(i, k) - &pull);
        }
    }
    let mut vars: Vec<String> = (1..=n).flat_map(|i| (1..=d).map(move |k| format!("x{i}_{k}"))).collect();
    let mut slacks = Vec::with_capacity(npairs);
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = (0..d).fold(MultiPoly::zero(nv), |acc, k| {
                let diff = &x(i, k) - &x(j, k);
                &acc + &(&diff * &diff)
            });
            polys.push(&(&sigma(i, j).pow(2) * &dist) - &MultiPoly::one(nv));
            slacks.push(format!("sigma{}_{}", i + 1, j + 1));
        }
    }
    vars.extend(slacks.iter().cloned());
    Ok(PolySystem::new(vars, polys, Provenance::CentralEee, slacks))
}

/// `(p, σ)` with `σ_j = |p - x_j|^{-1}`: the slack values that make the
/// constraints of the Maxwell and Newton systems vanish.
pub fn point_with_slacks<T: Real>(sites: &[Point<T>], p: &[T]) -> Vec<T> {
    let mut out = p.to_vec();
    out.extend(sites.iter().map(|x| crate::linalg::distance(x, p).recip()));
    out
}

/// Flattened positions followed by `σ_ij = |x_i - x_j|^{-1}`, `i < j`.
pub fn positions_with_slacks<T: Real>(n: usize, d: usize, x: &[T]) -> Vec<T> {
    let mut out = x.to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(crate::linalg::distance(&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d]).recip());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn pt(v: &[f64]) -> Point<f64> {
        Point::new(v.to_vec())
    }

    #[test]
    fn even_maxwell_degrees() {
        let cfg = MaxwellConfig::new(2, vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0])], vec![1.0, 2.0, 3.0], 2)
            .unwrap();
        assert_eq!(build_maxwell_even(&cfg).unwrap().degrees(), vec![9, 9]);
        let odd = MaxwellConfig::new(1, vec![pt(&[0.0])], vec![1.0], 1).unwrap();
        assert_eq!(build_maxwell_even(&odd).unwrap_err(), Error::OddExponent(1));
    }

    #[test]
    fn sinr_degree_cap() {
        let cfg = SinrConfig::new(2, vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0])], vec![1.0, 1.0], 2, 1.0, 0, None).unwrap();
        assert!(build_sinr(&cfg).unwrap().max_degree() <= 5);
    }

    #[test]
    fn central_variables_and_two_body_zero() {
        let cfg = CentralConfig::new(2, vec![1.0; 3], Default::default()).unwrap();
        let sys = build_central(&cfg).unwrap();
        assert_eq!(sys.num_vars(), 9);
        assert_eq!(sys.polys().len(), 9);
        assert_eq!(sys.max_degree(), 4);
        assert_eq!(sys.vars()[6], "sigma1_2");

        let cfg = CentralConfig::new(1, vec![1.0, 1.0], Default::default()).unwrap();
        let a = 4f64.powf(-1.0 / 3.0);
        let z = vec![a, -a, 2f64.powf(-1.0 / 3.0)];
        for v in build_central(&cfg).unwrap().eval(&z).unwrap() {
            assert!(v.abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn newton_sphere_zeroes_slack_system() {
        let cfg = NewtonConfig::new(2, vec![pt(&[0.0, 0.0])], vec![1.0]).unwrap();
        let sys = build_newton_slack(&cfg).unwrap();
        assert_eq!(sys.max_degree(), 4);
        assert_eq!(sys.positivity_constraints(), ["sigma1"]);
        for t in [0.0, 0.7, 2.5] {
            let v = sys.eval(&[f64::cos(t), f64::sin(t), 1.0]).unwrap();
            assert!(v.iter().all(|r| r.abs() < 1e-15));
        }
    }

    #[test]
    fn builders_are_deterministic_and_exact() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let sites = vec![Point::new(vec![q(1, 3), q(0, 1)]), Point::new(vec![q(-1, 2), q(2, 7)])];
        let cfg = MaxwellConfig::new(2, sites, vec![q(1, 1), q(3, 2)], 2).unwrap();
        let a = build_maxwell_even(&cfg).unwrap();
        assert_eq!(a, build_maxwell_even(&cfg).unwrap());
        // at the origin: Σ_i q_i (0 - x_i1) |x_j|^4 with j the other site
        let v = a.eval(&[q(0, 1), q(0, 1)]).unwrap();
        let r0 = q(1, 9);
        let r1 = q(1, 4) + q(4, 49);
        assert_eq!(v[0], -q(1, 3) * &r1 * &r1 + q(3, 2) * q(1, 2) * &r0 * &r0);
    }

    #[test]
    fn slack_substitution() {
        let cfg = MaxwellConfig::new(2, vec![pt(&[0.0, 0.0]), pt(&[2.0, 0.0])], vec![1.0, 1.0], 1).unwrap();
        let sys = build_maxwell_slack(&cfg).unwrap();
        assert_eq!(sys.provenance(), Provenance::Eee2221);
        let z = point_with_slacks(cfg.sites(), &[1.0, 0.0]);
        assert_eq!(z, vec![1.0, 0.0, 1.0, 1.0]);
        assert!(sys.eval(&z).unwrap().iter().all(|v| v.abs() < 1e-15));
        assert!(sys.satisfies_positivity(&z));
    }
}

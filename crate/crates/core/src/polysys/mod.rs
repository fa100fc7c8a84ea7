//! Sparse multivariate polynomials and the polynomial systems whose real
//! zeros are the critical points of each problem.

mod builders;
mod multipoly;

pub use builders::{
    build_central, build_maxwell_even, build_maxwell_slack, build_newton_slack, build_sinr, pair_index,
    point_with_slacks, positions_with_slacks, sinr_fraction,
};
pub use multipoly::{Exponent, MultiPoly};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Which reformulation a system realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "EEE1")]
    Eee1,
    #[serde(rename = "EEE2221")]
    Eee2221,
    #[serde(rename = "SINR_EEE")]
    SinrEee,
    #[serde(rename = "NEWTON_EEE")]
    NewtonEee,
    #[serde(rename = "CENTRAL_EEE")]
    CentralEee,
}

/// Polynomials over a shared, named variable list. Variables listed in
/// `positivity` must be strictly positive at an admissible zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem<C> {
    vars: Vec<String>,
    polys: Vec<MultiPoly<C>>,
    provenance: Provenance,
    positivity: Vec<String>,
}

impl<C: Scalar> PolySystem<C> {
    pub fn new(vars: Vec<String>, polys: Vec<MultiPoly<C>>, provenance: Provenance, positivity: Vec<String>) -> Self {
        debug_assert!(polys.iter().all(|p| p.num_vars() == vars.len()));
        debug_assert!(positivity.iter().all(|v| vars.contains(v)));
        Self { vars, polys, provenance, positivity }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn polys(&self) -> &[MultiPoly<C>] {
        &self.polys
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn positivity_constraints(&self) -> &[String] {
        &self.positivity
    }

    pub fn eval(&self, point: &[C]) -> Result<Vec<C>> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: point.len() });
        }
        self.polys.iter().map(|p| p.eval(point)).collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(MultiPoly::degree).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Whether every positivity-constrained variable is `> 0` at `point`.
    pub fn satisfies_positivity(&self, point: &[C]) -> bool {
        self.positivity
            .iter()
            .filter_map(|name| self.vars.iter().position(|v| v == name))
            .all(|idx| point[idx] > C::zero())
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> PolySystem<D> {
        PolySystem {
            vars: self.vars.clone(),
            polys: self.polys.iter().map(|p| p.map_coeffs(&f)).collect(),
            provenance: self.provenance,
            positivity: self.positivity.clone(),
        }
    }

    /// JSON document: variables, provenance, positivity constraints and, per
    /// polynomial, its terms as `[exponent-vector, coefficient-string]` pairs.
    pub fn to_json(&self) -> Value {
        let polys: Vec<Value> = self
            .polys
            .iter()
            .map(|p| Value::Array(p.terms().map(|(e, c)| json!([e, c.to_coeff_string()])).collect()))
            .collect();
        json!({
            "vars": self.vars,
            "provenance": self.provenance,
            "positivityConstraints": self.positivity,
            "polys": polys,
        })
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("malformed system document: {what}"));
        let vars: Vec<String> =
            serde_json::from_value(doc.get("vars").cloned().ok_or_else(|| bad("vars"))?).map_err(|_| bad("vars"))?;
        let provenance: Provenance = serde_json::from_value(doc.get("provenance").cloned().ok_or_else(|| bad("provenance"))?)
            .map_err(|_| bad("provenance"))?;
        let positivity: Vec<String> = serde_json::from_value(doc.get("positivityConstraints").cloned().unwrap_or(json!([])))
            .map_err(|_| bad("positivityConstraints"))?;
        let raw: Vec<Vec<(Vec<u32>, String)>> =
            serde_json::from_value(doc.get("polys").cloned().ok_or_else(|| bad("polys"))?).map_err(|_| bad("polys"))?;
        let polys = raw
            .into_iter()
            .map(|terms| {
                let parsed = terms
                    .into_iter()
                    .map(|(e, c)| C::parse_coeff(&c).map(|c| (e, c)).ok_or_else(|| bad("coefficient")))
                    .collect::<Result<Vec<_>>>()?;
                MultiPoly::from_terms(vars.len(), parsed)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { vars, polys, provenance, positivity })
    }
}

impl<C: Real> PolySystem<C> {
    /// Largest `|P(z)| / Σ|terms of P at z|` over the polynomials: the
    /// relative size of the residual compared with the cancelling terms.
    pub fn relative_residual(&self, point: &[C]) -> Result<C> {
        let mut worst = C::zero();
        for p in &self.polys {
            let v = p.eval(point)?.abs();
            let scale = p.eval_abs(point)?;
            if scale > C::zero() {
                worst = worst.max(v / scale);
            }
        }
        Ok(worst)
    }
}

pub fn eval_system<C: Scalar>(sys: &PolySystem<C>, point: &[C]) -> Result<Vec<C>> {
    sys.eval(point)
}

pub fn degrees<C: Scalar>(sys: &PolySystem<C>) -> Vec<u32> {
    sys.degrees()
}

pub fn max_degree<C: Scalar>(sys: &PolySystem<C>) -> u32 {
    sys.max_degree()
}

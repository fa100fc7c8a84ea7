//! Equilibria of point-source potentials.
//!
//! Four families are covered: point charges with potential `Σ q_i |p - x_i|^{-m}`
//! (logarithmic for `m = 0`), the SINR field of a wireless network, Newtonian
//! masses with an added quadratic term, and normalized central configurations
//! of the n-body problem. For each family the crate
//!
//! * evaluates the potential with analytic gradients and Hessians ([`model`]),
//! * builds the polynomial systems whose real zeros are the critical points
//!   ([`polysys`]),
//! * evaluates the Thom–Milnor bounds on isolated zeros exactly ([`bounds`]),
//! * locates critical points by multistart damped Newton and checks them
//!   against independent oracles ([`solve`]),
//! * classifies them by Hessian spectrum ([`classify`]).
//!
//! The numerical code is generic over [`scalar::Real`]; the polynomial code
//! over [`scalar::Scalar`], which includes exact rationals.

pub mod bounds;
pub mod classify;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod polysys;
pub mod problem;
pub mod scalar;
pub mod solve;

pub use error::{Error, Result};
pub use problem::{ExactProblem, ProblemConfig};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type Point = model::Point<f64>;
pub type MaxwellConfig = model::MaxwellConfig<f64>;
pub type SinrConfig = model::SinrConfig<f64>;
pub type NewtonConfig = model::NewtonConfig<f64>;
pub type CentralConfig = model::CentralConfig<f64>;
pub type Problem = ProblemConfig<f64>;
pub type FloatPoly = polysys::MultiPoly<f64>;
pub type ExactPoly = polysys::MultiPoly<Rational>;
pub type FloatSystem = polysys::PolySystem<f64>;
pub type ExactSystem = polysys::PolySystem<Rational>;

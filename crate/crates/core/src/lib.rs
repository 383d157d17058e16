//! Decide whether a quasi-linear ODE `y^(n) + f(x, y, y', ..., y^(n-1)) = 0`
//! can be mapped to a linear equation by an invertible point transformation
//! `u = phi(x, y)`, `t = psi(x, y)`.
//!
//! Two independent tests are provided:
//!
//! * [`liealg::linearization_test_1`] builds the Lie point-symmetry algebra
//!   (determining system, Janet completion, power series, structure
//!   constants) and inspects its dimension and derived algebra.
//! * [`linearize::linearization_test_2`] builds the linearizing differential
//!   system for `phi`, `psi` and the Laguerre-Forsyth coefficients and runs a
//!   differential Thomas decomposition on it; the equation is linearizable
//!   iff the decomposition is nonempty.

pub mod diffalg;
pub mod error;
pub mod involution;
mod janet;
pub mod liealg;
pub mod linearize;
pub mod parser;
pub mod poly;
pub mod ranking;
pub mod rational;
pub mod symmetry;
pub mod thomas;

pub use error::{Error, Result};
pub use involution::{janet_complete, DimensionPolynomial, InvolutiveSystem};
pub use liealg::{linearization_test_1, DerivedAlgebraInfo, LieAlgebraStructure, Test1Report};
pub use linearize::{
    linearization_test_2, linearization_test_2_with, linearizing_system, LinearizingSystem,
};
pub use parser::{parse_ode, parse_poly, ODEProblem};
pub use poly::{Deriv, DiffPolynomial, Dir, Func, Monomial, Rational, Var};
pub use ranking::Ranking;
pub use rational::DiffRational;
pub use symmetry::{determining_system, DeterminingSystem};
pub use thomas::{
    reduce_modulo, thomas_decompose, thomas_decompose_with, DecompositionResult, DifferentialSystem,
    Limits, SimpleSystem,
};

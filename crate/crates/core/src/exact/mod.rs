//! Exact arithmetic: rationals, sparse polynomials, rational functions and
//! linear algebra over their fraction fields.

pub mod interpolate;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod upoly;
pub mod var;

pub use interpolate::rational_interpolate;
pub use linalg::{solve_linear_over_field, LinearSolution};
pub use poly::{Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use var::Var;

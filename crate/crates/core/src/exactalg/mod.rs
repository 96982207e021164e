//! Exact arithmetic substrate: rationals, multivariate polynomials, resultants and certified roots.

pub mod ball;
pub mod intmat;
pub mod multipoly;
pub mod parse;
pub mod rational;
pub mod resultant;
pub mod roots;
pub mod upoly;

pub use ball::{CRat, ComplexBall};
pub use multipoly::{poly_arith, MultiPoly, PolyOp};
pub use parse::{parse_poly, parse_univariate};
pub use rational::Rational;
pub use resultant::{discriminant, discriminant_in, resultant};
pub use roots::{certified_roots, isolate_roots};
pub use upoly::UPoly;

//! Exact computational toolkit for monic integer quartics with Galois group `C4` or `D4`.
//!
//! The crate builds the multiplication matrix of `a0 + a1 r + a2 r^2 + a3 r^3`, its cofactors and
//! the auxiliary ternary forms `q3`, `q = q1 q2`, realises `q1` as an incomplete norm form, and
//! provides local counts, lattices, constant-system checks and small counting experiments.

pub mod arith;
pub mod error;
pub mod cofactors;
pub mod exactalg;
pub mod experiments;
pub mod identity;
pub mod lattice;
pub mod localcount;
pub mod normform;
pub mod quartic;
pub mod sieveconfig;

pub use error::{Error, Result};

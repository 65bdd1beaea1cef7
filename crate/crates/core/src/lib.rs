//! Exact arithmetic for Cappell-Shaneson polynomials: doubly monic integer
//! polynomials whose companion matrix `A` satisfies `det(I - ∧^k A) = ±1`
//! for every `1 <= k <= n/2`.

pub mod cs_core;
mod decimal;
pub mod dioph6;
pub mod error;
pub mod families;
pub mod finite_field;
pub mod intpoly;
pub mod primes;
pub mod searcher;

pub use error::{Error, Result};
pub use intpoly::{IntMatrix, IntPoly};

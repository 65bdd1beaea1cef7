//! Polynomials over `F_p` and roots in extensions `F_{p^m}`.
//!
//! Factoring is square-free decomposition followed by distinct-degree and
//! Cantor-Zassenhaus equal-degree splitting. The splitter is randomized
//! but seeded, so results are reproducible.

mod ext;
mod field;
mod fp;
mod regular;

pub use ext::{roots_in_extension, ExtField, ExtFieldElem};
pub use field::{FieldOps, PrimeField};
pub use fp::{format_factorization, reduce_mod_p, Factor, FpPoly};
pub use regular::{
    det_i_minus_wedge_mod_p, is_k_regular_mod_p, is_k_regular_mod_p_by_det, is_regular_mod_p, k_regularity_violation,
    regularity_violation, RegularityViolation,
};

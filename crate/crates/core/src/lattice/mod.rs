//! Exact integer linear algebra over lattices.

mod embedding;
mod matrix;
mod normal_form;
mod ops;

pub use embedding::{DualPairing, LatticeEmbedding, Presentation};
pub use matrix::{
    content, dot, independent_rows, is_primitive, ivec, primitive, rank_of_rows, rational_combination, vec_add,
    vec_scale, vec_sub, Int, IntMatrix, IntVec,
};
pub use normal_form::{elementary_divisors, hnf, hnf_pivots, is_hnf, is_snf, snf};
pub use ops::{extend_to_basis, kernel_basis, nonzero_rows, reduce_mod_lattice, saturate, solve_linear_integer, SublatticeCoords};

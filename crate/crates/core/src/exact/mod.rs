//! Exact rational scalars, dense matrices, Kronecker products and the support
//! ordering used throughout the crate.

mod matrix;
mod rational;
mod support;

pub use matrix::{
    apply_per_coordinate, block2, dot, kron_power, kronecker, per_coordinate_matrix, rank_of_rows,
    Block2, Matrix,
};
pub use rational::{
    format_rational, int, is_probability, parse_rational, ratio, sqrt_rational, to_decimal, to_f64,
    to_fixed, Rational, Sqrt,
};
pub use support::{
    check_dimension, enumerate_support, pair_index, pairs, point, SupportOrdering, MAX_DIMENSION,
};

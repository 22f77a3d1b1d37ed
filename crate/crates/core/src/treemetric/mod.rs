//! Tree metric of an excursion on a grid, distance matrices and
//! two-sample comparisons.

mod ks;
mod matrix;
mod oracle;

pub use ks::{kolmogorov_sf, ks_one_sample, ks_two_sample, KsResult};
pub use matrix::{sample_distance_matrix, DistanceMatrix};
pub use oracle::DistanceOracle;

//! Random self-similar real trees built from recursive decompositions.
//!
//! A finite structural tree together with a law for scaling factors defines a
//! fixed-point equation for a random excursion. The modules here solve for the
//! self-similarity index, iterate the equation on parameter trees, extract the
//! induced tree metric, estimate fractal dimensions and simulate the
//! disk-lamination processes whose height functions fall in this class.

pub mod error;
pub mod excursion;
pub mod fractal;
pub mod lamination;
pub mod presets;
pub mod rng;
pub mod special;
pub mod structural;
pub mod treemetric;

pub use error::{Error, Result};

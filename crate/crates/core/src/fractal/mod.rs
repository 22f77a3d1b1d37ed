//! Box-counting style estimators on grid excursions: divider and covering
//! counts, dimension fits, ball-mass profiles and Hölder moduli.

mod ballmass;
mod counts;
mod estimate;
pub(crate) mod fit;
mod holder;

pub use ballmass::{ball_mass_profile, BallMassRow};
pub use counts::{count_ladder, covering_count, divider_count, dyadic_deltas, CountKind, CountLadder};
pub use estimate::{estimate_dimension, sample_grid, DimensionConfig, DimensionEstimate};
pub use fit::{dimension_fit, DimensionFit};
pub use holder::holder_modulus;

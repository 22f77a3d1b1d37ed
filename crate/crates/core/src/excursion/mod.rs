//! Excursions: interval layout, the composition operator, parameter trees,
//! the iterative scheme, the time change and the perpetuity samplers.

mod grid;
mod layout;
mod lazy;
mod params;
mod perpetuity;
mod scheme;
mod timechange;

pub use grid::{BaseProfile, DumpHeader, GridExcursion};
pub use layout::{compose_excursions, interval_layout, IntervalLayout};
pub use lazy::LazyEvaluator;
pub use params::{Address, NodeParams, ParameterTree};
pub use perpetuity::{classify_pair, sample_height_perpetuity, sample_pair_distance, PairCase};
pub use scheme::{evaluate_grid, evaluate_lazy, iterate_scheme, DEFAULT_NODE_BUDGET};
pub use timechange::{time_change, time_change_lazy, TimeChange};

//! Random non-crossing k-angulations of the disk and their dual-tree heights.

mod disk;
mod experiment;

pub use disk::{DiskLamination, Fragment};
pub use experiment::{geometric_checkpoints, run_batch, run_scaling, Checkpoint, LaminationModel, ScalingRun, ScalingSummary};

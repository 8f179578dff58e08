//! Deterministic building blocks for synthetic human-action data.
//!
//! The crate turns estimated body-model motion into fully specified render
//! jobs and provides the surrounding training/evaluation utilities:
//!
//! - [`motion_model`]: axis-angle/quaternion rotations, pose sequences and
//!   temporal smoothing.
//! - [`augmentation`]: additive quaternion noise, DTW alignment and
//!   sequence interpolation.
//! - [`scene`]: camera viewpoints, multi-person translation handling,
//!   appearance randomization and render manifests.
//! - [`sampling`]: training and test-time frame sampling, epoch balancing.
//! - [`eval`]: a DTW nearest-neighbor classifier on toy motion classes.
//! - [`motion_file`]: the line-delimited motion file format.
//!
//! All randomness flows from explicit seeds; see [`rng`].

pub mod augmentation;
pub mod error;
pub mod eval;
pub mod motion_file;
pub mod motion_model;
pub mod rng;
pub mod sampling;
pub mod scene;

pub use error::{Error, Result};

//! Motion diversity: additive quaternion noise, DTW alignment, and
//! interpolation between performers of the same action.

mod dtw;
mod interpolate;
mod noise;

pub use dtw::{dtw, dtw_align, dtw_align_clips, dtw_frames, frame_pose_distance, WarpPath};
pub use interpolate::{
    blend_quaternions, interpolate_sequences, interpolated_source_id, DEFAULT_WEIGHT,
};
pub use noise::{
    additive_noise, noise_offsets, Granularity, NoiseSpec, DEFAULT_KEYFRAME_INTERVAL, DEFAULT_SIGMA,
};

use crate::error::{Error, Result};
use crate::motion_model::{MotionClip, PoseSequence, QuatPose, Quaternion, NUM_BETAS, NUM_JOINTS};

use super::dtw::{dtw_align_clips, WarpPath};

/// Blend weight used when none is configured: both parents count equally.
pub const DEFAULT_WEIGHT: f64 = 0.5;

/// Normalized linear blend `(1 - w)·a + w·b` after flipping `b` into `a`'s
/// hemisphere.
pub fn blend_quaternions(a: &Quaternion, b: &Quaternion, weight: f64) -> Result<Quaternion> {
    let b = if a.dot(b) < 0.0 { b.neg() } else { *b };
    let (qa, qb) = (a.to_array(), b.to_array());
    Quaternion::from_array(std::array::from_fn(|c| {
        (1.0 - weight) * qa[c] + weight * qb[c]
    }))
}

fn lerp(a: f64, b: f64, weight: f64) -> f64 {
    (1.0 - weight) * a + weight * b
}

fn blend_person(
    a: &PoseSequence,
    b: &PoseSequence,
    path: &WarpPath,
    weight: f64,
) -> Result<PoseSequence> {
    let (qa, qb) = (a.quaternions(), b.quaternions());
    let mut poses: Vec<QuatPose> = Vec::with_capacity(path.len());
    let mut trans = Vec::with_capacity(path.len());
    for &(i, j) in path.pairs() {
        let mut frame = [Quaternion::IDENTITY; NUM_JOINTS];
        for (k, slot) in frame.iter_mut().enumerate() {
            *slot = blend_quaternions(&qa[i][k], &qb[j][k], weight)?;
        }
        poses.push(frame);
        let (ta, tb) = (a.trans()[i], b.trans()[j]);
        trans.push(std::array::from_fn(|c| lerp(ta[c], tb[c], weight)));
    }
    let betas: [f64; NUM_BETAS] = std::array::from_fn(|c| lerp(a.betas()[c], b.betas()[c], weight));
    PoseSequence::from_quaternions(&poses, betas, trans, a.fps())
}

/// Source id given to the blend of `a` and `b`.
pub fn interpolated_source_id(a: &str, b: &str, weight: f64) -> String {
    format!("{a}~{b}@{weight}")
}

/// Time-aligns two clips of the same action with DTW and blends their
/// quaternions along the warp path.
///
/// All people share one path, computed from the per-frame distance summed
/// over people, so the output keeps a common timeline. Translations and
/// shapes are blended with the same weight. The output has one frame per
/// path pair and the frame rate of `a`.
pub fn interpolate_sequences(a: &MotionClip, b: &MotionClip, weight: f64) -> Result<MotionClip> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidParameter(format!(
            "interpolation weight must lie in [0, 1], got {weight}"
        )));
    }
    if a.action_label() != b.action_label() {
        return Err(Error::ClassMismatch {
            left: a.action_label(),
            right: b.action_label(),
        });
    }
    let (path, _) = dtw_align_clips(a, b)?;
    let people = a
        .people()
        .iter()
        .zip(b.people())
        .map(|(pa, pb)| blend_person(pa, pb, &path, weight))
        .collect::<Result<Vec<_>>>()?;
    MotionClip::new(
        people,
        a.action_label(),
        interpolated_source_id(a.source_id(), b.source_id(), weight),
    )
}

use serde::{Deserialize, Serialize};

use super::{PoseSequence, QuatPose, Quaternion, NUM_JOINTS};
use crate::error::{Error, Result};

/// Temporal averaging weights centered on the output frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Kernel {
    weights: Vec<f64>,
}

impl Kernel {
    /// Weights must be nonnegative, sum to one, and have odd length.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "kernel window must be odd, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "kernel weights must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "kernel weights must sum to 1, got {sum}"
            )));
        }
        Ok(Kernel { weights })
    }

    /// Identity kernel.
    pub fn delta() -> Self {
        Kernel { weights: vec![1.0] }
    }

    pub fn boxcar(window: usize) -> Result<Self> {
        check_window(window)?;
        Kernel::new(vec![1.0 / window as f64; window])
    }

    /// Normalized triangle, e.g. window 5 gives `[1, 2, 3, 2, 1] / 9`.
    pub fn triangular(window: usize) -> Result<Self> {
        check_window(window)?;
        let half = window / 2;
        let raw: Vec<f64> = (0..window)
            .map(|k| (half + 1 - k.abs_diff(half)) as f64)
            .collect();
        let sum: f64 = raw.iter().sum();
        Kernel::new(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn window(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Renormalized `(source frame, weight)` pairs for output frame `t`, with
    /// the window truncated at the sequence ends.
    fn taps(&self, t: usize, frames: usize) -> Vec<(usize, f64)> {
        let half = self.weights.len() / 2;
        let taps: Vec<(usize, f64)> = self
            .weights
            .iter()
            .enumerate()
            .filter_map(|(k, &w)| {
                let src = (t + k).checked_sub(half)?;
                (src < frames && w > 0.0).then_some((src, w))
            })
            .collect();
        let total: f64 = taps.iter().map(|(_, w)| w).sum();
        if total <= 0.0 {
            return vec![(t, 1.0)];
        }
        taps.into_iter().map(|(s, w)| (s, w / total)).collect()
    }
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::triangular(5).expect("valid default window")
    }
}

impl TryFrom<Vec<f64>> for Kernel {
    type Error = Error;

    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Kernel::new(weights)
    }
}

impl From<Kernel> for Vec<f64> {
    fn from(k: Kernel) -> Self {
        k.weights
    }
}

fn check_window(window: usize) -> Result<()> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "kernel window must be odd, got {window}"
        )));
    }
    Ok(())
}

/// Componentwise weighted average of translations.
pub fn smooth_translations(trans: &[[f64; 3]], kernel: &Kernel) -> Vec<[f64; 3]> {
    if kernel.window() == 1 {
        return trans.to_vec();
    }
    (0..trans.len())
        .map(|t| {
            let mut acc = [0.0; 3];
            for (src, w) in kernel.taps(t, trans.len()) {
                for c in 0..3 {
                    acc[c] += w * trans[src][c];
                }
            }
            acc
        })
        .collect()
}

/// Weighted linear averaging of joint rotations in quaternion space, followed
/// by renormalization. Translations use the same kernel; shape is untouched.
pub fn smooth_pose_sequence(seq: &PoseSequence, kernel: &Kernel) -> Result<PoseSequence> {
    if kernel.window() == 1 {
        return Ok(seq.clone());
    }
    let frames = seq.frames();
    let mut out: Vec<QuatPose> = vec![[Quaternion::IDENTITY; NUM_JOINTS]; frames];
    for joint in 0..NUM_JOINTS {
        let track = seq.joint_track(joint);
        for (t, frame) in out.iter_mut().enumerate() {
            let mut acc = [0.0; 4];
            for (src, w) in kernel.taps(t, frames) {
                let q = track[src].to_array();
                for c in 0..4 {
                    acc[c] += w * q[c];
                }
            }
            frame[joint] = Quaternion::from_array(acc)?;
        }
    }
    PoseSequence::from_quaternions(
        &out,
        *seq.betas(),
        smooth_translations(seq.trans(), kernel),
        seq.fps(),
    )
}

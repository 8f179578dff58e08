//! Body-model pose sequences, rotation representations and temporal smoothing.

mod rotation;
mod smoothing;

pub use rotation::{
    axis_angle_to_quaternion, hemisphere_align, matrix_distance, quaternion_to_axis_angle,
    AxisAngle, Quaternion, UNIT_TOLERANCE,
};
pub use smoothing::{smooth_pose_sequence, smooth_translations, Kernel};

use crate::error::{Error, Result};

/// Joints in the body model's kinematic tree.
pub const NUM_JOINTS: usize = 24;
/// Dimension of the body shape space.
pub const NUM_BETAS: usize = 10;

/// One frame of joint rotations.
pub type Pose = [AxisAngle; NUM_JOINTS];
/// One frame of joint rotations as quaternions.
pub type QuatPose = [Quaternion; NUM_JOINTS];

/// Per-frame joint rotations, body shape and root translation of one person.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseSequence {
    poses: Vec<Pose>,
    betas: [f64; NUM_BETAS],
    trans: Vec<[f64; 3]>,
    fps: f64,
}

impl PoseSequence {
    pub fn new(
        poses: Vec<Pose>,
        betas: [f64; NUM_BETAS],
        trans: Vec<[f64; 3]>,
        fps: f64,
    ) -> Result<Self> {
        if poses.is_empty() {
            return Err(Error::InvalidInput(
                "pose sequence needs at least one frame".into(),
            ));
        }
        if trans.len() != poses.len() {
            return Err(Error::Shape(format!(
                "{} pose frames but {} translations",
                poses.len(),
                trans.len()
            )));
        }
        if !(fps.is_finite() && fps > 0.0) {
            return Err(Error::InvalidInput(format!(
                "fps must be positive, got {fps}"
            )));
        }
        if poses.iter().flatten().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("non-finite joint rotation".into()));
        }
        if trans.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite translation".into()));
        }
        if betas.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("non-finite shape parameter".into()));
        }
        Ok(PoseSequence {
            poses,
            betas,
            trans,
            fps,
        })
    }

    /// Builds a sequence from per-frame quaternion poses.
    pub fn from_quaternions(
        quats: &[QuatPose],
        betas: [f64; NUM_BETAS],
        trans: Vec<[f64; 3]>,
        fps: f64,
    ) -> Result<Self> {
        let poses = quats
            .iter()
            .map(|frame| {
                let mut pose = [AxisAngle::IDENTITY; NUM_JOINTS];
                for (slot, q) in pose.iter_mut().zip(frame) {
                    *slot = quaternion_to_axis_angle(*q)?;
                }
                Ok(pose)
            })
            .collect::<Result<Vec<_>>>()?;
        PoseSequence::new(poses, betas, trans, fps)
    }

    pub fn frames(&self) -> usize {
        self.poses.len()
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn betas(&self) -> &[f64; NUM_BETAS] {
        &self.betas
    }

    pub fn trans(&self) -> &[[f64; 3]] {
        &self.trans
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    /// Joint rotations of every frame as canonical quaternions.
    pub fn quaternions(&self) -> Vec<QuatPose> {
        self.poses
            .iter()
            .map(|pose| {
                let mut out = [Quaternion::IDENTITY; NUM_JOINTS];
                for (slot, a) in out.iter_mut().zip(pose) {
                    // finiteness is a construction invariant
                    *slot = axis_angle_to_quaternion(*a).expect("finite rotation");
                }
                out
            })
            .collect()
    }

    /// Quaternion track of one joint, hemisphere-aligned over time.
    pub fn joint_track(&self, joint: usize) -> Vec<Quaternion> {
        let raw: Vec<Quaternion> = self
            .poses
            .iter()
            .map(|pose| axis_angle_to_quaternion(pose[joint]).expect("finite rotation"))
            .collect();
        hemisphere_align(&raw)
    }

    pub fn with_trans(&self, trans: Vec<[f64; 3]>) -> Result<Self> {
        PoseSequence::new(self.poses.clone(), self.betas, trans, self.fps)
    }

    pub fn with_betas(&self, betas: [f64; NUM_BETAS]) -> Result<Self> {
        PoseSequence::new(self.poses.clone(), betas, self.trans.clone(), self.fps)
    }

    /// Frames in reverse temporal order.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.poses.reverse();
        out.trans.reverse();
        out
    }

    /// Largest per-joint geodesic angle between the two sequences, frame by
    /// frame. `None` when frame counts differ.
    pub fn max_rotation_distance(&self, other: &PoseSequence) -> Option<f64> {
        if self.frames() != other.frames() {
            return None;
        }
        let a = self.quaternions();
        let b = other.quaternions();
        let worst = a
            .iter()
            .zip(&b)
            .flat_map(|(fa, fb)| fa.iter().zip(fb).map(|(p, q)| p.angle_to(q)))
            .fold(0.0f64, f64::max);
        Some(worst)
    }
}

/// One or more people sharing a timeline, labeled with an action class.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionClip {
    people: Vec<PoseSequence>,
    action_label: u32,
    source_id: String,
}

impl MotionClip {
    pub fn new(
        people: Vec<PoseSequence>,
        action_label: u32,
        source_id: impl Into<String>,
    ) -> Result<Self> {
        let source_id = source_id.into();
        let first = people
            .first()
            .ok_or_else(|| Error::InvalidInput("clip needs at least one person".into()))?;
        let (frames, fps) = (first.frames(), first.fps());
        for (i, p) in people.iter().enumerate().skip(1) {
            if p.frames() != frames {
                return Err(Error::Shape(format!(
                    "person {i} has {} frames, person 0 has {frames}",
                    p.frames()
                )));
            }
            if p.fps() != fps {
                return Err(Error::Shape(format!(
                    "person {i} has fps {}, person 0 has {fps}",
                    p.fps()
                )));
            }
        }
        if source_id.is_empty() {
            return Err(Error::InvalidInput("source id must be nonempty".into()));
        }
        Ok(MotionClip {
            people,
            action_label,
            source_id,
        })
    }

    pub fn people(&self) -> &[PoseSequence] {
        &self.people
    }

    pub fn action_label(&self) -> u32 {
        self.action_label
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn frames(&self) -> usize {
        self.people[0].frames()
    }

    pub fn fps(&self) -> f64 {
        self.people[0].fps()
    }

    /// Same label and source with a new set of people.
    pub fn with_people(&self, people: Vec<PoseSequence>) -> Result<Self> {
        MotionClip::new(people, self.action_label, self.source_id.clone())
    }

    pub fn with_source_id(&self, source_id: impl Into<String>) -> Result<Self> {
        MotionClip::new(self.people.clone(), self.action_label, source_id)
    }

    pub fn with_label(&self, action_label: u32) -> Self {
        MotionClip {
            action_label,
            ..self.clone()
        }
    }

    /// Largest per-joint rotation distance over all people and frames.
    pub fn max_rotation_distance(&self, other: &MotionClip) -> Option<f64> {
        if self.people.len() != other.people.len() {
            return None;
        }
        self.people
            .iter()
            .zip(&other.people)
            .map(|(a, b)| a.max_rotation_distance(b))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}

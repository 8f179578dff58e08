use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{LabeledClip, LabeledDataset};
use crate::error::{Error, Result};
use crate::motion_model::{AxisAngle, MotionClip, Pose, PoseSequence, NUM_BETAS, NUM_JOINTS};
use crate::rng;
use crate::scene::Split;

/// Parameters of the synthetic motion-class generator.
///
/// Every class is a program that drives each joint with a sinusoid about a
/// fixed axis, on top of a fixed rest rotation. Programs use distinct
/// frequencies (class `b` runs `1 + b/2` cycles per clip) and randomly drawn
/// axes, amplitudes and phases. With `reversed_pairs`, class `2k + 1` plays
/// program `k` backwards in time, so the two only differ in frame order.
///
/// Instances add three kinds of jitter: a constant rotation-vector offset
/// per joint (`jitter`, radians), independent per-frame noise
/// (`frame_jitter`, radians) and a phase shift (`phase_jitter`, radians).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToySpec {
    pub num_classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub frames: usize,
    pub jitter: f64,
    pub frame_jitter: f64,
    pub phase_jitter: f64,
    pub reversed_pairs: bool,
    pub seed: u64,
}

impl ToySpec {
    /// `per_class` training instances per class and no test instances.
    pub fn new(num_classes: usize, per_class: usize, frames: usize, seed: u64) -> Self {
        ToySpec {
            num_classes,
            train_per_class: per_class,
            test_per_class: 0,
            frames,
            jitter: 0.05,
            frame_jitter: 0.0,
            phase_jitter: 0.0,
            reversed_pairs: false,
            seed,
        }
    }

    pub fn with_test(mut self, test_per_class: usize) -> Self {
        self.test_per_class = test_per_class;
        self
    }

    pub fn with_jitter(mut self, jitter: f64, frame_jitter: f64, phase_jitter: f64) -> Self {
        self.jitter = jitter;
        self.frame_jitter = frame_jitter;
        self.phase_jitter = phase_jitter;
        self
    }

    pub fn with_reversed_pairs(mut self, reversed: bool) -> Self {
        self.reversed_pairs = reversed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_classes < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 classes, got {}",
                self.num_classes
            )));
        }
        if self.frames == 0 {
            return Err(Error::InvalidParameter("frames must be >= 1".into()));
        }
        for (name, v) in [
            ("jitter", self.jitter),
            ("frame_jitter", self.frame_jitter),
            ("phase_jitter", self.phase_jitter),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

struct JointProgram {
    rest: [f64; 3],
    axis: [f64; 3],
    amplitude: f64,
    phase: f64,
}

struct ClassProgram {
    cycles: f64,
    joints: Vec<JointProgram>,
}

impl ClassProgram {
    fn draw<R: Rng + ?Sized>(index: usize, rng: &mut R) -> Self {
        let joints = (0..NUM_JOINTS)
            .map(|_| {
                let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-12);
                let rest: [f64; 3] = std::array::from_fn(|_| {
                    0.3 * Distribution::<f64>::sample(&StandardNormal, rng)
                });
                JointProgram {
                    rest,
                    axis: v.map(|c| c / n),
                    amplitude: rng.gen_range(0.3..0.8),
                    phase: rng.gen_range(0.0..TAU),
                }
            })
            .collect();
        ClassProgram {
            cycles: 1.0 + 0.5 * index as f64,
            joints,
        }
    }
}

fn instance<R: Rng + ?Sized>(
    program: &ClassProgram,
    reversed: bool,
    spec: &ToySpec,
    rng: &mut R,
) -> Result<PoseSequence> {
    let jitter = Normal::new(0.0, spec.jitter).expect("validated");
    let frame_jitter = Normal::new(0.0, spec.frame_jitter).expect("validated");
    let phase_jitter = Normal::new(0.0, spec.phase_jitter).expect("validated");
    let offsets: Vec<[f64; 3]> = (0..NUM_JOINTS)
        .map(|_| std::array::from_fn(|_| jitter.sample(rng)))
        .collect();
    let shift = phase_jitter.sample(rng);
    let span = (spec.frames.max(2) - 1) as f64;
    let poses: Vec<Pose> = (0..spec.frames)
        .map(|t| {
            let tau = t as f64 / span;
            let tau = if reversed { 1.0 - tau } else { tau };
            let mut pose = [AxisAngle::IDENTITY; NUM_JOINTS];
            for (j, slot) in pose.iter_mut().enumerate() {
                let jp = &program.joints[j];
                let angle = jp.amplitude * (TAU * program.cycles * tau + jp.phase + shift).sin();
                let v: [f64; 3] = std::array::from_fn(|c| {
                    jp.rest[c] + jp.axis[c] * angle + offsets[j][c] + frame_jitter.sample(rng)
                });
                *slot = AxisAngle::from_array(v);
            }
            pose
        })
        .collect();
    PoseSequence::new(poses, [0.0; NUM_BETAS], vec![[0.0; 3]; spec.frames], 30.0)
}

/// Generates `train_per_class + test_per_class` clips per class.
///
/// Programs come from stream `(seed, 0)`; instance `k` (counted over all
/// classes, train before test within a class) from stream `(seed, k + 1)`.
pub fn generate_toy_dataset(spec: &ToySpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let programs_needed = if spec.reversed_pairs {
        spec.num_classes.div_ceil(2)
    } else {
        spec.num_classes
    };
    let mut program_rng = rng::derived(spec.seed, 0);
    let programs: Vec<ClassProgram> = (0..programs_needed)
        .map(|b| ClassProgram::draw(b, &mut program_rng))
        .collect();

    let mut items = Vec::new();
    let mut k = 0u64;
    for class in 0..spec.num_classes {
        let (program, reversed) = if spec.reversed_pairs {
            (&programs[class / 2], class % 2 == 1)
        } else {
            (&programs[class], false)
        };
        let splits = std::iter::repeat_n(Split::Train, spec.train_per_class)
            .chain(std::iter::repeat_n(Split::Test, spec.test_per_class));
        for (i, split) in splits.enumerate() {
            k += 1;
            let mut r = rng::derived(spec.seed, k);
            let person = instance(program, reversed, spec, &mut r)?;
            let clip = MotionClip::new(
                vec![person],
                class as u32,
                format!("toy-c{class:02}-{split}-{i:03}"),
            )?;
            items.push(LabeledClip { clip, split });
        }
    }
    LabeledDataset::new(items)
}

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motion_model::{MotionClip, PoseSequence, QuatPose, Quaternion, NUM_JOINTS};
use crate::rng;

/// Interval used by [`Granularity::Keyframe`] when none is given.
pub const DEFAULT_KEYFRAME_INTERVAL: usize = 25;
/// Default standard deviation of the quaternion-component noise.
pub const DEFAULT_SIGMA: f64 = 0.1;

/// How often a fresh noise offset is drawn along a joint's track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Granularity {
    /// One offset per joint for the whole clip.
    Video,
    /// A fresh offset at every frame.
    Frame,
    /// Offsets every `interval` frames, linearly blended in between.
    Keyframe { interval: usize },
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Granularity::Video => f.write_str("video"),
            Granularity::Frame => f.write_str("frame"),
            Granularity::Keyframe { interval } => write!(f, "keyframe:{interval}"),
        }
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "video" => Ok(Granularity::Video),
            "frame" => Ok(Granularity::Frame),
            "keyframe" => Ok(Granularity::Keyframe {
                interval: DEFAULT_KEYFRAME_INTERVAL,
            }),
            _ => {
                let interval = s
                    .strip_prefix("keyframe:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "noise granularity must be video, frame or keyframe:N, got `{s}`"
                        ))
                    })?;
                if interval < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "keyframe interval must be at least 2, got {interval}"
                    )));
                }
                Ok(Granularity::Keyframe { interval })
            }
        }
    }
}

impl TryFrom<String> for Granularity {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Granularity> for String {
    fn from(g: Granularity) -> Self {
        g.to_string()
    }
}

/// Additive Gaussian noise on quaternion components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub granularity: Granularity,
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(granularity: Granularity, sigma: f64, seed: u64) -> Result<Self> {
        let spec = NoiseSpec {
            granularity,
            sigma,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and nonnegative, got {}",
                self.sigma
            )));
        }
        if let Granularity::Keyframe { interval } = self.granularity {
            if interval < 2 {
                return Err(Error::InvalidParameter(format!(
                    "keyframe interval must be at least 2, got {interval}"
                )));
            }
        }
        Ok(())
    }
}

fn draw<R: Rng + ?Sized>(normal: &Normal<f64>, rng: &mut R) -> [f64; 4] {
    [
        normal.sample(rng),
        normal.sample(rng),
        normal.sample(rng),
        normal.sample(rng),
    ]
}

/// Pre-normalization offsets for one joint track of `frames` frames.
///
/// Keyframes sit at `0, interval, 2·interval, …` up to the first one at or
/// past the last frame; frames in between blend the two neighbors linearly.
pub fn noise_offsets<R: Rng + ?Sized>(
    frames: usize,
    granularity: Granularity,
    sigma: f64,
    rng: &mut R,
) -> Result<Vec<[f64; 4]>> {
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidParameter(format!("sigma {sigma}: {e}")))?;
    Ok(match granularity {
        Granularity::Video => vec![draw(&normal, rng); frames],
        Granularity::Frame => (0..frames).map(|_| draw(&normal, rng)).collect(),
        Granularity::Keyframe { interval } => {
            if interval < 2 {
                return Err(Error::InvalidParameter(format!(
                    "keyframe interval must be at least 2, got {interval}"
                )));
            }
            let last = frames.saturating_sub(1);
            let keys = last.div_ceil(interval) + 1;
            let keyframes: Vec<[f64; 4]> = (0..keys).map(|_| draw(&normal, rng)).collect();
            (0..frames)
                .map(|t| {
                    let k = t / interval;
                    let rem = t % interval;
                    if rem == 0 {
                        return keyframes[k];
                    }
                    let f = rem as f64 / interval as f64;
                    let (a, b) = (keyframes[k], keyframes[k + 1]);
                    std::array::from_fn(|c| (1.0 - f) * a[c] + f * b[c])
                })
                .collect()
        }
    })
}

fn perturb_person<R: Rng + ?Sized>(
    person: &PoseSequence,
    spec: &NoiseSpec,
    rng: &mut R,
) -> Result<PoseSequence> {
    let frames = person.frames();
    let mut out: Vec<QuatPose> = vec![[Quaternion::IDENTITY; NUM_JOINTS]; frames];
    for joint in 0..NUM_JOINTS {
        let track = person.joint_track(joint);
        let offsets = noise_offsets(frames, spec.granularity, spec.sigma, rng)?;
        for ((frame, q), off) in out.iter_mut().zip(&track).zip(&offsets) {
            let c = q.to_array();
            frame[joint] =
                Quaternion::new(c[0] + off[0], c[1] + off[1], c[2] + off[2], c[3] + off[3])?;
        }
    }
    PoseSequence::from_quaternions(&out, *person.betas(), person.trans().to_vec(), person.fps())
}

/// Adds zero-mean Gaussian offsets to every joint's hemisphere-aligned
/// quaternion track, renormalizes, and converts back to axis-angle.
///
/// Offsets are drawn person by person, joint by joint, from a stream seeded
/// with `spec.seed`. Shape, translations, label and frame count are kept.
pub fn additive_noise(clip: &MotionClip, spec: &NoiseSpec) -> Result<MotionClip> {
    spec.validate()?;
    if spec.sigma == 0.0 {
        return Ok(clip.clone());
    }
    let mut rng = rng::seeded(spec.seed);
    let people = clip
        .people()
        .iter()
        .map(|p| perturb_person(p, spec, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    clip.with_people(people)
}

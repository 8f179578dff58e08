//! Clip sampling for training and testing, and Synth+Real epoch balancing.
//!
//! A clip is `F` frame indices into a video of `T` frames. Training draws
//! one clip per video with a [`SamplingStrategy`]; testing covers the video
//! with [`num_test_clips`] clips.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_FRAMES_PER_CLIP: usize = 16;
pub const DEFAULT_STRIDE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingKind {
    /// Consecutive frames at native rate from a random start.
    UniformConsecutive,
    /// Same draw as `UniformConsecutive`; kept as its own name for configs.
    UniformRandomShift,
    /// Random integer frame step, random valid start.
    RandomFps,
    /// Largest step that still fits, random residual shift.
    SmallestFps,
    /// One uniformly drawn frame from each of `F` equal segments.
    HybridSegments,
    /// Uniform `F`-subset without replacement.
    NonuniformRandom,
}

impl SamplingKind {
    pub const ALL: [SamplingKind; 6] = [
        SamplingKind::UniformConsecutive,
        SamplingKind::UniformRandomShift,
        SamplingKind::RandomFps,
        SamplingKind::SmallestFps,
        SamplingKind::HybridSegments,
        SamplingKind::NonuniformRandom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SamplingKind::UniformConsecutive => "uniform_consecutive",
            SamplingKind::UniformRandomShift => "uniform_random_shift",
            SamplingKind::RandomFps => "random_fps",
            SamplingKind::SmallestFps => "smallest_fps",
            SamplingKind::HybridSegments => "hybrid_segments",
            SamplingKind::NonuniformRandom => "nonuniform_random",
        }
    }

    /// Whether test time uses sliding windows rather than repeated draws.
    pub fn is_uniform(self) -> bool {
        matches!(
            self,
            SamplingKind::UniformConsecutive | SamplingKind::UniformRandomShift
        )
    }
}

impl fmt::Display for SamplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SamplingKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown sampling strategy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingStrategy {
    pub kind: SamplingKind,
    /// Only `NonuniformRandom` honors `false`, by shuffling its draw.
    pub ordered: bool,
    pub frames_per_clip: usize,
    pub stride: usize,
}

impl SamplingStrategy {
    pub fn new(kind: SamplingKind) -> Self {
        SamplingStrategy {
            kind,
            ordered: true,
            frames_per_clip: DEFAULT_FRAMES_PER_CLIP,
            stride: DEFAULT_STRIDE,
        }
    }

    pub fn with_ordered(mut self, ordered: bool) -> Self {
        self.ordered = ordered;
        self
    }

    pub fn with_frames(mut self, frames_per_clip: usize) -> Self {
        self.frames_per_clip = frames_per_clip;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.frames_per_clip == 0 {
            return Err(Error::InvalidParameter(
                "frames per clip must be >= 1".into(),
            ));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be >= 1".into()));
        }
        Ok(())
    }

    fn shuffles(&self) -> bool {
        !self.ordered && self.kind == SamplingKind::NonuniformRandom
    }
}

impl Default for SamplingStrategy {
    fn default() -> Self {
        SamplingStrategy::new(SamplingKind::NonuniformRandom)
    }
}

/// Frame indices of one clip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClipIndices(pub Vec<usize>);

impl ClipIndices {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }
}

fn check_frames(total: usize) -> Result<()> {
    if total == 0 {
        return Err(Error::Domain("video must have at least one frame".into()));
    }
    Ok(())
}

/// Draws one training clip of `strategy.frames_per_clip` indices from a
/// video of `total` frames.
///
/// Videos shorter than a clip are padded by sampling with replacement and
/// sorting, for every strategy.
pub fn sample_train_clip<R: Rng + ?Sized>(
    total: usize,
    strategy: &SamplingStrategy,
    rng: &mut R,
) -> Result<ClipIndices> {
    check_frames(total)?;
    strategy.validate()?;
    let f = strategy.frames_per_clip;
    if total < f {
        let mut idx: Vec<usize> = (0..f).map(|_| rng.gen_range(0..total)).collect();
        idx.sort_unstable();
        return Ok(ClipIndices(idx));
    }
    let idx = match strategy.kind {
        SamplingKind::UniformConsecutive | SamplingKind::UniformRandomShift => {
            let start = rng.gen_range(0..=total - f);
            (start..start + f).collect()
        }
        SamplingKind::RandomFps | SamplingKind::SmallestFps if f == 1 => {
            vec![rng.gen_range(0..total)]
        }
        SamplingKind::RandomFps => {
            let max_step = (total - 1) / (f - 1);
            let step = rng.gen_range(1..=max_step);
            strided(total, f, step, rng)
        }
        SamplingKind::SmallestFps => {
            let step = (total - 1) / (f - 1);
            strided(total, f, step, rng)
        }
        SamplingKind::HybridSegments => (0..f)
            .map(|s| {
                let lo = s * total / f;
                let hi = (s + 1) * total / f;
                rng.gen_range(lo..hi)
            })
            .collect(),
        SamplingKind::NonuniformRandom => {
            let mut idx = index::sample(rng, total, f).into_vec();
            idx.sort_unstable();
            if strategy.shuffles() {
                idx.shuffle(rng);
            }
            idx
        }
    };
    Ok(ClipIndices(idx))
}

fn strided<R: Rng + ?Sized>(total: usize, f: usize, step: usize, rng: &mut R) -> Vec<usize> {
    let span = step * (f - 1);
    let start = rng.gen_range(0..=total - 1 - span);
    (0..f).map(|i| start + i * step).collect()
}

/// `⌈max(T − F, 0) / S⌉ + 1`.
pub fn num_test_clips(total: usize, frames_per_clip: usize, stride: usize) -> usize {
    total
        .saturating_sub(frames_per_clip)
        .div_ceil(stride.max(1))
        + 1
}

/// Test-time clips. Uniform strategies slide a window with the configured
/// stride, clamping the last start to `T − F`; the others make
/// [`num_test_clips`] independent training-style draws.
pub fn sample_test_clips<R: Rng + ?Sized>(
    total: usize,
    strategy: &SamplingStrategy,
    rng: &mut R,
) -> Result<Vec<ClipIndices>> {
    check_frames(total)?;
    strategy.validate()?;
    let f = strategy.frames_per_clip;
    let n = num_test_clips(total, f, strategy.stride);
    if strategy.kind.is_uniform() && total >= f {
        let last = total - f;
        return Ok((0..n)
            .map(|k| {
                let start = (k * strategy.stride).min(last);
                ClipIndices((start..start + f).collect())
            })
            .collect());
    }
    (0..n)
        .map(|_| sample_train_clip(total, strategy, rng))
        .collect()
}

/// One epoch of Synth+Real training: every real item plus a fresh
/// without-replacement sample of at most as many synthetic items, shuffled.
pub fn balance_epoch<T: Clone, R: Rng + ?Sized>(
    real: &[T],
    synth: &[T],
    rng: &mut R,
) -> Result<Vec<T>> {
    if real.is_empty() {
        return Err(Error::Config("real set must be nonempty".into()));
    }
    let take = synth.len().min(real.len());
    let mut epoch: Vec<T> = real.to_vec();
    epoch.extend(
        index::sample(rng, synth.len(), take)
            .into_iter()
            .map(|i| synth[i].clone()),
    );
    epoch.shuffle(rng);
    Ok(epoch)
}

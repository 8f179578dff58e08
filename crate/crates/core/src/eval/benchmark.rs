//! Paired toy-scale comparisons.

use serde::{Deserialize, Serialize};

use super::knn::evaluate;
use super::toy::{generate_toy_dataset, ToySpec};
use crate::augmentation::{additive_noise, Granularity, NoiseSpec, DEFAULT_SIGMA};
use crate::error::Result;
use crate::motion_model::MotionClip;
use crate::rng;
use crate::sampling::{SamplingKind, SamplingStrategy};

use rand::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub num_classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub frames: usize,
    pub jitter: f64,
    pub frame_jitter: f64,
    pub phase_jitter: f64,
    /// Noisy renders generated per training clip.
    pub renders: usize,
    pub noise_granularity: Granularity,
    pub noise_sigma: f64,
    pub strategy: SamplingStrategy,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            num_classes: 5,
            train_per_class: 1,
            test_per_class: 50,
            frames: 32,
            jitter: 0.4,
            frame_jitter: 0.05,
            phase_jitter: 1.0,
            renders: 6,
            noise_granularity: Granularity::Video,
            noise_sigma: DEFAULT_SIGMA,
            strategy: SamplingStrategy::new(SamplingKind::NonuniformRandom),
        }
    }
}

impl BenchmarkConfig {
    fn toy(&self, seed: u64, reversed_pairs: bool) -> ToySpec {
        ToySpec {
            num_classes: self.num_classes,
            train_per_class: self.train_per_class,
            test_per_class: self.test_per_class,
            frames: self.frames,
            jitter: self.jitter,
            frame_jitter: self.frame_jitter,
            phase_jitter: self.phase_jitter,
            reversed_pairs,
            seed,
        }
    }
}

/// Accuracies of a baseline and a variant on the same seeded toy set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedResult {
    pub seed: u64,
    pub baseline: f64,
    pub variant: f64,
}

pub fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// `renders` noisy copies of every clip, seeds drawn from stream
/// `(seed, stream)`.
pub fn noisy_renders(
    clips: &[MotionClip],
    renders: usize,
    granularity: Granularity,
    sigma: f64,
    seed: u64,
    stream: u64,
) -> Result<Vec<MotionClip>> {
    let mut r = rng::derived(seed, stream);
    let mut out = Vec::with_capacity(clips.len() * renders);
    for clip in clips {
        for k in 0..renders {
            let spec = NoiseSpec::new(granularity, sigma, r.gen())?;
            let noisy = additive_noise(clip, &spec)?;
            out.push(noisy.with_source_id(format!("{}#r{k}", clip.source_id()))?);
        }
    }
    Ok(out)
}

/// Baseline: the real training clips only. Variant: `renders` noise-augmented
/// renders of each training clip, without the originals.
pub fn augmentation_benefit(config: &BenchmarkConfig, seed: u64) -> Result<PairedResult> {
    let ds = generate_toy_dataset(&config.toy(seed, false))?;
    let (train, test) = (ds.train(), ds.test());
    let augmented = noisy_renders(
        &train,
        config.renders,
        config.noise_granularity,
        config.noise_sigma,
        seed,
        u64::MAX,
    )?;
    let baseline = evaluate(&train, &test, &config.strategy, seed, true)?.accuracy;
    let variant = evaluate(&augmented, &test, &config.strategy, seed, true)?.accuracy;
    Ok(PairedResult {
        seed,
        baseline,
        variant,
    })
}

/// Toy set whose classes come in time-reversed pairs. Baseline: ordered
/// sampling of `config.strategy`'s kind. Variant: `variant` as given.
pub fn order_sensitivity(
    config: &BenchmarkConfig,
    variant: &SamplingStrategy,
    seed: u64,
) -> Result<PairedResult> {
    let ds = generate_toy_dataset(&config.toy(seed, true))?;
    let (train, test) = (ds.train(), ds.test());
    let ordered = config.strategy.with_ordered(true);
    let baseline = evaluate(&train, &test, &ordered, seed, true)?.accuracy;
    let variant = evaluate(&train, &test, variant, seed, true)?.accuracy;
    Ok(PairedResult {
        seed,
        baseline,
        variant,
    })
}

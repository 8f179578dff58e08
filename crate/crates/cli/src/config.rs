use std::path::Path;

use serde::Deserialize;
use synthmotion_core::augmentation::{Granularity, DEFAULT_SIGMA, DEFAULT_WEIGHT};
use synthmotion_core::eval::benchmark::BenchmarkConfig;
use synthmotion_core::motion_model::Kernel;
use synthmotion_core::sampling::{
    SamplingKind, SamplingStrategy, DEFAULT_FRAMES_PER_CLIP, DEFAULT_STRIDE,
};
use synthmotion_core::scene::{
    default_azimuths, AugmentPolicy, CameraRanges, NoisePolicy, Split, TranslationMode,
};

use crate::CliError;

/// Temporal smoothing applied to every ingested clip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelShape {
    Triangular,
    Boxcar,
    Delta,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionModelSection {
    pub smoothing: KernelShape,
    pub window: usize,
}

impl Default for MotionModelSection {
    fn default() -> Self {
        MotionModelSection {
            smoothing: KernelShape::Triangular,
            window: 5,
        }
    }
}

impl MotionModelSection {
    pub fn kernel(&self) -> Result<Kernel, CliError> {
        let kernel = match self.smoothing {
            KernelShape::Triangular => Kernel::triangular(self.window),
            KernelShape::Boxcar => Kernel::boxcar(self.window),
            KernelShape::Delta => Ok(Kernel::delta()),
        };
        kernel.map_err(|e| CliError::Usage(format!("[motion_model] {e}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugmentationSection {
    /// `video`, `frame`, `keyframe` or `keyframe:N`; absent means no noise.
    pub noise: Option<Granularity>,
    pub sigma: f64,
    pub interpolate: bool,
    pub interpolation_weight: f64,
}

impl Default for AugmentationSection {
    fn default() -> Self {
        AugmentationSection {
            noise: None,
            sigma: DEFAULT_SIGMA,
            interpolate: false,
            interpolation_weight: DEFAULT_WEIGHT,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneSection {
    /// Number of evenly spaced azimuths; must divide 360.
    pub views: u32,
    pub renders_per_view: usize,
    pub distance_m: (f64, f64),
    pub height_m: (f64, f64),
    pub translation_mode: TranslationMode,
    pub split: Split,
}

impl Default for SceneSection {
    fn default() -> Self {
        let ranges = CameraRanges::default();
        SceneSection {
            views: default_azimuths().len() as u32,
            renders_per_view: 1,
            distance_m: ranges.distance_m,
            height_m: ranges.height_m,
            translation_mode: TranslationMode::default(),
            split: Split::Train,
        }
    }
}

impl SceneSection {
    pub fn camera(&self) -> Result<CameraRanges, CliError> {
        if self.views == 0 || 360 % self.views != 0 {
            return Err(CliError::Usage(format!(
                "views must divide 360, got {}",
                self.views
            )));
        }
        let step = 360 / self.views;
        let ranges = CameraRanges {
            azimuths_deg: (0..self.views).map(|k| k * step).collect(),
            distance_m: self.distance_m,
            height_m: self.height_m,
        };
        ranges
            .validate()
            .map_err(|e| CliError::Usage(format!("[scene_synthesis] {e}")))?;
        Ok(ranges)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSection {
    pub strategy: SamplingKind,
    pub ordered: bool,
    pub frames_per_clip: usize,
    pub stride: usize,
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection {
            strategy: SamplingKind::NonuniformRandom,
            ordered: true,
            frames_per_clip: DEFAULT_FRAMES_PER_CLIP,
            stride: DEFAULT_STRIDE,
        }
    }
}

impl SamplingSection {
    pub fn strategy(&self) -> Result<SamplingStrategy, CliError> {
        let s = SamplingStrategy::new(self.strategy)
            .with_ordered(self.ordered)
            .with_frames(self.frames_per_clip)
            .with_stride(self.stride);
        s.validate()
            .map_err(|e| CliError::Usage(format!("[frame_sampling] {e}")))?;
        Ok(s)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub seeds: u64,
    pub num_classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub frames: usize,
    pub jitter: f64,
    pub frame_jitter: f64,
    pub phase_jitter: f64,
    pub renders: usize,
    pub noise: Granularity,
    pub sigma: f64,
}

impl Default for EvalSection {
    fn default() -> Self {
        let b = BenchmarkConfig::default();
        EvalSection {
            seeds: 20,
            num_classes: b.num_classes,
            train_per_class: b.train_per_class,
            test_per_class: b.test_per_class,
            frames: b.frames,
            jitter: b.jitter,
            frame_jitter: b.frame_jitter,
            phase_jitter: b.phase_jitter,
            renders: b.renders,
            noise: b.noise_granularity,
            sigma: b.noise_sigma,
        }
    }
}

impl EvalSection {
    pub fn benchmark(&self, strategy: SamplingStrategy) -> BenchmarkConfig {
        BenchmarkConfig {
            num_classes: self.num_classes,
            train_per_class: self.train_per_class,
            test_per_class: self.test_per_class,
            frames: self.frames,
            jitter: self.jitter,
            frame_jitter: self.frame_jitter,
            phase_jitter: self.phase_jitter,
            renders: self.renders,
            noise_granularity: self.noise,
            noise_sigma: self.sigma,
            strategy,
        }
    }
}

/// Configuration file; one section per pipeline stage.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub motion_model: MotionModelSection,
    pub augmentation: AugmentationSection,
    pub scene_synthesis: SceneSection,
    pub frame_sampling: SamplingSection,
    pub eval_harness: EvalSection,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn augment_policy(&self) -> AugmentPolicy {
        let a = &self.augmentation;
        AugmentPolicy {
            noise: a.noise.map(|granularity| NoisePolicy {
                granularity,
                sigma: a.sigma,
            }),
            interpolation_weight: a.interpolate.then_some(a.interpolation_weight),
            translation_mode: self.scene_synthesis.translation_mode,
            ..AugmentPolicy::default()
        }
    }
}

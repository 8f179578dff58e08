//! Render manifests: one fully specified synthetic clip per entry.
//!
//! Entries are serialized one per line as JSON objects with keys in
//! lexicographic order and floats rounded to 9 significant digits. Processed
//! motion is referenced by the SHA-256 of its motion-file encoding; the
//! augmentation descriptor holds every seed needed to recompute it.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::appearance::{AppearancePools, AppearanceSpec, Split};
use super::camera::{sample_camera, CameraRanges, CameraSample};
use super::translation::{process_translations, TranslationMode};
use crate::augmentation::{
    additive_noise, interpolate_sequences, Granularity, NoiseSpec, DEFAULT_SIGMA, DEFAULT_WEIGHT,
};
use crate::error::{Error, Result};
use crate::motion_file;
use crate::motion_model::{Kernel, MotionClip};
use crate::rng;

/// Noise applied to every render, with a per-entry seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisePolicy {
    pub granularity: Granularity,
    pub sigma: f64,
}

impl Default for NoisePolicy {
    fn default() -> Self {
        NoisePolicy {
            granularity: Granularity::Video,
            sigma: DEFAULT_SIGMA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentPolicy {
    pub noise: Option<NoisePolicy>,
    /// Blend weight toward a randomly chosen same-class partner clip.
    pub interpolation_weight: Option<f64>,
    pub translation_mode: TranslationMode,
    /// Applied to translations before `translation_mode`.
    pub translation_kernel: Kernel,
}

impl Default for AugmentPolicy {
    fn default() -> Self {
        AugmentPolicy {
            noise: None,
            interpolation_weight: None,
            translation_mode: TranslationMode::default(),
            translation_kernel: Kernel::delta(),
        }
    }
}

impl AugmentPolicy {
    pub fn with_interpolation(mut self) -> Self {
        self.interpolation_weight = Some(DEFAULT_WEIGHT);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = &self.noise {
            NoiseSpec::new(n.granularity, n.sigma, 0)?;
        }
        if let Some(w) = self.interpolation_weight {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidParameter(format!(
                    "interpolation weight must lie in [0, 1], got {w}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationDescriptor {
    pub partner_source_id: String,
    pub weight: f64,
}

/// Everything needed to recompute an entry's motion from its source clips.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationDescriptor {
    pub interpolation: Option<InterpolationDescriptor>,
    pub noise: Option<NoiseSpec>,
    pub translation_mode: TranslationMode,
    pub translation_kernel: Kernel,
}

impl AugmentationDescriptor {
    /// Interpolation, then noise, then translation processing.
    pub fn realize(
        &self,
        source: &MotionClip,
        clips_by_id: &HashMap<&str, &MotionClip>,
    ) -> Result<MotionClip> {
        let mut clip = match &self.interpolation {
            Some(interp) => {
                let partner = clips_by_id
                    .get(interp.partner_source_id.as_str())
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "interpolation partner `{}` not in motion store",
                            interp.partner_source_id
                        ))
                    })?;
                interpolate_sequences(source, partner, interp.weight)?
            }
            None => source.clone(),
        };
        if let Some(noise) = &self.noise {
            clip = additive_noise(&clip, noise)?;
        }
        process_translations(&clip, self.translation_mode, &self.translation_kernel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionRef {
    /// SHA-256 of the motion-file encoding of the processed clip.
    pub digest: String,
    pub frames: usize,
    pub people: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderManifestEntry {
    pub index: u64,
    pub source_id: String,
    pub action_label: u32,
    pub split: Split,
    pub augmentation: AugmentationDescriptor,
    pub camera: CameraSample,
    pub appearance: AppearanceSpec,
    pub motion: MotionRef,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestConfig {
    /// Azimuth set and distance/height ranges. One view per azimuth.
    pub camera: CameraRanges,
    pub renders_per_view: usize,
    pub policy: AugmentPolicy,
    pub seed: u64,
}

impl Default for ManifestConfig {
    fn default() -> Self {
        ManifestConfig {
            camera: CameraRanges::default(),
            renders_per_view: 1,
            policy: AugmentPolicy::default(),
            seed: 0,
        }
    }
}

/// Entries plus the processed clips they reference, keyed by digest.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub entries: Vec<RenderManifestEntry>,
    pub motions: BTreeMap<String, MotionClip>,
}

impl Manifest {
    pub fn to_jsonl(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{}\n", entry_to_line(e)))
            .collect()
    }
}

fn round_sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn canonicalize(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let rounded = round_sig9(n.as_f64().expect("f64 number"));
            *value = serde_json::Number::from_f64(rounded)
                .map(Value::Number)
                .unwrap_or(Value::Null);
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}

/// One manifest line, without the trailing newline.
pub fn entry_to_line(entry: &RenderManifestEntry) -> String {
    let mut value = serde_json::to_value(entry).expect("manifest entries serialize");
    canonicalize(&mut value);
    // serde_json's default map is ordered by key
    value.to_string()
}

pub fn parse_manifest_line(line: &str) -> Result<RenderManifestEntry> {
    serde_json::from_str(line).map_err(|e| Error::Format {
        line: 1,
        field: "<entry>".into(),
        message: e.to_string(),
    })
}

/// Builds `clips × views × renders_per_view` entries.
///
/// Entry `e` covers clip `e / (views · renders)`, azimuth
/// `(e / renders) % views` and draws from its own random stream
/// `(seed, e)`: camera distance and height, appearance, a noise seed, then
/// an interpolation partner among other clips with the same label and
/// person count. Entries without an eligible partner are not interpolated.
pub fn build_manifest(
    clips: &[MotionClip],
    config: &ManifestConfig,
    pools: &AppearancePools,
) -> Result<Manifest> {
    pools.validate()?;
    config.camera.validate()?;
    config.policy.validate()?;
    if config.renders_per_view == 0 {
        return Err(Error::Config("renders per view must be at least 1".into()));
    }
    let views = config.camera.azimuths_deg.len();
    let renders = config.renders_per_view;
    let per_clip = views * renders;
    let clips_by_id: HashMap<&str, &MotionClip> =
        clips.iter().map(|c| (c.source_id(), c)).collect();
    if clips_by_id.len() != clips.len() {
        return Err(Error::Config("duplicate source ids among clips".into()));
    }

    let built: Vec<(RenderManifestEntry, MotionClip)> = (0..clips.len() * per_clip)
        .into_par_iter()
        .map(|e| {
            let clip = &clips[e / per_clip];
            let azimuth = config.camera.azimuths_deg[(e / renders) % views];
            let mut r = rng::derived(config.seed, e as u64);
            let camera = sample_camera(azimuth, &config.camera, &mut r)?;
            let appearance = pools.sample(&mut r);
            let noise_seed: u64 = r.gen();
            let interpolation = match config.policy.interpolation_weight {
                Some(weight) => {
                    let partners: Vec<&MotionClip> = clips
                        .iter()
                        .filter(|c| {
                            c.source_id() != clip.source_id()
                                && c.action_label() == clip.action_label()
                                && c.people().len() == clip.people().len()
                        })
                        .collect();
                    (!partners.is_empty()).then(|| InterpolationDescriptor {
                        partner_source_id: partners[r.gen_range(0..partners.len())]
                            .source_id()
                            .to_string(),
                        weight,
                    })
                }
                None => None,
            };
            let augmentation = AugmentationDescriptor {
                interpolation,
                noise: config.policy.noise.map(|n| NoiseSpec {
                    granularity: n.granularity,
                    sigma: n.sigma,
                    seed: noise_seed,
                }),
                translation_mode: config.policy.translation_mode,
                translation_kernel: config.policy.translation_kernel.clone(),
            };
            let processed = augmentation.realize(clip, &clips_by_id)?;
            let motion = MotionRef {
                digest: motion_file::digest(&processed),
                frames: processed.frames(),
                people: processed.people().len(),
            };
            let entry = RenderManifestEntry {
                index: e as u64,
                source_id: clip.source_id().to_string(),
                action_label: clip.action_label(),
                split: pools.split,
                augmentation,
                camera,
                appearance,
                motion,
            };
            Ok((entry, processed))
        })
        .collect::<Result<_>>()?;

    let mut entries = Vec::with_capacity(built.len());
    let mut motions = BTreeMap::new();
    for (entry, clip) in built {
        motions.entry(entry.motion.digest.clone()).or_insert(clip);
        entries.push(entry);
    }
    Ok(Manifest { entries, motions })
}

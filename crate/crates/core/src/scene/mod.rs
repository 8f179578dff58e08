//! Scene synthesis: viewpoints, multi-person placement, appearance
//! randomization and render manifests.

mod appearance;
mod camera;
mod manifest;
mod translation;

pub use appearance::{AppearanceLibrary, AppearancePools, AppearanceSpec, Split};
pub use camera::{
    default_azimuths, sample_camera, weak_perspective_depth, CameraRanges, CameraSample,
    DEFAULT_FOCAL, DEFAULT_IMAGE_WIDTH,
};
pub use manifest::{
    build_manifest, entry_to_line, parse_manifest_line, AugmentPolicy, AugmentationDescriptor,
    InterpolationDescriptor, Manifest, ManifestConfig, MotionRef, NoisePolicy, RenderManifestEntry,
};
pub use translation::{process_translations, TranslationMode};

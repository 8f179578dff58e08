//! Browser bindings for three interactive views of the toolkit.
//!
//! Every exported function returns a JSON string; the plain-Rust functions
//! behind them are public so they can be tested natively.

use std::f64::consts::TAU;

use serde::Serialize;
use synthmotion_core::augmentation::{dtw_align_clips, interpolate_sequences};
use synthmotion_core::motion_model::{
    AxisAngle, MotionClip, Pose, PoseSequence, NUM_BETAS, NUM_JOINTS,
};
use synthmotion_core::rng;
use synthmotion_core::sampling::{
    num_test_clips, sample_test_clips, sample_train_clip, SamplingKind, SamplingStrategy,
};
use synthmotion_core::scene::{sample_camera, CameraRanges, CameraSample};
use synthmotion_core::{Error, Result};
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct SamplingView {
    pub total: usize,
    pub num_test_clips: usize,
    pub train: Vec<usize>,
    pub test: Vec<Vec<usize>>,
}

pub fn sampling_view(
    total: usize,
    strategy: &str,
    ordered: bool,
    frames: usize,
    stride: usize,
    seed: u64,
) -> Result<SamplingView> {
    let kind: SamplingKind = strategy.parse()?;
    let s = SamplingStrategy::new(kind)
        .with_ordered(ordered)
        .with_frames(frames)
        .with_stride(stride);
    let mut r = rng::seeded(seed);
    let train = sample_train_clip(total, &s, &mut r)?;
    let test = sample_test_clips(total, &s, &mut r)?;
    Ok(SamplingView {
        total,
        num_test_clips: num_test_clips(total, frames, stride),
        train: train.0,
        test: test.into_iter().map(|c| c.0).collect(),
    })
}

/// `renders` cameras at each of `views` evenly spaced azimuths.
pub fn camera_ring(views: u32, renders: usize, seed: u64) -> Result<Vec<CameraSample>> {
    if views == 0 || 360 % views != 0 {
        return Err(Error::InvalidParameter(format!(
            "views must divide 360, got {views}"
        )));
    }
    let ranges = CameraRanges {
        azimuths_deg: (0..views).map(|k| k * (360 / views)).collect(),
        ..CameraRanges::default()
    };
    let mut r = rng::seeded(seed);
    let mut out = Vec::with_capacity(views as usize * renders);
    for &az in &ranges.azimuths_deg {
        for _ in 0..renders {
            out.push(sample_camera(az, &ranges, &mut r)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct InterpolationView {
    /// Joint angle about z for each input and for the blend, radians.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub blend: Vec<f64>,
    pub path: Vec<(usize, usize)>,
    pub cost: f64,
}

/// One joint swinging about z: `amplitude · sin(2π · cycles · t + phase)`.
fn swing(frames: usize, amplitude: f64, cycles: f64, phase: f64, id: &str) -> Result<MotionClip> {
    let span = (frames.max(2) - 1) as f64;
    let poses: Vec<Pose> = (0..frames)
        .map(|t| {
            let angle = amplitude * (TAU * cycles * t as f64 / span + phase).sin();
            let mut pose = [AxisAngle::IDENTITY; NUM_JOINTS];
            pose[0] = AxisAngle::new(0.0, 0.0, angle);
            pose
        })
        .collect();
    let person = PoseSequence::new(poses, [0.0; NUM_BETAS], vec![[0.0; 3]; frames], 30.0)?;
    MotionClip::new(vec![person], 0, id)
}

fn z_angles(clip: &MotionClip) -> Vec<f64> {
    clip.people()[0].poses().iter().map(|p| p[0].z).collect()
}

/// DTW-aligns two single-joint swings of different lengths and phases and
/// blends them with `weight`.
pub fn interpolation_view(
    frames_a: usize,
    frames_b: usize,
    phase_b: f64,
    weight: f64,
) -> Result<InterpolationView> {
    let a = swing(frames_a, 1.0, 1.0, 0.0, "a")?;
    let b = swing(frames_b, 1.5, 1.0, phase_b, "b")?;
    let (path, cost) = dtw_align_clips(&a, &b)?;
    let blend = interpolate_sequences(&a, &b, weight)?;
    Ok(InterpolationView {
        a: z_angles(&a),
        b: z_angles(&b),
        blend: z_angles(&blend),
        path: path.pairs().to_vec(),
        cost,
    })
}

fn to_js<T: Serialize>(value: Result<T>) -> std::result::Result<String, JsValue> {
    let value = value.map_err(|e| JsValue::from_str(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = sampleFrames)]
pub fn sample_frames(
    total: usize,
    strategy: &str,
    ordered: bool,
    frames: usize,
    stride: usize,
    seed: u32,
) -> std::result::Result<String, JsValue> {
    to_js(sampling_view(
        total,
        strategy,
        ordered,
        frames,
        stride,
        seed.into(),
    ))
}

#[wasm_bindgen(js_name = cameraRing)]
pub fn camera_ring_json(
    views: u32,
    renders: usize,
    seed: u32,
) -> std::result::Result<String, JsValue> {
    to_js(camera_ring(views, renders, seed.into()))
}

#[wasm_bindgen(js_name = interpolationCurve)]
pub fn interpolation_curve(
    frames_a: usize,
    frames_b: usize,
    phase_b: f64,
    weight: f64,
) -> std::result::Result<String, JsValue> {
    to_js(interpolation_view(frames_a, frames_b, phase_b, weight))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_view_counts() {
        let v = sampling_view(84, "uniform_random_shift", true, 16, 16, 3).unwrap();
        assert_eq!(v.num_test_clips, 6);
        assert_eq!(v.test.len(), 6);
        assert_eq!(v.train.len(), 16);
        assert!(v.train.windows(2).all(|w| w[1] == w[0] + 1));
        assert!(sampling_view(84, "bogus", true, 16, 16, 3).is_err());
    }

    #[test]
    fn camera_ring_layout() {
        let ring = camera_ring(4, 3, 1).unwrap();
        assert_eq!(ring.len(), 12);
        assert_eq!(ring[3].azimuth_deg, 90);
        for c in &ring {
            assert!((4.0..=6.0).contains(&c.distance_m));
            assert!((-1.0..=3.0).contains(&c.height_m));
        }
        assert!(camera_ring(7, 1, 1).is_err());
    }

    #[test]
    fn interpolation_endpoints() {
        let v = interpolation_view(30, 45, 0.4, 0.0).unwrap();
        assert_eq!(v.blend.len(), v.path.len());
        for (k, &(i, _)) in v.path.iter().enumerate() {
            assert!((v.blend[k] - v.a[i]).abs() < 1e-9);
        }
        let v = interpolation_view(30, 45, 0.4, 1.0).unwrap();
        for (k, &(_, j)) in v.path.iter().enumerate() {
            assert!((v.blend[k] - v.b[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&interpolation_view(10, 12, 0.0, 0.5).unwrap()).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["a"].as_array().unwrap().len(), 10);
        assert!(value["path"][0].is_array());
    }
}

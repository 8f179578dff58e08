use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Focal length, in pixels, assumed when lifting a weak-perspective scale
/// to depth.
pub const DEFAULT_FOCAL: f64 = 500.0;
/// Frame width of the rendered videos, in pixels.
pub const DEFAULT_IMAGE_WIDTH: f64 = 320.0;

/// Eight azimuths, 45 degrees apart.
pub fn default_azimuths() -> Vec<u32> {
    (0..8).map(|k| k * 45).collect()
}

/// Where cameras may be placed.
///
/// World frame: z up, the performer at the origin, azimuth 0 looking along
/// +y. A camera at azimuth α, ground distance d and height h sits at
/// `(d·sin α, −d·cos α, h)` and looks at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraRanges {
    pub azimuths_deg: Vec<u32>,
    pub distance_m: (f64, f64),
    pub height_m: (f64, f64),
}

impl Default for CameraRanges {
    fn default() -> Self {
        CameraRanges {
            azimuths_deg: default_azimuths(),
            distance_m: (4.0, 6.0),
            height_m: (-1.0, 3.0),
        }
    }
}

impl CameraRanges {
    /// Distance 5 m and height 1 m for every view.
    pub fn fixed() -> Self {
        CameraRanges {
            distance_m: (5.0, 5.0),
            height_m: (1.0, 1.0),
            ..CameraRanges::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.azimuths_deg.is_empty() {
            return Err(Error::Config("azimuth set is empty".into()));
        }
        let (dlo, dhi) = self.distance_m;
        let (hlo, hhi) = self.height_m;
        if !(dlo.is_finite() && dhi.is_finite() && dlo > 0.0 && dlo <= dhi) {
            return Err(Error::Config(format!(
                "distance range must satisfy 0 < lo <= hi, got [{dlo}, {dhi}]"
            )));
        }
        if !(hlo.is_finite() && hhi.is_finite() && hlo <= hhi) {
            return Err(Error::Config(format!(
                "height range must satisfy lo <= hi, got [{hlo}, {hhi}]"
            )));
        }
        Ok(())
    }
}

/// One synthetic viewpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraSample {
    pub azimuth_deg: u32,
    pub distance_m: f64,
    pub height_m: f64,
    /// Camera center in world coordinates.
    pub position: [f64; 3],
    /// World-to-camera `[R | t]`, rows are camera x (right), y (down) and
    /// z (optical axis toward the origin).
    pub extrinsics: [[f64; 4]; 3],
}

impl CameraSample {
    /// Builds the pose of a camera looking at the world origin.
    pub fn look_at_origin(azimuth_deg: u32, distance_m: f64, height_m: f64) -> Self {
        let alpha = f64::from(azimuth_deg).to_radians();
        let (s, c) = alpha.sin_cos();
        let position = [distance_m * s, -distance_m * c, height_m];
        let norm = (position[0].powi(2) + position[1].powi(2) + position[2].powi(2)).sqrt();
        let forward = position.map(|p| -p / norm);
        // right = forward × up, with up = +z; horizontal by construction
        let right_raw = [forward[1], -forward[0], 0.0];
        let rn = (right_raw[0].powi(2) + right_raw[1].powi(2)).sqrt();
        let right = right_raw.map(|v| v / rn);
        let down = cross(forward, right);
        let rows = [right, down, forward];
        let mut extrinsics = [[0.0; 4]; 3];
        for (r, row) in rows.iter().enumerate() {
            extrinsics[r][..3].copy_from_slice(row);
            extrinsics[r][3] =
                -(row[0] * position[0] + row[1] * position[1] + row[2] * position[2]);
        }
        CameraSample {
            azimuth_deg,
            distance_m,
            height_m,
            position,
            extrinsics,
        }
    }

    /// Maps a world point into camera coordinates.
    pub fn world_to_camera(&self, p: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|r| {
            let e = &self.extrinsics[r];
            e[0] * p[0] + e[1] * p[1] + e[2] * p[2] + e[3]
        })
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn uniform<R: Rng + ?Sized>(range: (f64, f64), rng: &mut R) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.gen_range(range.0..=range.1)
    }
}

/// Samples distance then height uniformly from `ranges` for the given view.
pub fn sample_camera<R: Rng + ?Sized>(
    azimuth_deg: u32,
    ranges: &CameraRanges,
    rng: &mut R,
) -> Result<CameraSample> {
    ranges.validate()?;
    if !ranges.azimuths_deg.contains(&azimuth_deg) {
        return Err(Error::InvalidParameter(format!(
            "azimuth {azimuth_deg} is not in the configured set {:?}",
            ranges.azimuths_deg
        )));
    }
    let distance = uniform(ranges.distance_m, rng);
    let height = uniform(ranges.height_m, rng);
    Ok(CameraSample::look_at_origin(azimuth_deg, distance, height))
}

/// Depth of a person from a weak-perspective scale: `F / (0.5 · W · s)`.
pub fn weak_perspective_depth(scale: f64, image_width: f64, focal: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain(format!(
            "scale must be positive, got {scale}"
        )));
    }
    if !(image_width > 0.0 && image_width.is_finite()) {
        return Err(Error::Domain(format!(
            "image width must be positive, got {image_width}"
        )));
    }
    Ok(focal / (0.5 * image_width * scale))
}

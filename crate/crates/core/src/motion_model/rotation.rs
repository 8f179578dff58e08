//! Axis-angle and unit-quaternion rotations.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|‖q‖ - 1|` accepted by conversions out of quaternion space.
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// A rotation vector: direction is the axis, magnitude the angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AxisAngle {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AxisAngle {
    pub const IDENTITY: AxisAngle = AxisAngle {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        AxisAngle { x, y, z }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        AxisAngle::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn angle(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Returns the equivalent rotation vector with angle in `[0, π]`.
    pub fn canonical(self) -> Self {
        let angle = self.angle();
        if angle <= PI || !angle.is_finite() {
            return self;
        }
        let axis = [self.x / angle, self.y / angle, self.z / angle];
        let mut reduced = angle.rem_euclid(2.0 * PI);
        let mut sign = 1.0;
        if reduced > PI {
            reduced = 2.0 * PI - reduced;
            sign = -1.0;
        }
        let s = sign * reduced;
        AxisAngle::new(axis[0] * s, axis[1] * s, axis[2] * s)
    }

    pub fn to_quaternion(self) -> Result<Quaternion> {
        axis_angle_to_quaternion(self)
    }

    /// Row-major 3x3 rotation matrix via Rodrigues' formula.
    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        let angle = self.angle();
        if angle < 1e-300 {
            return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        }
        let (kx, ky, kz) = (self.x / angle, self.y / angle, self.z / angle);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        [
            [c + kx * kx * t, kx * ky * t - kz * s, kx * kz * t + ky * s],
            [ky * kx * t + kz * s, c + ky * ky * t, ky * kz * t - kx * s],
            [kz * kx * t - ky * s, kz * ky * t + kx * s, c + kz * kz * t],
        ]
    }
}

/// Unit quaternion `w + xi + yj + zk`.
///
/// Construction normalizes and picks the `w >= 0` representative. The
/// opposite sign is only produced by [`Quaternion::neg`], which hemisphere
/// alignment uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Normalizes `(w, x, y, z)` and canonicalizes its sign.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !norm.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite quaternion ({w}, {x}, {y}, {z})"
            )));
        }
        if norm < 1e-12 {
            return Err(Error::InvalidInput(
                "cannot normalize a zero quaternion".into(),
            ));
        }
        Ok(Quaternion {
            w: w / norm,
            x: x / norm,
            y: y / norm,
            z: z / norm,
        }
        .canonical())
    }

    pub fn from_array(c: [f64; 4]) -> Result<Self> {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// The same rotation with all four components negated.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        Quaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Representative with `w > 0`, or for half-turns the one whose first
    /// nonzero vector component is positive.
    pub fn canonical(self) -> Self {
        let flip = if self.w != 0.0 {
            self.w < 0.0
        } else if self.x != 0.0 {
            self.x < 0.0
        } else if self.y != 0.0 {
            self.y < 0.0
        } else {
            self.z < 0.0
        };
        if flip {
            self.neg()
        } else {
            self
        }
    }

    /// Geodesic angle between the two rotations, in `[0, π]`.
    ///
    /// Equal to `2·acos(|⟨p, q⟩|)`, computed from the chord `|p − q|` after
    /// sign alignment as `4·asin(|p − q| / 2)`, which keeps full precision
    /// near zero where `acos` does not.
    pub fn angle_to(&self, other: &Quaternion) -> f64 {
        let s = if self.dot(other) < 0.0 { -1.0 } else { 1.0 };
        let d = [
            self.w - s * other.w,
            self.x - s * other.x,
            self.y - s * other.y,
            self.z - s * other.z,
        ];
        let chord = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]).sqrt();
        4.0 * (0.5 * chord).min(1.0).asin()
    }

    /// Hamilton product `self * other`, canonicalized.
    pub fn mul(&self, other: &Quaternion) -> Quaternion {
        let (a, b) = (self, other);
        let p = Quaternion {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        };
        p.canonical()
    }

    /// Row-major 3x3 rotation matrix.
    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        let Quaternion { w, x, y, z } = *self;
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }

    pub fn to_axis_angle(self) -> Result<AxisAngle> {
        quaternion_to_axis_angle(self)
    }
}

pub fn axis_angle_to_quaternion(a: AxisAngle) -> Result<Quaternion> {
    if !a.is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite axis-angle ({}, {}, {})",
            a.x, a.y, a.z
        )));
    }
    let angle = a.angle();
    let half = 0.5 * angle;
    // sin(θ/2)/θ, with its Taylor series where the ratio is ill-conditioned
    let scale = if angle < 1e-6 {
        0.5 - angle * angle / 48.0
    } else {
        half.sin() / angle
    };
    Quaternion::new(half.cos(), a.x * scale, a.y * scale, a.z * scale)
}

pub fn quaternion_to_axis_angle(q: Quaternion) -> Result<AxisAngle> {
    let norm = q.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnit { norm });
    }
    let q = Quaternion {
        w: q.w / norm,
        x: q.x / norm,
        y: q.y / norm,
        z: q.z / norm,
    }
    .canonical();
    let s = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
    let scale = if s < 1e-12 {
        2.0 / q.w
    } else {
        2.0 * s.atan2(q.w) / s
    };
    Ok(AxisAngle::new(q.x * scale, q.y * scale, q.z * scale))
}

/// Flips signs so each consecutive pair has a nonnegative dot product.
/// The first element is kept as is.
pub fn hemisphere_align(seq: &[Quaternion]) -> Vec<Quaternion> {
    let mut out: Vec<Quaternion> = Vec::with_capacity(seq.len());
    for &q in seq {
        let aligned = match out.last() {
            Some(prev) if prev.dot(&q) < 0.0 => q.neg(),
            _ => q,
        };
        out.push(aligned);
    }
    out
}

/// Largest absolute entry of the difference of two rotation matrices.
pub fn matrix_distance(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..3 {
        for c in 0..3 {
            worst = worst.max((a[r][c] - b[r][c]).abs());
        }
    }
    worst
}

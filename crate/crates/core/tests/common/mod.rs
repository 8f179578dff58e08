#![allow(dead_code)]

use rand::Rng;
use synthmotion_core::motion_model::{
    AxisAngle, MotionClip, Pose, PoseSequence, NUM_BETAS, NUM_JOINTS,
};
use synthmotion_core::rng;

/// Rodrigues' formula, written out independently of the crate.
pub fn rodrigues(v: [f64; 3]) -> [[f64; 3]; 3] {
    let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if theta == 0.0 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let k = v.map(|c| c / theta);
    let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    let (s, c) = theta.sin_cos();
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let k2: f64 = (0..3).map(|m| kx[i][m] * kx[m][j]).sum();
            r[i][j] = if i == j { 1.0 } else { 0.0 } + s * kx[i][j] + (1.0 - c) * k2;
        }
    }
    r
}

pub fn max_abs_diff(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    (0..9)
        .map(|k| (a[k / 3][k % 3] - b[k / 3][k % 3]).abs())
        .fold(0.0, f64::max)
}

/// Uniform random axis, angle uniform in `[0, max_angle)`.
pub fn random_axis_angle<R: Rng>(rng: &mut R, max_angle: f64) -> AxisAngle {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            let angle = rng.gen_range(0.0..max_angle);
            return AxisAngle::from_array(v.map(|c| c / n * angle));
        }
    }
}

pub fn random_pose<R: Rng>(rng: &mut R, max_angle: f64) -> Pose {
    std::array::from_fn(|_| random_axis_angle(rng, max_angle))
}

/// Smoothly varying random motion: a random rest pose plus a random walk.
pub fn random_sequence<R: Rng>(rng: &mut R, frames: usize) -> PoseSequence {
    let mut pose = random_pose(rng, 2.0);
    let mut poses = Vec::with_capacity(frames);
    let mut trans = Vec::with_capacity(frames);
    let mut root: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
    for _ in 0..frames {
        poses.push(pose);
        trans.push(root);
        for j in pose.iter_mut() {
            let step = random_axis_angle(rng, 0.15).to_array();
            let v = j.to_array();
            *j = AxisAngle::from_array(std::array::from_fn(|c| v[c] + step[c]));
        }
        for c in root.iter_mut() {
            *c += rng.gen_range(-0.05..0.05);
        }
    }
    let betas: [f64; NUM_BETAS] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
    PoseSequence::new(poses, betas, trans, 30.0).unwrap()
}

pub fn random_clip(seed: u64, people: usize, frames: usize, label: u32, id: &str) -> MotionClip {
    let mut r = rng::seeded(seed);
    let people = (0..people)
        .map(|_| random_sequence(&mut r, frames))
        .collect();
    MotionClip::new(people, label, id).unwrap()
}

/// A single-person clip holding every joint at `pose`.
pub fn constant_clip(pose: Pose, frames: usize, label: u32, id: &str) -> MotionClip {
    let seq = PoseSequence::new(
        vec![pose; frames],
        [0.0; NUM_BETAS],
        vec![[0.0; 3]; frames],
        30.0,
    )
    .unwrap();
    MotionClip::new(vec![seq], label, id).unwrap()
}

pub fn identity_pose() -> Pose {
    [AxisAngle::IDENTITY; NUM_JOINTS]
}

/// Spearman rank correlation; inputs without ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in order.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Every monotone contiguous path from `(0,0)` to `(n-1,m-1)`, costs summed
/// from the start of the path.
pub fn brute_force_dtw(n: usize, m: usize, d: &[Vec<f64>]) -> f64 {
    fn walk(i: usize, j: usize, acc: f64, n: usize, m: usize, d: &[Vec<f64>], best: &mut f64) {
        let acc = acc + d[i][j];
        if (i, j) == (n - 1, m - 1) {
            *best = best.min(acc);
            return;
        }
        if i + 1 < n && j + 1 < m {
            walk(i + 1, j + 1, acc, n, m, d, best);
        }
        if i + 1 < n {
            walk(i + 1, j, acc, n, m, d, best);
        }
        if j + 1 < m {
            walk(i, j + 1, acc, n, m, d, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(0, 0, 0.0, n, m, d, &mut best);
    best
}

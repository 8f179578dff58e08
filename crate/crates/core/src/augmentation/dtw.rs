use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motion_model::{MotionClip, PoseSequence, QuatPose};

/// Monotone, contiguous alignment between two sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarpPath {
    pairs: Vec<(usize, usize)>,
}

impl WarpPath {
    /// Checks the path runs from `(0, 0)` to `(n - 1, m - 1)` with unit steps.
    pub fn new(pairs: Vec<(usize, usize)>, n: usize, m: usize) -> Result<Self> {
        let path = WarpPath { pairs };
        if !path.is_valid_for(n, m) {
            return Err(Error::InvalidInput(format!(
                "not a contiguous monotone path over {n}x{m}"
            )));
        }
        Ok(path)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_valid_for(&self, n: usize, m: usize) -> bool {
        if n == 0 || m == 0 {
            return false;
        }
        if self.pairs.first() != Some(&(0, 0)) || self.pairs.last() != Some(&(n - 1, m - 1)) {
            return false;
        }
        self.pairs.windows(2).all(|w| {
            let (di, dj) = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
            matches!((di, dj), (1, 0) | (0, 1) | (1, 1))
        })
    }

    /// The same alignment with the roles of the two sequences swapped.
    pub fn transposed(&self) -> WarpPath {
        WarpPath {
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }
}

/// Sum over joints of the geodesic angle between corresponding rotations.
pub fn frame_pose_distance(f1: &QuatPose, f2: &QuatPose) -> f64 {
    f1.iter().zip(f2).map(|(p, q)| p.angle_to(q)).sum()
}

/// Classic dynamic time warping over an `n x m` grid of frame distances.
///
/// Steps are `(1,0)`, `(0,1)` and `(1,1)` with no band. On ties the
/// backtrack prefers the diagonal, then `(1,0)`, then `(0,1)`. The returned
/// cost is the sum of `dist` over the path.
pub fn dtw<D>(n: usize, m: usize, mut dist: D) -> Result<(WarpPath, f64)>
where
    D: FnMut(usize, usize) -> f64,
{
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!(
            "cannot align empty sequences ({n} x {m})"
        )));
    }
    let idx = |i: usize, j: usize| i * m + j;
    let mut acc = vec![0.0f64; n * m];
    for i in 0..n {
        for j in 0..m {
            let d = dist(i, j);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => acc[idx(0, j - 1)],
                (_, 0) => acc[idx(i - 1, 0)],
                _ => acc[idx(i - 1, j - 1)]
                    .min(acc[idx(i - 1, j)])
                    .min(acc[idx(i, j - 1)]),
            };
            acc[idx(i, j)] = best + d;
        }
    }

    let (mut i, mut j) = (n - 1, m - 1);
    let mut pairs = vec![(i, j)];
    while (i, j) != (0, 0) {
        (i, j) = match (i, j) {
            (0, _) => (0, j - 1),
            (_, 0) => (i - 1, 0),
            _ => {
                let diag = acc[idx(i - 1, j - 1)];
                let up = acc[idx(i - 1, j)];
                let left = acc[idx(i, j - 1)];
                if diag <= up && diag <= left {
                    (i - 1, j - 1)
                } else if up <= left {
                    (i - 1, j)
                } else {
                    (i, j - 1)
                }
            }
        };
        pairs.push((i, j));
    }
    pairs.reverse();
    Ok((WarpPath { pairs }, acc[idx(n - 1, m - 1)]))
}

/// Aligns two quaternion frame sequences under [`frame_pose_distance`].
pub fn dtw_frames(a: &[QuatPose], b: &[QuatPose]) -> Result<(WarpPath, f64)> {
    dtw(a.len(), b.len(), |i, j| frame_pose_distance(&a[i], &b[j]))
}

/// Aligns two pose sequences under [`frame_pose_distance`].
pub fn dtw_align(a: &PoseSequence, b: &PoseSequence) -> Result<(WarpPath, f64)> {
    dtw_frames(&a.quaternions(), &b.quaternions())
}

/// Aligns two clips with one shared path; the frame distance is summed over
/// people.
pub fn dtw_align_clips(a: &MotionClip, b: &MotionClip) -> Result<(WarpPath, f64)> {
    if a.people().len() != b.people().len() {
        return Err(Error::Shape(format!(
            "{} people vs {} people",
            a.people().len(),
            b.people().len()
        )));
    }
    let qa: Vec<Vec<QuatPose>> = a.people().iter().map(PoseSequence::quaternions).collect();
    let qb: Vec<Vec<QuatPose>> = b.people().iter().map(PoseSequence::quaternions).collect();
    dtw(a.frames(), b.frames(), |i, j| {
        qa.iter()
            .zip(&qb)
            .map(|(pa, pb)| frame_pose_distance(&pa[i], &pb[j]))
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion_model::{axis_angle_to_quaternion, AxisAngle, Quaternion, NUM_JOINTS};
    use std::f64::consts::PI;

    fn frame_with(joint: usize, q: Quaternion) -> QuatPose {
        let mut f = [Quaternion::IDENTITY; NUM_JOINTS];
        f[joint] = q;
        f
    }

    #[test]
    fn frame_distance_examples() {
        let q = Quaternion::new(0.5, 0.5, -0.5, 0.5).unwrap();
        let f = [q; NUM_JOINTS];
        assert_eq!(frame_pose_distance(&f, &f), 0.0);
        assert_eq!(frame_pose_distance(&f, &[q.neg(); NUM_JOINTS]), 0.0);

        let half = axis_angle_to_quaternion(AxisAngle::new(0.0, PI, 0.0)).unwrap();
        let d = frame_pose_distance(&frame_with(3, Quaternion::IDENTITY), &frame_with(3, half));
        assert!((d - PI).abs() < 1e-12);
    }

    #[test]
    fn single_row_forces_path() {
        let (path, cost) = dtw(1, 4, |_, j| j as f64).unwrap();
        assert_eq!(path.pairs(), &[(0, 0), (0, 1), (0, 2), (0, 3)]);
        assert_eq!(cost, 6.0);
    }

    #[test]
    fn identical_sequences_give_diagonal() {
        let xs: [f64; 5] = [0.0, 1.0, 1.0, 3.0, 2.0];
        let (path, cost) = dtw(5, 5, |i, j| (xs[i] - xs[j]).abs()).unwrap();
        assert_eq!(cost, 0.0);
        assert_eq!(path.pairs(), &[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]);
    }

    #[test]
    fn ties_prefer_vertical_step_over_horizontal() {
        // all-zero costs on a 2x3 grid: diagonal first, then the only
        // remaining move from (1,1) back to (0,0)
        let (path, _) = dtw(2, 3, |_, _| 0.0).unwrap();
        assert_eq!(path.pairs(), &[(0, 0), (0, 1), (1, 2)]);
        let (path, _) = dtw(3, 2, |_, _| 0.0).unwrap();
        assert_eq!(path.pairs(), &[(0, 0), (1, 0), (2, 1)]);
    }

    #[test]
    fn empty_input_is_domain_error() {
        assert!(matches!(dtw(0, 3, |_, _| 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn path_validation() {
        assert!(WarpPath::new(vec![(0, 0), (1, 1), (1, 2)], 2, 3).is_ok());
        assert!(WarpPath::new(vec![(0, 0), (1, 2)], 2, 3).is_err());
        assert!(WarpPath::new(vec![(0, 0), (1, 1)], 2, 3).is_err());
        assert!(WarpPath::new(vec![(0, 1), (1, 2)], 2, 3).is_err());
    }
}

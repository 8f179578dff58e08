mod common;

use common::{brute_force_dtw, constant_clip, identity_pose, random_clip, random_pose, spearman};
use proptest::prelude::*;
use synthmotion_core::augmentation::{
    additive_noise, dtw_align, dtw_align_clips, frame_pose_distance, interpolate_sequences,
    noise_offsets, Granularity, NoiseSpec,
};
use synthmotion_core::motion_model::{axis_angle_to_quaternion, AxisAngle, QuatPose};
use synthmotion_core::{rng, Error};

fn granularity() -> impl Strategy<Value = Granularity> {
    prop_oneof![
        Just(Granularity::Video),
        Just(Granularity::Frame),
        (2usize..12).prop_map(|interval| Granularity::Keyframe { interval }),
    ]
}

fn quat_frame(seed: u64) -> QuatPose {
    let mut r = rng::seeded(seed);
    random_pose(&mut r, 3.1).map(|a| axis_angle_to_quaternion(a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn noise_keeps_everything_but_rotations(
        seed in any::<u64>(),
        g in granularity(),
        sigma in 0.0f64..0.5,
        people in 1usize..3,
        frames in 1usize..40,
    ) {
        let clip = random_clip(seed, people, frames, 3, "n");
        let out = additive_noise(&clip, &NoiseSpec::new(g, sigma, seed ^ 1).unwrap()).unwrap();
        prop_assert_eq!(out.frames(), clip.frames());
        prop_assert_eq!(out.people().len(), clip.people().len());
        prop_assert_eq!(out.action_label(), clip.action_label());
        prop_assert_eq!(out.source_id(), clip.source_id());
        for (p, q) in out.people().iter().zip(clip.people()) {
            prop_assert_eq!(p.betas(), q.betas());
            prop_assert_eq!(p.trans(), q.trans());
            for pose in p.quaternions() {
                for quat in pose {
                    prop_assert!((quat.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
        let again = additive_noise(&clip, &NoiseSpec::new(g, sigma, seed ^ 1).unwrap()).unwrap();
        prop_assert_eq!(out, again);
    }

    #[test]
    fn zero_sigma_is_identity(seed in any::<u64>(), g in granularity()) {
        let clip = random_clip(seed, 2, 12, 0, "z");
        let out = additive_noise(&clip, &NoiseSpec::new(g, 0.0, seed).unwrap()).unwrap();
        prop_assert_eq!(out.max_rotation_distance(&clip), Some(0.0));
    }

    #[test]
    fn keyframe_offsets_interpolate(seed in any::<u64>(), interval in 2usize..30, frames in 1usize..120) {
        let g = Granularity::Keyframe { interval };
        let offs = noise_offsets(frames, g, 0.3, &mut rng::seeded(seed)).unwrap();
        prop_assert_eq!(offs.len(), frames);
        // re-draw the keyframes in the same order to get an independent oracle
        let mut r = rng::seeded(seed);
        let keys = noise_offsets((frames - 1).div_ceil(interval) + 1, Granularity::Frame, 0.3, &mut r)
            .unwrap();
        for (t, o) in offs.iter().enumerate() {
            let (k, f) = (t / interval, (t % interval) as f64 / interval as f64);
            for c in 0..4 {
                let expected = if t % interval == 0 {
                    keys[k][c]
                } else {
                    (1.0 - f) * keys[k][c] + f * keys[k + 1][c]
                };
                prop_assert!((o[c] - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn perturbation_grows_with_sigma() {
    let clip = random_clip(77, 1, 30, 0, "s");
    let sigmas = [0.01, 0.05, 0.1, 0.2];
    for g in [
        Granularity::Video,
        Granularity::Frame,
        Granularity::Keyframe { interval: 25 },
    ] {
        let means: Vec<f64> = sigmas
            .iter()
            .map(|&sigma| {
                let total: f64 = (0..1000u64)
                    .map(|seed| {
                        let out = additive_noise(&clip, &NoiseSpec::new(g, sigma, seed).unwrap())
                            .unwrap();
                        let (a, b) = (
                            out.people()[0].quaternions(),
                            clip.people()[0].quaternions(),
                        );
                        // one joint, every frame
                        a.iter()
                            .zip(&b)
                            .map(|(x, y)| x[5].angle_to(&y[5]))
                            .sum::<f64>()
                            / a.len() as f64
                    })
                    .sum();
                total / 1000.0
            })
            .collect();
        let rho = spearman(&sigmas, &means);
        println!("{g}: mean perturbation {means:?}, spearman {rho}");
        assert!(rho > 0.99, "{g}: {means:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dtw_matches_exhaustive_search(seed in any::<u64>(), n in 1usize..=8, m in 1usize..=8) {
        let a = random_clip(seed, 1, n, 0, "a");
        let b = random_clip(seed.wrapping_add(1), 1, m, 0, "b");
        let (qa, qb) = (a.people()[0].quaternions(), b.people()[0].quaternions());
        let d: Vec<Vec<f64>> = qa
            .iter()
            .map(|fa| qb.iter().map(|fb| frame_pose_distance(fa, fb)).collect())
            .collect();
        let (path, cost) = dtw_align(&a.people()[0], &b.people()[0]).unwrap();
        prop_assert_eq!(cost, brute_force_dtw(n, m, &d));
        prop_assert!(path.is_valid_for(n, m));
        let along: f64 = path.pairs().iter().fold(0.0, |acc, &(i, j)| acc + d[i][j]);
        prop_assert_eq!(along, cost);
        prop_assert!(path.len() >= n.max(m) && path.len() < n + m);
    }

    #[test]
    fn frame_distance_triangle_inequality(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (a, b, c) = (quat_frame(s1), quat_frame(s2), quat_frame(s3));
        prop_assert!(frame_pose_distance(&a, &c) <= frame_pose_distance(&a, &b) + frame_pose_distance(&b, &c) + 1e-10);
        prop_assert!((frame_pose_distance(&a, &b) - frame_pose_distance(&b, &a)).abs() < 1e-12);
        let neg = a.map(|q| q.neg());
        prop_assert!(frame_pose_distance(&a, &neg) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interpolation_unit_norm_and_symmetric(
        seed in any::<u64>(),
        n in 2usize..20,
        m in 2usize..20,
        people in 1usize..3,
        w in 0.0f64..=1.0,
    ) {
        let a = random_clip(seed, people, n, 4, "a");
        let b = random_clip(seed ^ 0x5555, people, m, 4, "b");
        let ab = interpolate_sequences(&a, &b, w).unwrap();
        let ba = interpolate_sequences(&b, &a, 1.0 - w).unwrap();
        let (path, _) = dtw_align_clips(&a, &b).unwrap();
        prop_assert_eq!(ab.frames(), path.len());
        prop_assert!(ab.max_rotation_distance(&ba).unwrap() < 1e-9);
        for p in ab.people() {
            for pose in p.quaternions() {
                for q in pose {
                    prop_assert!((q.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
        for (pab, pba) in ab.people().iter().zip(ba.people()) {
            for (x, y) in pab.trans().iter().zip(pba.trans()) {
                for c in 0..3 {
                    prop_assert!((x[c] - y[c]).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn interpolation_preconditions() {
    let a = random_clip(1, 1, 10, 1, "a");
    let b = random_clip(2, 1, 12, 2, "b");
    assert!(matches!(
        interpolate_sequences(&a, &b, 0.5),
        Err(Error::ClassMismatch { left: 1, right: 2 })
    ));
    let two = random_clip(3, 2, 12, 1, "c");
    assert!(matches!(
        interpolate_sequences(&a, &two, 0.5),
        Err(Error::Shape(_))
    ));
    assert!(interpolate_sequences(&a, &a, 1.5).is_err());
    assert!(interpolate_sequences(&a, &a, -0.1).is_err());
}

#[test]
fn coaxial_blend_hits_midpoint() {
    let clip = |angle: f64, frames: usize, id: &str| {
        let mut pose = identity_pose();
        pose[0] = AxisAngle::new(angle, 0.0, 0.0);
        constant_clip(pose, frames, 0, id)
    };
    let out = interpolate_sequences(&clip(0.2, 7, "a"), &clip(0.4, 5, "b"), 0.5).unwrap();
    for pose in out.people()[0].poses() {
        assert!((pose[0].x - 0.3).abs() < 1e-3);
        assert!(pose[0].y.abs() < 1e-12 && pose[0].z.abs() < 1e-12);
    }
}

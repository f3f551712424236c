mod common;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use screwxfer_core::arm::{forward_kinematics, ArmModel, JointConfig, JointPath};
use screwxfer_core::se3::{log_to_screw, sclerp, Pose, Rotation, Twist, Vec3};
use screwxfer_core::segmentation::{
    express_in_world, fk_path, relativize_to_passive, segment_constant_screws,
    segment_demonstration, FrameTag, GuidingPoses, SegmentError, DEFAULT_SEG_TOL,
};

/// Three screws of 20 samples each: rotation about z, translation along x,
/// rotation about y. Junction samples are shared, giving 60 poses with
/// junctions at indices 0, 19, 39 and 59.
fn three_screw_path() -> Vec<Pose> {
    let a = Pose::new(Rotation::rot_x(0.2), Vec3::new(0.4, -0.1, 0.3));
    let b = a.compose(&Pose::new(Rotation::rot_z(0.8), Vec3::ZERO));
    let c = b.compose(&Pose::from_translation(Vec3::new(0.25, 0.0, 0.0)));
    let d = c.compose(&Pose::new(Rotation::rot_y(0.7), Vec3::ZERO));
    let mut out: Vec<Pose> = (0..20).map(|j| sclerp(&a, &b, j as f64 / 19.0).unwrap()).collect();
    out.extend((1..=20).map(|j| sclerp(&b, &c, j as f64 / 20.0).unwrap()));
    out.extend((1..=20).map(|j| sclerp(&c, &d, j as f64 / 20.0).unwrap()));
    out
}

fn single_screw(samples: usize) -> Vec<Pose> {
    let a = Pose::new(Rotation::rot_y(0.3), Vec3::new(0.5, 0.1, 0.2));
    let b = a.compose(
        &Twist {
            angular: Vec3::new(0.2, 0.5, -0.3),
            linear: Vec3::new(0.1, 0.0, 0.05),
        }
        .exp(),
    );
    (0..samples)
        .map(|j| sclerp(&a, &b, j as f64 / (samples - 1) as f64).unwrap())
        .collect()
}

#[test]
fn single_screw_gives_endpoints_only() {
    let g = segment_constant_screws(&single_screw(20), DEFAULT_SEG_TOL).unwrap();
    assert_eq!(g.indices(), &[0, 19]);
    assert_eq!(g.frame(), FrameTag::World);
}

#[test]
fn three_screws_split_at_the_junctions() {
    let path = three_screw_path();
    assert_eq!(path.len(), 60);
    let g = segment_constant_screws(&path, DEFAULT_SEG_TOL).unwrap();
    assert_eq!(g.indices(), &[0, 19, 39, 59]);
    for (p, &i) in g.poses().iter().zip(g.indices()) {
        assert_eq!(*p, path[i]);
    }
}

#[test]
fn noisy_single_screw_is_absorbed() {
    let mut r = rng(30);
    let noisy: Vec<Pose> = single_screw(20)
        .into_iter()
        .map(|g| {
            // Pose noise of magnitude 1e-5 in the combined metric.
            let dir = random_vec(&mut r, 1.0).try_normalize(1e-9).unwrap_or(Vec3::X);
            let split: f64 = r.gen_range(0.0..1.0);
            let noise = Twist {
                angular: dir * (1e-5 * split),
                linear: random_vec(&mut r, 1.0).try_normalize(1e-9).unwrap_or(Vec3::Y)
                    * (1e-5 * (1.0 - split)),
            };
            g.compose(&noise.exp())
        })
        .collect();
    let g = segment_constant_screws(&noisy, 1e-3).unwrap();
    assert_eq!(g.len(), 2);
}

#[test]
fn reconstruction_stays_within_tolerance() {
    let path = three_screw_path();
    for tol in [1e-3, DEFAULT_SEG_TOL, 2e-2] {
        let g = segment_constant_screws(&path, tol).unwrap();
        let rec = g.reconstruct();
        assert_eq!(rec.len(), path.len());
        for (a, b) in rec.iter().zip(&path) {
            assert!(dist(a, b) <= tol);
        }
        let again = segment_constant_screws(&rec, tol).unwrap();
        assert_eq!(again.len(), g.len());
    }
}

#[test]
fn tolerance_and_length_errors() {
    let path = single_screw(5);
    assert_eq!(
        segment_constant_screws(&path, -1.0),
        Err(SegmentError::NonPositiveTolerance(-1.0))
    );
    assert!(segment_constant_screws(&path, f64::NAN).is_err());
    assert_eq!(segment_constant_screws(&path[..1], 1e-3), Err(SegmentError::TooFewPoses(1)));
    assert!(matches!(
        GuidingPoses::new(vec![Pose::IDENTITY; 2], vec![3, 3], FrameTag::World),
        Err(SegmentError::IndicesNotIncreasing)
    ));
    assert!(matches!(
        GuidingPoses::new(vec![Pose::IDENTITY; 2], vec![0], FrameTag::World),
        Err(SegmentError::BadLength { .. })
    ));
}

#[test]
fn fk_path_examples() {
    let arm = ArmModel::bundled_seven_dof();
    let q = JointConfig(vec![0.1, 0.4, 0.0, -1.0, 0.0, -0.3, 0.2]);
    let constant = JointPath {
        configs: vec![q.clone(); 4],
    };
    let poses = fk_path(&arm, &constant).unwrap();
    assert_eq!(poses.len(), 4);
    assert!(poses.windows(2).all(|w| w[0] == w[1]));

    // A ramp on one joint traces a single screw: one segment.
    let ramp = JointPath {
        configs: (0..15)
            .map(|k| {
                let mut c = q.clone();
                c.0[3] += 0.05 * k as f64;
                c
            })
            .collect(),
    };
    let poses = fk_path(&arm, &ramp).unwrap();
    for (p, c) in poses.iter().zip(&ramp.configs) {
        assert_eq!(*p, forward_kinematics(&arm, c).unwrap());
    }
    let s0 = log_to_screw(&poses[0].relative_to(&poses[7]));
    let s1 = log_to_screw(&poses[0].relative_to(&poses[14]));
    assert!((s0.axis - s1.axis).norm() < 1e-9);
    assert_eq!(segment_constant_screws(&poses, 1e-6).unwrap().len(), 2);
}

#[test]
fn relativize_examples() {
    let world = segment_constant_screws(&three_screw_path(), DEFAULT_SEG_TOL).unwrap();
    let same = relativize_to_passive(&world, &Pose::IDENTITY);
    assert_eq!(same.frame(), FrameTag::PassiveBase);
    for (a, b) in same.poses().iter().zip(world.poses()) {
        assert!(dist(a, b) < 1e-15);
    }
    let shift = Vec3::new(0.3, -0.2, 0.1);
    let moved = relativize_to_passive(&world, &Pose::from_translation(shift));
    for (a, b) in moved.poses().iter().zip(world.poses()) {
        assert!((a.translation - (b.translation - shift)).norm() < 1e-15);
        assert_eq!(a.rotation, b.rotation);
    }
}

#[test]
fn segment_demonstration_uses_the_passive_frame() {
    let arm = ArmModel::bundled_seven_dof();
    let q = JointConfig(vec![0.1, 0.4, 0.0, -1.0, 0.0, -0.3, 0.2]);
    let joints = JointPath {
        configs: (0..10)
            .map(|k| {
                let mut c = q.clone();
                c.0[0] += 0.03 * k as f64;
                c
            })
            .collect(),
    };
    let bs = Pose::new(Rotation::rot_z(0.4), Vec3::new(0.5, 0.1, -0.2));
    let g = segment_demonstration(&arm, &joints, &bs, DEFAULT_SEG_TOL).unwrap();
    assert_eq!(g.frame(), FrameTag::PassiveBase);
    let last = forward_kinematics(&arm, joints.configs.last().unwrap()).unwrap();
    assert!(dist(&bs.compose(g.poses().last().unwrap()), &last) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relativize_round_trip(bs in arb_pose(), a in arb_pose(), b in arb_pose()) {
        let g = GuidingPoses::new(vec![a, b], vec![0, 5], FrameTag::World).unwrap();
        let back = express_in_world(&relativize_to_passive(&g, &bs), &bs);
        prop_assert_eq!(back.frame(), FrameTag::World);
        for (x, y) in back.poses().iter().zip(g.poses()) {
            prop_assert!(dist(x, y) < 1e-10);
        }
    }

    #[test]
    fn segmentation_invariants(tol in 1e-4..5e-2f64, seed in 0u64..1000) {
        // Random piecewise-screw path with random segment lengths.
        let mut r = rng(seed);
        let mut path = vec![random_pose(&mut r)];
        for _ in 0..r.gen_range(1..4) {
            let start = *path.last().unwrap();
            let end = start.compose(&Twist {
                angular: random_vec(&mut r, 0.8),
                linear: random_vec(&mut r, 0.2),
            }.exp());
            let n = r.gen_range(3..12);
            path.extend((1..=n).map(|j| sclerp(&start, &end, j as f64 / n as f64).unwrap()));
        }
        let g = segment_constant_screws(&path, tol).unwrap();
        prop_assert_eq!(g.indices()[0], 0);
        prop_assert_eq!(*g.indices().last().unwrap(), path.len() - 1);
        let rec = g.reconstruct();
        for (a, b) in rec.iter().zip(&path) {
            prop_assert!(dist(a, b) <= tol);
        }
        let again = segment_constant_screws(&rec, tol).unwrap();
        prop_assert_eq!(again.len(), g.len());
    }
}

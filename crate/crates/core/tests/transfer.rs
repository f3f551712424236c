mod common;

use proptest::prelude::*;

use common::*;
use screwxfer_core::arm::ArmModel;
use screwxfer_core::bench::{sample_instances, synthetic_demonstration, BenchConfig, Cell, DemoScript};
use screwxfer_core::frames::{assign_demo_frames, assign_new_frames, FrameAssignment, MotionTransferFrame, TaskInstance};
use screwxfer_core::se3::{log_to_screw, Pose, Rotation, Vec3};
use screwxfer_core::segmentation::{segment_demonstration, FrameTag, GuidingPoses, DEFAULT_SEG_TOL};
use screwxfer_core::transfer::{
    baseline_transfer, cframe_transfer, instantiate, relativize, to_end_effector, TransferError,
};

struct Demo {
    task: TaskInstance,
    guiding: GuidingPoses,
    frames: FrameAssignment,
}

fn demo() -> Demo {
    let config = BenchConfig::default();
    let arm = ArmModel::bundled_seven_dof();
    let d = synthetic_demonstration(&arm, &DemoScript::default(), &config.table, &config.planner).unwrap();
    let guiding = segment_demonstration(&arm, &d.joints, &d.task.passive_base, DEFAULT_SEG_TOL).unwrap();
    let frames = assign_demo_frames(&d.task, &guiding).unwrap();
    Demo {
        task: d.task,
        guiding,
        frames,
    }
}

fn random_guiding(seed: u64, k: usize) -> GuidingPoses {
    let mut r = rng(seed);
    let poses = (0..k).map(|_| random_pose(&mut r)).collect();
    GuidingPoses::new(poses, (0..k).map(|i| 3 * i).collect(), FrameTag::PassiveBase).unwrap()
}

fn moved(frames: &FrameAssignment, q: &Pose) -> FrameAssignment {
    let m = |f: &MotionTransferFrame| MotionTransferFrame {
        world: q.compose(&f.world),
        ..*f
    };
    FrameAssignment {
        primary: m(&frames.primary),
        passive: m(&frames.passive),
    }
}

#[test]
fn relativize_with_identity_transforms_is_the_identity() {
    let g = random_guiding(60, 5);
    let rel = relativize(&g, &Pose::IDENTITY, &Pose::IDENTITY, &Pose::IDENTITY).unwrap();
    assert_eq!(rel.frame(), FrameTag::PassiveCFrame);
    assert_eq!(rel.indices(), g.indices());
    for (a, b) in rel.poses().iter().zip(g.poses()) {
        assert!(dist(a, b) < 1e-15);
    }
}

#[test]
fn relativize_with_translations_offsets_each_pose() {
    let g = random_guiding(61, 4);
    let cs = Vec3::new(0.0, 0.0, 0.05);
    let cr = Vec3::new(0.03, 0.0, 0.1);
    let rel = relativize(
        &g,
        &Pose::from_translation(cs),
        &Pose::IDENTITY,
        &Pose::from_translation(cr),
    )
    .unwrap();
    for (a, b) in rel.poses().iter().zip(g.poses()) {
        let expected = b.translation - cs + b.rotation.rotate(cr);
        assert!((a.translation - expected).norm() < 1e-15);
        assert_eq!(a.rotation, b.rotation);
    }
}

#[test]
fn relativize_is_invertible() {
    let mut r = rng(62);
    let g = random_guiding(63, 6);
    let (bs_cs, e_br, br_cr) = (random_pose(&mut r), random_pose(&mut r), random_pose(&mut r));
    let rel = relativize(&g, &bs_cs, &e_br, &br_cr).unwrap();
    let right = e_br.compose(&br_cr).inverse();
    for (a, b) in rel.poses().iter().zip(g.poses()) {
        let back = bs_cs.compose(a).compose(&right);
        assert!(dist(&back, b) < 1e-10);
    }
}

#[test]
fn instantiate_examples() {
    let d = demo();
    let rel = relativize(&d.guiding, &d.frames.passive.local, &d.task.grasp, &d.frames.primary.local).unwrap();
    let same = instantiate(&rel, &Pose::IDENTITY).unwrap();
    assert_eq!(same, rel.poses());

    // At the demo's own passive C-frame the demo's C_r world track comes back.
    let track = instantiate(&rel, &d.frames.passive.world).unwrap();
    let offset = d.task.grasp.compose(&d.frames.primary.local);
    for (c, g) in track.iter().zip(d.guiding.poses()) {
        let expected = d.task.passive_base.compose(g).compose(&offset);
        assert!(dist(c, &expected) < 1e-12);
    }

    let shift = Pose::from_translation(Vec3::new(0.1, -0.2, 0.0));
    let moved = instantiate(&rel, &shift.compose(&d.frames.passive.world)).unwrap();
    for (a, b) in moved.iter().zip(&track) {
        assert!((a.translation - b.translation - shift.translation).norm() < 1e-12);
        assert!(dist(&Pose::from_rotation(a.rotation), &Pose::from_rotation(b.rotation)) < 1e-12);
    }
}

#[test]
fn to_end_effector_examples() {
    let mut r = rng(64);
    let track: Vec<Pose> = (0..4).map(|_| random_pose(&mut r)).collect();
    for (a, b) in to_end_effector(&track, &Pose::IDENTITY, &Pose::IDENTITY).iter().zip(&track) {
        assert!(dist(a, b) < 1e-15);
    }
    let grasp = Pose::from_rotation(Rotation::rot_x(0.4));
    let out = to_end_effector(&track, &grasp, &Pose::IDENTITY);
    for (a, b) in out.iter().zip(&track) {
        assert!(dist(a, &b.compose(&grasp.inverse())) < 1e-15);
    }
}

#[test]
fn keystone_same_instance_reproduces_the_demo() {
    let d = demo();
    let result = cframe_transfer(&d.guiding, &d.frames, &d.task.grasp, &d.frames, &d.task.grasp).unwrap();
    let baseline = baseline_transfer(&d.guiding, &d.task.passive_base).unwrap();
    assert_eq!(result.end_effector.frame(), FrameTag::World);
    assert_eq!(baseline.frame(), FrameTag::World);
    for ((c, b), g) in result
        .end_effector
        .poses()
        .iter()
        .zip(baseline.poses())
        .zip(d.guiding.poses())
    {
        let demo_world = d.task.passive_base.compose(g);
        assert!(dist(c, &demo_world) < 1e-9);
        assert!(dist(c, b) < 1e-9);
    }
}

#[test]
fn same_instance_with_new_instance_rules_stays_close() {
    // The new-instance rules on the demo's own instance pick nearly the
    // same frames, so the transfer nearly reproduces the demo.
    let d = demo();
    let new = assign_new_frames(&d.task).unwrap();
    let result = cframe_transfer(&d.guiding, &d.frames, &d.task.grasp, &new, &d.task.grasp).unwrap();
    for (c, g) in result.end_effector.poses().iter().zip(d.guiding.poses()) {
        assert!(dist(c, &d.task.passive_base.compose(g)) < 5e-3);
    }
}

#[test]
fn baseline_examples() {
    let g = random_guiding(65, 4);
    let bs = Pose::new(Rotation::rot_z(0.3), Vec3::new(0.5, 0.1, -0.2));
    let out = baseline_transfer(&g, &bs).unwrap();
    let shift = Vec3::new(0.05, 0.02, 0.0);
    let moved = baseline_transfer(&g, &Pose::from_translation(shift).compose(&bs)).unwrap();
    for (a, b) in moved.poses().iter().zip(out.poses()) {
        assert!((a.translation - b.translation - shift).norm() < 1e-15);
    }
}

#[test]
fn frame_tags_are_checked() {
    let world = GuidingPoses::new(vec![Pose::IDENTITY; 2], vec![0, 1], FrameTag::World).unwrap();
    let err = TransferError::FrameMismatch {
        expected: FrameTag::PassiveBase,
        got: FrameTag::World,
    };
    assert_eq!(baseline_transfer(&world, &Pose::IDENTITY), Err(err));
    assert_eq!(relativize(&world, &Pose::IDENTITY, &Pose::IDENTITY, &Pose::IDENTITY), Err(err));
    assert!(instantiate(&world, &Pose::IDENTITY).is_err());
}

fn assert_screw_invariants_preserved(demo: &[Pose], transferred: &[Pose]) {
    for (d, t) in demo.windows(2).zip(transferred.windows(2)) {
        let sd = log_to_screw(&d[0].relative_to(&d[1]));
        let st = log_to_screw(&t[0].relative_to(&t[1]));
        assert!((sd.angle - st.angle).abs() < 1e-9);
        if sd.angle > 1e-6 {
            assert!((sd.pitch - st.pitch).abs() < 1e-9);
        } else {
            assert!((sd.translation - st.translation).abs() < 1e-9);
        }
    }
}

#[test]
fn screw_invariants_survive_the_transfer() {
    let d = demo();
    let config = BenchConfig::default();
    for cell in Cell::all() {
        for task in sample_instances(&cell, 10, 7, &config).unwrap() {
            let frames = assign_new_frames(&task).unwrap();
            let result = cframe_transfer(&d.guiding, &d.frames, &d.task.grasp, &frames, &task.grasp).unwrap();
            assert_screw_invariants_preserved(d.guiding.poses(), result.end_effector.poses());
            assert_screw_invariants_preserved(d.guiding.poses(), &result.c_r_track);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transfer_is_left_equivariant(q in arb_pose(), seed in 0u64..500) {
        let g = random_guiding(seed, 5);
        let mut r = rng(seed + 1);
        let mk = |r: &mut rand_chacha::ChaCha8Rng, owner| {
            let local = random_pose(r);
            MotionTransferFrame { owner, local, world: random_pose(r).compose(&local) }
        };
        use screwxfer_core::frames::Owner;
        let demo_frames = FrameAssignment { primary: mk(&mut r, Owner::Primary), passive: mk(&mut r, Owner::Passive) };
        let new_frames = FrameAssignment { primary: mk(&mut r, Owner::Primary), passive: mk(&mut r, Owner::Passive) };
        let (gd, gn) = (random_pose(&mut r), random_pose(&mut r));
        let a = cframe_transfer(&g, &demo_frames, &gd, &new_frames, &gn).unwrap();
        let b = cframe_transfer(&g, &demo_frames, &gd, &moved(&new_frames, &q), &gn).unwrap();
        for (x, y) in a.end_effector.poses().iter().zip(b.end_effector.poses()) {
            prop_assert!(dist(&q.compose(x), y) < 1e-9);
        }
        assert_screw_invariants_preserved(g.poses(), a.end_effector.poses());
    }
}

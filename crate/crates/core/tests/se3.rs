mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use proptest::prelude::*;

use common::*;
use screwxfer_core::se3::{
    log_to_screw, sclerp, screw_to_pose, DualQuat, Pose, Rotation, ScrewPath, Se3Error, Twist,
    Vec3, ANGLE_EPSILON,
};

fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn compose_examples() {
    let mut r = rng(1);
    let g = random_pose(&mut r);
    assert!(dist(&Pose::IDENTITY.compose(&g), &g) < 1e-12);
    assert!(dist(&g.compose(&g.inverse()), &Pose::IDENTITY) < 1e-10);
    let a = Pose::from_translation(Vec3::new(1.0, 0.0, 0.0));
    let b = Pose::from_translation(Vec3::new(0.0, 2.0, 0.0));
    assert!(close(a.compose(&b).translation, Vec3::new(1.0, 2.0, 0.0), 1e-15));
}

#[test]
fn compose_applies_right_operand_first() {
    let a = Pose::new(Rotation::rot_z(FRAC_PI_2), Vec3::ZERO);
    let b = Pose::from_translation(Vec3::X);
    // a·b maps the origin to a(b(0)) = Rz(90°)·(1,0,0).
    assert!(close(a.compose(&b).translation, Vec3::Y, 1e-15));
}

#[test]
fn log_of_quarter_turn_about_z() {
    let s = log_to_screw(&Pose::from_rotation(Rotation::rot_z(FRAC_PI_2)));
    assert!(close(s.axis, Vec3::Z, 1e-12));
    assert!(s.moment.norm() < 1e-12);
    assert!(s.pitch.abs() < 1e-12);
    assert!((s.angle - FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn log_of_pure_translation() {
    let s = log_to_screw(&Pose::from_translation(Vec3::new(0.0, 0.0, 0.3)));
    assert!(s.is_pure_translation());
    assert!(s.pitch.is_infinite());
    assert!(close(s.axis, Vec3::Z, 1e-12));
    assert!((s.translation - 0.3).abs() < 1e-12);
    assert_eq!(s.angle, 0.0);
}

#[test]
fn log_of_identity_is_zero_translation() {
    let s = log_to_screw(&Pose::IDENTITY);
    assert!(s.is_pure_translation());
    assert_eq!(s.translation, 0.0);
    assert!(dist(&screw_to_pose(&s, 1.0).unwrap(), &Pose::IDENTITY) < 1e-15);
}

#[test]
fn screw_to_pose_examples() {
    let mut r = rng(2);
    let g = random_pose(&mut r);
    let s = log_to_screw(&g);
    assert!(dist(&screw_to_pose(&s, 0.0).unwrap(), &Pose::IDENTITY) < 1e-15);
    assert!(dist(&screw_to_pose(&s, 1.0).unwrap(), &g) < 1e-9);

    let quarter = log_to_screw(&Pose::from_rotation(Rotation::rot_z(FRAC_PI_2)));
    let half = screw_to_pose(&quarter, 0.5).unwrap();
    assert!(dist(&half, &Pose::from_rotation(Rotation::rot_z(FRAC_PI_4))) < 1e-12);
}

#[test]
fn tau_outside_unit_interval_is_rejected() {
    let s = log_to_screw(&Pose::IDENTITY);
    assert_eq!(screw_to_pose(&s, 1.5), Err(Se3Error::TauOutOfRange(1.5)));
    assert_eq!(screw_to_pose(&s, -0.1), Err(Se3Error::TauOutOfRange(-0.1)));
    assert!(sclerp(&Pose::IDENTITY, &Pose::IDENTITY, 2.0).is_err());
}

#[test]
fn sclerp_half_turn_with_translation() {
    let g1 = Pose::new(Rotation::rot_z(PI), Vec3::new(0.0, 0.0, 0.1));
    let mid = sclerp(&Pose::IDENTITY, &g1, 0.5).unwrap();
    let expected = Pose::new(Rotation::rot_z(FRAC_PI_2), Vec3::new(0.0, 0.0, 0.05));
    assert!(dist(&mid, &expected) < 1e-12);
}

#[test]
fn half_turn_axis_sign_is_deterministic() {
    for axis in [Vec3::X, -Vec3::X, Vec3::new(1.0, -1.0, 0.0), Vec3::new(0.0, 1.0, -1.0)] {
        let s = log_to_screw(&Pose::from_rotation(Rotation::from_axis_angle(axis, PI)));
        assert!((s.angle - PI).abs() < 1e-12);
        let r = s.axis.dot(Vec3::new(1.0, 1.0, 1.0));
        if r.abs() > 1e-12 {
            assert!(r > 0.0, "axis {:?}", s.axis);
        } else {
            let first = [s.axis.x, s.axis.y, s.axis.z].into_iter().find(|c| c.abs() > 1e-12);
            assert!(first.unwrap() > 0.0);
        }
    }
}

#[test]
fn sclerp_endpoints_are_exact() {
    let mut r = rng(3);
    for _ in 0..1000 {
        let (a, b) = (random_pose(&mut r), random_pose(&mut r));
        assert_eq!(sclerp(&a, &b, 0.0).unwrap(), a);
        assert_eq!(sclerp(&a, &b, 1.0).unwrap(), b);
        let path = ScrewPath::new(a, b);
        assert!(dist(&path.at(1.0), &b) <= 1e-10);
        // The screw alone also lands on the endpoint.
        let s = log_to_screw(&a.relative_to(&b));
        assert!(dist(&a.compose(&s.displacement(1.0)), &b) <= 1e-9);
    }
}

/// Exponentiating the twist of `log_to_screw` with a matrix power series
/// reproduces the pose.
#[test]
fn log_matches_matrix_exponential_oracle() {
    let mut r = rng(4);
    for _ in 0..300 {
        let g = random_pose(&mut r);
        let s = log_to_screw(&g);
        assert!(s.angle >= 0.0 && s.angle <= PI);
        let m = expm(&twist_matrix(&s.twist()));
        assert!(mat_max_diff(&m, &g.to_matrix()) < 1e-9, "{g:?}");
    }
}

#[test]
fn twist_exp_matches_matrix_exponential_oracle() {
    let mut r = rng(5);
    for _ in 0..300 {
        let t = Twist {
            angular: random_vec(&mut r, 2.0),
            linear: random_vec(&mut r, 1.0),
        };
        assert!(mat_max_diff(&expm(&twist_matrix(&t)), &t.exp().to_matrix()) < 1e-10);
    }
}

#[test]
fn screw_params_are_valid_plucker_lines() {
    let mut r = rng(6);
    for _ in 0..1000 {
        let s = log_to_screw(&random_pose(&mut r));
        assert!((s.axis.norm() - 1.0).abs() < 1e-12);
        assert!(s.axis.dot(s.moment).abs() < 1e-10);
        assert!((s.pitch * s.angle - s.translation).abs() < 1e-12);
    }
}

#[test]
fn constant_screw_axis_along_interpolant() {
    let mut r = rng(7);
    for _ in 0..1000 {
        let (a, b) = (random_pose(&mut r), random_pose(&mut r));
        let total = log_to_screw(&a.relative_to(&b));
        if total.angle <= ANGLE_EPSILON {
            continue;
        }
        let t1: f64 = rand::Rng::gen_range(&mut r, 0.0..0.9);
        let t2: f64 = rand::Rng::gen_range(&mut r, t1 + 0.05..1.0);
        let g1 = sclerp(&a, &b, t1).unwrap();
        let g2 = sclerp(&a, &b, t2).unwrap();
        let part = log_to_screw(&g1.relative_to(&g2));
        // The relative screw is expressed in g1's frame; map it back to a's.
        let back = a.relative_to(&g1);
        let axis = back.rotation.rotate(part.axis);
        let point = back.transform_point(part.axis_point());
        assert!(close(axis, total.axis, 1e-8));
        assert!(close(point.cross(axis), total.moment, 1e-8));
    }
}

#[test]
fn sclerp_is_left_invariant() {
    let mut r = rng(8);
    for _ in 0..1000 {
        let (a, b, q) = (random_pose(&mut r), random_pose(&mut r), random_pose(&mut r));
        let tau: f64 = rand::Rng::gen_range(&mut r, 0.0..1.0);
        let lhs = sclerp(&q.compose(&a), &q.compose(&b), tau).unwrap();
        let rhs = q.compose(&sclerp(&a, &b, tau).unwrap());
        assert!(dist(&lhs, &rhs) < 1e-9);
    }
}

#[test]
fn dual_quaternion_product_matches_composition() {
    let mut r = rng(9);
    for _ in 0..1000 {
        let (a, b) = (random_pose(&mut r), random_pose(&mut r));
        let dq = DualQuat::from_pose(&a) * DualQuat::from_pose(&b);
        assert!(dist(&dq.to_pose(), &a.compose(&b)) < 1e-10);
        assert!((dq.real.norm() - 1.0).abs() < 1e-12);
        assert!(dq.orthogonality_residual().abs() < 1e-12);
    }
}

#[test]
fn twist_log_small_rotations_are_continuous() {
    for angle in [1e-6, 1e-8, 5e-9, 1e-10, 1e-12] {
        let g = Pose::new(Rotation::rot_x(angle), Vec3::new(0.1, -0.2, 0.3));
        let t = Twist::log(&g);
        assert!((t.angular.x - angle).abs() < 1e-15 + angle * 1e-6, "{angle} {:?}", t);
        let d = dist(&t.exp(), &g);
        assert!(d < 1e-10, "{angle} {d}");
    }
}

#[test]
fn twist_transformed_is_the_adjoint() {
    let mut r = rng(10);
    for _ in 0..200 {
        let g = random_pose(&mut r);
        let t = Twist {
            angular: random_vec(&mut r, 1.0),
            linear: random_vec(&mut r, 1.0),
        };
        // exp(Ad_g ξ) = g exp(ξ) g⁻¹
        let lhs = t.transformed(&g).exp();
        let rhs = g.compose(&t.exp()).compose(&g.inverse());
        assert!(dist(&lhs, &rhs) < 1e-10);
    }
}

proptest! {
    #[test]
    fn rotation_constructors_normalize(r in arb_rotation()) {
        prop_assert!((r.quat().norm() - 1.0).abs() < 1e-12);
        prop_assert!(r.canonicalize().quat().w >= 0.0);
    }

    #[test]
    fn pose_inverse_round_trip(g in arb_pose()) {
        prop_assert!(dist(&g.compose(&g.inverse()), &Pose::IDENTITY) < 1e-10);
        prop_assert!(dist(&g.inverse().compose(&g), &Pose::IDENTITY) < 1e-10);
    }

    #[test]
    fn composition_is_associative(a in arb_pose(), b in arb_pose(), c in arb_pose()) {
        let l = a.compose(&b).compose(&c);
        let r = a.compose(&b.compose(&c));
        prop_assert!(dist(&l, &r) < 1e-10);
    }

    #[test]
    fn dual_quaternion_round_trip(g in arb_pose()) {
        let dq = DualQuat::from_pose(&g);
        prop_assert!(dq.orthogonality_residual().abs() < 1e-12);
        prop_assert!(dist(&dq.to_pose(), &g) < 1e-10);
    }

    #[test]
    fn matrix_round_trip(g in arb_pose()) {
        prop_assert!(dist(&Pose::from_matrix(g.to_matrix()), &g) < 1e-10);
    }

    #[test]
    fn log_exp_round_trip(g in arb_pose()) {
        prop_assert!(dist(&screw_to_pose(&log_to_screw(&g), 1.0).unwrap(), &g) < 1e-9);
        prop_assert!(dist(&Twist::log(&g).exp(), &g) < 1e-9);
    }

    #[test]
    fn sclerp_splits_the_screw(a in arb_pose(), b in arb_pose(), t1 in 0.0..1.0f64, t2 in 0.0..1.0f64) {
        // Interpolating from a point on the path to the end stays on the path.
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        let g_lo = sclerp(&a, &b, lo).unwrap();
        prop_assume!(lo < 0.99);
        let s = (hi - lo) / (1.0 - lo);
        let on = sclerp(&g_lo, &b, s).unwrap();
        prop_assert!(dist(&on, &sclerp(&a, &b, hi).unwrap()) < 1e-8);
    }
}

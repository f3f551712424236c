#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use screwxfer_core::se3::{pose_distance, Pose, Quat, Rotation, Twist, Vec3};

pub type Mat4 = [[f64; 4]; 4];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rotation(rng: &mut impl Rng) -> Rotation {
    loop {
        let q = Quat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return Rotation::from_quat(q).unwrap();
        }
    }
}

pub fn random_vec(rng: &mut impl Rng, scale: f64) -> Vec3 {
    Vec3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn random_pose(rng: &mut impl Rng) -> Pose {
    Pose::new(random_rotation(rng), random_vec(rng, 1.0))
}

prop_compose! {
    pub fn arb_rotation()(w in -1.0..1.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64)
        -> Rotation {
        Rotation::from_quat(Quat::new(w, x, y, z)).unwrap_or(Rotation::IDENTITY)
    }
}

prop_compose! {
    pub fn arb_pose()(r in arb_rotation(), t in prop::array::uniform3(-1.0..1.0f64)) -> Pose {
        Pose::new(r, Vec3::from_array(t))
    }
}

pub fn dist(a: &Pose, b: &Pose) -> f64 {
    pose_distance(a, b)
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn identity4() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// 4×4 homogeneous matrix of a twist `[ω̂ v; 0 0]`.
pub fn twist_matrix(t: &Twist) -> Mat4 {
    let (w, v) = (t.angular, t.linear);
    [
        [0.0, -w.z, w.y, v.x],
        [w.z, 0.0, -w.x, v.y],
        [-w.y, w.x, 0.0, v.z],
        [0.0, 0.0, 0.0, 0.0],
    ]
}

/// Matrix exponential by scaling and squaring with a truncated power series.
pub fn expm(m: &Mat4) -> Mat4 {
    let norm: f64 = m.iter().flatten().map(|x| x.abs()).sum();
    let mut k = 0;
    while norm / f64::from(1u32 << k) > 0.25 {
        k += 1;
    }
    let s = 1.0 / f64::from(1u32 << k);
    let a: Mat4 = m.map(|row| row.map(|x| x * s));
    let mut sum = identity4();
    let mut term = identity4();
    for n in 1..30 {
        term = mat_mul(&term, &a).map(|row| row.map(|x| x / n as f64));
        for i in 0..4 {
            for j in 0..4 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..k {
        sum = mat_mul(&sum, &sum);
    }
    sum
}

pub fn mat_max_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

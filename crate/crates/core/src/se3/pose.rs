use core::ops::Mul;

use super::{Rotation, Vec3};

/// A rigid transform in SE(3).
///
/// Composition follows the homogeneous-matrix product: `a.compose(&b)` is
/// the matrix `A·B`, i.e. the transform that applies `b` first and then
/// `a`. With this convention a pose `g_AB` (frame `{B}` seen from `{A}`)
/// chains as `g_AC = g_AB · g_BC`, and the relative pose of `b` seen from
/// `a` is `a⁻¹·b`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Pose {
    pub rotation: Rotation,
    pub translation: Vec3,
}

impl Pose {
    pub const IDENTITY: Pose = Pose {
        rotation: Rotation::IDENTITY,
        translation: Vec3::ZERO,
    };

    pub fn new(rotation: Rotation, translation: Vec3) -> Self {
        Self {
            rotation,
            translation,
        }
    }

    pub fn from_translation(t: Vec3) -> Self {
        Self::new(Rotation::IDENTITY, t)
    }

    pub fn from_rotation(r: Rotation) -> Self {
        Self::new(r, Vec3::ZERO)
    }

    #[inline]
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            rotation: self.rotation.compose(other.rotation),
            translation: self.translation + self.rotation.rotate(other.translation),
        }
    }

    #[inline]
    pub fn inverse(&self) -> Pose {
        let inv = self.rotation.inverse();
        Pose {
            rotation: inv,
            translation: -inv.rotate(self.translation),
        }
    }

    /// `self⁻¹ · other`: `other` expressed in the frame of `self`.
    #[inline]
    pub fn relative_to(&self, other: &Pose) -> Pose {
        self.inverse().compose(other)
    }

    #[inline]
    pub fn transform_point(&self, p: Vec3) -> Vec3 {
        self.translation + self.rotation.rotate(p)
    }

    #[inline]
    pub fn transform_vector(&self, v: Vec3) -> Vec3 {
        self.rotation.rotate(v)
    }

    /// Row-major 4×4 homogeneous matrix.
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let r = self.rotation.to_matrix();
        let t = self.translation;
        [
            [r[0][0], r[0][1], r[0][2], t.x],
            [r[1][0], r[1][1], r[1][2], t.y],
            [r[2][0], r[2][1], r[2][2], t.z],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    /// From a row-major 4×4 homogeneous matrix; the bottom row is ignored.
    pub fn from_matrix(m: [[f64; 4]; 4]) -> Pose {
        let r = [
            [m[0][0], m[0][1], m[0][2]],
            [m[1][0], m[1][1], m[1][2]],
            [m[2][0], m[2][1], m[2][2]],
        ];
        Pose::new(
            Rotation::from_matrix(r),
            Vec3::new(m[0][3], m[1][3], m[2][3]),
        )
    }
}

impl Mul for Pose {
    type Output = Pose;
    fn mul(self, o: Pose) -> Pose {
        self.compose(&o)
    }
}

impl Mul<&Pose> for &Pose {
    type Output = Pose;
    fn mul(self, o: &Pose) -> Pose {
        self.compose(o)
    }
}

/// Rotation angle (rad) plus translation distance (m) between two poses.
///
/// Both terms are frame-independent: the angle is that of `a⁻¹b` and the
/// distance is `|t_b - t_a|`.
pub fn pose_distance(a: &Pose, b: &Pose) -> f64 {
    let dr = a.rotation.inverse().compose(b.rotation).angle();
    dr + (b.translation - a.translation).norm()
}

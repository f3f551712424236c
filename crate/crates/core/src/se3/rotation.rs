use core::ops::{Add, Mul, Neg, Sub};

use super::Vec3;
use crate::math;

/// A general (not necessarily unit) quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Pure quaternion `0 + v`.
    #[inline]
    pub fn pure(v: Vec3) -> Self {
        Self::new(0.0, v.x, v.y, v.z)
    }

    #[inline]
    pub fn vector(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Quat {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn dot(self, o: Quat) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::sqrt(self.dot(self))
    }

    #[inline]
    pub fn scale(self, s: f64) -> Quat {
        Quat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

impl Mul for Quat {
    type Output = Quat;
    #[inline]
    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Add for Quat {
    type Output = Quat;
    #[inline]
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    #[inline]
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    #[inline]
    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}

/// A rotation stored as a unit quaternion.
///
/// Every constructor normalizes, so the stored quaternion has unit norm to
/// machine precision. `q` and `-q` describe the same rotation; use
/// [`Rotation::canonicalize`] to pick the `w >= 0` representative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation(Quat);

impl Default for Rotation {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation(Quat::IDENTITY);

    /// Normalizes `q`. Returns `None` for a zero or non-finite quaternion.
    pub fn from_quat(q: Quat) -> Option<Self> {
        let n = q.norm();
        if !n.is_finite() || n < 1e-300 {
            return None;
        }
        Some(Rotation(q.scale(1.0 / n)))
    }

    /// Wraps an already-normalized quaternion, renormalizing to keep the norm
    /// invariant tight.
    pub(crate) fn from_quat_unchecked(q: Quat) -> Self {
        Rotation(q.scale(1.0 / q.norm()))
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let Some(u) = axis.try_normalize(0.0) else {
            return Self::IDENTITY;
        };
        let (s, c) = (math::sin(0.5 * angle), math::cos(0.5 * angle));
        Self::from_quat_unchecked(Quat::new(c, u.x * s, u.y * s, u.z * s))
    }

    pub fn rot_x(angle: f64) -> Self {
        Self::from_axis_angle(Vec3::X, angle)
    }

    pub fn rot_y(angle: f64) -> Self {
        Self::from_axis_angle(Vec3::Y, angle)
    }

    pub fn rot_z(angle: f64) -> Self {
        Self::from_axis_angle(Vec3::Z, angle)
    }

    /// Rotation whose columns are the given orthonormal axes.
    pub fn from_axes(x: Vec3, y: Vec3, z: Vec3) -> Self {
        Self::from_matrix([[x.x, y.x, z.x], [x.y, y.y, z.y], [x.z, y.z, z.z]])
    }

    /// Shepperd's method; `m` is row-major and assumed orthonormal.
    pub fn from_matrix(m: [[f64; 3]; 3]) -> Self {
        let tr = m[0][0] + m[1][1] + m[2][2];
        let q = if tr > 0.0 {
            let s = math::sqrt(tr + 1.0) * 2.0;
            Quat::new(
                0.25 * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            )
        } else if m[0][0] > m[1][1] && m[0][0] > m[2][2] {
            let s = math::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]) * 2.0;
            Quat::new(
                (m[2][1] - m[1][2]) / s,
                0.25 * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        } else if m[1][1] > m[2][2] {
            let s = math::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]) * 2.0;
            Quat::new(
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                0.25 * s,
                (m[1][2] + m[2][1]) / s,
            )
        } else {
            let s = math::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]) * 2.0;
            Quat::new(
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                0.25 * s,
            )
        };
        Self::from_quat_unchecked(q)
    }

    /// Row-major rotation matrix.
    pub fn to_matrix(self) -> [[f64; 3]; 3] {
        let Quat { w, x, y, z } = self.0;
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

    #[inline]
    pub fn quat(self) -> Quat {
        self.0
    }

    #[inline]
    pub fn inverse(self) -> Rotation {
        Rotation(self.0.conj())
    }

    #[inline]
    pub fn compose(self, o: Rotation) -> Rotation {
        Rotation::from_quat_unchecked(self.0 * o.0)
    }

    /// Rotate a vector (`q v q*`, expanded).
    #[inline]
    pub fn rotate(self, v: Vec3) -> Vec3 {
        let u = self.0.vector();
        let w = self.0.w;
        let t = 2.0 * u.cross(v);
        v + w * t + u.cross(t)
    }

    /// The `w >= 0` representative of the double cover.
    pub fn canonicalize(self) -> Rotation {
        if self.0.w < 0.0 {
            Rotation(-self.0)
        } else {
            self
        }
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(self) -> f64 {
        2.0 * math::atan2(self.0.vector().norm(), self.0.w.abs())
    }

    pub fn x_axis(self) -> Vec3 {
        self.rotate(Vec3::X)
    }

    pub fn y_axis(self) -> Vec3 {
        self.rotate(Vec3::Y)
    }

    pub fn z_axis(self) -> Vec3 {
        self.rotate(Vec3::Z)
    }
}

impl Mul for Rotation {
    type Output = Rotation;
    fn mul(self, o: Rotation) -> Rotation {
        self.compose(o)
    }
}

impl Mul<Vec3> for Rotation {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.rotate(v)
    }
}

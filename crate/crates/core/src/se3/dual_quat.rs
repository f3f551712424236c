use core::ops::Mul;

use super::{Pose, Quat, Rotation};

/// Unit dual quaternion `real + ε·dual` encoding a rigid transform.
///
/// `real` is the rotation quaternion and `dual = ½·t·real` with `t` the
/// translation as a pure quaternion, so `real·dual* + dual·real* = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualQuat {
    pub real: Quat,
    pub dual: Quat,
}

impl DualQuat {
    pub const IDENTITY: DualQuat = DualQuat {
        real: Quat::IDENTITY,
        dual: Quat::ZERO,
    };

    pub fn from_pose(p: &Pose) -> Self {
        let real = p.rotation.quat();
        let dual = (Quat::pure(p.translation) * real).scale(0.5);
        Self { real, dual }
    }

    pub fn to_pose(&self) -> Pose {
        let t = (self.dual * self.real.conj()).scale(2.0).vector();
        Pose::new(Rotation::from_quat_unchecked(self.real), t)
    }

    /// Quaternion conjugate of both parts; the inverse of a unit dual quaternion.
    pub fn conj(&self) -> Self {
        Self {
            real: self.real.conj(),
            dual: self.dual.conj(),
        }
    }

    /// Flip the sign of both parts so the real part has `w >= 0`.
    pub fn canonicalize(&self) -> Self {
        if self.real.w < 0.0 {
            Self {
                real: -self.real,
                dual: -self.dual,
            }
        } else {
            *self
        }
    }

    /// `dot(real, dual)`; zero for unit dual quaternions.
    pub fn orthogonality_residual(&self) -> f64 {
        self.real.dot(self.dual)
    }
}

impl Mul for DualQuat {
    type Output = DualQuat;
    fn mul(self, o: DualQuat) -> DualQuat {
        DualQuat {
            real: self.real * o.real,
            dual: self.real * o.dual + self.dual * o.real,
        }
    }
}

use core::fmt;

use super::{DualQuat, Pose, Rotation, Vec3};
use crate::math;

/// Rotation magnitude below which a displacement is treated as a pure
/// translation.
pub const ANGLE_EPSILON: f64 = 1e-8;

/// Reference direction used to fix the axis sign of a half-turn screw.
const HALF_TURN_REFERENCE: Vec3 = Vec3::new(1.0, 1.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Se3Error {
    /// Interpolation parameter outside `[0, 1]`.
    TauOutOfRange(f64),
}

impl fmt::Display for Se3Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Se3Error::TauOutOfRange(t) => write!(f, "interpolation parameter {t} outside [0, 1]"),
        }
    }
}

impl core::error::Error for Se3Error {}

/// A constant-screw displacement: rotation `angle` about the line
/// `(axis, moment)` combined with translation `translation` along it.
///
/// For rotational screws `pitch = translation / angle`. When
/// `angle < ANGLE_EPSILON` the displacement is a pure translation of
/// `translation` metres along `axis`; the pitch is then `+inf` and the
/// moment is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScrewParams {
    pub axis: Vec3,
    pub moment: Vec3,
    pub pitch: f64,
    pub angle: f64,
    pub translation: f64,
}

impl ScrewParams {
    pub const IDENTITY: ScrewParams = ScrewParams {
        axis: Vec3::Z,
        moment: Vec3::ZERO,
        pitch: f64::INFINITY,
        angle: 0.0,
        translation: 0.0,
    };

    #[inline]
    pub fn is_pure_translation(&self) -> bool {
        self.angle < ANGLE_EPSILON
    }

    /// Point on the axis closest to the origin.
    pub fn axis_point(&self) -> Vec3 {
        self.axis.cross(self.moment)
    }

    /// Spatial twist `(ω, v)` whose exponential is this displacement.
    pub fn twist(&self) -> Twist {
        if self.is_pure_translation() {
            Twist {
                angular: Vec3::ZERO,
                linear: self.axis * self.translation,
            }
        } else {
            Twist {
                angular: self.axis * self.angle,
                linear: self.moment * self.angle + self.axis * self.translation,
            }
        }
    }

    /// Displacement by a fraction `tau` of this screw, without range checks.
    pub fn displacement(&self, tau: f64) -> Pose {
        if self.is_pure_translation() {
            return Pose::from_translation(self.axis * (tau * self.translation));
        }
        let rot = Rotation::from_axis_angle(self.axis, tau * self.angle);
        let p = self.axis_point();
        let t = p - rot.rotate(p) + self.axis * (tau * self.translation);
        Pose::new(rot, t)
    }
}

/// Screw parameters of a pose (the SE(3) logarithm in Plücker form).
///
/// The rotation angle is taken in `[0, π]` via the `w >= 0` dual-quaternion
/// representative. At exactly a half turn the axis sign is chosen so that
/// `dot(axis, (1,1,1)) > 0`, falling back to the first non-zero component
/// being positive.
pub fn log_to_screw(g: &Pose) -> ScrewParams {
    let dq = DualQuat::from_pose(g).canonicalize();
    let q = dq.real;
    let v = q.vector();
    let sin_half = v.norm();
    let angle = 2.0 * math::atan2(sin_half, q.w);
    let t = g.translation;

    if angle < ANGLE_EPSILON {
        let d = t.norm();
        let axis = t.try_normalize(0.0).unwrap_or(Vec3::Z);
        return ScrewParams {
            axis,
            moment: Vec3::ZERO,
            pitch: f64::INFINITY,
            angle: 0.0,
            translation: d,
        };
    }

    let mut axis = v / sin_half;
    if q.w.abs() < 1e-14 {
        axis = half_turn_axis_sign(axis);
    }
    let d = axis.dot(t);
    let t_perp = t - axis * d;
    let cot_half = math::cos(0.5 * angle) / math::sin(0.5 * angle);
    let point = (t_perp + axis.cross(t_perp) * cot_half) * 0.5;
    ScrewParams {
        axis,
        moment: point.cross(axis),
        pitch: d / angle,
        angle,
        translation: d,
    }
}

fn half_turn_axis_sign(axis: Vec3) -> Vec3 {
    let r = axis.dot(HALF_TURN_REFERENCE);
    let positive = if r.abs() > 1e-12 {
        r > 0.0
    } else {
        let first = [axis.x, axis.y, axis.z]
            .into_iter()
            .find(|c| c.abs() > 1e-12)
            .unwrap_or(1.0);
        first > 0.0
    };
    if positive {
        axis
    } else {
        -axis
    }
}

/// Pose reached after a fraction `tau ∈ [0, 1]` of the screw motion.
pub fn screw_to_pose(s: &ScrewParams, tau: f64) -> Result<Pose, Se3Error> {
    check_tau(tau)?;
    Ok(s.displacement(tau))
}

/// Screw linear interpolation `g0 · exp(tau · log(g0⁻¹ g1))`.
pub fn sclerp(g0: &Pose, g1: &Pose, tau: f64) -> Result<Pose, Se3Error> {
    check_tau(tau)?;
    if tau == 0.0 {
        return Ok(*g0);
    }
    if tau == 1.0 {
        return Ok(*g1);
    }
    let s = log_to_screw(&g0.relative_to(g1));
    Ok(g0.compose(&s.displacement(tau)))
}

/// Precomputed interpolant between two poses, for repeated evaluation.
#[derive(Clone, Copy, Debug)]
pub struct ScrewPath {
    pub start: Pose,
    pub end: Pose,
    pub screw: ScrewParams,
}

impl ScrewPath {
    pub fn new(start: Pose, end: Pose) -> Self {
        let screw = log_to_screw(&start.relative_to(&end));
        Self { start, end, screw }
    }

    /// Same as [`sclerp`] for `tau` in `[0, 1]` (not range checked).
    pub fn at(&self, tau: f64) -> Pose {
        if tau <= 0.0 {
            self.start
        } else if tau >= 1.0 {
            self.end
        } else {
            self.start.compose(&self.screw.displacement(tau))
        }
    }
}

fn check_tau(tau: f64) -> Result<(), Se3Error> {
    if (0.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Se3Error::TauOutOfRange(tau))
    }
}

/// A spatial twist: angular velocity `ω` and linear part `v`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Twist {
    pub angular: Vec3,
    pub linear: Vec3,
}

impl Twist {
    pub fn to_array(self) -> [f64; 6] {
        [
            self.angular.x,
            self.angular.y,
            self.angular.z,
            self.linear.x,
            self.linear.y,
            self.linear.z,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Twist {
            angular: Vec3::new(a[0], a[1], a[2]),
            linear: Vec3::new(a[3], a[4], a[5]),
        }
    }

    /// Exponential map to a pose.
    pub fn exp(&self) -> Pose {
        let w = self.angular;
        let angle = w.norm();
        let (b, c) = if angle < 1e-4 {
            let a2 = angle * angle;
            (0.5 - a2 / 24.0, 1.0 / 6.0 - a2 / 120.0)
        } else {
            let a2 = angle * angle;
            (
                (1.0 - math::cos(angle)) / a2,
                (angle - math::sin(angle)) / (a2 * angle),
            )
        };
        let wv = w.cross(self.linear);
        let t = self.linear + wv * b + w.cross(wv) * c;
        Pose::new(Rotation::from_axis_angle(w, angle), t)
    }

    /// Logarithm of a pose as a spatial twist, with the rotation angle in
    /// `[0, π]`.
    pub fn log(g: &Pose) -> Twist {
        let q = g.rotation.canonicalize().quat();
        let v = q.vector();
        let sin_half = v.norm();
        let angle = 2.0 * math::atan2(sin_half, q.w);
        let w = if sin_half > 0.0 {
            v * (angle / sin_half)
        } else {
            Vec3::ZERO
        };
        let coef = if angle < 1e-4 {
            1.0 / 12.0 + angle * angle / 720.0
        } else {
            let half = 0.5 * angle;
            (1.0 - half * math::cos(half) / math::sin(half)) / (angle * angle)
        };
        let t = g.translation;
        let wt = w.cross(t);
        Twist {
            angular: w,
            linear: t - wt * 0.5 + w.cross(wt) * coef,
        }
    }

    /// Adjoint action: the same twist expressed after applying `g`.
    pub fn transformed(&self, g: &Pose) -> Twist {
        let w = g.rotation.rotate(self.angular);
        Twist {
            angular: w,
            linear: g.rotation.rotate(self.linear) + g.translation.cross(w),
        }
    }
}

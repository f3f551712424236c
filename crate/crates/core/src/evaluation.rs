//! Plan evaluation: container collision, the pour-in test, spill onset and
//! tilt metrics.

use alloc::vec::Vec;

use crate::arm::{forward_kinematics, ArmModel, JointConfig, JointPath, PlanError};
use crate::frames::TaskInstance;
use crate::geometry::ContainerGeom;
use crate::math;
use crate::se3::{Pose, Vec3};

/// Default tilt (deg) at which contents start to leave the primary.
pub const DEFAULT_FILL_TILT_DEG: f64 = 60.0;

/// Angular wall samples per container.
pub const WALL_ANGULAR_SAMPLES: usize = 128;

/// Vertical sample spacing on container walls (m).
pub const WALL_VERTICAL_SPACING: f64 = 0.01;

/// Vertical wall rows for a container of height `h`.
pub fn wall_rows(h: f64) -> usize {
    (math::ceil(h / WALL_VERTICAL_SPACING) as usize).max(8)
}

/// Point-sampled collision test between the two containers of a task.
#[derive(Clone, Debug)]
pub struct CollisionChecker {
    primary: ContainerGeom,
    passive: ContainerGeom,
    primary_samples: Vec<Vec3>,
    passive_samples: Vec<Vec3>,
    reach: f64,
}

impl CollisionChecker {
    /// Checker with the default sampling density.
    pub fn new(task: &TaskInstance) -> Self {
        Self::with_density(task, 1, 1)
    }

    /// Checker whose grid refines the default one: `angular_factor` times
    /// the angular samples and `vertical_factor` subdivisions of every row
    /// gap. The refined grid contains the default grid.
    pub fn with_density(task: &TaskInstance, angular_factor: usize, vertical_factor: usize) -> Self {
        let grid = |g: &ContainerGeom| {
            let rows = wall_rows(g.h);
            g.wall_samples(
                WALL_ANGULAR_SAMPLES * angular_factor,
                vertical_factor * (rows - 1) + 1,
            )
        };
        Self {
            primary: task.primary,
            passive: task.passive,
            primary_samples: grid(&task.primary),
            passive_samples: grid(&task.passive),
            reach: task.primary.bounding_radius() + task.passive.bounding_radius(),
        }
    }

    /// True if the containers intersect when the primary base is at
    /// `primary` and the passive base at `passive` (world poses).
    pub fn collides(&self, primary: &Pose, passive: &Pose) -> bool {
        let rel = passive.inverse().compose(primary);
        let c = rel.transform_point(self.primary.center()) - self.passive.center();
        if c.norm() > self.reach {
            return false;
        }
        if self
            .primary_samples
            .iter()
            .any(|p| self.passive.contains_point(rel.transform_point(*p)))
        {
            return true;
        }
        let inv = rel.inverse();
        self.passive_samples
            .iter()
            .any(|p| self.primary.contains_point(inv.transform_point(*p)))
    }
}

/// World pose of the primary base when the arm is at `q`.
pub fn primary_pose(arm: &ArmModel, q: &JointConfig, task: &TaskInstance) -> Result<Pose, PlanError> {
    Ok(forward_kinematics(arm, q)?.compose(&task.grasp))
}

/// First waypoint at which the containers intersect, if any.
pub fn collision_check(
    plan: &JointPath,
    arm: &ArmModel,
    task: &TaskInstance,
) -> Result<Option<usize>, PlanError> {
    let checker = CollisionChecker::new(task);
    for (i, q) in plan.configs.iter().enumerate() {
        if checker.collides(&primary_pose(arm, q, task)?, &task.passive_base) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Angle (deg) between the pose's `+z` axis and world `+z`.
pub fn tilt_angle(pose: &Pose) -> f64 {
    math::to_degrees(math::acos(pose.rotation.z_axis().z))
}

/// True if the vertical projection of `c_r` (world pose of the primary's
/// C-frame) lies strictly inside the passive opening.
pub fn pour_in(c_r: &Pose, task: &TaskInstance) -> bool {
    let p = task.passive_base.inverse().transform_point(c_r.translation);
    task.passive.superellipse_value(p.x, p.y) < 1.0
}

/// First index whose tilt exceeds `fill_tilt_deg`, or `tilts.len()`.
pub fn onset_index(tilts: &[f64], fill_tilt_deg: f64) -> usize {
    tilts
        .iter()
        .position(|t| *t > fill_tilt_deg)
        .unwrap_or(tilts.len())
}

/// Spill onset index `i_0` of a plan.
pub fn compute_i0(
    plan: &JointPath,
    arm: &ArmModel,
    task: &TaskInstance,
    fill_tilt_deg: f64,
) -> Result<usize, PlanError> {
    let tilts = plan
        .configs
        .iter()
        .map(|q| primary_pose(arm, q, task).map(|p| tilt_angle(&p)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(onset_index(&tilts, fill_tilt_deg))
}

/// Tilt (deg) at which liquid filling a fraction `fill` of an upright
/// cylinder of radius `a` and height `h` reaches the lip. Valid for
/// `fill ≥ 0.5`, where the free surface still covers the whole bottom.
pub fn cylinder_spill_tilt_deg(fill: f64, a: f64, h: f64) -> f64 {
    math::to_degrees(math::atan((1.0 - fill) * h / a))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanEvaluation {
    pub collision_free: bool,
    pub first_collision_index: Option<usize>,
    pub pour_success: bool,
    pub i0: usize,
    pub max_tilt_outside_deg: f64,
    pub per_waypoint_tilt: Vec<f64>,
    pub per_waypoint_pour_in: Vec<bool>,
}

/// Evaluate a plan. `g_br_cr` is the primary's C-frame relative to its
/// base; the pour-in test is applied to that frame's origin.
///
/// The pour succeeds when `pour_in` holds at every waypoint from `i_0`
/// through the last waypoint whose tilt exceeds `fill_tilt_deg` (a plan
/// that never passes the threshold succeeds vacuously).
pub fn evaluate(
    plan: &JointPath,
    arm: &ArmModel,
    task: &TaskInstance,
    g_br_cr: &Pose,
    fill_tilt_deg: f64,
) -> Result<PlanEvaluation, PlanError> {
    let checker = CollisionChecker::new(task);
    let mut first_collision_index = None;
    let mut tilts = Vec::with_capacity(plan.len());
    let mut inside = Vec::with_capacity(plan.len());
    for (i, q) in plan.configs.iter().enumerate() {
        let base = primary_pose(arm, q, task)?;
        if first_collision_index.is_none() && checker.collides(&base, &task.passive_base) {
            first_collision_index = Some(i);
        }
        tilts.push(tilt_angle(&base));
        inside.push(pour_in(&base.compose(g_br_cr), task));
    }
    let i0 = onset_index(&tilts, fill_tilt_deg);
    let last_pour = tilts.iter().rposition(|t| *t > fill_tilt_deg);
    let pour_success = match last_pour {
        Some(end) => inside[i0..=end].iter().all(|b| *b),
        None => true,
    };
    let max_tilt_outside_deg = tilts
        .iter()
        .zip(&inside)
        .filter(|(_, inn)| !**inn)
        .map(|(t, _)| *t)
        .fold(0.0, f64::max);
    Ok(PlanEvaluation {
        collision_free: first_collision_index.is_none(),
        first_collision_index,
        pour_success,
        i0,
        max_tilt_outside_deg,
        per_waypoint_tilt: tilts,
        per_waypoint_pour_in: inside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::se3::Rotation;

    #[test]
    fn tilt_examples() {
        assert_eq!(tilt_angle(&Pose::IDENTITY), 0.0);
        let p = Pose::from_rotation(Rotation::rot_x(math::to_radians(30.0)));
        assert!((tilt_angle(&p) - 30.0).abs() < 1e-10);
        let p = Pose::from_rotation(Rotation::rot_y(math::PI));
        assert!((tilt_angle(&p) - 180.0).abs() < 1e-10);
    }

    #[test]
    fn onset() {
        assert_eq!(onset_index(&[0.0, 10.0, 45.0], 90.0), 3);
        let ramp: Vec<f64> = (0..100).map(|i| 120.0 * i as f64 / 99.0).collect();
        let i = onset_index(&ramp, 60.0);
        assert!(ramp[i] > 60.0 && ramp[i - 1] <= 60.0);
    }

    #[test]
    fn rows_have_a_floor() {
        assert_eq!(wall_rows(0.02), 8);
        assert_eq!(wall_rows(0.2), 20);
    }
}

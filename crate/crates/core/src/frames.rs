//! Task instances and motion-transfer frame assignment.
//!
//! Every frame produced here has its `+z` axis along world vertical and its
//! `+x` axis set by the rule of the corresponding assignment; `+y = z × x`.

use alloc::vec::Vec;
use core::fmt;

use crate::arm::{ArmModel, JointPath};
use crate::geometry::{ContainerGeom, GeometryError};
use crate::math;
use crate::se3::{Pose, Rotation, Vec3};
use crate::segmentation::{FrameTag, GuidingPoses};

/// Samples taken along the reconstructed demonstration when searching for
/// the primary object's critical rim point.
pub const DEMO_RECONSTRUCTION_SAMPLES: usize = 200;

/// Tolerance on the base `+z` axis deviating from world vertical.
pub const UPRIGHT_TOL: f64 = 1e-6;

const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum FrameError {
    NotUpright { owner: Owner },
    /// The primary's critical point never projects inside the passive rim.
    NoVerticalIntersection,
    /// Primary and passive base projections coincide.
    DegenerateLine,
    /// Guiding poses are not expressed in the expected frame.
    FrameMismatch { expected: FrameTag, got: FrameTag },
    EmptyTrack,
    Geometry(GeometryError),
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::NotUpright { owner } => write!(f, "{owner} base frame is not upright"),
            FrameError::NoVerticalIntersection => f.write_str(
                "the primary's lowest rim point never lies above the passive opening",
            ),
            FrameError::DegenerateLine => {
                f.write_str("primary and passive bases project to the same point")
            }
            FrameError::FrameMismatch { expected, got } => {
                write!(f, "guiding poses expressed in {got}, expected {expected}")
            }
            FrameError::EmptyTrack => f.write_str("empty pose track"),
            FrameError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FrameError {}

impl From<GeometryError> for FrameError {
    fn from(e: GeometryError) -> Self {
        FrameError::Geometry(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Primary,
    Passive,
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Owner::Primary => "primary",
            Owner::Passive => "passive",
        })
    }
}

/// Primary and passive containers on the table, plus the grasp `g_EBr`
/// (primary base in the end-effector frame).
#[derive(Clone, Debug, PartialEq)]
pub struct TaskInstance {
    pub primary_base: Pose,
    pub primary: ContainerGeom,
    pub passive_base: Pose,
    pub passive: ContainerGeom,
    pub grasp: Pose,
}

fn is_upright(p: &Pose) -> bool {
    (p.rotation.z_axis() - Vec3::Z).norm() <= UPRIGHT_TOL
}

impl TaskInstance {
    pub fn new(
        primary_base: Pose,
        primary: ContainerGeom,
        passive_base: Pose,
        passive: ContainerGeom,
        grasp: Pose,
    ) -> Result<Self, FrameError> {
        if !is_upright(&primary_base) {
            return Err(FrameError::NotUpright {
                owner: Owner::Primary,
            });
        }
        if !is_upright(&passive_base) {
            return Err(FrameError::NotUpright {
                owner: Owner::Passive,
            });
        }
        Ok(Self {
            primary_base,
            primary,
            passive_base,
            passive,
            grasp,
        })
    }

    /// End-effector pose holding the primary at its base pose.
    pub fn grasp_pose(&self) -> Pose {
        self.primary_base.compose(&self.grasp.inverse())
    }
}

/// A recorded demonstration: the task it was performed on and its joints.
#[derive(Clone, Debug, PartialEq)]
pub struct Demonstration {
    pub task: TaskInstance,
    pub joints: JointPath,
}

impl Demonstration {
    /// Check sample count, joint dimension and joint limits.
    pub fn validate(&self, arm: &ArmModel) -> Result<(), crate::arm::PlanError> {
        use crate::arm::PlanError;
        if self.joints.len() < 2 {
            return Err(PlanError::DimensionMismatch {
                expected: 2,
                got: self.joints.len(),
            });
        }
        for (waypoint, q) in self.joints.configs.iter().enumerate() {
            if q.len() != arm.dof() {
                return Err(PlanError::DimensionMismatch {
                    expected: arm.dof(),
                    got: q.len(),
                });
            }
            if let Some(joint) = arm.limit_violation(q) {
                return Err(PlanError::JointLimitViolation {
                    joint,
                    waypoint,
                    value: q.0[joint],
                });
            }
        }
        Ok(())
    }
}

/// A motion-transfer frame `{C}` and the object it is attached to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionTransferFrame {
    pub owner: Owner,
    /// Pose relative to the owner's base frame.
    pub local: Pose,
    /// Pose in the world frame at assignment time.
    pub world: Pose,
}

impl MotionTransferFrame {
    fn new(owner: Owner, base: &Pose, origin: Vec3, x_dir: Vec3) -> Self {
        let local = vertical_frame(origin, x_dir);
        MotionTransferFrame {
            owner,
            local,
            world: base.compose(&local),
        }
    }
}

/// Frame at `origin` with `+z = (0,0,1)` and `+x` along the horizontal part
/// of `x_dir` (all in the owner's upright base frame).
fn vertical_frame(origin: Vec3, x_dir: Vec3) -> Pose {
    let x = x_dir.horizontal().try_normalize(1e-12).unwrap_or(Vec3::X);
    let z = Vec3::Z;
    Pose::new(Rotation::from_axes(x, z.cross(x), z), origin)
}

/// World poses of the end effector along a guiding-pose sequence.
fn world_ee_poses(task: &TaskInstance, guiding: &GuidingPoses) -> Result<Vec<Pose>, FrameError> {
    match guiding.frame() {
        FrameTag::World => Ok(guiding.poses().to_vec()),
        FrameTag::PassiveBase => Ok(guiding
            .poses()
            .iter()
            .map(|g| task.passive_base.compose(g))
            .collect()),
        got => Err(FrameError::FrameMismatch {
            expected: FrameTag::PassiveBase,
            got,
        }),
    }
}

/// Rim-point selection along a primary pose track: the sample with the
/// deepest rim dip below the opening centre wins (earliest on ties), and
/// its lowest rim point is returned as `(sample, t)`.
pub fn critical_rim_point(geom: &ContainerGeom, primary_track: &[Pose]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64, f64)> = None;
    for (i, pose) in primary_track.iter().enumerate() {
        let p = geom.lowest_rim_point(pose);
        let centre = pose.transform_point(Vec3::new(0.0, 0.0, geom.h));
        let dip = p.position.z - centre.z;
        if best.is_none_or(|(_, _, d)| dip < d - TIE_TOL) {
            best = Some((i, p.t, dip));
        }
    }
    best.map(|(i, t, _)| (i, t))
}

/// `{C_r}` for the demonstration's primary object, relative to its base.
///
/// The demonstration is reconstructed by ScLERP through `guiding` and
/// sampled at [`DEMO_RECONSTRUCTION_SAMPLES`] poses. The critical point is
/// the lowest rim point at the sample where the rim dips deepest below the
/// opening centre, i.e. at maximum tilt.
pub fn assign_demo_primary_frame(
    task: &TaskInstance,
    guiding: &GuidingPoses,
) -> Result<MotionTransferFrame, FrameError> {
    let ee = world_ee_poses(task, guiding)?;
    let ee = GuidingPoses::new(ee, guiding.indices().to_vec(), FrameTag::World)
        .map_err(|_| FrameError::EmptyTrack)?;
    let track: Vec<Pose> = ee
        .sample_uniform(DEMO_RECONSTRUCTION_SAMPLES)
        .iter()
        .map(|g| g.compose(&task.grasp))
        .collect();
    let (_, t) = critical_rim_point(&task.primary, &track).ok_or(FrameError::EmptyTrack)?;
    let rim = task.primary.rim_point(t);
    Ok(MotionTransferFrame::new(
        Owner::Primary,
        &task.primary_base,
        rim.position,
        rim.normal,
    ))
}

/// Angle (rad) between a pose's `+z` axis and world vertical.
fn tilt(pose: &Pose) -> f64 {
    math::acos(pose.rotation.z_axis().z)
}

/// `{C_s}` for the demonstration's passive object, relative to its base.
///
/// Track samples are visited from most to least tilted (earliest first on
/// ties); the first whose `{C_r}` origin lies vertically above the passive
/// opening fixes the frame origin. `+x` points towards the projection of
/// the initial `{C_r}`.
pub fn assign_demo_passive_frame(
    task: &TaskInstance,
    c_r_track: &[Pose],
) -> Result<MotionTransferFrame, FrameError> {
    let first = c_r_track.first().ok_or(FrameError::EmptyTrack)?;
    let inv = task.passive_base.inverse();
    let mut order: Vec<usize> = (0..c_r_track.len()).collect();
    let tilts: Vec<f64> = c_r_track.iter().map(tilt).collect();
    order.sort_by(|&i, &j| tilts[j].total_cmp(&tilts[i]).then(i.cmp(&j)));
    let hit = order
        .into_iter()
        .map(|i| inv.transform_point(c_r_track[i].translation))
        .find(|p| task.passive.superellipse_value(p.x, p.y) < 1.0)
        .ok_or(FrameError::NoVerticalIntersection)?;
    let origin = Vec3::new(hit.x, hit.y, task.passive.h);
    let toward = inv.transform_point(first.translation) - origin;
    Ok(MotionTransferFrame::new(
        Owner::Passive,
        &task.passive_base,
        origin,
        toward,
    ))
}

/// Horizontal direction from the primary base towards the passive base,
/// expressed in the primary base frame.
fn toward_passive(task: &TaskInstance) -> Vec3 {
    let d = (task.passive_base.translation - task.primary_base.translation).horizontal();
    task.primary_base.rotation.inverse().rotate(d).horizontal()
}

/// `{C_r}` for a new task instance, relative to the primary base.
///
/// Rims with corners use the corner nearest (horizontally) to the passive
/// base. Circular rims use the point where the line from the primary base
/// to the passive base crosses the rim.
pub fn assign_new_primary_frame(task: &TaskInstance) -> Result<MotionTransferFrame, FrameError> {
    let geom = &task.primary;
    let rim = match geom.corner_points() {
        Ok(corners) => {
            let target = task.passive_base.translation.horizontal();
            let dist = |p: Vec3| {
                (task.primary_base.transform_point(p).horizontal() - target).norm_squared()
            };
            let mut best = corners[0];
            let mut best_d = dist(best.position);
            for c in &corners[1..] {
                let d = dist(c.position);
                if d < best_d - TIE_TOL {
                    best = *c;
                    best_d = d;
                }
            }
            best
        }
        Err(GeometryError::CornerUndefined) => {
            let d = toward_passive(task)
                .try_normalize(1e-12)
                .ok_or(FrameError::DegenerateLine)?;
            let s = 1.0 / math::pow(geom.superellipse_value(d.x, d.y), 1.0 / geom.n);
            let p = Vec3::new(s * d.x, s * d.y, geom.h);
            crate::geometry::RimPoint {
                position: p,
                normal: geom.normal_at(p.x, p.y),
                t: math::wrap_two_pi(math::atan2(d.y, d.x)),
            }
        }
        Err(e) => return Err(e.into()),
    };
    Ok(MotionTransferFrame::new(
        Owner::Primary,
        &task.primary_base,
        rim.position,
        rim.normal,
    ))
}

/// `{C_s}` for a new task instance: the centre of the passive opening with
/// `+x` towards the horizontal projection of `{C_r}` (`c_r_world`). When
/// `{C_r}` is directly overhead the passive base `+x` is used.
pub fn assign_new_passive_frame(task: &TaskInstance, c_r_world: &Pose) -> MotionTransferFrame {
    let origin = Vec3::new(0.0, 0.0, task.passive.h);
    let toward = task.passive_base.inverse().transform_point(c_r_world.translation) - origin;
    MotionTransferFrame::new(Owner::Passive, &task.passive_base, origin, toward)
}

/// Both frames of a task instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameAssignment {
    pub primary: MotionTransferFrame,
    pub passive: MotionTransferFrame,
}

/// Frames for a demonstration given its guiding poses (tagged
/// [`FrameTag::PassiveBase`] or [`FrameTag::World`]).
pub fn assign_demo_frames(
    task: &TaskInstance,
    guiding: &GuidingPoses,
) -> Result<FrameAssignment, FrameError> {
    let primary = assign_demo_primary_frame(task, guiding)?;
    let ee = world_ee_poses(task, guiding)?;
    let ee = GuidingPoses::new(ee, guiding.indices().to_vec(), FrameTag::World)
        .map_err(|_| FrameError::EmptyTrack)?;
    let offset = task.grasp.compose(&primary.local);
    let track: Vec<Pose> = ee
        .sample_uniform(DEMO_RECONSTRUCTION_SAMPLES)
        .iter()
        .map(|g| g.compose(&offset))
        .collect();
    let passive = assign_demo_passive_frame(task, &track)?;
    Ok(FrameAssignment { primary, passive })
}

/// Frames for a new task instance.
pub fn assign_new_frames(task: &TaskInstance) -> Result<FrameAssignment, FrameError> {
    let primary = assign_new_primary_frame(task)?;
    let passive = assign_new_passive_frame(task, &primary.world);
    Ok(FrameAssignment { primary, passive })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(a: f64, b: f64, n: f64, h: f64) -> ContainerGeom {
        ContainerGeom::from_cm(a, b, n, h).unwrap()
    }

    fn task_at(primary: ContainerGeom, pr: Vec3, ps: Vec3) -> TaskInstance {
        TaskInstance::new(
            Pose::from_translation(pr),
            primary,
            Pose::from_translation(ps),
            cm(8.0, 8.0, 2.0, 5.5),
            Pose::IDENTITY,
        )
        .unwrap()
    }

    #[test]
    fn rejects_tilted_base() {
        let tilted = Pose::from_rotation(Rotation::rot_x(0.1));
        let g = cm(1.0, 1.0, 2.0, 1.0);
        let r = TaskInstance::new(tilted, g, Pose::IDENTITY, g, Pose::IDENTITY);
        assert_eq!(
            r,
            Err(FrameError::NotUpright {
                owner: Owner::Primary
            })
        );
    }

    #[test]
    fn circle_line_intersection() {
        let t = task_at(cm(3.25, 3.25, 2.0, 10.0), Vec3::ZERO, Vec3::new(0.5, 0.0, 0.0));
        let f = assign_new_primary_frame(&t).unwrap();
        assert!((f.local.translation - Vec3::new(0.0325, 0.0, 0.1)).max_abs() < 1e-12);
        assert!((f.local.rotation.x_axis() - Vec3::X).max_abs() < 1e-12);
        assert!((f.local.rotation.z_axis() - Vec3::Z).max_abs() < 1e-12);
    }

    #[test]
    fn circle_degenerate_line() {
        let t = task_at(cm(3.0, 3.0, 2.0, 10.0), Vec3::ZERO, Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(assign_new_primary_frame(&t), Err(FrameError::DegenerateLine));
    }

    #[test]
    fn new_passive_frame_direction() {
        let t = task_at(cm(3.0, 3.0, 2.0, 10.0), Vec3::new(0.2, 0.0, 0.0), Vec3::ZERO);
        let f = assign_new_passive_frame(&t, &Pose::from_translation(Vec3::new(0.2, 0.0, 0.12)));
        assert!((f.local.translation - Vec3::new(0.0, 0.0, 0.055)).max_abs() < 1e-15);
        assert!((f.local.rotation.x_axis() - Vec3::X).max_abs() < 1e-15);
        let f = assign_new_passive_frame(&t, &Pose::from_translation(Vec3::new(0.1, 0.1, 0.3)));
        let r = 1.0 / math::sqrt(2.0);
        assert!((f.local.rotation.x_axis() - Vec3::new(r, r, 0.0)).max_abs() < 1e-12);
        let f = assign_new_passive_frame(&t, &Pose::from_translation(Vec3::new(0.0, 0.0, 0.3)));
        assert!((f.local.rotation.x_axis() - Vec3::X).max_abs() < 1e-15);
    }

    #[test]
    fn demo_passive_projection() {
        let t = task_at(cm(3.0, 3.0, 2.0, 10.0), Vec3::new(0.3, 0.0, 0.0), Vec3::ZERO);
        let track = [
            Pose::from_translation(Vec3::new(0.3, 0.0, 0.1)),
            Pose::new(Rotation::rot_y(1.5), Vec3::new(0.02, 0.01, 0.2)),
        ];
        let f = assign_demo_passive_frame(&t, &track).unwrap();
        assert!((f.local.translation - Vec3::new(0.02, 0.01, 0.055)).max_abs() < 1e-15);
        let far = [Pose::from_translation(Vec3::new(0.3, 0.0, 0.1))];
        assert_eq!(
            assign_demo_passive_frame(&t, &far),
            Err(FrameError::NoVerticalIntersection)
        );
    }
}

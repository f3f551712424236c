//! Serial-arm kinematics in product-of-exponentials form and the ScLERP +
//! damped least-squares joint-space planner.
//!
//! Joint screws are revolute and given as Plücker lines `(direction, moment)`
//! in the base frame at the zero configuration. Forward kinematics is
//! `g(θ) = exp(ξ₁θ₁) ··· exp(ξₗθₗ) · g_home`, and the Jacobian is the
//! spatial one: column `i` is `ξᵢ` transported by the first `i-1` joint
//! exponentials.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::SquareMatrix;
use crate::math;
use crate::se3::{pose_distance, Pose, Rotation, ScrewPath, Twist, Vec3};

/// A revolute joint axis as a Plücker line in the base frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointAxis {
    pub direction: Vec3,
    pub moment: Vec3,
}

impl JointAxis {
    /// Axis along `direction` passing through `point`.
    pub fn through(point: Vec3, direction: Vec3) -> Self {
        let d = direction.try_normalize(0.0).unwrap_or(Vec3::Z);
        Self {
            direction: d,
            moment: point.cross(d),
        }
    }

    pub fn point(&self) -> Vec3 {
        self.direction.cross(self.moment)
    }

    pub fn twist(&self) -> Twist {
        Twist {
            angular: self.direction,
            linear: self.moment,
        }
    }

    /// `exp(ξ θ)` for this revolute joint.
    pub fn exp(&self, angle: f64) -> Pose {
        let rot = Rotation::from_axis_angle(self.direction, angle);
        let p = self.point();
        Pose::new(rot, p - rot.rotate(p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ArmError {
    NoJoints,
    LengthMismatch { axes: usize, limits: usize },
    NonUnitAxis { joint: usize },
    InvalidMoment { joint: usize },
    InvalidLimits { joint: usize },
}

impl fmt::Display for ArmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArmError::NoJoints => write!(f, "arm has no joints"),
            ArmError::LengthMismatch { axes, limits } => {
                write!(f, "{axes} joint axes but {limits} joint limits")
            }
            ArmError::NonUnitAxis { joint } => {
                write!(f, "joint {joint}: axis direction is not a unit vector")
            }
            ArmError::InvalidMoment { joint } => {
                write!(f, "joint {joint}: moment is not orthogonal to the direction")
            }
            ArmError::InvalidLimits { joint } => {
                write!(f, "joint {joint}: lower limit must be below upper limit")
            }
        }
    }
}

impl core::error::Error for ArmError {}

/// Kinematic description of an `l`-joint serial arm.
#[derive(Clone, Debug, PartialEq)]
pub struct ArmModel {
    axes: Vec<JointAxis>,
    home: Pose,
    limits: Vec<[f64; 2]>,
}

impl ArmModel {
    pub fn new(axes: Vec<JointAxis>, home: Pose, limits: Vec<[f64; 2]>) -> Result<Self, ArmError> {
        if axes.is_empty() {
            return Err(ArmError::NoJoints);
        }
        if axes.len() != limits.len() {
            return Err(ArmError::LengthMismatch {
                axes: axes.len(),
                limits: limits.len(),
            });
        }
        for (joint, a) in axes.iter().enumerate() {
            if (a.direction.norm() - 1.0).abs() > 1e-12 {
                return Err(ArmError::NonUnitAxis { joint });
            }
            if a.direction.dot(a.moment).abs() > 1e-10 {
                return Err(ArmError::InvalidMoment { joint });
            }
        }
        for (joint, l) in limits.iter().enumerate() {
            if !(l[0] < l[1]) {
                return Err(ArmError::InvalidLimits { joint });
            }
        }
        Ok(Self { axes, home, limits })
    }

    /// A redundant 7-joint arm with alternating yaw/pitch axes, base at the
    /// world origin and the flange pointing up at zero configuration.
    pub fn bundled_seven_dof() -> Self {
        const BASE: f64 = 0.34;
        const UPPER: f64 = 0.45;
        const FORE: f64 = 0.45;
        const WRIST: f64 = 0.15;
        let z1 = BASE;
        let z2 = BASE + UPPER;
        let z3 = BASE + UPPER + FORE;
        let axes = vec![
            JointAxis::through(Vec3::ZERO, Vec3::Z),
            JointAxis::through(Vec3::new(0.0, 0.0, z1), Vec3::Y),
            JointAxis::through(Vec3::ZERO, Vec3::Z),
            JointAxis::through(Vec3::new(0.0, 0.0, z2), -Vec3::Y),
            JointAxis::through(Vec3::ZERO, Vec3::Z),
            JointAxis::through(Vec3::new(0.0, 0.0, z3), Vec3::Y),
            JointAxis::through(Vec3::ZERO, Vec3::Z),
        ];
        let home = Pose::from_translation(Vec3::new(0.0, 0.0, z3 + WRIST));
        let limits = vec![
            [-2.96, 2.96],
            [-2.5, 2.5],
            [-2.96, 2.96],
            [-2.5, 2.5],
            [-2.96, 2.96],
            [-2.5, 2.5],
            [-3.05, 3.05],
        ];
        Self::new(axes, home, limits).expect("bundled arm is well formed")
    }

    #[inline]
    pub fn dof(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[JointAxis] {
        &self.axes
    }

    pub fn home(&self) -> &Pose {
        &self.home
    }

    pub fn limits(&self) -> &[[f64; 2]] {
        &self.limits
    }

    /// First joint outside its limits, if any.
    pub fn limit_violation(&self, q: &JointConfig) -> Option<usize> {
        q.0.iter()
            .zip(&self.limits)
            .position(|(v, l)| *v < l[0] || *v > l[1])
    }

    fn check_len(&self, q: &JointConfig) -> Result<(), PlanError> {
        if q.0.len() != self.dof() {
            return Err(PlanError::DimensionMismatch {
                expected: self.dof(),
                got: q.0.len(),
            });
        }
        Ok(())
    }
}

/// Joint angles in radians.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JointConfig(pub Vec<f64>);

impl JointConfig {
    pub fn zeros(n: usize) -> Self {
        JointConfig(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest absolute per-joint difference.
    pub fn max_abs_diff(&self, other: &JointConfig) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for JointConfig {
    fn from(v: Vec<f64>) -> Self {
        JointConfig(v)
    }
}

/// An ordered sequence of joint configurations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JointPath {
    pub configs: Vec<JointConfig>,
}

impl JointPath {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn last(&self) -> Option<&JointConfig> {
        self.configs.last()
    }
}

/// Spatial Jacobian, one twist column per joint.
#[derive(Clone, Debug, PartialEq)]
pub struct Jacobian {
    pub columns: Vec<Twist>,
}

impl Jacobian {
    /// Entry `(row, col)` with rows ordered `(ωx, ωy, ωz, vx, vy, vz)`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let c = &self.columns[col];
        match row {
            0 => c.angular.x,
            1 => c.angular.y,
            2 => c.angular.z,
            3 => c.linear.x,
            4 => c.linear.y,
            5 => c.linear.z,
            _ => panic!("Jacobian row {row} out of range"),
        }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }
}

pub fn forward_kinematics(arm: &ArmModel, q: &JointConfig) -> Result<Pose, PlanError> {
    arm.check_len(q)?;
    Ok(fk_unchecked(arm, q))
}

fn fk_unchecked(arm: &ArmModel, q: &JointConfig) -> Pose {
    let mut g = Pose::IDENTITY;
    for (axis, angle) in arm.axes.iter().zip(&q.0) {
        g = g.compose(&axis.exp(*angle));
    }
    g.compose(&arm.home)
}

pub fn jacobian(arm: &ArmModel, q: &JointConfig) -> Result<Jacobian, PlanError> {
    arm.check_len(q)?;
    Ok(fk_and_jacobian(arm, q).1)
}

fn fk_and_jacobian(arm: &ArmModel, q: &JointConfig) -> (Pose, Jacobian) {
    let mut g = Pose::IDENTITY;
    let mut columns = Vec::with_capacity(arm.dof());
    for (axis, angle) in arm.axes.iter().zip(&q.0) {
        columns.push(axis.twist().transformed(&g));
        g = g.compose(&axis.exp(*angle));
    }
    (g.compose(&arm.home), Jacobian { columns })
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlanError {
    DimensionMismatch {
        expected: usize,
        got: usize,
    },
    InvalidStep(f64),
    JointLimitViolation {
        joint: usize,
        waypoint: usize,
        value: f64,
    },
    /// Damped updates kept increasing the tracking error.
    SingularityStall {
        waypoint: usize,
        error: f64,
    },
    NotConverged {
        waypoint: usize,
        error: f64,
    },
    /// Failure while planning towards guiding pose `segment`.
    InSegment {
        segment: usize,
        source: Box<PlanError>,
    },
}

impl PlanError {
    /// The innermost error, with segment annotations removed.
    pub fn root(&self) -> &PlanError {
        match self {
            PlanError::InSegment { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_joint_limit(&self) -> bool {
        matches!(self.root(), PlanError::JointLimitViolation { .. })
    }
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} joint values, got {got}")
            }
            PlanError::InvalidStep(s) => write!(f, "interpolation step {s} outside (0, 0.05]"),
            PlanError::JointLimitViolation {
                joint,
                waypoint,
                value,
            } => write!(
                f,
                "joint {joint} at waypoint {waypoint} leaves its limits ({value:.4} rad)"
            ),
            PlanError::SingularityStall { waypoint, error } => write!(
                f,
                "tracking stalled near a singularity at waypoint {waypoint} (error {error:.3e})"
            ),
            PlanError::NotConverged { waypoint, error } => write!(
                f,
                "tracking did not converge at waypoint {waypoint} (error {error:.3e})"
            ),
            PlanError::InSegment { segment, source } => {
                write!(f, "segment {segment}: {source}")
            }
        }
    }
}

impl core::error::Error for PlanError {}

/// Tolerances and damping for the resolved-rate planner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerConfig {
    /// Interpolation parameter increment between waypoints.
    pub step: f64,
    /// Allowed pose distance from the ScLERP reference at each waypoint.
    pub track_tol: f64,
    /// Allowed pose distance from the goal at the last waypoint.
    pub final_tol: f64,
    /// Correction iterations per waypoint.
    pub max_iters: usize,
    /// Corrections stop once the error drops below this.
    pub inner_tol: f64,
    /// Damping factor applied away from singularities.
    pub damping: f64,
    /// Smallest singular value below which extra damping ramps in.
    pub singular_threshold: f64,
    /// Damping factor reached at an exact singularity.
    pub max_damping: f64,
    /// Consecutive non-improving updates reported as a stall.
    pub stall_window: usize,
    /// Largest joint change (rad) of a single correction; larger updates
    /// are scaled down.
    pub max_joint_step: f64,
    /// Gain of the null-space pull towards mid-range joint angles, applied
    /// once per waypoint.
    pub centering_gain: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            step: 0.01,
            track_tol: 1e-4,
            final_tol: 1e-6,
            max_iters: 50,
            inner_tol: 1e-8,
            damping: 1e-4,
            singular_threshold: 0.02,
            max_damping: 0.05,
            stall_window: 8,
            max_joint_step: 0.2,
            centering_gain: 0.02,
        }
    }
}

impl PlannerConfig {
    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// Squared damping for a given smallest singular value.
    pub fn damping_squared(&self, sigma_min: f64) -> f64 {
        let base = self.damping * self.damping;
        if sigma_min >= self.singular_threshold {
            base
        } else {
            let r = sigma_min / self.singular_threshold;
            base + self.max_damping * self.max_damping * (1.0 - r * r)
        }
    }
}

/// One damped least-squares step `Δθ = Jᵀ (J Jᵀ + λ² I)⁻¹ ξ`.
///
/// For arms with fewer than six joints the equivalent joint-space form
/// `(JᵀJ + λ² I) Δθ = Jᵀ ξ` is solved instead.
pub fn damped_step(j: &Jacobian, xi: &Twist, config: &PlannerConfig) -> Vec<f64> {
    let n = j.cols();
    let e = xi.to_array();
    if n >= 6 {
        let mut g = SquareMatrix::zeros(6);
        for r in 0..6 {
            for c in r..6 {
                let v: f64 = (0..n).map(|k| j.get(r, k) * j.get(c, k)).sum();
                g.set(r, c, v);
                g.set(c, r, v);
            }
        }
        let sigma_min = math::sqrt(g.symmetric_eigenvalues()[0].max(0.0));
        g.add_diagonal(config.damping_squared(sigma_min));
        let y = g.cholesky_solve(&e).unwrap_or_else(|| vec![0.0; 6]);
        (0..n)
            .map(|k| (0..6).map(|r| j.get(r, k) * y[r]).sum())
            .collect()
    } else {
        let mut g = SquareMatrix::zeros(n);
        for a in 0..n {
            for b in a..n {
                let v: f64 = (0..6).map(|r| j.get(r, a) * j.get(r, b)).sum();
                g.set(a, b, v);
                g.set(b, a, v);
            }
        }
        let sigma_min = math::sqrt(g.symmetric_eigenvalues()[0].max(0.0));
        g.add_diagonal(config.damping_squared(sigma_min));
        let rhs: Vec<f64> = (0..n)
            .map(|k| (0..6).map(|r| j.get(r, k) * e[r]).sum())
            .collect();
        g.cholesky_solve(&rhs).unwrap_or_else(|| vec![0.0; n])
    }
}

/// Result of a planning call.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlannedPath {
    pub path: JointPath,
    /// ScLERP reference pose for each waypoint.
    pub references: Vec<Pose>,
    /// Pose distance between the achieved and reference pose per waypoint.
    pub tracking_errors: Vec<f64>,
    /// Waypoint index at which each goal / guiding pose was reached.
    pub arrivals: Vec<usize>,
}

impl PlannedPath {
    pub fn final_config(&self) -> Option<&JointConfig> {
        self.path.last()
    }

    fn append(&mut self, mut other: PlannedPath) {
        let offset = self.path.len();
        let skip = usize::from(offset > 0);
        self.path.configs.extend(other.path.configs.drain(skip..));
        self.references.extend(other.references.drain(skip..));
        self.tracking_errors.extend(other.tracking_errors.drain(skip..));
        self.arrivals
            .extend(other.arrivals.iter().map(|a| a + offset - skip));
    }
}

/// Null-space component of a pull towards the middle of each joint range.
fn centering_step(arm: &ArmModel, q: &JointConfig, j: &Jacobian, config: &PlannerConfig) -> Vec<f64> {
    let z: Vec<f64> = q
        .0
        .iter()
        .zip(&arm.limits)
        .map(|(v, l)| {
            let mid = 0.5 * (l[0] + l[1]);
            let half = 0.5 * (l[1] - l[0]);
            config.centering_gain * (mid - v) / half
        })
        .collect();
    let mut jz = [0.0; 6];
    for (r, out) in jz.iter_mut().enumerate() {
        *out = (0..j.cols()).map(|k| j.get(r, k) * z[k]).sum();
    }
    let back = damped_step(j, &Twist::from_array(jz), config);
    z.iter().zip(&back).map(|(a, b)| a - b).collect()
}

/// Move `q` towards `target` with damped least-squares corrections.
/// Returns the final pose error.
///
/// Corrections stop below `config.inner_tol`. Once the error is within
/// `accept`, an update that fails to reduce it also ends the loop; above
/// `accept`, `config.stall_window` such updates in a row are a stall.
fn converge(
    arm: &ArmModel,
    q: &mut JointConfig,
    target: &Pose,
    config: &PlannerConfig,
    accept: f64,
    waypoint: usize,
) -> Result<f64, PlanError> {
    let (mut pose, mut jac) = fk_and_jacobian(arm, q);
    let mut err = pose_distance(&pose, target);
    let mut worse = 0usize;
    for iter in 0..config.max_iters {
        if err <= config.inner_tol {
            break;
        }
        let xi = Twist::log(&target.compose(&pose.inverse()));
        let mut dq = damped_step(&jac, &xi, config);
        if iter == 0 && config.centering_gain > 0.0 {
            for (d, c) in dq.iter_mut().zip(centering_step(arm, q, &jac, config)) {
                *d += c;
            }
        }
        let biggest = dq.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if biggest > config.max_joint_step {
            let k = config.max_joint_step / biggest;
            dq.iter_mut().for_each(|d| *d *= k);
        }
        let prev = q.clone();
        for (v, d) in q.0.iter_mut().zip(&dq) {
            *v += d;
        }
        let (new_pose, new_jac) = fk_and_jacobian(arm, q);
        let new_err = pose_distance(&new_pose, target);
        if new_err >= err {
            if err <= accept {
                *q = prev;
                break;
            }
            worse += 1;
            if worse >= config.stall_window {
                return Err(PlanError::SingularityStall {
                    waypoint,
                    error: new_err,
                });
            }
        } else {
            worse = 0;
        }
        (pose, jac, err) = (new_pose, new_jac, new_err);
    }
    Ok(err)
}

/// Plan a joint path whose end-effector follows the ScLERP interpolant from
/// `FK(start)` to `goal` at parameter increments of `config.step`.
pub fn plan_between(
    arm: &ArmModel,
    start: &JointConfig,
    goal: &Pose,
    config: &PlannerConfig,
) -> Result<PlannedPath, PlanError> {
    arm.check_len(start)?;
    if !(config.step > 0.0 && config.step <= 0.05) {
        return Err(PlanError::InvalidStep(config.step));
    }
    let g_start = fk_unchecked(arm, start);
    let mut out = PlannedPath {
        path: JointPath {
            configs: vec![start.clone()],
        },
        references: vec![g_start],
        tracking_errors: vec![0.0],
        arrivals: Vec::new(),
    };
    if pose_distance(&g_start, goal) <= config.final_tol {
        out.tracking_errors[0] = pose_distance(&g_start, goal);
        out.arrivals.push(0);
        return Ok(out);
    }
    let interp = ScrewPath::new(g_start, *goal);
    let count = math::ceil(1.0 / config.step - 1e-9).max(1.0) as usize;
    let mut q = start.clone();
    for i in 1..=count {
        let tau = i as f64 / count as f64;
        let target = interp.at(tau);
        let tol = if i == count {
            config.final_tol
        } else {
            config.track_tol
        };
        let err = converge(arm, &mut q, &target, config, tol, i)?;
        if err > tol {
            return Err(PlanError::NotConverged { waypoint: i, error: err });
        }
        if let Some(joint) = arm.limit_violation(&q) {
            return Err(PlanError::JointLimitViolation {
                joint,
                waypoint: i,
                value: q.0[joint],
            });
        }
        out.path.configs.push(q.clone());
        out.references.push(target);
        out.tracking_errors.push(err);
    }
    out.arrivals.push(count);
    Ok(out)
}

/// Chain [`plan_between`] through each guiding pose in order.
pub fn plan_through_guiding_poses(
    arm: &ArmModel,
    start: &JointConfig,
    guiding: &[Pose],
    config: &PlannerConfig,
) -> Result<PlannedPath, PlanError> {
    arm.check_len(start)?;
    let mut out = PlannedPath::default();
    let mut q = start.clone();
    for (segment, goal) in guiding.iter().enumerate() {
        let seg = plan_between(arm, &q, goal, config).map_err(|e| PlanError::InSegment {
            segment,
            source: Box::new(e),
        })?;
        q = seg.final_config().cloned().unwrap_or_else(|| q.clone());
        out.append(seg);
    }
    if out.path.is_empty() {
        out.path.configs.push(start.clone());
        out.references.push(fk_unchecked(arm, start));
        out.tracking_errors.push(0.0);
    }
    Ok(out)
}

/// Point-to-point inverse kinematics from `seed` by damped least squares,
/// without following a reference path. Joint limits are checked on the result.
pub fn solve_ik(
    arm: &ArmModel,
    seed: &JointConfig,
    target: &Pose,
    config: &PlannerConfig,
) -> Result<JointConfig, PlanError> {
    arm.check_len(seed)?;
    let mut q = seed.clone();
    let relaxed = PlannerConfig {
        max_iters: config.max_iters * 10,
        stall_window: config.stall_window * 4,
        ..*config
    };
    // Large corrections are broken into bounded sub-steps for stability.
    let mut err = pose_distance(&fk_unchecked(arm, &q), target);
    let mut rounds = 0;
    while err > config.final_tol && rounds < 200 {
        let cur = fk_unchecked(arm, &q);
        let path = ScrewPath::new(cur, *target);
        let frac = (0.2 / err).min(1.0);
        let goal = path.at(frac);
        match converge(arm, &mut q, &goal, &relaxed, 0.0, 0) {
            Ok(_) | Err(PlanError::SingularityStall { .. }) => {}
            Err(e) => return Err(e),
        }
        err = pose_distance(&fk_unchecked(arm, &q), target);
        rounds += 1;
    }
    if err > config.final_tol {
        return Err(PlanError::NotConverged { waypoint: 0, error: err });
    }
    if let Some(joint) = arm.limit_violation(&q) {
        return Err(PlanError::JointLimitViolation {
            joint,
            waypoint: 0,
            value: q.0[joint],
        });
    }
    Ok(q)
}

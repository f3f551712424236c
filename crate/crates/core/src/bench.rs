//! Monte-Carlo comparison of C-frame transfer against base-frame transfer.
//!
//! Instances are sampled per category cell (primary girth/height × passive
//! girth/height), both pipelines are planned from the same start
//! configuration, and the evaluations are aggregated per cell.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arm::{
    forward_kinematics, plan_through_guiding_poses, solve_ik, ArmModel, JointConfig,
    PlanError, PlannedPath, PlannerConfig,
};
use crate::evaluation::{evaluate, PlanEvaluation, DEFAULT_FILL_TILT_DEG};
use crate::frames::{assign_demo_frames, assign_new_frames, Demonstration, FrameAssignment, TaskInstance};
use crate::geometry::ContainerGeom;
use crate::math::{self, FRAC_PI_2, TAU};
use crate::se3::{Pose, Rotation, Vec3};
use crate::segmentation::{segment_demonstration, GuidingPoses, DEFAULT_SEG_TOL};
use crate::transfer::{baseline_transfer, cframe_transfer, TransferResult};

/// Superellipse exponents cycled through by the sampler.
pub const N_VALUES: [f64; 10] = [0.5, 0.7, 1.0, 1.5, 2.0, 2.5, 4.0, 5.0, 7.0, 8.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Girth {
    Thin,
    Fat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Height {
    Short,
    Tall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Primary,
    Passive,
}

/// One object category: girth and height class for a role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CategorySpec {
    pub role: Role,
    pub girth: Girth,
    pub height: Height,
}

impl CategorySpec {
    /// Thin/Fat threshold on `a, b` and Short/Tall threshold on `h` (m).
    pub fn thresholds(role: Role) -> (f64, f64) {
        match role {
            Role::Passive => (0.08, 0.055),
            Role::Primary => (0.0325, 0.10),
        }
    }

    /// Sampling range `[lo, hi)` for `a, b`.
    pub fn girth_range(&self, bounds: &SampleBounds) -> (f64, f64) {
        let (t, _) = Self::thresholds(self.role);
        let (lo, hi) = match self.role {
            Role::Passive => (bounds.passive_min_radius, bounds.max_radius),
            Role::Primary => (bounds.primary_min_radius, bounds.max_radius),
        };
        match self.girth {
            Girth::Thin => (lo, t.min(hi)),
            Girth::Fat => (t, hi),
        }
    }

    /// Sampling range `[lo, hi)` for `h`.
    pub fn height_range(&self, bounds: &SampleBounds) -> (f64, f64) {
        let (_, t) = Self::thresholds(self.role);
        let lo = match self.role {
            Role::Passive => bounds.passive_min_height,
            Role::Primary => bounds.primary_min_height,
        };
        match self.height {
            Height::Short => (lo, t.min(bounds.max_height)),
            Height::Tall => (t, bounds.max_height),
        }
    }

    /// Category of a container in this role.
    pub fn classify(role: Role, g: &ContainerGeom) -> Self {
        let (tg, th) = Self::thresholds(role);
        CategorySpec {
            role,
            girth: if g.a < tg && g.b < tg { Girth::Thin } else { Girth::Fat },
            height: if g.h < th { Height::Short } else { Height::Tall },
        }
    }
}

/// A cell of the 4×4 grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub primary: CategorySpec,
    pub passive: CategorySpec,
}

impl Cell {
    /// All 16 cells in a fixed order.
    pub fn all() -> Vec<Cell> {
        let mut out = Vec::with_capacity(16);
        for pg in [Girth::Thin, Girth::Fat] {
            for ph in [Height::Short, Height::Tall] {
                for sg in [Girth::Thin, Girth::Fat] {
                    for sh in [Height::Short, Height::Tall] {
                        out.push(Cell {
                            primary: CategorySpec {
                                role: Role::Primary,
                                girth: pg,
                                height: ph,
                            },
                            passive: CategorySpec {
                                role: Role::Passive,
                                girth: sg,
                                height: sh,
                            },
                        });
                    }
                }
            }
        }
        out
    }

    /// Position of this cell in [`Cell::all`].
    pub fn index(&self) -> usize {
        let bit = |g: Girth| usize::from(g == Girth::Fat);
        let hb = |h: Height| usize::from(h == Height::Tall);
        bit(self.primary.girth) * 8 + hb(self.primary.height) * 4 + bit(self.passive.girth) * 2 + hb(self.passive.height)
    }

    /// Identifier such as `primary-thin-tall/passive-fat-short`.
    pub fn id(&self) -> String {
        let g = |g: Girth| if g == Girth::Thin { "thin" } else { "fat" };
        let h = |h: Height| if h == Height::Short { "short" } else { "tall" };
        format!(
            "primary-{}-{}/passive-{}-{}",
            g(self.primary.girth),
            h(self.primary.height),
            g(self.passive.girth),
            h(self.passive.height)
        )
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Lower bounds (not given by the category thresholds) and upper bounds of
/// sampled dimensions, in metres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleBounds {
    pub primary_min_radius: f64,
    pub passive_min_radius: f64,
    pub primary_min_height: f64,
    pub passive_min_height: f64,
    pub max_radius: f64,
    pub max_height: f64,
}

impl Default for SampleBounds {
    fn default() -> Self {
        Self {
            primary_min_radius: 0.015,
            passive_min_radius: 0.02,
            primary_min_height: 0.05,
            passive_min_height: 0.03,
            max_radius: 0.12,
            max_height: 0.20,
        }
    }
}

/// Axis-aligned table area where containers are placed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRegion {
    pub center: [f64; 2],
    pub size: [f64; 2],
    /// Height of the table surface in the world frame.
    pub z: f64,
}

impl Default for TableRegion {
    fn default() -> Self {
        Self {
            center: [0.55, 0.0],
            size: [0.4, 0.6],
            z: -0.2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchConfig {
    pub seg_tol: f64,
    pub fill_tilt_deg: f64,
    pub planner: PlannerConfig,
    pub bounds: SampleBounds,
    pub table: TableRegion,
    /// Minimum gap between footprints (m).
    pub footprint_gap: f64,
    /// Largest deviation of the primary's yaw from [`approach_yaw`] (rad).
    pub yaw_jitter: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seg_tol: DEFAULT_SEG_TOL,
            fill_tilt_deg: DEFAULT_FILL_TILT_DEG,
            planner: PlannerConfig::default(),
            bounds: SampleBounds::default(),
            table: TableRegion::default(),
            footprint_gap: 0.01,
            yaw_jitter: math::to_radians(10.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BenchError {
    /// Instance counts must split evenly across the exponent set.
    CountNotMultipleOfTen(usize),
    InfeasibleBounds(String),
    Demo(String),
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::CountNotMultipleOfTen(c) => {
                write!(f, "instance count {c} is not a multiple of 10")
            }
            BenchError::InfeasibleBounds(m) => write!(f, "infeasible sampling bounds: {m}"),
            BenchError::Demo(m) => write!(f, "demonstration: {m}"),
        }
    }
}

impl core::error::Error for BenchError {}

/// Grasp holding a container of height `h` from the side at half height:
/// the end-effector `+z` is horizontal along the container's `+x` and the
/// end-effector `+x` points down.
pub fn side_grasp(h: f64) -> Pose {
    Pose::new(Rotation::rot_y(-FRAC_PI_2), Vec3::new(0.5 * h, 0.0, 0.0))
}

/// Radius of a circle enclosing the footprint for any exponent.
fn footprint_radius(g: &ContainerGeom) -> f64 {
    math::hypot(g.a, g.b)
}

/// Upright base pose at `(x, y)` on the table with the given yaw.
pub fn table_pose(table: &TableRegion, x: f64, y: f64, yaw: f64) -> Pose {
    Pose::new(Rotation::rot_z(yaw), Vec3::new(x, y, table.z))
}

fn bearing(x: f64, y: f64) -> f64 {
    math::atan2(y, x)
}

/// Yaw of a primary at `primary` that will pour towards `passive`: its `+x`
/// (the grasp approach) is horizontal, perpendicular to the pouring
/// direction and pointing away from the arm base, so tilting towards the
/// passive is a roll about the approach axis.
pub fn approach_yaw(primary: [f64; 2], passive: [f64; 2]) -> f64 {
    let u = Vec3::new(passive[0] - primary[0], passive[1] - primary[1], 0.0);
    let mut v = Vec3::Z.cross(u);
    if v.dot(Vec3::new(primary[0], primary[1], 0.0)) < 0.0 {
        v = -v;
    }
    bearing(v.x, v.y)
}

/// Deterministic instances for one cell.
pub fn sample_instances(
    cell: &Cell,
    count: usize,
    seed: u64,
    config: &BenchConfig,
) -> Result<Vec<TaskInstance>, BenchError> {
    if count % N_VALUES.len() != 0 {
        return Err(BenchError::CountNotMultipleOfTen(count));
    }
    let b = &config.bounds;
    let ranges = [
        cell.primary.girth_range(b),
        cell.primary.height_range(b),
        cell.passive.girth_range(b),
        cell.passive.height_range(b),
    ];
    if let Some((lo, hi)) = ranges.iter().find(|(lo, hi)| !(0.0 < *lo && lo < hi)) {
        return Err(BenchError::InfeasibleBounds(format!("range [{lo}, {hi}) in cell {cell}")));
    }
    let table = &config.table;
    let half = [0.5 * table.size[0], 0.5 * table.size[1]];
    let needed = 2.0 * core::f64::consts::SQRT_2 * b.max_radius + config.footprint_gap;
    if needed > table.size[0].max(table.size[1]) {
        return Err(BenchError::InfeasibleBounds(format!(
            "table {:?} too small for two containers of radius {}",
            table.size, b.max_radius
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell.index() as u64);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n = N_VALUES[i % N_VALUES.len()];
        let mut dims = [0.0; 6];
        for (k, (lo, hi)) in [ranges[0], ranges[0], ranges[1], ranges[2], ranges[2], ranges[3]]
            .into_iter()
            .enumerate()
        {
            dims[k] = rng.gen_range(lo..hi);
        }
        let primary = ContainerGeom::new(dims[0], dims[1], n, dims[2])
            .map_err(|e| BenchError::InfeasibleBounds(format!("{e}")))?;
        let passive = ContainerGeom::new(dims[3], dims[4], n, dims[5])
            .map_err(|e| BenchError::InfeasibleBounds(format!("{e}")))?;
        let (rr, rs) = (footprint_radius(&primary), footprint_radius(&passive));
        let mut placed = None;
        for _ in 0..1000 {
            let ps = [
                table.center[0] + rng.gen_range(-half[0]..half[0]),
                table.center[1] + rng.gen_range(-half[1]..half[1]),
            ];
            let pr = [
                table.center[0] + rng.gen_range(-half[0]..half[0]),
                table.center[1] + rng.gen_range(-half[1]..half[1]),
            ];
            if math::hypot(pr[0] - ps[0], pr[1] - ps[1]) > rr + rs + config.footprint_gap {
                placed = Some((pr, ps));
                break;
            }
        }
        let (pr, ps) = placed.ok_or_else(|| {
            BenchError::InfeasibleBounds(format!("could not place instance {i} of cell {cell}"))
        })?;
        let yaw_r = approach_yaw(pr, ps) + rng.gen_range(-1.0..=1.0) * config.yaw_jitter;
        let yaw_s = rng.gen_range(0.0..TAU);
        let task = TaskInstance::new(
            table_pose(table, pr[0], pr[1], yaw_r),
            primary,
            table_pose(table, ps[0], ps[1], yaw_s),
            passive,
            side_grasp(primary.h),
        )
        .expect("table poses are upright");
        out.push(task);
    }
    Ok(out)
}

/// Scripted pour parameters for the synthetic demonstration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DemoScript {
    pub passive_xy: [f64; 2],
    /// Horizontal distance from the passive centre to the primary's lip.
    pub lip_distance: f64,
    /// Direction from the passive to the primary (rad, world yaw).
    pub approach_bearing: f64,
    pub lift: f64,
    pub tilt_deg: f64,
    /// Interpolation step used to record each scripted segment.
    pub step: f64,
}

impl Default for DemoScript {
    fn default() -> Self {
        Self {
            passive_xy: [0.55, -0.10],
            lip_distance: 0.25,
            approach_bearing: FRAC_PI_2,
            lift: 0.18,
            tilt_deg: 110.0,
            step: 0.05,
        }
    }
}

/// The demonstration task: primary (3.25, 3.25, 2, 10) cm and passive
/// (8, 8, 2, 5.5) cm.
pub fn demo_task(script: &DemoScript, table: &TableRegion) -> TaskInstance {
    let primary = ContainerGeom::from_cm(3.25, 3.25, 2.0, 10.0).expect("valid");
    let passive = ContainerGeom::from_cm(8.0, 8.0, 2.0, 5.5).expect("valid");
    let u = Vec3::new(
        math::cos(script.approach_bearing),
        math::sin(script.approach_bearing),
        0.0,
    );
    let d = script.lip_distance + primary.a;
    let pr = [script.passive_xy[0] + d * u.x, script.passive_xy[1] + d * u.y];
    TaskInstance::new(
        table_pose(table, pr[0], pr[1], approach_yaw(pr, script.passive_xy)),
        primary,
        table_pose(table, script.passive_xy[0], script.passive_xy[1], 0.0),
        passive,
        side_grasp(primary.h),
    )
    .expect("table poses are upright")
}

/// Primary base poses of the scripted pour: start, lift, carry the lip over
/// the passive centre, tilt about the lip, then the reverse.
pub fn scripted_primary_poses(task: &TaskInstance, script: &DemoScript) -> Vec<Pose> {
    let p0 = task.primary_base;
    let lift = Pose::from_translation(Vec3::new(0.0, 0.0, script.lift));
    let p1 = lift.compose(&p0);
    let toward = (task.passive_base.translation - p0.translation)
        .horizontal()
        .try_normalize(1e-12)
        .unwrap_or(Vec3::X);
    let lip = p1.translation + Vec3::new(0.0, 0.0, task.primary.h) + toward * task.primary.a;
    let over = Vec3::new(
        task.passive_base.translation.x,
        task.passive_base.translation.y,
        lip.z,
    );
    let p2 = Pose::from_translation(over - lip).compose(&p1);
    let axis = Vec3::Z.cross(toward);
    let rot = Rotation::from_axis_angle(axis, math::to_radians(script.tilt_deg));
    let about_lip = Pose::new(rot, over - rot.rotate(over));
    let p3 = about_lip.compose(&p2);
    alloc::vec![p0, p1, p2, p3, p2, p1, p0]
}

/// A joint configuration for the bundled arm roughly reaching a side grasp
/// at bearing `yaw`.
pub fn ready_seed(arm: &ArmModel, yaw: f64) -> JointConfig {
    let mut q = JointConfig::zeros(arm.dof());
    if arm.dof() == 7 {
        q.0.copy_from_slice(&[yaw, 0.6, 0.0, -1.4, 0.0, -0.43, 0.0]);
    }
    q
}

/// Inverse kinematics for the grasp pose of `task`'s primary.
pub fn start_config(arm: &ArmModel, task: &TaskInstance, planner: &PlannerConfig) -> Result<JointConfig, PlanError> {
    let target = task.grasp_pose();
    let t = target.translation;
    let seed = ready_seed(arm, bearing(t.x, t.y));
    solve_ik(arm, &seed, &target, planner)
}

/// Generate the synthetic demonstration by planning through the scripted
/// pour on `arm`.
pub fn synthetic_demonstration(
    arm: &ArmModel,
    script: &DemoScript,
    table: &TableRegion,
    planner: &PlannerConfig,
) -> Result<Demonstration, BenchError> {
    let task = demo_task(script, table);
    let start = start_config(arm, &task, planner).map_err(|e| BenchError::Demo(format!("{e}")))?;
    let inv_grasp = task.grasp.inverse();
    let ee: Vec<Pose> = scripted_primary_poses(&task, script)[1..]
        .iter()
        .map(|p| p.compose(&inv_grasp))
        .collect();
    let cfg = planner.with_step(script.step);
    let plan = plan_through_guiding_poses(arm, &start, &ee, &cfg)
        .map_err(|e| BenchError::Demo(format!("{e}")))?;
    Ok(Demonstration {
        task,
        joints: plan.path,
    })
}

/// Demonstration data shared by every instance of a run.
#[derive(Clone, Debug)]
pub struct BenchContext {
    pub arm: ArmModel,
    pub demo: Demonstration,
    pub guiding: GuidingPoses,
    pub demo_frames: FrameAssignment,
    pub config: BenchConfig,
}

impl BenchContext {
    pub fn prepare(arm: ArmModel, demo: Demonstration, config: BenchConfig) -> Result<Self, BenchError> {
        demo.validate(&arm).map_err(|e| BenchError::Demo(format!("{e}")))?;
        let guiding = segment_demonstration(&arm, &demo.joints, &demo.task.passive_base, config.seg_tol)
            .map_err(|e| BenchError::Demo(format!("{e}")))?;
        let demo_frames =
            assign_demo_frames(&demo.task, &guiding).map_err(|e| BenchError::Demo(format!("{e}")))?;
        Ok(Self {
            arm,
            demo,
            guiding,
            demo_frames,
            config,
        })
    }
}

/// Summary of one evaluated plan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanSummary {
    pub collision_free: bool,
    pub pour_success: bool,
    pub max_tilt_outside_deg: f64,
    pub waypoints: usize,
    /// Largest per-waypoint deviation from the ScLERP reference.
    pub max_tracking_error: f64,
    /// Pose error at the final guiding pose.
    pub final_error: f64,
}

impl PlanSummary {
    pub fn of(arm: &ArmModel, run: &MethodRun) -> Self {
        let goal = run.guiding.poses().last().copied().unwrap_or(Pose::IDENTITY);
        let (plan, eval) = (&run.plan, &run.eval);
        Self {
            collision_free: eval.collision_free,
            pour_success: eval.pour_success,
            max_tilt_outside_deg: eval.max_tilt_outside_deg,
            waypoints: plan.path.len(),
            max_tracking_error: plan.tracking_errors.iter().copied().fold(0.0, f64::max),
            final_error: final_error(arm, plan, &goal),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Processed { cframe: PlanSummary, baseline: PlanSummary },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceOutcome {
    pub cell: Cell,
    /// Position within the cell's sampled list.
    pub index: usize,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunError {
    Ik(PlanError),
    Frames(String),
    CFramePlan(PlanError),
    BaselinePlan(PlanError),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Ik(e) => write!(f, "start configuration: {e}"),
            RunError::Frames(e) => write!(f, "frame assignment: {e}"),
            RunError::CFramePlan(e) => write!(f, "C-frame plan: {e}"),
            RunError::BaselinePlan(e) => write!(f, "baseline plan: {e}"),
        }
    }
}

impl core::error::Error for RunError {}

fn final_error(arm: &ArmModel, plan: &PlannedPath, goal: &Pose) -> f64 {
    plan.final_config()
        .and_then(|q| forward_kinematics(arm, q).ok())
        .map_or(f64::INFINITY, |g| crate::se3::pose_distance(&g, goal))
}

/// A planned and evaluated transfer for one method.
#[derive(Clone, Debug)]
pub struct MethodRun {
    pub guiding: GuidingPoses,
    pub plan: PlannedPath,
    pub eval: PlanEvaluation,
}

/// C-frame transfer result with the frames it used.
#[derive(Clone, Debug)]
pub struct CFrameRun {
    pub frames: FrameAssignment,
    pub transfer: TransferResult,
    pub run: MethodRun,
}

/// Start configuration for `task`: `given` if present, IK otherwise.
pub fn resolve_start(
    ctx: &BenchContext,
    task: &TaskInstance,
    given: Option<&JointConfig>,
) -> Result<JointConfig, RunError> {
    match given {
        Some(q) => {
            forward_kinematics(&ctx.arm, q).map_err(RunError::Ik)?;
            Ok(q.clone())
        }
        None => start_config(&ctx.arm, task, &ctx.config.planner).map_err(RunError::Ik),
    }
}

/// Frames, transfer, plan and evaluation with motion-transfer frames.
pub fn run_cframe(ctx: &BenchContext, task: &TaskInstance, start: &JointConfig) -> Result<CFrameRun, RunError> {
    let cfg = &ctx.config;
    let frames = assign_new_frames(task).map_err(|e| RunError::Frames(format!("{e}")))?;
    let transfer = cframe_transfer(
        &ctx.guiding,
        &ctx.demo_frames,
        &ctx.demo.task.grasp,
        &frames,
        &task.grasp,
    )
    .map_err(|e| RunError::Frames(format!("{e}")))?;
    let guiding = transfer.end_effector.clone();
    let plan = plan_through_guiding_poses(&ctx.arm, start, guiding.poses(), &cfg.planner)
        .map_err(RunError::CFramePlan)?;
    let eval = evaluate(&plan.path, &ctx.arm, task, &frames.primary.local, cfg.fill_tilt_deg)
        .map_err(RunError::CFramePlan)?;
    Ok(CFrameRun {
        frames,
        transfer,
        run: MethodRun { guiding, plan, eval },
    })
}

/// Baseline transfer, plan and evaluation. The pour-in test uses `g_br_cr`.
pub fn run_baseline(
    ctx: &BenchContext,
    task: &TaskInstance,
    start: &JointConfig,
    g_br_cr: &Pose,
) -> Result<MethodRun, RunError> {
    let cfg = &ctx.config;
    let guiding = baseline_transfer(&ctx.guiding, &task.passive_base)
        .map_err(|e| RunError::Frames(format!("{e}")))?;
    let plan = plan_through_guiding_poses(&ctx.arm, start, guiding.poses(), &cfg.planner)
        .map_err(RunError::BaselinePlan)?;
    let eval = evaluate(&plan.path, &ctx.arm, task, g_br_cr, cfg.fill_tilt_deg)
        .map_err(RunError::BaselinePlan)?;
    Ok(MethodRun { guiding, plan, eval })
}

/// Both methods planned from the same start configuration.
#[derive(Clone, Debug)]
pub struct InstanceRun {
    pub start: JointConfig,
    pub cframe: CFrameRun,
    pub baseline: MethodRun,
}

/// Transfer, plan and evaluate both methods on one instance. The baseline
/// is judged with the instance's own primary C-frame.
pub fn run_instance_full(ctx: &BenchContext, task: &TaskInstance) -> Result<InstanceRun, RunError> {
    let start = resolve_start(ctx, task, None)?;
    let cframe = run_cframe(ctx, task, &start)?;
    let baseline = run_baseline(ctx, task, &start, &cframe.frames.primary.local)?;
    Ok(InstanceRun {
        start,
        cframe,
        baseline,
    })
}

/// [`run_instance_full`] reduced to an [`Outcome`].
pub fn run_instance(ctx: &BenchContext, task: &TaskInstance) -> Outcome {
    match run_instance_full(ctx, task) {
        Ok(run) => Outcome::Processed {
            cframe: PlanSummary::of(&ctx.arm, &run.cframe.run),
            baseline: PlanSummary::of(&ctx.arm, &run.baseline),
        },
        Err(e) => Outcome::Skipped {
            reason: format!("{e}"),
        },
    }
}

/// Aggregate statistics for one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellReport {
    pub cell: Cell,
    pub sampled: usize,
    pub processed: usize,
    pub skipped: usize,
    pub cf_cframe_pct: f64,
    pub cf_baseline_pct: f64,
    pub pour_cframe_pct: f64,
    pub pour_baseline_pct: f64,
    /// `[min, max]` of the per-plan maximum tilt while outside the passive.
    pub tilt_cframe: Option<[f64; 2]>,
    pub tilt_baseline: Option<[f64; 2]>,
}

impl CellReport {
    pub fn tilt_spread(range: Option<[f64; 2]>) -> f64 {
        range.map_or(0.0, |[lo, hi]| hi - lo)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub per_cell: usize,
    pub config: BenchConfig,
    pub cells: Vec<CellReport>,
    /// Skipped instances as `(cell, index, reason)`.
    pub skipped: Vec<(Cell, usize, String)>,
}

fn pct(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        100.0 * k as f64 / n as f64
    }
}

fn range_of(values: impl Iterator<Item = f64>) -> Option<[f64; 2]> {
    values.fold(None, |acc, v| match acc {
        None => Some([v, v]),
        Some([lo, hi]) => Some([lo.min(v), hi.max(v)]),
    })
}

/// Aggregate per-instance outcomes. The input order does not matter.
pub fn aggregate(seed: u64, per_cell: usize, config: BenchConfig, outcomes: &[InstanceOutcome]) -> BenchReport {
    let mut sorted: Vec<&InstanceOutcome> = outcomes.iter().collect();
    sorted.sort_by_key(|o| (o.cell.index(), o.index));
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for cell in Cell::all() {
        let mine: Vec<&&InstanceOutcome> = sorted.iter().filter(|o| o.cell == cell).collect();
        if mine.is_empty() {
            continue;
        }
        let done: Vec<(&PlanSummary, &PlanSummary)> = mine
            .iter()
            .filter_map(|o| match &o.outcome {
                Outcome::Processed { cframe, baseline } => Some((cframe, baseline)),
                Outcome::Skipped { .. } => None,
            })
            .collect();
        for o in &mine {
            if let Outcome::Skipped { reason } = &o.outcome {
                skipped.push((cell, o.index, reason.clone()));
            }
        }
        let n = done.len();
        cells.push(CellReport {
            cell,
            sampled: mine.len(),
            processed: n,
            skipped: mine.len() - n,
            cf_cframe_pct: pct(done.iter().filter(|(c, _)| c.collision_free).count(), n),
            cf_baseline_pct: pct(done.iter().filter(|(_, b)| b.collision_free).count(), n),
            pour_cframe_pct: pct(done.iter().filter(|(c, _)| c.pour_success).count(), n),
            pour_baseline_pct: pct(done.iter().filter(|(_, b)| b.pour_success).count(), n),
            tilt_cframe: range_of(done.iter().map(|(c, _)| c.max_tilt_outside_deg)),
            tilt_baseline: range_of(done.iter().map(|(_, b)| b.max_tilt_outside_deg)),
        });
    }
    BenchReport {
        seed,
        per_cell,
        config,
        cells,
        skipped,
    }
}

/// Sequential comparison over given instances (all attributed to their
/// own category cell).
pub fn run_comparison(ctx: &BenchContext, instances: &[TaskInstance], seed: u64) -> BenchReport {
    let mut counters = [0usize; 16];
    let outcomes: Vec<InstanceOutcome> = instances
        .iter()
        .map(|task| {
            let cell = Cell {
                primary: CategorySpec::classify(Role::Primary, &task.primary),
                passive: CategorySpec::classify(Role::Passive, &task.passive),
            };
            let index = counters[cell.index()];
            counters[cell.index()] += 1;
            InstanceOutcome {
                cell,
                index,
                outcome: run_instance(ctx, task),
            }
        })
        .collect();
    aggregate(seed, 0, ctx.config, &outcomes)
}

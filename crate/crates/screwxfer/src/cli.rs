//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 malformed input, 3 planner
//! failure, 4 the evaluated plan collides.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use screwxfer_core::arm::{ArmModel, JointConfig};
use screwxfer_core::bench::{
    demo_task, resolve_start, run_baseline, run_cframe, side_grasp, synthetic_demonstration,
    BenchConfig, BenchContext, DemoScript, MethodRun, RunError,
};
use screwxfer_core::evaluation::primary_pose;
use screwxfer_core::frames::{assign_new_frames, Demonstration, TaskInstance};
use screwxfer_core::geometry::ContainerGeom;
use screwxfer_core::segmentation::segment_demonstration;
use screwxfer_core::transfer::baseline_transfer;

use crate::io::{
    read_json, to_json_string, ArmJson, DemoJson, FrameJson, GuidingPosesJson, InputError,
    TaskInstanceJson,
};
use crate::report::{bench_csv, tilt_csv, BenchReportJson, MethodRunJson};
use crate::runner::{run_bench, threads_from_env};
use crate::svg::{render, PlotData};

#[derive(Debug, Parser)]
#[command(name = "screwxfer", version, about = "Transfer a demonstrated pour to new containers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment the demonstration into guiding poses.
    Segment(CommonArgs),
    /// Assign motion-transfer frames on the demo and a new instance.
    AssignFrames(InstanceArgs),
    /// Transfer the guiding poses to a new instance.
    Transfer(InstanceArgs),
    /// Transfer, plan and evaluate on a new instance.
    Plan(InstanceArgs),
    /// Compare both methods over sampled instances in every category cell.
    Bench(BenchArgs),
    /// Write the top-down SVG of a planned transfer.
    Plot(InstanceArgs),
    /// Write example arm, demonstration and instance files.
    Example(ExampleArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[default]
    Cframe,
    Baseline,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Arm model JSON (defaults to the bundled 7-DoF arm).
    #[arg(long)]
    pub arm: Option<PathBuf>,
    /// Demonstration JSON (defaults to the synthetic pour).
    #[arg(long)]
    pub demo: Option<PathBuf>,
    /// Segmentation tolerance.
    #[arg(long, default_value_t = screwxfer_core::segmentation::DEFAULT_SEG_TOL)]
    pub seg_tol: f64,
    /// Interpolation parameter increment of the planner.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Tilt (degrees) above which the primary is considered pouring.
    #[arg(long, default_value_t = screwxfer_core::evaluation::DEFAULT_FILL_TILT_DEG)]
    pub fill_tilt_deg: f64,
    /// Output file (stdout if absent); a directory for `bench`. `plan` also
    /// writes the per-waypoint tilt table next to it as `<stem>.tilt.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Task instance JSON.
    #[arg(long)]
    pub instance: PathBuf,
    /// Transfer method.
    #[arg(long, value_enum, default_value_t = Method::Cframe)]
    pub method: Method,
    /// SVG output path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Instances per category cell (multiple of 10).
    #[arg(long, default_value_t = 50)]
    pub per_cell: usize,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Planner(String),
    #[error("plan collides with the passive container at waypoint {0}")]
    Collision(usize),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Planner(_) => 3,
            CliError::Collision(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

fn bad(what: &'static str, message: impl Into<String>) -> CliError {
    CliError::Input(InputError::Invalid {
        what,
        message: message.into(),
    })
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Frames(m) => bad("task instance", m),
            other => CliError::Planner(other.to_string()),
        }
    }
}

fn other(e: impl std::fmt::Display) -> CliError {
    CliError::Other(anyhow::anyhow!("{e}"))
}

impl CommonArgs {
    fn config(&self) -> Result<BenchConfig, CliError> {
        if !(self.seg_tol > 0.0 && self.seg_tol.is_finite()) {
            return Err(bad("--seg-tol", "must be positive"));
        }
        if !(self.step > 0.0 && self.step <= 0.05) {
            return Err(bad("--step", "must lie in (0, 0.05]"));
        }
        if !(self.fill_tilt_deg > 0.0 && self.fill_tilt_deg < 180.0) {
            return Err(bad("--fill-tilt-deg", "must lie in (0, 180)"));
        }
        let base = BenchConfig::default();
        Ok(BenchConfig {
            seg_tol: self.seg_tol,
            fill_tilt_deg: self.fill_tilt_deg,
            planner: base.planner.with_step(self.step),
            ..base
        })
    }

    fn arm(&self) -> Result<ArmModel, CliError> {
        match &self.arm {
            Some(p) => Ok(read_json::<ArmJson>(p)?.to_arm()?),
            None => Ok(ArmModel::bundled_seven_dof()),
        }
    }

    fn demo(&self, arm: &ArmModel, config: &BenchConfig) -> Result<Demonstration, CliError> {
        match &self.demo {
            Some(p) => Ok(read_json::<DemoJson>(p)?.to_demo()?),
            None => synthetic_demonstration(
                arm,
                &DemoScript::default(),
                &config.table,
                &config.planner,
            )
            .map_err(other),
        }
    }

    fn context(&self) -> Result<BenchContext, CliError> {
        let config = self.config()?;
        let arm = self.arm()?;
        let demo = self.demo(&arm, &config)?;
        BenchContext::prepare(arm, demo, config).map_err(|e| bad("demonstration", e.to_string()))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| other(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<(TaskInstance, Option<JointConfig>), CliError> {
    let json: TaskInstanceJson = read_json(path)?;
    Ok((json.to_task()?, json.start()))
}

#[derive(Serialize)]
struct FramesOut {
    demo_primary: FrameJson,
    demo_passive: FrameJson,
    new_primary: FrameJson,
    new_passive: FrameJson,
}

#[derive(Serialize)]
struct PlanOut {
    method: &'static str,
    start_joints: Vec<f64>,
    #[serde(flatten)]
    run: MethodRunJson,
}

struct Planned {
    task: TaskInstance,
    start: JointConfig,
    run: MethodRun,
    g_br_cr: screwxfer_core::se3::Pose,
}

fn plan_instance(ctx: &BenchContext, args: &InstanceArgs) -> Result<Planned, CliError> {
    let (task, given) = load_instance(&args.instance)?;
    if let Some(q) = &given {
        if q.len() != ctx.arm.dof() {
            return Err(bad("start_joints", format!("expected {} values", ctx.arm.dof())));
        }
    }
    let start = resolve_start(ctx, &task, given.as_ref())?;
    let frames = assign_new_frames(&task).map_err(|e| bad("task instance", e.to_string()))?;
    let g_br_cr = frames.primary.local;
    let run = match args.method {
        Method::Cframe => run_cframe(ctx, &task, &start)?.run,
        Method::Baseline => run_baseline(ctx, &task, &start, &g_br_cr)?,
    };
    Ok(Planned {
        task,
        start,
        run,
        g_br_cr,
    })
}

fn plot(ctx: &BenchContext, p: &Planned) -> Result<String, CliError> {
    let primary_poses: Vec<_> = p
        .run
        .guiding
        .poses()
        .iter()
        .map(|g| g.compose(&p.task.grasp))
        .collect();
    let mut track = Vec::with_capacity(p.run.plan.path.len());
    for (q, inside) in p.run.plan.path.configs.iter().zip(&p.run.eval.per_waypoint_pour_in) {
        let base = primary_pose(&ctx.arm, q, &p.task).map_err(|e| CliError::Planner(e.to_string()))?;
        track.push((base.compose(&p.g_br_cr).translation, *inside));
    }
    Ok(render(&PlotData {
        task: &p.task,
        primary_poses: &primary_poses,
        c_r_track: &track,
    }))
}

/// Run one parsed command.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Segment(args) => {
            let config = args.config()?;
            let arm = args.arm()?;
            let demo = args.demo(&arm, &config)?;
            demo.validate(&arm).map_err(|e| bad("demonstration", e.to_string()))?;
            let guiding = segment_demonstration(&arm, &demo.joints, &demo.task.passive_base, config.seg_tol)
                .map_err(|e| bad("demonstration", e.to_string()))?;
            let json = GuidingPosesJson::from(&guiding);
            emit(args.out.as_deref(), &to_json_string(&json))
        }
        Command::AssignFrames(args) => {
            let ctx = args.common.context()?;
            let (task, _) = load_instance(&args.instance)?;
            let new = assign_new_frames(&task).map_err(|e| bad("task instance", e.to_string()))?;
            let out = FramesOut {
                demo_primary: (&ctx.demo_frames.primary).into(),
                demo_passive: (&ctx.demo_frames.passive).into(),
                new_primary: (&new.primary).into(),
                new_passive: (&new.passive).into(),
            };
            emit(args.common.out.as_deref(), &to_json_string(&out))
        }
        Command::Transfer(args) => {
            let ctx = args.common.context()?;
            let (task, _) = load_instance(&args.instance)?;
            let guiding = match args.method {
                Method::Cframe => {
                    let frames =
                        assign_new_frames(&task).map_err(|e| bad("task instance", e.to_string()))?;
                    screwxfer_core::transfer::cframe_transfer(
                        &ctx.guiding,
                        &ctx.demo_frames,
                        &ctx.demo.task.grasp,
                        &frames,
                        &task.grasp,
                    )
                    .map_err(other)?
                    .end_effector
                }
                Method::Baseline => baseline_transfer(&ctx.guiding, &task.passive_base).map_err(other)?,
            };
            emit(args.common.out.as_deref(), &to_json_string(&GuidingPosesJson::from(&guiding)))
        }
        Command::Plan(args) => {
            let ctx = args.common.context()?;
            let planned = plan_instance(&ctx, &args)?;
            let out = PlanOut {
                method: match args.method {
                    Method::Cframe => "cframe",
                    Method::Baseline => "baseline",
                },
                start_joints: planned.start.0.clone(),
                run: (&planned.run).into(),
            };
            emit(args.common.out.as_deref(), &to_json_string(&out))?;
            if let Some(path) = &args.common.out {
                emit(Some(&path.with_extension("tilt.csv")), &tilt_csv(&planned.run.eval))?;
            }
            if let Some(svg) = &args.svg {
                emit(Some(svg), &plot(&ctx, &planned)?)?;
            }
            match planned.run.eval.first_collision_index {
                Some(i) => Err(CliError::Collision(i)),
                None => Ok(()),
            }
        }
        Command::Plot(args) => {
            let ctx = args.common.context()?;
            let planned = plan_instance(&ctx, &args)?;
            let svg = plot(&ctx, &planned)?;
            let target = args.svg.as_deref().or(args.common.out.as_deref());
            emit(target, &svg)
        }
        Command::Bench(args) => {
            let ctx = args.common.context()?;
            let report = run_bench(&ctx, args.seed, args.per_cell, threads_from_env())
                .map_err(|e| bad("bench", e.to_string()))?;
            let json = to_json_string(&BenchReportJson::from(&report));
            let csv = bench_csv(&report);
            match &args.common.out {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(other)?;
                    emit(Some(&dir.join("bench.json")), &json)?;
                    emit(Some(&dir.join("bench.csv")), &csv)
                }
                None => emit(None, &json),
            }
        }
        Command::Example(args) => write_examples(&args.out),
    }
}

/// The (5, 3, 8, 4) cm primary at the demonstration's placement.
pub fn example_instance() -> TaskInstance {
    let config = BenchConfig::default();
    let demo = demo_task(&DemoScript::default(), &config.table);
    let primary = ContainerGeom::from_cm(5.0, 3.0, 8.0, 4.0).expect("valid");
    TaskInstance::new(
        demo.primary_base,
        primary,
        demo.passive_base,
        demo.passive,
        side_grasp(primary.h),
    )
    .expect("upright")
}

fn write_examples(dir: &Path) -> Result<(), CliError> {
    let config = BenchConfig::default();
    let arm = ArmModel::bundled_seven_dof();
    let demo = synthetic_demonstration(&arm, &DemoScript::default(), &config.table, &config.planner)
        .map_err(other)?;
    fs::create_dir_all(dir).map_err(other)?;
    emit(Some(&dir.join("arm.json")), &to_json_string(&ArmJson::from(&arm)))?;
    emit(Some(&dir.join("demo.json")), &to_json_string(&DemoJson::from(&demo)))?;
    let instance = TaskInstanceJson::from(&example_instance());
    emit(Some(&dir.join("instance.json")), &to_json_string(&instance))
}

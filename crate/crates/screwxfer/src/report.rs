//! Serialized reports: plans, evaluations and benchmark tables.

use serde::Serialize;

use screwxfer_core::arm::PlannedPath;
use screwxfer_core::bench::{BenchConfig, BenchReport, CellReport, MethodRun};
use screwxfer_core::evaluation::PlanEvaluation;

use crate::io::{poses_to_json, GuidingPosesJson, PoseJson};

#[derive(Clone, Debug, Serialize)]
pub struct EvaluationJson {
    pub collision_free: bool,
    pub first_collision_index: Option<usize>,
    pub pour_success: bool,
    pub i_0: usize,
    pub max_tilt_outside_deg: f64,
    pub per_waypoint_tilt: Vec<f64>,
}

impl From<&PlanEvaluation> for EvaluationJson {
    fn from(e: &PlanEvaluation) -> Self {
        EvaluationJson {
            collision_free: e.collision_free,
            first_collision_index: e.first_collision_index,
            pour_success: e.pour_success,
            i_0: e.i0,
            max_tilt_outside_deg: e.max_tilt_outside_deg,
            per_waypoint_tilt: e.per_waypoint_tilt.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanJson {
    pub joints: Vec<Vec<f64>>,
    pub references: Vec<PoseJson>,
    pub tracking_errors: Vec<f64>,
    pub arrivals: Vec<usize>,
}

impl From<&PlannedPath> for PlanJson {
    fn from(p: &PlannedPath) -> Self {
        PlanJson {
            joints: p.path.configs.iter().map(|q| q.0.clone()).collect(),
            references: poses_to_json(&p.references),
            tracking_errors: p.tracking_errors.clone(),
            arrivals: p.arrivals.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodRunJson {
    pub guiding_poses: GuidingPosesJson,
    pub plan: PlanJson,
    pub evaluation: EvaluationJson,
}

impl From<&MethodRun> for MethodRunJson {
    fn from(r: &MethodRun) -> Self {
        MethodRunJson {
            guiding_poses: (&r.guiding).into(),
            plan: (&r.plan).into(),
            evaluation: (&r.eval).into(),
        }
    }
}

/// Per-waypoint tilt and pour-in status as CSV.
pub fn tilt_csv(e: &PlanEvaluation) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["waypoint", "tilt_deg", "pour_in"]).expect("in-memory write");
    for (i, (t, p)) in e.per_waypoint_tilt.iter().zip(&e.per_waypoint_pour_in).enumerate() {
        w.write_record([i.to_string(), t.to_string(), p.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigJson {
    pub seg_tol: f64,
    pub fill_tilt_deg: f64,
    pub step: f64,
    pub track_tol: f64,
    pub final_tol: f64,
    pub max_iters: usize,
    pub table_center: [f64; 2],
    pub table_size: [f64; 2],
    pub table_z: f64,
    pub max_radius_cm: f64,
    pub max_height_cm: f64,
}

impl From<&BenchConfig> for ConfigJson {
    fn from(c: &BenchConfig) -> Self {
        ConfigJson {
            seg_tol: c.seg_tol,
            fill_tilt_deg: c.fill_tilt_deg,
            step: c.planner.step,
            track_tol: c.planner.track_tol,
            final_tol: c.planner.final_tol,
            max_iters: c.planner.max_iters,
            table_center: c.table.center,
            table_size: c.table.size,
            table_z: c.table.z,
            max_radius_cm: c.bounds.max_radius * 100.0,
            max_height_cm: c.bounds.max_height * 100.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellJson {
    pub cell: String,
    pub sampled: usize,
    pub processed: usize,
    pub skipped: usize,
    pub cf_cframe_pct: f64,
    pub cf_baseline_pct: f64,
    pub pour_cframe_pct: f64,
    pub pour_baseline_pct: f64,
    pub tilt_cframe_deg: Option<[f64; 2]>,
    pub tilt_baseline_deg: Option<[f64; 2]>,
}

impl From<&CellReport> for CellJson {
    fn from(c: &CellReport) -> Self {
        CellJson {
            cell: c.cell.id(),
            sampled: c.sampled,
            processed: c.processed,
            skipped: c.skipped,
            cf_cframe_pct: c.cf_cframe_pct,
            cf_baseline_pct: c.cf_baseline_pct,
            pour_cframe_pct: c.pour_cframe_pct,
            pour_baseline_pct: c.pour_baseline_pct,
            tilt_cframe_deg: c.tilt_cframe,
            tilt_baseline_deg: c.tilt_baseline,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SkipJson {
    pub cell: String,
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReportJson {
    pub seed: u64,
    pub per_cell: usize,
    pub config: ConfigJson,
    pub cells: Vec<CellJson>,
    pub skipped: Vec<SkipJson>,
}

impl From<&BenchReport> for BenchReportJson {
    fn from(r: &BenchReport) -> Self {
        BenchReportJson {
            seed: r.seed,
            per_cell: r.per_cell,
            config: (&r.config).into(),
            cells: r.cells.iter().map(CellJson::from).collect(),
            skipped: r
                .skipped
                .iter()
                .map(|(c, i, reason)| SkipJson {
                    cell: c.id(),
                    index: *i,
                    reason: reason.clone(),
                })
                .collect(),
        }
    }
}

fn opt(v: Option<[f64; 2]>, k: usize) -> String {
    v.map(|r| r[k].to_string()).unwrap_or_default()
}

/// One row per cell.
pub fn bench_csv(r: &BenchReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "cell",
        "n_processed",
        "cf_cframe_pct",
        "cf_baseline_pct",
        "tilt_cframe_min",
        "tilt_cframe_max",
        "tilt_baseline_min",
        "tilt_baseline_max",
    ])
    .expect("in-memory write");
    for c in &r.cells {
        w.write_record([
            c.cell.id(),
            c.processed.to_string(),
            c.cf_cframe_pct.to_string(),
            c.cf_baseline_pct.to_string(),
            opt(c.tilt_cframe, 0),
            opt(c.tilt_cframe, 1),
            opt(c.tilt_baseline, 0),
            opt(c.tilt_baseline, 1),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

//! Top-down SVG plot of a transferred pour.

use std::fmt::Write;

use screwxfer_core::frames::TaskInstance;
use screwxfer_core::se3::{Pose, Vec3};

const RIM_SAMPLES: usize = 180;
const SIZE: f64 = 600.0;
const MARGIN: f64 = 30.0;

/// Plot inputs in world coordinates.
pub struct PlotData<'a> {
    pub task: &'a TaskInstance,
    /// Primary container poses at the guiding poses.
    pub primary_poses: &'a [Pose],
    /// C_r positions along the plan, with their pour-in status.
    pub c_r_track: &'a [(Vec3, bool)],
}

fn ring(task_geom: &screwxfer_core::geometry::ContainerGeom, pose: &Pose) -> Vec<Vec3> {
    (0..RIM_SAMPLES)
        .map(|k| {
            let t = core::f64::consts::TAU * k as f64 / RIM_SAMPLES as f64;
            task_geom.rim_point_world(pose, t).position
        })
        .collect()
}

/// Render the passive rim, primary rim footprints and the C_r track as an
/// SVG document viewed from above (`+x` right, `+y` up).
pub fn render(data: &PlotData<'_>) -> String {
    let passive = ring(&data.task.passive, &data.task.passive_base);
    let footprints: Vec<Vec<Vec3>> = data
        .primary_poses
        .iter()
        .map(|p| ring(&data.task.primary, p))
        .collect();

    let all = passive
        .iter()
        .chain(footprints.iter().flatten())
        .chain(data.c_r_track.iter().map(|(p, _)| p));
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        lo = [lo[0].min(p.x), lo[1].min(p.y)];
        hi = [hi[0].max(p.x), hi[1].max(p.y)];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-3);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let px = |p: &Vec3| {
        (
            MARGIN + (p.x - lo[0]) * scale,
            SIZE - MARGIN - (p.y - lo[1]) * scale,
        )
    };
    let points = |ps: &[Vec3]| {
        ps.iter()
            .map(|p| {
                let (x, y) = px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for f in &footprints {
        writeln!(
            s,
            r##"<polygon points="{}" fill="none" stroke="#7a7a7a" stroke-width="1"/>"##,
            points(f)
        )
        .unwrap();
    }
    writeln!(
        s,
        r##"<polygon points="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        points(&passive)
    )
    .unwrap();
    for (p, inside) in data.c_r_track {
        let (x, y) = px(p);
        let color = if *inside { "#2a9d3a" } else { "#c0392b" };
        writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="{color}"/>"#).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

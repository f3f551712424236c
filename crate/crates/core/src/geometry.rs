//! Superellipse containers `|x/a|^n + |y/b|^n ≤ 1`, extruded from `z = 0` to
//! `z = h` in their base frame, with the opening (rim) at `z = h`.

use alloc::vec::Vec;
use core::fmt;

use crate::math::{self, FRAC_PI_2, FRAC_PI_4, PI, TAU};
use crate::se3::{Pose, Vec3};

/// Samples used to seed the lowest-rim-point search.
pub const LOWEST_POINT_SEEDS: usize = 256;

const TIE_TOL: f64 = 1e-12;

/// Polyline resolution used for arc-length spacing of rim samples.
const ARC_TABLE_SIZE: usize = 4096;
const CIRCLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeometryError {
    InvalidParameters { a: f64, b: f64, n: f64, h: f64 },
    /// Circular rims have no distinguished corner.
    CornerUndefined,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::InvalidParameters { a, b, n, h } => write!(
                f,
                "container parameters must be positive and finite (a={a}, b={b}, n={n}, h={h})"
            ),
            GeometryError::CornerUndefined => f.write_str("circular rim has no corner"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// Container shape parameters, lengths in metres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContainerGeom {
    pub a: f64,
    pub b: f64,
    pub n: f64,
    pub h: f64,
}

/// A point on the rim with its outward normal in the rim plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RimPoint {
    pub position: Vec3,
    pub normal: Vec3,
    pub t: f64,
}

impl RimPoint {
    /// The same point expressed through `pose`.
    pub fn transformed(&self, pose: &Pose) -> RimPoint {
        RimPoint {
            position: pose.transform_point(self.position),
            normal: pose.transform_vector(self.normal),
            t: self.t,
        }
    }
}

impl ContainerGeom {
    pub fn new(a: f64, b: f64, n: f64, h: f64) -> Result<Self, GeometryError> {
        let ok = [a, b, n, h].iter().all(|v| v.is_finite() && *v > 0.0);
        if !ok {
            return Err(GeometryError::InvalidParameters { a, b, n, h });
        }
        Ok(Self { a, b, n, h })
    }

    /// Parameters given in centimetres.
    pub fn from_cm(a: f64, b: f64, n: f64, h: f64) -> Result<Self, GeometryError> {
        Self::new(a / 100.0, b / 100.0, n, h / 100.0)
    }

    pub fn is_circle(&self) -> bool {
        (self.n - 2.0).abs() < CIRCLE_TOL && (self.a - self.b).abs() < CIRCLE_TOL
    }

    /// `|x/a|^n + |y/b|^n`: below 1 inside, 1 on the curve, above 1 outside.
    pub fn superellipse_value(&self, x: f64, y: f64) -> f64 {
        math::pow((x / self.a).abs(), self.n) + math::pow((y / self.b).abs(), self.n)
    }

    /// Rim point at parameter `t` in the base frame.
    pub fn rim_point(&self, t: f64) -> RimPoint {
        let t = math::wrap_two_pi(t);
        let (c, s) = (snap(math::cos(t)), snap(math::sin(t)));
        let e = 2.0 / self.n;
        let x = self.a * math::sgn(c) * math::pow(c.abs(), e);
        let y = self.b * math::sgn(s) * math::pow(s.abs(), e);
        RimPoint {
            position: Vec3::new(x, y, self.h),
            normal: self.normal_at(x, y),
            t,
        }
    }

    /// Rim point at `t` placed by `pose`.
    pub fn rim_point_world(&self, pose: &Pose, t: f64) -> RimPoint {
        self.rim_point(t).transformed(pose)
    }

    /// Outward unit normal of the rim curve at `(x, y)` in the rim plane.
    pub fn normal_at(&self, x: f64, y: f64) -> Vec3 {
        let (ux, uy) = ((x / self.a).abs(), (y / self.b).abs());
        let (sx, sy) = (math::sgn(x), math::sgn(y));
        let g = if self.n >= 1.0 {
            Vec3::new(
                sx * math::pow(ux, self.n - 1.0) / self.a,
                sy * math::pow(uy, self.n - 1.0) / self.b,
                0.0,
            )
        } else {
            // Gradient scaled by |x/a|^(1-n) |y/b|^(1-n) to stay finite.
            Vec3::new(
                sx * math::pow(uy, 1.0 - self.n) / self.a,
                sy * math::pow(ux, 1.0 - self.n) / self.b,
                0.0,
            )
        };
        g.try_normalize(1e-300)
            .or_else(|| Vec3::new(sx, sy, 0.0).try_normalize(0.0))
            .unwrap_or(Vec3::X)
    }

    /// The rim point with minimum world `z` under `pose`; ties go to the
    /// smallest parameter `t`.
    pub fn lowest_rim_point(&self, pose: &Pose) -> RimPoint {
        let z_of = |t: f64| pose.transform_point(self.rim_point(t).position).z;
        let dt = TAU / LOWEST_POINT_SEEDS as f64;
        let zs: Vec<f64> = (0..LOWEST_POINT_SEEDS).map(|i| z_of(i as f64 * dt)).collect();
        let (lo, hi) = zs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(*z), hi.max(*z)));
        let best = zs.iter().position(|z| *z <= lo + TIE_TOL).unwrap_or(0);
        if hi - lo <= TIE_TOL {
            return self.rim_point(0.0).transformed(pose);
        }
        let t0 = best as f64 * dt;
        let t = golden_section_min(&z_of, t0 - dt, t0 + dt, 1e-13);
        let t = if z_of(t) < zs[best] { t } else { t0 };
        self.rim_point(t).transformed(pose)
    }

    /// Corners of the rim in the base frame.
    ///
    /// Rectangle-like rims (`n > 2`) have their corners on the diagonals,
    /// diamond-like rims (`n < 2`) at the axis vertices, and ellipses at the
    /// two ends of the major axis.
    pub fn corner_points(&self) -> Result<Vec<RimPoint>, GeometryError> {
        let ts: &[f64] = if self.is_circle() {
            return Err(GeometryError::CornerUndefined);
        } else if (self.n - 2.0).abs() < CIRCLE_TOL {
            if self.a > self.b {
                &[0.0, PI]
            } else {
                &[FRAC_PI_2, 3.0 * FRAC_PI_2]
            }
        } else if self.n > 2.0 {
            &[FRAC_PI_4, 3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4, 7.0 * FRAC_PI_4]
        } else {
            &[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]
        };
        Ok(ts.iter().map(|t| self.rim_point(*t)).collect())
    }

    /// True if the base-frame point lies strictly inside the solid.
    pub fn contains_point(&self, p: Vec3) -> bool {
        p.z > 0.0 && p.z < self.h && self.superellipse_value(p.x, p.y) < 1.0
    }

    /// Radius of the sphere about [`Self::center`] enclosing the solid.
    pub fn bounding_radius(&self) -> f64 {
        math::sqrt(self.a * self.a + self.b * self.b + 0.25 * self.h * self.h)
    }

    /// Centre of the solid in the base frame.
    pub fn center(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, 0.5 * self.h)
    }

    /// Rim parameters of `count` points spaced evenly by arc length,
    /// starting at `t = 0`.
    pub fn arc_length_params(&self, count: usize) -> Vec<f64> {
        let m = ARC_TABLE_SIZE;
        let mut cum = Vec::with_capacity(m + 1);
        cum.push(0.0);
        let mut prev = self.rim_point(0.0).position;
        for k in 1..=m {
            let p = self.rim_point(TAU * k as f64 / m as f64).position;
            cum.push(cum[k - 1] + (p - prev).norm());
            prev = p;
        }
        let total = cum[m];
        let mut out = Vec::with_capacity(count);
        let mut k = 0;
        for i in 0..count {
            let s = total * (i as f64 / count as f64);
            while k + 1 < m && cum[k + 1] <= s {
                k += 1;
            }
            let span = cum[k + 1] - cum[k];
            let f = if span > 0.0 { (s - cum[k]) / span } else { 0.0 };
            out.push(TAU * (k as f64 + f) / m as f64);
        }
        out
    }

    /// Wall sample grid in the base frame: `angular` rim points spaced
    /// evenly by arc length times `vertical` evenly spaced heights from `0`
    /// to `h`.
    pub fn wall_samples(&self, angular: usize, vertical: usize) -> Vec<Vec3> {
        let ring: Vec<Vec3> = self
            .arc_length_params(angular)
            .into_iter()
            .map(|t| self.rim_point(t).position)
            .collect();
        let rows = vertical.max(2);
        let mut out = Vec::with_capacity(ring.len() * rows);
        for k in 0..rows {
            let z = self.h * k as f64 / (rows - 1) as f64;
            out.extend(ring.iter().map(|p| Vec3::new(p.x, p.y, z)));
        }
        out
    }
}

/// Flush the rounding residue of `cos(π/2)` and friends to zero so axis
/// vertices are exact.
fn snap(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

/// Minimiser of `f` on `[lo, hi]` by golden-section search.
fn golden_section_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const R: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - R * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + R * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

//! Decomposition of a demonstrated end-effector path into constant-screw
//! segments, whose endpoints are the guiding poses.

use alloc::vec::Vec;
use core::fmt;

use crate::arm::{forward_kinematics, ArmModel, JointPath, PlanError};
use crate::se3::{pose_distance, Pose, ScrewPath};

/// Default segmentation tolerance (rad + m).
pub const DEFAULT_SEG_TOL: f64 = 5e-3;

/// Frame in which a guiding-pose sequence is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameTag {
    /// End-effector poses in the world frame.
    World,
    /// End-effector poses relative to the passive object's base frame.
    PassiveBase,
    /// Primary C-frame poses relative to the passive C-frame.
    PassiveCFrame,
}

impl fmt::Display for FrameTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameTag::World => "world",
            FrameTag::PassiveBase => "passive_base",
            FrameTag::PassiveCFrame => "passive_cframe",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SegmentError {
    NonPositiveTolerance(f64),
    TooFewPoses(usize),
    /// Poses and source indices differ in length, or fewer than two poses.
    BadLength { poses: usize, indices: usize },
    IndicesNotIncreasing,
    Kinematics(PlanError),
}

impl fmt::Display for SegmentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentError::NonPositiveTolerance(t) => {
                write!(f, "segmentation tolerance must be positive, got {t}")
            }
            SegmentError::TooFewPoses(n) => write!(f, "need at least two poses, got {n}"),
            SegmentError::BadLength { poses, indices } => write!(
                f,
                "guiding poses need at least two entries with matching indices ({poses} poses, {indices} indices)"
            ),
            SegmentError::IndicesNotIncreasing => {
                f.write_str("guiding-pose source indices must be strictly increasing")
            }
            SegmentError::Kinematics(e) => write!(f, "forward kinematics: {e}"),
        }
    }
}

impl core::error::Error for SegmentError {}

impl From<PlanError> for SegmentError {
    fn from(e: PlanError) -> Self {
        SegmentError::Kinematics(e)
    }
}

/// Endpoints of constant-screw segments with their sample indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GuidingPoses {
    poses: Vec<Pose>,
    indices: Vec<usize>,
    frame: FrameTag,
}

impl GuidingPoses {
    pub fn new(poses: Vec<Pose>, indices: Vec<usize>, frame: FrameTag) -> Result<Self, SegmentError> {
        if poses.len() < 2 || poses.len() != indices.len() {
            return Err(SegmentError::BadLength {
                poses: poses.len(),
                indices: indices.len(),
            });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SegmentError::IndicesNotIncreasing);
        }
        Ok(Self {
            poses,
            indices,
            frame,
        })
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn frame(&self) -> FrameTag {
        self.frame
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    /// Same indices, new poses and tag.
    pub fn with_poses(&self, poses: Vec<Pose>, frame: FrameTag) -> Self {
        assert_eq!(poses.len(), self.poses.len());
        Self {
            poses,
            indices: self.indices.clone(),
            frame,
        }
    }

    /// ScLERP reconstruction at every original sample index.
    pub fn reconstruct(&self) -> Vec<Pose> {
        let mut out = Vec::with_capacity(self.indices.last().map_or(0, |i| i + 1));
        let first = self.indices[0];
        for _ in 0..first {
            out.push(self.poses[0]);
        }
        for (w, p) in self.indices.windows(2).zip(self.poses.windows(2)) {
            let (s, e) = (w[0], w[1]);
            let interp = ScrewPath::new(p[0], p[1]);
            for j in s..e {
                out.push(interp.at((j - s) as f64 / (e - s) as f64));
            }
        }
        out.push(*self.poses.last().expect("at least two poses"));
        out
    }

    /// `count` poses sampled uniformly in the global parameter
    /// `u ∈ [0, k-1]`, where segment `j` spans `u ∈ [j, j+1]`.
    pub fn sample_uniform(&self, count: usize) -> Vec<Pose> {
        let segs = self.poses.len() - 1;
        let paths: Vec<ScrewPath> = self
            .poses
            .windows(2)
            .map(|p| ScrewPath::new(p[0], p[1]))
            .collect();
        if count == 1 {
            return alloc::vec![self.poses[0]];
        }
        (0..count)
            .map(|i| {
                let u = segs as f64 * i as f64 / (count - 1) as f64;
                let j = (u as usize).min(segs - 1);
                paths[j].at(u - j as f64)
            })
            .collect()
    }
}

/// Per-sample end-effector poses of a joint path.
pub fn fk_path(arm: &ArmModel, path: &JointPath) -> Result<Vec<Pose>, PlanError> {
    path.configs
        .iter()
        .map(|q| forward_kinematics(arm, q))
        .collect()
}

/// Largest deviation of `poses[s+1..e]` from the ScLERP interpolant between
/// `poses[s]` and `poses[e]`.
pub fn segment_deviation(poses: &[Pose], s: usize, e: usize) -> f64 {
    let interp = ScrewPath::new(poses[s], poses[e]);
    ((s + 1)..e)
        .map(|j| pose_distance(&poses[j], &interp.at((j - s) as f64 / (e - s) as f64)))
        .fold(0.0, f64::max)
}

/// Greedy farthest-reach constant-screw segmentation.
///
/// From anchor `s` the end `e` grows while every intermediate pose stays
/// within `seg_tol` of the ScLERP interpolant `G[s] → G[e]`. The last
/// accepted end becomes a guiding pose and the next anchor. Output is
/// tagged [`FrameTag::World`].
pub fn segment_constant_screws(poses: &[Pose], seg_tol: f64) -> Result<GuidingPoses, SegmentError> {
    if !(seg_tol > 0.0) {
        return Err(SegmentError::NonPositiveTolerance(seg_tol));
    }
    if poses.len() < 2 {
        return Err(SegmentError::TooFewPoses(poses.len()));
    }
    let last = poses.len() - 1;
    let mut indices = alloc::vec![0usize];
    let mut s = 0;
    while s < last {
        let mut e = s + 1;
        while e < last && segment_deviation(poses, s, e + 1) < seg_tol {
            e += 1;
        }
        indices.push(e);
        s = e;
    }
    let guiding = indices.iter().map(|&i| poses[i]).collect();
    GuidingPoses::new(guiding, indices, FrameTag::World)
}

/// Re-express world-frame poses relative to the passive base `g_bs`.
pub fn relativize_to_passive(guiding: &GuidingPoses, g_bs: &Pose) -> GuidingPoses {
    let inv = g_bs.inverse();
    let poses = guiding.poses.iter().map(|g| inv.compose(g)).collect();
    guiding.with_poses(poses, FrameTag::PassiveBase)
}

/// Inverse of [`relativize_to_passive`].
pub fn express_in_world(guiding: &GuidingPoses, g_bs: &Pose) -> GuidingPoses {
    let poses = guiding.poses.iter().map(|g| g_bs.compose(g)).collect();
    guiding.with_poses(poses, FrameTag::World)
}

/// Segment a recorded joint path and express the guiding poses in the
/// passive base frame `g_bs`.
pub fn segment_demonstration(
    arm: &ArmModel,
    joints: &JointPath,
    g_bs: &Pose,
    seg_tol: f64,
) -> Result<GuidingPoses, SegmentError> {
    let poses = fk_path(arm, joints)?;
    let world = segment_constant_screws(&poses, seg_tol)?;
    Ok(relativize_to_passive(&world, g_bs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::se3::{Rotation, Vec3};

    #[test]
    fn constant_path_is_one_segment() {
        let g = Pose::from_translation(Vec3::new(0.1, 0.2, 0.3));
        let gp = segment_constant_screws(&[g; 5], 1e-3).unwrap();
        assert_eq!(gp.indices(), &[0, 4]);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let g = [Pose::IDENTITY; 2];
        assert!(matches!(
            segment_constant_screws(&g, 0.0),
            Err(SegmentError::NonPositiveTolerance(_))
        ));
        assert!(matches!(
            segment_constant_screws(&g[..1], 1e-3),
            Err(SegmentError::TooFewPoses(1))
        ));
    }

    #[test]
    fn reconstruct_has_one_pose_per_sample() {
        let a = Pose::IDENTITY;
        let b = Pose::new(Rotation::rot_z(1.0), Vec3::new(0.2, 0.0, 0.0));
        let c = Pose::from_translation(Vec3::new(0.0, 0.5, 0.0));
        let gp = GuidingPoses::new(alloc::vec![a, b, c], alloc::vec![0, 3, 7], FrameTag::World).unwrap();
        let r = gp.reconstruct();
        assert_eq!(r.len(), 8);
        assert!(pose_distance(&r[3], &b) < 1e-12);
        assert!(pose_distance(&r[7], &c) < 1e-12);
        let u = gp.sample_uniform(5);
        assert!(pose_distance(&u[2], &b) < 1e-12);
        assert!(pose_distance(&u[4], &c) < 1e-12);
    }

    #[test]
    fn guiding_pose_validation() {
        let p = alloc::vec![Pose::IDENTITY; 2];
        assert!(GuidingPoses::new(p.clone(), alloc::vec![3, 3], FrameTag::World).is_err());
        assert!(GuidingPoses::new(p[..1].to_vec(), alloc::vec![0], FrameTag::World).is_err());
    }
}

//! Guiding-pose transfer between task instances.
//!
//! The C-frame transfer runs in three steps:
//!
//! 1. relativize: `g_CsCr(i) = g_BsCs⁻¹ · g_BsE(i) · g_EBr · g_BrCr`
//! 2. instantiate: `g_Cr(i) = g_Cs · g_CsCr(i)`
//! 3. to end effector: `g_E(i) = g_Cr(i) · (g_EBr · g_BrCr)⁻¹`
//!
//! The baseline simply re-anchors the demonstrated end-effector poses at
//! the new passive base: `g_E(i) = g_Bs · g_BsE(i)`.

use alloc::vec::Vec;
use core::fmt;

use crate::frames::FrameAssignment;
use crate::se3::Pose;
use crate::segmentation::{FrameTag, GuidingPoses};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransferError {
    FrameMismatch { expected: FrameTag, got: FrameTag },
}

impl fmt::Display for TransferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferError::FrameMismatch { expected, got } => {
                write!(f, "guiding poses expressed in {got}, expected {expected}")
            }
        }
    }
}

impl core::error::Error for TransferError {}

fn expect_frame(g: &GuidingPoses, expected: FrameTag) -> Result<(), TransferError> {
    if g.frame() == expected {
        Ok(())
    } else {
        Err(TransferError::FrameMismatch {
            expected,
            got: g.frame(),
        })
    }
}

/// Demonstrated end-effector guiding poses (in the passive base) re-expressed
/// as primary C-frame poses relative to the passive C-frame.
pub fn relativize(
    guiding: &GuidingPoses,
    g_bs_cs: &Pose,
    g_e_br: &Pose,
    g_br_cr: &Pose,
) -> Result<GuidingPoses, TransferError> {
    expect_frame(guiding, FrameTag::PassiveBase)?;
    let left = g_bs_cs.inverse();
    let right = g_e_br.compose(g_br_cr);
    let poses = guiding
        .poses()
        .iter()
        .map(|g| left.compose(g).compose(&right))
        .collect();
    Ok(guiding.with_poses(poses, FrameTag::PassiveCFrame))
}

/// World poses of the new primary C-frame, given the new passive C-frame.
pub fn instantiate(relative: &GuidingPoses, g_cs: &Pose) -> Result<Vec<Pose>, TransferError> {
    expect_frame(relative, FrameTag::PassiveCFrame)?;
    Ok(relative.poses().iter().map(|g| g_cs.compose(g)).collect())
}

/// End-effector poses that place the new primary C-frame on `c_r_track`.
pub fn to_end_effector(c_r_track: &[Pose], g_e_br: &Pose, g_br_cr: &Pose) -> Vec<Pose> {
    let offset = g_e_br.compose(g_br_cr).inverse();
    c_r_track.iter().map(|g| g.compose(&offset)).collect()
}

/// Baseline transfer: world end-effector guiding poses anchored at the new
/// passive base.
pub fn baseline_transfer(guiding: &GuidingPoses, g_bs: &Pose) -> Result<GuidingPoses, TransferError> {
    expect_frame(guiding, FrameTag::PassiveBase)?;
    let poses = guiding.poses().iter().map(|g| g_bs.compose(g)).collect();
    Ok(guiding.with_poses(poses, FrameTag::World))
}

/// Intermediate and final results of a C-frame transfer.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferResult {
    pub relative: GuidingPoses,
    pub c_r_track: Vec<Pose>,
    /// World-frame end-effector guiding poses for the new instance.
    pub end_effector: GuidingPoses,
}

/// Full C-frame transfer from a demonstration to a new instance.
pub fn cframe_transfer(
    guiding: &GuidingPoses,
    demo_frames: &FrameAssignment,
    demo_grasp: &Pose,
    new_frames: &FrameAssignment,
    new_grasp: &Pose,
) -> Result<TransferResult, TransferError> {
    let relative = relativize(
        guiding,
        &demo_frames.passive.local,
        demo_grasp,
        &demo_frames.primary.local,
    )?;
    let c_r_track = instantiate(&relative, &new_frames.passive.world)?;
    let ee = to_end_effector(&c_r_track, new_grasp, &new_frames.primary.local);
    let end_effector = guiding.with_poses(ee, FrameTag::World);
    Ok(TransferResult {
        relative,
        c_r_track,
        end_effector,
    })
}

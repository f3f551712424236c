//! Screw-theoretic motion transfer for pouring tasks.
//!
//! This crate is `no_std` (with `alloc`) and holds all the numerics: pose
//! algebra and screw interpolation, serial-arm kinematics and planning,
//! demonstration segmentation, superellipse container geometry, frame
//! assignment, guiding-pose transfer, plan evaluation and the Monte-Carlo
//! benchmark core.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod arm;
pub mod bench;
pub mod evaluation;
pub mod frames;
pub mod geometry;
pub mod linalg;
pub mod math;
pub mod se3;
pub mod segmentation;
pub mod transfer;

pub use arm::{ArmModel, JointAxis, JointConfig, JointPath, PlanError, PlannerConfig};
pub use se3::{Pose, Rotation, ScrewParams, Twist, Vec3};

//! Rigid-body pose algebra: rotations, poses, unit dual quaternions and
//! constant-screw displacements with screw linear interpolation.

mod dual_quat;
mod pose;
mod rotation;
mod screw;
mod vector;

pub use dual_quat::DualQuat;
pub use pose::{pose_distance, Pose};
pub use rotation::{Quat, Rotation};
pub use screw::{
    log_to_screw, sclerp, screw_to_pose, ScrewParams, ScrewPath, Se3Error, Twist, ANGLE_EPSILON,
};
pub use vector::Vec3;

//! JSON file formats.
//!
//! Poses are `{"q": [w, x, y, z], "t": [x, y, z]}` with translations in
//! metres. Container dimensions are stored in centimetres and converted to
//! metres on load.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

use screwxfer_core::arm::{ArmModel, JointAxis, JointConfig, JointPath};
use screwxfer_core::frames::{Demonstration, MotionTransferFrame, Owner, TaskInstance};
use screwxfer_core::geometry::ContainerGeom;
use screwxfer_core::se3::{Pose, Quat, Rotation, Vec3};
use screwxfer_core::segmentation::{FrameTag, GuidingPoses};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },
}

fn invalid(what: &'static str, e: impl std::fmt::Display) -> InputError {
    InputError::Invalid {
        what,
        message: e.to_string(),
    }
}

/// Read and deserialize a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| InputError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoseJson {
    pub q: [f64; 4],
    pub t: [f64; 3],
}

impl From<&Pose> for PoseJson {
    fn from(p: &Pose) -> Self {
        PoseJson {
            q: p.rotation.quat().to_array(),
            t: p.translation.to_array(),
        }
    }
}

impl From<Pose> for PoseJson {
    fn from(p: Pose) -> Self {
        PoseJson::from(&p)
    }
}

impl PoseJson {
    pub fn to_pose(&self) -> Result<Pose, InputError> {
        let [w, x, y, z] = self.q;
        let rot = Rotation::from_quat(Quat::new(w, x, y, z))
            .ok_or_else(|| invalid("pose", format!("quaternion {:?} is not normalizable", self.q)))?;
        if self.t.iter().any(|v| !v.is_finite()) {
            return Err(invalid("pose", "non-finite translation"));
        }
        Ok(Pose::new(rot, Vec3::from_array(self.t)))
    }
}

pub fn poses_to_json(poses: &[Pose]) -> Vec<PoseJson> {
    poses.iter().map(PoseJson::from).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisJson {
    pub dir: [f64; 3],
    pub moment: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmJson {
    pub l: usize,
    pub home_pose: PoseJson,
    pub axes: Vec<AxisJson>,
    pub limits: Vec<[f64; 2]>,
}

impl From<&ArmModel> for ArmJson {
    fn from(arm: &ArmModel) -> Self {
        ArmJson {
            l: arm.dof(),
            home_pose: arm.home().into(),
            axes: arm
                .axes()
                .iter()
                .map(|a| AxisJson {
                    dir: a.direction.to_array(),
                    moment: a.moment.to_array(),
                })
                .collect(),
            limits: arm.limits().to_vec(),
        }
    }
}

impl ArmJson {
    pub fn to_arm(&self) -> Result<ArmModel, InputError> {
        if self.axes.len() != self.l {
            return Err(invalid(
                "arm",
                format!("l = {} but {} axes given", self.l, self.axes.len()),
            ));
        }
        let axes = self
            .axes
            .iter()
            .map(|a| JointAxis {
                direction: Vec3::from_array(a.dir),
                moment: Vec3::from_array(a.moment),
            })
            .collect();
        ArmModel::new(axes, self.home_pose.to_pose()?, self.limits.clone()).map_err(|e| invalid("arm", e))
    }
}

/// Container dimensions in centimetres (`n` is dimensionless).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainerJson {
    pub a: f64,
    pub b: f64,
    pub n: f64,
    pub h: f64,
}

impl From<&ContainerGeom> for ContainerJson {
    fn from(g: &ContainerGeom) -> Self {
        ContainerJson {
            a: g.a * 100.0,
            b: g.b * 100.0,
            n: g.n,
            h: g.h * 100.0,
        }
    }
}

impl ContainerJson {
    pub fn to_geom(&self) -> Result<ContainerGeom, InputError> {
        ContainerGeom::from_cm(self.a, self.b, self.n, self.h).map_err(|e| invalid("container", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskInstanceJson {
    pub primary_base: PoseJson,
    pub primary: ContainerJson,
    pub passive_base: PoseJson,
    pub passive: ContainerJson,
    /// Primary base pose in the end-effector frame.
    pub grasp: PoseJson,
    /// Optional arm configuration holding the primary at its base pose.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_joints: Option<Vec<f64>>,
}

impl From<&TaskInstance> for TaskInstanceJson {
    fn from(t: &TaskInstance) -> Self {
        TaskInstanceJson {
            primary_base: t.primary_base.into(),
            primary: (&t.primary).into(),
            passive_base: t.passive_base.into(),
            passive: (&t.passive).into(),
            grasp: t.grasp.into(),
            start_joints: None,
        }
    }
}

impl TaskInstanceJson {
    pub fn to_task(&self) -> Result<TaskInstance, InputError> {
        TaskInstance::new(
            self.primary_base.to_pose()?,
            self.primary.to_geom()?,
            self.passive_base.to_pose()?,
            self.passive.to_geom()?,
            self.grasp.to_pose()?,
        )
        .map_err(|e| invalid("task instance", e))
    }

    pub fn start(&self) -> Option<JointConfig> {
        self.start_joints.clone().map(JointConfig)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoJson {
    pub task_instance: TaskInstanceJson,
    pub joints: Vec<Vec<f64>>,
}

impl From<&Demonstration> for DemoJson {
    fn from(d: &Demonstration) -> Self {
        DemoJson {
            task_instance: (&d.task).into(),
            joints: d.joints.configs.iter().map(|q| q.0.clone()).collect(),
        }
    }
}

impl DemoJson {
    pub fn to_demo(&self) -> Result<Demonstration, InputError> {
        let joints = JointPath {
            configs: self.joints.iter().cloned().map(JointConfig).collect(),
        };
        Ok(Demonstration {
            task: self.task_instance.to_task()?,
            joints,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuidingPosesJson {
    pub frame: String,
    pub indices: Vec<usize>,
    pub poses: Vec<PoseJson>,
}

pub fn frame_tag_name(tag: FrameTag) -> String {
    tag.to_string()
}

impl From<&GuidingPoses> for GuidingPosesJson {
    fn from(g: &GuidingPoses) -> Self {
        GuidingPosesJson {
            frame: frame_tag_name(g.frame()),
            indices: g.indices().to_vec(),
            poses: poses_to_json(g.poses()),
        }
    }
}

impl GuidingPosesJson {
    pub fn to_guiding(&self) -> Result<GuidingPoses, InputError> {
        let frame = match self.frame.as_str() {
            "world" => FrameTag::World,
            "passive_base" => FrameTag::PassiveBase,
            "passive_cframe" => FrameTag::PassiveCFrame,
            other => return Err(invalid("guiding poses", format!("unknown frame tag {other:?}"))),
        };
        let poses = self
            .poses
            .iter()
            .map(PoseJson::to_pose)
            .collect::<Result<Vec<_>, _>>()?;
        GuidingPoses::new(poses, self.indices.clone(), frame).map_err(|e| invalid("guiding poses", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameJson {
    pub owner: String,
    pub local_pose: PoseJson,
    pub world_pose: PoseJson,
}

impl From<&MotionTransferFrame> for FrameJson {
    fn from(f: &MotionTransferFrame) -> Self {
        FrameJson {
            owner: match f.owner {
                Owner::Primary => "primary".into(),
                Owner::Passive => "passive".into(),
            },
            local_pose: f.local.into(),
            world_pose: f.world.into(),
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

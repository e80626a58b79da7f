//! Deterministic multi-UAV formation and moving-target tracking simulator.
//!
//! The crate models a team of camera-equipped UAVs that position themselves
//! around a moving ground target: each vehicle servos its camera view of the
//! target to the image center at a commanded standoff distance, while a
//! pairwise spacing rule spreads the team into a ring. The building blocks
//! are exposed as independent modules and composed by [`engine`]:
//!
//! - [`geometry`] — rotations, poses, twists, frame changes.
//! - [`camera`] — pinhole intrinsics, projection, normalized image features.
//! - [`control`] — visual-servo command and pairwise spacing input.
//! - [`dynamics`] — feature/target kinematics and explicit Euler stepping.
//! - [`estimation`] — target state estimators (oracle and unscented filter).
//! - [`metrics`] — normalized tracking errors and angular view coverage.
//! - [`config`] — TOML scenario description and validation.
//! - [`engine`] — synchronous round loop over a team of agents.
//! - [`report`] — CSV logs and SVG charts for finished runs.

pub mod camera;
pub mod config;
pub mod control;
pub mod dynamics;
pub mod engine;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod metrics;
pub mod report;

pub use camera::{CameraIntrinsics, FeatureState, PixelPoint};
pub use config::{ConfigError, ScenarioConfig};
pub use engine::{RunLog, World};
pub use error::SimError;
pub use geometry::{Pose, Rotation3, Twist};

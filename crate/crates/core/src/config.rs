//! Scenario configuration: schema, TOML loading, validation, and initial
//! placement.

use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::camera::CameraIntrinsics;
use crate::control::{ControlGains, SwarmSign};
use crate::dynamics::MobilityPattern;
use crate::estimation::EstimatorKind;
use crate::geometry::Pose;

/// Configuration loading/validation failure.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
    /// Syntactic failure; the inner error carries line/column and field.
    #[error("ParseError: {0}")]
    Parse(#[from] toml::de::Error),
    /// A well-formed file violating a schema invariant.
    #[error("ValidationError: {field}: {message}")]
    Validation { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field,
        message: message.into(),
    }
}

/// Where the controller's feature state comes from each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSource {
    /// Re-measure from geometry (plus optional pixel noise) every round.
    #[default]
    Measured,
    /// Integrate the feature rows of the system dynamics open-loop.
    Integrated,
}

/// An explicit initial pose: position plus Euler angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialPose {
    /// World position `[x, y, z]`, m.
    pub position: [f64; 3],
    /// Euler angles `[theta_x, theta_y, theta_z]`, radians.
    pub angles: [f64; 3],
}

/// Initial UAV placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum Placement {
    /// Evenly spaced on a circle of radius `d_q` around the target at the
    /// given height, each UAV yawed to face the target.
    AutoRing {
        #[serde(default = "default_height")]
        height: f64,
    },
    /// One pose per UAV, in agent-id order.
    Explicit { poses: Vec<InitialPose> },
}

impl Default for Placement {
    fn default() -> Self {
        Placement::AutoRing {
            height: default_height(),
        }
    }
}

fn default_height() -> f64 {
    50.0
}

/// Convergence-detection parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceParams {
    /// Number of trailing rounds that must all satisfy the tolerances.
    pub window: usize,
    /// Error-area tolerance.
    pub tol_e: f64,
    /// Relative speed-mismatch tolerance.
    pub tol_v: f64,
}

impl Default for ConvergenceParams {
    fn default() -> Self {
        Self {
            window: 10,
            tol_e: 1e-2,
            tol_v: 0.05,
        }
    }
}

/// A complete, validated description of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// Number of UAVs (required, >= 1).
    pub num_uavs: usize,
    /// Integration time step, s.
    pub dt: f64,
    /// Number of simulation rounds.
    pub max_rounds: u32,
    /// Controller gains and formation distances.
    pub gains: ControlGains,
    /// Camera model shared by all UAVs.
    pub intrinsics: CameraIntrinsics,
    /// Communication/neighbor range, m.
    pub gamma: f64,
    /// Target mobility model.
    pub mobility: MobilityPattern,
    /// Target estimator.
    pub estimator: EstimatorKind,
    /// Swarm interaction direction convention.
    pub swarm_sign: SwarmSign,
    /// Controller feature source.
    pub feature_source: FeatureSource,
    /// Initial UAV placement.
    pub placement: Placement,
    /// Initial target position, m.
    pub target_position: [f64; 3],
    /// Standard deviation of additive pixel measurement noise.
    pub measurement_noise_px: f64,
    /// RNG seed for all stochastic elements.
    pub seed: u64,
    /// Stop as soon as the convergence test passes (otherwise run all
    /// rounds and report the first converged round).
    pub stop_on_convergence: bool,
    /// Convergence-detection parameters.
    pub convergence: ConvergenceParams,
    /// Optional per-axis linear speed clamp, m/s.
    pub speed_limit: Option<f64>,
    /// Default output directory for logs and plots.
    pub output_dir: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            num_uavs: 0,
            dt: 0.1,
            max_rounds: 200,
            gains: ControlGains::default(),
            intrinsics: CameraIntrinsics::default(),
            gamma: 400.0,
            mobility: MobilityPattern::default(),
            estimator: EstimatorKind::default(),
            swarm_sign: SwarmSign::default(),
            feature_source: FeatureSource::default(),
            placement: Placement::default(),
            target_position: [0.0, 0.0, 0.0],
            measurement_noise_px: 0.0,
            seed: 0,
            stop_on_convergence: false,
            convergence: ConvergenceParams::default(),
            speed_limit: None,
            output_dir: None,
        }
    }
}

impl ScenarioConfig {
    /// Check every schema invariant, naming the offending field on failure.
    ///
    /// Bounds are written as `!(x > 0.0)` rather than `x <= 0.0` so that NaN
    /// values are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_uavs < 1 {
            return Err(invalid("num_uavs", "must be at least 1 (missing or zero)"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive and finite, got {}", self.dt)));
        }
        let g = &self.gains;
        if !(g.lambda > 0.0 && g.k > 0.0 && g.d_u > 0.0 && g.d_q > 0.0) {
            return Err(invalid("gains", "lambda, k, d_u, d_q must all be positive"));
        }
        if g.eps_damp < 0.0 {
            return Err(invalid("gains.eps_damp", "must be non-negative"));
        }
        let c = &self.intrinsics;
        if !(c.f_x > 0.0 && c.f_y > 0.0) {
            return Err(invalid("intrinsics", "focal lengths must be positive"));
        }
        if !(c.c_u > 0.0 && c.c_u < c.width && c.c_v > 0.0 && c.c_v < c.height) {
            return Err(invalid("intrinsics", "principal point must lie inside the image"));
        }
        if !(c.fov_az > 0.0 && c.fov_az <= 180.0) {
            return Err(invalid("intrinsics.fov_az", "must lie in (0, 180]"));
        }
        if !(self.gamma > 0.0) {
            return Err(invalid("gamma", "neighbor range must be positive"));
        }
        match &self.mobility {
            MobilityPattern::ConstantVelocity { velocity } if velocity[2] != 0.0 => {
                return Err(invalid("mobility.velocity", "target must stay on the ground (z = 0)"));
            }
            MobilityPattern::Waypoints { points } => {
                if points.iter().any(|w| w.position[2] != 0.0) {
                    return Err(invalid("mobility.points", "waypoints must stay on the ground (z = 0)"));
                }
                if points.windows(2).any(|p| p[1].time <= p[0].time) {
                    return Err(invalid("mobility.points", "waypoint times must be strictly increasing"));
                }
            }
            _ => {}
        }
        if let EstimatorKind::Ukf { q, r, .. } = self.estimator {
            if !(q > 0.0 && r > 0.0) {
                return Err(invalid("estimator", "q and r must be positive"));
            }
        }
        if let Placement::Explicit { poses } = &self.placement {
            if poses.len() != self.num_uavs {
                return Err(invalid(
                    "placement.poses",
                    format!("{} poses given for {} UAVs", poses.len(), self.num_uavs),
                ));
            }
        }
        if self.target_position[2] != 0.0 {
            return Err(invalid("target_position", "target must start on the ground (z = 0)"));
        }
        if self.measurement_noise_px < 0.0 {
            return Err(invalid("measurement_noise_px", "must be non-negative"));
        }
        let cv = &self.convergence;
        if cv.window < 1 {
            return Err(invalid("convergence.window", "must be at least 1"));
        }
        if !(cv.tol_e > 0.0 && cv.tol_v > 0.0) {
            return Err(invalid("convergence", "tolerances must be positive"));
        }
        if let Some(limit) = self.speed_limit {
            if !(limit > 0.0) {
                return Err(invalid("speed_limit", "must be positive when set"));
            }
        }
        Ok(())
    }

    /// Initial UAV poses in agent-id order.
    pub fn initial_poses(&self) -> Vec<Pose> {
        match &self.placement {
            Placement::Explicit { poses } => poses
                .iter()
                .map(|p| Pose::new(Vector3::from(p.position), Vector3::from(p.angles)))
                .collect(),
            Placement::AutoRing { height } => {
                let target = Vector3::from(self.target_position);
                let radius = self.gains.d_q;
                (0..self.num_uavs)
                    .map(|i| {
                        let az = 2.0 * std::f64::consts::PI * i as f64 / self.num_uavs as f64;
                        let position = Vector3::new(
                            target.x + radius * az.cos(),
                            target.y + radius * az.sin(),
                            *height,
                        );
                        // Face the target: heading = azimuth + pi.
                        let yaw = az + std::f64::consts::PI;
                        Pose::new(position, Vector3::new(0.0, 0.0, yaw))
                    })
                    .collect()
            }
        }
    }

    /// Parse and validate a scenario from TOML text.
    pub fn from_toml_str(text: &str) -> Result<ScenarioConfig, ConfigError> {
        let config: ScenarioConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Load and validate a scenario from a TOML file.
    pub fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Serialize back to canonical TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// Load and validate a scenario from a TOML file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    ScenarioConfig::load(path)
}

//! Python bindings for the simulator.
//!
//! The module mirrors the Rust surface a script needs: load or build a
//! scenario, run it, read the per-round metrics, and write the CSV/plot
//! artifacts. The math helpers used most often from notebooks (rotations,
//! the interaction matrix, view coverage) are exposed as free functions.

use std::path::Path;

use nalgebra::Vector3;
use pyo3::exceptions::{PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use skyring_core::camera::FeatureState;
use skyring_core::config::{ConfigError, Placement, ScenarioConfig};
use skyring_core::error::SimError;
use skyring_core::{control, engine, geometry, metrics, report};

fn config_err(e: ConfigError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sim_err(e: SimError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A validated simulation scenario.
#[pyclass(module = "skyring", skip_from_py_object)]
#[derive(Clone)]
struct Scenario {
    inner: ScenarioConfig,
}

#[pymethods]
impl Scenario {
    /// Build a default scenario: `num_uavs` vehicles on the standoff ring
    /// around a target at the origin, 200 rounds.
    #[new]
    fn new(num_uavs: usize) -> PyResult<Self> {
        let inner = ScenarioConfig {
            num_uavs,
            placement: Placement::AutoRing { height: 50.0 },
            ..ScenarioConfig::default()
        };
        inner.validate().map_err(config_err)?;
        Ok(Self { inner })
    }

    /// Load and validate a scenario from a TOML file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        ScenarioConfig::load(Path::new(path))
            .map(|inner| Self { inner })
            .map_err(config_err)
    }

    /// Parse and validate a scenario from TOML text.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        ScenarioConfig::from_toml_str(text)
            .map(|inner| Self { inner })
            .map_err(config_err)
    }

    /// Serialize back to canonical TOML.
    fn to_toml(&self) -> String {
        self.inner.to_toml()
    }

    #[getter]
    fn num_uavs(&self) -> usize {
        self.inner.num_uavs
    }

    #[getter]
    fn max_rounds(&self) -> u32 {
        self.inner.max_rounds
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.inner.dt
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.inner.seed = seed;
    }

    #[setter]
    fn set_max_rounds(&mut self, max_rounds: u32) {
        self.inner.max_rounds = max_rounds;
    }

    /// Initial UAV positions, resolved from the placement rule.
    fn initial_positions(&self) -> Vec<(f64, f64, f64)> {
        self.inner
            .initial_poses()
            .iter()
            .map(|p| (p.position.x, p.position.y, p.position.z))
            .collect()
    }

    /// Simulate the scenario and return the full run log.
    fn run(&self) -> PyResult<RunResult> {
        engine::run(&self.inner)
            .map(|log| RunResult { log, intrinsics_center: (self.inner.intrinsics.c_u, self.inner.intrinsics.c_v) })
            .map_err(sim_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(num_uavs={}, max_rounds={}, dt={}, seed={})",
            self.inner.num_uavs, self.inner.max_rounds, self.inner.dt, self.inner.seed
        )
    }
}

/// The log of one finished run.
#[pyclass(module = "skyring")]
struct RunResult {
    log: engine::RunLog,
    intrinsics_center: (f64, f64),
}

#[pymethods]
impl RunResult {
    /// Number of logged rounds, including round 0.
    #[getter]
    fn rounds(&self) -> usize {
        self.log.records.len()
    }

    /// First round at which the convergence test passed, or `None`.
    #[getter]
    fn converged_round(&self) -> Option<u32> {
        self.log.converged_round
    }

    /// Final-round (total, effective) view coverage in degrees.
    #[getter]
    fn final_view(&self) -> (f64, f64) {
        let last = self.log.records.last().expect("round 0 is always logged");
        (last.total_view, last.effective_view)
    }

    /// Final UAV positions as a list of (x, y, z).
    #[getter]
    fn final_positions(&self) -> Vec<(f64, f64, f64)> {
        self.log
            .final_world
            .agents
            .iter()
            .map(|a| (a.pose.position.x, a.pose.position.y, a.pose.position.z))
            .collect()
    }

    /// Per-round normalized error area of one UAV.
    fn error_area(&self, uav: usize) -> PyResult<Vec<f64>> {
        self.per_uav(uav, |u| u.e_a)
    }

    /// Per-round speed of one UAV, m/s.
    fn speed(&self, uav: usize) -> PyResult<Vec<f64>> {
        self.per_uav(uav, |u| u.speed)
    }

    /// Per-round target speed, m/s.
    fn target_speed(&self) -> Vec<f64> {
        self.log.records.iter().map(|r| r.target_speed).collect()
    }

    /// Final-round pixel offset of the target from the image center for
    /// every UAV, as (du, dv).
    fn final_pixel_offsets(&self) -> Vec<(f64, f64)> {
        let round = self.log.final_world.round;
        let (c_u, c_v) = self.intrinsics_center;
        self.log
            .trajectories
            .iter()
            .filter(|t| t.round == round)
            .map(|t| (t.u - c_u, t.v - c_v))
            .collect()
    }

    /// Write `metrics.csv` and `trajectories.csv` into a directory; returns
    /// the created paths.
    fn write_csv(&self, output_dir: &str) -> PyResult<Vec<String>> {
        report::emit_csv(&self.log, Path::new(output_dir))
            .map(|paths| paths.iter().map(|p| p.display().to_string()).collect())
            .map_err(sim_err)
    }

    /// Write the three run plots into a directory; returns the created paths.
    fn write_plots(&self, output_dir: &str) -> PyResult<Vec<String>> {
        report::emit_plots(&self.log, Path::new(output_dir))
            .map(|paths| paths.iter().map(|p| p.display().to_string()).collect())
            .map_err(sim_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "RunResult(rounds={}, converged_round={:?})",
            self.log.records.len(),
            self.log.converged_round
        )
    }
}

impl RunResult {
    fn per_uav(&self, uav: usize, f: impl Fn(&metrics::UavRoundMetrics) -> f64) -> PyResult<Vec<f64>> {
        let count = self.log.final_world.agents.len();
        if uav >= count {
            return Err(PyIndexError::new_err(format!(
                "UAV index {uav} out of range for a {count}-UAV run"
            )));
        }
        Ok(self.log.records.iter().map(|r| f(&r.uavs[uav])).collect())
    }
}

/// World-to-vehicle rotation matrix for rotation angles (theta_x, theta_y,
/// theta_z), as a nested 3x3 list.
#[pyfunction]
fn rotation_matrix(theta_x: f64, theta_y: f64, theta_z: f64) -> Vec<Vec<f64>> {
    let m = geometry::Rotation3::from_angles(theta_x, theta_y, theta_z);
    m.matrix()
        .row_iter()
        .map(|row| row.iter().copied().collect())
        .collect()
}

/// Interaction matrix of the feature state (x1, x2, x3), as a nested 3x6
/// list.
#[pyfunction]
fn feature_jacobian(x1: f64, x2: f64, x3: f64) -> Vec<Vec<f64>> {
    let l = control::feature_jacobian(&FeatureState::new(x1, x2, x3));
    l.matrix()
        .row_iter()
        .map(|row| row.iter().copied().collect())
        .collect()
}

/// Total and effective azimuthal view coverage (degrees) of a target seen
/// by UAVs at the given positions with the given horizontal FOV.
#[pyfunction]
fn view_coverage(
    positions: Vec<(f64, f64, f64)>,
    target: (f64, f64, f64),
    fov_az: f64,
) -> PyResult<(f64, f64)> {
    let positions: Vec<Vector3<f64>> = positions
        .iter()
        .map(|p| Vector3::new(p.0, p.1, p.2))
        .collect();
    metrics::view_coverage(&positions, &Vector3::new(target.0, target.1, target.2), fov_az)
        .map_err(sim_err)
}

/// Pairwise spacing velocity for an agent given its neighbors' positions.
#[pyfunction]
fn swarm_input(
    position: (f64, f64, f64),
    neighbors: Vec<(f64, f64, f64)>,
) -> PyResult<(f64, f64, f64)> {
    let r_i = Vector3::new(position.0, position.1, position.2);
    let neighbors: Vec<Vector3<f64>> = neighbors
        .iter()
        .map(|p| Vector3::new(p.0, p.1, p.2))
        .collect();
    control::swarm_input(&r_i, &neighbors, &control::ControlGains::default())
        .map(|u| (u.x, u.y, u.z))
        .map_err(sim_err)
}

#[pymodule]
fn skyring(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_class::<RunResult>()?;
    m.add_function(wrap_pyfunction!(rotation_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(feature_jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(view_coverage, m)?)?;
    m.add_function(wrap_pyfunction!(swarm_input, m)?)?;
    Ok(())
}

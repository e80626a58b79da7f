//! Per-UAV system state, its continuous-time derivative, explicit-Euler
//! integration, and target mobility models.
//!
//! The 9-dimensional state stacks the camera feature `[x1, x2, x3]` with the
//! target's world-frame position and velocity. The feature rows evolve with
//! the camera twist expressed in the optical frame; the target rows follow a
//! constant-velocity model (the estimator's process model), while ground
//! truth is driven separately by a [`MobilityPattern`].

use nalgebra::{SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::camera::FeatureState;
use crate::error::SimError;
use crate::geometry::Twist;

/// The 9-dimensional per-UAV system state
/// `[x1, x2, x3, x_q, y_q, z_q, v_qx, v_qy, v_qz]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemState {
    /// Camera feature `[X/Z, Y/Z, 1/Z]` of the target.
    pub feature: FeatureState,
    /// Target position in the world frame, m.
    pub target_position: Vector3<f64>,
    /// Target velocity in the world frame, m/s.
    pub target_velocity: Vector3<f64>,
}

impl SystemState {
    pub fn new(
        feature: FeatureState,
        target_position: Vector3<f64>,
        target_velocity: Vector3<f64>,
    ) -> Self {
        Self {
            feature,
            target_position,
            target_velocity,
        }
    }

    /// Stack into the flat state vector.
    pub fn as_vector(&self) -> SVector<f64, 9> {
        let mut x = SVector::<f64, 9>::zeros();
        x.fixed_rows_mut::<3>(0).copy_from(&self.feature.as_vector());
        x.fixed_rows_mut::<3>(3).copy_from(&self.target_position);
        x.fixed_rows_mut::<3>(6).copy_from(&self.target_velocity);
        x
    }

    pub fn is_finite(&self) -> bool {
        self.as_vector().iter().all(|v| v.is_finite())
    }
}

/// Ground-truth kinematic state of the (non-rotating) target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetState {
    /// Position in the world frame, m.
    pub position: Vector3<f64>,
    /// Linear velocity in the world frame, m/s. The angular velocity is
    /// identically zero.
    pub velocity: Vector3<f64>,
}

impl TargetState {
    pub fn new(position: Vector3<f64>, velocity: Vector3<f64>) -> Self {
        Self { position, velocity }
    }

    pub fn at_rest(position: Vector3<f64>) -> Self {
        Self {
            position,
            velocity: Vector3::zeros(),
        }
    }
}

/// A single timed waypoint of a piecewise-linear target schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    /// Arrival time, s.
    pub time: f64,
    /// Ground position at `time`, m (z must stay 0).
    pub position: [f64; 3],
}

/// Built-in target mobility models. All keep the target on the ground
/// (z = 0).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MobilityPattern {
    /// `v_q(t) = [|t sin t|, |t cos t|, 0]` — speed grows linearly with time.
    #[default]
    TrigAccelerating,
    /// Fixed velocity.
    ConstantVelocity { velocity: [f64; 3] },
    /// Piecewise-linear motion through timed waypoints; at rest before the
    /// first and after the last.
    Waypoints { points: Vec<Waypoint> },
    /// Target never moves.
    Stationary,
}

/// Time derivative of the system state under camera twist `cmd` (expressed
/// in the optical frame):
///
/// ```text
/// dx1 = v_qx*x3 - v_qz*x1*x3 + zeta1 + eta1
/// dx2 = v_qy*x3 - v_qz*x2*x3 + zeta2 + eta2
/// dx3 = -v_qz*x3^2 + v_cz*x3^2 - (w_cy*x1 - w_cx*x2)*x3
/// rows 4-6 = v_q,   rows 7-9 = 0   (constant-velocity target model)
/// ```
///
/// with `zeta1 = w_cz*x2 - w_cy - w_cy*x1^2 + w_cx*x1*x2`,
/// `zeta2 = -w_cz*x1 + w_cx + w_cx*x2^2 - w_cy*x1*x2`,
/// `eta1 = (v_cz*x1 - v_cx)*x3`, `eta2 = (v_cz*x2 - v_cy)*x3`.
///
/// # Errors
/// [`SimError::NonFiniteState`] if any output row is non-finite.
pub fn state_derivative(state: &SystemState, cmd: &Twist) -> Result<SVector<f64, 9>, SimError> {
    let FeatureState { x1, x2, x3 } = state.feature;
    let (v_cx, v_cy, v_cz) = (cmd.linear.x, cmd.linear.y, cmd.linear.z);
    let (w_cx, w_cy, w_cz) = (cmd.angular.x, cmd.angular.y, cmd.angular.z);
    let v_q = state.target_velocity;

    let zeta1 = w_cz * x2 - w_cy - w_cy * x1 * x1 + w_cx * x1 * x2;
    let zeta2 = -w_cz * x1 + w_cx + w_cx * x2 * x2 - w_cy * x1 * x2;
    let eta1 = (v_cz * x1 - v_cx) * x3;
    let eta2 = (v_cz * x2 - v_cy) * x3;

    let mut rates = SVector::<f64, 9>::zeros();
    rates[0] = v_q.x * x3 - v_q.z * x1 * x3 + zeta1 + eta1;
    rates[1] = v_q.y * x3 - v_q.z * x2 * x3 + zeta2 + eta2;
    rates[2] = -v_q.z * x3 * x3 + v_cz * x3 * x3 - (w_cy * x1 - w_cx * x2) * x3;
    rates.fixed_rows_mut::<3>(3).copy_from(&v_q);

    if rates.iter().any(|r| !r.is_finite()) {
        return Err(SimError::NonFiniteState);
    }
    Ok(rates)
}

/// One explicit-Euler step: `state + dt * rates`.
///
/// # Errors
/// [`SimError::DepthCollapse`] when the updated inverse depth is no longer
/// positive (target crossed the camera plane);
/// [`SimError::NonFiniteState`] when any component leaves the finite range.
pub fn integrate(
    state: &SystemState,
    rates: &SVector<f64, 9>,
    dt: f64,
) -> Result<SystemState, SimError> {
    let x = state.as_vector() + rates * dt;
    let next = SystemState::new(
        FeatureState::new(x[0], x[1], x[2]),
        Vector3::new(x[3], x[4], x[5]),
        Vector3::new(x[6], x[7], x[8]),
    );
    if !next.is_finite() {
        return Err(SimError::NonFiniteState);
    }
    if next.feature.x3 <= 0.0 {
        return Err(SimError::DepthCollapse { x3: next.feature.x3 });
    }
    Ok(next)
}

/// Target velocity at time `t` under the given mobility pattern.
pub fn target_velocity(t: f64, pattern: &MobilityPattern) -> Vector3<f64> {
    match pattern {
        MobilityPattern::TrigAccelerating => {
            Vector3::new((t * t.sin()).abs(), (t * t.cos()).abs(), 0.0)
        }
        MobilityPattern::ConstantVelocity { velocity } => Vector3::from(*velocity),
        MobilityPattern::Waypoints { points } => {
            for pair in points.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                if t >= a.time && t < b.time && b.time > a.time {
                    let dt = b.time - a.time;
                    return (Vector3::from(b.position) - Vector3::from(a.position)) / dt;
                }
            }
            Vector3::zeros()
        }
        MobilityPattern::Stationary => Vector3::zeros(),
    }
}

/// Advance the ground-truth target one step:
/// `p <- p + dt * v(t)`, then `v <- v(t + dt)`.
pub fn advance_target(
    target: &TargetState,
    t: f64,
    dt: f64,
    pattern: &MobilityPattern,
) -> TargetState {
    TargetState {
        position: target.position + target_velocity(t, pattern) * dt,
        velocity: target_velocity(t + dt, pattern),
    }
}

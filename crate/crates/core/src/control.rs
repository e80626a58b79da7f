//! Combined IBVS + predator-prey swarm controller producing each UAV's
//! commanded spatial velocity.
//!
//! The image-based servo drives the normalized feature error `e = s - s*`
//! to zero through the damped pseudo-inverse of the interaction matrix,
//! while the swarm term spaces the UAVs at the desired inter-UAV distance.

use nalgebra::{Matrix3, Matrix3x6, Matrix6x3, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::camera::FeatureState;
use crate::error::SimError;
use crate::geometry::{Twist, EPS_DIST};

/// Controller gains and formation distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlGains {
    /// Servo rate, 1/s.
    pub lambda: f64,
    /// Swarm interaction scale, m^2/s.
    pub k: f64,
    /// Desired inter-UAV distance, m.
    pub d_u: f64,
    /// Desired camera-target distance, m.
    pub d_q: f64,
    /// Pseudo-inverse damping; 0 gives the exact Moore-Penrose inverse on
    /// full-row-rank inputs.
    pub eps_damp: f64,
}

impl Default for ControlGains {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            k: 10.0,
            d_u: 200.0,
            d_q: 100.0,
            eps_damp: 1e-6,
        }
    }
}

/// Direction convention for the pairwise swarm term.
///
/// As printed, the interaction `k((r_j-r_i)/||r_j-r_i||^2 - (r_j-r_i)/d_U^2)`
/// is attractive below `d_U` and repulsive above it, which collapses the
/// formation instead of spacing it. `Corrected` (the default) flips the
/// direction so agents repel below `d_U` and attract above it, preserving
/// the equilibrium at exactly `d_U`; `Literal` keeps the printed form for
/// side-by-side comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwarmSign {
    #[default]
    Corrected,
    Literal,
}

/// The 3x6 interaction (feature Jacobian) matrix relating camera spatial
/// velocity to the feature-state rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionMatrix {
    m: Matrix3x6<f64>,
}

impl InteractionMatrix {
    pub fn matrix(&self) -> &Matrix3x6<f64> {
        &self.m
    }
}

/// Build the interaction matrix at feature state `s`:
///
/// ```text
/// [ -x3    0   x1*x3   x1*x2    -(x1^2+1)   x2 ]
/// [  0   -x3   x2*x3   x2^2+1   -x1*x2     -x1 ]
/// [  0     0   x3^2    x2*x3    -x1*x3      0  ]
/// ```
pub fn feature_jacobian(s: &FeatureState) -> InteractionMatrix {
    let (x1, x2, x3) = (s.x1, s.x2, s.x3);
    #[rustfmt::skip]
    let m = Matrix3x6::new(
        -x3, 0.0, x1 * x3, x1 * x2,        -(x1 * x1 + 1.0), x2,
        0.0, -x3, x2 * x3, x2 * x2 + 1.0,  -x1 * x2,         -x1,
        0.0, 0.0, x3 * x3, x2 * x3,        -x1 * x3,         0.0,
    );
    InteractionMatrix { m }
}

/// The desired feature state `s* = [0, 0, 1/d_q]`: target centered in the
/// image at the desired standoff distance.
pub fn desired_state(gains: &ControlGains) -> FeatureState {
    FeatureState::new(0.0, 0.0, 1.0 / gains.d_q)
}

/// Feature error `e = s - s*`.
pub fn state_error(s: &FeatureState, s_star: &FeatureState) -> Vector3<f64> {
    s.as_vector() - s_star.as_vector()
}

/// Damped right pseudo-inverse `L^T (L L^T + eps*I)^-1` (6x3).
///
/// With `eps_damp = 0` and full row rank this is the exact Moore-Penrose
/// pseudo-inverse.
///
/// # Errors
/// [`SimError::SingularInteraction`] when `L L^T + eps*I` is not invertible.
pub fn damped_pseudo_inverse(
    l: &InteractionMatrix,
    eps_damp: f64,
) -> Result<Matrix6x3<f64>, SimError> {
    let llt: Matrix3<f64> = l.m * l.m.transpose() + Matrix3::identity() * eps_damp;
    let inv = llt
        .try_inverse()
        .ok_or(SimError::SingularInteraction { eps_damp })?;
    Ok(l.m.transpose() * inv)
}

/// Pairwise swarm velocity contributed by a single neighbor, under the
/// given sign convention. `d` is `r_j - r_i` and `r` its norm.
fn swarm_pair_term(d: &Vector3<f64>, r: f64, gains: &ControlGains, sign: SwarmSign) -> Vector3<f64> {
    let printed = d * (gains.k / (r * r)) - d * (gains.k / (gains.d_u * gains.d_u));
    match sign {
        SwarmSign::Literal => printed,
        SwarmSign::Corrected => -printed,
    }
}

/// Swarm interaction velocity for an agent at `r_i` with the given neighbor
/// positions, using the default corrected sign (repulsive below `d_u`).
///
/// # Errors
/// [`SimError::CoincidentAgents`] when a neighbor lies within [`EPS_DIST`]
/// of `r_i`.
pub fn swarm_input(
    r_i: &Vector3<f64>,
    neighbors: &[Vector3<f64>],
    gains: &ControlGains,
) -> Result<Vector3<f64>, SimError> {
    swarm_input_signed(r_i, neighbors, gains, SwarmSign::Corrected)
}

/// [`swarm_input`] with an explicit sign convention.
pub fn swarm_input_signed(
    r_i: &Vector3<f64>,
    neighbors: &[Vector3<f64>],
    gains: &ControlGains,
    sign: SwarmSign,
) -> Result<Vector3<f64>, SimError> {
    let mut u_s = Vector3::zeros();
    for r_j in neighbors {
        let d = r_j - r_i;
        let r = d.norm();
        if r <= EPS_DIST {
            return Err(SimError::CoincidentAgents {
                distance: r,
                threshold: EPS_DIST,
            });
        }
        u_s += swarm_pair_term(&d, r, gains, sign);
    }
    Ok(u_s)
}

/// Final spatial-velocity command `V_c = -lambda * L^+ * e + V_q + u_s`.
///
/// The swarm term `u_s` enters the linear-velocity block only; the angular
/// block receives the servo and feed-forward parts.
///
/// # Errors
/// [`SimError::SingularInteraction`] propagated from the pseudo-inverse.
pub fn control_command(
    e: &Vector3<f64>,
    l: &InteractionMatrix,
    v_q_est: &Twist,
    u_s: &Vector3<f64>,
    gains: &ControlGains,
) -> Result<Twist, SimError> {
    let l_pinv = damped_pseudo_inverse(l, gains.eps_damp)?;
    let servo: Vector6<f64> = l_pinv * (-gains.lambda * e);
    let linear = Vector3::new(servo[0], servo[1], servo[2]) + v_q_est.linear + u_s;
    let angular = Vector3::new(servo[3], servo[4], servo[5]) + v_q_est.angular;
    Ok(Twist::new(linear, angular))
}

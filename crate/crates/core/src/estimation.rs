//! Target position/velocity estimation: ground-truth passthrough or an
//! unscented Kalman filter over a constant-velocity process model.
//!
//! The filter state is the 6-vector `[p_q, v_q]`. The process model matches
//! the zero-acceleration rows of the system dynamics; the measurement is the
//! world-frame target position each UAV recovers from its own feature
//! observation and pose.

use nalgebra::{SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::dynamics::TargetState;
use crate::error::SimError;

const N: usize = 6;
/// Number of sigma points: 2N + 1.
const NSIG: usize = 2 * N + 1;

type StateVec = SVector<f64, 6>;
type StateMat = SMatrix<f64, 6, 6>;

/// Gaussian belief over the target's position and velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Belief {
    /// Mean `[p_q, v_q]`.
    pub mean: StateVec,
    /// Covariance, symmetric positive-definite.
    pub covariance: StateMat,
}

impl Belief {
    /// Standard initial belief: position from the first measurement, zero
    /// velocity, diagonal covariance of 100 on every component.
    pub fn from_first_measurement(z: &Vector3<f64>) -> Self {
        let mut mean = StateVec::zeros();
        mean.fixed_rows_mut::<3>(0).copy_from(z);
        Self {
            mean,
            covariance: StateMat::identity() * 100.0,
        }
    }

    pub fn position(&self) -> Vector3<f64> {
        self.mean.fixed_rows::<3>(0).into()
    }

    pub fn velocity(&self) -> Vector3<f64> {
        self.mean.fixed_rows::<3>(3).into()
    }

    /// Whether the covariance is symmetric (1e-9) with strictly positive
    /// eigenvalues.
    pub fn is_valid(&self) -> bool {
        let p = &self.covariance;
        if (p - p.transpose()).norm() > 1e-9 {
            return false;
        }
        p.symmetric_eigen().eigenvalues.iter().all(|&ev| ev > 0.0)
    }
}

/// Estimator selection and parameters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorKind {
    /// Ground-truth passthrough; the simulation becomes independent of all
    /// filter parameters.
    #[default]
    Oracle,
    /// Unscented Kalman filter.
    Ukf {
        /// Process noise intensity on the velocity block, (m/s^2)^2.
        #[serde(default = "default_q")]
        q: f64,
        /// Measurement noise variance per position axis, m^2.
        #[serde(default = "default_r")]
        r: f64,
        /// Sigma-point spread scaling.
        #[serde(default = "default_alpha")]
        alpha: f64,
        /// Prior-distribution parameter (2 is optimal for Gaussians).
        #[serde(default = "default_beta")]
        beta: f64,
        /// Secondary scaling parameter.
        #[serde(default = "default_kappa")]
        kappa: f64,
    },
}

fn default_q() -> f64 {
    0.5
}
fn default_r() -> f64 {
    1.0
}
fn default_alpha() -> f64 {
    1e-3
}
fn default_beta() -> f64 {
    2.0
}
fn default_kappa() -> f64 {
    0.0
}

impl EstimatorKind {
    pub fn ukf_defaults() -> Self {
        EstimatorKind::Ukf {
            q: default_q(),
            r: default_r(),
            alpha: default_alpha(),
            beta: default_beta(),
            kappa: default_kappa(),
        }
    }
}

/// Sigma points with their mean and covariance weights.
struct SigmaPoints {
    points: [StateVec; NSIG],
    w_mean: [f64; NSIG],
    w_cov: [f64; NSIG],
}

fn sigma_points(belief: &Belief, alpha: f64, beta: f64, kappa: f64) -> Result<SigmaPoints, SimError> {
    let n = N as f64;
    let lambda = alpha * alpha * (n + kappa) - n;
    let scale = n + lambda;

    let chol = (belief.covariance * scale)
        .cholesky()
        .ok_or(SimError::CovarianceNotPD)?;
    let sqrt = chol.l();

    let mut points = [belief.mean; NSIG];
    for i in 0..N {
        let col: StateVec = sqrt.column(i).into();
        points[1 + i] = belief.mean + col;
        points[1 + N + i] = belief.mean - col;
    }

    let w_i = 1.0 / (2.0 * scale);
    let mut w_mean = [w_i; NSIG];
    let mut w_cov = [w_i; NSIG];
    w_mean[0] = lambda / scale;
    w_cov[0] = lambda / scale + 1.0 - alpha * alpha + beta;

    Ok(SigmaPoints { points, w_mean, w_cov })
}

fn symmetrize(p: &StateMat) -> StateMat {
    (p + p.transpose()) * 0.5
}

/// Constant-velocity transition over `dt`: `p <- p + dt*v`, `v <- v`.
fn process(x: &StateVec, dt: f64) -> StateVec {
    let mut out = *x;
    let shift: Vector3<f64> = x.fixed_rows::<3>(3).into();
    let moved: Vector3<f64> = Vector3::from(x.fixed_rows::<3>(0)) + shift * dt;
    out.fixed_rows_mut::<3>(0).copy_from(&moved);
    out
}

fn process_noise(q: f64, dt: f64) -> StateMat {
    let mut qm = StateMat::zeros();
    for i in 3..6 {
        qm[(i, i)] = q * dt;
    }
    qm
}

/// UKF time update: propagate sigma points through the constant-velocity
/// process and inflate the velocity block by `q*dt`.
///
/// # Errors
/// [`SimError::CovarianceNotPD`] if the sigma-point square root fails.
pub fn predict(
    belief: &Belief,
    dt: f64,
    q: f64,
    alpha: f64,
    beta: f64,
    kappa: f64,
) -> Result<Belief, SimError> {
    let sp = sigma_points(belief, alpha, beta, kappa)?;
    let propagated: Vec<StateVec> = sp.points.iter().map(|x| process(x, dt)).collect();

    let mut mean = StateVec::zeros();
    for (w, x) in sp.w_mean.iter().zip(&propagated) {
        mean += x * *w;
    }
    let mut cov = process_noise(q, dt);
    for (w, x) in sp.w_cov.iter().zip(&propagated) {
        let d = x - mean;
        cov += d * d.transpose() * *w;
    }
    Ok(Belief {
        mean,
        covariance: symmetrize(&cov),
    })
}

/// UKF measurement update with a direct position observation `z` and
/// isotropic measurement noise `r` per axis.
///
/// # Errors
/// [`SimError::CovarianceNotPD`] if the sigma-point square root or the
/// innovation-covariance inverse fails.
pub fn update(
    belief: &Belief,
    z: &Vector3<f64>,
    r: f64,
    alpha: f64,
    beta: f64,
    kappa: f64,
) -> Result<Belief, SimError> {
    let sp = sigma_points(belief, alpha, beta, kappa)?;
    let observed: Vec<Vector3<f64>> = sp
        .points
        .iter()
        .map(|x| Vector3::from(x.fixed_rows::<3>(0)))
        .collect();

    let mut z_mean = Vector3::zeros();
    for (w, y) in sp.w_mean.iter().zip(&observed) {
        z_mean += y * *w;
    }

    let mut s = SMatrix::<f64, 3, 3>::identity() * r;
    let mut cross = SMatrix::<f64, 6, 3>::zeros();
    for ((x, y), w) in sp.points.iter().zip(&observed).zip(&sp.w_cov) {
        let dz = y - z_mean;
        let dx = x - belief.mean;
        s += dz * dz.transpose() * *w;
        cross += dx * dz.transpose() * *w;
    }

    let s_inv = s.try_inverse().ok_or(SimError::CovarianceNotPD)?;
    let gain = cross * s_inv;
    let mean = belief.mean + gain * (z - z_mean);
    let covariance = symmetrize(&(belief.covariance - gain * s * gain.transpose()));
    Ok(Belief { mean, covariance })
}

/// One full estimation round.
///
/// `Oracle` passes the ground truth through untouched; `Ukf` runs a predict
/// step followed by a measurement update when a measurement is available
/// (coasting on prediction alone during occlusions). A missing prior is
/// initialized from the first measurement.
///
/// # Errors
/// [`SimError::EstimatorUninitialized`] when a UKF has neither a prior nor a
/// measurement; [`SimError::CovarianceNotPD`] propagated from the filter.
pub fn estimate(
    kind: &EstimatorKind,
    truth: &TargetState,
    measurement: Option<&Vector3<f64>>,
    dt: f64,
    prior: Option<&Belief>,
) -> Result<(Vector3<f64>, Vector3<f64>, Belief), SimError> {
    match kind {
        EstimatorKind::Oracle => {
            let mut mean = StateVec::zeros();
            mean.fixed_rows_mut::<3>(0).copy_from(&truth.position);
            mean.fixed_rows_mut::<3>(3).copy_from(&truth.velocity);
            let covariance = prior.map_or_else(|| StateMat::identity() * 1e-9, |b| b.covariance);
            Ok((truth.position, truth.velocity, Belief { mean, covariance }))
        }
        EstimatorKind::Ukf { q, r, alpha, beta, kappa } => {
            let belief = match (prior, measurement) {
                (Some(prior), _) => {
                    let predicted = predict(prior, dt, *q, *alpha, *beta, *kappa)?;
                    match measurement {
                        Some(z) => update(&predicted, z, *r, *alpha, *beta, *kappa)?,
                        None => predicted,
                    }
                }
                (None, Some(z)) => Belief::from_first_measurement(z),
                (None, None) => return Err(SimError::EstimatorUninitialized),
            };
            Ok((belief.position(), belief.velocity(), belief))
        }
    }
}

//! Pinhole projection between optical-frame target positions, pixel
//! coordinates, and the normalized feature state.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// Depth (optical-frame Z) below which a target counts as behind or on the
/// camera plane, in meters.
pub const EPS_DEPTH: f64 = 1e-6;

/// Intrinsic parameters of the simulated pinhole camera.
///
/// The defaults model a 640x480 sensor whose focal length gives a horizontal
/// field of view of (almost exactly) 80 degrees; `fov_az` carries the nominal
/// 80-degree azimuthal aperture used by the coverage metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CameraIntrinsics {
    /// Horizontal focal length, pixels.
    pub f_x: f64,
    /// Vertical focal length, pixels.
    pub f_y: f64,
    /// Principal point u-coordinate, pixels.
    pub c_u: f64,
    /// Principal point v-coordinate, pixels.
    pub c_v: f64,
    /// Sensor width, pixels.
    pub width: f64,
    /// Sensor height, pixels.
    pub height: f64,
    /// Horizontal view-angle aperture used for coverage metrics, degrees.
    pub fov_az: f64,
}

impl Default for CameraIntrinsics {
    fn default() -> Self {
        Self {
            f_x: 381.36,
            f_y: 381.36,
            c_u: 320.5,
            c_v: 240.5,
            width: 640.0,
            height: 480.0,
            fov_az: 80.0,
        }
    }
}

/// A (possibly off-sensor) image-plane point in continuous pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelPoint {
    /// Horizontal pixel coordinate.
    pub u: f64,
    /// Vertical pixel coordinate.
    pub v: f64,
    /// Whether the point falls on the physical sensor. Off-sensor
    /// projections are still returned so the controller can recover from
    /// badly off-center starts.
    pub in_image: bool,
}

/// Normalized image feature plus inverse depth:
/// `[x1, x2, x3] = [X/Z, Y/Z, 1/Z]` in the optical frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureState {
    /// Normalized horizontal image coordinate, dimensionless.
    pub x1: f64,
    /// Normalized vertical image coordinate, dimensionless.
    pub x2: f64,
    /// Inverse depth, 1/m; always positive.
    pub x3: f64,
}

impl FeatureState {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x1, self.x2, self.x3)
    }

    /// Depth along the optical axis, meters.
    pub fn depth(&self) -> f64 {
        1.0 / self.x3
    }

    /// Reconstruct the optical-frame position `[X, Y, Z]`.
    pub fn to_optical(&self) -> Vector3<f64> {
        let z = 1.0 / self.x3;
        Vector3::new(self.x1 * z, self.x2 * z, z)
    }
}

/// Project an optical-frame point onto the image plane:
/// `u = f_x*(X/Z) + c_u`, `v = f_y*(Y/Z) + c_v`.
///
/// # Errors
/// [`SimError::DepthNonPositive`] when `Z <= EPS_DEPTH` (target behind or on
/// the camera plane).
pub fn project(p_cam: &Vector3<f64>, intr: &CameraIntrinsics) -> Result<PixelPoint, SimError> {
    if p_cam.z <= EPS_DEPTH {
        return Err(SimError::DepthNonPositive { depth: p_cam.z });
    }
    let u = intr.f_x * (p_cam.x / p_cam.z) + intr.c_u;
    let v = intr.f_y * (p_cam.y / p_cam.z) + intr.c_v;
    let in_image = (0.0..=intr.width).contains(&u) && (0.0..=intr.height).contains(&v);
    Ok(PixelPoint { u, v, in_image })
}

/// Invert the projection on the normalized image coordinates:
/// `x1 = (u - c_u)/f_x`, `x2 = (v - c_v)/f_y`.
pub fn pixel_to_feature(pt: &PixelPoint, intr: &CameraIntrinsics) -> (f64, f64) {
    ((pt.u - intr.c_u) / intr.f_x, (pt.v - intr.c_v) / intr.f_y)
}

/// Build the full feature state `[X/Z, Y/Z, 1/Z]` from an optical-frame
/// position.
///
/// # Errors
/// [`SimError::DepthNonPositive`] when `Z <= EPS_DEPTH`.
pub fn feature_state(p_cam: &Vector3<f64>) -> Result<FeatureState, SimError> {
    if p_cam.z <= EPS_DEPTH {
        return Err(SimError::DepthNonPositive { depth: p_cam.z });
    }
    Ok(FeatureState::new(p_cam.x / p_cam.z, p_cam.y / p_cam.z, 1.0 / p_cam.z))
}

/// Map a feature state back to pixel coordinates (exact inverse of
/// [`pixel_to_feature`] on the first two components).
pub fn feature_to_pixel(s: &FeatureState, intr: &CameraIntrinsics) -> PixelPoint {
    let u = intr.f_x * s.x1 + intr.c_u;
    let v = intr.f_y * s.x2 + intr.c_v;
    let in_image = (0.0..=intr.width).contains(&u) && (0.0..=intr.height).contains(&v);
    PixelPoint { u, v, in_image }
}

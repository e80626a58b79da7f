//! Coordinate frames, rotation matrices, and relative kinematics.
//!
//! Three frames are used throughout the simulator:
//!
//! * **world** — the inertial frame; `z` is up, positions are in meters.
//! * **vehicle** — the UAV body frame obtained by rotating the world frame
//!   with [`Rotation3::from_angles`]; `x` points along the heading at level
//!   attitude.
//! * **optical** — the pinhole camera frame: `z` is the optical axis
//!   (forward), `x` points image-right, `y` points image-down. The camera is
//!   rigidly mounted looking along the vehicle `x` axis, so the two frames
//!   differ by the fixed permutation [`CAMERA_MOUNT`].

use nalgebra::{Matrix3, Vector3};

/// Distance below which two positions are treated as coincident, in meters.
pub const EPS_DIST: f64 = 1e-9;

/// Wrap an angle to the half-open interval `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = angle % two_pi;
    if a <= -std::f64::consts::PI {
        a += two_pi;
    } else if a > std::f64::consts::PI {
        a -= two_pi;
    }
    a
}

/// A 3x3 rotation matrix (orthonormal, determinant +1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    m: Matrix3<f64>,
}

impl Rotation3 {
    /// Identity rotation.
    pub fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
        }
    }

    /// Build the world-to-vehicle rotation `Rx * Ry * Rz` from the rotation
    /// angles about the x, y and z axes.
    ///
    /// The factor matrices carry `+sin` above the diagonal for `Rx`/`Rz`
    /// (frame-rotation convention); composing them maps world coordinates
    /// into the rotated frame.
    pub fn from_angles(theta_x: f64, theta_y: f64, theta_z: f64) -> Self {
        let (sx, cx) = theta_x.sin_cos();
        let (sy, cy) = theta_y.sin_cos();
        let (sz, cz) = theta_z.sin_cos();
        #[rustfmt::skip]
        let rx = Matrix3::new(
            1.0, 0.0, 0.0,
            0.0,  cx,  sx,
            0.0, -sx,  cx,
        );
        #[rustfmt::skip]
        let ry = Matrix3::new(
             cy, 0.0, -sy,
            0.0, 1.0, 0.0,
             sy, 0.0,  cy,
        );
        #[rustfmt::skip]
        let rz = Matrix3::new(
             cz,  sz, 0.0,
            -sz,  cz, 0.0,
            0.0, 0.0, 1.0,
        );
        Self { m: rx * ry * rz }
    }

    /// The raw matrix.
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Apply the rotation to a vector.
    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.m * v
    }

    /// Apply the inverse (transpose) rotation to a vector.
    pub fn apply_inverse(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.m.transpose() * v
    }

    /// Compose with another rotation: `self * other`.
    pub fn compose(&self, other: &Rotation3) -> Rotation3 {
        Rotation3 { m: self.m * other.m }
    }
}

/// Fixed vehicle-to-optical mount: optical `z` = vehicle `x` (forward),
/// optical `x` = vehicle `-y` (image-right), optical `y` = vehicle `-z`
/// (image-down).
#[rustfmt::skip]
pub const CAMERA_MOUNT: Matrix3<f64> = Matrix3::new(
    0.0, -1.0,  0.0,
    0.0,  0.0, -1.0,
    1.0,  0.0,  0.0,
);

/// Position plus Euler orientation of a UAV (and its rigidly mounted camera).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    /// Position in the world frame, meters.
    pub position: Vector3<f64>,
    /// Rotation angles `(theta_x, theta_y, theta_z)` in radians, each wrapped
    /// to `(-pi, pi]`.
    pub angles: Vector3<f64>,
}

impl Pose {
    pub fn new(position: Vector3<f64>, angles: Vector3<f64>) -> Self {
        Self {
            position,
            angles: angles.map(wrap_angle),
        }
    }

    /// World-to-vehicle rotation for this pose.
    pub fn rotation(&self) -> Rotation3 {
        Rotation3::from_angles(self.angles.x, self.angles.y, self.angles.z)
    }

    /// World-to-optical rotation (mount permutation applied on top of the
    /// vehicle rotation).
    pub fn optical_rotation(&self) -> Rotation3 {
        Rotation3 {
            m: CAMERA_MOUNT * self.rotation().m,
        }
    }

    /// Re-wrap all angles into `(-pi, pi]`.
    pub fn wrap(&mut self) {
        self.angles = self.angles.map(wrap_angle);
    }
}

/// 6-dimensional spatial velocity: linear and angular parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Twist {
    /// Linear velocity, m/s.
    pub linear: Vector3<f64>,
    /// Angular velocity, rad/s.
    pub angular: Vector3<f64>,
}

impl Twist {
    pub fn zero() -> Self {
        Self {
            linear: Vector3::zeros(),
            angular: Vector3::zeros(),
        }
    }

    pub fn new(linear: Vector3<f64>, angular: Vector3<f64>) -> Self {
        Self { linear, angular }
    }

    pub fn is_finite(&self) -> bool {
        self.linear.iter().chain(self.angular.iter()).all(|v| v.is_finite())
    }

    /// Magnitude of the linear part (invariant under frame rotation).
    pub fn speed(&self) -> f64 {
        self.linear.norm()
    }
}

/// Express a world-frame point in the vehicle frame of `pose`:
/// `R * (point - p_c)`.
pub fn world_to_camera(pose: &Pose, point: &Vector3<f64>) -> Vector3<f64> {
    pose.rotation().apply(&(point - pose.position))
}

/// Express a world-frame point in the optical (pinhole) frame of `pose`.
pub fn world_to_optical(pose: &Pose, point: &Vector3<f64>) -> Vector3<f64> {
    CAMERA_MOUNT * world_to_camera(pose, point)
}

/// Relative position of the target with respect to the camera,
/// `p_q - p_c`, in the world frame.
pub fn relative_position(p_q: &Vector3<f64>, p_c: &Vector3<f64>) -> Vector3<f64> {
    p_q - p_c
}

/// Relative velocity of the target as seen from a camera translating with
/// `v_c` and rotating with `omega_c`: `v_q - v_c - omega_c x p_rel`.
pub fn relative_velocity(
    v_q: &Vector3<f64>,
    v_c: &Vector3<f64>,
    omega_c: &Vector3<f64>,
    p_rel: &Vector3<f64>,
) -> Vector3<f64> {
    v_q - v_c - omega_c.cross(p_rel)
}

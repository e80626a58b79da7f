//! Per-round performance metrics: normalized image errors, error area, and
//! total/effective azimuthal view coverage of the target.

use nalgebra::Vector3;

use crate::camera::{CameraIntrinsics, PixelPoint};
use crate::error::SimError;
use crate::geometry::EPS_DIST;

/// Full circle, degrees.
const FULL_CIRCLE: f64 = 360.0;

/// Per-UAV, per-round normalized errors and speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavRoundMetrics {
    /// Normalized horizontal pixel error `|u - c_u| / c_u`.
    pub e_x: f64,
    /// Normalized vertical pixel error `|v - c_v| / c_v`.
    pub e_y: f64,
    /// Normalized range error `||p_rel|| / d_q`.
    pub e_z: f64,
    /// Error area `e_x * e_y`.
    pub e_a: f64,
    /// UAV speed (linear velocity magnitude), m/s.
    pub speed: f64,
}

/// One row of the simulation's metrics log.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    /// Round index (0 = initial state).
    pub round: u32,
    /// Simulation time `round * dt`, s.
    pub time: f64,
    /// Per-UAV metrics, ordered by agent id.
    pub uavs: Vec<UavRoundMetrics>,
    /// Target speed, m/s.
    pub target_speed: f64,
    /// Sum of per-camera view angles, degrees.
    pub total_view: f64,
    /// Measure of the union of per-camera azimuth arcs, degrees.
    pub effective_view: f64,
    /// Pairwise inter-UAV distances in (i, j) order with i < j, m.
    pub inter_uav_distances: Vec<f64>,
}

/// An azimuthal arc on the circle of directions seen from the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageArc {
    /// Arc center, degrees in `[0, 360)`.
    pub center: f64,
    /// Half-aperture, degrees.
    pub half_width: f64,
}

/// Normalized image-plane and range errors of a single UAV's view.
pub fn normalized_errors(
    pt: &PixelPoint,
    p_rel: &Vector3<f64>,
    intr: &CameraIntrinsics,
    d_q: f64,
) -> (f64, f64, f64) {
    let e_x = (pt.u - intr.c_u).abs() / intr.c_u;
    let e_y = (pt.v - intr.c_v).abs() / intr.c_v;
    let e_z = p_rel.norm() / d_q;
    (e_x, e_y, e_z)
}

/// Error area `e_a = e_x * e_y`.
pub fn error_area(e_x: f64, e_y: f64) -> f64 {
    e_x * e_y
}

/// Azimuth of `uav` as seen from `target`, degrees in `[0, 360)`.
///
/// # Errors
/// [`SimError::DegenerateAzimuth`] when the UAV is (horizontally) directly
/// above the target.
pub fn azimuth_from_target(uav: &Vector3<f64>, target: &Vector3<f64>) -> Result<f64, SimError> {
    let dx = uav.x - target.x;
    let dy = uav.y - target.y;
    let horizontal = (dx * dx + dy * dy).sqrt();
    if horizontal <= EPS_DIST {
        return Err(SimError::DegenerateAzimuth {
            horizontal_distance: horizontal,
        });
    }
    let mut az = dy.atan2(dx).to_degrees();
    if az < 0.0 {
        az += FULL_CIRCLE;
    }
    Ok(az)
}

/// Exact measure of the union of arcs on the circle, degrees.
///
/// Arcs are split at the 0/360 seam and merged as sorted intervals, so the
/// result carries no discretization error.
pub fn arc_union_measure(arcs: &[CoverageArc]) -> f64 {
    let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() * 2);
    for arc in arcs {
        let width = (2.0 * arc.half_width).min(FULL_CIRCLE);
        if width >= FULL_CIRCLE {
            return FULL_CIRCLE;
        }
        if width <= 0.0 {
            continue;
        }
        let mut start = (arc.center - arc.half_width) % FULL_CIRCLE;
        if start < 0.0 {
            start += FULL_CIRCLE;
        }
        let end = start + width;
        if end > FULL_CIRCLE {
            intervals.push((start, FULL_CIRCLE));
            intervals.push((0.0, end - FULL_CIRCLE));
        } else {
            intervals.push((start, end));
        }
    }
    if intervals.is_empty() {
        return 0.0;
    }
    intervals.sort_by(|a, b| a.partial_cmp(b).expect("finite interval endpoints"));

    let mut measure = 0.0;
    let (mut cur_start, mut cur_end) = intervals[0];
    for &(start, end) in &intervals[1..] {
        if start <= cur_end {
            cur_end = cur_end.max(end);
        } else {
            measure += cur_end - cur_start;
            (cur_start, cur_end) = (start, end);
        }
    }
    measure += cur_end - cur_start;
    measure.min(FULL_CIRCLE)
}

/// Total and effective azimuthal view coverage of the target.
///
/// Each UAV contributes an arc of `fov_az` degrees centered on its azimuth
/// as seen from the target (cameras are assumed aimed at the target, which
/// the centering controller enforces at convergence). `total` is the plain
/// sum `M * fov_az`; `effective` is the measure of the union.
///
/// # Errors
/// [`SimError::DegenerateAzimuth`] if any UAV sits directly above the target.
pub fn view_coverage(
    uav_positions: &[Vector3<f64>],
    target: &Vector3<f64>,
    fov_az: f64,
) -> Result<(f64, f64), SimError> {
    let mut arcs = Vec::with_capacity(uav_positions.len());
    for uav in uav_positions {
        arcs.push(CoverageArc {
            center: azimuth_from_target(uav, target)?,
            half_width: fov_az / 2.0,
        });
    }
    let total = fov_az * uav_positions.len() as f64;
    Ok((total, arc_union_measure(&arcs)))
}

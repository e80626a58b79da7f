//! Synchronous-round simulation loop: neighbor discovery, per-UAV
//! estimation, control, and integration against the previous-round snapshot,
//! plus convergence detection.
//!
//! Every agent computes from the same immutable snapshot of the previous
//! round, so the result of a round is independent of agent processing order
//! and a fixed seed reproduces a run bit for bit.

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::camera::{self, CameraIntrinsics, FeatureState, PixelPoint};
use crate::config::{FeatureSource, ScenarioConfig};
use crate::control;
use crate::dynamics::{self, SystemState, TargetState};
use crate::error::SimError;
use crate::estimation::{self, Belief};
use crate::geometry::{Pose, Twist, CAMERA_MOUNT};
use crate::metrics::{self, MetricsRecord, UavRoundMetrics};

/// One simulated UAV with its camera, controller state, and estimator
/// belief.
#[derive(Debug, Clone, PartialEq)]
pub struct UavAgent {
    /// Unique agent id; also the CSV/log identifier.
    pub id: u32,
    /// Position and Euler orientation.
    pub pose: Pose,
    /// Current world-frame spatial velocity (the last command).
    pub twist: Twist,
    /// The 9-dimensional per-UAV system state.
    pub system_state: SystemState,
    /// Target belief; `None` until the estimator is initialized.
    pub belief: Option<Belief>,
}

/// The complete simulation state between rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    /// All agents, in agent-id order.
    pub agents: Vec<UavAgent>,
    /// Ground-truth target state.
    pub target: TargetState,
    /// Simulation time, s (`round * dt`).
    pub time: f64,
    /// Completed round count.
    pub round: u32,
    /// Seed all per-round randomness derives from.
    pub rng_seed: u64,
}

/// Per-agent neighbor lists (indices into `World::agents`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborTable {
    /// `neighbors[i]` holds the indices of every agent within range of
    /// agent `i`.
    pub neighbors: Vec<Vec<usize>>,
}

/// One row of the per-UAV trajectory log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub round: u32,
    pub uav: u32,
    pub position: Vector3<f64>,
    pub yaw: f64,
    pub u: f64,
    pub v: f64,
}

/// Everything a finished run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    /// One record per round, including the initial state (round 0).
    pub records: Vec<MetricsRecord>,
    /// Per-round, per-UAV pose and pixel snapshots.
    pub trajectories: Vec<TrajectorySample>,
    /// Ground-truth target position at every logged round.
    pub target_track: Vec<Vector3<f64>>,
    /// World state after the last completed round.
    pub final_world: World,
    /// First round at which the convergence test passed, if any.
    pub converged_round: Option<u32>,
}

/// Deterministic per-(seed, round, agent) RNG for measurement noise.
///
/// SplitMix64-style mixing keeps streams decorrelated while remaining a pure
/// function of its inputs, so agent processing order cannot matter.
fn agent_rng(seed: u64, round: u32, agent_id: u32) -> ChaCha8Rng {
    let mut z = seed
        ^ (u64::from(round)).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ (u64::from(agent_id)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Neighbor lists: `j` is a neighbor of `i` iff `0 < ||r_j - r_i|| <= gamma`.
pub fn find_neighbors(agents: &[UavAgent], gamma: f64) -> NeighborTable {
    let n = agents.len();
    let mut neighbors = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (agents[j].pose.position - agents[i].pose.position).norm();
            if d > 0.0 && d <= gamma {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    NeighborTable { neighbors }
}

impl World {
    /// Build the round-0 world from a validated config.
    ///
    /// # Errors
    /// [`SimError::DepthNonPositive`] (wrapped per agent) when an initial
    /// pose cannot see the target.
    pub fn initialize(config: &ScenarioConfig) -> Result<World, SimError> {
        let target = TargetState::new(
            Vector3::from(config.target_position),
            dynamics::target_velocity(0.0, &config.mobility),
        );
        let mut agents = Vec::with_capacity(config.num_uavs);
        for (i, pose) in config.initial_poses().into_iter().enumerate() {
            let id = i as u32;
            let p_opt = crate::geometry::world_to_optical(&pose, &target.position);
            let feature = camera::feature_state(&p_opt).map_err(|e| e.for_agent(id))?;
            agents.push(UavAgent {
                id,
                pose,
                twist: Twist::zero(),
                system_state: SystemState::new(feature, target.position, target.velocity),
                belief: None,
            });
        }
        Ok(World {
            agents,
            target,
            time: 0.0,
            round: 0,
            rng_seed: config.seed,
        })
    }
}

/// Measure the target through an agent's camera, with optional pixel noise.
/// Returns the measured feature and the world-frame position it implies, or
/// `None` when the target is behind the camera plane (occlusion).
fn measure(
    agent: &UavAgent,
    target: &TargetState,
    config: &ScenarioConfig,
    round: u32,
) -> Option<(FeatureState, Vector3<f64>)> {
    let r_opt = agent.pose.optical_rotation();
    let p_opt = r_opt.apply(&(target.position - agent.pose.position));
    let mut feature = camera::feature_state(&p_opt).ok()?;

    if config.measurement_noise_px > 0.0 {
        let mut rng = agent_rng(config.seed, round, agent.id);
        let noise = Normal::new(0.0, config.measurement_noise_px).expect("valid sigma");
        let pixel = camera::feature_to_pixel(&feature, &config.intrinsics);
        let noisy = PixelPoint {
            u: pixel.u + noise.sample(&mut rng),
            v: pixel.v + noise.sample(&mut rng),
            in_image: pixel.in_image,
        };
        let (x1, x2) = camera::pixel_to_feature(&noisy, &config.intrinsics);
        feature = FeatureState::new(x1, x2, feature.x3);
    }

    // Invert the observation back to a world-frame target position using
    // the agent's own pose and measured depth.
    let implied_world = agent.pose.position + r_opt.apply_inverse(&feature.to_optical());
    Some((feature, implied_world))
}

/// Compute one agent's next state against the previous-round snapshot.
fn advance_agent(
    agent: &UavAgent,
    neighbor_positions: &[Vector3<f64>],
    world: &World,
    config: &ScenarioConfig,
) -> Result<UavAgent, SimError> {
    let dt = config.dt;
    let r_opt = agent.pose.optical_rotation();

    // 1. Measure and estimate the target.
    let measured = measure(agent, &world.target, config, world.round);
    let measurement = measured.as_ref().map(|(_, world_pos)| world_pos);
    let (p_hat, v_hat, belief) = estimation::estimate(
        &config.estimator,
        &world.target,
        measurement,
        dt,
        agent.belief.as_ref(),
    )?;

    // 2. Update the system state: feature from measurement (or open-loop
    //    integration), target rows from the estimate.
    let feature = match config.feature_source {
        FeatureSource::Measured => match &measured {
            Some((feature, _)) => *feature,
            // Occlusion: hold the previous feature for one step.
            None => agent.system_state.feature,
        },
        FeatureSource::Integrated => {
            let cmd_opt = Twist::new(
                r_opt.apply(&agent.twist.linear),
                r_opt.apply(&agent.twist.angular),
            );
            let rates = dynamics::state_derivative(&agent.system_state, &cmd_opt)?;
            let next = dynamics::integrate(&agent.system_state, &rates, dt)?;
            next.feature
        }
    };
    let system_state = SystemState::new(feature, p_hat, v_hat);

    // 3-4. Swarm interaction from the snapshot of neighbor positions.
    let u_s_world = control::swarm_input_signed(
        &agent.pose.position,
        neighbor_positions,
        &config.gains,
        config.swarm_sign,
    )?;

    // 5. Servo command in the optical frame, then integrate the pose in the
    //    world frame.
    let s_star = control::desired_state(&config.gains);
    let e = control::state_error(&feature, &s_star);
    let l = control::feature_jacobian(&feature);
    let v_q_opt = Twist::new(r_opt.apply(&v_hat), Vector3::zeros());
    let u_s_opt = r_opt.apply(&u_s_world);
    let cmd_opt = control::control_command(&e, &l, &v_q_opt, &u_s_opt, &config.gains)?;

    let mut linear_world = r_opt.apply_inverse(&cmd_opt.linear);
    if let Some(limit) = config.speed_limit {
        linear_world = linear_world.map(|v| v.clamp(-limit, limit));
    }
    // Angular command maps to vehicle-frame Euler rates through the fixed
    // camera mount.
    let omega_vehicle = CAMERA_MOUNT.transpose() * cmd_opt.angular;
    let twist = Twist::new(linear_world, r_opt.apply_inverse(&cmd_opt.angular));
    if !twist.is_finite() {
        return Err(SimError::NonFiniteState);
    }

    let mut pose = agent.pose;
    pose.position += linear_world * dt;
    pose.angles += omega_vehicle * dt;
    pose.wrap();

    Ok(UavAgent {
        id: agent.id,
        pose,
        twist,
        system_state,
        belief: Some(belief),
    })
}

/// Advance the world one synchronous round without emitting metrics.
fn advance(world: &World, config: &ScenarioConfig) -> Result<World, SimError> {
    let table = find_neighbors(&world.agents, config.gamma);
    let mut agents = Vec::with_capacity(world.agents.len());
    for (i, agent) in world.agents.iter().enumerate() {
        let neighbor_positions: Vec<Vector3<f64>> = table.neighbors[i]
            .iter()
            .map(|&j| world.agents[j].pose.position)
            .collect();
        let next = advance_agent(agent, &neighbor_positions, world, config)
            .map_err(|e| e.for_agent(agent.id))?;
        agents.push(next);
    }
    Ok(World {
        agents,
        target: dynamics::advance_target(&world.target, world.time, config.dt, &config.mobility),
        time: world.time + config.dt,
        round: world.round + 1,
        rng_seed: world.rng_seed,
    })
}

/// The exact pixel an agent's camera currently puts the true target at,
/// falling back to the held feature state if the target is behind the
/// camera plane.
fn agent_pixel(agent: &UavAgent, target: &TargetState, intr: &CameraIntrinsics) -> PixelPoint {
    let p_opt = agent
        .pose
        .optical_rotation()
        .apply(&(target.position - agent.pose.position));
    camera::project(&p_opt, intr)
        .unwrap_or_else(|_| camera::feature_to_pixel(&agent.system_state.feature, intr))
}

/// Compute the metrics record and trajectory samples for the current world.
///
/// Metrics always use the exact projection of the true target, so
/// measurement noise affects only the control path.
pub fn observe(
    world: &World,
    config: &ScenarioConfig,
) -> Result<(MetricsRecord, Vec<TrajectorySample>), SimError> {
    let intr = &config.intrinsics;
    let mut uavs = Vec::with_capacity(world.agents.len());
    let mut samples = Vec::with_capacity(world.agents.len());
    for agent in &world.agents {
        let pixel = agent_pixel(agent, &world.target, intr);
        let p_rel = world.target.position - agent.pose.position;
        let (e_x, e_y, e_z) = metrics::normalized_errors(&pixel, &p_rel, intr, config.gains.d_q);
        uavs.push(UavRoundMetrics {
            e_x,
            e_y,
            e_z,
            e_a: metrics::error_area(e_x, e_y),
            speed: agent.twist.speed(),
        });
        samples.push(TrajectorySample {
            round: world.round,
            uav: agent.id,
            position: agent.pose.position,
            yaw: agent.pose.angles.z,
            u: pixel.u,
            v: pixel.v,
        });
    }

    let positions: Vec<Vector3<f64>> =
        world.agents.iter().map(|a| a.pose.position).collect();
    let (total_view, effective_view) =
        metrics::view_coverage(&positions, &world.target.position, intr.fov_az)?;

    let mut inter_uav_distances = Vec::new();
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            inter_uav_distances.push((positions[j] - positions[i]).norm());
        }
    }

    Ok((
        MetricsRecord {
            round: world.round,
            time: world.time,
            uavs,
            target_speed: world.target.velocity.norm(),
            total_view,
            effective_view,
            inter_uav_distances,
        },
        samples,
    ))
}

/// One synchronous round: every agent estimates, controls, and integrates
/// against the previous snapshot; then the target advances and the
/// post-round metrics are emitted.
///
/// # Errors
/// Per-agent failures ([`SimError::DepthCollapse`],
/// [`SimError::SingularInteraction`], ...) wrapped with the offending agent
/// id.
pub fn step(world: &World, config: &ScenarioConfig) -> Result<(World, MetricsRecord), SimError> {
    let next = advance(world, config)?;
    let (record, _) = observe(&next, config)?;
    Ok((next, record))
}

/// True when the last `window` records all have error area below `tol_e`
/// and relative speed mismatch below `tol_v`.
pub fn check_convergence(history: &[MetricsRecord], params: &crate::config::ConvergenceParams) -> bool {
    if history.len() < params.window {
        return false;
    }
    history[history.len() - params.window..].iter().all(|rec| {
        let speed_scale = rec.target_speed.max(1.0);
        rec.uavs.iter().all(|u| {
            u.e_a < params.tol_e && (u.speed - rec.target_speed).abs() / speed_scale < params.tol_v
        })
    })
}

/// Run a full scenario: iterate [`step`] for `max_rounds` rounds (or until
/// convergence when `stop_on_convergence` is set), logging one record per
/// round plus the initial state.
///
/// # Errors
/// Propagated from [`World::initialize`] and [`step`].
pub fn run(config: &ScenarioConfig) -> Result<RunLog, SimError> {
    let mut world = World::initialize(config)?;
    let (initial, mut trajectories) = observe(&world, config)?;
    let mut records = vec![initial];
    let mut target_track = vec![world.target.position];
    let mut converged_round = None;

    for _ in 0..config.max_rounds {
        let next = advance(&world, config)?;
        let (record, samples) = observe(&next, config)?;
        records.push(record);
        trajectories.extend(samples);
        target_track.push(next.target.position);
        world = next;

        if converged_round.is_none() && check_convergence(&records, &config.convergence) {
            converged_round = Some(world.round);
            if config.stop_on_convergence {
                break;
            }
        }
    }

    Ok(RunLog {
        records,
        trajectories,
        target_track,
        final_world: world,
        converged_round,
    })
}

//! Shipping gate: every guarantee the simulator advertises, checked end to
//! end on the library API. One test per guarantee; each prints a `PASS`
//! line with the measured numbers (visible with `--nocapture`), and the
//! tolerances are pinned as constants next to the checks they gate.
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use nalgebra::{Matrix3x6, Matrix6x3, SMatrix, SVector, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skyring_core::camera::{self, FeatureState};
use skyring_core::config::{load_config, InitialPose, Placement, ScenarioConfig};
use skyring_core::control::{self, ControlGains};
use skyring_core::dynamics::{self, MobilityPattern, SystemState, TargetState};
use skyring_core::engine::{self, RunLog, World};
use skyring_core::estimation::{self, Belief};
use skyring_core::geometry::{self, Rotation3};
use skyring_core::metrics::{self, CoverageArc};
use skyring_core::report::{self, SweepPoint};

/// The shipped three-UAV reference scenario.
fn reference_config() -> ScenarioConfig {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/reference.toml");
    load_config(Path::new(path)).expect("shipped scenario must load")
}

fn reference_log() -> &'static RunLog {
    static LOG: OnceLock<RunLog> = OnceLock::new();
    LOG.get_or_init(|| engine::run(&reference_config()).expect("reference run must succeed"))
}

/// Auto-ring scenario with `m` UAVs and otherwise default parameters.
fn ring_config(m: usize) -> ScenarioConfig {
    ScenarioConfig {
        num_uavs: m,
        max_rounds: 200,
        placement: Placement::AutoRing { height: 50.0 },
        ..ScenarioConfig::default()
    }
}

/// Team-size sweep 1..=10, 200 rounds each: final summaries plus the first
/// converged round. Shared between the coverage and error-trend gates.
fn sweep_results() -> &'static Vec<(SweepPoint, Option<u32>)> {
    static RESULTS: OnceLock<Vec<(SweepPoint, Option<u32>)>> = OnceLock::new();
    RESULTS.get_or_init(|| {
        (1..=10)
            .map(|m| {
                let log = engine::run(&ring_config(m)).expect("sweep run must succeed");
                (report::summarize_final(&log), log.converged_round)
            })
            .collect()
    })
}

/// Guarantee 1: on the reference scenario every UAV's speed is within 5% of
/// the target's for all of rounds 100..=200, and the 200-round run finishes
/// in under a second.
#[test]
fn speed_convergence_and_runtime() {
    const SPEED_TOLERANCE: f64 = 0.05;

    let config = reference_config();
    let start = Instant::now();
    let log = engine::run(&config).expect("reference run must succeed");
    let elapsed = start.elapsed();

    let mut max_deviation: f64 = 0.0;
    for rec in &log.records[100..=200] {
        assert!(rec.target_speed > 0.0, "trig target moves during rounds 100..");
        for (i, uav) in rec.uavs.iter().enumerate() {
            let deviation = (uav.speed - rec.target_speed).abs() / rec.target_speed;
            assert!(
                deviation <= SPEED_TOLERANCE,
                "UAV {i} speed {} vs target {} at round {} ({}% off)",
                uav.speed,
                rec.target_speed,
                rec.round,
                deviation * 100.0
            );
            max_deviation = max_deviation.max(deviation);
        }
    }
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "200-round reference run took {elapsed:?}"
    );
    println!(
        "PASS speed convergence: max deviation {:.2}% over rounds 100..=200, runtime {elapsed:?}",
        max_deviation * 100.0
    );
}

/// Guarantee 2: the error area decays — max per-UAV e_a over rounds
/// 150..=200 is below 1e-2, and every UAV's round-50 value exceeds its
/// round-200 value.
#[test]
fn error_area_decay() {
    const TAIL_CAP: f64 = 1e-2;

    let log = reference_log();
    assert_eq!(log.records.len(), 201);

    let mut tail_max: f64 = 0.0;
    for rec in &log.records[150..=200] {
        for uav in &rec.uavs {
            tail_max = tail_max.max(uav.e_a);
        }
    }
    assert!(tail_max < TAIL_CAP, "max e_a over rounds 150..=200 is {tail_max}");

    for i in 0..log.records[0].uavs.len() {
        let at_50 = log.records[50].uavs[i].e_a;
        let at_200 = log.records[200].uavs[i].e_a;
        assert!(
            at_50 > at_200,
            "UAV {i}: e_a(50) = {at_50} must exceed e_a(200) = {at_200}"
        );
    }
    println!("PASS error-area decay: max e_a over rounds 150..=200 is {tail_max:.2e}");
}

/// Guarantee 3: at the final round every UAV has the target centered within
/// 5 px of the principal point on both axes.
#[test]
fn final_round_centering() {
    const PIXEL_TOLERANCE: f64 = 5.0;

    let config = reference_config();
    let log = reference_log();
    let last_round = log.final_world.round;
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for t in log.trajectories.iter().filter(|t| t.round == last_round) {
        let du = (t.u - config.intrinsics.c_u).abs();
        let dv = (t.v - config.intrinsics.c_v).abs();
        assert!(
            du < PIXEL_TOLERANCE && dv < PIXEL_TOLERANCE,
            "UAV {}: final pixel offset ({du:.3}, {dv:.3}) px",
            t.uav
        );
        worst = worst.max(du).max(dv);
        checked += 1;
    }
    assert_eq!(checked, config.num_uavs);
    println!("PASS centering: worst final pixel offset {worst:.3} px across {checked} UAVs");
}

/// Guarantee 4: view coverage follows the ring law — on the uniform
/// auto-ring start the effective coverage equals min(M*80, 360) degrees to
/// 1e-9 for M = 1..=10, and after the swept runs it is non-decreasing in M
/// and reaches the full circle by M = 7.
#[test]
fn coverage_law() {
    const RING_TOLERANCE: f64 = 1e-9;

    for m in 1..=10 {
        let world = World::initialize(&ring_config(m)).unwrap();
        let positions: Vec<Vector3<f64>> =
            world.agents.iter().map(|a| a.pose.position).collect();
        let (total, effective) =
            metrics::view_coverage(&positions, &world.target.position, 80.0).unwrap();
        let expected = (80.0 * m as f64).min(360.0);
        assert_eq!(total, 80.0 * m as f64);
        assert!(
            (effective - expected).abs() < RING_TOLERANCE,
            "uniform ring M = {m}: effective {effective} vs {expected}"
        );
    }

    let results = sweep_results();
    let mut reached_full_circle_at = None;
    for (i, (point, converged)) in results.iter().enumerate() {
        let m = i + 1;
        assert!(
            converged.is_some(),
            "swept run with {m} UAVs did not converge within 200 rounds"
        );
        if i > 0 {
            let prev = results[i - 1].0.effective_view;
            assert!(
                point.effective_view >= prev - RING_TOLERANCE,
                "effective coverage dropped from {prev} to {} at M = {m}",
                point.effective_view
            );
        }
        if reached_full_circle_at.is_none() && point.effective_view >= 360.0 - RING_TOLERANCE {
            reached_full_circle_at = Some(m);
        }
    }
    let full_at = reached_full_circle_at.expect("coverage must reach 360 degrees");
    assert!(full_at <= 7, "full circle first reached at M = {full_at}");
    println!(
        "PASS coverage law: uniform rings exact, converged sweep non-decreasing, 360 deg at M = {full_at}"
    );
}

/// Guarantee 5: across the 1..=10 sweep after 200 rounds, the mean
/// horizontal image error stays below 1e-2 for every team size, the mean
/// vertical image error does not trend upward, and the mean range error
/// does not trend downward. The vertical and range errors get a small
/// per-step slack because the underlying values sit near zero and near
/// their initial value respectively, where roundoff-scale wiggle is
/// meaningless.
#[test]
fn sweep_error_trends() {
    const EX_CAP: f64 = 1e-2;
    const EY_STEP_SLACK: f64 = 2e-3;
    const EY_ABS_CAP: f64 = 5e-3;
    const EZ_STEP_SLACK: f64 = 1e-3;

    let results = sweep_results();
    for (i, (point, _)) in results.iter().enumerate() {
        let m = i + 1;
        assert!(
            point.mean_e_x < EX_CAP,
            "mean e_x = {} at M = {m}",
            point.mean_e_x
        );
        assert!(
            point.mean_e_y < EY_ABS_CAP,
            "mean e_y = {} at M = {m}",
            point.mean_e_y
        );
        if i > 0 {
            let prev = &results[i - 1].0;
            assert!(
                point.mean_e_y <= prev.mean_e_y + EY_STEP_SLACK,
                "mean e_y rose from {} to {} at M = {m}",
                prev.mean_e_y,
                point.mean_e_y
            );
            assert!(
                point.mean_e_z >= prev.mean_e_z - EZ_STEP_SLACK,
                "mean e_z fell from {} to {} at M = {m}",
                prev.mean_e_z,
                point.mean_e_z
            );
        }
    }
    let first = &results[0].0;
    let last = &results[9].0;
    println!(
        "PASS sweep trends: e_x <= {:.1e}, e_y {:.1e} -> {:.1e}, e_z {:.4} -> {:.4}",
        results.iter().map(|(p, _)| p.mean_e_x).fold(0.0, f64::max),
        first.mean_e_y,
        last.mean_e_y,
        first.mean_e_z,
        last.mean_e_z
    );
}

/// Guarantee 6: the visual servo contracts the feature error by the design
/// rate — a single UAV over a stationary target with the exact (undamped)
/// pseudo-inverse shows a per-round error-norm ratio of 1 - lambda*dt
/// +/- 0.02 for as long as the error norm exceeds 1e-4.
#[test]
fn servo_error_contraction() {
    const RATIO_BAND: (f64, f64) = (0.88, 0.92);
    const FLOOR: f64 = 1e-4;

    let config = ScenarioConfig {
        num_uavs: 1,
        mobility: MobilityPattern::Stationary,
        gains: ControlGains {
            eps_damp: 0.0,
            ..ControlGains::default()
        },
        placement: Placement::Explicit {
            poses: vec![InitialPose {
                position: [97.0, 2.0, 59.0],
                angles: [0.0, 0.6f64.atan2(0.8), std::f64::consts::PI],
            }],
        },
        ..ScenarioConfig::default()
    };
    let desired = control::desired_state(&config.gains);
    let error_norm = |w: &World| {
        let optical = geometry::world_to_optical(&w.agents[0].pose, &w.target.position);
        let s = camera::feature_state(&optical).unwrap();
        control::state_error(&s, &desired).norm()
    };

    let mut world = World::initialize(&config).unwrap();
    let mut prev = error_norm(&world);
    assert!(prev > 100.0 * FLOOR, "start must sit well above the floor");
    let mut checked = 0;
    for _ in 0..config.max_rounds {
        let (next, _) = engine::step(&world, &config).unwrap();
        let current = error_norm(&next);
        if prev > FLOOR {
            let ratio = current / prev;
            assert!(
                (RATIO_BAND.0..=RATIO_BAND.1).contains(&ratio),
                "round {}: ratio {ratio} outside [{}, {}] at error norm {prev}",
                next.round,
                RATIO_BAND.0,
                RATIO_BAND.1
            );
            checked += 1;
        }
        world = next;
        prev = current;
    }
    assert!(checked >= 30, "only {checked} rounds exercised the contraction band");
    assert!(prev < FLOOR, "error must decay below {FLOOR}, ended at {prev}");
    println!("PASS contraction: {checked} rounds inside [0.88, 0.92], final error norm {prev:.1e}");
}

/// Closed-form Kalman filter over the same linear constant-velocity model,
/// used as the oracle for the unscented filter.
mod kf {
    use super::*;

    type StateVec = SVector<f64, 6>;
    type StateMat = SMatrix<f64, 6, 6>;

    fn f_matrix(dt: f64) -> StateMat {
        let mut f = StateMat::identity();
        for i in 0..3 {
            f[(i, i + 3)] = dt;
        }
        f
    }

    pub fn predict(belief: &Belief, dt: f64, q: f64) -> Belief {
        let f = f_matrix(dt);
        let mut noise = StateMat::zeros();
        for i in 3..6 {
            noise[(i, i)] = q * dt;
        }
        Belief {
            mean: f * belief.mean,
            covariance: f * belief.covariance * f.transpose() + noise,
        }
    }

    pub fn update(belief: &Belief, z: &Vector3<f64>, r: f64) -> Belief {
        let mut h = SMatrix::<f64, 3, 6>::zeros();
        for i in 0..3 {
            h[(i, i)] = 1.0;
        }
        let s = h * belief.covariance * h.transpose() + SMatrix::<f64, 3, 3>::identity() * r;
        let gain = belief.covariance * h.transpose() * s.try_inverse().unwrap();
        let mean: StateVec = belief.mean + gain * (z - h * belief.mean);
        Belief {
            mean,
            covariance: belief.covariance - gain * h * belief.covariance,
        }
    }
}

/// A positive-definite belief drawn from an RNG (P = L L^T + 1e-6 I).
fn random_belief(rng: &mut ChaCha8Rng) -> Belief {
    let mut l = SMatrix::<f64, 6, 6>::zeros();
    for i in 0..6 {
        for j in 0..=i {
            let v: f64 = rng.random_range(-2.0..2.0);
            l[(i, j)] = if i == j { v.abs() + 0.5 } else { v };
        }
    }
    let mut mean = SVector::<f64, 6>::zeros();
    for i in 0..6 {
        mean[i] = rng.random_range(-50.0..50.0);
    }
    Belief {
        mean,
        covariance: l * l.transpose() + SMatrix::<f64, 6, 6>::identity() * 1e-6,
    }
}

/// Guarantee 7: the unit-level invariant suite — every algebraic identity
/// the controller and estimator rely on, on seeded random inputs.
#[test]
fn unit_invariant_suite() {
    // Arbitrary fixed seed; the checks must hold for any draw, the seed only
    // keeps failures reproducible.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // Rotation orthonormality: R R^T = I and det R = 1 to 1e-9.
    for _ in 0..100 {
        let r = Rotation3::from_angles(
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        let m = r.matrix();
        assert!(((m * m.transpose()) - SMatrix::<f64, 3, 3>::identity()).norm() < 1e-9);
        assert!((m.determinant() - 1.0).abs() < 1e-9);
    }

    // Feature kinematics match the interaction-matrix form: the feature rows
    // of the state derivative equal L_s (V_c - V_q) on 1000 random states.
    for _ in 0..1000 {
        let s = FeatureState::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(1e-3..1.0),
        );
        let v_q = Vector3::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        let state = SystemState::new(s, Vector3::zeros(), v_q);
        let mut cmd6 = Vector6::<f64>::zeros();
        for i in 0..6 {
            cmd6[i] = rng.random_range(-5.0..5.0);
        }
        let cmd = skyring_core::Twist::new(
            Vector3::new(cmd6[0], cmd6[1], cmd6[2]),
            Vector3::new(cmd6[3], cmd6[4], cmd6[5]),
        );
        let rates = dynamics::state_derivative(&state, &cmd).unwrap();
        let mut vq6 = Vector6::<f64>::zeros();
        vq6.fixed_rows_mut::<3>(0).copy_from(&v_q);
        let via_jacobian = control::feature_jacobian(&s).matrix() * (cmd6 - vq6);
        let feature_rows = Vector3::new(rates[0], rates[1], rates[2]);
        assert!(
            (feature_rows - via_jacobian).norm() < 1e-9,
            "feature rows {feature_rows:?} vs L_s(V_c - V_q) {via_jacobian:?}"
        );
    }

    // Penrose conditions for the undamped pseudo-inverse on 100 full-rank
    // interaction matrices, to 1e-8.
    for _ in 0..100 {
        let s = FeatureState::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(1e-2..1.0),
        );
        let l = control::feature_jacobian(&s);
        let pinv = control::damped_pseudo_inverse(&l, 0.0).unwrap();
        let m = l.matrix();
        let back: Matrix3x6<f64> = m * pinv * m;
        let fwd: Matrix6x3<f64> = pinv * m * pinv;
        let sym_lp = m * pinv;
        let sym_pl = pinv * m;
        assert!((back - m).norm() < 1e-8 * (1.0 + m.norm()));
        assert!((fwd - pinv).norm() < 1e-8 * (1.0 + pinv.norm()));
        assert!((sym_lp - sym_lp.transpose()).norm() < 1e-8 * (1.0 + sym_lp.norm()));
        assert!((sym_pl - sym_pl.transpose()).norm() < 1e-8 * (1.0 + sym_pl.norm()));
    }

    // Swarm: exact zero at the equilibrium distance, exact pairwise
    // antisymmetry.
    let gains = ControlGains::default();
    let at_equilibrium = control::swarm_input(
        &Vector3::zeros(),
        &[Vector3::new(gains.d_u, 0.0, 0.0)],
        &gains,
    )
    .unwrap();
    assert_eq!(at_equilibrium, Vector3::zeros());
    for _ in 0..100 {
        let a = Vector3::new(
            rng.random_range(-500.0..500.0),
            rng.random_range(-500.0..500.0),
            rng.random_range(0.0..100.0),
        );
        let b = Vector3::new(
            rng.random_range(-500.0..500.0),
            rng.random_range(-500.0..500.0),
            rng.random_range(0.0..100.0),
        );
        if (b - a).norm() < 1.0 {
            continue;
        }
        let t_ab = control::swarm_input(&a, &[b], &gains).unwrap();
        let t_ba = control::swarm_input(&b, &[a], &gains).unwrap();
        assert_eq!(t_ab, -t_ba);
    }

    // The unscented filter agrees with the closed-form Kalman filter on the
    // linear-Gaussian model to 1e-8 (both maps are linear, so the sigma-point
    // transform is exact).
    let (alpha, beta, kappa) = (1e-3, 2.0, 0.0);
    for _ in 0..50 {
        let belief = random_belief(&mut rng);
        let dt = rng.random_range(0.01..1.0);
        let q = rng.random_range(0.01..2.0);
        let ukf_p = estimation::predict(&belief, dt, q, alpha, beta, kappa).unwrap();
        let kf_p = kf::predict(&belief, dt, q);
        assert!((ukf_p.mean - kf_p.mean).norm() < 1e-8 * (1.0 + kf_p.mean.norm()));
        assert!(
            (ukf_p.covariance - kf_p.covariance).norm()
                < 1e-8 * (1.0 + kf_p.covariance.norm())
        );

        let z = Vector3::new(
            rng.random_range(-60.0..60.0),
            rng.random_range(-60.0..60.0),
            rng.random_range(-60.0..60.0),
        );
        let r = rng.random_range(0.01..4.0);
        let ukf_u = estimation::update(&belief, &z, r, alpha, beta, kappa).unwrap();
        let kf_u = kf::update(&belief, &z, r);
        assert!((ukf_u.mean - kf_u.mean).norm() < 1e-8 * (1.0 + kf_u.mean.norm()));
        assert!(
            (ukf_u.covariance - kf_u.covariance).norm()
                < 1e-8 * (1.0 + kf_u.covariance.norm())
        );
    }

    // Projection/feature round-trip to 1e-12.
    let intr = reference_config().intrinsics;
    for _ in 0..200 {
        let p_cam = Vector3::new(
            rng.random_range(-50.0..50.0),
            rng.random_range(-50.0..50.0),
            rng.random_range(0.1..200.0),
        );
        let s = camera::feature_state(&p_cam).unwrap();
        let px = camera::feature_to_pixel(&s, &intr);
        let (x1, x2) = camera::pixel_to_feature(&px, &intr);
        assert!((x1 - s.x1).abs() < 1e-12 && (x2 - s.x2).abs() < 1e-12);
    }

    // Interval-union coverage vs a 0.01-degree brute-force raster on 100
    // random arc sets, to 0.02 degrees. (Center sampling miscounts at most
    // one cell per disjoint union segment, so sets of one or two arcs keep
    // the raster itself within the bound.)
    let grid_measure = |arcs: &[CoverageArc]| -> f64 {
        let cell = 0.01;
        let n = (360.0 / cell) as usize;
        let mut covered = 0usize;
        for i in 0..n {
            let az = -180.0 + (i as f64 + 0.5) * cell;
            if arcs.iter().any(|a| {
                let mut d = (az - a.center) % 360.0;
                if d > 180.0 {
                    d -= 360.0;
                } else if d < -180.0 {
                    d += 360.0;
                }
                d.abs() <= a.half_width
            }) {
                covered += 1;
            }
        }
        covered as f64 * cell
    };
    for _ in 0..100 {
        let count = rng.random_range(1..=2);
        let arcs: Vec<CoverageArc> = (0..count)
            .map(|_| CoverageArc {
                center: rng.random_range(-180.0..180.0),
                half_width: rng.random_range(0.5..90.0),
            })
            .collect();
        let exact = metrics::arc_union_measure(&arcs);
        let raster = grid_measure(&arcs);
        assert!(
            (exact - raster).abs() <= 0.02,
            "union measure {exact} vs raster {raster} on {arcs:?}"
        );
    }

    println!("PASS unit invariants: rotations, feature kinematics, pseudo-inverse, swarm, filter, round-trip, coverage");
}

/// Guarantee 8: bit-level determinism — the same seed and config reproduce
/// byte-identical CSV files, and permuting the agent storage/iteration
/// order leaves every agent's trajectory and the round metrics unchanged.
#[test]
fn determinism_and_order_independence() {
    // Byte-identical artifacts, with measurement noise switched on so the
    // RNG path is exercised.
    let config = ScenarioConfig {
        measurement_noise_px: 0.5,
        seed: 42,
        ..reference_config()
    };
    let dir = tempfile::tempdir().unwrap();
    let (dir_a, dir_b) = (dir.path().join("a"), dir.path().join("b"));
    report::emit_csv(&engine::run(&config).unwrap(), &dir_a).unwrap();
    report::emit_csv(&engine::run(&config).unwrap(), &dir_b).unwrap();
    for name in ["metrics.csv", "trajectories.csv"] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs across identical runs");
    }

    // Order independence: rotate the agent vector and step both worlds.
    let world = World::initialize(&config).unwrap();
    let mut permuted = world.clone();
    permuted.agents.rotate_left(1);
    let mut plain = world;
    for _ in 0..5 {
        let (next_plain, rec_plain) = engine::step(&plain, &config).unwrap();
        let (next_perm, rec_perm) = engine::step(&permuted, &config).unwrap();

        for agent in &next_plain.agents {
            let twin = next_perm
                .agents
                .iter()
                .find(|a| a.id == agent.id)
                .expect("permutation preserves ids");
            assert_eq!(agent, twin, "agent {} diverged under permutation", agent.id);
        }
        let mut metrics_plain: Vec<_> = next_plain
            .agents
            .iter()
            .map(|a| a.id)
            .zip(rec_plain.uavs.iter().copied())
            .collect();
        let mut metrics_perm: Vec<_> = next_perm
            .agents
            .iter()
            .map(|a| a.id)
            .zip(rec_perm.uavs.iter().copied())
            .collect();
        metrics_plain.sort_by_key(|(id, _)| *id);
        metrics_perm.sort_by_key(|(id, _)| *id);
        for ((id_a, ua), (id_b, ub)) in metrics_plain.iter().zip(&metrics_perm) {
            assert_eq!(id_a, id_b);
            assert_eq!(ua, ub, "round metrics for UAV {id_a} diverged");
        }
        assert_eq!(rec_plain.target_speed, rec_perm.target_speed);
        assert_eq!(rec_plain.effective_view, rec_perm.effective_view);

        plain = next_plain;
        permuted = next_perm;
    }
    println!("PASS determinism: byte-identical CSVs and agent-order invariance");
}

/// The dynamics module's target model is shared by the estimator oracle;
/// pin the contract that the oracle tracks the true target exactly.
#[test]
fn oracle_estimator_tracks_truth_exactly() {
    let truth = TargetState::new(Vector3::new(3.0, -4.0, 0.0), Vector3::new(1.5, 2.5, 0.0));
    let (p, v, _) = estimation::estimate(
        &skyring_core::config::ScenarioConfig::default().estimator,
        &truth,
        None,
        0.1,
        None,
    )
    .unwrap();
    assert_eq!(p, truth.position);
    assert_eq!(v, truth.velocity);
}

//! The deterministic fixed-step simulation engine.
//!
//! A run samples initial states from a seeded RNG, freezes the chain order,
//! and then repeats: evaluate every vehicle's controls against an immutable
//! snapshot of the world, advance all vehicles one RK4 step (controls are
//! re-evaluated at each stage so the integrator sees the continuous closed
//! loop), and check the safety distance. Telemetry frames are recorded on a
//! decimated cadence plus the final (or halting) step.
//!
//! Everything is single-threaded and bit-reproducible: the same scenario and
//! seed produce identical telemetry on a given platform.

#[cfg(not(feature = "std"))]
use crate::float::FloatMath;
use crate::angle::wrap_to_pi;
use crate::avoidance::{repulsion_command, AvoidanceParams};
use crate::guidance::{desired_heading, heading_rate_command, GuidanceParams};
use crate::path::{
    arc_length, cross_track_error, distance_to_path, tangent_direction, PathSpec, Position2D,
};
use crate::spacing::{gap_deficit, lyapunov_value, speed_command, ChainOrder, SpacingParams};
use crate::SimError;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Cross-track threshold defining "on the path" for the time-to-path metric.
pub const TIME_TO_PATH_EPS: f64 = 0.05;

/// Batch limit for rejection sampling of initial states.
const MAX_SAMPLING_BATCHES: u32 = 10_000;

/// Kinematic state of one vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavState {
    pub id: u32,
    /// Position (m).
    pub x: f64,
    pub y: f64,
    /// Heading, wrapped to `(-pi, pi]`.
    pub psi: f64,
    /// Last commanded speed (m/s).
    pub v: f64,
}

impl UavState {
    pub fn position(&self) -> Position2D {
        Position2D::new(self.x, self.y)
    }
}

/// Axis-aligned sampling region for initial positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn validate(&self) -> Result<(), SimError> {
        let finite = self.x_min.is_finite()
            && self.x_max.is_finite()
            && self.y_min.is_finite()
            && self.y_max.is_finite();
        if !finite || self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(SimError::InvalidParams("init_region must be a non-degenerate rectangle"));
        }
        Ok(())
    }
}

/// Initial-heading policy for sampled vehicles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitHeading {
    /// Uniform in `(-pi, pi]`.
    UniformRandom,
    /// The path-tangent direction at the sampled position.
    PathTangent,
    /// A fixed heading (radians; wrapped on use).
    Fixed(f64),
}

/// Complete description of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub path: PathSpec,
    pub n_uavs: usize,
    pub init_region: Rect,
    pub init_heading: InitHeading,
    /// Smallest admissible pairwise distance between sampled positions.
    pub min_init_separation: f64,
    pub rng_seed: u64,
    pub guidance: GuidanceParams,
    pub avoidance: AvoidanceParams,
    pub spacing: SpacingParams,
    /// Integration step (s).
    pub dt: f64,
    /// Run duration (s).
    pub t_end: f64,
    /// When set, a follower only runs the spacing law while its own
    /// cross-track error is below this threshold; otherwise it holds `v_nom`.
    pub spacing_gate: Option<f64>,
    /// Record one telemetry frame every this many steps.
    pub output_decimation: u32,
}

impl Scenario {
    /// Validates every parameter invariant. On success returns advisory
    /// warnings (configurations that are legal but known to behave poorly).
    pub fn validate(&self) -> Result<Vec<String>, SimError> {
        self.path.validate()?;
        self.init_region.validate()?;
        self.guidance.validate()?;
        self.avoidance.validate()?;
        self.spacing.validate()?;
        if self.n_uavs < 1 {
            return Err(SimError::InvalidParams("n_uavs must be at least 1"));
        }
        if !(self.min_init_separation >= 0.0) {
            return Err(SimError::InvalidParams("min_init_separation must be >= 0"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SimError::InvalidParams("dt must be > 0"));
        }
        if !(self.t_end > self.dt) {
            return Err(SimError::InvalidParams("t_end must exceed dt"));
        }
        if self.output_decimation == 0 {
            return Err(SimError::InvalidParams("output_decimation must be >= 1"));
        }
        if let Some(gate) = self.spacing_gate {
            if !(gate > 0.0) {
                return Err(SimError::InvalidParams("spacing_gate must be > 0 when set"));
            }
        }
        let mut warnings = Vec::new();
        if self.spacing.d_eq <= self.avoidance.r_s {
            warnings.push(String::from(
                "d_eq does not exceed r_s: equispaced vehicles sit inside each other's \
                 repulsion radius and will fight the spacing law",
            ));
        }
        Ok(warnings)
    }

    /// Number of integration steps in a full run.
    pub fn step_count(&self) -> u64 {
        (self.t_end / self.dt).round() as u64
    }
}

/// Controls and diagnostics for one vehicle, evaluated at one world snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlEval {
    pub epsilon: f64,
    pub chi_p: f64,
    pub psi_des: f64,
    pub omega_path: f64,
    pub omega_rep: f64,
    pub omega: f64,
    pub s: f64,
    /// Gap-deficit spacing error; zero for the leader.
    pub delta: f64,
    pub v: f64,
}

/// One telemetry row for one vehicle.
#[derive(Debug, Clone, PartialEq)]
pub struct UavFrame {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub v: f64,
    pub epsilon: f64,
    pub s: f64,
    pub delta: f64,
    pub omega_path: f64,
    pub omega_rep: f64,
    pub omega_total: f64,
    pub dist_to_path: f64,
}

/// Telemetry frame: per-vehicle rows plus fleet-level metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub t: f64,
    pub uavs: Vec<UavFrame>,
    /// Minimum pairwise distance at this frame; infinite for a single vehicle.
    pub e_min: f64,
    /// Lyapunov diagnostic over follower spacing errors.
    pub v_lyapunov: f64,
}

/// Aggregate outcome of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub min_e_over_run: f64,
    pub final_max_abs_epsilon: f64,
    pub final_max_abs_delta: f64,
    /// First time the fleet-wide max |epsilon| dropped below
    /// [`TIME_TO_PATH_EPS`]; `None` if that never happened.
    pub time_to_path: Option<f64>,
    pub collision: bool,
    /// Wall-clock duration of the run in seconds (0 in `no_std` builds).
    pub wall_time_s: f64,
}

/// Telemetry and summary of a completed (or halted) run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub frames: Vec<FrameRecord>,
    pub summary: RunSummary,
}

/// A run that failed outright; telemetry up to the failure is preserved.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub error: SimError,
    pub output: RunOutput,
}

/// Draws initial states for a scenario: positions uniform over the region,
/// redrawn as a whole batch until all pairwise distances reach
/// `min_init_separation`; headings then follow the heading policy. Fully
/// deterministic for a fixed seed.
pub fn sample_initial_states(scenario: &Scenario) -> Result<Vec<UavState>, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.rng_seed);
    let region = &scenario.init_region;
    let n = scenario.n_uavs;

    let mut positions: Vec<(f64, f64)> = Vec::with_capacity(n);
    let mut accepted = false;
    for _ in 0..MAX_SAMPLING_BATCHES {
        positions.clear();
        for _ in 0..n {
            let x = rng.gen_range(region.x_min..region.x_max);
            let y = rng.gen_range(region.y_min..region.y_max);
            positions.push((x, y));
        }
        let mut ok = true;
        'pairs: for i in 0..n {
            for j in (i + 1)..n {
                let d = (positions[i].0 - positions[j].0).hypot(positions[i].1 - positions[j].1);
                if d < scenario.min_init_separation {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            accepted = true;
            break;
        }
    }
    if !accepted {
        return Err(SimError::SamplingExhausted { batches: MAX_SAMPLING_BATCHES });
    }

    let states = positions
        .into_iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let psi = match scenario.init_heading {
                InitHeading::UniformRandom => rng.gen_range(-core::f64::consts::PI..core::f64::consts::PI),
                InitHeading::PathTangent => tangent_direction(&scenario.path, Position2D::new(x, y)),
                InitHeading::Fixed(h) => wrap_to_pi(h),
            };
            UavState { id: i as u32, x, y, psi: wrap_to_pi(psi), v: scenario.spacing.v_nom }
        })
        .collect();
    Ok(states)
}

/// Minimum pairwise distance over the fleet.
pub fn metrics_e(world: &[UavState]) -> Result<f64, SimError> {
    if world.len() < 2 {
        return Err(SimError::InsufficientAgents);
    }
    Ok(min_pair_distance(world))
}

fn min_pair_distance(world: &[UavState]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..world.len() {
        for j in (i + 1)..world.len() {
            let d = (world[i].x - world[j].x).hypot(world[i].y - world[j].y);
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// One classical RK4 step of the unicycle kinematics under constant controls.
///
/// With constant `v` and `omega` over the step this is the zero-order-hold
/// propagator; straight-line motion (omega = 0) is integrated exactly.
pub fn rk4_unicycle_step(x: f64, y: f64, psi: f64, v: f64, omega: f64, dt: f64) -> (f64, f64, f64) {
    let deriv = |psi: f64| (v * psi.cos(), v * psi.sin(), omega);
    let (k1x, k1y, k1p) = deriv(psi);
    let (k2x, k2y, k2p) = deriv(psi + 0.5 * dt * k1p);
    let (k3x, k3y, k3p) = deriv(psi + 0.5 * dt * k2p);
    let (k4x, k4y, k4p) = deriv(psi + dt * k3p);
    (
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        psi + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
    )
}

/// The simulation engine for one scenario.
#[derive(Debug, Clone)]
pub struct Simulator {
    scenario: Scenario,
    order: ChainOrder,
    /// Predecessor state index per state index (`None` for the leader).
    pred_index: Vec<Option<usize>>,
    states: Vec<UavState>,
    t: f64,
    steps_taken: u64,
    min_e: f64,
    time_to_path: Option<f64>,
    collided: bool,
}

impl Simulator {
    /// Validates the scenario, samples initial states, and freezes the chain
    /// order.
    pub fn new(scenario: Scenario) -> Result<Self, SimError> {
        scenario.validate()?;
        let states = sample_initial_states(&scenario)?;
        Self::with_states(scenario, states)
    }

    /// Builds an engine from explicit initial states (ids must be unique).
    pub fn with_states(scenario: Scenario, states: Vec<UavState>) -> Result<Self, SimError> {
        scenario.validate()?;
        if states.is_empty() {
            return Err(SimError::InvalidParams("at least one vehicle is required"));
        }
        for i in 0..states.len() {
            for j in (i + 1)..states.len() {
                if states[i].id == states[j].id {
                    return Err(SimError::InvalidParams("vehicle ids must be unique"));
                }
            }
        }
        let order = ChainOrder::establish(&scenario.path, &states);
        let pred_index = states
            .iter()
            .map(|u| {
                order
                    .predecessor_of(u.id)
                    .map(|pid| states.iter().position(|s| s.id == pid).expect("chain id"))
            })
            .collect();
        let min_e = min_pair_distance(&states);
        Ok(Self {
            scenario,
            order,
            pred_index,
            states,
            t: 0.0,
            steps_taken: 0,
            min_e,
            time_to_path: None,
            collided: false,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn order(&self) -> &ChainOrder {
        &self.order
    }

    pub fn states(&self) -> &[UavState] {
        &self.states
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    pub fn min_e_over_run(&self) -> f64 {
        self.min_e
    }

    pub fn time_to_path(&self) -> Option<f64> {
        self.time_to_path
    }

    pub fn collided(&self) -> bool {
        self.collided
    }

    /// Evaluates every vehicle's controls against the current world snapshot.
    pub fn evaluate_controls(&self) -> Result<Vec<ControlEval>, SimError> {
        evaluate_world(&self.scenario, &self.states, &self.pred_index)
    }

    /// Records boundary-time diagnostics from a control evaluation.
    fn observe_boundary(&mut self, evals: &[ControlEval]) {
        if self.time_to_path.is_none() {
            let max_eps = evals.iter().map(|e| e.epsilon.abs()).fold(0.0, f64::max);
            if max_eps < TIME_TO_PATH_EPS {
                self.time_to_path = Some(self.t);
            }
        }
    }

    /// Advances the world by one step, re-evaluating controls at every RK
    /// stage. `start_evals` must be the evaluation of the current snapshot.
    pub fn advance(&mut self, start_evals: &[ControlEval]) -> Result<(), SimError> {
        let dt = self.scenario.dt;
        let n = self.states.len();

        let d1 = derivatives(&self.states, start_evals);
        let s2 = offset_states(&self.states, &d1, 0.5 * dt);
        let e2 = evaluate_world(&self.scenario, &s2, &self.pred_index)?;
        let d2 = derivatives(&s2, &e2);
        let s3 = offset_states(&self.states, &d2, 0.5 * dt);
        let e3 = evaluate_world(&self.scenario, &s3, &self.pred_index)?;
        let d3 = derivatives(&s3, &e3);
        let s4 = offset_states(&self.states, &d3, dt);
        let e4 = evaluate_world(&self.scenario, &s4, &self.pred_index)?;
        let d4 = derivatives(&s4, &e4);

        for i in 0..n {
            let u = &mut self.states[i];
            u.x += dt / 6.0 * (d1[i].0 + 2.0 * d2[i].0 + 2.0 * d3[i].0 + d4[i].0);
            u.y += dt / 6.0 * (d1[i].1 + 2.0 * d2[i].1 + 2.0 * d3[i].1 + d4[i].1);
            u.psi = wrap_to_pi(u.psi + dt / 6.0 * (d1[i].2 + 2.0 * d2[i].2 + 2.0 * d3[i].2 + d4[i].2));
            u.v = start_evals[i].v;
        }
        self.t += dt;
        self.steps_taken += 1;

        if n >= 2 {
            let e = min_pair_distance(&self.states);
            if e < self.min_e {
                self.min_e = e;
            }
            if e <= self.scenario.avoidance.d_safe {
                self.collided = true;
                return Err(SimError::CollisionDetected { min_distance_m: e });
            }
        }
        Ok(())
    }

    /// Evaluates controls and advances one step.
    pub fn step(&mut self) -> Result<Vec<ControlEval>, SimError> {
        let evals = self.evaluate_controls()?;
        self.observe_boundary(&evals);
        self.advance(&evals)?;
        Ok(evals)
    }

    /// Builds the telemetry frame for the current snapshot.
    pub fn frame(&self, evals: &[ControlEval]) -> FrameRecord {
        let uavs: Vec<UavFrame> = self
            .states
            .iter()
            .zip(evals.iter())
            .map(|(u, e)| UavFrame {
                id: u.id,
                x: u.x,
                y: u.y,
                psi: u.psi,
                v: e.v,
                epsilon: e.epsilon,
                s: e.s,
                delta: e.delta,
                omega_path: e.omega_path,
                omega_rep: e.omega_rep,
                omega_total: e.omega,
                dist_to_path: distance_to_path(&self.scenario.path, u.position()),
            })
            .collect();
        let deltas: Vec<f64> = self
            .states
            .iter()
            .zip(evals.iter())
            .filter(|(u, _)| self.order.leader() != u.id)
            .map(|(_, e)| e.delta)
            .collect();
        FrameRecord {
            t: self.t,
            uavs,
            e_min: min_pair_distance(&self.states),
            v_lyapunov: lyapunov_value(&deltas),
        }
    }
}

fn evaluate_world(
    scenario: &Scenario,
    states: &[UavState],
    pred_index: &[Option<usize>],
) -> Result<Vec<ControlEval>, SimError> {
    let path = &scenario.path;
    let spacing: &SpacingParams = &scenario.spacing;
    let avoid: &AvoidanceParams = &scenario.avoidance;
    let guide: &GuidanceParams = &scenario.guidance;

    // Arc lengths first: every follower needs its predecessor's value.
    let arcs: Vec<f64> = states.iter().map(|u| arc_length(path, u.y)).collect();

    let mut out = Vec::with_capacity(states.len());
    for (i, u) in states.iter().enumerate() {
        let p = u.position();
        let epsilon = cross_track_error(path, p);
        let chi_p = tangent_direction(path, p);
        let psi_des = desired_heading(path, guide.k_g, p);
        let mut omega_path = heading_rate_command(guide.k_psi, psi_des, u.psi);
        if let Some(cap) = guide.max_omega {
            omega_path = omega_path.clamp(-cap, cap);
        }
        let omega_rep = repulsion_command(avoid, u, states)?;

        let (delta, gated_leader) = match pred_index[i] {
            None => (0.0, true),
            Some(pi) => {
                let delta = gap_deficit(arcs[i], arcs[pi], spacing.d_eq);
                let gated = match scenario.spacing_gate {
                    Some(gate) => epsilon.abs() >= gate,
                    None => false,
                };
                (delta, gated)
            }
        };
        let v = speed_command(spacing, delta, gated_leader);

        out.push(ControlEval {
            epsilon,
            chi_p,
            psi_des,
            omega_path,
            omega_rep,
            omega: omega_path + omega_rep,
            s: arcs[i],
            delta,
            v,
        });
    }
    Ok(out)
}

fn derivatives(states: &[UavState], evals: &[ControlEval]) -> Vec<(f64, f64, f64)> {
    states
        .iter()
        .zip(evals.iter())
        .map(|(u, e)| (e.v * u.psi.cos(), e.v * u.psi.sin(), e.omega))
        .collect()
}

fn offset_states(states: &[UavState], deriv: &[(f64, f64, f64)], h: f64) -> Vec<UavState> {
    states
        .iter()
        .zip(deriv.iter())
        .map(|(u, d)| UavState {
            id: u.id,
            x: u.x + h * d.0,
            y: u.y + h * d.1,
            psi: u.psi + h * d.2,
            v: u.v,
        })
        .collect()
}

/// Runs a scenario from t = 0 to t_end.
///
/// A collision halts the run and is reported in the summary, not as an
/// error. Hard failures (invalid scenario, coincident vehicles) return the
/// telemetry accumulated so far alongside the error.
pub fn run(scenario: &Scenario) -> Result<RunOutput, RunFailure> {
    #[cfg(feature = "std")]
    let started = std::time::Instant::now();

    let fail = |error: SimError, frames: Vec<FrameRecord>, sim: Option<&Simulator>| RunFailure {
        error,
        output: RunOutput {
            summary: RunSummary {
                min_e_over_run: sim.map_or(f64::INFINITY, |s| s.min_e),
                final_max_abs_epsilon: f64::NAN,
                final_max_abs_delta: f64::NAN,
                time_to_path: sim.and_then(|s| s.time_to_path),
                collision: false,
                wall_time_s: 0.0,
            },
            frames,
        },
    };

    let mut sim = match Simulator::new(scenario.clone()) {
        Ok(sim) => sim,
        Err(error) => return Err(fail(error, Vec::new(), None)),
    };
    let steps = scenario.step_count();
    let decimation = scenario.output_decimation as u64;
    let mut frames: Vec<FrameRecord> = Vec::new();

    let mut final_evals: Option<Vec<ControlEval>> = None;
    for step_idx in 0..=steps {
        let evals = match sim.evaluate_controls() {
            Ok(evals) => evals,
            Err(error) => return Err(fail(error, frames, Some(&sim))),
        };
        sim.observe_boundary(&evals);
        if step_idx % decimation == 0 || step_idx == steps {
            frames.push(sim.frame(&evals));
        }
        if step_idx == steps {
            final_evals = Some(evals);
            break;
        }
        match sim.advance(&evals) {
            Ok(()) => {}
            Err(SimError::CollisionDetected { .. }) => {
                // Record the halting frame and wrap up.
                let halt_evals = match sim.evaluate_controls() {
                    Ok(evals) => evals,
                    Err(error) => return Err(fail(error, frames, Some(&sim))),
                };
                sim.observe_boundary(&halt_evals);
                frames.push(sim.frame(&halt_evals));
                final_evals = Some(halt_evals);
                break;
            }
            Err(error) => return Err(fail(error, frames, Some(&sim))),
        }
    }

    let evals = final_evals.expect("loop always sets final evals");
    let final_max_abs_epsilon = evals.iter().map(|e| e.epsilon.abs()).fold(0.0, f64::max);
    let final_max_abs_delta = sim
        .states
        .iter()
        .zip(evals.iter())
        .filter(|(u, _)| sim.order.leader() != u.id)
        .map(|(_, e)| e.delta.abs())
        .fold(0.0, f64::max);

    #[cfg(feature = "std")]
    let wall_time_s = started.elapsed().as_secs_f64();
    #[cfg(not(feature = "std"))]
    let wall_time_s = 0.0;

    Ok(RunOutput {
        summary: RunSummary {
            min_e_over_run: sim.min_e,
            final_max_abs_epsilon,
            final_max_abs_delta,
            time_to_path: sim.time_to_path,
            collision: sim.collided,
            wall_time_s,
        },
        frames,
    })
}

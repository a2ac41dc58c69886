//! Two-vehicle engagement oracle.
//!
//! Integrates the repulsion-only closed loop (each vehicle turns under its
//! repulsive command alone, speeds held constant) from a sampled encounter
//! geometry. This is the independent dynamic check behind the gain-bound
//! analysis in [`crate::avoidance`]: the range rate here is measured from raw
//! kinematics, not from the lead-angle formulas it is used to verify.

#[cfg(not(feature = "std"))]
use crate::float::FloatMath;
use crate::angle::wrap_to_pi;
use crate::avoidance::COINCIDENCE_GUARD;
use rand::Rng;

/// Constant speeds and repulsion parameters of an engagement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngagementParams {
    pub speed_i: f64,
    pub speed_j: f64,
    pub k_r: f64,
    pub r_s: f64,
}

impl EngagementParams {
    /// Equal-speed engagement, the setting of the avoidance analysis.
    pub fn equal_speed(v: f64, k_r: f64, r_s: f64) -> Self {
        Self { speed_i: v, speed_j: v, k_r, r_s }
    }
}

/// Initial encounter geometry: vehicle i at the origin, vehicle j at
/// `separation` along `bearing`, with given headings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngagementGeometry {
    pub bearing: f64,
    pub psi_i: f64,
    pub psi_j: f64,
    pub separation: f64,
}

impl EngagementGeometry {
    /// Initial lead angles `(phi_i, phi_j)` of the pair.
    pub fn lead_angles(&self) -> (f64, f64) {
        (wrap_to_pi(self.bearing - self.psi_i), wrap_to_pi(self.bearing - self.psi_j))
    }

    /// True when both headings are within `tol` of the line of sight, where
    /// the repulsion direction degenerates.
    pub fn near_degenerate(&self, tol: f64) -> bool {
        let (phi_i, phi_j) = self.lead_angles();
        phi_i.sin().abs() < tol && phi_j.sin().abs() < tol
    }
}

/// Result of integrating one engagement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngagementOutcome {
    /// Smallest separation observed at any step boundary.
    pub min_separation: f64,
    /// Time of that smallest separation.
    pub time_of_min: f64,
    /// Separation when integration stopped.
    pub final_separation: f64,
    /// True if the pair passed within the coincidence guard (effectively a
    /// fly-through; only reachable with the repulsion disabled or overwhelmed).
    pub passed_through: bool,
}

/// State of the two-vehicle closed loop, stepped with classical RK4; the
/// repulsive controls are re-evaluated at every stage.
#[derive(Debug, Clone, Copy)]
pub struct TwoVehicleSim {
    params: EngagementParams,
    /// (x_i, y_i, psi_i, x_j, y_j, psi_j)
    state: [f64; 6],
    t: f64,
}

impl TwoVehicleSim {
    pub fn new(params: EngagementParams, geometry: EngagementGeometry) -> Self {
        let state = [
            0.0,
            0.0,
            geometry.psi_i,
            geometry.separation * geometry.bearing.cos(),
            geometry.separation * geometry.bearing.sin(),
            geometry.psi_j,
        ];
        Self { params, state, t: 0.0 }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// Current separation of the pair.
    pub fn separation(&self) -> f64 {
        let [xi, yi, _, xj, yj, _] = self.state;
        (xj - xi).hypot(yj - yi)
    }

    /// Range rate measured directly from the kinematics: the relative
    /// velocity projected onto the line of sight.
    pub fn separation_rate(&self) -> f64 {
        let [xi, yi, psi_i, xj, yj, psi_j] = self.state;
        let (dx, dy) = (xj - xi, yj - yi);
        let d = dx.hypot(dy);
        if d < COINCIDENCE_GUARD {
            return 0.0;
        }
        let dvx = self.params.speed_j * psi_j.cos() - self.params.speed_i * psi_i.cos();
        let dvy = self.params.speed_j * psi_j.sin() - self.params.speed_i * psi_i.sin();
        (dx * dvx + dy * dvy) / d
    }

    fn derivative(&self, s: &[f64; 6]) -> [f64; 6] {
        let [xi, yi, psi_i, xj, yj, psi_j] = *s;
        let (dx, dy) = (xj - xi, yj - yi);
        let d = dx.hypot(dy);
        let (mut w_i, mut w_j) = (0.0, 0.0);
        // Inside the coincidence guard the weight would overflow; the pair is
        // already fly-through at that point, so repulsion is left off.
        if d <= self.params.r_s && d >= COINCIDENCE_GUARD {
            let weight = self.params.k_r * (1.0 / d - 1.0 / self.params.r_s);
            let bearing = dy.atan2(dx);
            w_i = -weight * (bearing - psi_i).sin();
            // Seen from j the bearing is flipped by pi, negating the sine.
            w_j = weight * (bearing - psi_j).sin();
        }
        [
            self.params.speed_i * psi_i.cos(),
            self.params.speed_i * psi_i.sin(),
            w_i,
            self.params.speed_j * psi_j.cos(),
            self.params.speed_j * psi_j.sin(),
            w_j,
        ]
    }

    /// Advances one RK4 step of `dt` (which may be negative).
    pub fn step(&mut self, dt: f64) {
        let y = self.state;
        let k1 = self.derivative(&y);
        let k2 = self.derivative(&stage(&y, &k1, 0.5 * dt));
        let k3 = self.derivative(&stage(&y, &k2, 0.5 * dt));
        let k4 = self.derivative(&stage(&y, &k3, dt));
        for idx in 0..6 {
            self.state[idx] = y[idx] + dt / 6.0 * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
        }
        self.t += dt;
    }
}

fn stage(y: &[f64; 6], k: &[f64; 6], h: f64) -> [f64; 6] {
    let mut out = [0.0; 6];
    for idx in 0..6 {
        out[idx] = y[idx] + h * k[idx];
    }
    out
}

/// Integrates an engagement until the pair is separated beyond the activation
/// radius and diverging, or `t_max` elapses.
pub fn simulate_engagement(
    params: EngagementParams,
    geometry: EngagementGeometry,
    dt: f64,
    t_max: f64,
) -> EngagementOutcome {
    let mut sim = TwoVehicleSim::new(params, geometry);
    let mut min_separation = sim.separation();
    let mut time_of_min = 0.0;
    let mut passed_through = false;
    while sim.time() < t_max {
        sim.step(dt);
        let d = sim.separation();
        if d < min_separation {
            min_separation = d;
            time_of_min = sim.time();
        }
        if d < COINCIDENCE_GUARD {
            passed_through = true;
        }
        // Outside the activation radius both vehicles fly straight, and a
        // currently-opening straight-line pair keeps opening forever.
        if d > params.r_s && sim.separation_rate() >= 0.0 {
            break;
        }
    }
    EngagementOutcome {
        min_separation,
        time_of_min,
        final_separation: sim.separation(),
        passed_through,
    }
}

/// Draws an encounter geometry at separation `r_s` with uniform bearing and
/// headings, rejecting until the pair is actually closing.
pub fn sample_closing_geometry<R: Rng + ?Sized>(rng: &mut R, v: f64, r_s: f64) -> EngagementGeometry {
    use core::f64::consts::PI;
    loop {
        let g = EngagementGeometry {
            bearing: rng.gen_range(-PI..PI),
            psi_i: rng.gen_range(-PI..PI),
            psi_j: rng.gen_range(-PI..PI),
            separation: r_s,
        };
        let (phi_i, phi_j) = g.lead_angles();
        if v * (phi_j.cos() - phi_i.cos()) < 0.0 {
            return g;
        }
    }
}

//! Rotational collision repulsion and its analytical certificates.
//!
//! Each vehicle adds a turn-rate term that rotates it away from every
//! neighbor inside the activation radius, weighted by inverse distance. The
//! rest of the module is the analysis toolkit for that law: range and bearing
//! dynamics under equal speeds, the separation at which repulsive
//! acceleration balances the closing geometry, and the repulsion-gain bounds
//! that keep that separation above the safety distance.

#[cfg(not(feature = "std"))]
use crate::float::FloatMath;
use crate::angle::wrap_to_pi;
use crate::sim::UavState;
use crate::SimError;

/// Distance below which two vehicles are treated as coincident.
pub const COINCIDENCE_GUARD: f64 = 1e-9;

/// Parameters of the repulsion law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvoidanceParams {
    /// Repulsion gain (m^2/s).
    pub k_r: f64,
    /// Activation radius: repulsion is active at separations at or below this.
    pub r_s: f64,
    /// Safety distance that must never be violated.
    pub d_safe: f64,
}

impl AvoidanceParams {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.k_r >= 0.0 && self.k_r.is_finite()) {
            return Err(SimError::InvalidParams("k_r must be >= 0 and finite"));
        }
        if !(self.d_safe > 0.0) {
            return Err(SimError::InvalidParams("d_safe must be > 0"));
        }
        if !(self.r_s > self.d_safe) {
            return Err(SimError::InvalidParams("r_s must exceed d_safe"));
        }
        Ok(())
    }
}

/// Relative geometry of an ordered vehicle pair (i, j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    /// Separation in meters.
    pub d: f64,
    /// Bearing from i to j in the world frame, in `(-pi, pi]`.
    pub bearing: f64,
    /// Lead angle of i: bearing minus i's heading, wrapped.
    pub phi_i: f64,
    /// Lead angle of j: bearing minus j's heading, wrapped.
    pub phi_j: f64,
}

/// Computes separation, bearing, and both lead angles for a vehicle pair.
pub fn pair_geometry(state_i: &UavState, state_j: &UavState) -> Result<PairGeometry, SimError> {
    let dx = state_j.x - state_i.x;
    let dy = state_j.y - state_i.y;
    let d = dx.hypot(dy);
    if d < COINCIDENCE_GUARD {
        return Err(SimError::CoincidentPositions { id_a: state_i.id, id_b: state_j.id });
    }
    let bearing = dy.atan2(dx);
    Ok(PairGeometry {
        d,
        bearing,
        phi_i: wrap_to_pi(bearing - state_i.psi),
        phi_j: wrap_to_pi(bearing - state_j.psi),
    })
}

/// Repulsive turn-rate from one neighbor at separation `d` and bearing
/// `bearing`, for a vehicle heading `psi`. Zero at and beyond the activation
/// radius.
fn repulsion_term(params: &AvoidanceParams, d: f64, bearing: f64, psi: f64) -> f64 {
    if d > params.r_s {
        return 0.0;
    }
    -params.k_r * (1.0 / d - 1.0 / params.r_s) * (bearing - psi).sin()
}

/// Total repulsive turn-rate command for `own` against `neighbors`.
///
/// Neighbors beyond the activation radius contribute nothing and may be
/// passed freely; the contribution fades to exactly zero at the radius, so
/// the command is continuous through activation.
pub fn repulsion_command(
    params: &AvoidanceParams,
    own: &UavState,
    neighbors: &[UavState],
) -> Result<f64, SimError> {
    let mut omega = 0.0;
    for other in neighbors {
        if other.id == own.id {
            continue;
        }
        let g = pair_geometry(own, other)?;
        omega += repulsion_term(params, g.d, g.bearing, own.psi);
    }
    Ok(omega)
}

/// Total turn-rate input: path-following command plus repulsion.
pub fn total_heading_rate(omega_path: f64, omega_rep: f64) -> f64 {
    omega_path + omega_rep
}

/// Range rate of a pair under equal speeds `v`: `v (cos phi_j - cos phi_i)`.
pub fn range_rate(v: f64, g: &PairGeometry) -> f64 {
    v * (g.phi_j.cos() - g.phi_i.cos())
}

/// Range acceleration of a pair under equal speeds with repulsion active:
///
/// `-(v^2/d) (sin phi_j - sin phi_i)^2 + v Omega (sin^2 phi_i + sin^2 phi_j)`
///
/// with `Omega = k_r (1/d - 1/R_s)`. Only defined while repulsion is active
/// (`d <= R_s`) and the pair is separated.
pub fn range_accel(v: f64, k_r: f64, r_s: f64, g: &PairGeometry) -> Result<f64, SimError> {
    if g.d <= 0.0 {
        return Err(SimError::DomainError("range_accel requires d > 0"));
    }
    if g.d > r_s {
        return Err(SimError::DomainError("range_accel requires active repulsion (d <= R_s)"));
    }
    let (si, sj) = (g.phi_i.sin(), g.phi_j.sin());
    let omega = k_r * (1.0 / g.d - 1.0 / r_s);
    let closing = sj - si;
    Ok(-(v * v / g.d) * closing * closing + v * omega * (si * si + sj * sj))
}

/// Numerical zero for the degeneracy test: `sin(pi)` in f64 is ~1.2e-16, so
/// exact alignment with the line of sight must be detected with a tolerance.
const DEGENERACY_EPS: f64 = 1e-12;

fn lead_angle_ratio(g: &PairGeometry) -> Result<f64, SimError> {
    let (si, sj) = (g.phi_i.sin(), g.phi_j.sin());
    if si.abs() < DEGENERACY_EPS && sj.abs() < DEGENERACY_EPS {
        return Err(SimError::DegenerateGeometry);
    }
    let num = (sj - si) * (sj - si);
    Ok(num / (si * si + sj * sj))
}

/// Separation at which the repulsive term exactly cancels the closing-geometry
/// deceleration:
///
/// `d* = R_s (1 - v (sin phi_j - sin phi_i)^2 / (k_r (sin^2 phi_i + sin^2 phi_j)))`
///
/// May be negative for small gains, meaning the range acceleration never
/// changes sign at a positive separation.
pub fn critical_separation(
    v: f64,
    k_r: f64,
    r_s: f64,
    g: &PairGeometry,
) -> Result<f64, SimError> {
    let ratio = lead_angle_ratio(g)?;
    Ok(r_s * (1.0 - v * ratio / k_r))
}

/// Geometry-independent sufficient repulsion gain `2 v R_s / (R_s - d_safe)`:
/// any `k_r` strictly above it puts the critical separation above `d_safe`
/// for every non-degenerate pair geometry.
pub fn sufficient_gain(v: f64, r_s: f64, d_safe: f64) -> Result<f64, SimError> {
    if !(r_s > d_safe) {
        return Err(SimError::InvalidParams("sufficient_gain requires R_s > d_safe"));
    }
    Ok(2.0 * v * r_s / (r_s - d_safe))
}

/// Geometry-specific gain bound
/// `(v R_s / (R_s - d_safe)) (sin phi_j - sin phi_i)^2 / (sin^2 phi_i + sin^2 phi_j)`.
///
/// The trig ratio never exceeds 2, so this is at most [`sufficient_gain`].
pub fn geometry_gain_bound(
    v: f64,
    r_s: f64,
    d_safe: f64,
    g: &PairGeometry,
) -> Result<f64, SimError> {
    if !(r_s > d_safe) {
        return Err(SimError::InvalidParams("geometry_gain_bound requires R_s > d_safe"));
    }
    let ratio = lead_angle_ratio(g)?;
    Ok(v * r_s / (r_s - d_safe) * ratio)
}

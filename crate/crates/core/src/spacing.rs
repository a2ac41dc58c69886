//! Equispacing control along the path.
//!
//! Vehicles form a fixed chain ordered by arc length at the start of a run.
//! Each follower regulates its speed against its immediate predecessor
//! through a tanh law, which keeps every commanded speed strictly inside
//! `(v_nom - kappa, v_nom + kappa)` and therefore strictly positive.

#[cfg(not(feature = "std"))]
use crate::float::FloatMath;
use crate::angle::wrap_to_pi;
use crate::path::{arc_length, PathSpec};
use crate::sim::UavState;
use crate::SimError;
use alloc::vec::Vec;

/// Parameters of the longitudinal speed law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingParams {
    /// Nominal speed shared by the fleet; the leader holds it exactly (m/s).
    pub v_nom: f64,
    /// Speed authority of the tanh law, in (0, v_nom) (m/s).
    pub kappa: f64,
    /// Desired arc-length gap between consecutive vehicles (m).
    pub d_eq: f64,
}

impl SpacingParams {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.v_nom > 0.0 && self.v_nom.is_finite()) {
            return Err(SimError::InvalidParams("v_nom must be > 0"));
        }
        if !(self.kappa > 0.0 && self.kappa < self.v_nom) {
            return Err(SimError::InvalidParams("kappa must satisfy 0 < kappa < v_nom"));
        }
        if !(self.d_eq > 0.0 && self.d_eq.is_finite()) {
            return Err(SimError::InvalidParams("d_eq must be > 0"));
        }
        Ok(())
    }
}

/// Chain ordering of the fleet: index 0 is the leader (largest arc-length
/// parameter at the time the order was established); each later entry
/// follows the one before it. The order is frozen for the whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOrder {
    ids: Vec<u32>,
}

impl ChainOrder {
    /// Sorts vehicles by descending initial arc length, breaking ties by
    /// ascending id, and freezes that order.
    pub fn establish(path: &PathSpec, initial_states: &[UavState]) -> ChainOrder {
        let mut keyed: Vec<(f64, u32)> = initial_states
            .iter()
            .map(|u| (arc_length(path, u.y), u.id))
            .collect();
        keyed.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.1.cmp(&b.1))
        });
        ChainOrder { ids: keyed.into_iter().map(|(_, id)| id).collect() }
    }

    /// Ids from leader to tail.
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn leader(&self) -> u32 {
        self.ids[0]
    }

    /// The id immediately ahead of `id` in the chain, or `None` for the leader.
    pub fn predecessor_of(&self, id: u32) -> Option<u32> {
        let rank = self.ids.iter().position(|&i| i == id)?;
        if rank == 0 {
            None
        } else {
            Some(self.ids[rank - 1])
        }
    }
}

/// The literal spacing error `s_self - s_pred - d_eq`.
///
/// Kept as documented for reference; note that for a follower trailing its
/// predecessor this is negative even at the desired gap. The closed loop
/// regulates [`gap_deficit`] instead, whose zero is the desired spacing (see
/// that function for the relation between the two).
pub fn spacing_error(s_self: f64, s_pred: f64, d_eq: f64) -> f64 {
    s_self - s_pred - d_eq
}

/// How far the gap to the predecessor has closed beyond the desired spacing:
/// `d_eq - (s_pred - s_self)`, i.e. `s_self - s_pred + d_eq`.
///
/// Positive means the follower is too close (or ahead) and must slow down;
/// negative means the gap is too wide and it must speed up; zero at the
/// desired spacing. Equal to the negated [`spacing_error`] with the pair's
/// roles swapped. This is the quantity the simulator logs as `delta` and
/// feeds to [`speed_command`]; of the two sign readings of the spacing error
/// it is the one under which the closed loop is stabilizing, as checked by
/// the brute-force oracle in this module's tests.
pub fn gap_deficit(s_self: f64, s_pred: f64, d_eq: f64) -> f64 {
    s_self - s_pred + d_eq
}

/// Longitudinal speed command.
///
/// The leader holds `v_nom`; a follower runs `v_nom - kappa * tanh(delta)`,
/// strictly inside `(v_nom - kappa, v_nom + kappa)` and strictly decreasing
/// in `delta` (too close slows down, too far behind speeds up).
pub fn speed_command(params: &SpacingParams, delta: f64, is_leader: bool) -> f64 {
    if is_leader {
        params.v_nom
    } else {
        params.v_nom - params.kappa * delta.tanh()
    }
}

/// Lyapunov diagnostic: half the sum of squared follower spacing errors.
pub fn lyapunov_value(deltas: &[f64]) -> f64 {
    0.5 * deltas.iter().map(|d| d * d).sum::<f64>()
}

/// Rate of progress along the path: the speed component tangent to it,
/// `v cos(psi - chi_p)`. Equals `v` exactly when aligned with the tangent.
pub fn path_progress_rate(v: f64, psi: f64, chi_p: f64) -> f64 {
    v * wrap_to_pi(psi - chi_p).cos()
}

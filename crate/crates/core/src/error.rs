//! Error type shared by the control laws and the simulation engine.

use core::fmt;

/// Errors raised by geometry queries, control-law evaluation, scenario
/// sampling, and the simulation engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimError {
    /// Two vehicles are closer than the coincidence guard (1e-9 m).
    ///
    /// Reaching this state means separation was already lost; with an adequate
    /// repulsion gain the engine halts on `CollisionDetected` long before.
    CoincidentPositions { id_a: u32, id_b: u32 },
    /// A formula was evaluated outside the regime in which it is defined.
    DomainError(&'static str),
    /// Both lead angles are aligned with the line of sight, so the repulsion
    /// direction (and the critical-separation ratio) is undefined.
    DegenerateGeometry,
    /// A parameter violates its documented invariant.
    InvalidParams(&'static str),
    /// Initial-state sampling could not satisfy the separation constraint.
    SamplingExhausted { batches: u32 },
    /// A pairwise distance metric was requested for fewer than two vehicles.
    InsufficientAgents,
    /// A post-step pairwise distance dropped to the safety distance or below;
    /// the run halts and the summary flags the collision.
    CollisionDetected { min_distance_m: f64 },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::CoincidentPositions { id_a, id_b } => {
                write!(f, "vehicles {id_a} and {id_b} are coincident (separation < 1e-9 m)")
            }
            SimError::DomainError(what) => write!(f, "domain error: {what}"),
            SimError::DegenerateGeometry => {
                write!(f, "degenerate geometry: both headings aligned with the line of sight")
            }
            SimError::InvalidParams(what) => write!(f, "invalid parameters: {what}"),
            SimError::SamplingExhausted { batches } => write!(
                f,
                "initial-state sampling failed after {batches} rejected batches; \
                 the region cannot fit the requested vehicles at the minimum separation"
            ),
            SimError::InsufficientAgents => {
                write!(f, "pairwise metric requires at least two vehicles")
            }
            SimError::CollisionDetected { min_distance_m } => {
                write!(f, "collision: pairwise distance {min_distance_m} m at or below the safety distance")
            }
        }
    }
}

impl core::error::Error for SimError {}

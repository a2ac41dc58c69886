//! Deterministic multi-UAV path-following on open reference paths.
//!
//! The crate implements a decentralized guidance-and-control stack for planar
//! unicycle vehicles:
//!
//! * [`path`] — reference-path geometry (cross-track error, tangent direction,
//!   arc length, point-to-path distance) for straight-line and sinusoidal paths;
//! * [`guidance`] — an arcsine-shaped vector-field heading law and the
//!   proportional heading-rate command that steers a vehicle onto the path;
//! * [`avoidance`] — pairwise rotational repulsion plus the analytical
//!   machinery (range dynamics, critical separation, gain bounds) used to
//!   certify collision avoidance;
//! * [`engagement`] — a two-vehicle repulsion-only closed loop used as an
//!   independent oracle for the avoidance analysis;
//! * [`spacing`] — predecessor-based equispacing speed control along the path
//!   and its Lyapunov diagnostic;
//! * [`sim`] — the fixed-step deterministic simulation engine, scenario
//!   sampling, telemetry records, and run summaries.
//!
//! All control laws are pure functions of the current world state; the engine
//! evaluates every vehicle against an immutable snapshot, so results are
//! independent of evaluation order and bit-reproducible for a fixed scenario
//! and seed.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the default
//! `std` feature and enable `libm` to build for targets without a Rust
//! standard library.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("pathswarm-core requires either the `std` or the `libm` feature");

pub mod angle;
pub mod avoidance;
pub mod engagement;
pub mod error;
mod float;
pub mod guidance;
pub mod path;
pub mod sim;
pub mod spacing;

pub use error::SimError;
pub use path::{PathSpec, Position2D};
pub use sim::{FrameRecord, RunSummary, Scenario, UavState};

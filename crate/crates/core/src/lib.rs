//! Vector-space driving simulation and policy learning.
//!
//! The crate is organised around a short-horizon, rendering-free driving
//! simulator: scenarios are vector snapshots (ego state, agent tracks, a
//! polyline map), the ego follows a kinematic bicycle model under PID
//! control, surrounding agents replay or react, and a shaped reward scores
//! the simulated outcome. On top of that sit a small reverse-mode autodiff
//! engine, a decoupled lateral/longitudinal planner with a reactive agent
//! predictor, the stage-2 training loop, and a closed-loop evaluation
//! harness.

pub mod agents;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod nn;
pub mod policy;
pub mod reward;
pub mod scenario;
pub mod training;
pub mod util;
pub mod vehicle;

pub use error::{Error, Result};
pub use geometry::{MarkingKind, OrientedBox, Point2, Polyline, Pose2};
pub use scenario::{AgentKind, AgentTrack, BoxDims, Navigation, Scenario, Trajectory};
pub use vehicle::{EgoSimConfig, KinematicState, PlanAction};

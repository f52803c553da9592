//! Strategic agents facing a threshold decision-maker when effort pays off
//! slowly: qualification dynamics, discounted-utility best responses,
//! welfare-maximizing thresholds, manipulation and forgetting.
//!
//! Similarities `x` are inner products between a unit qualification profile
//! and the unit ideal profile, so they live in `[0, 1]`. A [`Scenario`]
//! fixes the acceptance threshold `theta` and the per-round discount rate `r`.

pub mod agent;
pub mod dynamics;
pub mod error;
pub mod manipulation;
pub mod numeric;
pub mod policy;
pub mod population;

pub use agent::{Action, BestResponse, IncentiveConstant, Scenario};
pub use dynamics::{EffortSchedule, Profile};
pub use error::{Error, Result};
pub use manipulation::{ManipulationRegion, ManipulationSetting};
pub use policy::{OptimalThreshold, PolicyEvaluation};
pub use population::Density;

/// Tolerance for "unit norm" and "reached the threshold" checks.
pub const TOL: f64 = 1e-9;

//! Simulation and verification laboratory for linearly edge-reinforced
//! random walks on the half-line.
//!
//! The crate provides:
//!
//! - [`weights`]: the `x^alpha (ln x)^beta` initial-weight profiles and
//!   their analytic recurrence/transience classification;
//! - [`lerrw`]: the reinforced walk itself (simulation, exact path
//!   probabilities, exhaustive small-horizon enumeration);
//! - [`environment`]: the equivalent random walk in a Beta random
//!   environment, with the exact annealed path-probability oracle;
//! - [`resistance`]: electrical-network quantities and expected hitting
//!   times for arbitrary positive weight sequences;
//! - [`specialfn`]: digamma/trigamma/log-Beta, the closed-form moments of
//!   the environment log-resistance, and asymptotic regime predictors;
//! - [`experiments`]: reproducible ensemble experiments comparing
//!   simulations against the closed forms.

pub mod environment;
pub mod error;
pub mod experiments;
pub mod lerrw;
pub mod numeric;
pub mod resistance;
pub mod rng;
pub mod specialfn;
pub mod weights;

pub use environment::{annealed_path_probability, sample_environment, Environment};
pub use error::{Error, Result};
pub use experiments::{run_experiment, ExperimentConfig, ExperimentOutput, Mode};
pub use lerrw::{path_probability, simulate, ReinforcedState, Schedule, WalkStats};
pub use resistance::{build_resistance_profile, ResistanceProfile, WeightSequence};
pub use specialfn::{digamma, k_constant, log_beta, mean_s, trigamma, var_s};
pub use weights::{ProfileFamily, RecurrenceVerdict, Verdict, WeightProfile};

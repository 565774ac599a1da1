//! Monte Carlo campaigns: random single-cell deployments, per-link gains,
//! the four rate tables per deployment, optimal pairing, and aggregation.

pub mod campaign;
pub mod config;
pub mod deployment;
pub mod gains;

pub use campaign::{
    aggregate, build_tables, run_campaign, run_sweep, run_trial, run_trials, trial_rngs,
    CampaignResult, ScenarioStats, SweepParam, SweepPoint, TrialOutcome,
};
pub use config::SimConfig;
pub use deployment::{generate_deployment, in_hexagon, Deployment, Point};
pub use gains::{gains_from_deployment, link_gain, sample_instance};

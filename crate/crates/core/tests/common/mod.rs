#![allow(dead_code)]

use d2d_underlay::model::Instance;
pub use d2d_underlay::oracle::solution_feasible;
use d2d_underlay::sim::{sample_instance, SimConfig};
use rand::Rng;

/// One pair and one CU from the default deployment, with the
/// self-interference level and CU floor drawn from the evaluated ranges.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let c = SimConfig {
        eta_db: rng.gen_range(-130.0..=-80.0),
        r_u_min_bps: rng.gen_range(0.5e6..=3e6),
        ..SimConfig::default()
    };
    sample_instance(&c, rng)
}

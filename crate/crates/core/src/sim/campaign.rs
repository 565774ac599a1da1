use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assignment::{hungarian_max, RateEntry, RateTable};
use crate::error::Result;
use crate::model::{Instance, ScenarioKind};
use crate::sim::config::SimConfig;
use crate::sim::deployment::generate_deployment;
use crate::sim::gains::gains_from_deployment;
use crate::solvers::solve_all;

/// Independent generators for one trial: node placement and shadowing.
///
/// Both come from the master seed through disjoint ChaCha streams, so a
/// trial's randomness does not depend on which other trials run or in
/// which order.
pub fn trial_rngs(master_seed: u64, trial: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut placement = ChaCha8Rng::seed_from_u64(master_seed);
    placement.set_stream(2 * trial);
    let mut shadowing = ChaCha8Rng::seed_from_u64(master_seed);
    shadowing.set_stream(2 * trial + 1);
    (placement, shadowing)
}

/// Outcome of one trial, indexed like [`ScenarioKind::ALL`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub totals_bps: [f64; 4],
    pub sic_pairs: [usize; 4],
    /// `(pair, CU)` combinations where the CU cannot meet its floor.
    pub infeasible_entries: usize,
}

/// The four rate tables of one deployment.
pub fn build_tables(config: &SimConfig, trial: u64) -> Result<[RateTable; 4]> {
    let (mut placement, mut shadowing) = trial_rngs(config.master_seed, trial);
    let deployment = generate_deployment(config, &mut placement);
    let gains = gains_from_deployment(&deployment, config, &mut shadowing);
    let params = config.params();
    let limits = config.limits();
    let mut out = (0..4)
        .map(|_| RateTable::new(config.d_pairs, config.k_users))
        .collect::<Result<Vec<_>>>()?;
    for (n, row) in gains.iter().enumerate() {
        for (i, g) in row.iter().enumerate() {
            let inst = Instance {
                gains: *g,
                params,
                limits,
            };
            for (table, sol) in out.iter_mut().zip(solve_all(&inst)) {
                let entry = match sol {
                    Ok(s) => RateEntry::feasible(s.r_d2d_bps, s.sic_applied),
                    Err(_) => RateEntry::infeasible(),
                };
                table.set(n, i, entry)?;
            }
        }
    }
    Ok(out.try_into().expect("four tables"))
}

pub fn run_trial(config: &SimConfig, trial: u64) -> Result<TrialOutcome> {
    let tables = build_tables(config, trial)?;
    let mut totals_bps = [0.0; 4];
    let mut sic_pairs = [0; 4];
    for (k, table) in tables.iter().enumerate() {
        let (a, total) = hungarian_max(table)?;
        totals_bps[k] = total;
        sic_pairs[k] = a.sic_count(table);
    }
    let hd = &tables[1];
    let infeasible_entries = (0..hd.rows())
        .flat_map(|r| (0..hd.cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| hd.get(r, c).infeasible)
        .count();
    Ok(TrialOutcome {
        totals_bps,
        sic_pairs,
        infeasible_entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScenarioStats {
    pub mean_total_bps: f64,
    pub mean_per_pair_bps: f64,
    pub mean_sic_pairs: f64,
    /// Half-width of the normal-approximation 95% interval of the mean total.
    pub ci95_bps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    EtaDb,
    RuMinMbps,
    DMaxM,
    KUsers,
    DPairs,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::EtaDb,
        SweepParam::RuMinMbps,
        SweepParam::DMaxM,
        SweepParam::KUsers,
        SweepParam::DPairs,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            SweepParam::EtaDb => "eta_db",
            SweepParam::RuMinMbps => "r_u_min_mbps",
            SweepParam::DMaxM => "d_max_m",
            SweepParam::KUsers => "k_users",
            SweepParam::DPairs => "d_pairs",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.key() == key)
    }

    /// Copy of `base` with this parameter set to `value`. Counts are
    /// rounded to the nearest integer.
    pub fn apply(&self, base: &SimConfig, value: f64) -> SimConfig {
        let mut c = base.clone();
        match self {
            SweepParam::EtaDb => c.eta_db = value,
            SweepParam::RuMinMbps => c.r_u_min_bps = value * 1e6,
            SweepParam::DMaxM => c.d_max_m = value,
            SweepParam::KUsers => c.k_users = value.round().max(0.0) as usize,
            SweepParam::DPairs => c.d_pairs = value.round().max(0.0) as usize,
        }
        c
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// `None` for a single campaign without a swept axis.
    pub param: Option<SweepParam>,
    pub value: f64,
    /// Indexed like [`ScenarioKind::ALL`].
    pub stats: [ScenarioStats; 4],
    pub trials: usize,
    pub seed: u64,
    pub mean_infeasible_entries: f64,
}

impl SweepPoint {
    pub fn stats_for(&self, kind: ScenarioKind) -> &ScenarioStats {
        let k = ScenarioKind::ALL.iter().position(|&x| x == kind).expect("known kind");
        &self.stats[k]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub points: Vec<SweepPoint>,
}

/// Every trial of a campaign, in trial order.
pub fn run_trials(config: &SimConfig) -> Result<Vec<TrialOutcome>> {
    config.validate()?;
    (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect()
}

/// Means and confidence half-widths over trials. The reduction runs in
/// trial order so the result does not depend on thread scheduling.
pub fn aggregate(config: &SimConfig, outcomes: &[TrialOutcome]) -> [ScenarioStats; 4] {
    let n = outcomes.len() as f64;
    let mut stats = [ScenarioStats::default(); 4];
    if outcomes.is_empty() {
        return stats;
    }
    for (k, s) in stats.iter_mut().enumerate() {
        let mean = outcomes.iter().map(|o| o.totals_bps[k]).sum::<f64>() / n;
        let var = if outcomes.len() > 1 {
            outcomes
                .iter()
                .map(|o| (o.totals_bps[k] - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0)
        } else {
            0.0
        };
        s.mean_total_bps = mean;
        s.mean_per_pair_bps = if config.d_pairs > 0 {
            mean / config.d_pairs as f64
        } else {
            0.0
        };
        s.mean_sic_pairs = outcomes.iter().map(|o| o.sic_pairs[k] as f64).sum::<f64>() / n;
        s.ci95_bps = 1.96 * (var / n).sqrt();
    }
    stats
}

fn run_point(config: &SimConfig, param: Option<SweepParam>, value: f64) -> Result<SweepPoint> {
    let outcomes = run_trials(config)?;
    let n = outcomes.len().max(1) as f64;
    Ok(SweepPoint {
        param,
        value,
        stats: aggregate(config, &outcomes),
        trials: config.trials,
        seed: config.master_seed,
        mean_infeasible_entries: outcomes.iter().map(|o| o.infeasible_entries as f64).sum::<f64>() / n,
    })
}

pub fn run_campaign(config: &SimConfig) -> Result<CampaignResult> {
    Ok(CampaignResult {
        points: vec![run_point(config, None, f64::NAN)?],
    })
}

/// One campaign per value, all sharing the master seed so that points
/// differ only in the swept parameter.
pub fn run_sweep(base: &SimConfig, param: SweepParam, values: &[f64]) -> Result<CampaignResult> {
    let points = values
        .iter()
        .map(|&v| run_point(&param.apply(base, v), Some(param), v))
        .collect::<Result<_>>()?;
    Ok(CampaignResult { points })
}

//! Campaign configuration files.

use anyhow::{bail, Result};
use d2d_underlay::sim::{SimConfig, SweepParam};

use crate::kv::{self, Entry};

/// Base configuration plus at most one swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSpec {
    pub base: SimConfig,
    pub sweep: Option<(SweepParam, Vec<f64>)>,
}

impl CampaignSpec {
    /// Every configuration the campaign will run, validated.
    pub fn configs(&self) -> Result<Vec<SimConfig>> {
        let configs = match &self.sweep {
            None => vec![self.base.clone()],
            Some((p, values)) => values.iter().map(|&v| p.apply(&self.base, v)).collect(),
        };
        for c in &configs {
            c.validate()?;
        }
        Ok(configs)
    }
}

const KEYS: [&str; 15] = [
    "cell_radius_m",
    "path_loss_exponent",
    "shadowing_std_db",
    "p_max_dbm",
    "total_bandwidth_mhz",
    "n_channels",
    "noise_dbm",
    "k_users",
    "d_pairs",
    "d_max_m",
    "r_u_min_bps",
    "r_u_min_mbps",
    "eta_db",
    "trials",
    "master_seed",
];

fn set_scalar(c: &mut SimConfig, e: &Entry) -> Result<()> {
    match e.key.as_str() {
        "cell_radius_m" => c.cell_radius_m = e.f64()?,
        "path_loss_exponent" => c.path_loss_exponent = e.f64()?,
        "shadowing_std_db" => c.shadowing_std_db = e.f64()?,
        "p_max_dbm" => c.p_max_dbm = e.f64()?,
        "total_bandwidth_mhz" => c.total_bandwidth_mhz = e.f64()?,
        "n_channels" => c.n_channels = e.usize()?,
        "noise_dbm" => c.noise_dbm = e.f64()?,
        "k_users" => c.k_users = e.usize()?,
        "d_pairs" => c.d_pairs = e.usize()?,
        "d_max_m" => c.d_max_m = e.f64()?,
        "r_u_min_bps" => c.r_u_min_bps = e.f64()?,
        "r_u_min_mbps" => c.r_u_min_bps = e.f64()? * 1e6,
        "eta_db" => c.eta_db = e.f64()?,
        "trials" => c.trials = e.usize()?,
        "master_seed" => c.master_seed = e.u64()?,
        _ => unreachable!("key checked against KEYS"),
    }
    Ok(())
}

pub fn parse_campaign(text: &str) -> Result<CampaignSpec> {
    let entries = kv::parse(text)?;
    let mut base = SimConfig::default();
    let mut sweep: Option<(SweepParam, Vec<f64>, usize)> = None;
    let mut rate_key: Option<&Entry> = None;
    for e in &entries {
        if !KEYS.contains(&e.key.as_str()) {
            bail!("line {}: unknown key `{}`", e.line, e.key);
        }
        if e.key.starts_with("r_u_min_") {
            if let Some(prev) = rate_key {
                return Err(e.error(format!("conflicts with {} on line {}", prev.key, prev.line)));
            }
            rate_key = Some(e);
        }
        if !e.is_list() {
            set_scalar(&mut base, e)?;
            continue;
        }
        let Some(param) = SweepParam::from_key(&e.key) else {
            return Err(e.error("only eta_db, r_u_min_mbps, d_max_m, k_users and d_pairs accept lists"));
        };
        if let Some((p, _, line)) = &sweep {
            return Err(e.error(format!("second sweep axis; {p} already swept on line {line}")));
        }
        let values = e.f64_list()?;
        if matches!(param, SweepParam::KUsers | SweepParam::DPairs)
            && values.iter().any(|v| v.fract() != 0.0 || *v < 0.0)
        {
            return Err(e.error("counts must be non-negative integers"));
        }
        sweep = Some((param, values, e.line));
    }
    let spec = CampaignSpec {
        base,
        sweep: sweep.map(|(p, v, _)| (p, v)),
    };
    spec.configs()?;
    Ok(spec)
}

//! Single-instance files: six channel gains plus optional system
//! parameters and power limits.
//!
//! Each gain is given either linearly (`h_d = 3.2e-7`) or in dB
//! (`h_d_db = -64.9`). Parameters default to the campaign defaults.

use anyhow::{anyhow, bail, Result};
use d2d_underlay::model::{db_to_linear, dbm_to_watts, ChannelGains, Instance, PowerLimits, SystemParams};
use d2d_underlay::sim::SimConfig;

use crate::kv::{self, Entry};

const GAINS: [&str; 6] = ["h_d", "h_b_d1", "h_b_d2", "h_d1_u", "h_d2_u", "h_b_u"];

const PARAMS: [&str; 10] = [
    "bandwidth_hz",
    "noise_dbm",
    "eta_db",
    "eta1_db",
    "eta2_db",
    "r_u_min_mbps",
    "p_max_dbm",
    "p1_max_dbm",
    "p2_max_dbm",
    "pu_max_dbm",
];

fn find<'a>(entries: &'a [Entry], key: &str) -> Option<&'a Entry> {
    entries.iter().find(|e| e.key == key)
}

fn gain(entries: &[Entry], name: &str) -> Result<f64> {
    let db_key = format!("{name}_db");
    match (find(entries, name), find(entries, &db_key)) {
        (Some(a), Some(b)) => Err(b.error(format!("conflicts with {name} on line {}", a.line))),
        (Some(a), None) => a.f64(),
        (None, Some(b)) => Ok(db_to_linear(b.f64()?)),
        (None, None) => bail!("missing gain `{name}` (or `{db_key}`)"),
    }
}

/// Value of `specific`, else `shared`, else `default`.
fn pick(entries: &[Entry], specific: &str, shared: &str, default: f64) -> Result<f64> {
    match (find(entries, specific), find(entries, shared)) {
        (Some(a), Some(b)) => Err(a.error(format!("conflicts with {} on line {}", b.key, b.line))),
        (Some(e), None) | (None, Some(e)) => e.f64(),
        (None, None) => Ok(default),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let entries = kv::parse(text)?;
    for e in &entries {
        let k = e.key.as_str();
        let known = PARAMS.contains(&k)
            || GAINS.contains(&k)
            || k.strip_suffix("_db").is_some_and(|g| GAINS.contains(&g));
        if !known {
            bail!("line {}: unknown key `{}`", e.line, e.key);
        }
        if e.is_list() {
            return Err(e.error("lists are only allowed in campaign files"));
        }
    }
    let d = SimConfig::default();
    let g: Vec<f64> = GAINS.iter().map(|n| gain(&entries, n)).collect::<Result<_>>()?;
    let scalar = |k: &str, default: f64| find(&entries, k).map_or(Ok(default), Entry::f64);
    let instance = Instance {
        gains: ChannelGains {
            h_d: g[0],
            h_b_d1: g[1],
            h_b_d2: g[2],
            h_d1_u: g[3],
            h_d2_u: g[4],
            h_b_u: g[5],
        },
        params: SystemParams {
            bandwidth_hz: scalar("bandwidth_hz", d.channel_bandwidth_hz())?,
            noise_w: dbm_to_watts(scalar("noise_dbm", d.noise_dbm)?),
            eta1: db_to_linear(pick(&entries, "eta1_db", "eta_db", d.eta_db)?),
            eta2: db_to_linear(pick(&entries, "eta2_db", "eta_db", d.eta_db)?),
            r_u_min_bps: scalar("r_u_min_mbps", d.r_u_min_bps / 1e6)? * 1e6,
        },
        limits: PowerLimits {
            p1_max_w: dbm_to_watts(pick(&entries, "p1_max_dbm", "p_max_dbm", d.p_max_dbm)?),
            p2_max_w: dbm_to_watts(pick(&entries, "p2_max_dbm", "p_max_dbm", d.p_max_dbm)?),
            pu_max_w: dbm_to_watts(pick(&entries, "pu_max_dbm", "p_max_dbm", d.p_max_dbm)?),
        },
    };
    instance.validate().map_err(|e| anyhow!(e))?;
    Ok(instance)
}

/// Instance file for `gains` under the parameters of `config`. Parsing
/// the text gives back bit-identical gains and parameters.
pub fn instance_text(gains: &ChannelGains, config: &SimConfig) -> String {
    let g = gains;
    let mut s = String::new();
    for (k, v) in GAINS.iter().zip([g.h_d, g.h_b_d1, g.h_b_d2, g.h_d1_u, g.h_d2_u, g.h_b_u]) {
        s += &format!("{k} = {v:e}\n");
    }
    s += &format!("bandwidth_hz = {:e}\n", config.channel_bandwidth_hz());
    s += &format!("noise_dbm = {}\n", config.noise_dbm);
    s += &format!("eta_db = {}\n", config.eta_db);
    s += &format!("r_u_min_mbps = {}\n", config.r_u_min_bps / 1e6);
    s += &format!("p_max_dbm = {}\n", config.p_max_dbm);
    s
}

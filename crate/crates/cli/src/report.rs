//! Human-readable solver output and the campaign CSV format.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use d2d_underlay::model::{watts_to_dbm, PaSolution, PowerTriplet, Powers, Scenario, ScenarioKind};
use d2d_underlay::sim::CampaignResult;

pub const CSV_HEADER: [&str; 9] = [
    "sweep_param",
    "sweep_value",
    "scenario",
    "mean_total_bps",
    "mean_per_pair_bps",
    "mean_sic_pairs",
    "ci95_bps",
    "trials",
    "seed",
];

fn power(name: &str, w: f64) -> String {
    if w == 0.0 {
        format!("{name} off")
    } else {
        format!("{name} {:.4} dBm ({w:.6e} W)", watts_to_dbm(w))
    }
}

fn triplet(p: &PowerTriplet) -> String {
    [power("P1", p.p1_w), power("P2", p.p2_w), power("Pu", p.pu_w)].join(", ")
}

fn mbps(bps: f64) -> String {
    format!("{:.4} Mbps", bps / 1e6)
}

/// Block describing one scenario's outcome.
pub fn format_solution(kind: ScenarioKind, sol: &d2d_underlay::Result<PaSolution>) -> String {
    let s = match sol {
        Ok(s) => s,
        Err(e) => return format!("[{kind}] {e}\n"),
    };
    let mode = match s.scenario {
        Scenario::FdNoSic | Scenario::HdNoSic => "no SIC".to_string(),
        Scenario::FdSic { order: Some(o) } => format!("SIC, decoding order {o}"),
        Scenario::FdSic { order: None } => "SIC infeasible or worse, no-SIC fallback".to_string(),
        Scenario::HdSic { first_sic, second_sic } => format!(
            "slot 1 {}, slot 2 {}",
            if first_sic { "SIC" } else { "no SIC" },
            if second_sic { "SIC" } else { "no SIC" }
        ),
    };
    let mut out = format!(
        "[{kind}] {mode}\n  R_d2d {}, R_u {}\n",
        mbps(s.r_d2d_bps),
        mbps(s.r_u_bps)
    );
    match &s.powers {
        Powers::Full(p) => out += &format!("  {}\n", triplet(p)),
        Powers::Half { first, second } => {
            out += &format!("  slot 1: {}\n  slot 2: {}\n", triplet(first), triplet(second))
        }
    }
    out
}

/// One CSV line of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    /// `none` for a campaign without a swept parameter.
    pub sweep_param: String,
    /// NaN when there is no swept parameter.
    pub sweep_value: f64,
    pub scenario: ScenarioKind,
    pub mean_total_bps: f64,
    pub mean_per_pair_bps: f64,
    pub mean_sic_pairs: f64,
    pub ci95_bps: f64,
    pub trials: usize,
    pub seed: u64,
}

pub fn csv_rows(result: &CampaignResult) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for p in &result.points {
        for (kind, s) in ScenarioKind::ALL.into_iter().zip(&p.stats) {
            rows.push(CsvRow {
                sweep_param: p.param.map_or("none".to_string(), |x| x.key().to_string()),
                sweep_value: p.value,
                scenario: kind,
                mean_total_bps: s.mean_total_bps,
                mean_per_pair_bps: s.mean_per_pair_bps,
                mean_sic_pairs: s.mean_sic_pairs,
                ci95_bps: s.ci95_bps,
                trials: p.trials,
                seed: p.seed,
            });
        }
    }
    rows
}

/// Nine significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn write_csv<W: Write>(rows: &[CsvRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.sweep_param.clone(),
            fmt_float(r.sweep_value),
            r.scenario.label().to_string(),
            fmt_float(r.mean_total_bps),
            fmt_float(r.mean_per_pair_bps),
            fmt_float(r.mean_sic_pairs),
            fmt_float(r.ci95_bps),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(CSV_HEADER) {
        bail!("unexpected CSV header {:?}", r.headers()?);
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let f = |k: usize| -> Result<f64> {
            rec[k].parse().with_context(|| format!("line {line}: column {}", CSV_HEADER[k]))
        };
        let scenario = ScenarioKind::from_label(&rec[2])
            .with_context(|| format!("line {line}: unknown scenario `{}`", &rec[2]))?;
        rows.push(CsvRow {
            sweep_param: rec[0].to_string(),
            sweep_value: f(1)?,
            scenario,
            mean_total_bps: f(3)?,
            mean_per_pair_bps: f(4)?,
            mean_sic_pairs: f(5)?,
            ci95_bps: f(6)?,
            trials: rec[7].parse().with_context(|| format!("line {line}: column trials"))?,
            seed: rec[8].parse().with_context(|| format!("line {line}: column seed"))?,
        });
    }
    Ok(rows)
}

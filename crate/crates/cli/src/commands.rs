use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use d2d_underlay::assignment::{hungarian_max, RateTable};
use d2d_underlay::model::{Instance, ScenarioKind};
use d2d_underlay::oracle::{brute_force, solution_feasible, GridSpec};
use d2d_underlay::sim::{run_campaign, run_sweep, sample_instance, SimConfig};
use d2d_underlay::solvers::{solve, solve_all};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::parse_campaign;
use crate::instance::{instance_text, parse_instance};
use crate::report::{csv_rows, format_solution, write_csv};

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Some requested scenario was infeasible, or verification found a
    /// violation.
    Flagged,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn kinds(filter: Option<ScenarioKind>) -> Vec<ScenarioKind> {
    filter.map_or(ScenarioKind::ALL.to_vec(), |k| vec![k])
}

/// Solves one instance, read from `path` or drawn from the default
/// deployment with `seed`.
pub fn solve_cmd(
    path: Option<&Path>,
    seed: Option<u64>,
    scenario: Option<ScenarioKind>,
    out: &mut impl Write,
) -> Result<Status> {
    let instance = match (path, seed) {
        (Some(p), None) => parse_instance(&read(p)?).with_context(|| p.display().to_string())?,
        (None, Some(s)) => {
            let c = SimConfig::default();
            let inst = sample_instance(&c, &mut ChaCha8Rng::seed_from_u64(s));
            writeln!(out, "# instance drawn with seed {s}")?;
            write!(out, "{}", instance_text(&inst.gains, &c))?;
            writeln!(out)?;
            inst
        }
        _ => bail!("give either an instance file or --seed"),
    };
    let all = solve_all(&instance);
    let mut status = Status::Success;
    for kind in kinds(scenario) {
        let k = ScenarioKind::ALL.iter().position(|&x| x == kind).expect("known kind");
        if all[k].is_err() {
            status = Status::Flagged;
        }
        write!(out, "{}", format_solution(kind, &all[k]))?;
    }
    Ok(status)
}

/// Runs the campaign described by a configuration file. CSV goes to `csv`,
/// a short summary to `log`.
pub fn sweep_cmd(
    config: &Path,
    seed: Option<u64>,
    trials: Option<usize>,
    csv: &mut impl Write,
    log: &mut impl Write,
) -> Result<Status> {
    let mut spec = parse_campaign(&read(config)?).with_context(|| config.display().to_string())?;
    if let Some(s) = seed {
        spec.base.master_seed = s;
    }
    if let Some(t) = trials {
        spec.base.trials = t;
    }
    spec.configs()?;
    let result = match &spec.sweep {
        None => run_campaign(&spec.base)?,
        Some((param, values)) => run_sweep(&spec.base, *param, values)?,
    };
    for p in &result.points {
        let totals: Vec<String> = ScenarioKind::ALL
            .iter()
            .zip(&p.stats)
            .map(|(k, s)| format!("{k} {:.4}", s.mean_total_bps / 1e6))
            .collect();
        let at = p.param.map_or(String::new(), |x| format!("{x} = {}: ", p.value));
        writeln!(log, "{at}{} Mbps", totals.join(", "))?;
    }
    write_csv(&csv_rows(&result), csv)?;
    Ok(Status::Success)
}

/// Instances drawn like the default deployment, with the
/// self-interference level and CU floor spread over the evaluated ranges.
fn verify_instance(rng: &mut ChaCha8Rng) -> Instance {
    let c = SimConfig {
        eta_db: rng.gen_range(-130.0..=-80.0),
        r_u_min_bps: rng.gen_range(0.5e6..=3e6),
        ..SimConfig::default()
    };
    sample_instance(&c, rng)
}

/// Compares every solver with the grid oracle on `count` random instances.
pub fn verify_cmd(
    count: usize,
    seed: u64,
    grid_n: usize,
    scenario: Option<ScenarioKind>,
    out: &mut impl Write,
) -> Result<Status> {
    const SLACK: f64 = 1e-9;
    let kinds = kinds(scenario);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = vec![f64::NEG_INFINITY; kinds.len()];
    let mut solved = vec![0usize; kinds.len()];
    let mut violations = Vec::new();
    for i in 0..count {
        let inst = verify_instance(&mut rng);
        let grid = GridSpec::new(grid_n, &inst.limits)?;
        for (k, &kind) in kinds.iter().enumerate() {
            let oracle = brute_force(kind, &inst, &grid);
            match (solve(kind, &inst), oracle) {
                (Ok(s), o) => {
                    solved[k] += 1;
                    if !solution_feasible(&inst, &s, SLACK) {
                        violations.push(format!("instance {i} {kind}: allocation violates its constraints"));
                    }
                    let Some(o) = o else { continue };
                    // The boundary search of FD-NoSIC is held to 1e-3 relative.
                    let mut tol = o.cell_variation_bps;
                    if kind == ScenarioKind::FdNoSic {
                        tol = tol.max(1e-3 * o.r_d2d_bps);
                    }
                    let dev = (o.r_d2d_bps - s.r_d2d_bps) / o.r_d2d_bps.max(1.0);
                    worst[k] = worst[k].max(dev);
                    if s.r_d2d_bps < o.r_d2d_bps - tol {
                        violations.push(format!(
                            "instance {i} {kind}: solver {:.6e} below oracle {:.6e} by more than {tol:.3e}",
                            s.r_d2d_bps, o.r_d2d_bps
                        ));
                    }
                }
                (Err(_), Some(o)) => violations.push(format!(
                    "instance {i} {kind}: solver infeasible but oracle reached {:.6e}",
                    o.r_d2d_bps
                )),
                (Err(_), None) => {}
            }
        }
    }
    writeln!(out, "verify: {count} instances, seed {seed}, grid {grid_n} points per axis")?;
    for (k, kind) in kinds.iter().enumerate() {
        let dev = if worst[k].is_finite() {
            format!("{:+.3e}", worst[k])
        } else {
            "n/a".to_string()
        };
        writeln!(out, "  {:<9} solved {:>6}  max (oracle-solver)/oracle {dev}", kind.label(), solved[k])?;
    }
    for v in &violations {
        writeln!(out, "  violation: {v}")?;
    }
    writeln!(out, "{} violations", violations.len())?;
    Ok(if violations.is_empty() {
        Status::Success
    } else {
        Status::Flagged
    })
}

/// Reads a rate table (rows are D2D pairs, columns CU channels, entries
/// in bit/s, optional header row) and prints the best assignment.
pub fn assign_cmd(path: &Path, out: &mut impl Write) -> Result<Status> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut rates: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rates.push(row),
            Err(_) if i == 0 => continue,
            Err(e) => bail!("line {}: {e}", i + 1),
        }
    }
    let table = RateTable::from_rates(&rates)?;
    let (a, total) = hungarian_max(&table)?;
    for (r, &c) in a.columns.iter().enumerate() {
        writeln!(out, "pair {r} -> CU {c}  {:.4} Mbps", table.rate(r, c) / 1e6)?;
    }
    writeln!(out, "total {:.4} Mbps", total / 1e6)?;
    Ok(Status::Success)
}

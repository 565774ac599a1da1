//! Maximum-weight one-to-one pairing of D2D pairs (rows) with CU channels
//! (columns).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateEntry {
    pub rate_bps: f64,
    pub sic_applied: bool,
    pub infeasible: bool,
}

impl RateEntry {
    pub fn feasible(rate_bps: f64, sic_applied: bool) -> Self {
        Self {
            rate_bps,
            sic_applied,
            infeasible: false,
        }
    }

    pub fn infeasible() -> Self {
        Self {
            rate_bps: 0.0,
            sic_applied: false,
            infeasible: true,
        }
    }
}

/// Row-major `rows × cols` table of achievable D2D rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    rows: usize,
    cols: usize,
    entries: Vec<RateEntry>,
}

impl RateTable {
    /// All-zero table. Fails when there are more rows than columns.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows > cols {
            return Err(Error::Dimension { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            entries: vec![RateEntry::default(); rows * cols],
        })
    }

    pub fn from_rates(rates: &[Vec<f64>]) -> Result<Self> {
        let rows = rates.len();
        let cols = rates.first().map_or(0, Vec::len);
        let mut t = Self::new(rows, cols)?;
        for (r, row) in rates.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidParameter {
                    name: "rates",
                    reason: format!("row {r} has {} entries, expected {cols}", row.len()),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                t.set(r, c, RateEntry::feasible(v, false))?;
            }
        }
        Ok(t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &RateEntry {
        &self.entries[row * self.cols + col]
    }

    pub fn rate(&self, row: usize, col: usize) -> f64 {
        self.get(row, col).rate_bps
    }

    pub fn set(&mut self, row: usize, col: usize, entry: RateEntry) -> Result<()> {
        if !(entry.rate_bps.is_finite() && entry.rate_bps >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "rate_bps",
                reason: format!("entry ({row}, {col}) is {}", entry.rate_bps),
            });
        }
        if entry.infeasible && entry.rate_bps != 0.0 {
            return Err(Error::InvalidParameter {
                name: "rate_bps",
                reason: format!("infeasible entry ({row}, {col}) must carry rate 0"),
            });
        }
        self.entries[row * self.cols + col] = entry;
        Ok(())
    }
}

/// `columns[row]` is the CU channel given to that D2D pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub columns: Vec<usize>,
}

impl Assignment {
    pub fn total(&self, table: &RateTable) -> f64 {
        self.columns
            .iter()
            .enumerate()
            .map(|(r, &c)| table.rate(r, c))
            .sum()
    }

    /// Number of selected entries that use SIC.
    pub fn sic_count(&self, table: &RateTable) -> usize {
        self.columns
            .iter()
            .enumerate()
            .filter(|&(r, &c)| table.get(r, c).sic_applied)
            .count()
    }
}

struct Solved {
    columns: Vec<usize>,
    u: Vec<f64>,
    v: Vec<f64>,
}

/// Shortest-augmenting-path Hungarian method with potentials for an
/// `n × m` cost matrix, `n <= m`, minimizing the total. Unmatched columns
/// keep a zero potential, which makes the potentials dual optimal for the
/// rectangular problem without explicit padding.
fn solve_min(cost: &[f64], n: usize, m: usize) -> Solved {
    let a = |i: usize, j: usize| cost[(i - 1) * m + (j - 1)];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = a(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut columns = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            columns[p[j] - 1] = j - 1;
        }
    }
    Solved {
        columns,
        u: u[1..].to_vec(),
        v: v[1..].to_vec(),
    }
}

/// Optimal assignment of the rows not yet fixed, as full column indices.
fn solve_rest(table: &RateTable, fixed: &[usize]) -> (Vec<usize>, f64) {
    let rows: Vec<usize> = (fixed.len()..table.rows).collect();
    let cols: Vec<usize> = (0..table.cols).filter(|c| !fixed.contains(c)).collect();
    let m = cols.len();
    let mut cost = Vec::with_capacity(rows.len() * m);
    for &r in &rows {
        cost.extend(cols.iter().map(|&c| -table.rate(r, c)));
    }
    let sub = solve_min(&cost, rows.len(), m);
    let mut full = fixed.to_vec();
    full.extend(sub.columns.iter().map(|&k| cols[k]));
    let total = full.iter().enumerate().map(|(r, &c)| table.rate(r, c)).sum();
    (full, total)
}

/// Maximum-total assignment of every row to a distinct column.
///
/// Among assignments whose totals agree to within floating-point noise,
/// the lexicographically smallest row→column mapping is returned.
pub fn hungarian_max(table: &RateTable) -> Result<(Assignment, f64)> {
    let (n, m) = (table.rows, table.cols);
    if n > m {
        return Err(Error::Dimension { rows: n, cols: m });
    }
    if n == 0 {
        return Ok((Assignment { columns: vec![] }, 0.0));
    }
    let cost: Vec<f64> = table.entries.iter().map(|e| -e.rate_bps).collect();
    let solved = solve_min(&cost, n, m);
    let scale = table.entries.iter().map(|e| e.rate_bps).fold(1.0, f64::max);
    let edge_tol = 1e-9 * scale;
    let total_tol = 1e-9 * scale * n as f64;

    let mut best = solved.columns;
    let optimum: f64 = best.iter().enumerate().map(|(r, &c)| table.rate(r, c)).sum();
    for r in 0..n {
        let fixed = &best[..r];
        // Edges outside the tight set cannot appear in any optimum.
        let candidates = (0..best[r]).filter(|c| {
            !fixed.contains(c) && (solved.u[r] + solved.v[*c] - cost[r * m + c]).abs() <= edge_tol
        });
        for c in candidates {
            let mut prefix = fixed.to_vec();
            prefix.push(c);
            let (alt, total) = solve_rest(table, &prefix);
            if total >= optimum - total_tol {
                best = alt;
                break;
            }
        }
    }
    let assignment = Assignment { columns: best };
    let total = assignment.total(table);
    Ok((assignment, total))
}

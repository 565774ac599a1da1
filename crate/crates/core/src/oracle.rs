//! Brute-force grid search over the power box.
//!
//! Everything here is written from the physical constraints directly. The
//! rates, the multiplexing conditions and the SIC rate conditions are
//! recomputed locally rather than borrowed from the solvers, so that an
//! error in one cannot hide an error in the other.

use crate::error::{Error, Result};
use crate::model::{
    DecodingOrder, Instance, PaSolution, PowerLimits, PowerTriplet, Powers, Scenario, ScenarioKind,
};

/// Uniform grid `{0, max/(n−1), …, max}` on every power axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points_per_axis: usize,
    pub p1_max_w: f64,
    pub p2_max_w: f64,
    pub pu_max_w: f64,
}

impl GridSpec {
    pub fn new(points_per_axis: usize, limits: &PowerLimits) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::InvalidParameter {
                name: "points_per_axis",
                reason: format!("need at least 2 points, got {points_per_axis}"),
            });
        }
        Ok(Self {
            points_per_axis,
            p1_max_w: limits.p1_max_w,
            p2_max_w: limits.p2_max_w,
            pu_max_w: limits.pu_max_w,
        })
    }

    fn axis(&self, max: f64) -> Vec<f64> {
        let last = (self.points_per_axis - 1) as f64;
        (0..self.points_per_axis).map(|k| max * k as f64 / last).collect()
    }
}

/// Best surviving grid point, with the largest rate change between that
/// point and any grid neighbor as a resolution estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOutcome {
    pub powers: Powers,
    pub r_d2d_bps: f64,
    pub cell_variation_bps: f64,
}

fn rate(bw: f64, sinr: f64) -> f64 {
    bw * (1.0 + sinr).log2()
}

/// `lhs > rhs`, loosened by `tol` relative to the operand magnitudes.
fn gt(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs - rhs > -tol * (lhs.abs() + rhs.abs())
}

fn ge(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs - rhs >= -tol * (lhs.abs() + rhs.abs())
}

fn within_box(inst: &Instance, p: &PowerTriplet, tol: f64) -> bool {
    let l = &inst.limits;
    p.p1_w >= 0.0
        && p.p2_w >= 0.0
        && p.pu_w >= 0.0
        && p.p1_w <= l.p1_max_w * (1.0 + tol)
        && p.p2_w <= l.p2_max_w * (1.0 + tol)
        && p.pu_w <= l.pu_max_w * (1.0 + tol)
}

/// `(R_u, R_d2d)` with every signal treated as interference.
pub fn nosic_point_rates(inst: &Instance, p: &PowerTriplet) -> (f64, f64) {
    let g = &inst.gains;
    let s = &inst.params;
    let n0 = s.noise_w;
    let bs = p.pu_w * g.h_b_u / (p.p1_w * g.h_b_d1 + p.p2_w * g.h_b_d2 + n0);
    let d1 = p.p2_w * g.h_d / (p.pu_w * g.h_d1_u + s.eta1 * p.p1_w + n0);
    let d2 = p.p1_w * g.h_d / (p.pu_w * g.h_d2_u + s.eta2 * p.p2_w + n0);
    let b = s.bandwidth_hz;
    (rate(b, bs), rate(b, d1) + rate(b, d2))
}

/// `(R_u, R_d2d)` once every receiver has stripped the foreign messages.
pub fn sic_point_rates(inst: &Instance, p: &PowerTriplet) -> (f64, f64) {
    let g = &inst.gains;
    let s = &inst.params;
    let n0 = s.noise_w;
    let b = s.bandwidth_hz;
    let d1 = p.p2_w * g.h_d / (s.eta1 * p.p1_w + n0);
    let d2 = p.p1_w * g.h_d / (s.eta2 * p.p2_w + n0);
    (rate(b, p.pu_w * g.h_b_u / n0), rate(b, d1) + rate(b, d2))
}

/// Multiplexing conditions of one decoding order: at the base station the
/// first-decoded device message must dominate everything still undecoded,
/// and at each device the CU message must dominate its residual
/// self-interference plus the partner signal.
pub fn pmc_hold(inst: &Instance, order: DecodingOrder, p: &PowerTriplet, tol: f64) -> bool {
    let g = &inst.gains;
    let (p1, p2, pu) = (p.p1_w, p.p2_w, p.pu_w);
    let at_b1 = p1 * g.h_b_d1;
    let at_b2 = p2 * g.h_b_d2;
    let at_bu = pu * g.h_b_u;
    let base = match order {
        DecodingOrder::Order1 => gt(at_b2, at_b1 + at_bu, tol) && gt(at_b1, at_bu, tol),
        DecodingOrder::Order2 => gt(at_b1, at_b2 + at_bu, tol) && gt(at_b2, at_bu, tol),
    };
    let at_d1 = gt(pu * g.h_d1_u, inst.params.eta1 * p1 + p2 * g.h_d, tol);
    let at_d2 = gt(pu * g.h_d2_u, p1 * g.h_d + inst.params.eta2 * p2, tol);
    base && at_d1 && at_d2
}

/// Rate conditions of one decoding order in their noise-free form: each
/// message must be decodable wherever it is stripped at least as well as at
/// its intended receiver.
pub fn sic_rate_conditions_hold(inst: &Instance, order: DecodingOrder, p: &PowerTriplet, tol: f64) -> bool {
    let g = &inst.gains;
    let (e1, e2) = (inst.params.eta1, inst.params.eta2);
    let (p1, p2, pu) = (p.p1_w, p.p2_w, p.pu_w);
    let (hd, hbu) = (g.h_d, g.h_b_u);
    let (hb1, hb2, h1u, h2u) = (g.h_b_d1, g.h_b_d2, g.h_d1_u, g.h_d2_u);
    match order {
        DecodingOrder::Order1 => {
            gt(p1 * hb2 * e1 + pu * h1u * hb2, p1 * hd * hb1 + pu * hd * hbu, tol)
                && gt(p1 * h1u * hb1 + p2 * h1u * hb2, p1 * hbu * e1 + p2 * hbu * hd, tol)
                && gt(p2 * hb1 * e2 + pu * h2u * hb1, pu * hbu * hd, tol)
                && gt(p1 * hb1 * h2u, p1 * hd * hbu + p2 * e2 * hbu, tol)
        }
        DecodingOrder::Order2 => {
            gt(p1 * e1 * hb2 + pu * h1u * hb2, pu * hbu * hd, tol)
                && gt(p2 * h1u * hb2, p2 * hbu * hd + p1 * hbu * e1, tol)
                && gt(p2 * hb1 * e2 + pu * h2u * hb1, p2 * hb2 * hd + pu * hbu * hd, tol)
                && gt(p1 * h2u * hb1 + p2 * hb2 * h2u, p1 * hd * hbu + p2 * hbu * e2, tol)
        }
    }
}

/// Full constraint set of a full-duplex SIC allocation under one order.
pub fn fd_sic_point_feasible(inst: &Instance, order: DecodingOrder, p: &PowerTriplet, tol: f64) -> bool {
    within_box(inst, p, tol)
        && ge(sic_point_rates(inst, p).0, inst.params.r_u_min_bps, tol)
        && pmc_hold(inst, order, p, tol)
        && sic_rate_conditions_hold(inst, order, p, tol)
}

/// Constraint set of a full-duplex allocation without SIC.
pub fn fd_nosic_point_feasible(inst: &Instance, p: &PowerTriplet, tol: f64) -> bool {
    within_box(inst, p, tol) && ge(nosic_point_rates(inst, p).0, inst.params.r_u_min_bps, tol)
}

/// Half-slot SIC conditions: the receiving device strips the CU message
/// and the base station strips the device message.
pub fn hd_sic_slot_feasible(inst: &Instance, first: bool, p: &PowerTriplet, tol: f64) -> bool {
    let g = &inst.gains;
    let (dev, h_b_dev, h_rx_u) = if first {
        (p.p1_w, g.h_b_d1, g.h_d2_u)
    } else {
        (p.p2_w, g.h_b_d2, g.h_d1_u)
    };
    within_box(inst, p, tol)
        && ge(sic_point_rates(inst, p).0, inst.params.r_u_min_bps, tol)
        && gt(p.pu_w * h_rx_u, dev * g.h_d, tol)
        && gt(dev * h_b_dev, p.pu_w * g.h_b_u, tol)
}

/// Checks a solver output against the constraint set its scenario label
/// claims. Half-slot triplets must also leave the other device silent.
pub fn solution_feasible(inst: &Instance, sol: &PaSolution, tol: f64) -> bool {
    let slot = |first: bool, sic: bool, p: &PowerTriplet| {
        let idle = if first { p.p2_w } else { p.p1_w };
        idle == 0.0
            && if sic {
                hd_sic_slot_feasible(inst, first, p, tol)
            } else {
                fd_nosic_point_feasible(inst, p, tol)
            }
    };
    match (sol.scenario, sol.powers) {
        (Scenario::FdNoSic | Scenario::FdSic { order: None }, Powers::Full(p)) => {
            fd_nosic_point_feasible(inst, &p, tol)
        }
        (Scenario::FdSic { order: Some(o) }, Powers::Full(p)) => fd_sic_point_feasible(inst, o, &p, tol),
        (Scenario::HdNoSic, Powers::Half { first, second }) => {
            slot(true, false, &first) && slot(false, false, &second)
        }
        (Scenario::HdSic { first_sic, second_sic }, Powers::Half { first, second }) => {
            slot(true, first_sic, &first) && slot(false, second_sic, &second)
        }
        _ => false,
    }
}

fn neighbor_variation(rates: &[f64], n: usize, i: usize, j: usize) -> f64 {
    let here = rates[i * n + j];
    let mut worst = 0.0f64;
    for di in -1i64..=1 {
        for dj in -1i64..=1 {
            let (a, b) = (i as i64 + di, j as i64 + dj);
            if (0..n as i64).contains(&a) && (0..n as i64).contains(&b) {
                let r = rates[a as usize * n + b as usize];
                if r.is_finite() {
                    worst = worst.max((r - here).abs());
                }
            }
        }
    }
    worst
}

/// Grid optimum of the full-duplex SIC problem for one decoding order.
pub fn brute_force_fd_sic_order(inst: &Instance, order: DecodingOrder, grid: &GridSpec) -> Option<OracleOutcome> {
    let n = grid.points_per_axis;
    let (xs, ys, us) = (grid.axis(grid.p1_max_w), grid.axis(grid.p2_max_w), grid.axis(grid.pu_max_w));
    let mut rates = Vec::with_capacity(n * n);
    for &p1 in &xs {
        for &p2 in &ys {
            rates.push(sic_point_rates(inst, &PowerTriplet::new(p1, p2, 0.0)).1);
        }
    }
    let mut idx: Vec<usize> = (0..n * n).collect();
    idx.sort_by(|&a, &b| rates[b].total_cmp(&rates[a]).then(a.cmp(&b)));
    for k in idx {
        let (i, j) = (k / n, k % n);
        let hit = us
            .iter()
            .map(|&pu| PowerTriplet::new(xs[i], ys[j], pu))
            .find(|p| fd_sic_point_feasible(inst, order, p, 0.0));
        if let Some(p) = hit {
            return Some(OracleOutcome {
                powers: Powers::Full(p),
                r_d2d_bps: rates[k],
                cell_variation_bps: neighbor_variation(&rates, n, i, j),
            });
        }
    }
    None
}

/// Smallest grid value of `Pu` meeting the CU floor for fixed device
/// powers. The CU rate grows with `Pu`, so bisection is exact on the grid.
fn min_grid_pu(us: &[f64], ok: impl Fn(f64) -> bool) -> Option<f64> {
    let (mut lo, mut hi) = (0usize, us.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(us[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    us.get(lo).copied()
}

/// Grid optimum of the full-duplex problem without SIC.
pub fn brute_force_fd_nosic(inst: &Instance, grid: &GridSpec) -> Option<OracleOutcome> {
    let n = grid.points_per_axis;
    let (xs, ys, us) = (grid.axis(grid.p1_max_w), grid.axis(grid.p2_max_w), grid.axis(grid.pu_max_w));
    let mut rates = vec![f64::NEG_INFINITY; n * n];
    let mut pus = vec![f64::NAN; n * n];
    for (i, &p1) in xs.iter().enumerate() {
        for (j, &p2) in ys.iter().enumerate() {
            let ok = |pu| fd_nosic_point_feasible(inst, &PowerTriplet::new(p1, p2, pu), 0.0);
            if let Some(pu) = min_grid_pu(&us, ok) {
                rates[i * n + j] = nosic_point_rates(inst, &PowerTriplet::new(p1, p2, pu)).1;
                pus[i * n + j] = pu;
            }
        }
    }
    let k = (0..n * n)
        .filter(|&k| rates[k].is_finite())
        .fold(None, |best: Option<usize>, k| match best {
            Some(b) if rates[b] >= rates[k] => Some(b),
            _ => Some(k),
        })?;
    let (i, j) = (k / n, k % n);
    Some(OracleOutcome {
        powers: Powers::Full(PowerTriplet::new(xs[i], ys[j], pus[k])),
        r_d2d_bps: rates[k],
        cell_variation_bps: neighbor_variation(&rates, n, i, j),
    })
}

/// Best `(device power, CU power, rate, variation)` for one half-slot.
fn hd_slot(inst: &Instance, grid: &GridSpec, first: bool, allow_sic: bool) -> Option<(f64, f64, f64, f64)> {
    let dev_max = if first { grid.p1_max_w } else { grid.p2_max_w };
    let (devs, us) = (grid.axis(dev_max), grid.axis(grid.pu_max_w));
    let triplet = |dev: f64, pu: f64| {
        if first {
            PowerTriplet::new(dev, 0.0, pu)
        } else {
            PowerTriplet::new(0.0, dev, pu)
        }
    };
    let mut best: Vec<(f64, f64)> = Vec::with_capacity(devs.len());
    for &dev in &devs {
        let mut cell = (f64::NEG_INFINITY, f64::NAN);
        let ok = |pu| fd_nosic_point_feasible(inst, &triplet(dev, pu), 0.0);
        if let Some(pu) = min_grid_pu(&us, ok) {
            cell = (nosic_point_rates(inst, &triplet(dev, pu)).1, pu);
        }
        if allow_sic {
            if let Some(&pu) = us.iter().find(|&&pu| hd_sic_slot_feasible(inst, first, &triplet(dev, pu), 0.0)) {
                let r = sic_point_rates(inst, &triplet(dev, pu)).1;
                if r > cell.0 {
                    cell = (r, pu);
                }
            }
        }
        best.push(cell);
    }
    let k = (0..devs.len())
        .filter(|&k| best[k].0.is_finite())
        .fold(None, |acc: Option<usize>, k| match acc {
            Some(b) if best[b].0 >= best[k].0 => Some(b),
            _ => Some(k),
        })?;
    let var = [k.wrapping_sub(1), k + 1]
        .into_iter()
        .filter_map(|m| best.get(m))
        .filter(|c| c.0.is_finite())
        .map(|c| (c.0 - best[k].0).abs())
        .fold(0.0, f64::max);
    Some((devs[k], best[k].1, best[k].0, var))
}

fn brute_force_hd(inst: &Instance, grid: &GridSpec, allow_sic: bool) -> Option<OracleOutcome> {
    let a = hd_slot(inst, grid, true, allow_sic)?;
    let b = hd_slot(inst, grid, false, allow_sic)?;
    Some(OracleOutcome {
        powers: Powers::Half {
            first: PowerTriplet::new(a.0, 0.0, a.1),
            second: PowerTriplet::new(0.0, b.0, b.1),
        },
        r_d2d_bps: 0.5 * (a.2 + b.2),
        cell_variation_bps: 0.5 * (a.3 + b.3),
    })
}

/// Grid optimum of a whole scenario. SIC scenarios include their no-SIC
/// fallback, exactly as the solvers do.
pub fn brute_force(kind: ScenarioKind, inst: &Instance, grid: &GridSpec) -> Option<OracleOutcome> {
    match kind {
        ScenarioKind::FdNoSic => brute_force_fd_nosic(inst, grid),
        ScenarioKind::HdNoSic => brute_force_hd(inst, grid, false),
        ScenarioKind::HdSic => brute_force_hd(inst, grid, true),
        ScenarioKind::FdSic => [
            brute_force_fd_nosic(inst, grid),
            brute_force_fd_sic_order(inst, DecodingOrder::Order1, grid),
            brute_force_fd_sic_order(inst, DecodingOrder::Order2, grid),
        ]
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<OracleOutcome>, o| match acc {
            Some(a) if a.r_d2d_bps >= o.r_d2d_bps => Some(a),
            _ => Some(o),
        }),
    }
}

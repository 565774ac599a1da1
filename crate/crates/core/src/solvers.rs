//! Per-scenario power allocation for one D2D pair on one CU channel.
//!
//! Every solver keeps the CU at its rate floor and maximizes the D2D sum
//! rate. When the CU cannot reach its floor even with the pair silent, all
//! scenarios report [`Error::Infeasible`].

use crate::error::{Error, Result};
use crate::geometry::solve_fd_sic_order;
use crate::model::{
    nosic_rates, sic_rates, DecodingOrder, Instance, PaSolution, PowerTriplet, Powers, Rates,
    Scenario, ScenarioKind,
};

/// Admissible range `A < Pu/P < B` of the CU-to-device power ratio for
/// mutual SIC during one half-slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HdSicInterval {
    pub a_ratio: f64,
    pub b_ratio: f64,
}

impl HdSicInterval {
    /// d1 transmits, d2 and the base station receive.
    pub fn first_slot(instance: &Instance) -> Self {
        let g = &instance.gains;
        Self {
            a_ratio: g.h_d / g.h_d2_u,
            b_ratio: g.h_b_d1 / g.h_b_u,
        }
    }

    /// d2 transmits, d1 and the base station receive.
    pub fn second_slot(instance: &Instance) -> Self {
        let g = &instance.gains;
        Self {
            a_ratio: g.h_d / g.h_d1_u,
            b_ratio: g.h_b_d2 / g.h_b_u,
        }
    }

    pub fn is_open(&self) -> bool {
        self.a_ratio < self.b_ratio
    }
}

fn check(instance: &Instance) -> Result<()> {
    instance.validate()?;
    if !instance.cu_feasible() {
        return Err(Error::Infeasible(format!(
            "CU needs {:.3e} W to reach its rate floor but may use only {:.3e} W",
            instance.pu_min(),
            instance.limits.pu_max_w
        )));
    }
    Ok(())
}

/// One half-slot of the no-SIC schedule: `(device power, CU power)` with
/// the CU rate held at its floor.
fn hd_nosic_slot(instance: &Instance, dev_max: f64, h_b_dev: f64) -> (f64, f64) {
    let p = &instance.params;
    let h_b_u = instance.gains.h_b_u;
    let pu_max = instance.limits.pu_max_w;
    let target = p.cu_sinr_target();
    let f = |dev: f64| target * (dev * h_b_dev + p.noise_w) / h_b_u;
    if f(dev_max) <= pu_max {
        (dev_max, f(dev_max))
    } else {
        let dev = (pu_max * h_b_u / target - p.noise_w) / h_b_dev;
        (dev.clamp(0.0, dev_max), pu_max)
    }
}

/// One half-slot under mutual SIC, or `None` when SIC is impossible there.
fn hd_sic_slot(instance: &Instance, dev_max: f64, iv: HdSicInterval) -> Option<(f64, f64)> {
    let pu_m = instance.pu_min();
    let pu_max = instance.limits.pu_max_w;
    if !(iv.is_open() && pu_m <= pu_max && dev_max >= pu_m / iv.b_ratio) {
        return None;
    }
    Some(if dev_max < pu_m / iv.a_ratio {
        (dev_max, pu_m)
    } else if iv.a_ratio * dev_max > pu_max {
        (pu_max / iv.a_ratio, pu_max)
    } else {
        (dev_max, iv.a_ratio * dev_max)
    })
}

fn half_slot_triplets(first: (f64, f64), second: (f64, f64)) -> (PowerTriplet, PowerTriplet) {
    (
        PowerTriplet::new(first.0, 0.0, first.1),
        PowerTriplet::new(0.0, second.0, second.1),
    )
}

fn hd_solution(
    instance: &Instance,
    scenario: Scenario,
    first: PowerTriplet,
    second: PowerTriplet,
    first_sic: bool,
    second_sic: bool,
) -> PaSolution {
    let g = &instance.gains;
    let p = &instance.params;
    let slot = |t: &PowerTriplet, sic: bool| if sic { sic_rates(t, g, p) } else { nosic_rates(t, g, p) };
    let (r1, r2) = (slot(&first, first_sic), slot(&second, second_sic));
    PaSolution {
        scenario,
        powers: Powers::Half { first, second },
        r_d2d_bps: 0.5 * r1.r_d2_bps + 0.5 * r2.r_d1_bps,
        r_u_bps: 0.5 * r1.r_u_bps + 0.5 * r2.r_u_bps,
        sic_applied: first_sic || second_sic,
    }
}

/// Half-duplex without SIC: each device transmits in its own half-slot at
/// the highest power the CU rate floor allows.
pub fn solve_hd_nosic(instance: &Instance) -> Result<PaSolution> {
    check(instance)?;
    let lim = &instance.limits;
    let g = &instance.gains;
    let (first, second) = half_slot_triplets(
        hd_nosic_slot(instance, lim.p1_max_w, g.h_b_d1),
        hd_nosic_slot(instance, lim.p2_max_w, g.h_b_d2),
    );
    Ok(hd_solution(instance, Scenario::HdNoSic, first, second, false, false))
}

/// Half-duplex with mutual SIC attempted per half-slot. A half-slot falls
/// back to the no-SIC allocation when SIC is impossible or does worse.
pub fn solve_hd_sic(instance: &Instance) -> Result<PaSolution> {
    check(instance)?;
    let lim = &instance.limits;
    let g = &instance.gains;
    let p = &instance.params;

    let nosic1 = hd_nosic_slot(instance, lim.p1_max_w, g.h_b_d1);
    let nosic2 = hd_nosic_slot(instance, lim.p2_max_w, g.h_b_d2);
    let sic1 = hd_sic_slot(instance, lim.p1_max_w, HdSicInterval::first_slot(instance));
    let sic2 = hd_sic_slot(instance, lim.p2_max_w, HdSicInterval::second_slot(instance));

    let (n1, n2) = half_slot_triplets(nosic1, nosic2);
    let pick = |sic: Option<(f64, f64)>, nosic: PowerTriplet, rate: &dyn Fn(&Rates) -> f64, first: bool| {
        let Some(s) = sic else { return (nosic, false) };
        let t = if first {
            PowerTriplet::new(s.0, 0.0, s.1)
        } else {
            PowerTriplet::new(0.0, s.0, s.1)
        };
        if rate(&sic_rates(&t, g, p)) >= rate(&nosic_rates(&nosic, g, p)) {
            (t, true)
        } else {
            (nosic, false)
        }
    };
    let (first, first_sic) = pick(sic1, n1, &|r| r.r_d2_bps, true);
    let (second, second_sic) = pick(sic2, n2, &|r| r.r_d1_bps, false);
    Ok(hd_solution(
        instance,
        Scenario::HdSic {
            first_sic,
            second_sic,
        },
        first,
        second,
        first_sic,
        second_sic,
    ))
}

/// Maximizes `f` over `[0, 1]` by coarse sampling followed by
/// golden-section refinement around the best few local maxima.
fn maximize_unit(f: impl Fn(f64) -> f64) -> (f64, f64) {
    const SAMPLES: usize = 48;
    const REFINE: usize = 3;
    let xs: Vec<f64> = (0..=SAMPLES).map(|k| k as f64 / SAMPLES as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut peaks: Vec<usize> = (0..=SAMPLES)
        .filter(|&k| {
            (k == 0 || ys[k] >= ys[k - 1]) && (k == SAMPLES || ys[k] >= ys[k + 1])
        })
        .collect();
    peaks.sort_by(|&a, &b| ys[b].total_cmp(&ys[a]));
    peaks.truncate(REFINE);

    let mut best = (xs[0], ys[0]);
    for k in 0..=SAMPLES {
        if ys[k] > best.1 {
            best = (xs[k], ys[k]);
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for k in peaks {
        let mut a = xs[k.saturating_sub(1)];
        let mut b = xs[(k + 1).min(SAMPLES)];
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        while b - a > 1e-9 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
        }
        for (x, y) in [(c, fc), (d, fd)] {
            if y > best.1 {
                best = (x, y);
            }
        }
    }
    best
}

/// Full duplex without SIC.
///
/// The CU power is pinned to the smallest value meeting its floor, which
/// leaves a problem in `(P1, P2)` whose optimum lies on one of three outer
/// edges: `P1 = P1max`, `P2 = P2max`, or the edge where the CU hits its cap.
/// Each edge is searched numerically.
pub fn solve_fd_nosic(instance: &Instance) -> Result<PaSolution> {
    check(instance)?;
    let g = instance.gains;
    let p = instance.params;
    let lim = instance.limits;
    let target = p.cu_sinr_target();
    let pu_of = |p1: f64, p2: f64| target * (p1 * g.h_b_d1 + p2 * g.h_b_d2 + p.noise_w) / g.h_b_u;
    let rate = |p1: f64, p2: f64| {
        let t = PowerTriplet::new(p1, p2, pu_of(p1, p2));
        nosic_rates(&t, &g, &p).d2d()
    };
    // Interference budget at the base station: P1·h_b_d1 + P2·h_b_d2 <= q.
    let q = if target > 0.0 {
        lim.pu_max_w * g.h_b_u / target - p.noise_w
    } else {
        f64::INFINITY
    };

    type Edge = Box<dyn Fn(f64) -> (f64, f64)>;
    let mut edges: Vec<Edge> = Vec::with_capacity(3);
    if q >= lim.p1_max_w * g.h_b_d1 {
        let top = lim.p2_max_w.min((q - lim.p1_max_w * g.h_b_d1) / g.h_b_d2);
        let p1m = lim.p1_max_w;
        edges.push(Box::new(move |s| (p1m, s * top)));
    }
    if q >= lim.p2_max_w * g.h_b_d2 {
        let top = lim.p1_max_w.min((q - lim.p2_max_w * g.h_b_d2) / g.h_b_d1);
        let p2m = lim.p2_max_w;
        edges.push(Box::new(move |s| (s * top, p2m)));
    }
    if q.is_finite() {
        let lo = ((q - lim.p2_max_w * g.h_b_d2) / g.h_b_d1).max(0.0);
        let hi = lim.p1_max_w.min(q / g.h_b_d1);
        if lo <= hi {
            let (hb1, hb2) = (g.h_b_d1, g.h_b_d2);
            edges.push(Box::new(move |s| {
                let p1 = lo + s * (hi - lo);
                (p1, ((q - p1 * hb1) / hb2).max(0.0))
            }));
        }
    }

    let mut best: Option<(f64, f64, f64)> = None;
    for edge in &edges {
        let (s, r) = maximize_unit(|s| {
            let (p1, p2) = edge(s);
            rate(p1, p2)
        });
        if best.is_none_or(|b| r > b.2) {
            let (p1, p2) = edge(s);
            best = Some((p1, p2, r));
        }
    }
    let (p1, p2, _) = best.ok_or_else(|| Error::Infeasible("empty no-SIC region".into()))?;
    let t = PowerTriplet::new(p1, p2, pu_of(p1, p2).min(lim.pu_max_w));
    let rates = nosic_rates(&t, &g, &p);
    Ok(PaSolution {
        scenario: Scenario::FdNoSic,
        powers: Powers::Full(t),
        r_d2d_bps: rates.d2d(),
        r_u_bps: rates.r_u_bps,
        sic_applied: false,
    })
}

/// Best mutual-SIC allocation over both decoding orders, or `None` when
/// neither order is feasible. The first order wins ties.
///
/// An order whose geometry turns out inconsistent is treated as infeasible.
pub fn best_sic_order(instance: &Instance) -> Option<PaSolution> {
    let mut best: Option<PaSolution> = None;
    for order in DecodingOrder::BOTH {
        if let Ok(Some(s)) = solve_fd_sic_order(instance, order) {
            if best.is_none_or(|b| s.r_d2d_bps > b.r_d2d_bps) {
                best = Some(s);
            }
        }
    }
    best
}

/// Full duplex with mutual SIC, given the no-SIC solution to fall back to.
pub fn solve_fd_sic_with_fallback(instance: &Instance, nosic: &PaSolution) -> PaSolution {
    match best_sic_order(instance) {
        Some(s) if s.r_d2d_bps >= nosic.r_d2d_bps => s,
        _ => PaSolution {
            scenario: Scenario::FdSic { order: None },
            sic_applied: false,
            ..*nosic
        },
    }
}

/// Full duplex with mutual SIC under the better decoding order, falling
/// back to the no-SIC allocation when SIC is impossible or does worse.
pub fn solve_fd_sic(instance: &Instance) -> Result<PaSolution> {
    let nosic = solve_fd_nosic(instance)?;
    Ok(solve_fd_sic_with_fallback(instance, &nosic))
}

pub fn solve(kind: ScenarioKind, instance: &Instance) -> Result<PaSolution> {
    match kind {
        ScenarioKind::FdNoSic => solve_fd_nosic(instance),
        ScenarioKind::HdNoSic => solve_hd_nosic(instance),
        ScenarioKind::HdSic => solve_hd_sic(instance),
        ScenarioKind::FdSic => solve_fd_sic(instance),
    }
}

/// All four scenarios, sharing the no-SIC work between the full-duplex
/// pair. Indexed like [`ScenarioKind::ALL`].
pub fn solve_all(instance: &Instance) -> [Result<PaSolution>; 4] {
    let fd_nosic = solve_fd_nosic(instance);
    let fd_sic = fd_nosic
        .as_ref()
        .map(|n| solve_fd_sic_with_fallback(instance, n))
        .map_err(Clone::clone);
    [fd_nosic, solve_hd_nosic(instance), solve_hd_sic(instance), fd_sic]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{db_to_linear, scenario_rates, ChannelGains, PowerLimits, SystemParams};

    fn inst() -> Instance {
        Instance {
            gains: ChannelGains {
                h_d: 1e-9,
                h_b_d1: 1e-12,
                h_b_d2: 2e-12,
                h_d1_u: 3e-12,
                h_d2_u: 5e-12,
                h_b_u: 4e-11,
            },
            params: SystemParams {
                bandwidth_hz: 312_500.0,
                noise_w: db_to_linear(-149.0),
                eta1: db_to_linear(-110.0),
                eta2: db_to_linear(-110.0),
                r_u_min_bps: 1.5e6,
            },
            limits: PowerLimits {
                p1_max_w: 0.25,
                p2_max_w: 0.25,
                pu_max_w: 0.25,
            },
        }
    }

    #[test]
    fn hd_nosic_tiny_bs_interference_runs_at_full_power() {
        let mut i = inst();
        i.gains.h_b_d1 = 1e-30;
        let s = solve_hd_nosic(&i).unwrap();
        let Powers::Half { first, .. } = s.powers else { panic!() };
        assert_eq!(first.p1_w, i.limits.p1_max_w);
        assert!((first.pu_w - i.pu_min()).abs() <= 1e-9 * i.pu_min());
    }

    #[test]
    fn hd_nosic_hits_cu_cap() {
        let mut i = inst();
        i.gains.h_b_d1 = 1e-9;
        let s = solve_hd_nosic(&i).unwrap();
        let Powers::Half { first, .. } = s.powers else { panic!() };
        assert_eq!(first.pu_w, i.limits.pu_max_w);
        assert!(first.p1_w < i.limits.p1_max_w);
        let r = scenario_rates(&s.scenario, &s.powers, &i.gains, &i.params).unwrap();
        assert!((r.r_u_bps - i.params.r_u_min_bps).abs() < 1e-6 * i.params.r_u_min_bps);
    }

    #[test]
    fn cu_alone_infeasible() {
        let mut i = inst();
        i.gains.h_b_u = 1e-20;
        for k in ScenarioKind::ALL {
            assert!(matches!(solve(k, &i), Err(Error::Infeasible(_))));
        }
    }

    #[test]
    fn hd_sic_procedure_branches() {
        // P1max < Pum/A keeps (P1max, Pum).
        let i = inst();
        let iv = HdSicInterval::first_slot(&i);
        let mut j = i;
        j.limits.p1_max_w = 0.5 * i.pu_min() / iv.a_ratio;
        if j.limits.p1_max_w >= i.pu_min() / iv.b_ratio && iv.is_open() {
            assert_eq!(
                hd_sic_slot(&j, j.limits.p1_max_w, iv),
                Some((j.limits.p1_max_w, j.pu_min()))
            );
        }
        // A·P1max > Pumax gives (Pumax/A, Pumax).
        let iv = HdSicInterval { a_ratio: 2.0, b_ratio: 1e6 };
        let mut k = i;
        k.limits.pu_max_w = 0.1;
        assert_eq!(hd_sic_slot(&k, 0.25, iv), Some((0.05, 0.1)));
        // Middle branch.
        let iv = HdSicInterval { a_ratio: 0.2, b_ratio: 1e6 };
        let (p, pu) = hd_sic_slot(&k, 0.25, iv).unwrap();
        assert_eq!(p, 0.25);
        assert!((pu - 0.05).abs() < 1e-15);
    }

    #[test]
    fn rates_match_reported_powers() {
        let i = inst();
        for s in solve_all(&i).into_iter().map(Result::unwrap) {
            let r = scenario_rates(&s.scenario, &s.powers, &i.gains, &i.params).unwrap();
            assert!((r.d2d() - s.r_d2d_bps).abs() <= 1e-9 * s.r_d2d_bps.max(1.0));
            assert!((r.r_u_bps - s.r_u_bps).abs() <= 1e-9 * s.r_u_bps.max(1.0));
            assert!(s.powers.within_limits(&i.limits));
        }
    }

    #[test]
    fn zero_rate_floor_fd_nosic() {
        let mut i = inst();
        i.params.r_u_min_bps = 0.0;
        let s = solve_fd_nosic(&i).unwrap();
        let Powers::Full(t) = s.powers else { panic!() };
        assert_eq!(t.pu_w, 0.0);
    }

    #[test]
    fn maximize_unit_finds_interior_peak() {
        let (x, y) = maximize_unit(|x| -(x - 0.3137).powi(2));
        assert!((x - 0.3137).abs() < 1e-6);
        assert!(y <= 0.0 && y > -1e-12);
    }
}

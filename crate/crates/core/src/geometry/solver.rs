use crate::error::Result;
use crate::geometry::conditions::sufficient_feasibility;
use crate::geometry::optimize::segment_candidates;
use crate::geometry::segments::segment_set;
use crate::model::{
    shannon_rate, sic_d2d_rate, DecodingOrder, Instance, PaSolution, PowerTriplet, Powers,
    Scenario,
};

pub(crate) fn sic_solution(instance: &Instance, order: DecodingOrder, p: PowerTriplet) -> PaSolution {
    let g = &instance.gains;
    let params = &instance.params;
    PaSolution {
        scenario: Scenario::FdSic { order: Some(order) },
        powers: Powers::Full(p),
        r_d2d_bps: sic_d2d_rate(p.p1_w, p.p2_w, g, params),
        r_u_bps: shannon_rate(params.bandwidth_hz, p.pu_w * g.h_b_u / params.noise_w),
        sic_applied: true,
    }
}

/// Keeps the first best point, skipping exact duplicates.
pub(crate) fn best_candidate(
    instance: &Instance,
    candidates: impl IntoIterator<Item = PowerTriplet>,
) -> Option<(PowerTriplet, f64)> {
    let mut seen: Vec<PowerTriplet> = Vec::new();
    let mut best: Option<(PowerTriplet, f64)> = None;
    for p in candidates {
        if seen.contains(&p) {
            continue;
        }
        seen.push(p);
        let r = sic_d2d_rate(p.p1_w, p.p2_w, &instance.gains, &instance.params);
        if best.is_none_or(|(_, br)| r > br) {
            best = Some((p, r));
        }
    }
    best
}

/// Optimal full-duplex allocation under mutual SIC for one decoding order,
/// or `None` when that order admits no allocation.
///
/// An error means the channel tests passed but the constructed geometry did
/// not hold together, which only happens on numerically borderline inputs.
pub fn solve_fd_sic_order(instance: &Instance, order: DecodingOrder) -> Result<Option<PaSolution>> {
    if !sufficient_feasibility(instance, instance.pu_min(), order) {
        return Ok(None);
    }
    let segments = segment_set(instance, order)?;
    let candidates = segments
        .iter()
        .flat_map(|s| segment_candidates(s, instance));
    Ok(best_candidate(instance, candidates).map(|(p, _)| sic_solution(instance, order, p)))
}

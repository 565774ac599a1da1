//! A second route to the full-duplex SIC optimum that shares none of the
//! face-selection logic: the feasible `(P1, P2)` polygon is built by
//! clipping the power box with every pairwise "floor below ceiling"
//! condition, and every vertex plus every stationary point on the
//! `Pu = Pumax` traces is scored.

use crate::geometry::optimize::{sol1, su_p2, su_polynomial};
use crate::geometry::planes::PmcPlanes;
use crate::geometry::selector::Branch;
use crate::geometry::solver::{best_candidate, sic_solution};
use crate::model::{DecodingOrder, Instance, PaSolution, PowerTriplet};

/// `alpha·P1 + beta·P2 + kappa`
#[derive(Debug, Clone, Copy)]
struct Affine {
    alpha: f64,
    beta: f64,
    kappa: f64,
}

impl Affine {
    fn eval(&self, p1: f64, p2: f64) -> f64 {
        self.alpha * p1 + self.beta * p2 + self.kappa
    }
}

/// `f(P1, P2) <= 0`
type HalfPlane = Affine;

fn clip(poly: &[(f64, f64)], h: &HalfPlane) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let (fa, fb) = (h.eval(a.0, a.1), h.eval(b.0, b.1));
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let s = fa / (fa - fb);
            out.push((a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)));
        }
    }
    out
}

fn area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|k| {
            let (a, b) = (poly[k], poly[(k + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        .abs()
}

/// Brute-force-by-geometry variant of the per-order solver. Returns `None`
/// when the feasible polygon is empty or has no area.
pub fn solve_fd_sic_order_exhaustive(instance: &Instance, order: DecodingOrder) -> Option<PaSolution> {
    let lim = &instance.limits;
    let pu_m = instance.pu_min();
    if pu_m > lim.pu_max_w {
        return None;
    }
    let planes = PmcPlanes::new(&instance.gains, &instance.params, order);
    let mut floors = vec![Affine {
        alpha: 0.0,
        beta: 0.0,
        kappa: pu_m,
    }];
    let mut ceilings = vec![Affine {
        alpha: 0.0,
        beta: 0.0,
        kappa: lim.pu_max_w,
    }];
    for pl in &planes.planes {
        let bound = Affine {
            alpha: -pl.a / pl.c,
            beta: -pl.b / pl.c,
            kappa: 0.0,
        };
        if pl.c > 0.0 {
            floors.push(bound);
        } else {
            ceilings.push(bound);
        }
    }

    let mut poly = vec![
        (0.0, 0.0),
        (lim.p1_max_w, 0.0),
        (lim.p1_max_w, lim.p2_max_w),
        (0.0, lim.p2_max_w),
    ];
    let mut cuts = Vec::new();
    for f in &floors {
        for c in &ceilings {
            cuts.push(HalfPlane {
                alpha: f.alpha - c.alpha,
                beta: f.beta - c.beta,
                kappa: f.kappa - c.kappa,
            });
        }
    }
    for h in &cuts {
        poly = clip(&poly, h);
        if poly.is_empty() {
            return None;
        }
    }
    if area(&poly) <= 1e-12 * lim.p1_max_w * lim.p2_max_w {
        return None;
    }

    let floor_at = |p1: f64, p2: f64| floors.iter().map(|f| f.eval(p1, p2)).fold(f64::MIN, f64::max);
    let mut candidates: Vec<PowerTriplet> = poly
        .iter()
        .map(|&(p1, p2)| PowerTriplet::new(p1, p2, floor_at(p1, p2)))
        .collect();

    // Interior stationary points along the CU-cap traces of PL2 and PL4.
    let scale = lim.p1_max_w.max(lim.p2_max_w);
    for branch in [Branch::Pl2, Branch::Pl4] {
        let (a, b, c) = su_polynomial(branch, instance);
        let Some(p1) = sol1(a, b, c) else { continue };
        let p2 = su_p2(branch, instance, p1);
        let inside = (0.0..=lim.p1_max_w).contains(&p1)
            && (0.0..=lim.p2_max_w).contains(&p2)
            && cuts.iter().all(|h| h.eval(p1, p2) <= 1e-12 * scale * h.alpha.abs().max(h.beta.abs()));
        if inside {
            candidates.push(PowerTriplet::new(p1, p2, lim.pu_max_w.min(floor_at(p1, p2).max(pu_m))));
        }
    }

    best_candidate(instance, candidates).map(|(p, _)| sic_solution(instance, order, p))
}

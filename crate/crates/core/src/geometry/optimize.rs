//! Rate maximization along a single segment.

use crate::geometry::segments::{Segment3D, Side};
use crate::geometry::selector::Branch;
use crate::model::{sic_d2d_rate, Instance, PowerTriplet};

/// Coefficients `(A, B, C)` of the quadratic in `P1` whose sign is the sign
/// of the rate derivative along the `Pu = Pumax` trace of `branch`.
pub fn su_polynomial(branch: Branch, instance: &Instance) -> (f64, f64, f64) {
    let g = &instance.gains;
    let (e1, e2) = (instance.params.eta1, instance.params.eta2);
    let s2 = instance.params.noise_w;
    let pu = instance.limits.pu_max_w;
    let hd = g.h_d;
    let det = e1 * e2 - hd * hd;
    match branch {
        Branch::Pl2 => (
            -det * e1 * e1 * e2,
            2.0 * e1 * e1 * e2 * (pu * g.h_d1_u * e2 + s2 * hd),
            -pu * pu * g.h_d1_u * g.h_d1_u * e2 * e2 * e1
                + pu * s2 * hd * g.h_d1_u * e2 * (hd - 2.0 * e1)
                + s2 * s2 * hd * hd * (hd - e1),
        ),
        Branch::Pl4 => (
            det * e1,
            2.0 * e1 * (pu * g.h_d2_u * hd + s2 * e2),
            -pu * pu * g.h_d2_u * g.h_d2_u * e1 - s2 * e1 * g.h_d2_u * pu
                + s2 * s2 * (e2 - hd),
        ),
    }
}

/// The root `(−B − √Δ)/2A`, the only stationary point that can be a local
/// maximum. `None` when the polynomial is degenerate or has no real root.
pub fn sol1(a: f64, b: f64, c: f64) -> Option<f64> {
    if a == 0.0 {
        return None;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let r = (-b - disc.sqrt()) / (2.0 * a);
    r.is_finite().then_some(r)
}

/// `P2` on the `Pu = Pumax` trace of a plane.
pub fn su_p2(branch: Branch, instance: &Instance, p1: f64) -> f64 {
    let g = &instance.gains;
    let pu = instance.limits.pu_max_w;
    match branch {
        Branch::Pl2 => (pu * g.h_d1_u - p1 * instance.params.eta1) / g.h_d,
        Branch::Pl4 => (pu * g.h_d2_u - p1 * g.h_d) / instance.params.eta2,
    }
}

fn rate(p: &PowerTriplet, instance: &Instance) -> f64 {
    sic_d2d_rate(p.p1_w, p.p2_w, &instance.gains, &instance.params)
}

fn best(cands: impl IntoIterator<Item = PowerTriplet>, instance: &Instance) -> (PowerTriplet, f64) {
    let mut out: Option<(PowerTriplet, f64)> = None;
    for p in cands {
        let r = rate(&p, instance);
        if out.is_none_or(|(_, br)| r > br) {
            out = Some((p, r));
        }
    }
    out.expect("at least one candidate")
}

/// Best endpoint of a segment on `S1` or `S2`. Along these faces the rate
/// is quasi-convex in the free power, so an interior point never wins.
pub fn optimize_box_side(segment: &Segment3D, instance: &Instance) -> (PowerTriplet, f64) {
    debug_assert_ne!(segment.side, Side::SU);
    best(segment_candidates(segment, instance), instance)
}

/// Best point of a segment on `SU`: one of its endpoints or the interior
/// stationary point of the branch polynomial.
pub fn optimize_su_side(segment: &Segment3D, instance: &Instance) -> (PowerTriplet, f64) {
    debug_assert_eq!(segment.side, Side::SU);
    best(segment_candidates(segment, instance), instance)
}

/// Candidate points of one segment: its endpoints, plus the interior
/// stationary point on `SU` when it falls strictly inside.
pub(crate) fn segment_candidates(segment: &Segment3D, instance: &Instance) -> Vec<PowerTriplet> {
    let mut v = vec![segment.lo, segment.hi];
    if let (Side::SU, Some(branch)) = (segment.side, segment.branch) {
        let (a, b, c) = su_polynomial(branch, instance);
        let inside = |p1: &f64| segment.lo.p1_w < *p1 && *p1 < segment.hi.p1_w;
        if let Some(p1) = sol1(a, b, c).filter(inside) {
            v.push(PowerTriplet::new(p1, su_p2(branch, instance, p1), segment.lo.pu_w));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::segments::PointLabel;
    use crate::model::{ChannelGains, PowerLimits, SystemParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn instance(eta1: f64, eta2: f64, h_d: f64) -> Instance {
        Instance {
            gains: ChannelGains {
                h_d,
                h_b_d1: 1.0,
                h_b_d2: 1.0,
                h_d1_u: 1.0,
                h_d2_u: 1.0,
                h_b_u: 0.1,
            },
            params: SystemParams {
                bandwidth_hz: 1.0,
                noise_w: 1.0,
                eta1,
                eta2,
                r_u_min_bps: 0.0,
            },
            limits: PowerLimits {
                p1_max_w: 10.0,
                p2_max_w: 10.0,
                pu_max_w: 5.0,
            },
        }
    }

    fn su_segment(inst: &Instance, branch: Branch, lo: f64, hi: f64) -> Segment3D {
        let pu = inst.limits.pu_max_w;
        Segment3D {
            side: Side::SU,
            branch: Some(branch),
            lo: PowerTriplet::new(lo, su_p2(branch, inst, lo), pu),
            hi: PowerTriplet::new(hi, su_p2(branch, inst, hi), pu),
            lo_label: PointLabel::SU,
            hi_label: PointLabel::XU,
        }
    }

    fn sampled_best(seg: &Segment3D, inst: &Instance, n: usize) -> f64 {
        (0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                let p1 = seg.lo.p1_w + s * (seg.hi.p1_w - seg.lo.p1_w);
                let p2 = match seg.side {
                    Side::SU => su_p2(seg.branch.unwrap(), inst, p1),
                    _ => seg.lo.p2_w + s * (seg.hi.p2_w - seg.lo.p2_w),
                };
                sic_d2d_rate(p1, p2, &inst.gains, &inst.params)
            })
            .fold(f64::MIN, f64::max)
    }

    #[test]
    fn degenerate_box_segment() {
        let inst = instance(0.1, 0.1, 1.0);
        let p = PowerTriplet::new(10.0, 3.0, 4.0);
        let seg = Segment3D {
            side: Side::S1,
            branch: None,
            lo: p,
            hi: p,
            lo_label: PointLabel::X1,
            hi_label: PointLabel::S1,
        };
        assert_eq!(optimize_box_side(&seg, &inst).0, p);
    }

    #[test]
    fn no_self_interference_takes_upper_endpoint() {
        let mut inst = instance(0.1, 0.1, 1.0);
        inst.params.eta1 = 0.0;
        inst.params.eta2 = 0.0;
        let seg = Segment3D {
            side: Side::S1,
            branch: None,
            lo: PowerTriplet::new(10.0, 1.0, 1.0),
            hi: PowerTriplet::new(10.0, 7.0, 1.0),
            lo_label: PointLabel::X1,
            hi_label: PointLabel::S1,
        };
        assert_eq!(optimize_box_side(&seg, &inst).0, seg.hi);
    }

    #[test]
    fn su_negative_discriminant_pl2_goes_up() {
        // h_d² > η1η2 with no real root: the rate only grows along the trace.
        let inst = instance(0.1, 0.1, 1.0);
        let (a, b, c) = su_polynomial(Branch::Pl2, &inst);
        assert!(b * b - 4.0 * a * c < 0.0 && a > 0.0);
        let seg = su_segment(&inst, Branch::Pl2, 0.5, 4.0);
        assert_eq!(optimize_su_side(&seg, &inst).0, seg.hi);
    }

    #[test]
    fn su_negative_discriminant_pl4_goes_down() {
        let inst = instance(0.1, 0.1, 1.0);
        let (a, b, c) = su_polynomial(Branch::Pl4, &inst);
        assert!(b * b - 4.0 * a * c < 0.0 && a < 0.0);
        let seg = su_segment(&inst, Branch::Pl4, 0.5, 4.0);
        assert_eq!(optimize_su_side(&seg, &inst).0, seg.lo);
    }

    #[test]
    fn polynomial_sign_matches_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let inst = instance(
                10f64.powf(rng.gen_range(-3.0..0.0)),
                10f64.powf(rng.gen_range(-3.0..0.0)),
                10f64.powf(rng.gen_range(-2.0..1.0)),
            );
            for branch in [Branch::Pl2, Branch::Pl4] {
                let p1_max = match branch {
                    Branch::Pl2 => inst.limits.pu_max_w * inst.gains.h_d1_u / inst.params.eta1,
                    Branch::Pl4 => inst.limits.pu_max_w * inst.gains.h_d2_u / inst.gains.h_d,
                };
                let p1 = rng.gen_range(0.01..0.99) * p1_max;
                let f = |x: f64| {
                    sic_d2d_rate(x, su_p2(branch, &inst, x), &inst.gains, &inst.params)
                };
                let h = 1e-6 * p1;
                let deriv = (f(p1 + h) - f(p1 - h)) / (2.0 * h);
                let (a, b, c) = su_polynomial(branch, &inst);
                let poly = a * p1 * p1 + b * p1 + c;
                let scale = (a * p1 * p1).abs() + (b * p1).abs() + c.abs();
                if poly.abs() > 1e-6 * scale && deriv.abs() > 1e-6 {
                    assert_eq!(poly > 0.0, deriv > 0.0, "{branch:?} {inst:?} at {p1}");
                }
            }
        }
    }

    #[test]
    fn matches_dense_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let inst = instance(
                10f64.powf(rng.gen_range(-3.0..0.0)),
                10f64.powf(rng.gen_range(-3.0..0.0)),
                10f64.powf(rng.gen_range(-2.0..1.0)),
            );
            let branch = if rng.gen_bool(0.5) { Branch::Pl2 } else { Branch::Pl4 };
            let top = match branch {
                Branch::Pl2 => inst.limits.pu_max_w * inst.gains.h_d1_u / inst.params.eta1,
                Branch::Pl4 => inst.limits.pu_max_w * inst.gains.h_d2_u / inst.gains.h_d,
            };
            let lo = rng.gen_range(0.0..0.5) * top;
            let hi = rng.gen_range(0.5..1.0) * top;
            let seg = su_segment(&inst, branch, lo, hi);
            let (_, r) = optimize_su_side(&seg, &inst);
            let sampled = sampled_best(&seg, &inst, 100_000);
            assert!(r >= sampled * (1.0 - 1e-9), "{r} < {sampled}");

            let p2m = rng.gen_range(0.1..10.0);
            let seg = Segment3D {
                side: Side::S2,
                branch: None,
                lo: PowerTriplet::new(lo, p2m, 1.0),
                hi: PowerTriplet::new(hi, p2m, 1.0),
                lo_label: PointLabel::S2,
                hi_label: PointLabel::X2,
            };
            let (_, r) = optimize_box_side(&seg, &inst);
            let sampled = sampled_best(&seg, &inst, 100_000);
            assert!(r >= sampled * (1.0 - 1e-12), "{r} < {sampled}");
        }
    }
}

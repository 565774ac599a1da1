//! Outer-face segments of the full-duplex SIC search space.
//!
//! All four power conditions are homogeneous, so their pairwise
//! intersections are rays through the origin. The geometry is worked out in
//! the first-order frame; the second decoding order is the same problem with
//! the device labels exchanged, so it is solved there and mapped back.

use crate::error::{Error, Result};
use crate::geometry::optimize::su_p2;
use crate::geometry::selector::{pmc24_floor, Branch, Pmc24Selector};
use crate::model::{DecodingOrder, Instance, PowerTriplet};

/// Outer face of the power box: `P1 = P1max`, `P2 = P2max` or `Pu = Pumax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    S1,
    S2,
    SU,
}

impl Side {
    fn mirrored(self) -> Self {
        match self {
            Side::S1 => Side::S2,
            Side::S2 => Side::S1,
            Side::SU => Side::SU,
        }
    }
}

/// `W1` is where the binding CU floor meets the first base-station
/// condition, `W3` where it meets the second one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Line {
    W1,
    W3,
}

/// Names of the points that can bound a segment.
///
/// `X*`/`S*` are the exits of `W1`/`W3` through a face, `K*`/`J*` the
/// corners where the base-station conditions meet the CU power floor, `V*`
/// and `G*` the crossings of `PL2` and `PL4` with the box edges (3: the
/// `S1`/`S2` edge, 4: `S1`/`SU`, 5: `S2`/`SU`), and `I` the point where
/// `PL2` and `PL4` cross on `SU`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointLabel {
    X1,
    X2,
    XU,
    S1,
    S2,
    SU,
    K1,
    K2,
    J1,
    J2,
    V3,
    V4,
    V5,
    G3,
    G4,
    G5,
    I,
}

impl PointLabel {
    fn mirrored(self) -> Self {
        use PointLabel::*;
        match self {
            X1 => X2,
            X2 => X1,
            S1 => S2,
            S2 => S1,
            K1 => K2,
            K2 => K1,
            J1 => J2,
            J2 => J1,
            V3 => G3,
            G3 => V3,
            V4 => G5,
            G5 => V4,
            V5 => G4,
            G4 => V5,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment3D {
    pub side: Side,
    /// Plane that fixes `P2` as a function of `P1` on `SU`; `None` elsewhere.
    pub branch: Option<Branch>,
    pub lo: PowerTriplet,
    pub hi: PowerTriplet,
    pub lo_label: PointLabel,
    pub hi_label: PointLabel,
}

impl Segment3D {
    fn mirrored(self) -> Self {
        let side = self.side.mirrored();
        let (lo, hi, lo_label, hi_label) = if side == Side::SU {
            // P2 falls as P1 grows on SU, so exchanging the axes reverses
            // the endpoint order.
            (self.hi, self.lo, self.hi_label, self.lo_label)
        } else {
            (self.lo, self.hi, self.lo_label, self.hi_label)
        };
        Segment3D {
            side,
            branch: self.branch.map(Branch::mirrored),
            lo: lo.swapped(),
            hi: hi.swapped(),
            lo_label: lo_label.mirrored(),
            hi_label: hi_label.mirrored(),
        }
    }
}

/// Direction of a ray through the origin.
#[derive(Debug, Clone, Copy)]
struct Dir {
    x: f64,
    y: f64,
    z: f64,
}

impl Dir {
    fn at(&self, s: f64) -> PowerTriplet {
        PowerTriplet::new(self.x * s, self.y * s, self.z * s)
    }

    fn is_positive(&self) -> bool {
        self.x > 0.0 && self.y > 0.0 && self.z > 0.0
    }
}

/// The first-order view of an instance.
pub(crate) struct Frame {
    pub inst: Instance,
    pub pu_m: f64,
    pub sel: Pmc24Selector,
    order: DecodingOrder,
}

impl Frame {
    pub fn new(instance: &Instance, order: DecodingOrder) -> Self {
        let inst = match order {
            DecodingOrder::Order1 => *instance,
            DecodingOrder::Order2 => instance.swapped(),
        };
        Frame {
            pu_m: inst.pu_min(),
            sel: Pmc24Selector::new(&inst.gains, &inst.params),
            inst,
            order,
        }
    }

    fn mirrored(&self) -> bool {
        self.order == DecodingOrder::Order2
    }

    /// Smallest admissible CU power at `(p1, p2)`.
    pub fn pu_floor(&self, p1: f64, p2: f64) -> f64 {
        pmc24_floor(&self.sel, p1, p2).1.max(self.pu_m)
    }

    fn direction(&self, which: Line) -> Result<Dir> {
        let g = &self.inst.gains;
        let (eta1, eta2) = (self.inst.params.eta1, self.inst.params.eta2);
        let (via_pl2, via_pl4) = match which {
            Line::W1 => (
                Dir {
                    x: g.h_d1_u * g.h_b_d2 - g.h_b_u * g.h_d,
                    y: g.h_b_u * eta1 + g.h_d1_u * g.h_b_d1,
                    z: g.h_b_d2 * eta1 + g.h_d * g.h_b_d1,
                },
                Dir {
                    x: g.h_b_d2 * g.h_d2_u - g.h_b_u * eta2,
                    y: g.h_b_u * g.h_d + g.h_b_d1 * g.h_d2_u,
                    z: g.h_b_d1 * eta2 + g.h_b_d2 * g.h_d,
                },
            ),
            Line::W3 => (
                Dir {
                    x: g.h_b_u * g.h_d,
                    y: g.h_b_d1 * g.h_d1_u - g.h_b_u * eta1,
                    z: g.h_b_d1 * g.h_d,
                },
                Dir {
                    x: g.h_b_u * eta2,
                    y: g.h_b_d1 * g.h_d2_u - g.h_b_u * g.h_d,
                    z: g.h_b_d1 * eta2,
                },
            ),
        };
        let d = match pmc24_floor(&self.sel, via_pl2.x, via_pl2.y).0 {
            Branch::Pl2 => via_pl2,
            Branch::Pl4 => via_pl4,
        };
        if d.is_positive() {
            Ok(d)
        } else {
            Err(Error::InconsistentGeometry(format!(
                "{which:?} direction ({:e}, {:e}, {:e}) leaves the positive octant",
                d.x, d.y, d.z
            )))
        }
    }

    /// Face through which the ray leaves the power box.
    pub fn exit(&self, which: Line) -> Result<(Side, PowerTriplet)> {
        let d = self.direction(which)?;
        let lim = &self.inst.limits;
        let on_su = || d.at(lim.pu_max_w / d.z);
        let xl1 = d.at(lim.p1_max_w / d.x);
        let (side, p) = if xl1.p2_w < lim.p2_max_w {
            if xl1.pu_w <= lim.pu_max_w {
                (Side::S1, xl1)
            } else {
                (Side::SU, on_su())
            }
        } else {
            let xl2 = d.at(lim.p2_max_w / d.y);
            if xl2.pu_w < lim.pu_max_w {
                (Side::S2, xl2)
            } else {
                (Side::SU, on_su())
            }
        };
        if p.p1_w > 0.0 && p.p2_w > 0.0 && p.pu_w > 0.0 {
            Ok((side, p))
        } else {
            Err(Error::InconsistentGeometry(format!(
                "{which:?} exit point {p:?} is not strictly positive"
            )))
        }
    }

    /// Faces hosting a useful segment for the given pair of exits.
    fn useful_sides(&self, x: Side, s: Side) -> Result<Vec<Side>> {
        use Side::*;
        let lim = &self.inst.limits;
        Ok(match (x, s) {
            (S1, S1) => vec![S1],
            (S1, SU) => vec![S1, SU],
            (SU, SU) => vec![SU],
            (SU, S2) => vec![SU, S2],
            (S2, S2) => vec![S2],
            (S1, S2) => {
                let corner = pmc24_floor(&self.sel, lim.p1_max_w, lim.p2_max_w).1;
                if corner > lim.pu_max_w {
                    vec![S1, SU, S2]
                } else {
                    vec![S1, S2]
                }
            }
            (x, s) => {
                let (x, s) = if self.mirrored() {
                    (x.mirrored(), s.mirrored())
                } else {
                    (x, s)
                };
                return Err(Error::Infeasible(format!(
                    "exit pair ({x:?}, {s:?}) leaves an empty search space"
                )));
            }
        })
    }

    /// Segments in this frame, before any mapping back.
    fn canonical_segments(&self) -> Result<Vec<Segment3D>> {
        let (x_side, _) = self.exit(Line::W1)?;
        let (s_side, _) = self.exit(Line::W3)?;
        let sides = self.useful_sides(x_side, s_side)?;

        let d1 = self.direction(Line::W1)?;
        let d3 = self.direction(Line::W3)?;
        let g = &self.inst.gains;
        let eta1 = self.inst.params.eta1;
        let eta2 = self.inst.params.eta2;
        let lim = &self.inst.limits;
        let (p1m, p2m, pum) = (lim.p1_max_w, lim.p2_max_w, lim.pu_max_w);
        let pu_m = self.pu_m;

        // Crossings of PL2/PL4 with the box edges.
        let v4_y = (pum * g.h_d1_u - p1m * eta1) / g.h_d;
        let g4_y = (pum * g.h_d2_u - p1m * g.h_d) / eta2;
        let w4 = if v4_y <= g4_y {
            (v4_y, PointLabel::V4)
        } else {
            (g4_y, PointLabel::G4)
        };
        let v5_x = (pum * g.h_d1_u - p2m * g.h_d) / eta1;
        let g5_x = (pum * g.h_d2_u - p2m * eta2) / g.h_d;
        let w5 = if v5_x <= g5_x {
            (v5_x, PointLabel::V5)
        } else {
            (g5_x, PointLabel::G5)
        };
        let w3_label = match pmc24_floor(&self.sel, p1m, p2m).0 {
            Branch::Pl2 => PointLabel::V3,
            Branch::Pl4 => PointLabel::G3,
        };

        let mut out = Vec::with_capacity(4);
        for side in sides {
            match side {
                Side::S1 => {
                    let lo = max_of(&[
                        (d1.y / d1.x * p1m, PointLabel::X1),
                        ((pu_m * g.h_b_u + p1m * g.h_b_d1) / g.h_b_d2, PointLabel::K1),
                    ]);
                    let hi = min_of(&[
                        (d3.y / d3.x * p1m, PointLabel::S1),
                        (p2m, w3_label),
                        w4,
                    ]);
                    if let Some((lo, hi)) = ordered(lo, hi) {
                        let at = |(y, label): (f64, PointLabel)| {
                            (PowerTriplet::new(p1m, y, self.pu_floor(p1m, y)), label)
                        };
                        out.push(box_segment(Side::S1, at(lo), at(hi)));
                    }
                }
                Side::S2 => {
                    let lo = max_of(&[
                        (d3.x / d3.y * p2m, PointLabel::S2),
                        (pu_m * g.h_b_u / g.h_b_d1, PointLabel::J2),
                    ]);
                    let hi = min_of(&[
                        w5,
                        (p1m, w3_label),
                        (d1.x / d1.y * p2m, PointLabel::X2),
                        ((p2m * g.h_b_d2 - pu_m * g.h_b_u) / g.h_b_d1, PointLabel::K2),
                    ]);
                    if let Some((lo, hi)) = ordered(lo, hi) {
                        let at = |(x, label): (f64, PointLabel)| {
                            (PowerTriplet::new(x, p2m, self.pu_floor(x, p2m)), label)
                        };
                        out.push(box_segment(Side::S2, at(lo), at(hi)));
                    }
                }
                Side::SU => {
                    let lo = max_of(&[(pum * g.h_b_u / g.h_b_d1, PointLabel::SU), w5]);
                    let hi = min_of(&[(d1.x / d1.z * pum, PointLabel::XU), (p1m, w4.1)]);
                    if let Some((lo, hi)) = ordered(lo, hi) {
                        self.push_su(lo, hi, d1.y / d1.z * pum, &mut out);
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(Error::InconsistentGeometry(
                "every useful face produced an empty segment".into(),
            ));
        }
        Ok(out)
    }

    fn push_su(
        &self,
        lo: (f64, PointLabel),
        hi: (f64, PointLabel),
        xu_p2: f64,
        out: &mut Vec<Segment3D>,
    ) {
        let pum = self.inst.limits.pu_max_w;
        let g = &self.inst.gains;
        let (eta1, eta2) = (self.inst.params.eta1, self.inst.params.eta2);
        let det = eta1 * eta2 - g.h_d * g.h_d;
        // The PL4 trace divides by η2 and cancels badly when η2 is tiny, so
        // points with a better-conditioned definition take P2 from there.
        let at = |branch: Branch, (x, label): (f64, PointLabel)| {
            let p2 = match label {
                PointLabel::XU => xu_p2,
                PointLabel::I => pum * (eta1 * g.h_d2_u - g.h_d * g.h_d1_u) / det,
                PointLabel::V5 | PointLabel::G5 => self.inst.limits.p2_max_w,
                _ => su_p2(branch, &self.inst, x),
            };
            PowerTriplet::new(x, p2, pum)
        };
        let seg = |branch: Branch, a: (f64, PointLabel), b: (f64, PointLabel)| Segment3D {
            side: Side::SU,
            branch: Some(branch),
            lo: at(branch, a),
            hi: at(branch, b),
            lo_label: a.1,
            hi_label: b.1,
        };
        if let Some(b) = self.sel.uniform_branch() {
            out.push(seg(b, lo, hi));
            return;
        }
        // Region 1 (below the dividing ray) is the large-P1 end of SU.
        let i_x = pum * (g.h_d1_u * eta2 - g.h_d * g.h_d2_u) / det;
        if lo.0 < i_x && i_x < hi.0 {
            let i = (i_x, PointLabel::I);
            out.push(seg(self.sel.branch_in_region(false), lo, i));
            out.push(seg(self.sel.branch_in_region(true), i, hi));
        } else {
            let region1 = 0.5 * (lo.0 + hi.0) > i_x;
            out.push(seg(self.sel.branch_in_region(region1), lo, hi));
        }
    }

    fn to_original(&self, seg: Segment3D) -> Segment3D {
        if self.mirrored() {
            seg.mirrored()
        } else {
            seg
        }
    }
}

fn max_of(c: &[(f64, PointLabel)]) -> (f64, PointLabel) {
    c.iter()
        .copied()
        .fold(c[0], |best, x| if x.0 > best.0 { x } else { best })
}

fn min_of(c: &[(f64, PointLabel)]) -> (f64, PointLabel) {
    c.iter()
        .copied()
        .fold(c[0], |best, x| if x.0 < best.0 { x } else { best })
}

/// Accepts `lo <= hi`, snapping rounding-level inversions to a single point.
fn ordered(
    lo: (f64, PointLabel),
    hi: (f64, PointLabel),
) -> Option<((f64, PointLabel), (f64, PointLabel))> {
    if lo.0 <= hi.0 {
        Some((lo, hi))
    } else if lo.0 - hi.0 <= 1e-12 * lo.0.abs().max(hi.0.abs()) {
        Some((lo, (lo.0, hi.1)))
    } else {
        None
    }
}

fn box_segment(
    side: Side,
    lo: (PowerTriplet, PointLabel),
    hi: (PowerTriplet, PointLabel),
) -> Segment3D {
    Segment3D {
        side,
        branch: None,
        lo: lo.0,
        hi: hi.0,
        lo_label: lo.1,
        hi_label: hi.1,
    }
}

/// Face through which `W1` or `W3` leaves the power box, and the exit point.
///
/// Expects an instance for which the chosen order is feasible.
pub fn line_box_intersection(
    instance: &Instance,
    which: Line,
    order: DecodingOrder,
) -> Result<(Side, PowerTriplet)> {
    let frame = Frame::new(instance, order);
    let (side, p) = frame.exit(which)?;
    Ok(if frame.mirrored() {
        (side.mirrored(), p.swapped())
    } else {
        (side, p)
    })
}

/// Segments of the outer faces that can hold the optimum, with their
/// endpoints. Expects an instance for which the chosen order is feasible.
pub fn segment_set(instance: &Instance, order: DecodingOrder) -> Result<Vec<Segment3D>> {
    let frame = Frame::new(instance, order);
    Ok(frame
        .canonical_segments()?
        .into_iter()
        .map(|s| frame.to_original(s))
        .collect())
}

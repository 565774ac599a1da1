use crate::model::{ChannelGains, DecodingOrder, PowerTriplet, SystemParams};

/// A strict linear condition `a·P1 + b·P2 + c·Pu > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Plane {
    pub fn eval(&self, p: &PowerTriplet) -> f64 {
        self.a * p.p1_w + self.b * p.p2_w + self.c * p.pu_w
    }

    /// Sum of the magnitudes of the three terms; the scale for relative
    /// slack.
    pub fn magnitude(&self, p: &PowerTriplet) -> f64 {
        (self.a * p.p1_w).abs() + (self.b * p.p2_w).abs() + (self.c * p.pu_w).abs()
    }

    /// Strict test relaxed by `rel_tol` times the term magnitude, so that
    /// points on the plane itself pass.
    pub fn satisfied(&self, p: &PowerTriplet, rel_tol: f64) -> bool {
        self.eval(p) > -rel_tol * self.magnitude(p)
    }
}

/// The four power-multiplexing conditions of one decoding order.
///
/// `planes[0]` and `planes[2]` bound the CU power from above (message
/// ordering at the base station), `planes[1]` and `planes[3]` from below
/// (CU cancellation at d1 and d2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmcPlanes {
    pub order: DecodingOrder,
    pub planes: [Plane; 4],
}

impl PmcPlanes {
    pub fn new(gains: &ChannelGains, params: &SystemParams, order: DecodingOrder) -> Self {
        let g = gains;
        let pl2 = Plane {
            a: -params.eta1,
            b: -g.h_d,
            c: g.h_d1_u,
        };
        let pl4 = Plane {
            a: -g.h_d,
            b: -params.eta2,
            c: g.h_d2_u,
        };
        let (pl1, pl3) = match order {
            DecodingOrder::Order1 => (
                Plane {
                    a: -g.h_b_d1,
                    b: g.h_b_d2,
                    c: -g.h_b_u,
                },
                Plane {
                    a: g.h_b_d1,
                    b: 0.0,
                    c: -g.h_b_u,
                },
            ),
            DecodingOrder::Order2 => (
                Plane {
                    a: g.h_b_d1,
                    b: -g.h_b_d2,
                    c: -g.h_b_u,
                },
                Plane {
                    a: 0.0,
                    b: g.h_b_d2,
                    c: -g.h_b_u,
                },
            ),
        };
        Self {
            order,
            planes: [pl1, pl2, pl3, pl4],
        }
    }

    pub fn all_satisfied(&self, p: &PowerTriplet, rel_tol: f64) -> bool {
        self.planes.iter().all(|pl| pl.satisfied(p, rel_tol))
    }
}

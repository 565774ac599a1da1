//! Which of the two CU-side power floors (`PL2`, `PL4`) is binding where.
//!
//! Both floors are linear in `(P1, P2)`:
//! `f2 = γ·P2 + Ω·P1` and `f4 = ξ·P1 + τ·P2`, so their difference changes
//! sign across a single ray `P2/P1 = t_λ` through the origin. Region 1 is
//! the side with `P2/P1 < t_λ`, region 2 the other one.

use crate::model::{ChannelGains, SystemParams};

/// The plane that supplies the minimal CU power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Pl2,
    Pl4,
}

impl Branch {
    pub fn mirrored(self) -> Self {
        match self {
            Branch::Pl2 => Branch::Pl4,
            Branch::Pl4 => Branch::Pl2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionMode {
    Pmc2Everywhere,
    Pmc4Everywhere,
    /// `PL4` binds in region 1 and `PL2` in region 2.
    Region1ThenRegion2,
    /// `PL2` binds in region 1 and `PL4` in region 2.
    Region2ThenRegion1,
    /// The regions are split but the search space sits entirely in region 1.
    AllInRegion1,
    /// The regions are split but the search space sits entirely in region 2.
    AllInRegion2,
}

impl RegionMode {
    pub fn is_split(self) -> bool {
        matches!(
            self,
            RegionMode::Region1ThenRegion2 | RegionMode::Region2ThenRegion1
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pmc24Selector {
    /// `h_d / h_d1_u`
    pub slope_gamma: f64,
    /// `η2 / h_d2_u`
    pub slope_tau: f64,
    /// `h_d / h_d2_u`
    pub slope_xi: f64,
    /// `η1 / h_d1_u`
    pub slope_omega: f64,
    pub region_mode: RegionMode,
}

impl Pmc24Selector {
    pub fn new(gains: &ChannelGains, params: &SystemParams) -> Self {
        Self {
            slope_gamma: gains.h_d / gains.h_d1_u,
            slope_tau: params.eta2 / gains.h_d2_u,
            slope_xi: gains.h_d / gains.h_d2_u,
            slope_omega: params.eta1 / gains.h_d1_u,
            region_mode: region_inclusion(gains, params),
        }
    }

    /// Plane binding in region 1 when the regions are split; `None` for
    /// the two "everywhere" modes.
    fn region1_branch(&self) -> Option<Branch> {
        // Case 3 (γ > τ) puts PL4 on top in region 1, case 4 puts PL2 there.
        match self.region_mode {
            RegionMode::Pmc2Everywhere | RegionMode::Pmc4Everywhere => None,
            _ if self.slope_gamma > self.slope_tau => Some(Branch::Pl4),
            _ => Some(Branch::Pl2),
        }
    }

    /// Binding plane over the whole search space, when there is only one.
    pub fn uniform_branch(&self) -> Option<Branch> {
        match self.region_mode {
            RegionMode::Pmc2Everywhere => Some(Branch::Pl2),
            RegionMode::Pmc4Everywhere => Some(Branch::Pl4),
            RegionMode::AllInRegion1 => self.region1_branch(),
            RegionMode::AllInRegion2 => self.region1_branch().map(Branch::mirrored),
            RegionMode::Region1ThenRegion2 | RegionMode::Region2ThenRegion1 => None,
        }
    }

    /// Binding plane on the region-1 (`region1 = true`) or region-2 side of
    /// the dividing ray.
    pub fn branch_in_region(&self, region1: bool) -> Branch {
        if let Some(b) = self.uniform_branch() {
            return b;
        }
        let b1 = self.region1_branch().unwrap_or(Branch::Pl2);
        if region1 {
            b1
        } else {
            b1.mirrored()
        }
    }

    pub fn f2(&self, p1: f64, p2: f64) -> f64 {
        self.slope_gamma * p2 + self.slope_omega * p1
    }

    pub fn f4(&self, p1: f64, p2: f64) -> f64 {
        self.slope_xi * p1 + self.slope_tau * p2
    }
}

/// Minimal CU power required by the two device-side power conditions at
/// `(p1, p2)`, with the plane that sets it. Exact ties go to `PL2`.
pub fn pmc24_floor(selector: &Pmc24Selector, p1: f64, p2: f64) -> (Branch, f64) {
    let s = selector;
    if p2 * (s.slope_gamma - s.slope_tau) >= p1 * (s.slope_xi - s.slope_omega) {
        (Branch::Pl2, s.f2(p1, p2))
    } else {
        (Branch::Pl4, s.f4(p1, p2))
    }
}

/// Classifies how `PL2` and `PL4` share the positive quadrant, then, for
/// the split cases, whether the first-order search space sits entirely on
/// one side of the dividing ray.
pub fn region_inclusion(gains: &ChannelGains, params: &SystemParams) -> RegionMode {
    let g = gains;
    let (eta1, eta2) = (params.eta1, params.eta2);
    let gamma = g.h_d / g.h_d1_u;
    let tau = eta2 / g.h_d2_u;
    let xi = g.h_d / g.h_d2_u;
    let omega = eta1 / g.h_d1_u;

    if omega >= xi && gamma >= tau {
        return RegionMode::Pmc2Everywhere;
    }
    if omega <= xi && gamma <= tau {
        return RegionMode::Pmc4Everywhere;
    }

    let d = g.h_d * g.h_d - eta1 * eta2;
    // The dividing ray lies above PL1.
    let big_gamma = g.h_b_u * d / (g.h_d1_u * g.h_d2_u)
        > (g.h_b_d2 * g.h_d + g.h_b_d1 * eta2) / g.h_d2_u
            - (g.h_b_d2 * eta1 + g.h_b_d1 * g.h_d) / g.h_d1_u;
    // The dividing ray lies above PL3.
    let big_xi = d * g.h_b_u > (g.h_d * g.h_d2_u - eta2 * g.h_d1_u) * g.h_b_d1;

    if gamma > tau {
        if big_gamma {
            RegionMode::AllInRegion2
        } else if big_xi {
            RegionMode::AllInRegion1
        } else {
            RegionMode::Region1ThenRegion2
        }
    } else if !big_gamma {
        RegionMode::AllInRegion2
    } else if !big_xi {
        RegionMode::AllInRegion1
    } else {
        RegionMode::Region2ThenRegion1
    }
}

//! Domain types, unit conversions and the Shannon-rate expressions for the
//! four transmission scenarios.
//!
//! Everything in here works in linear SI units: watts, hertz and bit/s.
//! Decibel quantities only appear at the I/O boundary (see [`db_to_linear`]).
//!
//! Notation follows the usual single-cell uplink underlay picture: a D2D pair
//! `(d1, d2)` reuses the uplink channel of one cellular user `u` whose signal
//! is received by the base station `b`.

use std::fmt;

use crate::error::{check_positive, Error, Result};

/// Relative slack used when checking power constraints on solver outputs.
pub const REL_POWER_TOL: f64 = 1e-9;
/// Relative slack used when checking rate constraints on solver outputs.
pub const REL_RATE_TOL: f64 = 1e-6;

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

/// `B log2(1 + sinr)`.
#[inline]
pub fn shannon_rate(bandwidth_hz: f64, sinr: f64) -> f64 {
    bandwidth_hz * sinr.ln_1p() / std::f64::consts::LN_2
}

/// Squared link gains for one D2D pair / cellular user combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    /// d1 <-> d2.
    pub h_d: f64,
    /// d1 -> BS.
    pub h_b_d1: f64,
    /// d2 -> BS.
    pub h_b_d2: f64,
    /// CU -> d1.
    pub h_d1_u: f64,
    /// CU -> d2.
    pub h_d2_u: f64,
    /// CU -> BS.
    pub h_b_u: f64,
}

impl ChannelGains {
    pub fn validate(&self) -> Result<()> {
        check_positive("h_d", self.h_d)?;
        check_positive("h_b_d1", self.h_b_d1)?;
        check_positive("h_b_d2", self.h_b_d2)?;
        check_positive("h_d1_u", self.h_d1_u)?;
        check_positive("h_d2_u", self.h_d2_u)?;
        check_positive("h_b_u", self.h_b_u)
    }

    /// The same link set seen with the device labels 1 and 2 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            h_d: self.h_d,
            h_b_d1: self.h_b_d2,
            h_b_d2: self.h_b_d1,
            h_d1_u: self.h_d2_u,
            h_d2_u: self.h_d1_u,
            h_b_u: self.h_b_u,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub bandwidth_hz: f64,
    pub noise_w: f64,
    /// Residual self-interference factor of d1.
    pub eta1: f64,
    /// Residual self-interference factor of d2.
    pub eta2: f64,
    /// Minimum CU rate.
    pub r_u_min_bps: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("bandwidth_hz", self.bandwidth_hz)?;
        check_positive("noise_w", self.noise_w)?;
        for (name, eta) in [("eta1", self.eta1), ("eta2", self.eta2)] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must lie in (0, 1], got {eta}"),
                });
            }
        }
        if !(self.r_u_min_bps.is_finite() && self.r_u_min_bps >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "r_u_min_bps",
                reason: format!("must be finite and >= 0, got {}", self.r_u_min_bps),
            });
        }
        Ok(())
    }

    pub fn swapped(&self) -> Self {
        Self {
            eta1: self.eta2,
            eta2: self.eta1,
            ..*self
        }
    }

    /// SINR the CU needs to reach `r_u_min_bps`: `2^(R/B) - 1`.
    pub fn cu_sinr_target(&self) -> f64 {
        (self.r_u_min_bps / self.bandwidth_hz * std::f64::consts::LN_2).exp_m1()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLimits {
    pub p1_max_w: f64,
    pub p2_max_w: f64,
    pub pu_max_w: f64,
}

impl PowerLimits {
    pub fn validate(&self) -> Result<()> {
        check_positive("p1_max_w", self.p1_max_w)?;
        check_positive("p2_max_w", self.p2_max_w)?;
        check_positive("pu_max_w", self.pu_max_w)
    }

    pub fn swapped(&self) -> Self {
        Self {
            p1_max_w: self.p2_max_w,
            p2_max_w: self.p1_max_w,
            pu_max_w: self.pu_max_w,
        }
    }
}

/// Everything a power-allocation solver needs for one D2D pair sharing one
/// CU channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instance {
    pub gains: ChannelGains,
    pub params: SystemParams,
    pub limits: PowerLimits,
}

impl Instance {
    pub fn validate(&self) -> Result<()> {
        self.gains.validate()?;
        self.params.validate()?;
        self.limits.validate()
    }

    /// The instance with device labels 1 and 2 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            gains: self.gains.swapped(),
            params: self.params.swapped(),
            limits: self.limits.swapped(),
        }
    }

    pub fn pu_min(&self) -> f64 {
        pu_min(&self.params, self.gains.h_b_u)
    }

    /// Whether the CU can meet its rate floor at all within its power cap.
    pub fn cu_feasible(&self) -> bool {
        self.pu_min() <= self.limits.pu_max_w
    }
}

/// Transmit powers of d1, d2 and the CU.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerTriplet {
    pub p1_w: f64,
    pub p2_w: f64,
    pub pu_w: f64,
}

impl PowerTriplet {
    pub const fn new(p1_w: f64, p2_w: f64, pu_w: f64) -> Self {
        Self { p1_w, p2_w, pu_w }
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.p2_w, self.p1_w, self.pu_w)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.p1_w >= 0.0 && self.p2_w >= 0.0 && self.pu_w >= 0.0
    }

    pub fn within_limits(&self, limits: &PowerLimits) -> bool {
        let ok = |p: f64, max: f64| p <= max * (1.0 + REL_POWER_TOL);
        self.is_nonnegative()
            && ok(self.p1_w, limits.p1_max_w)
            && ok(self.p2_w, limits.p2_max_w)
            && ok(self.pu_w, limits.pu_max_w)
    }
}

/// Order in which the base station strips the two D2D messages before
/// decoding the CU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodingOrder {
    /// m2 first, then m1.
    Order1,
    /// m1 first, then m2.
    Order2,
}

impl DecodingOrder {
    pub const BOTH: [DecodingOrder; 2] = [DecodingOrder::Order1, DecodingOrder::Order2];
}

impl fmt::Display for DecodingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodingOrder::Order1 => f.write_str("m2->m1"),
            DecodingOrder::Order2 => f.write_str("m1->m2"),
        }
    }
}

/// The four transmission strategies, without per-instance detail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    FdNoSic,
    HdNoSic,
    HdSic,
    FdSic,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::FdNoSic,
        ScenarioKind::HdNoSic,
        ScenarioKind::HdSic,
        ScenarioKind::FdSic,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ScenarioKind::FdNoSic => "FD-NoSIC",
            ScenarioKind::HdNoSic => "HD-NoSIC",
            ScenarioKind::HdSic => "HD-SIC",
            ScenarioKind::FdSic => "FD-SIC",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s.trim()))
    }

    pub fn is_half_duplex(&self) -> bool {
        matches!(self, ScenarioKind::HdNoSic | ScenarioKind::HdSic)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A transmission scenario together with the SIC decisions taken for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    FdNoSic,
    HdNoSic,
    /// Per half-slot flag: `true` when mutual SIC is used in that slot.
    HdSic { first_sic: bool, second_sic: bool },
    /// `None` when the solver fell back to the no-SIC allocation.
    FdSic { order: Option<DecodingOrder> },
}

impl Scenario {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Scenario::FdNoSic => ScenarioKind::FdNoSic,
            Scenario::HdNoSic => ScenarioKind::HdNoSic,
            Scenario::HdSic { .. } => ScenarioKind::HdSic,
            Scenario::FdSic { .. } => ScenarioKind::FdSic,
        }
    }
}

/// Powers of a solved instance. Half-duplex solutions carry one triplet per
/// half-slot: `(P1, 0, Pu1)` then `(0, P2, Pu2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Powers {
    Full(PowerTriplet),
    Half {
        first: PowerTriplet,
        second: PowerTriplet,
    },
}

impl Powers {
    pub fn within_limits(&self, limits: &PowerLimits) -> bool {
        match self {
            Powers::Full(p) => p.within_limits(limits),
            Powers::Half { first, second } => {
                first.within_limits(limits) && second.within_limits(limits)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaSolution {
    pub scenario: Scenario,
    pub powers: Powers,
    pub r_d2d_bps: f64,
    pub r_u_bps: f64,
    pub sic_applied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rates {
    pub r_u_bps: f64,
    pub r_d1_bps: f64,
    pub r_d2_bps: f64,
}

impl Rates {
    pub fn d2d(&self) -> f64 {
        self.r_d1_bps + self.r_d2_bps
    }

    fn half_sum(a: Rates, b: Rates) -> Rates {
        Rates {
            r_u_bps: 0.5 * a.r_u_bps + 0.5 * b.r_u_bps,
            r_d1_bps: 0.5 * a.r_d1_bps + 0.5 * b.r_d1_bps,
            r_d2_bps: 0.5 * a.r_d2_bps + 0.5 * b.r_d2_bps,
        }
    }
}

/// CU power that meets `r_u_min_bps` with interference-free reception at
/// the base station.
pub fn pu_min(params: &SystemParams, h_b_u: f64) -> f64 {
    params.cu_sinr_target() * params.noise_w / h_b_u
}

/// Rates with all mutual interference present.
pub fn nosic_rates(p: &PowerTriplet, g: &ChannelGains, params: &SystemParams) -> Rates {
    let n = params.noise_w;
    let sinr_b = p.pu_w * g.h_b_u / (p.p1_w * g.h_b_d1 + p.p2_w * g.h_b_d2 + n);
    let sinr_d1 = p.p2_w * g.h_d / (p.pu_w * g.h_d1_u + params.eta1 * p.p1_w + n);
    let sinr_d2 = p.p1_w * g.h_d / (p.pu_w * g.h_d2_u + params.eta2 * p.p2_w + n);
    Rates {
        r_u_bps: shannon_rate(params.bandwidth_hz, sinr_b),
        r_d1_bps: shannon_rate(params.bandwidth_hz, sinr_d1),
        r_d2_bps: shannon_rate(params.bandwidth_hz, sinr_d2),
    }
}

/// Rates once every receiver has cancelled the foreign messages; only the
/// residual self-interference remains at the devices.
pub fn sic_rates(p: &PowerTriplet, g: &ChannelGains, params: &SystemParams) -> Rates {
    let n = params.noise_w;
    Rates {
        r_u_bps: shannon_rate(params.bandwidth_hz, p.pu_w * g.h_b_u / n),
        r_d1_bps: shannon_rate(
            params.bandwidth_hz,
            p.p2_w * g.h_d / (params.eta1 * p.p1_w + n),
        ),
        r_d2_bps: shannon_rate(
            params.bandwidth_hz,
            p.p1_w * g.h_d / (params.eta2 * p.p2_w + n),
        ),
    }
}

/// Full-duplex D2D sum rate under mutual SIC. Independent of the CU power.
#[inline]
pub fn sic_d2d_rate(p1: f64, p2: f64, g: &ChannelGains, params: &SystemParams) -> f64 {
    let n = params.noise_w;
    let s1 = p2 * g.h_d / (params.eta1 * p1 + n);
    let s2 = p1 * g.h_d / (params.eta2 * p2 + n);
    params.bandwidth_hz * (s1.ln_1p() + s2.ln_1p()) / std::f64::consts::LN_2
}

fn half_slot(p: &PowerTriplet, g: &ChannelGains, params: &SystemParams, sic: bool) -> Rates {
    if sic {
        sic_rates(p, g, params)
    } else {
        nosic_rates(p, g, params)
    }
}

/// Returns `(R_u, R_d1, R_d2)` for the given scenario. Half-duplex rates are
/// averaged over the two half-slots.
pub fn scenario_rates(
    scenario: &Scenario,
    powers: &Powers,
    gains: &ChannelGains,
    params: &SystemParams,
) -> Result<Rates> {
    match (scenario, powers) {
        (Scenario::FdNoSic, Powers::Full(p)) | (Scenario::FdSic { order: None }, Powers::Full(p)) => {
            Ok(nosic_rates(p, gains, params))
        }
        (Scenario::FdSic { order: Some(_) }, Powers::Full(p)) => Ok(sic_rates(p, gains, params)),
        (Scenario::HdNoSic, Powers::Half { first, second }) => Ok(Rates::half_sum(
            half_slot(&zero_p2(first), gains, params, false),
            half_slot(&zero_p1(second), gains, params, false),
        )),
        (
            Scenario::HdSic {
                first_sic,
                second_sic,
            },
            Powers::Half { first, second },
        ) => Ok(Rates::half_sum(
            half_slot(&zero_p2(first), gains, params, *first_sic),
            half_slot(&zero_p1(second), gains, params, *second_sic),
        )),
        (s, _) => Err(Error::ScenarioMismatch(s.kind().label())),
    }
}

fn zero_p2(p: &PowerTriplet) -> PowerTriplet {
    PowerTriplet::new(p.p1_w, 0.0, p.pu_w)
}

fn zero_p1(p: &PowerTriplet) -> PowerTriplet {
    PowerTriplet::new(0.0, p.p2_w, p.pu_w)
}

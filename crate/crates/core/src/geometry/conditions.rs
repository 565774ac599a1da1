//! Channel-level feasibility tests for full-duplex mutual SIC.

use crate::model::{ChannelGains, DecodingOrder, Instance, SystemParams};

/// The four channel conditions that any mutual-SIC allocation needs,
/// whatever the decoding order:
///
/// 0. `h_b_d1·h_d2_u > h_d·h_b_u`
/// 1. `h_d1_u·h_b_d2 > h_b_u·h_d`
/// 2. `h_b_d1·h_d1_u > η1·h_b_u`
/// 3. `h_b_d2·h_d2_u > η2·h_b_u`
pub fn necessary_conditions(gains: &ChannelGains, params: &SystemParams) -> [bool; 4] {
    let g = gains;
    [
        g.h_b_d1 * g.h_d2_u > g.h_d * g.h_b_u,
        g.h_d1_u * g.h_b_d2 > g.h_b_u * g.h_d,
        g.h_b_d1 * g.h_d1_u > params.eta1 * g.h_b_u,
        g.h_b_d2 * g.h_d2_u > params.eta2 * g.h_b_u,
    ]
}

/// Whether the search space of the given decoding order is non-empty.
///
/// Checks that the cone cut out by the four power conditions is open and
/// that its apex ray reaches the CU's minimal power inside the device power
/// box. The CU floor must also fit under the CU power cap; without that the
/// box itself is empty.
pub fn sufficient_feasibility(instance: &Instance, pu_m: f64, order: DecodingOrder) -> bool {
    let g = &instance.gains;
    let (eta1, eta2) = (instance.params.eta1, instance.params.eta2);
    let lim = &instance.limits;
    if pu_m.is_nan() || pu_m > lim.pu_max_w {
        return false;
    }
    match order {
        DecodingOrder::Order1 => {
            let r = g.h_b_d1 / g.h_b_d2;
            g.h_b_d1 * g.h_d1_u - eta1 * g.h_b_u > 2.0 * g.h_b_u * g.h_d * r
                && g.h_b_d1 * g.h_d2_u - g.h_b_u * g.h_d > 2.0 * g.h_b_u * eta2 * r
                && pu_m * g.h_b_u / g.h_b_d1 < lim.p1_max_w
                && 2.0 * pu_m * g.h_b_u / g.h_b_d2 < lim.p2_max_w
        }
        DecodingOrder::Order2 => {
            let r = g.h_b_d2 / g.h_b_d1;
            g.h_d1_u * g.h_b_d2 - g.h_d * g.h_b_u > 2.0 * g.h_b_u * eta1 * r
                && g.h_d2_u * g.h_b_d2 - eta2 * g.h_b_u > 2.0 * g.h_b_u * g.h_d * r
                && 2.0 * pu_m * g.h_b_u / g.h_b_d1 < lim.p1_max_w
                && pu_m * g.h_b_u / g.h_b_d2 < lim.p2_max_w
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PowerLimits;
    use proptest::prelude::*;

    fn unit_params(eta: f64) -> SystemParams {
        SystemParams {
            bandwidth_hz: 1.0,
            noise_w: 1.0,
            eta1: eta,
            eta2: eta,
            r_u_min_bps: 0.0,
        }
    }

    #[test]
    fn first_condition_example() {
        let g = ChannelGains {
            h_d: 1.0,
            h_b_d1: 2.0,
            h_b_d2: 1.0,
            h_d1_u: 1.0,
            h_d2_u: 1.0,
            h_b_u: 1.0,
        };
        assert!(necessary_conditions(&g, &unit_params(0.5))[0]);
    }

    #[test]
    fn large_eta_breaks_third_condition() {
        let g = ChannelGains {
            h_d: 1.0,
            h_b_d1: 1.0,
            h_b_d2: 1.0,
            h_d1_u: 1.0,
            h_d2_u: 1.0,
            h_b_u: 0.1,
        };
        assert!(necessary_conditions(&g, &unit_params(0.5))[2]);
        let mut p = unit_params(0.5);
        p.eta1 = 1e3;
        assert!(!necessary_conditions(&g, &p)[2]);
    }

    fn example_instance() -> Instance {
        Instance {
            gains: ChannelGains {
                h_d: 2.0,
                h_b_d1: 1.0,
                h_b_d2: 1.0,
                h_d1_u: 10.0,
                h_d2_u: 10.0,
                h_b_u: 1.0,
            },
            params: unit_params(1.0),
            limits: PowerLimits {
                p1_max_w: 10.0,
                p2_max_w: 10.0,
                pu_max_w: 10.0,
            },
        }
    }

    #[test]
    fn first_cone_condition_example() {
        // 1·10 − 1·1 = 9 > 2·1·2·1 = 4, and likewise for the second test.
        let inst = example_instance();
        assert!(sufficient_feasibility(&inst, 1.0, DecodingOrder::Order1));
    }

    #[test]
    fn device_limit_too_low() {
        let mut inst = example_instance();
        inst.limits.p1_max_w = 0.99; // below pu_m·h_b_u/h_b_d1 = 1
        assert!(!sufficient_feasibility(&inst, 1.0, DecodingOrder::Order1));
    }

    #[test]
    fn cu_floor_above_cap() {
        let inst = example_instance();
        assert!(!sufficient_feasibility(&inst, 11.0, DecodingOrder::Order1));
    }

    fn gain() -> impl Strategy<Value = f64> {
        (-6.0f64..6.0).prop_map(|e| 10f64.powf(e))
    }

    proptest! {
        #[test]
        fn second_order_mirrors_first(
            h in proptest::array::uniform6(gain()),
            eta1 in gain(), eta2 in gain(),
            lim in proptest::array::uniform3(gain()),
            pu_m in gain(),
        ) {
            let inst = Instance {
                gains: ChannelGains {
                    h_d: h[0], h_b_d1: h[1], h_b_d2: h[2],
                    h_d1_u: h[3], h_d2_u: h[4], h_b_u: h[5],
                },
                params: SystemParams { eta1, eta2, ..unit_params(1.0) },
                limits: PowerLimits { p1_max_w: lim[0], p2_max_w: lim[1], pu_max_w: lim[2] },
            };
            prop_assert_eq!(
                sufficient_feasibility(&inst, pu_m, DecodingOrder::Order2),
                sufficient_feasibility(&inst.swapped(), pu_m, DecodingOrder::Order1)
            );
        }

        #[test]
        fn sufficient_implies_necessary(
            h in proptest::array::uniform6(gain()),
            eta1 in gain(), eta2 in gain(),
        ) {
            let inst = Instance {
                gains: ChannelGains {
                    h_d: h[0], h_b_d1: h[1], h_b_d2: h[2],
                    h_d1_u: h[3], h_d2_u: h[4], h_b_u: h[5],
                },
                params: SystemParams { eta1, eta2, ..unit_params(1.0) },
                limits: PowerLimits { p1_max_w: 1e12, p2_max_w: 1e12, pu_max_w: 1e12 },
            };
            for order in DecodingOrder::BOTH {
                if sufficient_feasibility(&inst, 1e-12, order) {
                    prop_assert!(necessary_conditions(&inst.gains, &inst.params).iter().all(|&c| c));
                }
            }
        }
    }
}

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::model::{db_to_linear, ChannelGains, Instance};
use crate::sim::config::SimConfig;
use crate::sim::deployment::{generate_deployment, Deployment, BASE_STATION};

/// Distances below this are clamped so that co-located nodes keep a finite
/// gain.
pub const MIN_DISTANCE_M: f64 = 1.0;

/// `d^−α · 10^(X/10)` with `X` the shadowing draw in dB.
pub fn link_gain(distance_m: f64, alpha: f64, shadow_db: f64) -> f64 {
    distance_m.max(MIN_DISTANCE_M).powf(-alpha) * db_to_linear(shadow_db)
}

/// Gains for every `(pair, CU)` combination, indexed `[pair][cu]`.
///
/// Each physical link gets one independent shadowing draw, so the
/// device-to-BS and D2D links of a pair are shared across all CUs and the
/// CU-to-BS link is shared across all pairs.
pub fn gains_from_deployment<R: Rng + ?Sized>(
    deployment: &Deployment,
    config: &SimConfig,
    rng: &mut R,
) -> Vec<Vec<ChannelGains>> {
    let alpha = config.path_loss_exponent;
    // A zero standard deviation is accepted by Normal and yields the mean.
    let shadow = Normal::new(0.0, config.shadowing_std_db).expect("validated std");
    let mut link = |a, b| -> f64 {
        let x = shadow.sample(rng);
        link_gain(crate::sim::deployment::Point::distance(a, b), alpha, x)
    };

    let pair_links: Vec<[f64; 3]> = deployment
        .pairs
        .iter()
        .map(|(d1, d2)| [link(d1, d2), link(d1, &BASE_STATION), link(d2, &BASE_STATION)])
        .collect();
    let cu_links: Vec<f64> = deployment.cus.iter().map(|u| link(u, &BASE_STATION)).collect();

    deployment
        .pairs
        .iter()
        .zip(&pair_links)
        .map(|((d1, d2), &[h_d, h_b_d1, h_b_d2])| {
            deployment
                .cus
                .iter()
                .zip(&cu_links)
                .map(|(u, &h_b_u)| ChannelGains {
                    h_d,
                    h_b_d1,
                    h_b_d2,
                    h_d1_u: link(u, d1),
                    h_d2_u: link(u, d2),
                    h_b_u,
                })
                .collect()
        })
        .collect()
}

/// One pair and one CU drawn from the deployment model of `config`, with
/// its system parameters and power limits.
pub fn sample_instance<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Instance {
    let one = SimConfig {
        k_users: 1,
        d_pairs: 1,
        ..config.clone()
    };
    let deployment = generate_deployment(&one, rng);
    Instance {
        gains: gains_from_deployment(&deployment, &one, rng)[0][0],
        params: config.params(),
        limits: config.limits(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::deployment::Point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_distance_no_shadowing() {
        assert_eq!(link_gain(1.0, 3.76, 0.0), 1.0);
    }

    #[test]
    fn doubling_distance() {
        let r = link_gain(20.0, 3.76, 0.0) / link_gain(10.0, 3.76, 0.0);
        assert!((r - 2f64.powf(-3.76)).abs() < 1e-15);
    }

    #[test]
    fn close_nodes_are_clamped() {
        assert_eq!(link_gain(0.0, 3.76, 0.0), 1.0);
        assert_eq!(link_gain(0.3, 3.76, 0.0), 1.0);
    }

    #[test]
    fn shared_links_repeat_across_table() {
        let dep = Deployment {
            cus: vec![Point { x: 10.0, y: 0.0 }, Point { x: -50.0, y: 20.0 }],
            pairs: vec![
                (Point { x: 0.0, y: 30.0 }, Point { x: 5.0, y: 30.0 }),
                (Point { x: 40.0, y: -30.0 }, Point { x: 40.0, y: -10.0 }),
            ],
        };
        let g = gains_from_deployment(&dep, &SimConfig::default(), &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(g[0][0].h_d, g[0][1].h_d);
        assert_eq!(g[1][0].h_b_d2, g[1][1].h_b_d2);
        assert_eq!(g[0][1].h_b_u, g[1][1].h_b_u);
        assert_ne!(g[0][0].h_d1_u, g[1][0].h_d1_u);
    }

    #[test]
    fn no_shadowing_is_pure_path_loss() {
        let dep = Deployment {
            cus: vec![Point { x: 100.0, y: 0.0 }],
            pairs: vec![(Point { x: 0.0, y: 10.0 }, Point { x: 0.0, y: 20.0 })],
        };
        let c = SimConfig {
            shadowing_std_db: 0.0,
            ..SimConfig::default()
        };
        let g = gains_from_deployment(&dep, &c, &mut ChaCha8Rng::seed_from_u64(1))[0][0];
        assert!((g.h_d - 10f64.powf(-3.76)).abs() < 1e-18);
        assert!((g.h_b_u - 100f64.powf(-3.76)).abs() < 1e-24);
    }
}

mod common;

use common::{random_instance, solution_feasible};
use d2d_underlay::model::{scenario_rates, Instance, ScenarioKind};
use d2d_underlay::oracle::{brute_force, GridSpec};
use d2d_underlay::solvers::{solve, solve_all};
use d2d_underlay::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instances(seed: u64, n: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_instance(&mut rng)).collect()
}

#[test]
fn never_below_grid_optimum() {
    for inst in instances(201, 40) {
        let grid = GridSpec::new(60, &inst.limits).unwrap();
        for kind in ScenarioKind::ALL {
            let oracle = brute_force(kind, &inst, &grid);
            match solve(kind, &inst) {
                Ok(s) => {
                    if let Some(o) = oracle {
                        let eps = o.cell_variation_bps + 1e-6 * o.r_d2d_bps;
                        assert!(s.r_d2d_bps >= o.r_d2d_bps - eps, "{kind} {} < {}", s.r_d2d_bps, o.r_d2d_bps);
                    }
                }
                Err(e) => {
                    assert!(matches!(e, Error::Infeasible(_)));
                    assert!(oracle.is_none(), "{kind} solver infeasible, oracle found a point");
                }
            }
        }
    }
}

#[test]
fn reported_allocations_are_feasible_and_consistent() {
    for inst in instances(202, 2000) {
        for s in solve_all(&inst).into_iter().flatten() {
            assert!(solution_feasible(&inst, &s, 1e-9), "{s:?} {inst:?}");
            assert!(s.powers.within_limits(&inst.limits));
            let r = scenario_rates(&s.scenario, &s.powers, &inst.gains, &inst.params).unwrap();
            assert!((r.d2d() - s.r_d2d_bps).abs() <= 1e-9 * s.r_d2d_bps.max(1.0));
            assert!(s.r_u_bps >= inst.params.r_u_min_bps * (1.0 - 1e-9));
        }
    }
}

#[test]
fn sic_scenarios_dominate_their_baselines() {
    for inst in instances(203, 2000) {
        let [fdn, hdn, hds, fds] = solve_all(&inst);
        match (fdn, hdn, hds, fds) {
            (Ok(fdn), Ok(hdn), Ok(hds), Ok(fds)) => {
                assert!(fds.r_d2d_bps >= fdn.r_d2d_bps);
                assert!(hds.r_d2d_bps >= hdn.r_d2d_bps);
            }
            (Err(_), Err(_), Err(_), Err(_)) => assert!(!inst.cu_feasible()),
            other => panic!("mixed feasibility {other:?}"),
        }
    }
}

#[test]
fn rate_does_not_grow_with_the_cu_floor() {
    for base in instances(204, 300) {
        for kind in ScenarioKind::ALL {
            let mut prev = f64::INFINITY;
            for k in 0..=12 {
                let mut inst = base;
                inst.params.r_u_min_bps = 0.25e6 * k as f64 + 0.25e6;
                let r = solve(kind, &inst).map_or(0.0, |s| s.r_d2d_bps);
                assert!(r <= prev * (1.0 + 1e-7) + 1e-9, "{kind} {r} > {prev}");
                prev = r;
            }
        }
    }
}

#[test]
fn half_duplex_ignores_self_interference() {
    for mut inst in instances(205, 300) {
        let a = [solve(ScenarioKind::HdNoSic, &inst), solve(ScenarioKind::HdSic, &inst)];
        inst.params.eta1 *= 1e5;
        inst.params.eta2 *= 1e5;
        let b = [solve(ScenarioKind::HdNoSic, &inst), solve(ScenarioKind::HdSic, &inst)];
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.as_ref().ok().map(|s| s.r_d2d_bps), y.as_ref().ok().map(|s| s.r_d2d_bps));
        }
    }
}

#[test]
fn full_duplex_sic_nonincreasing_in_self_interference() {
    for base in instances(206, 300) {
        let mut prev = f64::INFINITY;
        for eta_db in (-130..=-80).step_by(10) {
            let mut inst = base;
            inst.params.eta1 = 10f64.powf(eta_db as f64 / 10.0);
            inst.params.eta2 = inst.params.eta1;
            let r = solve(ScenarioKind::FdSic, &inst).map_or(0.0, |s| s.r_d2d_bps);
            assert!(r <= prev * (1.0 + 1e-7) + 1e-9, "{r} > {prev}");
            prev = r;
        }
    }
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use d2d_underlay::model::ScenarioKind;
use d2d_underlay::sim::{run_sweep, sample_instance, SimConfig, SweepParam};
use d2d_underlay::solvers::solve_all;
use d2d_underlay_cli::instance::instance_text;
use d2d_underlay_cli::report::{csv_rows, fmt_float, read_csv, write_csv};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d2d-underlay"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> (String, String) {
    (
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const ETA_SWEEP: &str = "k_users = 6\nd_pairs = 3\ntrials = 3\neta_db = -130,-120,-110,-100,-90,-80\n";

#[test]
fn eta_sweep_writes_one_row_per_value_and_scenario() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.txt", ETA_SWEEP);
    let out = dir.path().join("o.csv");
    let o = cli(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{:?}", text(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "sweep_param,sweep_value,scenario,mean_total_bps,mean_per_pair_bps,mean_sic_pairs,ci95_bps,trials,seed"
    );
    assert_eq!(lines.len(), 25);
    assert!(lines[1].starts_with("eta_db,-1.30000000e2,FD-NoSIC,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",3,1")));
}

#[test]
fn reruns_are_byte_identical_and_seed_matters() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.txt", ETA_SWEEP);
    let run = |seed: &str| {
        let o = cli(&["sweep", "--config", &cfg, "--seed", seed]);
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}

#[test]
fn csv_round_trip_matches_printed_precision() {
    let base = SimConfig {
        k_users: 6,
        d_pairs: 3,
        trials: 4,
        ..SimConfig::default()
    };
    let result = run_sweep(&base, SweepParam::RuMinMbps, &[0.5, 1.5, 3.0]).unwrap();
    let rows = csv_rows(&result);
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let back = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.len(), rows.len());
    let printed = |x: f64| fmt_float(x).parse::<f64>().unwrap();
    for (a, b) in rows.iter().zip(&back) {
        assert_eq!(a.sweep_param, b.sweep_param);
        assert_eq!(a.scenario, b.scenario);
        assert_eq!((a.trials, a.seed), (b.trials, b.seed));
        for (x, y) in [
            (a.sweep_value, b.sweep_value),
            (a.mean_total_bps, b.mean_total_bps),
            (a.mean_per_pair_bps, b.mean_per_pair_bps),
            (a.mean_sic_pairs, b.mean_sic_pairs),
            (a.ci95_bps, b.ci95_bps),
        ] {
            assert_eq!(printed(x), y);
            assert!((x - y).abs() <= 5e-9 * x.abs());
        }
    }
}

#[test]
fn sweep_from_cli_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.txt", "k_users = 5\nd_pairs = 2\ntrials = 3\nd_max_m = 20, 60\n");
    let o = cli(&["sweep", "--config", &cfg]);
    assert!(o.status.success());
    let base = SimConfig {
        k_users: 5,
        d_pairs: 2,
        trials: 3,
        ..SimConfig::default()
    };
    let mut expected = Vec::new();
    write_csv(&csv_rows(&run_sweep(&base, SweepParam::DMaxM, &[20.0, 60.0]).unwrap()), &mut expected).unwrap();
    assert_eq!(o.stdout, expected);
}

#[test]
fn malformed_config_names_the_key_and_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.txt", "trials = 2\netaa_db = -90\n");
    let o = cli(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let (_, err) = text(&o);
    assert!(err.contains("line 2") && err.contains("etaa_db"), "{err}");

    let cfg = write(&dir, "d.txt", "eta_db = -90,-80\nd_max_m = 10,20\n");
    assert_eq!(cli(&["sweep", "--config", &cfg]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cli(&["verify", "--grid-n", "lots"]).status.code(), Some(1));
    assert_eq!(cli(&["solve", "--seed", "1", "--scenario", "FD-FOO"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn solve_prints_exactly_the_library_rates() {
    let dir = TempDir::new().unwrap();
    let c = SimConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..5 {
        let inst = sample_instance(&c, &mut rng);
        let path = write(&dir, &format!("i{k}.txt"), &instance_text(&inst.gains, &c));
        let o = cli(&["solve", &path]);
        let (out, _) = text(&o);
        let all = solve_all(&inst);
        for (kind, sol) in ScenarioKind::ALL.iter().zip(&all) {
            match sol {
                Ok(s) => {
                    let line = format!("R_d2d {:.4} Mbps, R_u {:.4} Mbps", s.r_d2d_bps / 1e6, s.r_u_bps / 1e6);
                    let block = out.split(&format!("[{kind}]")).nth(1).unwrap();
                    assert!(block.lines().nth(1).unwrap().contains(&line), "{kind}: {out}");
                }
                Err(_) => assert!(out.contains(&format!("[{kind}] infeasible"))),
            }
        }
        let expect = if all.iter().all(|s| s.is_ok()) { 0 } else { 2 };
        assert_eq!(o.status.code(), Some(expect));
    }
}

#[test]
fn solve_shows_fallback_when_sic_is_impossible() {
    let dir = TempDir::new().unwrap();
    // The CU is far stronger at the devices than the devices are at the
    // base station, so no multiplexing condition can hold.
    let body = "h_d_db = -60\nh_b_d1_db = -120\nh_b_d2_db = -120\nh_d1_u_db = -130\nh_d2_u_db = -130\nh_b_u_db = -80\n";
    let path = write(&dir, "i.txt", body);
    let o = cli(&["solve", &path, "--scenario", "fd-sic"]);
    assert_eq!(o.status.code(), Some(0));
    let (out, _) = text(&o);
    assert!(out.starts_with("[FD-SIC] SIC infeasible or worse, no-SIC fallback"), "{out}");
    assert_eq!(out.matches('[').count(), 1);
}

#[test]
fn solve_reports_infeasible_cu_with_exit_two() {
    let dir = TempDir::new().unwrap();
    let body = "h_d = 1e-6\nh_b_d1 = 1e-9\nh_b_d2 = 1e-9\nh_d1_u = 1e-8\nh_d2_u = 1e-8\nh_b_u = 1e-20\n";
    let o = cli(&["solve", &write(&dir, "i.txt", body)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(text(&o).0.matches("infeasible").count(), 4);
}

#[test]
fn solve_parse_error_has_line_number() {
    let dir = TempDir::new().unwrap();
    let o = cli(&["solve", &write(&dir, "i.txt", "h_d = 1e-6\nh_b_d1 = banana\n")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).1.contains("line 2: h_b_d1"));
}

#[test]
fn verify_edge_cases_pass() {
    let o = cli(&["verify", "--count", "0"]);
    assert!(o.status.success());
    assert!(text(&o).0.contains("0 violations"));
    let o = cli(&["verify", "--count", "20", "--grid-n", "2"]);
    assert!(o.status.success(), "{}", text(&o).0);
    let o = cli(&["verify", "--count", "15", "--grid-n", "40", "--seed", "9"]);
    assert!(o.status.success(), "{}", text(&o).0);
}

#[test]
fn assign_reads_a_rate_table() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.csv", "cu0,cu1,cu2\n1e6,5e6,0\n4e6,4e6,1e6\n");
    let o = cli(&["assign", &p]);
    assert!(o.status.success());
    assert_eq!(
        text(&o).0,
        "pair 0 -> CU 1  5.0000 Mbps\npair 1 -> CU 0  4.0000 Mbps\ntotal 9.0000 Mbps\n"
    );
    let p = write(&dir, "u.csv", "1,2\n3,4\n5,6\n");
    assert_eq!(cli(&["assign", &p]).status.code(), Some(1));
}

#[test]
fn missing_file_is_an_error() {
    let missing = Path::new("/nonexistent/instance.txt");
    let o = cli(&["solve", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use beltrami::grid::{load_fld1, ComplexField};
use beltrami::presets::Preset;
use beltrami::Complex64;
use beltrami_cli::{format_preset, parse_preset, Command as Sub, ExperimentConfig};
use proptest::prelude::*;
use serde_json::Value;

fn beltrami(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beltrami"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn default_config_round_trips() {
    let cfg = ExperimentConfig::default();
    assert_eq!(ExperimentConfig::parse(&cfg.serialize()).unwrap(), cfg);
}

#[test]
fn config_with_every_preset_round_trips() {
    let cfg = ExperimentConfig {
        command: Sub::Bers,
        mu: parse_preset("gaussian:center=0.1+1i,amp=0.3-0.2i,width=0.15").unwrap(),
        mu2: parse_preset("radial:alpha=0.4").unwrap(),
        a: parse_preset("remark_q:q=4").unwrap(),
        s_list: vec![0.5, 0.25],
        ..ExperimentConfig::default()
    };
    assert_eq!(ExperimentConfig::parse(&cfg.serialize()).unwrap(), cfg);
}

#[test]
fn comments_and_blank_lines_are_skipped() {
    let cfg = ExperimentConfig::parse("# grid\n\nn = 128   # coarse\nmu = zero\n").unwrap();
    assert_eq!(cfg.n, 128);
    assert_eq!(cfg.mu, Preset::Zero);
}

#[test]
fn unknown_key_exits_2_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "n = 64\nfrobnicate = 3\n").unwrap();
    let o = beltrami(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error exit=2 kind=config key=frobnicate "), "{err}");
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out");
    fs::write(&cfg, "n = 32\nmu = gaussian:center=0,amp=0.5,width=0.3\n").unwrap();
    let o = beltrami(&["solve", "--config", cfg.to_str().unwrap(), "--n", "64", "--mu", "zero", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = json(out.join("manifest.json"))["config"].as_str().unwrap().to_string();
    let used = ExperimentConfig::parse(&text).unwrap();
    assert_eq!((used.n, used.mu), (64, Preset::Zero));
}

#[test]
fn zero_coefficient_solve_writes_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = beltrami(&["solve", "--mu", "zero", "--n", "64", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let map = load_fld1(dir.path().join("map.fld1")).unwrap();
    assert_eq!(map, ComplexField::identity(*map.spec()));
    assert_eq!(json(dir.path().join("report.json"))["iterations"], 1);
    let manifest = json(dir.path().join("manifest.json"));
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["versions"]["beltrami"], beltrami::VERSION);
}

#[test]
fn zero_bers_pipeline_is_hyperbolic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = beltrami(&["bers", "--mu", "zero", "--mu2", "zero", "--n", "128", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(summary["hyperbolic_defect"].as_f64().unwrap() <= 1e-3);
    for f in ["g_zz.fld1", "g_zzbar.fld1", "g_zbzb.fld1"] {
        assert!(dir.path().join(f).exists());
    }
    assert_eq!(json(dir.path().join("manifest.json"))["conventions"]["metric"], beltrami::bers::CONVENTION);
}

#[test]
fn estimate_matches_the_golden_maximum() {
    let golden: f64 = include_str!("golden/estimate_k1_p2_max_ratio.txt")
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = beltrami(&["estimate", "--k", "1", "--p", "2", "--cases", "20", "--seed", "0", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("estimate.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("case_id,k,p,r,R,ratio"));
    let ratios: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ratios.len(), 20);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    assert!((max / golden - 1.0).abs() <= 0.05, "{max} vs golden {golden}");
}

#[test]
fn output_is_bit_identical_across_runs_and_job_counts() {
    // same relative --out in separate working directories, so even the
    // recorded config text matches
    let run = |jobs: &str| {
        let dir = tempfile::tempdir().unwrap();
        let o = Command::new(env!("CARGO_BIN_EXE_beltrami"))
            .args(["holomorphy", "--n", "64", "--s-list", "1e-2,5e-3", "--jobs", jobs, "--out", "out"])
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        let read = |f: &str| fs::read_to_string(dir.path().join("out").join(f)).unwrap();
        (read("holomorphy.csv"), read("manifest.json"))
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("4"));
}

#[test]
fn exhausted_iterations_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = beltrami(&["solve", "--n", "64", "--max-iter", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error exit=3 kind=not_converged"));
}

#[test]
fn violated_solver_precondition_exits_4() {
    // the normalization point 1 sits on the edge of a half-width-1 grid
    let dir = tempfile::tempdir().unwrap();
    let o = beltrami(&["solve", "--n", "64", "--half-width", "1", "--mu", "zero", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).starts_with("error exit=4 kind=invariant"));
}

#[test]
fn coefficient_amplitude_must_be_below_one() {
    let o = beltrami(&["solve", "--mu", "gaussian:center=0,amp=1.2,width=0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("key=mu "));
}

#[test]
fn probe_and_fixtures_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = beltrami(&["probe-np", "--n", "64", "--p", "2", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let bound = json(dir.path().join("probe.json"))["lower_bound"].as_f64().unwrap();
    assert!((bound - 1.0).abs() < 1e-10);
    let o = beltrami(&["fixtures", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let fx = json(dir.path().join("fixtures.json"));
    for s in fx["remark_slopes"].as_array().unwrap() {
        assert!((s["slope"].as_f64().unwrap() - s["expected"].as_f64().unwrap()).abs() < 0.05);
    }
    assert!(fx["transform_identities"]["dzbar_cauchy_minus_id"].as_f64().unwrap() < 1e-6);
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn preset() -> impl Strategy<Value = Preset> {
    prop_oneof![
        Just(Preset::Zero),
        (complex(), complex(), 1e-3f64..5.0).prop_map(|(center, amp, width)| Preset::Gaussian { center, amp, width }),
        (-0.9f64..0.9).prop_map(|alpha| Preset::Radial { alpha }),
        (2.01f64..100.0).prop_map(|q| Preset::RemarkQ { q }),
    ]
}

proptest! {
    #[test]
    fn presets_round_trip(p in preset()) {
        prop_assert_eq!(parse_preset(&format_preset(&p)).unwrap(), p);
    }

    #[test]
    fn configs_round_trip(
        mu in preset(),
        a in preset(),
        tol in 1e-16f64..1e-2,
        seed in any::<u64>(),
        s_list in prop::collection::vec(1e-6f64..1.0, 1..6),
        log_n in 4u32..11,
    ) {
        let cfg = ExperimentConfig { n: 1 << log_n, mu, a, tol, seed, s_list, ..ExperimentConfig::default() };
        prop_assert_eq!(ExperimentConfig::parse(&cfg.serialize()).unwrap(), cfg);
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

use xxchain::experiments::{defaults, parse_axis, run, Config, ResultTable, SUBCOMMANDS};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xxchain"))
}

fn cli(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn xxchain")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("xxchain-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn error_kind(out: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).expect("JSON error on stderr");
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn csv_header_records_version_seed_and_config() {
    let out = cli(&["thermal-factor", "--seed", "12"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# xxchain "));
    assert!(text.contains("# seed: 12\n"));
    assert!(text.contains("# config: temperature_mk = 40\n"));
    let t = ResultTable::from_csv(&text).unwrap();
    assert_eq!(t.seed, 12);
    assert_eq!(t.numbers("factor").len(), 2);
}

#[test]
fn every_default_key_is_echoed() {
    for sub in SUBCOMMANDS {
        let keys: Vec<&str> = defaults(sub).unwrap().iter().map(|(k, _)| *k).collect();
        let out = cli(&[sub, "--print-defaults"]);
        assert!(out.status.success(), "{sub}");
        let text = String::from_utf8(out.stdout).unwrap();
        for k in keys {
            assert!(text.lines().any(|l| l.starts_with(&format!("{k} = "))), "{sub}: {k}");
        }
    }
}

#[test]
fn thread_budget_does_not_change_bytes() {
    for args in [
        vec!["chain-spectrum"],
        vec!["verify-flow", "--set", "chain_length=2,3"],
        vec!["basic-gate", "--set", "gate_time_ns=10,30", "--set", "runs=8"],
    ] {
        let one: Vec<&str> = args.iter().cloned().chain(["--threads", "1"]).collect();
        let two: Vec<&str> = args.iter().cloned().chain(["--threads", "2"]).collect();
        let (a, b) = (cli(&one), cli(&two));
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn unknown_key_is_a_machine_readable_error() {
    let out = cli(&["chain-spectrum", "--set", "chain_lenght=3"]);
    assert!(!out.status.success());
    assert_eq!(error_kind(&out), "unknown_key");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = cli(&["fig9"]);
    assert!(!out.status.success());
    assert_eq!(error_kind(&out), "usage");
}

#[test]
fn empty_grid_fails_before_writing() {
    let path = scratch("empty.csv");
    let _ = std::fs::remove_file(&path);
    let out = cli(&["chain-spectrum", "--set", "chain_length=range:5:3", "--out", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(!path.exists());
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("spectrum.conf");
    std::fs::write(&cfg, "# two short chains\nchain_length = 2,3\nseed = 5\n").unwrap();
    let out = cli(&["chain-spectrum", "--config", cfg.to_str().unwrap(), "--seed", "7"]);
    assert!(out.status.success());
    let t = ResultTable::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.seed, 7);
    assert_eq!(t.numbers("L"), vec![2.0, 3.0]);
}

#[test]
fn json_output_mirrors_csv() {
    let path = scratch("flow.json");
    let out = cli(&["squeeze", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let j = ResultTable::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let c = ResultTable::from_csv(&String::from_utf8(cli(&["squeeze"]).stdout).unwrap()).unwrap();
    assert_eq!(j, c);
}

#[test]
fn config_echo_reproduces_the_run() {
    let mut cfg = Config::default();
    cfg.set("chain_length", "2");
    cfg.set("g_z_ratio", "log:0.05:0.2:4");
    cfg.set("seed", "3");
    let first = run("chain-splitting", &cfg).unwrap();
    let mut echo = Config::default();
    for (k, v) in &first.config {
        echo.set(k, v);
    }
    let second = run("chain-splitting", &echo).unwrap();
    assert_eq!(first.to_csv(), second.to_csv());
}

#[test]
fn per_run_rows_cover_grid_times_runs() {
    let mut cfg = Config::default();
    cfg.set("gate_time_ns", "10,20,40");
    cfg.set("runs", "4");
    cfg.set("per_run", "1");
    let t = run("basic-gate", &cfg).unwrap();
    assert_eq!(t.rows.len(), 3 * 4);
}

#[test]
fn no_nan_outside_flagged_rows() {
    for sub in ["chain-spectrum", "chain-splitting", "transistor-xx", "squeeze", "thermal-factor"] {
        let t = run(sub, &Config::default()).unwrap();
        let flag = t.column("converged");
        for row in &t.rows {
            let flagged = flag.is_some_and(|i| row[i].num() == Some(0.0));
            let has_nan = row.iter().any(|v| v.num().is_some_and(f64::is_nan));
            assert!(!has_nan || flagged, "{sub}: {row:?}");
        }
    }
}

#[test]
fn axis_grammar() {
    assert_eq!(parse_axis("k", "range:2:4").unwrap(), vec![2.0, 3.0, 4.0]);
    assert_eq!(parse_axis("k", "0,lin:1:2:3").unwrap(), vec![0.0, 1.0, 1.5, 2.0]);
    let g = parse_axis("k", "log:0.01:1:3").unwrap();
    assert!((g[1] - 0.1).abs() < 1e-15);
    assert!(parse_axis("k", "range:4:2").is_err());
    assert!(parse_axis("k", "nan").is_err());
    assert!(parse_axis("k", "").is_err());
}

#[test]
fn random_fields_keep_the_exponent_with_a_smaller_prefactor() {
    let table = |random: &str| {
        let mut cfg = Config::default();
        cfg.set("chain_length", "2,3,4");
        cfg.set("g_z_ratio", "log:0.05:0.2:5");
        cfg.set("random_fields", random);
        run("chain-splitting", &cfg).unwrap()
    };
    let (uniform, random) = (table("0"), table("1"));
    let (ls, rs) = (random.numbers("L"), random.numbers("g_z_ratio"));
    let (su, sr) = (uniform.numbers("splitting_over_gxx"), random.numbers("splitting_over_gxx"));
    for l in [2.0, 3.0, 4.0] {
        let idx: Vec<usize> = (0..ls.len()).filter(|&i| ls[i] == l).collect();
        let first = idx[0];
        let last = *idx.last().unwrap();
        let slope = (sr[last] / sr[first]).ln() / (rs[last] / rs[first]).ln();
        assert!((slope - l).abs() < 0.3, "L={l}: slope {slope}");
        assert!(idx.iter().all(|&i| sr[i] < su[i]), "L={l}");
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &str = "[population]\nsize = 300\n[network]\ntarget_mean_degree = 8.0\n[media]\nnews_frequency = 0.8\n";

fn climgov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_climgov")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn shipped_scenarios_validate() {
    for name in ["default.toml", "confrontational.toml"] {
        let o = climgov(&["validate", "--config", &scenario(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert_eq!(stdout(&o).trim(), "ok");
    }
}

#[test]
fn validation_failures_list_paths_and_exit_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "[engine]\nhorizon = 0\n[population.alignment_shares]\naligned = 0.1\nneutral = 0.5\nopposed = 0.3\n",
    );
    let o = climgov(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("engine.horizon:")), "{out}");
    assert!(out.lines().any(|l| l.starts_with("population.alignment_shares:")), "{out}");
}

#[test]
fn parse_errors_exit_one_and_missing_files_exit_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "broken.toml", "[engine\nhorizon = 3\n");
    assert_eq!(climgov(&["validate", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    let unknown = write(dir.path(), "unknown.toml", "[engine]\nhorizn = 3\n");
    assert_eq!(climgov(&["validate", "--config", unknown.to_str().unwrap()]).status.code(), Some(1));
    let missing = dir.path().join("nope.toml");
    assert_eq!(climgov(&["validate", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn run_writes_identical_outputs_for_identical_invocations() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let cfg = cfg.to_str().unwrap();
    let mut outputs = Vec::new();
    for (k, threads) in ["1", "1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("out{k}"));
        let o = climgov(&[
            "run", "--config", cfg, "--seed", "42", "--out", out.to_str().unwrap(), "--parallelism", threads,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("decision: "));
        let trace = fs::read(out.join("trace.csv")).unwrap();
        let summary = fs::read(out.join("summary.json")).unwrap();
        assert!(!trace.is_empty() && !summary.is_empty());
        assert_eq!(String::from_utf8_lossy(&trace).lines().count(), 13);
        outputs.push((trace, summary));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn run_demands_an_explicit_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("out");
    let o = climgov(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed"));
    assert!(!out.join("summary.json").exists());
}

#[test]
fn run_rejects_invalid_scenarios() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[engine]\nhorizon = 0\n");
    let out = dir.path().join("out");
    let o = climgov(&["run", "--config", cfg.to_str().unwrap(), "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("engine.horizon"));
}

#[test]
fn population_dump_has_one_row_per_citizen() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let out = dir.path().join("out");
    let o = climgov(&[
        "run", "--config", cfg.to_str().unwrap(), "--seed", "3", "--out", out.to_str().unwrap(), "--dump-population",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("population.csv")).unwrap();
    assert!(csv.starts_with("id,"));
    assert_eq!(csv.lines().count(), 301);
}

fn field<'a>(header: &'a str, row: &'a str, name: &str) -> &'a str {
    let k = header.split(',').position(|h| h == name).unwrap();
    row.split(',').nth(k).unwrap()
}

#[test]
fn single_cell_sweep_matches_run_summary() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let sweep = write(
        dir.path(),
        "sweep.toml",
        "parameter = \"media.news_frequency\"\nvalues = [0.8]\nreplicates = 1\nbase_seed = 5\n",
    );
    let out = dir.path().join("sweep");
    let o = climgov(&[
        "sweep", "--config", cfg.to_str().unwrap(), "--sweep", sweep.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = table.lines();
    let (header, row) = (lines.next().unwrap(), lines.next().unwrap());
    assert!(lines.next().is_none());

    let seed = field(header, row, "seed");
    let run_out = dir.path().join("run");
    let o = climgov(&[
        "run", "--config", cfg.to_str().unwrap(), "--seed", seed, "--out", run_out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run_out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(field(header, row, "decision"), summary["decision"].as_str().unwrap());
    assert_eq!(field(header, row, "seed"), summary["seed"].to_string());
    assert_eq!(field(header, row, "member_count"), summary["member_count"].to_string());
    let num = |name: &str| field(header, row, name).parse::<f64>().unwrap();
    assert_eq!(num("final_pressure"), summary["final_pressure"].as_f64().unwrap());
    assert_eq!(num("final_participation_rate"), summary["final_participation_rate"].as_f64().unwrap());
    assert_eq!(num("mean_w_climate_concern"), summary["final_mean_weights"]["climate_concern"].as_f64().unwrap());
}

#[test]
fn sweep_tables_match_across_parallelism() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let sweep = write(
        dir.path(),
        "sweep.toml",
        "parameter = \"media.pro_environment_share\"\nvalues = [0.0, 1.0]\nreplicates = 3\nbase_seed = 5\n",
    );
    let tables: Vec<String> = ["1", "8"]
        .iter()
        .map(|p| {
            let out = dir.path().join(format!("sweep{p}"));
            let o = climgov(&[
                "sweep", "--config", cfg.to_str().unwrap(), "--sweep", sweep.to_str().unwrap(),
                "--out", out.to_str().unwrap(), "--parallelism", p,
            ]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            fs::read_to_string(out.join("sweep.csv")).unwrap()
        })
        .collect();
    assert_eq!(tables[0], tables[1]);
    assert_eq!(tables[0].lines().count(), 7);
}

#[test]
fn bad_sweep_parameter_is_a_validation_failure() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.toml", SMALL);
    let sweep = write(dir.path(), "sweep.toml", "parameter = \"media.nothing\"\nvalues = [1.0]\nbase_seed = 1\n");
    let out = dir.path().join("sweep");
    let o = climgov(&[
        "sweep", "--config", cfg.to_str().unwrap(), "--sweep", sweep.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("media.nothing"));
}

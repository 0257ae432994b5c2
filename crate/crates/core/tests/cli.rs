use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_noisebench");

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(cwd)
        .env_remove("NOISEBENCH_SEED")
        .env("NO_COLOR", "1")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn synth(dir: &Path, name: &str, extra: &[&str]) {
    let mut args = vec!["synth", "--cv", "0.02", "-o", name];
    args.extend_from_slice(extra);
    let o = run(&args, dir);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn gate_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "base.csv", &["--seed", "1"]);
    synth(dir.path(), "cand.csv", &["--seed", "2", "--effect", "0.04"]);

    let ok = run(&["compare", "base.csv", "cand.csv", "--gate", "fail_on_slower"], dir.path());
    assert_eq!(code(&ok), 0);
    let record: serde_json::Value = serde_json::from_str(stdout(&ok).trim()).unwrap();
    assert_eq!(record["verdict"], "faster");
    assert_eq!(record["pass"], true);

    let bad = run(&["compare", "cand.csv", "base.csv", "--gate", "fail_on_slower"], dir.path());
    assert_eq!(code(&bad), 3);
    let same = run(&["compare", "base.csv", "base.csv", "--gate", "fail_on_not_faster"], dir.path());
    assert_eq!(code(&same), 3);
    let plain = run(&["compare", "cand.csv", "base.csv"], dir.path());
    assert_eq!(code(&plain), 0);
    assert!(stdout(&plain).contains("slower"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["compare", "missing.csv", "other.csv"], dir.path())), 2);
    assert_eq!(code(&run(&["summarize", "--bogus-flag", "x"], dir.path())), 2);
    std::fs::write(dir.path().join("junk.csv"), "step,seconds\n0,abc\n").unwrap();
    let junk = run(&["summarize", "junk.csv"], dir.path());
    assert_eq!(code(&junk), 2);
    assert!(!junk.stderr.is_empty());
    std::fs::write(dir.path().join("short.csv"), "step,seconds\n0,1\n1,1\n2,1.5\n").unwrap();
    assert_eq!(code(&run(&["compare", "short.csv", "short.csv"], dir.path())), 2);
}

#[test]
fn ingest_then_summarize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("app.log"),
        (0..40).map(|i| format!("noise\nSTEP {i} TIME {}.5\n", 10 + i % 3)).collect::<String>(),
    )
    .unwrap();
    let o = run(
        &["ingest", "app.log", "--pattern", r"STEP (?<step>\d+) TIME (?<seconds>[0-9.]+)", "-o", "app.json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("app.json")).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["input"]["sha256"].as_str().unwrap().len(), 64);

    let s = run(&["summarize", "app.json", "--json"], dir.path());
    assert_eq!(code(&s), 0, "{}", String::from_utf8_lossy(&s.stderr));
    let out = stdout(&s);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(out.contains("\"n\": 35") || out.contains("\"n\":35"), "{v}");
}

#[test]
fn bandwidth_report_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let cpu = fixture("broadwell24_bandwidth.csv");
    let gpu = fixture("cascade40_bandwidth.csv");
    let o = run(
        &["bandwidth", &cpu, &gpu, "--pair", "20 ranks 2 threads", "12 ranks 2 threads", "--json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ratio = &v["ratios"][0];
    assert!((ratio["runtime_speedup"].as_f64().unwrap() - 3.4035).abs() < 1e-3);
    assert!((ratio["bandwidth_ratio"].as_f64().unwrap() - 2.0517).abs() < 1e-3);

    let missing = run(&["bandwidth", &cpu, "--pair", "nope", "12 ranks 2 threads"], dir.path());
    assert_eq!(code(&missing), 2);
}

#[test]
fn sweep_dry_run_spawns_nothing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("plan.toml"),
        r#"
[hardware]
cores_per_node = 36
sockets_per_node = 2

[launch]
template = "srun -N {nodes} -n {total_ranks} {extra_flags} {app}"
app = "./cp2k.psmp -i H2O.inp"

[axes]
nodes = [10]
total_ranks = [40, 180]
distributions = ["block", "round_robin"]
"#,
    )
    .unwrap();
    let o = run(&["sweep", "run", "plan.toml", "--dry-run"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.contains("OMP_NUM_THREADS=9 srun -N 10 -n 40 --distribution=block ./cp2k.psmp -i H2O.inp"));
    assert!(out.contains("OMP_NUM_THREADS=2 srun -N 10 -n 180 --distribution=cyclic"));
    assert!(!dir.path().join("runs").exists());
}

#[test]
fn scaling_command_reports_fit() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scaling", &fixture("strong_scaling.csv"), "--fit", "--json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f = v["amdahl"]["parallel_fraction"].as_f64().unwrap();
    assert!((f - 0.95).abs() < 1e-6, "{v}");
}

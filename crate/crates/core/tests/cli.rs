use std::path::Path;
use std::process::{Command, Output};

use gesplayer::generate::{bundled_scenarios, generate_trace, trace_to_ndjson};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gesplayer"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .unwrap()
}

fn traces_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/traces"))
}

#[test]
fn unknown_scenario_is_usage_error() {
    assert_eq!(run(&["gen", "--scenario", "moonwalk"]).status.code(), Some(2));
}

#[test]
fn bad_argument_is_usage_error() {
    assert_eq!(run(&["gen", "--scenario", "seek-sweep", "--fps", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--scenario", "seek-sweep", "--fps", "0"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_trace_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("log.ndjson");
    let o = run(&["replay", "--trace", "/nonexistent/trace.ndjson", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "touch_begin_ratio = 0.5\ntouch_release_ratio = 0.1\n").unwrap();
    let trace = dir.path().join("empty.ndjson");
    std::fs::write(&trace, "").unwrap();
    let out = dir.path().join("log.ndjson");
    let o = run(&[
        "replay",
        "--trace",
        trace.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_trace_gives_empty_log_and_default_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("empty.ndjson");
    std::fs::write(&trace, "").unwrap();
    let out = dir.path().join("log.ndjson");
    let o = run(&["replay", "--trace", trace.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
    let snap: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(snap["position"], 0.0);
    assert_eq!(snap["volume"], 0.5);
    assert_eq!(snap["brightness"], 1.0);
    assert_eq!(snap["playing"], true);
}

#[test]
fn bad_lines_are_reported_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.ndjson");
    std::fs::write(&trace, "{\"t_ms\":0,\"hands\":[]}\n\nnot json\n{\"t_ms\":0,\"hands\":[]}\n").unwrap();
    let out = dir.path().join("log.ndjson");
    let o = run(&["replay", "--trace", trace.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let diags: Vec<serde_json::Value> = String::from_utf8(o.stderr)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(diags.len(), 2);
    assert_eq!(diags[0]["error"], "MalformedRecord");
    assert_eq!(diags[0]["line"], 3);
    assert_eq!(diags[1]["error"], "NonMonotonicTimestamp");
    assert_eq!(diags[1]["line"], 4);
}

#[test]
fn gen_writes_stdout_matching_library() {
    let s = &bundled_scenarios()[1];
    let o = run(&[
        "gen",
        "--scenario",
        s.name.as_str(),
        "--seed",
        &s.seed.to_string(),
        "--duration-ms",
        &s.duration_ms.to_string(),
        "--noise",
        &s.noise_sigma.to_string(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), trace_to_ndjson(&generate_trace(s).unwrap()));
}

#[test]
fn bundled_traces_are_current() {
    for s in bundled_scenarios() {
        let path = traces_dir().join(format!("{}.ndjson", s.name.as_str()));
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, trace_to_ndjson(&generate_trace(&s).unwrap()), "{}", path.display());
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn distmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distmatch"))
        .args(args)
        .env_remove("DISTMATCH_MAX_DISTRIBUTIONS")
        .env_remove("DISTMATCH_MAX_MATCHINGS")
        .env_remove("DISTMATCH_MAX_RUNS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_prints_worked_example_outcome() {
    let o = distmatch(&["run", &fixture("appendix_a")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("outcome={(s1,c2),(s2,c1),(s3,c4),(s4,c1),(s5,c1),(s6,c3),(s7,c2)}"));
    assert!(out.contains("initial_value=1\noutcome_value=1\nsteps=5\n"));
}

#[test]
fn run_writes_one_graph_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let o = distmatch(&["run", &fixture("appendix_a"), "--trace", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut files: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["step_1.dot", "step_2.dot", "step_3.dot", "step_4.dot", "step_5.dot"]);
    let first = std::fs::read_to_string(dir.path().join("step_1.dot")).unwrap();
    assert!(first.starts_with("digraph step1 {"));
    assert_eq!(first.matches("penwidth=3").count(), 4);
}

#[test]
fn run_on_all_prefer_home_keeps_initial_matching() {
    let o = distmatch(&["run", &fixture("all_prefer_home")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("outcome={(s1,c1),(s2,c2),(s3,c3),(s4,c4),(s5,c5),(s6,c6)}"));
    assert!(out.contains("steps=1\n"));
}

#[test]
fn verify_all_passes_on_worked_example() {
    let o = distmatch(&["verify", &fixture("appendix_a"), "all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for p in ["improve", "ir", "efficient", "strategyproof"] {
        assert!(out.contains(&format!("property={p}\nverdict=PASS")), "{p}: {out}");
    }
}

#[test]
fn verify_supplied_matching() {
    let o = distmatch(&["verify", &fixture("example_1"), "efficient", "--matching", "c6,c2,c4,c3,c5,c1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict=PASS"));

    let o = distmatch(&["verify", &fixture("example_1"), "efficient"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness=dominated by"));
}

#[test]
fn sampled_search_reports_seed() {
    let args = ["verify", &fixture("appendix_a"), "strategyproof", "--mode", "sampled", "--samples", "25", "--seed", "9"];
    let o = distmatch(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("search_size=25\nseed=9\n"));
    assert_eq!(stdout(&distmatch(&args)), stdout(&o));
}

#[test]
fn budget_overrun_exits_four() {
    let o = Command::new(env!("CARGO_BIN_EXE_distmatch"))
        .args(["verify", &fixture("appendix_a"), "efficient"])
        .env("DISTMATCH_MAX_MATCHINGS", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("> 10"), "{err}");
}

#[test]
fn check_verdicts() {
    let o = distmatch(&["check", &fixture("example_1"), "pseudo-mnat"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict=FAIL\nwitness=xi="));

    let o = distmatch(&["check", &fixture("appendix_b"), "pseudo-mnat"]);
    assert_eq!(o.status.code(), Some(1));
    let o = distmatch(&["check", &fixture("appendix_b"), "mnat"]);
    assert_eq!(o.status.code(), Some(0));

    let o = distmatch(&["check", &fixture("quota"), "mnat"]);
    assert_eq!(o.status.code(), Some(0));
    let o = distmatch(&["check", &fixture("quota"), "pseudo-mnat"]);
    assert_eq!(o.status.code(), Some(0));

    let o = distmatch(&["check", &fixture("appendix_a"), "theorem2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("equivalence=PASS\n"));
}

#[test]
fn goal_lists_members() {
    let o = distmatch(&["goal", &fixture("appendix_b")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "size=2\n[[1,1]]\n[[2,1]]\n");

    let o = distmatch(&["goal", &fixture("appendix_b"), "--lambda", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("lambda=-1\nsize=8\n"), "{}", stdout(&o));
}

#[test]
fn fixture_name_without_extension_resolves() {
    let path = fixture("quota.json");
    let bare = path.trim_end_matches(".json");
    assert_eq!(stdout(&distmatch(&["run", bare])), stdout(&distmatch(&["run", &path])));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    let text = std::fs::read_to_string(fixture("quota.json")).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let o = distmatch(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("E100 line"));

    let o = distmatch(&["run", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", &fixture("appendix_a"), "all"];
    assert_eq!(stdout(&distmatch(&args)), stdout(&distmatch(&args)));
}

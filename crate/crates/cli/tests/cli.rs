use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use latesched_cli::instance_file::{InstanceFile, JobRecord, Metadata, WindowKind, WindowRecord};
use latesched_cli::{exit, gen_random, parse_instance, GenParams, Scenario};
use proptest::prelude::*;

const DEADLINE_EXAMPLE: &str = r#"{"jobs":[{"id":1,"p":2,"r":0,"q":5},{"id":2,"p":3,"r":1,"q":7},{"id":3,"p":2,"r":2,"q":1}],"deadline":7}"#;
const ONA_EXAMPLE: &str = r#"{"jobs":[{"id":1,"p":4,"r":0,"q":0},{"id":2,"p":3,"r":0,"q":0}],"window":{"kind":"ona","t1":5,"t2":8}}"#;

fn latesched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latesched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_deadline_example() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.json", DEADLINE_EXAMPLE);
    let out = latesched(&["solve", &file, "--epsilon", "1/2"]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    let text = stdout(&out);
    assert!(text.contains("sequence: 1 2 3"));
    assert!(text.contains("lmax: 12"));
    assert!(text.contains("\nd,deadline,1/2,ok,12,"));
}

#[test]
fn solve_deadline_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.json", DEADLINE_EXAMPLE);
    let out = latesched(&["solve", &file, "--deadline", "6"]);
    assert_eq!(out.status.code(), Some(exit::INFEASIBLE));
}

#[test]
fn solve_operator_example() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "o.json", ONA_EXAMPLE);
    let out = latesched(&["solve", &file, "--scenario", "ona", "--epsilon", "1/2"]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    assert!(stdout(&out).contains("lmax: 8"));
    let mna = latesched(&["solve", &file, "--scenario", "mna", "--epsilon", "1/2"]);
    assert!(stdout(&mna).contains("lmax: 11"));
}

#[test]
fn window_scenarios_need_unit_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "o.json", ONA_EXAMPLE);
    for eps in ["2/3", "0.5"] {
        let out = latesched(&["solve", &file, "--scenario", "mna", "--epsilon", eps]);
        assert_eq!(out.status.code(), Some(exit::FAILURE), "{eps}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn decimals_accepted_for_deadline() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.json", DEADLINE_EXAMPLE);
    let out = latesched(&["solve", &file, "--epsilon", "0.5"]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    assert!(stdout(&out).contains("epsilon: 1/2"));
}

#[test]
fn window_flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.json", DEADLINE_EXAMPLE);
    let out = latesched(&[
        "solve",
        &file,
        "--scenario",
        "mna",
        "--t1",
        "1",
        "--t2",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    let missing = latesched(&["solve", &file, "--scenario", "ona"]);
    assert_eq!(missing.status.code(), Some(exit::FAILURE));
}

#[test]
fn pareto_example() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.json", DEADLINE_EXAMPLE);
    let out = latesched(&["pareto", &file]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    assert!(stdout(&out).contains("cmax 7 lmax 12 sequence 1 2 3"));
    let exact = latesched(&["oracle", &file, "--scenario", "pareto"]);
    let text = stdout(&exact);
    assert!(text.contains("cmax 7 lmax 12"));
    assert!(text.contains("cmax 8 lmax 11"));
}

#[test]
fn oracle_reports_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.json", DEADLINE_EXAMPLE);
    let out = latesched(&["oracle", &file, "--scenario", "p0"]);
    assert!(stdout(&out).contains("lmax: 11"));
    let out = latesched(&["oracle", &file]);
    assert!(stdout(&out).contains("lmax: 12"));
    let out = latesched(&["oracle", &file, "--deadline", "6"]);
    assert_eq!(out.status.code(), Some(exit::INFEASIBLE));
}

#[test]
fn schema_errors_exit_with_schema_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = [
        r#"{"jobs":[{"id":1,"p":5,"r":3,"q":2}],"window":{"kind":"mna","t1":8,"t2":5}}"#,
        r#"{"jobs":[{"id":1,"p":5,"r":3,"q":2},{"id":1,"p":5,"r":3,"q":2}]}"#,
        r#"{"jobs":[{"id":1,"p":5,"r":3,"q":2}],"extra":1}"#,
        "not json",
    ];
    for (i, text) in bad.iter().enumerate() {
        let file = write(dir.path(), &format!("bad{i}.json"), text);
        let out = latesched(&["solve", &file]);
        assert_eq!(out.status.code(), Some(exit::SCHEMA), "{text}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn guess_budget_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.json", DEADLINE_EXAMPLE);
    let csv = dir.path().join("row.csv");
    let out = latesched(&[
        "solve",
        &file,
        "--epsilon",
        "1/100",
        "--guess-budget",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(exit::GUESS_BUDGET));
    assert!(out.stdout.is_empty());
    assert!(!csv.exists());
}

#[test]
fn gen_is_deterministic_and_parses() {
    let a = latesched(&["gen", "--n", "5", "--seed", "42", "--scenario", "mna"]);
    let b = latesched(&["gen", "--n", "5", "--seed", "42", "--scenario", "mna"]);
    assert_eq!(a.status.code(), Some(exit::SUCCESS));
    assert_eq!(a.stdout, b.stdout);
    let parsed = parse_instance(&stdout(&a)).unwrap();
    assert_eq!(parsed.instance.len(), 5);
    let zero = latesched(&["gen", "--n", "0"]);
    assert_eq!(zero.status.code(), Some(exit::FAILURE));
}

#[test]
fn compare_corpus_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let corpus_s = corpus.to_str().unwrap();
    let gen = latesched(&[
        "gen",
        "--n",
        "5",
        "--seed",
        "100",
        "--count",
        "12",
        "--scenario",
        "deadline",
        "--out",
        corpus_s,
    ]);
    assert_eq!(gen.status.code(), Some(exit::SUCCESS));
    let run = || {
        latesched(&[
            "compare",
            corpus_s,
            "--scenario",
            "deadline",
            "--epsilon",
            "1/2",
            "--omit-timing",
        ])
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(exit::SUCCESS));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 13);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(3) == Some("ok")));
}

#[test]
fn compare_skips_instances_above_cap() {
    let dir = tempfile::tempdir().unwrap();
    let big = gen_random(&GenParams::new(12, 1, Scenario::P0)).unwrap();
    write(dir.path(), "big.json", &big.to_json());
    write(dir.path(), "small.json", DEADLINE_EXAMPLE);
    let out = latesched(&[
        "compare",
        dir.path().to_str().unwrap(),
        "--scenario",
        "p0",
        "--oracle-cap",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("big,p0,1/2,skipped,"));
    assert!(rows[1].starts_with("small,p0,1/2,ok,"));
}

#[test]
fn compare_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = latesched(&[
        "compare",
        dir.path().to_str().unwrap(),
        "--scenario",
        "ona",
        "--epsilon",
        "1/2",
    ]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn compare_flags_invalid_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", "{}");
    let out = latesched(&["compare", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::SCHEMA));
    assert!(stdout(&out).contains("a,p0,1/2,invalid,"));
}

fn file_strategy() -> impl Strategy<Value = InstanceFile> {
    let job = (1i64..=50, 0i64..=100, 0i64..=100);
    (
        prop::collection::vec(job, 1..8),
        prop::option::of(0i64..200),
        prop::option::of((any::<bool>(), 0i64..50, 0i64..20)),
        prop::option::of((
            prop::option::of("[a-z0-9-]{0,12}"),
            prop::option::of(any::<u64>()),
        )),
    )
        .prop_map(|(jobs, deadline, window, metadata)| InstanceFile {
            jobs: jobs
                .into_iter()
                .enumerate()
                .map(|(i, (p, r, q))| JobRecord {
                    id: i as u32 + 1,
                    p,
                    r,
                    q,
                })
                .collect(),
            deadline,
            window: window.map(|(ona, t1, len)| WindowRecord {
                kind: if ona {
                    WindowKind::Ona
                } else {
                    WindowKind::Mna
                },
                t1,
                t2: t1 + len,
            }),
            metadata: metadata.map(|(name, seed)| Metadata { name, seed }),
        })
}

proptest! {
    #[test]
    fn emit_parse_round_trip(file in file_strategy()) {
        let text = file.to_json();
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(&parsed.file, &file);
        let canonical: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again: serde_json::Value = serde_json::from_str(&parsed.file.to_json()).unwrap();
        prop_assert_eq!(canonical, again);
    }

    #[test]
    fn generated_files_parse(n in 1usize..10, seed in any::<u64>(), pick in 0usize..5) {
        let scenario = [Scenario::P0, Scenario::Deadline, Scenario::Pareto, Scenario::Mna, Scenario::Ona][pick];
        let file = gen_random(&GenParams::new(n, seed, scenario)).unwrap();
        let parsed = parse_instance(&file.to_json()).unwrap();
        prop_assert_eq!(parsed.file, file);
    }
}

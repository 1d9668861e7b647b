use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn solves_and_verifies_a_trivial_cnf() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "t.cnf", "p cnf 1 1\n1 0\n");
    let sol = path(&dir, "t.json");
    let out = cfl(&["solve", &cnf, "--seed", "1", "--out", &sol]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(doc["outcome"], "solved");
    // 2 is true
    assert_eq!(doc["assignment"], serde_json::json!([2]));

    let out = cfl(&["verify", &cnf, &sol]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "VALID");
}

#[test]
fn solved_ksat_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let cnf = path(&dir, "k.cnf");
    let out = cfl(&[
        "generate", "ksat", "--n", "40", "--r", "3.0", "--seed", "5", "--out", &cnf,
    ]);
    assert_eq!(code(&out), 0);
    for solver in ["cfl", "schoening", "walksat"] {
        let sol = path(&dir, &format!("{solver}.csv"));
        let out = cfl(&[
            "solve", &cnf, "--solver", solver, "--seed", "3", "--format", "csv", "--out", &sol,
        ]);
        assert_eq!(code(&out), 0, "{solver}");
        let out = cfl(&["verify", &cnf, &sol]);
        assert_eq!(stdout(&out).trim(), "VALID", "{solver}");
    }
}

#[test]
fn unsatisfiable_hits_the_cap() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = cfl(&["solve", &cnf, "--cap", "10000", "--seed", "1"]);
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["outcome"], "cap-exceeded");
}

#[test]
fn invalid_assignment_exits_one() {
    let dir = TempDir::new().unwrap();
    let cnf = write(&dir, "t.cnf", "p cnf 2 1\n1 2 0\n");
    let bad = write(&dir, "bad.txt", "1 1\n");
    let out = cfl(&["verify", &cnf, &bad]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).trim(), "INVALID");
}

#[test]
fn usage_and_data_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&cfl(&["solve"])), 64);
    assert_eq!(code(&cfl(&["no-such-command"])), 64);
    let cnf = write(&dir, "t.cnf", "p cnf 1 1\n1 0\n");
    assert_eq!(
        code(&cfl(&["solve", &cnf, "--a", "1.5", "--seed", "1"])),
        64
    );
    let bad = write(&dir, "bad.cnf", "p cnf 1 1\n2 0\n");
    assert_eq!(code(&cfl(&["solve", &bad, "--seed", "1"])), 65);
    let junk = write(&dir, "junk.json", "{ not json");
    assert_eq!(code(&cfl(&["solve", &junk, "--seed", "1"])), 65);
}

#[test]
fn generate_uses_rounded_clause_count_and_is_reproducible() {
    let a = cfl(&[
        "generate", "ksat", "--n", "100", "--r", "4.267", "--seed", "9",
    ]);
    let b = cfl(&[
        "generate", "ksat", "--n", "100", "--r", "4.267", "--seed", "9",
    ]);
    assert_eq!(code(&a), 0);
    let text = stdout(&a);
    assert!(text.starts_with("p cnf 100 427\n"), "{}", &text[..20]);
    assert_eq!(text.lines().count(), 428);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn coloring_from_edge_list() {
    let dir = TempDir::new().unwrap();
    let edges = write(&dir, "g.txt", "1 2\n2 3\n3 1\n3 4\n");
    let out = cfl(&["generate", "coloring", "--graph", &edges, "--D", "3"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["clauses"].as_array().unwrap().len(), 4);

    let inst = write(&dir, "g.json", &stdout(&out));
    let out = cfl(&["solve", &inst, "--seed", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bound_examples() {
    let out = cfl(&[
        "bound",
        "--N",
        "2",
        "--D",
        "2",
        "--a",
        "1",
        "--b",
        "1",
        "--eps",
        "0.36787944117144233",
        "--kind",
        "coloring",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let bound: f64 = text
        .lines()
        .find_map(|l| l.split("bound = ").nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!((bound - 32.0).abs() < 1e-6, "{text}");

    let out = cfl(&[
        "bound", "--N", "100", "--D", "2", "--a", "0.2", "--b", "0.2", "--eps", "0.01",
    ]);
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("general")).unwrap();
    assert!(
        line.contains("ln = ") && !line.contains("bound ="),
        "{line}"
    );

    let out = cfl(&[
        "bound", "--N", "10", "--D", "3", "--a", "0.1", "--b", "0.1", "--eps", "0.01", "--kind",
        "both",
    ]);
    assert!(stdout(&out).contains("coloring < general"));
}

fn bench_csv(dir: &TempDir, name: &str, jobs: &str) -> Vec<u8> {
    let out_path = path(dir, name);
    let out = cfl(&[
        "bench",
        "--n",
        "20,30",
        "--r",
        "3.0,4.0",
        "--solver",
        "cfl,schoening,walksat",
        "--trials",
        "6",
        "--cap",
        "20000",
        "--seed",
        "11",
        "--jobs",
        jobs,
        "--out",
        &out_path,
    ]);
    assert_eq!(code(&out), 0);
    fs::read(out_path).unwrap()
}

#[test]
fn bench_is_byte_identical_across_jobs() {
    let dir = TempDir::new().unwrap();
    let one = bench_csv(&dir, "a.csv", "1");
    let again = bench_csv(&dir, "b.csv", "1");
    let many = bench_csv(&dir, "c.csv", "8");
    assert_eq!(one, again);
    assert_eq!(one, many);
    let text = String::from_utf8(one).unwrap();
    assert!(text.starts_with("family,n,m,k,D,solver,a,b,seed,outcome,tau,normalized_tau,wall_ms\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 6 * 3);
}

#[test]
fn resumed_bench_matches_a_full_run() {
    let dir = TempDir::new().unwrap();
    let full = bench_csv(&dir, "full.csv", "1");
    let text = String::from_utf8(full.clone()).unwrap();
    let partial: String = text
        .lines()
        .take(1 + 17)
        .map(|l| format!("{l}\n"))
        .collect();
    let resumed = write(&dir, "resumed.csv", &partial);
    let out = cfl(&[
        "bench",
        "--n",
        "20,30",
        "--r",
        "3.0,4.0",
        "--solver",
        "cfl,schoening,walksat",
        "--trials",
        "6",
        "--cap",
        "20000",
        "--seed",
        "11",
        "--out",
        &resumed,
        "--resume",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read(Path::new(&resumed)).unwrap(), full);
}

#[test]
fn solve_is_reproducible_with_parallel_agents() {
    let dir = TempDir::new().unwrap();
    let cnf = path(&dir, "k.cnf");
    cfl(&[
        "generate", "ksat", "--n", "120", "--r", "3.5", "--seed", "4", "--out", &cnf,
    ]);
    let a = cfl(&["solve", &cnf, "--seed", "8"]);
    let b = cfl(&["solve", &cnf, "--seed", "8", "--parallel"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn case_study_small_run() {
    let dir = TempDir::new().unwrap();
    let ccdf = path(&dir, "ccdf.csv");
    let map = path(&dir, "map.txt");
    let out = cfl(&[
        "case-study",
        "--n",
        "30",
        "--side",
        "80",
        "--trials",
        "20",
        "--seed",
        "3",
        "--ccdf",
        &ccdf,
        "--map",
        &map,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 21);
    assert!(fs::read_to_string(&ccdf)
        .unwrap()
        .starts_with("threshold,p_exceed\n0,"));
    assert_eq!(fs::read_to_string(&map).unwrap().lines().count(), 30);
}

#[test]
fn missing_seed_is_drawn_and_printed() {
    let out = cfl(&["generate", "ksat", "--n", "5", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("seed: "), "{err}");
}

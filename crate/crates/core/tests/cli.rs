use std::path::PathBuf;
use std::process::{Command, Output};

fn betw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betw"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("spawn betw")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("betw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn check_reports_sat_and_unsat() {
    let g = write_temp("path.g", "vertices a b c\nedge a b\nedge b c\n");
    let g = g.to_str().unwrap();
    let ok = betw(&["check", "--graph", g, "a|b|c"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "SAT a|b|c\n");

    let no = betw(&["check", "--graph", g, "a|b|c", "a|b|a"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no), "SAT a|b|c\nUNSAT a|b|a\n");

    let nonstrict = betw(&["check", "--graph", g, "--nonstrict", "a|a|c"]);
    assert_eq!(nonstrict.status.code(), Some(0));
}

#[test]
fn malformed_inputs_exit_two() {
    let bad = write_temp("bad.g", "vertices a b\nedge a a b\n");
    let o = betw(&["check", "--graph", bad.to_str().unwrap(), "a|b|a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let directed = write_temp("directed.g", "vertices a b\narc a b\n");
    assert_eq!(betw(&["check", "--graph", directed.to_str().unwrap(), "a|b|a"]).status.code(), Some(2));

    assert_eq!(betw(&["valid", "--universe", "a,b", "a|z|b"]).status.code(), Some(2));
    assert_eq!(betw(&["valid", "--universe", "a,b", "a|b"]).status.code(), Some(2));
    assert_eq!(betw(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn valid_prints_verdict_or_countermodel() {
    let o = betw(&["valid", "--universe", "a,b,c", "a|b|c -> c|b|a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# a|b|c -> c|b|a\nVALID\n");

    let o = betw(&["valid", "--universe", "a,b,c", "a|b|c"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "# a|b|c\nCOUNTERMODEL\nvertices a b c\nedge a c\n");
}

#[test]
fn universe_limit_is_enforced() {
    let o = betw(&["valid", "--universe", "a..h", "a|b|c"]);
    assert_eq!(o.status.code(), Some(2));
    let o = betw(&["valid", "--universe", "a..f", "--max-universe", "6", "a|b|c -> c|b|a"]);
    assert_eq!(o.status.code(), Some(0));
    let o = betw(&["valid", "--universe", "a..h", "--max-universe", "8", "a|b|c"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn entails_uses_last_formula_as_goal() {
    let o = betw(&["entails", "--universe", "a,b,c", "a|b|c", "c|b|a"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("VALID\n"));

    let o = betw(&["entails", "--universe", "a,b,c", "c|b|a", "a|c|b"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("COUNTERMODEL"));
}

#[test]
fn prove_check_accepts_the_corpus() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("proofs");
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let o = betw(&["prove-check", path.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}", path.display());
            assert!(stdout(&o).starts_with("ACCEPTED"));
            count += 1;
        }
    }
    assert!(count >= 10);
}

#[test]
fn prove_check_rejections() {
    let o = betw(&["prove-check", "proofs/rejected/bad_reference.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("REJECTED line 3: BadReference"));

    let o = betw(&["prove-check", "proofs/rejected/mislabeled_tautology.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("REJECTED line 2: NotATautology"));

    let o = betw(&["prove-check", "proofs/rejected/truncated.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fuzz_exit_codes() {
    let o = betw(&["fuzz", "--universe", "a,b,c", "--iters", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("violations: 0"));

    let o = betw(&["fuzz", "--universe", "a,b,c", "--iters", "300", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));

    let o = betw(&["fuzz", "--universe", "a,b,c,d", "--mutant", "unguarded-transitivity"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stdout(&o).contains("violations: 0"));
}

#[test]
fn sweep_passes_on_two_vertices() {
    let o = betw(&["axioms", "sweep", "--universe", "a,b"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 9);
}

#[test]
fn json_output_is_parseable() {
    let o = betw(&["--json", "valid", "--universe", "a,b,c", "a|b|c"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "valid");
    assert_eq!(v["results"][0]["verdict"], "countermodel");

    let o = betw(&["--json", "prove-check", "proofs/rejected/bad_reference.json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "rejected");
    assert_eq!(v["line"], 3);
}

#[test]
fn universe_option_reorders_graph_vertices() {
    let g = write_temp("order.g", "vertices c b a\nedge a b\nedge b c\n");
    let g = g.to_str().unwrap();
    let o = betw(&["check", "--graph", g, "--universe", "a,b,c", "a|b|c"]);
    assert_eq!(o.status.code(), Some(0));
    let o = betw(&["check", "--graph", g, "--universe", "a,b,d", "a|b|c"]);
    assert_eq!(o.status.code(), Some(2));
}

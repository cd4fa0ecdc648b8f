use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kontsevich_core::{GraphSeries, PoissonStructure};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kontsevich")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_poisson(dir: &TempDir, name: &str, p: &PoissonStructure) -> String {
    let path = dir.path().join(name);
    fs::write(&path, serde_json::to_string(&p.to_json()).unwrap()).unwrap();
    path_str(&path).to_string()
}

#[test]
fn expand_writes_the_star_series() {
    let out = run(&["expand"]);
    assert!(out.status.success());
    let series = GraphSeries::parse_text(&stdout(&out), Some(2)).unwrap();
    assert_eq!(series.term_counts(3), vec![1, 1, 4, 13]);
    assert_eq!(series, kontsevich_core::star_oh3());

    let wedge = run(&["expand", "--grade", "1"]);
    let lines: Vec<String> = stdout(&wedge).lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect();
    assert_eq!(lines, vec!["1 * 2 1 ; 0 1"]);

    let json = run(&["expand", "--format", "json"]);
    let parsed: kontsevich_core::series::SeriesJson = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(GraphSeries::from_json(&parsed).unwrap(), series);
}

#[test]
fn expand_to_file_and_bad_grade() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("star.txt");
    assert!(run(&["expand", "--output", path_str(&file)]).status.success());
    assert_eq!(fs::read_to_string(&file).unwrap(), stdout(&run(&["expand"])));
    assert_eq!(run(&["expand", "--grade", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn assoc_default_counts() {
    let out = run(&["assoc"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("raw: 6,38,218\n"), "{text}");
    assert!(text.contains("reduced: 0,0,3,39\n"));
    assert!(text.contains("reduced grade 3: 39\n"));
    assert!(text.contains("grade 3 order (1,1,1): 8\n"));
    assert!(text.contains("grade 3 order (2,1,1): 9\n"));
}

#[test]
fn assoc_vanishes_for_so3_file() {
    let dir = TempDir::new().unwrap();
    let file = write_poisson(&dir, "so3.json", &PoissonStructure::so3());
    for seed in ["1", "2"] {
        let out = run(&["assoc", "--poisson", &file, "--dim", "3", "--seed", seed]);
        let text = stdout(&out);
        assert_eq!(out.status.code(), Some(0), "{text}");
        for k in 0..=3 {
            assert!(text.contains(&format!("ħ^{k}: 0\n")), "{text}");
        }
        assert!(text.contains("associator: PASS"));
    }
    let json = run(&["assoc", "--poisson", &file, "--format", "json", "--seed", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["raw_counts"], serde_json::json!([2, 6, 38, 218]));
    assert_eq!(v["evaluation"]["passed"], serde_json::json!(true));
    assert_eq!(v["evaluation"]["coefficients"], serde_json::json!(["0", "0", "0", "0"]));
}

#[test]
fn assoc_flags_the_witness() {
    let dir = TempDir::new().unwrap();
    let file = write_poisson(&dir, "witness.json", &PoissonStructure::non_poisson_witness());
    let out = run(&["assoc", "--poisson", &file, "--order", "2"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(1), "{text}");
    assert!(text.contains("Jacobi fails"));
    assert!(text.contains("ħ^1: 0\n"));
    assert!(text.lines().any(|l| l.starts_with("ħ^2: ") && l.ends_with("NONZERO")));
    assert!(text.contains("ħ^2 = 2/3 Jac: yes"));
    assert!(text.contains("associator: FAIL (nonzero at ħ^2)"));
}

#[test]
fn assoc_argument_and_config_errors() {
    let dir = TempDir::new().unwrap();
    let file = write_poisson(&dir, "so3.json", &PoissonStructure::so3());
    let wrong_dim = run(&["assoc", "--poisson", &file, "--dim", "2"]);
    assert_eq!(wrong_dim.status.code(), Some(2));
    assert!(stderr(&wrong_dim).contains("--dim 2"));
    let explicit = run(&["assoc", "--preset", "so3", "--arg", "u1", "--arg", "u2", "--arg", "u3^2"]);
    assert_eq!(explicit.status.code(), Some(0));
    assert!(stdout(&explicit).contains("h = u3^2\n"));
    assert_eq!(run(&["assoc", "--preset", "so3", "--arg", "u1"]).status.code(), Some(2));
    assert_eq!(run(&["assoc", "--preset", "so3", "--arg", "u1", "--arg", "u2", "--arg", "u9"]).status.code(), Some(2));
    let broken = dir.path().join("broken.json");
    fs::write(&broken, r#"{"dim": 3, "entries": [{"i": 2, "j": 1, "poly": "u3"}]}"#).unwrap();
    assert_eq!(run(&["assoc", "--poisson", path_str(&broken)]).status.code(), Some(2));
    assert_eq!(run(&["assoc", "--poisson", "/nonexistent/p.json"]).status.code(), Some(2));
    assert_eq!(run(&["assoc", "--order", "4"]).status.code(), Some(2));
}

#[test]
fn assoc_is_deterministic_per_seed() {
    let a = run(&["assoc", "--preset", "witness", "--seed", "11"]);
    let b = run(&["assoc", "--preset", "witness", "--seed", "11"]);
    let c = run(&["assoc", "--preset", "witness", "--seed", "12"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_claim_passes_and_solves() {
    let out = run(&["verify-claim", "--solve"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("eliminated: 3,3,3,8,9,4,9 = 39 of 39 terms"));
    assert!(text.contains("order (1,1,1): A = 1/6 I_f - 1/6 I_h  [8 of 8 terms]  PASS"));
    assert_eq!(text.matches("  matches").count(), 7);
    assert!(text.ends_with("claim: PASS\n"));
    let json = run(&["verify-claim", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["eliminated_counts"], serde_json::json!([3, 3, 3, 8, 9, 4, 9]));
    assert_eq!(v["passed"], serde_json::json!(true));
}

#[test]
fn verify_claim_rejects_a_tampered_series() {
    let dir = TempDir::new().unwrap();
    let assoc_file = dir.path().join("assoc.txt");
    assert!(run(&["assoc", "--output", path_str(&assoc_file)]).status.success());
    let text = fs::read_to_string(&assoc_file).unwrap();
    assert!(run(&["verify-claim", "--series", path_str(&assoc_file)]).status.success());

    // flip the sign of the first grade-3 term
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let header = lines.iter().position(|l| l.starts_with("# grade 3")).unwrap();
    let victim = &mut lines[header + 1];
    let flipped = match victim.strip_prefix('-') {
        Some(rest) => rest.to_string(),
        None => format!("-{victim}"),
    };
    *victim = flipped;
    let graph = GraphSeries::parse_text(&lines[header + 1], Some(3)).unwrap();
    let order = graph.terms().next().unwrap().graph.sink_in_degrees();
    let tampered = dir.path().join("tampered.txt");
    fs::write(&tampered, lines.join("\n")).unwrap();

    let out = run(&["verify-claim", "--series", path_str(&tampered)]);
    let report = stdout(&out);
    assert_eq!(out.status.code(), Some(1), "{report}");
    assert!(report.contains("claim: FAIL"));
    let label = format!("({},{},{})", order[0], order[1], order[2]);
    assert!(report.contains(&format!("failing orders: {label}\n")), "{report}");
    assert_eq!(run(&["verify-claim", "--series", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn identity_gauge_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let star = dir.path().join("star.txt");
    let gauged = dir.path().join("gauged.txt");
    assert!(run(&["expand", "--output", path_str(&star)]).status.success());
    let out = run(&["gauge", "--preset", "identity", "--star", path_str(&star), "--output", path_str(&gauged)]);
    assert!(out.status.success());
    assert_eq!(fs::read(&star).unwrap(), fs::read(&gauged).unwrap());
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("gauge: identity"));
}

#[test]
fn loop_removal_gauge_clears_grade_two_loops() {
    let out = run(&["gauge", "--preset", "loop-removal"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("loop graphs at ħ^2: 0"));
    let series = GraphSeries::parse_text(&stdout(&out), Some(2)).unwrap();
    assert!(series.grade(2).iter().all(|t| !kontsevich_core::classify(&t.graph).has_loop));
    assert_eq!(series.grade(2).len(), 3);
}

#[test]
fn random_gauge_then_assoc_recheck_passes() {
    let dir = TempDir::new().unwrap();
    let gauged = dir.path().join("gauged.txt");
    let out = run(&["gauge", "--preset", "random", "--seed", "4", "--output", path_str(&gauged)]);
    assert!(out.status.success());
    let check = run(&["assoc", "--star", path_str(&gauged), "--preset", "so3", "--seed", "9"]);
    assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));
    assert!(stdout(&check).contains("associator: PASS"));
}

#[test]
fn gauge_coefficient_files() {
    let dir = TempDir::new().unwrap();
    let coeffs = dir.path().join("t.json");
    fs::write(&coeffs, r#"{"I0": "1/12"}"#).unwrap();
    let from_file = run(&["gauge", "--coefficients", path_str(&coeffs)]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, run(&["gauge", "--preset", "loop-removal"]).stdout);
    fs::write(&coeffs, r#"{"I0": "one"}"#).unwrap();
    assert_eq!(run(&["gauge", "--coefficients", path_str(&coeffs)]).status.code(), Some(2));
    assert_eq!(run(&["gauge"]).status.code(), Some(2));
    let json = run(&["gauge", "--preset", "identity", "--format", "json"]);
    let parsed: kontsevich_core::series::SeriesJson = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(GraphSeries::from_json(&parsed).unwrap(), kontsevich_core::star_oh3());
}

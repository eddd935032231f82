use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_telescope"))
}

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/problems").join(format!("{name}.tel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("telescope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn values(csv: &str) -> Vec<String> {
    csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().to_string()).collect()
}

#[test]
fn verify_exit_codes() {
    let path = problem("franel_alt_quadratic");
    let ok = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("symbolic: pass"));

    let src = std::fs::read_to_string(&path).unwrap();
    let bad = src.replace("R1 = (k-l)^2", "R1 = 2*(k-l)^2");
    assert_ne!(bad, src);
    let tmp = scratch("perturbed.tel");
    std::fs::write(&tmp, bad).unwrap();
    let o = run(&["verify", tmp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));

    let missing = run(&["verify", "/nonexistent/file.tel"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn solve_found_and_not_found() {
    let path = problem("franel_alt_quadratic");
    let args = |deg: &'static str| {
        vec![
            "solve".to_string(),
            path.to_str().unwrap().to_string(),
            "--d1".into(),
            "(9*k+5)*(l+1)*(-2*l+k-1)".into(),
            "--d2".into(),
            "k*(9*k+5)".into(),
            "--deg".into(),
            deg.into(),
        ]
    };
    let found = bin().args(args("3")).output().unwrap();
    assert_eq!(found.status.code(), Some(0));
    let text = stdout(&found);
    assert!(text.contains("R1 =") && text.contains("R2 ="), "{text}");
    // the printed spec is itself verifiable
    let tmp = scratch("solved.tel");
    std::fs::write(&tmp, &text).unwrap();
    assert_eq!(run(&["verify", tmp.to_str().unwrap()]).status.code(), Some(0));

    let none = bin().args(args("0")).output().unwrap();
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn check_jsonl_and_unknown_case() {
    let o = run(&["--format", "jsonl", "check", "T1.2-p", "--max-p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let rec: serde_json::Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert_eq!(rec["case"], "T1.2-p");
    assert_eq!(rec["status"], "pass");
    assert_eq!(rec["lhs_mod"], rec["rhs_mod"]);
    for key in ["instance", "modulus"] {
        assert!(rec.get(key).is_some());
    }
    assert_eq!(run(&["check", "NOPE"]).status.code(), Some(2));
}

#[test]
fn seq_prints_known_values() {
    for (id, want) in [("franel", ["1", "2", "10", "56"]), ("domb", ["1", "4", "28", "256"]), ("catalan", ["1", "1", "2", "5"])] {
        let o = run(&["seq", id, "3"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(values(&stdout(&o)), want, "{id}");
    }
}

fn bench_counts(text: &str) -> (u64, u64) {
    let count = |tag: &str| {
        let line = text.lines().find(|l| l.starts_with(tag)).unwrap();
        line.split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    (count("naive:"), count("reduced:"))
}

#[test]
fn bench_counts_and_agreement() {
    let o = run(&["bench", problem("franel_alt_quadratic").to_str().unwrap(), "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (naive, reduced) = bench_counts(&text);
    assert_eq!(naive, 5050);
    assert!(reduced <= 400);
    assert!(text.contains("values equal"));

    let o = run(&["bench", problem("domb_16").to_str().unwrap(), "500"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, reduced) = bench_counts(&stdout(&o));
    assert!(reduced <= 2000);

    assert_eq!(run(&["bench", problem("domb_16").to_str().unwrap(), "0"]).status.code(), Some(2));
}

#[test]
fn cache_file_skips_recomputation() {
    let cache = scratch("cache.csv");
    let _ = std::fs::remove_file(&cache);
    let args = ["--cache", cache.to_str().unwrap(), "-v", "seq", "apery", "15"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(cache.exists());
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second));
    let err = String::from_utf8_lossy(&second.stderr);
    assert!(err.contains("computed 0"), "{err}");
}

#[test]
fn jobs_do_not_change_output() {
    let one = run(&["--jobs", "1", "--format", "jsonl", "check", "T1.1-p", "T1.7i-p", "--max-p", "23"]);
    let two = run(&["--jobs", "3", "--format", "jsonl", "check", "T1.1-p", "T1.7i-p", "--max-p", "23"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&two));
}

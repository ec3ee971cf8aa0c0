use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conic-zariski"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn find_pair(n: usize, dir: &Path) -> std::path::PathBuf {
    let path = dir.join(format!("pair{n}.txt"));
    let o = run(&["find-pair", "--n", &n.to_string(), "--output", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

#[test]
fn find_pair_writes_a_loadable_file() {
    let dir = tempfile::tempdir().unwrap();
    for n in [4, 6] {
        let path = find_pair(n, dir.path());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("conic-zariski arrangement 1\n"));
        assert!(text.contains(&format!("\nperiod {n}\n")));
        assert!(text.contains("\npairing T1 T2 T3 T4\n"));
        let o = run(&["trace", "--input", path.to_str().unwrap(), "--format", "structured"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let period = v["entries"].as_array().unwrap().iter().find(|e| e["name"] == "period").unwrap();
        assert_eq!(period["value"], n);
    }
}

#[test]
fn find_pair_without_output_prints_the_file() {
    let o = run(&["find-pair", "--n", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.starts_with("conic-zariski arrangement 1\n"));
    assert!(!s.contains("pairing"));
}

#[test]
fn bracket_without_sign_change_fails() {
    let o = run(&["find-pair", "--n", "4", "--bracket", "1.6,1.7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("same sign at both ends"), "{}", stderr(&o));
}

#[test]
fn missing_period_is_a_usage_error() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["find-pair", "--n", "4", "--bracket", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_corruption_fails_closure_first() {
    let dir = tempfile::tempdir().unwrap();
    let path = find_pair(4, dir.path());
    let o = run(&["verify", "--input", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}\n{}", stdout(&o), stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("10 of 10 checks passed"), "{s}");
    assert!(s.contains("precision 128 bits"));

    let text = std::fs::read_to_string(&path).unwrap();
    let corrupted: String = text
        .lines()
        .map(|l| {
            if l.starts_with("conic C1 ") {
                let mut w: Vec<&str> = l.split(' ').collect();
                *w.last_mut().unwrap() = "-2.1";
                w.join(" ")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, corrupted).unwrap();
    let o = run(&["verify", "--input", bad.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks[0]["name"], "closure");
    assert_eq!(checks[0]["passed"], false);
}

#[test]
fn malformed_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "conic-zariski arrangement 1\nconic C1 1 2\n").unwrap();
    let o = run(&["covers", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn render_is_deterministic_and_warns_about_complex_elements() {
    let dir = tempfile::tempdir().unwrap();
    let path = find_pair(4, dir.path());
    let mut svgs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("r{k}.svg"));
        let o = run(&[
            "render",
            "--input",
            path.to_str().unwrap(),
            "--what",
            "arrangement",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stderr(&o).contains("omitted line T1 is not real"));
        svgs.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(svgs[0], svgs[1]);
    assert!(svgs[0].contains(r#"version="1.1""#));
    assert!(svgs[0].contains(r#"<g id="C1""#) && svgs[0].contains(r#"<g id="C2""#));
    assert_eq!(svgs[0].matches("<line ").count(), 4);
}

#[test]
fn unwritable_output_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("x.svg");
    let o = run(&["render", "--n", "4", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("I/O failure"));
}

#[test]
fn covers_and_splitting_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = find_pair(4, dir.path());
    let o = run(&["covers", "--input", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert_eq!(s.matches(" connected ").count(), 8);
    assert_eq!(s.matches("~ transverse").count(), 2);

    let out = dir.path().join("split.json");
    let o = run(&["splitting", "--input", path.to_str().unwrap(), "--format", "structured", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let verdicts: Vec<_> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["name"].as_str().unwrap().starts_with("certificate"))
        .map(|e| e["value"]["verdict"].clone())
        .collect();
    assert_eq!(verdicts.len(), 8);
    assert!(verdicts.iter().all(|v| v == "ZariskiPair"));
}

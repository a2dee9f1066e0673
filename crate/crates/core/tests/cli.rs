use std::path::PathBuf;
use std::process::Command;

use quasiset::cli::run;
use quasiset::model::Model;
use tempfile::TempDir;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qset(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["qset"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("models")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(qset(&["check", &model("valid_eprb.qm")]).code, 0);

    let dup = write(&dir, "dup.qm", "species e\n# again\nspecies e\n");
    let r = qset(&["check", &dup]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("dup.qm:3:"), "{}", r.stderr);
    assert!(r.stderr.contains("duplicate species"));

    let r = qset(&["check", &dir.path().join("missing.qm").to_string_lossy()]);
    assert_eq!(r.code, 2);

    let bad = write(&dir, "bad.qm", "species e\nqset q = { \n");
    assert_eq!(qset(&["check", &bad]).code, 2);

    let forward = write(&dir, "fwd.qm", "qset q = { a }\nmacro a A\n");
    let r = qset(&["check", &forward]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains(":1:"));
}

/// Carrier and pair counts for an EPRB space with `k` sample points.
fn counts(k: usize) -> (usize, usize) {
    let n = k + 2;
    (n * n, n * n * n)
}

#[test]
fn audit_valid_space() {
    let text = std::fs::read_to_string(model("valid_eprb.qm")).unwrap();
    let m = Model::parse(&text).unwrap();
    let k = m.eprb_space("S").unwrap().space.region().sample_points().len();
    let (pairs, triples) = counts(k);
    let r = qset(&["audit", &model("valid_eprb.qm"), "--space", "S"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains(&format!("6/6 axioms verified, {pairs} pairs, {triples} triples")));
}

#[test]
fn audit_planted_violation() {
    let r = qset(&["audit", &model("a2_violation.qm"), "--space", "S", "--format", "json-lines"]);
    assert_eq!(r.code, 1);
    let records: Vec<serde_json::Value> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let violations: Vec<_> = records.iter().filter(|r| r["record"] == "violation").collect();
    assert!(!violations.is_empty());
    assert!(violations.iter().all(|v| v["axiom"] == 6));
    // d(v0, v1) = 5.8 against 2c = 4 through either atom.
    let v = violations[0];
    let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((values[0] - 5.8).abs() < 1e-9);
    assert_eq!(values[1] + values[2], 4.0);
    let summary = records.last().unwrap();
    assert_eq!(summary["record"], "summary");
    assert_eq!(summary["passed"], false);
    assert_eq!(summary["axioms_verified"], 5);
}

#[test]
fn audit_tolerance_and_unknown_space() {
    let path = model("borderline.qm");
    assert_eq!(qset(&["audit", &path, "--space", "D"]).code, 0);
    assert_eq!(qset(&["audit", &path, "--space", "D", "--epsilon", "1e-3"]).code, 0);
    assert_eq!(qset(&["audit", &path, "--space", "D", "--epsilon", "1e-12"]).code, 1);
    let r = qset(&["audit", &path, "--space", "nope"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("unknown space"));
    assert_eq!(qset(&["audit", &path, "--space", "D", "--epsilon", "-1"]).code, 2);
}

#[test]
fn audit_output_is_byte_identical_across_runs() {
    let args = ["audit", &model("a2_violation.qm"), "--space", "S", "--format", "json-lines"];
    let a = qset(&args).stdout;
    assert_eq!(a, qset(&args).stdout);
    assert!(!a.is_empty());
}

#[test]
fn epsilon_from_environment() {
    let bin = env!("CARGO_BIN_EXE_qset");
    let run_with = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(bin);
        cmd.args(["audit", &model("borderline.qm"), "--space", "D"]).args(extra);
        match env {
            Some(v) => cmd.env("QSET_EPSILON", v),
            None => cmd.env_remove("QSET_EPSILON"),
        };
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(run_with(None, &[]), 0);
    assert_eq!(run_with(Some("1e-12"), &[]), 1);
    assert_eq!(run_with(Some("1e-12"), &["--epsilon", "1e-9"]), 0);
}

#[test]
fn eprb_two_balls_with_figure() {
    let dir = TempDir::new().unwrap();
    let fig = dir.path().join("fig.csv");
    let r = qset(&[
        "eprb", "--balls", "0,0,1;4,0,1", "--c", "3.5", "--dim", "2", "--samples", "25", "--seed", "4",
        "--emit-figure", &fig.to_string_lossy(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("# audit: 6/6 axioms verified"));

    let text = std::fs::read_to_string(&fig).unwrap();
    let mut lines = text.lines().peekable();
    let mut header = Vec::new();
    while let Some(l) = lines.peek().filter(|l| l.starts_with('#')) {
        header.push(l.to_string());
        lines.next();
    }
    assert!(header.iter().any(|h| h == "# c=3.5"));
    assert!(header.iter().any(|h| h == "# sup_diameter=6"));
    assert_eq!(lines.next(), Some("x0,x1,ball"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    for row in rows {
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        let center = if f[2] == 0.0 { [0.0, 0.0] } else { [4.0, 0.0] };
        assert!(((f[0] - center[0]).powi(2) + (f[1] - center[1]).powi(2)).sqrt() < 1.0);
    }

    // The printed model loads back and describes the same space.
    let path = write(&dir, "out.qm", &r.stdout);
    let back = qset(&["audit", &path, "--space", "S"]);
    assert_eq!(back.code, 0);
    let (pairs, triples) = counts(25);
    assert!(back.stdout.contains(&format!("6/6 axioms verified, {pairs} pairs, {triples} triples")));
}

#[test]
fn eprb_inadmissible_c() {
    let r = qset(&["eprb", "--balls", "0,0,1", "--balls", "4,0,1", "--c", "2.5", "--dim", "2"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("minimal c = D/2 = 3"), "{}", r.stderr);
}

#[test]
fn eprb_single_ball_boundary() {
    let r = qset(&["eprb", "--dim", "1", "--balls", "0,1", "--c", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("# sup-diameter 2, 2c = 2"));
}

#[test]
fn eprb_malformed_balls() {
    assert_eq!(qset(&["eprb", "--dim", "2", "--balls", "0,1", "--c", "1"]).code, 2);
    assert_eq!(qset(&["eprb", "--dim", "1", "--balls", "0,-1", "--c", "1"]).code, 2);
    assert_eq!(qset(&["eprb", "--dim", "1", "--balls", "0,1", "--c", "0"]).code, 1);
}

#[test]
fn wff_verdicts() {
    let r = qset(&["wff", "--expr", "x = y", "--sorts", "x:MICRO,y:MICRO"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("micro-identity"));
    let r = qset(&["wff", "--expr", "x ~ y", "--sorts", "x:MICRO,y:MICRO"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "WELL-FORMED"));
    assert_eq!(qset(&["wff", "--expr", "Q(z) & (t in z)", "--sorts", "z:QSET,t:MICRO"]).code, 0);
    assert_eq!(qset(&["wff", "--expr", "x ~", "--sorts", "x:MICRO"]).code, 1);
    assert_eq!(qset(&["wff", "--expr", "x ~ y", "--sorts", "x:ATOM"]).code, 2);
    assert_eq!(qset(&["wff"]).code, 2);
}

#[test]
fn wff_file() {
    let r = qset(&["wff", "--file", &model("wff_corpus.txt"), "--sorts", "x:MICRO,y:MICRO,a:MACRO,z:QSET"]);
    assert_eq!(r.code, 1);
    let verdicts: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with("line ")).collect();
    assert_eq!(verdicts.len(), 6);
    assert!(verdicts[..5].iter().all(|l| l.ends_with("WELL-FORMED")));
    assert!(verdicts[5].contains("micro-identity"));
}

fn correlation_of(a: &str, b: &str) -> f64 {
    let r = qset(&["correlate", "--axis-a", a, "--axis-b", b]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let line = r.stdout.lines().find(|l| l.starts_with("E(a,b) = ")).unwrap();
    line["E(a,b) = ".len()..].parse().unwrap()
}

#[test]
fn correlate_examples() {
    assert_eq!(correlation_of("0,0,1", "0,0,1"), -1.0);
    assert_eq!(correlation_of("0,0,1", "1,0,0"), 0.0);
    // 60 degrees from z.
    assert!((correlation_of("0,0,1", "0.8660254037844386,0,0.5") + 0.5).abs() < 1e-12);
    // 30 degrees from z: -cos 30°.
    let e = correlation_of("0,0,1", "0.5,0,0.8660254037844386");
    assert!((e + 3f64.sqrt() / 2.0).abs() < 1e-11);
    // Unnormalized input is normalized.
    assert_eq!(correlation_of("0,0,2", "0,0,-5"), 1.0);
}

#[test]
fn correlate_table_and_samples() {
    let r = qset(&["correlate", "--axis-a", "0,0,1", "--axis-b", "0,0,1", "--samples", "1000", "--seed", "5"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("++,0\n+-,0.5\n-+,0.5\n--,0\n"));
    assert!(r.stdout.contains("++=0 "));
    assert!(r.stdout.contains(" --=0 total=1000"));
    assert_eq!(r.stdout, qset(&["correlate", "--axis-a", "0,0,1", "--axis-b", "0,0,1", "--samples", "1000", "--seed", "5"]).stdout);
    assert_eq!(qset(&["correlate", "--axis-a", "0,0", "--axis-b", "0,0,1"]).code, 2);
    assert_eq!(qset(&["correlate", "--axis-a", "0,0,0", "--axis-b", "0,0,1"]).code, 2);
}

#[test]
fn help_is_not_an_error() {
    let r = qset(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("audit"));
    assert_eq!(qset(&["frobnicate"]).code, 2);
}

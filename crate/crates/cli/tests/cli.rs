//! End-to-end runs of the `bmat` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bmat_cli::report::BoundReportDocument;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, contents).unwrap();
        p
    }

    fn generated(&self, name: &str, args: &[&str]) -> PathBuf {
        let p = self.dir.path().join(name);
        let out = bmat(&[&["gen"], args, &["--output", p.to_str().unwrap()]].concat());
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        p
    }
}

fn bmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmat"))
        .args(args)
        .env_remove("BMAT_SEED")
        .output()
        .unwrap()
}

fn bmat_path(args: &[&str], path: &Path, rest: &[&str]) -> Output {
    bmat(&[args, &[path.to_str().unwrap()], rest].concat())
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn report(o: &Output) -> BoundReportDocument {
    BoundReportDocument::from_json(&stdout(o)).unwrap()
}

const IDENTITY2: &str = "2\n1 0\n0 1\n";

#[test]
fn check_classifies() {
    let f = Fixture::new();
    let id = f.file("id.txt", IDENTITY2);
    let out = bmat_path(&["check"], &id, &[]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("B-matrix: yes"));

    let ex1 = f.generated("ex1.txt", &["example1", "--k", "1"]);
    assert_eq!(code(&bmat_path(&["check"], &ex1, &[])), 0);

    let bad = f.file("bad.txt", "2\n1 2\n0 1\n");
    let out = bmat_path(&["check"], &bad, &[]);
    assert_eq!(code(&out), 2);
    assert!(
        stdout(&out).contains("B-matrix: no (row 1:"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn check_reports_parse_line() {
    let f = Fixture::new();
    let p = f.file("p.txt", "# header\n2\n1 0\n0 oops\n");
    let out = bmat_path(&["check"], &p, &[]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn check_accepts_csv() {
    let f = Fixture::new();
    let p = f.file("m.csv", "2,0.5\n0.5,2\n");
    let out = bmat_path(&["check"], &p, &[]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn bounds_on_examples() {
    let f = Fixture::new();
    let ex1 = f.generated("ex1.txt", &["example1", "--k", "1"]);
    let r = report(&bmat_path(&["bounds"], &ex1, &["--format", "json"]));
    assert!((r.bound_gep - 60.0).abs() < 1e-9);
    assert!((r.bound_li - 14.3775).abs() < 5e-4);
    assert!((r.bound_new - 13.9878).abs() < 5e-4);
    assert!(r.oracle.is_none());

    let ex2 = f.generated("ex2.txt", &["example2", "--a", "4/5", "--k", "8/9"]);
    let r = report(&bmat_path(&["bounds"], &ex2, &["--format", "json"]));
    for (got, want) in [
        (r.bound_gep, 360.0),
        (r.bound_li, 425.0),
        (r.bound_new, 306.0),
    ] {
        assert!((got - want / 81.0).abs() <= 1e-12 * want / 81.0);
    }

    let id = f.file("id.txt", IDENTITY2);
    let r = report(&bmat_path(&["bounds"], &id, &["--format", "json"]));
    assert_eq!((r.bound_gep, r.bound_li, r.bound_new), (1.0, 2.0, 2.0));
}

#[test]
fn bounds_errors() {
    let f = Fixture::new();
    let bad = f.file("bad.txt", "2\n1 2\n0 1\n");
    assert_eq!(code(&bmat_path(&["bounds"], &bad, &[])), 2);
    let one = f.file("one.txt", "1\n3\n");
    assert_eq!(code(&bmat_path(&["bounds"], &one, &[])), 65);
    assert_eq!(code(&bmat(&["bounds", "--format", "yaml", "x"])), 64);
}

#[test]
fn json_report_round_trips_through_the_binary() {
    let f = Fixture::new();
    let ex1 = f.generated("ex1.txt", &["example1", "--k", "3"]);
    for args in [&["bounds"][..], &["verify"][..]] {
        let out = bmat_path(args, &ex1, &["--format", "json"]);
        assert_eq!(code(&out), 0);
        let text = stdout(&out);
        assert_eq!(
            BoundReportDocument::from_json(&text).unwrap().to_json(),
            text
        );
    }
}

#[test]
fn formats_are_stable() {
    let f = Fixture::new();
    let ex2 = f.generated("ex2.txt", &["example2"]);
    let text = stdout(&bmat_path(&["bounds"], &ex2, &[]));
    assert!(text.contains("bound_new: 3.77778\n"), "{text}");
    let csv = stdout(&bmat_path(&["bounds"], &ex2, &["--format", "csv"]));
    assert!(csv.starts_with("field,index,value\n"));
    assert!(csv.lines().all(|l| l.split(',').count() == 3));
}

#[test]
fn verify_identity_vertices() {
    let f = Fixture::new();
    let id = f.file("id.txt", IDENTITY2);
    let out = bmat_path(&["verify"], &id, &["--grid-steps", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r.oracle.as_ref().unwrap().samples, 4);
    assert_eq!(r.slacks().unwrap().map(|(_, s)| s), [0.0, 1.0, 1.0]);
}

#[test]
fn verify_examples() {
    let f = Fixture::new();
    let ex2 = f.generated("ex2.txt", &["example2"]);
    let out = bmat_path(
        &["verify"],
        &ex2,
        &["--grid-steps", "32", "--format", "json"],
    );
    assert_eq!(code(&out), 0);
    assert!(report(&out)
        .slacks()
        .unwrap()
        .iter()
        .all(|&(_, s)| s >= 0.0));

    let ex1 = f.generated("ex1.txt", &["example1"]);
    let out = bmat_path(&["verify"], &ex1, &["--grid-steps", "8"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("slack_new:"));
}

#[test]
fn verify_seed_from_environment() {
    let f = Fixture::new();
    let ex1 = f.generated("ex1.txt", &["example1"]);
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_bmat"));
        c.args([
            "verify",
            ex1.to_str().unwrap(),
            "--grid-steps",
            "0",
            "--no-vertices",
        ])
        .args(["--random-samples", "20", "--format", "json"])
        .env_remove("BMAT_SEED");
        if let Some(s) = seed {
            c.env("BMAT_SEED", s);
        }
        let out = c.output().unwrap();
        assert_eq!(code(&out), 0);
        report(&out).oracle.unwrap()
    };
    assert_eq!(run(Some("7")), run(Some("7")));
    assert_ne!(run(Some("7")).argmax_d, run(None).argmax_d);
    let flag = report(&bmat_path(
        &["verify"],
        &ex1,
        &[
            "--grid-steps",
            "0",
            "--no-vertices",
            "--random-samples",
            "20",
            "--seed",
            "7",
            "--format",
            "json",
        ],
    ));
    assert_eq!(flag.oracle.unwrap(), run(Some("7")));
}

#[test]
fn lcp_solutions() {
    let f = Fixture::new();
    let id = f.file("id.txt", IDENTITY2);
    let q = f.file("q.txt", "-1 -2\n");
    let out = bmat_path(&["lcp"], &id, &[q.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("x*: 1 2\n"));

    let ex2 = f.generated("ex2.txt", &["example2"]);
    let q = f.file("q2.txt", "-1 -1\n");
    let out = bmat_path(&["lcp"], &ex2, &[q.to_str().unwrap()]);
    assert!(
        stdout(&out).contains("x*: 1.6 0.888889\n"),
        "{}",
        stdout(&out)
    );

    let x = f.file("x.txt", "1.6 0.8888888888888888\n");
    let out = bmat_path(
        &["lcp"],
        &ex2,
        &[q.to_str().unwrap(), "--x", x.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("holds: true"));
    assert!(
        text.contains("lhs: 0\n") || text.contains("lhs: 2.22045e-16\n"),
        "{text}"
    );
}

#[test]
fn lcp_errors() {
    let f = Fixture::new();
    let id = f.file("id.txt", IDENTITY2);
    let q3 = f.file("q3.txt", "1 2 3\n");
    assert_eq!(code(&bmat_path(&["lcp"], &id, &[q3.to_str().unwrap()])), 65);
    let bad = f.file("bad.txt", "2\n1 2\n0 1\n");
    let q = f.file("q.txt", "-1 -1\n");
    assert_eq!(code(&bmat_path(&["lcp"], &bad, &[q.to_str().unwrap()])), 2);
}

#[test]
fn gen_random_is_deterministic() {
    let a = stdout(&bmat(&["gen", "random", "--n", "5", "--seed", "11"]));
    let b = stdout(&bmat(&["gen", "random", "--n", "5", "--seed", "11"]));
    let c = stdout(&bmat(&["gen", "random", "--n", "5", "--seed", "12"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let f = Fixture::new();
    let p = f.file("r.txt", &a);
    assert_eq!(code(&bmat_path(&["check"], &p, &[])), 0);
    assert_eq!(code(&bmat(&["gen", "random", "--n", "1"])), 65);
    assert_eq!(code(&bmat(&["gen", "example2", "--a", "0.5"])), 64);
}

#[test]
fn reproduce_exits_zero() {
    let out = bmat(&["reproduce"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("example1 k=1"));
    assert!(text.contains("example2 a=4/5 k=8/9"));
    assert!(!text.contains("MISMATCH"));
}

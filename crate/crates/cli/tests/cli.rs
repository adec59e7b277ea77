use std::fs;
use std::process::{Command, Output};

use predimlab::file::parse;
use predimlab::report::VerificationReport;

fn predimlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_predimlab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gadget_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.txt");
    let p = path.to_str().unwrap();
    let o = predimlab(&["gadget", "--n", "2", "--m", "1", "--r", "2", "--verify", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.set("x").unwrap(), &[0, 1, 2]);

    // delta(Y/X) = -1
    let o = predimlab(&["delta", p, "--set", "0,1,2,3", "--over", "x"]);
    assert!(stdout(&o).contains("= -1"), "{}", stdout(&o));
    let o = predimlab(&["closure", p, "--set", "x", "--kind", "cld"]);
    assert!(stdout(&o).contains("cl^d({0,1,2}) = {0,1,2,3}"), "{}", stdout(&o));
}

#[test]
fn membership_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.txt");
    // K4 with weights (1, 1) has delta -2
    let mut text = String::from("predimlab/1\nsignature 1 hypergraph\nrelation R 2 1\nvertices 0 1 2 3\n");
    for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        text += &format!("edge R {a} {b}\n");
    }
    fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let o = predimlab(&["check", p, "--class", "c0", "--report", "machine"]);
    assert_eq!(o.status.code(), Some(1));
    let rep = VerificationReport::from_machine(&stdout(&o)).unwrap();
    let case = rep.case("c0/membership").unwrap();
    assert!(case
        .witness
        .as_deref()
        .unwrap()
        .starts_with("delta-below set={0,1,2,3}"));

    let o = predimlab(&["check", p, "--class", "kn"]);
    assert_eq!(o.status.code(), Some(2), "kn without --ngon is a usage error");
    let o = predimlab(&["check", "/no/such/file", "--class", "c0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn independence_on_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    fs::write(
        &path,
        "predimlab/1\nsignature 2 hypergraph\nrelation R 2 1\nvertices 0 1 2 3 4\nedge R 0 1\nedge R 1 2\nedge R 3 4\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = predimlab(&["indep", p, "--a", "0", "--b", "", "--c", "3", "--characterize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = predimlab(&["indep", p, "--a", "3", "--b", "", "--c", "4"]);
    assert_eq!(o.status.code(), Some(1), "3 and 4 span an edge: {}", stdout(&o));
}

#[test]
fn build_writes_log_and_audits() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    let p = path.to_str().unwrap();
    let o = predimlab(&["build", "--class", "c0", "--budget", "40", "--seed", "7", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let log = fs::read_to_string(dir.path().join("m.txt.log.json")).unwrap();
    assert!(log.contains("\"steps\""));
    let o = predimlab(&["audit", p, "--tasks", "2", "--report", "json"]);
    let rep = VerificationReport::from_machine(&stdout(&o)).unwrap();
    assert!(rep.summary.total > 0);
}

#[test]
fn machine_reports_are_stable() {
    let a = predimlab(&["verify", "path-fact", "--report", "machine"]);
    let b = predimlab(&["verify", "path-fact", "--report", "machine"]);
    assert_eq!(a.stdout, b.stdout);
    let rep = VerificationReport::from_machine(&stdout(&a)).unwrap();
    assert_eq!(rep.suite, "path-fact");
}

#[test]
fn replay_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neg.json");
    let p = path.to_str().unwrap();
    let o = predimlab(&[
        "verify",
        "gadget",
        "--negative-control",
        "--report",
        "machine",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = predimlab(&["replay", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

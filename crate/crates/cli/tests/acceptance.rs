//! Acceptance criteria 1-11, run against the `predimlab` binary. Prints one
//! PASS/FAIL line per criterion and fails if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use predimlab::report::{Status, VerificationReport};
use predimlab::{replay_case, Caps, SUITES};

struct Run {
    code: i32,
    stdout: String,
    elapsed: Duration,
}

fn predimlab(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_predimlab"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        elapsed: start.elapsed(),
    }
}

fn verify(suite: &str) -> (Run, VerificationReport) {
    let run = predimlab(&["verify", suite, "--report", "machine"]);
    let rep = VerificationReport::from_machine(&run.stdout).unwrap_or_else(|e| panic!("{suite}: bad report: {e}"));
    (run, rep)
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(run: &Run, limit: Duration) -> Result<(), String> {
    ensure(
        run.elapsed < limit,
        format!("took {:.1?}, limit {limit:?}", run.elapsed),
    )
}

fn no_fail(run: &Run, rep: &VerificationReport) -> Result<(), String> {
    let bad: Vec<&str> = rep
        .cases
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.key.as_str())
        .collect();
    ensure(
        bad.is_empty() && run.code == 0,
        format!("exit {}, failing cases {bad:?}", run.code),
    )
}

fn all_pass(rep: &VerificationReport) -> Result<(), String> {
    let bad: Vec<String> = rep
        .cases
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| format!("{} {}", c.status.as_str(), c.key))
        .collect();
    ensure(bad.is_empty(), format!("not all PASS: {bad:?}"))
}

fn status_of(rep: &VerificationReport, key: &str) -> Result<Status, String> {
    rep.case(key).map(|c| c.status).ok_or(format!("missing case {key}"))
}

fn done(run: &Run, rep: &VerificationReport) -> Outcome {
    let s = &rep.summary;
    Ok(format!(
        "{} cases ({} pass, {} degenerate, {} partial) in {:.2?}",
        s.total, s.pass, s.degenerate, s.partial, run.elapsed
    ))
}

fn beatty() -> Outcome {
    let (run, rep) = verify("beatty");
    no_fail(&run, &rep)?;
    all_pass(&rep)?;
    let pairs: usize = (2..=40).map(|b| b - 1).sum();
    ensure(
        rep.summary.total == pairs,
        format!("{} cases, expected {pairs}", rep.summary.total),
    )?;
    within(&run, Duration::from_secs(10))?;
    done(&run, &rep)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gadget() -> Outcome {
    let (run, rep) = verify("gadget");
    no_fail(&run, &rep)?;
    let mut pairs = Vec::new();
    for n in 2..=10 {
        pairs.extend((1..n).filter(|&m| gcd(n, m) == 1).map(|m| (2, n, m)));
    }
    for n in 1..=6 {
        pairs.extend((1..=n).filter(|&m| gcd(n, m) == 1).map(|m| (3, n, m)));
    }
    for (r, n, m) in pairs {
        for clause in ["clause1", "clause2", "clause3", "flow-route"] {
            let key = format!("r{r}/n{n:02}/m{m:02}/{clause}");
            let st = status_of(&rep, &key)?;
            ensure(
                matches!(st, Status::Pass | Status::Degenerate),
                format!("{key} is {}", st.as_str()),
            )?;
        }
    }
    for c in rep.cases.iter().filter(|c| c.status == Status::Degenerate) {
        let flagged = c.detail.contains("|X| = 1") || c.detail.contains("boundary");
        ensure(flagged, format!("{} marked DEGENERATE without reason", c.key))?;
    }
    within(&run, Duration::from_secs(300))?;
    done(&run, &rep)
}

fn path_fact() -> Outcome {
    let (run, rep) = verify("path-fact");
    no_fail(&run, &rep)?;
    all_pass(&rep)?;
    for ell in 2..=8 {
        status_of(&rep, &format!("ell{ell}"))?;
        let detail = &rep.case(&format!("ell{ell}")).unwrap().detail;
        let closed = !detail.contains("not d-closed");
        ensure(closed == (ell >= 3), format!("ell = {ell}: {detail}"))?;
    }
    within(&run, Duration::from_secs(1))?;
    done(&run, &rep)
}

fn ex511() -> Outcome {
    let (run, rep) = verify("ex511");
    no_fail(&run, &rep)?;
    for r in ["r3/", "r4/"] {
        ensure(
            rep.cases.iter().any(|c| c.key.starts_with(r)),
            format!("no cases for {r}"),
        )?;
    }
    ensure(
        status_of(&rep, "control/good")? == Status::Pass,
        "control function not good",
    )?;
    within(&run, Duration::from_secs(60))?;
    done(&run, &rep)
}

fn ex512() -> Outcome {
    let (run, rep) = verify("ex512");
    no_fail(&run, &rep)?;
    for key in [
        "cd/girth",
        "cd/delta",
        "cd/above-control",
        "step2/half-bound",
        "step3/closure-bound",
    ] {
        ensure(status_of(&rep, key)? == Status::Pass, format!("{key} not PASS"))?;
    }
    let half = &rep.case("step2/half-bound").unwrap().detail;
    ensure(half.contains("on 1000 "), format!("half bound sampled: {half}"))?;
    for v in ["edge", "path", "apart"] {
        for claim in [
            "large-s",
            "delta",
            "a-closed",
            "ae-closed",
            "e-perp-a",
            "copies-closed",
            "closure-of-b",
        ] {
            ensure(
                status_of(&rep, &format!("{v}/{claim}"))? == Status::Pass,
                format!("{v}/{claim} not PASS"),
            )?;
        }
        ensure(
            rep.cases
                .iter()
                .any(|c| c.key.starts_with(&format!("{v}/reduced-")) && c.status == Status::Pass),
            format!("no reduced instance for {v}"),
        )?;
    }
    within(&run, Duration::from_secs(300))?;
    done(&run, &rep)
}

fn msa_bound() -> Outcome {
    let (run, rep) = verify("msa-bound");
    no_fail(&run, &rep)?;
    all_pass(&rep)?;
    for sig in ["n2m1r2/", "n1m1r3/"] {
        let k = rep.cases.iter().filter(|c| c.key.starts_with(sig)).count();
        ensure(k == 100, format!("{k} amalgams for {sig}"))?;
    }
    within(&run, Duration::from_secs(120))?;
    done(&run, &rep)
}

fn submodularity() -> Outcome {
    let (run, rep) = verify("submodularity");
    no_fail(&run, &rep)?;
    all_pass(&rep)?;
    for k in 0..=7 {
        for part in ["submodular", "intersection", "transitive"] {
            status_of(&rep, &format!("graphs/order{k}/{part}"))?;
        }
    }
    let queries: usize = rep
        .cases
        .iter()
        .filter(|c| c.key.starts_with("oracle/"))
        .filter_map(|c| c.detail.split(" on ").nth(1)?.split(' ').next()?.parse::<usize>().ok())
        .sum();
    ensure(queries >= 10_000, format!("{queries} oracle queries"))?;
    within(&run, Duration::from_secs(300))?;
    done(&run, &rep)
}

fn axioms() -> Outcome {
    let (run, rep) = verify("axioms");
    no_fail(&run, &rep)?;
    all_pass(&rep)?;
    for axiom in [
        "compatibility",
        "monotonicity",
        "transitivity",
        "symmetry",
        "characterization",
    ] {
        let k = rep
            .cases
            .iter()
            .filter(|c| c.key.ends_with(&format!("/{axiom}")))
            .count();
        ensure(k > 0, format!("no cases for {axiom}"))?;
    }
    within(&run, Duration::from_secs(300))?;
    done(&run, &rep)
}

fn extension_property() -> Outcome {
    let (run, rep) = verify("extension-property");
    no_fail(&run, &rep)?;
    for key in ["class/membership", "chain/strong-steps", "chain/digest", "determinism"] {
        ensure(status_of(&rep, key)? == Status::Pass, format!("{key} not PASS"))?;
    }
    for c in rep.cases.iter().filter(|c| c.key.starts_with("audit/task")) {
        let small = c.detail.starts_with("base 0 ") || c.detail.starts_with("base 1 ");
        ensure(!small || c.status == Status::Pass, format!("{} {}", c.key, c.detail))?;
    }
    let (again, _) = verify("extension-property");
    ensure(again.stdout == run.stdout, "machine reports of two runs differ")?;
    within(&run, Duration::from_secs(120))?;
    done(&run, &rep)
}

fn kn() -> Outcome {
    let (run, rep) = verify("kn");
    no_fail(&run, &rep)?;
    all_pass(&rep)?;
    for n in 3..=5u32 {
        status_of(&rep, &format!("n{n}/cycle{:02}/accepted", 2 * n))?;
        status_of(&rep, &format!("n{n}/cycle{:02}/delta", 2 * n))?;
        for m in 2..n {
            status_of(&rep, &format!("n{n}/cycle{:02}/rejected", 2 * m))?;
        }
    }
    within(&run, Duration::from_secs(1))?;
    done(&run, &rep)
}

fn negative_controls() -> Outcome {
    let caps = Caps::default();
    let mut total = 0;
    for suite in SUITES {
        let run = predimlab(&["verify", suite, "--negative-control", "--report", "machine"]);
        ensure(run.code == 1, format!("{suite}: negative control exit {}", run.code))?;
        let rep = VerificationReport::from_machine(&run.stdout).map_err(|e| format!("{suite}: {e}"))?;
        ensure(!rep.cases.is_empty(), format!("{suite}: no fault cases"))?;
        for c in &rep.cases {
            ensure(
                c.status == Status::Fail,
                format!("{suite}/{}: {}", c.key, c.status.as_str()),
            )?;
            let replayed = replay_case(c, &caps).map_err(|e| format!("{suite}/{}: {e}", c.key))?;
            ensure(replayed, format!("{suite}/{}: witness does not reproduce", c.key))?;
            total += 1;
        }
    }
    ensure(predimlab(&["verify", "kn"]).code == 0, "clean suite does not exit 0")?;
    ensure(
        predimlab(&["verify", "no-such-suite"]).code == 2,
        "unknown suite does not exit 2",
    )?;
    ensure(
        predimlab(&["gadget", "--n", "4", "--m", "2", "--r", "2"]).code == 2,
        "bad parameters do not exit 2",
    )?;
    ensure(
        predimlab(&["frobnicate"]).code == 2,
        "unknown subcommand does not exit 2",
    )?;
    Ok(format!("{total} injected faults caught and replayed; exit codes 0/1/2"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("beatty", beatty),
        ("gadget", gadget),
        ("path-fact", path_fact),
        ("ex511", ex511),
        ("ex512", ex512),
        ("msa-bound", msa_bound),
        ("submodularity", submodularity),
        ("axioms", axioms),
        ("extension-property", extension_property),
        ("kn", kn),
        ("negative-controls", negative_controls),
    ];
    println!();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("criterion {:>2} {name:<19} PASS  {msg}", i + 1),
            Err(msg) => {
                println!("criterion {:>2} {name:<19} FAIL  {msg}", i + 1);
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

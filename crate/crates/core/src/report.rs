//! Verification reports.
//!
//! The machine form is JSON with schema `predimlab-report/1`:
//! `{schema, suite, tool_version, seed, ambient_relative, notes, summary,
//! cases: [{key, status, witness?, structure?, margin?, detail}]}`. Cases
//! are sorted by key. Wall time is only part of the text form, so machine
//! reports for equal inputs and seeds are byte-identical.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "predimlab-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Degenerate,
    Partial,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Degenerate => "DEGENERATE",
            Status::Partial => "PARTIAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub key: String,
    pub status: Status,
    /// Violating vertex ids, or another description of the failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// The ambient structure of the witness, in `predimlab/1` format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    /// Exact rational margin, as `p/q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    pub detail: String,
}

impl Case {
    pub fn new(key: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Case {
            key: key.into(),
            status,
            witness: None,
            structure: None,
            margin: None,
            detail: detail.into(),
        }
    }

    pub fn check(key: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        let mut c = Case::new(key, if ok { Status::Pass } else { Status::Fail }, detail.clone());
        if !ok {
            c.witness = Some(detail);
        }
        c
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_structure(mut self, text: impl Into<String>) -> Self {
        self.structure = Some(text.into());
        self
    }

    pub fn with_margin(mut self, margin: impl Into<String>) -> Self {
        self.margin = Some(margin.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub degenerate: usize,
    pub partial: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub tool_version: String,
    pub seed: u64,
    pub ambient_relative: bool,
    pub notes: Vec<String>,
    pub summary: Summary,
    pub cases: Vec<Case>,
    #[serde(skip)]
    pub wall_time_ms: Option<u128>,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        VerificationReport {
            schema: SCHEMA.into(),
            suite: suite.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed,
            ambient_relative: true,
            notes: Vec::new(),
            summary: Summary::default(),
            cases: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push(&mut self, case: Case) {
        self.cases.push(case);
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = Case>) {
        self.cases.extend(cases);
    }

    /// Sorts cases, checks key uniqueness and fills the summary. A FAIL
    /// without a witness gets its detail as witness.
    pub fn finish(mut self) -> Self {
        self.cases.sort_by(|a, b| a.key.cmp(&b.key));
        for w in self.cases.windows(2) {
            assert_ne!(w[0].key, w[1].key, "duplicate case key in suite {}", self.suite);
        }
        let mut s = Summary::default();
        for c in &mut self.cases {
            if c.status == Status::Fail && c.witness.is_none() {
                c.witness = Some(c.detail.clone());
            }
            s.total += 1;
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Degenerate => s.degenerate += 1,
                Status::Partial => s.partial += 1,
            }
        }
        self.summary = s;
        self
    }

    pub fn failed(&self) -> bool {
        self.cases.iter().any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn case(&self, key: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.key == key)
    }

    pub fn to_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_machine(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// SHA-256 of the machine form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_machine().as_bytes()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        writeln!(out, "suite {} (seed {}, ambient-relative)", self.suite, self.seed).unwrap();
        for n in &self.notes {
            writeln!(out, "  note: {n}").unwrap();
        }
        for c in &self.cases {
            write!(out, "  {:<10} {}  {}", c.status.as_str(), c.key, c.detail).unwrap();
            if let Some(m) = &c.margin {
                write!(out, "  margin {m}").unwrap();
            }
            if let (Status::Fail, Some(w)) = (c.status, &c.witness) {
                write!(out, "  witness {w}").unwrap();
            }
            out.push('\n');
        }
        write!(
            out,
            "{} cases: {} pass, {} fail, {} degenerate, {} partial",
            s.total, s.pass, s.fail, s.degenerate, s.partial
        )
        .unwrap();
        if let Some(ms) = self.wall_time_ms {
            write!(out, " ({ms} ms)").unwrap();
        }
        out.push('\n');
        out
    }
}

/// `{1,2,3}` style listing of vertex ids.
pub fn ids_text(ids: &[u32]) -> String {
    let body: Vec<String> = ids.iter().map(u32::to_string).collect();
    format!("{{{}}}", body.join(","))
}

/// Parses the output of [`ids_text`].
pub fn parse_ids(text: &str) -> Option<Vec<u32>> {
    let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|w| w.trim().parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        let r = VerificationReport::new("empty", 0).finish();
        assert_eq!(r.summary.total, 0);
        assert_eq!(r.exit_code(), 0);
        assert!(r.to_text().contains("0 cases"));
    }

    #[test]
    fn cases_are_sorted_and_counted() {
        let mut r = VerificationReport::new("x", 7);
        r.push(Case::new("b", Status::Pass, ""));
        r.push(Case::check("a", false, "broken"));
        r.push(Case::new("c", Status::Degenerate, ""));
        let r = r.finish();
        assert_eq!(r.cases[0].key, "a");
        assert_eq!(r.cases[0].witness.as_deref(), Some("broken"));
        assert_eq!(r.summary.fail, 1);
        assert_eq!(r.exit_code(), 1);
        let back = VerificationReport::from_machine(&r.to_machine()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn wall_time_does_not_change_the_digest() {
        let mut a = VerificationReport::new("x", 1).finish();
        let d = a.digest();
        a.wall_time_ms = Some(12);
        assert_eq!(a.digest(), d);
        assert!(a.to_text().contains("12 ms"));
    }

    #[test]
    #[should_panic(expected = "duplicate case key")]
    fn duplicate_keys_panic() {
        let mut r = VerificationReport::new("x", 1);
        r.push(Case::new("a", Status::Pass, ""));
        r.push(Case::new("a", Status::Pass, ""));
        r.finish();
    }

    #[test]
    fn id_lists_round_trip() {
        assert_eq!(parse_ids(&ids_text(&[3, 1, 2])), Some(vec![3, 1, 2]));
        assert_eq!(parse_ids("{}"), Some(vec![]));
        assert_eq!(parse_ids("[1]"), None);
    }
}

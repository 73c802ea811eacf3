//! Report records in two renderings: `key: value` lines or one JSON object.

use std::fmt::{Display, Write as _};

use serde::Serialize;

use super::{MinimalOutcome, MinimalityReport, SeparationReport, SeparationVerdict};
use crate::orbits::Point;

/// Context shared by every run record.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RunHeader {
    pub command: String,
    pub field: String,
    pub n: usize,
    pub m: usize,
    pub set_size: usize,
    pub domain: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PointPair {
    pub p: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
}

impl PointPair {
    pub fn new<E: Clone + Ord + Display>(p: &Point<E>, q: &Point<E>) -> Self {
        PointPair {
            p: rows(p),
            q: rows(q),
        }
    }
}

fn rows<E: Clone + Ord + Display>(p: &Point<E>) -> Vec<Vec<String>> {
    p.rows()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SeparationRecord {
    #[serde(flatten)]
    pub header: RunHeader,
    pub verdict: String,
    pub points_checked: u128,
    pub buckets: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<PointPair>,
}

impl SeparationRecord {
    pub fn new<E: Clone + Ord + Display>(header: RunHeader, report: &SeparationReport<E>) -> Self {
        let (verdict, counterexample) = match &report.verdict {
            SeparationVerdict::Separating => ("separating", None),
            SeparationVerdict::CounterexampleFound { p, q } => {
                ("counterexample", Some(PointPair::new(p, q)))
            }
            SeparationVerdict::InconclusiveSample => ("inconclusive-sample", None),
        };
        SeparationRecord {
            header,
            verdict: verdict.into(),
            points_checked: report.points_checked,
            buckets: report.buckets,
            counterexample,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn to_human(&self) -> String {
        let mut s = header_lines(&self.header);
        let _ = writeln!(s, "verdict: {}", self.verdict);
        let _ = writeln!(s, "points_checked: {}", self.points_checked);
        let _ = writeln!(s, "buckets: {}", self.buckets);
        if let Some(pair) = &self.counterexample {
            pair_lines(&mut s, pair, "");
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MinimalRecordEntry {
    pub invariant: String,
    pub outcome: String,
    pub evaluated: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PointPair>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MinimalityRecord {
    #[serde(flatten)]
    pub header: RunHeader,
    pub budget: u64,
    pub verdict: String,
    pub entries: Vec<MinimalRecordEntry>,
}

impl MinimalityRecord {
    pub fn new<E: Clone + Ord + Display>(
        header: RunHeader,
        budget: u64,
        report: &MinimalityReport<E>,
    ) -> Self {
        let entries = report
            .entries
            .iter()
            .map(|e| {
                let (outcome, witness) = match &e.outcome {
                    MinimalOutcome::Witness { p, q } => ("witness", Some(PointPair::new(p, q))),
                    MinimalOutcome::Unknown => ("unknown", None),
                };
                MinimalRecordEntry {
                    invariant: e.invariant.to_string(),
                    outcome: outcome.into(),
                    evaluated: e.evaluated,
                    witness,
                }
            })
            .collect();
        let verdict = if report.all_witnessed() {
            "all-witnessed"
        } else {
            "incomplete"
        };
        MinimalityRecord {
            header,
            budget,
            verdict: verdict.into(),
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn to_human(&self) -> String {
        let mut s = header_lines(&self.header);
        let _ = writeln!(s, "budget: {}", self.budget);
        let _ = writeln!(s, "verdict: {}", self.verdict);
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{}: {} (evaluated {})",
                e.invariant, e.outcome, e.evaluated
            );
            if let Some(pair) = &e.witness {
                pair_lines(&mut s, pair, "  ");
            }
        }
        s
    }
}

fn header_lines(h: &RunHeader) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command: {}", h.command);
    let _ = writeln!(s, "field: {}", h.field);
    let _ = writeln!(s, "n: {}", h.n);
    let _ = writeln!(s, "m: {}", h.m);
    let _ = writeln!(s, "set_size: {}", h.set_size);
    let _ = writeln!(s, "domain: {}", h.domain);
    s
}

fn pair_lines(s: &mut String, pair: &PointPair, indent: &str) {
    for (name, rows) in [("p", &pair.p), ("q", &pair.q)] {
        let _ = writeln!(s, "{indent}{name}:");
        for r in rows {
            let _ = writeln!(s, "{indent}  {}", r.join(" "));
        }
    }
}

//! Run reports in the `key: value` line format written by `--report`.
//!
//! ```text
//! schema: cows-adapt-report/1
//! command: check
//! source: corpus/tollbooth.cows
//! max_states: 100000
//! max_depth: unbounded
//! keep_tau: false
//! workers: 1
//! states: 10
//! transitions: 9
//! truncated: none
//! duration_ms: 3
//! properties: 1
//! property.0.name: Reliability
//! property.0.verdict: HOLDS
//! property.0.evidence: 0 comm:serv.create<0,4,10,60> 1; 1 comm:p.adaptime<0,4,10,60> 2
//! ```
//!
//! Keys appear in this order; property keys are indexed in `.prop` order.
//! Evidence is `src label dst` steps joined by `; `, empty for a trace that
//! stays in the initial state.

use std::fmt::Write;
use std::time::Duration;

use crate::explorer::Truncation;
use crate::logic::{Trace, Verdict};

pub const SCHEMA: &str = "cows-adapt-report/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: Trace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub command: &'static str,
    /// Model path, `-` for standard input.
    pub source: String,
    pub max_states: usize,
    pub max_depth: Option<usize>,
    pub keep_tau: bool,
    pub workers: usize,
    pub states: usize,
    pub transitions: usize,
    pub truncated: Truncation,
    pub duration: Duration,
    pub properties: Vec<PropertyReport>,
}

/// One line per step, `src --label--> dst`.
pub fn trace_lines(t: &Trace) -> Vec<String> {
    if t.steps.is_empty() {
        return vec![format!("at {}", t.end)];
    }
    t.steps
        .iter()
        .enumerate()
        .map(|(i, (s, l))| {
            let dst = t.steps.get(i + 1).map_or(t.end, |n| n.0);
            format!("{} --{}--> {}", s, l, dst)
        })
        .collect()
}

fn trace_field(t: &Trace) -> String {
    t.steps
        .iter()
        .enumerate()
        .map(|(i, (s, l))| {
            let dst = t.steps.get(i + 1).map_or(t.end, |n| n.0);
            format!("{} {} {}", s, l, dst)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

impl RunReport {
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{}: {}", k, v);
        };
        kv("schema", &SCHEMA);
        kv("command", &self.command);
        kv("source", &self.source);
        kv("max_states", &self.max_states);
        match self.max_depth {
            Some(d) => kv("max_depth", &d),
            None => kv("max_depth", &"unbounded"),
        }
        kv("keep_tau", &self.keep_tau);
        kv("workers", &self.workers);
        kv("states", &self.states);
        kv("transitions", &self.transitions);
        kv("truncated", &self.truncated);
        kv("duration_ms", &self.duration.as_millis());
        kv("properties", &self.properties.len());
        for (i, p) in self.properties.iter().enumerate() {
            kv(&format!("property.{}.name", i), &p.name);
            kv(&format!("property.{}.verdict", i), &p.verdict);
            kv(&format!("property.{}.evidence", i), &trace_field(&p.evidence));
        }
        out
    }
}

/// Reads a report back into ordered `(key, value)` pairs.
pub fn parse_key_values(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once(": ").or_else(|| l.strip_suffix(':').map(|k| (k, ""))))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

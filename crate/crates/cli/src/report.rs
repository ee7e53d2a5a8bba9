//! Reports: one structure, rendered as text or as JSON with the same data.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use descent_kit::descent::{FinClassification, FinDatum, FinDescMor, FinSetDescent};
use descent_kit::fincat::{EssSurjWitness, FaithfulWitness, FullWitness};
use descent_kit::{FinFunction, SliceMor};
use serde::Serialize;

use crate::spec::SpecOut;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

/// A counterexample as a spec fragment that parses back.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub title: String,
    pub toml: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub outcome: String,
    pub instance: String,
    pub detail: String,
    /// Failure or skip reason; empty on PASS.
    pub reason: String,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub task: BTreeMap<String, String>,
    pub bound: Option<usize>,
    pub verdict: String,
    pub exit_code: u8,
    /// Some enumeration was truncated, so the verdict holds up to `bound`.
    pub within_bound: bool,
    pub details: BTreeMap<String, String>,
    pub witnesses: Vec<Witness>,
    pub cases: Vec<Case>,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            task: BTreeMap::new(),
            bound: None,
            verdict: String::new(),
            exit_code: 0,
            within_bound: false,
            details: BTreeMap::new(),
            witnesses: Vec::new(),
            cases: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl ToString) {
        self.details.insert(key.into(), value.to_string());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => serde_json::to_string_pretty(self).expect("reports serialize") + "\n",
            Format::Text => self.text(),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for (k, v) in &self.task {
            let _ = writeln!(s, "task.{k}: {v}");
        }
        if let Some(b) = self.bound {
            let _ = writeln!(s, "bound: {b}");
        }
        let _ = writeln!(s, "verdict: {}", self.verdict);
        let _ = writeln!(s, "exit_code: {}", self.exit_code);
        let _ = writeln!(s, "within_bound: {}", self.within_bound);
        for (k, v) in &self.details {
            let _ = writeln!(s, "{k}: {v}");
        }
        for c in &self.cases {
            let _ = write!(s, "{:<4}  {}", c.outcome, c.instance);
            if !c.detail.is_empty() {
                let _ = write!(s, "  [{}]", c.detail);
            }
            if !c.reason.is_empty() {
                let _ = write!(s, "  ({})", c.reason);
            }
            if c.within_bound {
                let _ = write!(s, "  (within bound)");
            }
            s.push('\n');
        }
        for w in &self.witnesses {
            let _ = writeln!(s, "--- witness: {}", w.title);
            s.push_str(&w.toml);
            let _ = writeln!(s, "--- end");
        }
        let _ = writeln!(s, "timing_ms: {}", self.timing_ms);
        s
    }
}

/// `E → B: a↦x, b↦y`.
pub fn describe(f: &FinFunction) -> String {
    let pairs: Vec<String> = (0..f.dom().len())
        .map(|i| format!("{}↦{}", f.dom().label(i), f.cod().label(f.apply(i))))
        .collect();
    format!("{} → {}: {}", f.dom(), f.cod(), pairs.join(", "))
}

fn slice_mor(out: &mut SpecOut, name: &str, m: &SliceMor<FinFunction>, src: &str, tgt: &str, base: &str) {
    out.function(&format!("{name}_src"), &m.src, src, base);
    out.function(&format!("{name}_tgt"), &m.tgt, tgt, base);
    out.function(name, &m.arrow, src, tgt);
}

fn not_faithful(p: &FinFunction, w: &FaithfulWitness<SliceMor<FinFunction>, FinDescMor>) -> Witness {
    let mut out = SpecOut::default();
    out.function("p", p, "E", "B");
    slice_mor(&mut out, "f", &w.f, "X", "Y", "B");
    out.function("g", &w.g.arrow, "X", "Y");
    Witness {
        title: "distinct f, g: f_src → f_tgt over B with equal images under Φ".into(),
        toml: out.to_toml(),
    }
}

fn not_full(p: &FinFunction, w: &FullWitness<FinFunction, FinDescMor>) -> Witness {
    let mut out = SpecOut::default();
    out.function("p", p, "E", "B");
    out.function("x", &w.x, "X", "B");
    out.function("y", &w.y, "Y", "B");
    slice_mor(&mut out, "m", &w.missed.m, "Wx", "Wy", "E");
    Witness {
        title: "descent morphism m: Φx → Φy that is the image of no x → y".into(),
        toml: out.to_toml(),
    }
}

fn not_glued(p: &FinFunction, w: &EssSurjWitness<FinDatum>) -> Witness {
    let mut out = SpecOut::default();
    out.function("p", p, "E", "B");
    out.function("w", &w.object.w, "W", "E");
    slice_mor(&mut out, "rho", &w.object.rho, "D1W", "D0W", "E2");
    Witness {
        title: "descent datum (w, rho) isomorphic to no Φx".into(),
        toml: out.to_toml(),
    }
}

/// The witnesses of a classification: the first failing check of `Φ`.
pub fn classification_witnesses(fd: &FinSetDescent, c: &FinClassification) -> Vec<Witness> {
    let p = fd.p();
    let r = &c.report;
    let mut out = Vec::new();
    if let Some(w) = &r.faithful.witness {
        out.push(not_faithful(p, w));
    }
    if let Some(w) = r.full.as_ref().and_then(|v| v.witness.as_ref()) {
        out.push(not_full(p, w));
    }
    if let Some(w) = r.essentially_surjective.as_ref().and_then(|v| v.witness.as_ref()) {
        out.push(not_glued(p, w));
    }
    out
}

//! Printable forms of core results, with words rendered in the spec's symbols.

use deltamix_core::chaos::{BranchPair, EventKind, ScrambledReport, SubsampleCheck};
use deltamix_core::density::DensityReport;
use deltamix_core::entropy::EntropyReport;
use deltamix_core::hitting::{FilterBase, TimeSet};
use deltamix_core::independence::{IndependenceOutcome, SelectorWitness};
use deltamix_core::mixing::{DeltaCertificate, RelativeTag, SpreadWitness, SystemReport};
use deltamix_core::{CylinderUnion, SubshiftSpec};
use serde::Serialize;

use crate::artifact::Body;
use crate::notation::{join, render_distance, render_tuple, render_union};

fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    out.push_str(&format!("{key} {value}\n"));
}

#[derive(Debug, Clone, Serialize)]
pub struct RateView {
    pub n: usize,
    pub count: u128,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyView {
    pub spec: String,
    pub method: String,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub rates: Vec<RateView>,
}

impl EntropyView {
    pub fn new(spec: &SubshiftSpec, r: &EntropyReport) -> Self {
        EntropyView {
            spec: spec.name().into(),
            method: r.method.name().into(),
            value: r.value,
            residual: r.residual,
            iterations: r.iterations,
            converged: r.converged,
            rates: r.rates.iter().map(|w| RateView { n: w.n, count: w.count, rate: w.rate }).collect(),
        }
    }
}

impl Body for EntropyView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "method", &self.method);
        line(&mut s, "value", format!("{:.12}", self.value));
        line(&mut s, "residual", format!("{:.12}", self.residual));
        line(&mut s, "iterations", self.iterations);
        line(&mut s, "converged", self.converged);
        for r in &self.rates {
            line(&mut s, "rate", format!("{} {} {:.12}", r.n, r.count, r.rate));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WordAt {
    pub n: usize,
    pub word: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Thick {
    pub block: usize,
    pub start: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterView {
    pub against: String,
    pub m: usize,
    pub ws: String,
    pub checked: Vec<usize>,
}

impl FilterView {
    pub fn new(spec: &SubshiftSpec, against: &[CylinderUnion], f: &FilterBase) -> Self {
        FilterView {
            against: render_tuple(spec, against),
            m: f.m,
            ws: render_tuple(spec, &f.ws),
            checked: f.checked.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HittingView {
    pub spec: String,
    pub d: usize,
    pub sets: String,
    pub horizon: usize,
    pub members: Vec<usize>,
    pub witnesses: Option<Vec<WordAt>>,
    pub thickness: Option<Thick>,
    pub filter_base: Option<FilterView>,
}

impl HittingView {
    pub fn new(spec: &SubshiftSpec, us: &[CylinderUnion], t: &TimeSet, keep_witnesses: bool) -> Self {
        HittingView {
            spec: spec.name().into(),
            d: us.len(),
            sets: render_tuple(spec, us),
            horizon: t.horizon,
            members: t.members.clone(),
            witnesses: keep_witnesses.then(|| {
                t.witnesses
                    .iter()
                    .flatten()
                    .map(|(&n, w)| WordAt { n, word: spec.render(w) })
                    .collect()
            }),
            thickness: None,
            filter_base: None,
        }
    }
}

impl Body for HittingView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "d", self.d);
        line(&mut s, "sets", &self.sets);
        line(&mut s, "horizon", self.horizon);
        s.push_str(format!("members {}", join(&self.members, " ")).trim_end());
        s.push('\n');
        for w in self.witnesses.iter().flatten() {
            line(&mut s, "witness", format!("{} {}", w.n, w.word));
        }
        if let Some(t) = &self.thickness {
            let start = t.start.map_or("none".to_string(), |v| v.to_string());
            line(&mut s, "thick", format!("{} {start}", t.block));
        }
        if let Some(f) = &self.filter_base {
            line(&mut s, "filter-against", &f.against);
            line(&mut s, "filter-m", f.m);
            line(&mut s, "filter-ws", &f.ws);
            line(&mut s, "filter-checked", f.checked.len());
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectorView {
    pub selector: Vec<usize>,
    pub word: String,
}

fn selectors(spec: &SubshiftSpec, ws: &[SelectorWitness]) -> Vec<SelectorView> {
    ws.iter()
        .map(|w| SelectorView {
            selector: w.selector.clone(),
            word: spec.render(&w.word),
        })
        .collect()
}

fn witness_lines(s: &mut String, ws: &[SelectorView]) {
    for w in ws {
        let sel = if w.selector.is_empty() { "-".to_string() } else { join(&w.selector, ",") };
        line(s, "witness", format!("{sel} {}", w.word));
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityView {
    pub lower: String,
    pub upper: String,
    pub at_window: String,
    pub window: usize,
}

impl From<&DensityReport> for DensityView {
    fn from(d: &DensityReport) -> Self {
        DensityView {
            lower: d.lower.to_string(),
            upper: d.upper.to_string(),
            at_window: d.at_window.to_string(),
            window: d.window,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceView {
    pub spec: String,
    pub tuple: String,
    pub within: Option<String>,
    pub j: Vec<usize>,
    pub certified: bool,
    pub refuted_selector: Option<Vec<usize>>,
    pub witnesses: Vec<SelectorView>,
    pub density: Option<DensityView>,
}

impl IndependenceView {
    pub fn new(
        spec: &SubshiftSpec,
        tuple: &[CylinderUnion],
        within: Option<&CylinderUnion>,
        j: &[usize],
        outcome: &IndependenceOutcome,
    ) -> Self {
        let (certified, refuted_selector, witnesses, j) = match outcome {
            IndependenceOutcome::Certified(c) => (true, None, selectors(spec, &c.witnesses), c.j.clone()),
            IndependenceOutcome::Refuted { selector } => (false, Some(selector.clone()), Vec::new(), j.to_vec()),
        };
        IndependenceView {
            spec: spec.name().into(),
            tuple: render_tuple(spec, tuple),
            within: within.map(|w| render_union(spec, w)),
            j,
            certified,
            refuted_selector,
            witnesses,
            density: None,
        }
    }
}

impl Body for IndependenceView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "tuple", &self.tuple);
        if let Some(w) = &self.within {
            line(&mut s, "within", w);
        }
        line(&mut s, "j", join(&self.j, " "));
        match &self.refuted_selector {
            None => line(&mut s, "outcome", "certified"),
            Some(sel) => line(&mut s, "outcome", format!("refuted {}", join(sel, ","))),
        }
        if let Some(d) = &self.density {
            line(&mut s, "density", format!("lower {} upper {} at {} window {}", d.lower, d.upper, d.at_window, d.window));
        }
        witness_lines(&mut s, &self.witnesses);
        s
    }
}

pub fn render_relative(spec: &SubshiftSpec, r: &RelativeTag) -> String {
    match r {
        RelativeTag::Whole => "whole".into(),
        RelativeTag::Cylinders(c) => format!("cylinders {}", render_union(spec, c)),
        RelativeTag::SubShift(name) => format!("subshift {name}"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaView {
    pub spec: String,
    pub kind: String,
    pub d: usize,
    pub sets: String,
    pub relative: String,
    pub n: usize,
    pub horizon: usize,
    pub j: Option<Vec<usize>>,
    pub cover: Option<Vec<String>>,
    pub witnesses: Vec<SelectorView>,
}

impl DeltaView {
    pub fn new(spec: &SubshiftSpec, c: &DeltaCertificate) -> Self {
        DeltaView {
            spec: spec.name().into(),
            kind: c.kind.name().into(),
            d: c.d,
            sets: render_tuple(spec, &c.sets),
            relative: render_relative(spec, &c.relative),
            n: c.n,
            horizon: c.horizon,
            j: c.independence.as_ref().map(|i| i.j.clone()),
            cover: c.cover.as_ref().map(|ws| ws.iter().map(|w| spec.render(w)).collect()),
            witnesses: selectors(spec, &c.witnesses),
        }
    }
}

impl Body for DeltaView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "kind", &self.kind);
        line(&mut s, "d", self.d);
        line(&mut s, "sets", &self.sets);
        line(&mut s, "relative", &self.relative);
        line(&mut s, "n", self.n);
        line(&mut s, "horizon", self.horizon);
        if let Some(j) = &self.j {
            line(&mut s, "j", join(j, " "));
        }
        if let Some(c) = &self.cover {
            line(&mut s, "cover", c.join(","));
        }
        witness_lines(&mut s, &self.witnesses);
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemView {
    pub spec: String,
    pub kind: String,
    pub d: usize,
    pub max_len: usize,
    pub horizon: usize,
    pub tuples: usize,
    pub max_n: usize,
    pub failures: Vec<String>,
}

impl SystemView {
    pub fn new(spec: &SubshiftSpec, r: &SystemReport) -> Self {
        SystemView {
            spec: spec.name().into(),
            kind: "delta_transitive_system".into(),
            d: r.d,
            max_len: r.max_len,
            horizon: r.horizon,
            tuples: r.tuples,
            max_n: r.max_n,
            failures: r
                .failures
                .iter()
                .map(|t| t.iter().map(|w| spec.render(w)).collect::<Vec<_>>().join(" | "))
                .collect(),
        }
    }
}

impl Body for SystemView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "kind", &self.kind);
        line(&mut s, "d", self.d);
        line(&mut s, "max-len", self.max_len);
        line(&mut s, "horizon", self.horizon);
        line(&mut s, "tuples", self.tuples);
        line(&mut s, "max-n", self.max_n);
        line(&mut s, "failures", self.failures.len());
        for f in &self.failures {
            line(&mut s, "failure", f);
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpreadView {
    pub spec: String,
    pub kind: String,
    pub domain: String,
    pub p: usize,
    pub q: usize,
    pub d: usize,
    pub k: usize,
    pub zs: Vec<String>,
    pub targets: Vec<Vec<String>>,
}

impl SpreadView {
    pub fn new(spec: &SubshiftSpec, w: &SpreadWitness) -> Self {
        SpreadView {
            spec: spec.name().into(),
            kind: "spread".into(),
            domain: render_relative(spec, &w.domain),
            p: w.p,
            q: w.q,
            d: w.d,
            k: w.k,
            zs: w.zs.iter().map(|z| spec.render(z)).collect(),
            targets: w.targets.iter().map(|t| t.iter().map(|g| spec.render(g)).collect()).collect(),
        }
    }
}

impl Body for SpreadView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "kind", &self.kind);
        line(&mut s, "domain", &self.domain);
        line(&mut s, "p", self.p);
        line(&mut s, "q", self.q);
        line(&mut s, "d", self.d);
        line(&mut s, "k", self.k);
        for (z, t) in self.zs.iter().zip(&self.targets) {
            line(&mut s, "base", format!("{z} {}", t.join(",")));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelSummary {
    pub k: usize,
    pub step: usize,
    pub ap_source: String,
    pub sets: usize,
    pub word_length: usize,
    pub j: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyView {
    pub spec: String,
    pub depth: usize,
    pub horizon: usize,
    pub checksum: String,
    pub levels: Vec<LevelSummary>,
    pub verdict: String,
}

impl Body for VerifyView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "depth", self.depth);
        line(&mut s, "horizon", self.horizon);
        line(&mut s, "checksum", &self.checksum);
        for l in &self.levels {
            line(
                &mut s,
                "level",
                format!(
                    "{} step {} ap {} sets {} length {} j {}",
                    l.k,
                    l.step,
                    l.ap_source,
                    l.sets,
                    l.word_length,
                    join(&l.j, ",")
                ),
            );
        }
        line(&mut s, "verdict", &self.verdict);
        s
    }
}

pub const REPORT_COLUMNS: [&str; 12] = [
    "pair",
    "r",
    "s",
    "horizon",
    "window",
    "tail_start",
    "min_tail",
    "max_tail",
    "verdict",
    "p_min",
    "eps_min",
    "tail_fraction",
];

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub pair: usize,
    pub r: usize,
    pub s: usize,
    pub horizon: usize,
    pub window: usize,
    pub tail_start: usize,
    pub min_tail: String,
    pub max_tail: String,
    pub verdict: String,
    pub p_min: u32,
    pub eps_min: f64,
    pub tail_fraction: f64,
}

impl From<&ScrambledReport> for ReportRow {
    fn from(r: &ScrambledReport) -> Self {
        ReportRow {
            pair: r.pair,
            r: r.r,
            s: r.s,
            horizon: r.horizon,
            window: r.window,
            tail_start: r.tail_start,
            min_tail: render_distance(r.min_tail),
            max_tail: render_distance(r.max_tail),
            verdict: r.verdict.name().into(),
            p_min: r.thresholds.p_min,
            eps_min: r.thresholds.eps_min,
            tail_fraction: r.thresholds.tail_fraction,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EventView {
    pub pair: usize,
    pub r: usize,
    pub s: usize,
    pub kind: String,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchView {
    pub pair: usize,
    pub a: usize,
    pub b: usize,
    pub length: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanView {
    pub spec: String,
    pub source: String,
    pub rows: Vec<ReportRow>,
    pub subsample: Vec<SubsampleCheck>,
    pub branches: Vec<BranchView>,
    pub events: Vec<EventView>,
}

impl ScanView {
    pub fn add_branch(&mut self, pair: usize, b: &BranchPair) {
        self.branches.push(BranchView {
            pair,
            a: b.a,
            b: b.b,
            length: b.x.len(),
        });
        for e in &b.events {
            self.events.push(EventView {
                pair,
                r: e.r,
                s: e.s,
                kind: match e.kind {
                    EventKind::Proximal => "proximal".into(),
                    EventKind::Distal => "distal".into(),
                },
                n: e.n,
            });
        }
    }
}

impl Body for ScanView {
    fn text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "spec", &self.spec);
        line(&mut s, "source", &self.source);
        for b in &self.branches {
            line(&mut s, "branch", format!("{} {} {} length {}", b.pair, b.a, b.b, b.length));
        }
        for e in &self.events {
            line(&mut s, "event", format!("{} {},{} {} {}", e.pair, e.r, e.s, e.kind, e.n));
        }
        s.push_str(&REPORT_COLUMNS.join("\t"));
        s.push('\n');
        for r in &self.rows {
            let cells = [
                r.pair.to_string(),
                r.r.to_string(),
                r.s.to_string(),
                r.horizon.to_string(),
                r.window.to_string(),
                r.tail_start.to_string(),
                r.min_tail.clone(),
                r.max_tail.clone(),
                r.verdict.clone(),
                r.p_min.to_string(),
                r.eps_min.to_string(),
                r.tail_fraction.to_string(),
            ];
            s.push_str(&cells.join("\t"));
            s.push('\n');
        }
        s.push_str("pair\tk\tsubsample\n");
        for c in &self.subsample {
            s.push_str(&format!("{}\t{}\t{}\n", c.pair, c.k, if c.holds { "holds" } else { "fails" }));
        }
        s
    }
}

/// One `n distance` line per profile entry.
pub fn trace_text(trace: &[(usize, deltamix_core::point::Distance)]) -> String {
    trace.iter().map(|&(n, d)| format!("{n} {}\n", render_distance(d))).collect()
}

//! Finite evidence for `(r, s)`-proximal, asymptotic and scrambled pairs.
//!
//! `liminf` and `limsup` of `ρ(T^{rn} x, T^{sn} y)` are rendered as the min
//! and max over the tail window `n ∈ [ceil(H (1 - tail)), H]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::construction::ConstructionTree;
use crate::error::{Error, Result};
use crate::limits::Thresholds;
use crate::point::{shift_distance, Distance, PointGen};
use crate::subshift::{backward_sets, least_fill, SubshiftSpec};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    ScrambledEvidence,
    AsymptoticEvidence,
    ProximalEvidence,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::ScrambledEvidence => "scrambled-evidence",
            Verdict::AsymptoticEvidence => "asymptotic-evidence",
            Verdict::ProximalEvidence => "proximal-evidence",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScrambledReport {
    pub pair: usize,
    pub r: usize,
    pub s: usize,
    pub horizon: usize,
    pub window: usize,
    pub tail_start: usize,
    pub min_tail: Distance,
    pub max_tail: Distance,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
    pub trace: Option<Vec<(usize, Distance)>>,
}

/// `ρ(T^{rn} x, T^{sn} y)` on `window` symbols for `n = 0..=horizon`.
pub fn orbit_distance_profile(
    x: &PointGen,
    y: &PointGen,
    r: usize,
    s: usize,
    horizon: usize,
    window: usize,
) -> Result<Vec<(usize, Distance)>> {
    if window == 0 {
        return Err(Error::precondition("window must be at least 1"));
    }
    (0..=horizon)
        .map(|n| shift_distance(x, y, n, r, s, window).map(|d| (n, d)))
        .collect()
}

pub fn tail_start(horizon: usize, thresholds: &Thresholds) -> usize {
    let t = thresholds.tail_fraction.clamp(0.0, 1.0);
    libm::ceil(horizon as f64 * (1.0 - t)) as usize
}

/// Verdict from tail extremes.
pub fn classify(min: Distance, max: Distance, thresholds: &Thresholds) -> Verdict {
    let close = |d: Distance| d.within(thresholds.p_min);
    if close(min) && max.value() >= thresholds.eps_min {
        Verdict::ScrambledEvidence
    } else if close(max) {
        Verdict::AsymptoticEvidence
    } else if close(min) {
        Verdict::ProximalEvidence
    } else {
        Verdict::Inconclusive
    }
}

/// Order distances by size: longer agreement is smaller.
fn size_key(d: Distance) -> (u32, u32) {
    match d {
        Distance::Differ(k) => (u32::MAX - k, 1),
        Distance::AgreeOn(w) => (0, u32::MAX - w),
    }
}

fn extremes(profile: &[(usize, Distance)], from: usize) -> Result<(Distance, Distance)> {
    let tail: Vec<Distance> = profile.iter().filter(|(n, _)| *n >= from).map(|&(_, d)| d).collect();
    let min = tail.iter().copied().min_by_key(|&d| size_key(d));
    let max = tail.iter().copied().max_by_key(|&d| size_key(d));
    match (min, max) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::precondition("tail window is empty")),
    }
}

/// Classify one pair from the tail of its profile.
#[allow(clippy::too_many_arguments)]
pub fn scrambled_report(
    pair: usize,
    x: &PointGen,
    y: &PointGen,
    r: usize,
    s: usize,
    horizon: usize,
    window: usize,
    thresholds: &Thresholds,
    keep_trace: bool,
) -> Result<ScrambledReport> {
    let profile = orbit_distance_profile(x, y, r, s, horizon, window)?;
    let from = tail_start(horizon, thresholds);
    let (min_tail, max_tail) = extremes(&profile, from)?;
    Ok(ScrambledReport {
        pair,
        r,
        s,
        horizon,
        window,
        tail_start: from,
        min_tail,
        max_tail,
        verdict: classify(min_tail, max_tail, thresholds),
        thresholds: *thresholds,
        trace: keep_trace.then_some(profile),
    })
}

impl ScrambledReport {
    /// Recompute the verdict from the stored trace.
    pub fn recheck(&self) -> Option<bool> {
        let trace = self.trace.as_ref()?;
        let (min, max) = extremes(trace, self.tail_start).ok()?;
        Some(min == self.min_tail && max == self.max_tail && classify(min, max, &self.thresholds) == self.verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubsampleCheck {
    pub pair: usize,
    pub k: usize,
    pub holds: bool,
}

/// The `(k, k)` profile equals the `(1, 1)` profile read at `k n`.
pub fn subsample_identity(x: &PointGen, y: &PointGen, k: usize, horizon: usize, window: usize) -> Result<bool> {
    let kk = orbit_distance_profile(x, y, k, k, horizon, window)?;
    let one = orbit_distance_profile(x, y, 1, 1, k * horizon, window)?;
    Ok(kk.iter().all(|&(n, d)| one[k * n].1 == d))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    pub reports: Vec<ScrambledReport>,
    pub subsample: Vec<SubsampleCheck>,
}

/// Reports for every pair and `(r, s)`, plus the subsampling identity for
/// `k = 1..=max_k`.
pub fn prox_asy_grid(
    pairs: &[(PointGen, PointGen)],
    rs: &[(usize, usize)],
    horizon: usize,
    window: usize,
    thresholds: &Thresholds,
    max_k: usize,
) -> Result<Grid> {
    let mut reports = Vec::new();
    let mut subsample = Vec::new();
    for (i, (x, y)) in pairs.iter().enumerate() {
        for &(r, s) in rs {
            reports.push(scrambled_report(i, x, y, r, s, horizon, window, thresholds, false)?);
        }
        for k in 1..=max_k {
            subsample.push(SubsampleCheck {
                pair: i,
                k,
                holds: subsample_identity(x, y, k, horizon, window)?,
            });
        }
    }
    Ok(Grid { reports, subsample })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EventKind {
    Proximal,
    Distal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Event {
    pub r: usize,
    pub s: usize,
    pub kind: EventKind,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPair {
    pub a: usize,
    pub b: usize,
    pub x: Word,
    pub y: Word,
    pub events: Vec<Event>,
}

impl BranchPair {
    pub fn points(&self) -> (PointGen, PointGen) {
        (PointGen::explicit(self.x.clone()), PointGen::explicit(self.y.clone()))
    }
}

/// Length a branch point needs for scans up to `horizon` over `rs`, including
/// the subsampling check up to `k = 4`.
pub fn branch_extent(rs: &[(usize, usize)], horizon: usize, window: usize) -> usize {
    let m = rs.iter().map(|&(r, s)| r.max(s)).max().unwrap_or(1).max(4);
    m * horizon + window
}

struct Layout<'a> {
    spec: &'a SubshiftSpec,
    pat: Vec<Option<u8>>,
    used: Vec<bool>,
}

impl Layout<'_> {
    fn free(&self, at: usize, len: usize) -> bool {
        let lo = at.saturating_sub(1);
        let hi = (at + len + 1).min(self.used.len());
        at + len <= self.used.len() && self.used[lo..hi].iter().all(|&u| !u)
    }

    fn place(&mut self, at: usize, w: &[u8]) {
        for (t, &a) in w.iter().enumerate() {
            self.pat[at + t] = Some(a);
            self.used[at + t] = true;
        }
    }

    fn unplace(&mut self, at: usize, len: usize) {
        for t in at..at + len {
            self.pat[t] = None;
            self.used[t] = false;
        }
    }

    fn feasible(&self) -> bool {
        backward_sets(self.spec, &self.pat).first().is_some_and(|&m| m != 0)
    }
}

/// Two points starting with deepest-level tree words `a` and `b`, with
/// proximal and distal events placed in the tail window of every `(r, s)`.
///
/// A proximal event at `n` writes the same `p_min` symbols (taken from the
/// first deepest-level word) at `rn` in `x` and `sn` in `y`; a distal event
/// writes two seeds up to their first disagreement. Events are scheduled
/// round-robin at the least free `n`, and the rest is the least allowed fill.
pub fn branch_pair(
    tree: &ConstructionTree,
    a: usize,
    b: usize,
    rs: &[(usize, usize)],
    horizon: usize,
    window: usize,
    thresholds: &Thresholds,
) -> Result<BranchPair> {
    let spec = &tree.spec;
    let deepest = tree.levels.last().ok_or_else(|| Error::precondition("empty tree"))?;
    let (wa, wb) = match (deepest.sets.get(a), deepest.sets.get(b)) {
        (Some(x), Some(y)) if a != b => (&x.word, &y.word),
        _ => return Err(Error::precondition("branches must be two distinct deepest-level sets")),
    };
    let p = thresholds.p_min as usize;
    let close = {
        let w0 = &deepest.sets[0].word;
        let mut pat: Vec<Option<u8>> = w0.iter().map(|&c| Some(c)).collect();
        pat.resize(pat.len().max(p), None);
        let full = least_fill(spec, &pat).ok_or_else(|| Error::violated("allowed", "tree word does not extend"))?;
        Word::from(&full[..p])
    };
    let (far_x, far_y) = {
        let (s0, s1) = (&tree.seeds[0], &tree.seeds[1]);
        let i = s0.iter().zip(s1.iter()).position(|(u, v)| u != v).unwrap_or(0);
        (Word::from(&s0[..=i]), Word::from(&s1[..=i]))
    };
    let extent = branch_extent(rs, horizon, window);
    let mut x = Layout {
        spec,
        pat: vec![None; extent],
        used: vec![false; extent],
    };
    let mut y = Layout {
        spec,
        pat: vec![None; extent],
        used: vec![false; extent],
    };
    x.place(0, wa);
    y.place(0, wb);
    if !x.feasible() || !y.feasible() {
        return Err(Error::violated("allowed", "branch prefix does not extend"));
    }
    let from = tail_start(horizon, thresholds).max(1);
    let mut events = Vec::new();
    for kind in [EventKind::Proximal, EventKind::Distal] {
        for &(r, s) in rs {
            let (wx, wy) = match kind {
                EventKind::Proximal => (&close, &close),
                EventKind::Distal => (&far_x, &far_y),
            };
            let mut placed = None;
            for n in from..=horizon {
                let (px, py) = (r * n, s * n);
                if !x.free(px, wx.len()) || !y.free(py, wy.len()) {
                    continue;
                }
                x.place(px, wx);
                y.place(py, wy);
                if x.feasible() && y.feasible() {
                    placed = Some(n);
                    break;
                }
                x.unplace(px, wx.len());
                y.unplace(py, wy.len());
            }
            let n = placed.ok_or(Error::NoWitnessInHorizon { horizon })?;
            events.push(Event { r, s, kind, n });
        }
    }
    let fill = |l: &Layout<'_>| least_fill(spec, &l.pat).ok_or_else(|| Error::violated("allowed", "branch does not extend"));
    Ok(BranchPair {
        a,
        b,
        x: fill(&x)?,
        y: fill(&y)?,
        events,
    })
}

/// Check the stored events against the points.
pub fn replay_events(pair: &BranchPair, window: usize, thresholds: &Thresholds) -> Result<()> {
    let (x, y) = pair.points();
    for e in &pair.events {
        let d = shift_distance(&x, &y, e.n, e.r, e.s, window)?;
        let ok = match e.kind {
            EventKind::Proximal => d.within(thresholds.p_min),
            EventKind::Distal => d.value() >= thresholds.eps_min,
        };
        if !ok {
            return Err(Error::violated(
                "branch-event",
                format!("{:?} event for ({}, {}) at n = {} gives {:?}", e.kind, e.r, e.s, e.n, d),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Rule;

    fn blocks() -> PointGen {
        PointGen::Programmatic {
            rule: Rule::Blocks { base: 4, factor: 2, on: 1, off: 0 },
            horizon: 1 << 16,
        }
    }

    #[test]
    fn equal_points_are_asymptotic() {
        let x = PointGen::periodic(&[0, 1, 1]);
        let r = scrambled_report(0, &x, &x.clone(), 1, 1, 64, 11, &Thresholds::default(), true).unwrap();
        assert_eq!(r.verdict, Verdict::AsymptoticEvidence);
        assert_eq!(r.max_tail.value(), 0.0);
        assert_eq!(r.recheck(), Some(true));
    }

    #[test]
    fn periodic_profile() {
        let zero = PointGen::periodic(&[0]);
        let alt = PointGen::periodic(&[0, 1]);
        let prof = orbit_distance_profile(&zero, &alt, 1, 1, 5, 8).unwrap();
        let got: Vec<Distance> = prof.iter().map(|p| p.1).collect();
        assert_eq!(got[0], Distance::Differ(1));
        assert_eq!(got[1], Distance::Differ(0));
        assert_eq!(got[2], Distance::Differ(1));
    }

    #[test]
    fn block_pair_is_scrambled() {
        let th = Thresholds { eps_min: 0.5, ..Thresholds::default() };
        let r = scrambled_report(0, &PointGen::periodic(&[0]), &blocks(), 1, 1, 4096, 11, &th, false).unwrap();
        assert!(r.min_tail.within(10));
        assert_eq!(r.max_tail.value(), 1.0);
        assert_eq!(r.verdict, Verdict::ScrambledEvidence);
        let r2 = scrambled_report(0, &PointGen::periodic(&[0]), &blocks(), 2, 2, 4096, 11, &th, false).unwrap();
        assert_eq!(r2.verdict, Verdict::ScrambledEvidence);
    }

    #[test]
    fn subsampling() {
        let x = PointGen::periodic(&[0]);
        for k in 1..=4 {
            assert!(subsample_identity(&x, &blocks(), k, 1000, 11).unwrap());
        }
    }

    #[test]
    fn symmetric_extremes() {
        let th = Thresholds::default();
        let x = PointGen::eventually_periodic(&[1, 0, 1], &[0, 0, 1]);
        let a = scrambled_report(0, &x, &blocks(), 1, 2, 300, 11, &th, false).unwrap();
        let b = scrambled_report(0, &blocks(), &x, 2, 1, 300, 11, &th, false).unwrap();
        assert_eq!((a.min_tail, a.max_tail), (b.min_tail, b.max_tail));
    }
}

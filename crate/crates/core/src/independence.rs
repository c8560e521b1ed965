//! Independence sets for tuples of cylinder unions.
//!
//! `J` is an independence set for `(A_1, ..., A_k)` when every selector
//! `s: J -> {0..k}` is realized by a point with `T^j x ∈ A_{s(j)}`. Selectors
//! are 0-based and enumerated in odometer order, last coordinate fastest.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::density::{density_bounds, DensityReport};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::solver::{self, Window};
use crate::subshift::{enumerate_pattern, SubshiftSpec};
use crate::word::{CylinderUnion, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelectorWitness {
    pub selector: Vec<usize>,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndependenceCertificate {
    pub tuple: Vec<CylinderUnion>,
    /// Points are additionally required to start in this set.
    pub within: Option<CylinderUnion>,
    pub j: Vec<usize>,
    pub witnesses: Vec<SelectorWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum IndependenceOutcome {
    Certified(IndependenceCertificate),
    /// The first selector, in odometer order, with no realizing point.
    Refuted { selector: Vec<usize> },
}

impl IndependenceOutcome {
    pub fn certificate(self) -> Option<IndependenceCertificate> {
        match self {
            IndependenceOutcome::Certified(c) => Some(c),
            IndependenceOutcome::Refuted { .. } => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, IndependenceOutcome::Certified(_))
    }
}

pub(crate) fn normalize(j: &[usize]) -> Vec<usize> {
    let mut j = j.to_vec();
    j.sort_unstable();
    j.dedup();
    j
}

fn selector_count(k: usize, size: usize, limits: &Limits) -> Result<usize> {
    match k.checked_pow(size as u32) {
        Some(c) if c <= limits.max_selectors => Ok(c),
        other => Err(Error::CapExceeded {
            what: "selectors",
            limit: limits.max_selectors,
            requested: other.unwrap_or(usize::MAX),
        }),
    }
}

/// Odometer decoding of selector number `idx`.
pub fn selector_at(k: usize, size: usize, mut idx: usize) -> Vec<usize> {
    let mut s = vec![0; size];
    for slot in s.iter_mut().rev() {
        *slot = idx % k;
        idx /= k;
    }
    s
}

fn windows_for<'a>(
    tuple: &'a [CylinderUnion],
    within: Option<&'a CylinderUnion>,
    j: &[usize],
    selector: &[usize],
) -> Vec<Window<'a>> {
    let mut w: Vec<Window<'a>> = j
        .iter()
        .zip(selector)
        .map(|(&t, &s)| Window::new(t, tuple[s].words()))
        .collect();
    if let Some(a) = within {
        w.push(Window::new(0, a.words()));
    }
    w
}

/// Certify `J` for `tuple`, or return the first unrealizable selector.
pub fn independence_check(
    spec: &SubshiftSpec,
    tuple: &[CylinderUnion],
    j: &[usize],
    within: Option<&CylinderUnion>,
    limits: &Limits,
) -> Result<IndependenceOutcome> {
    let k = tuple.len();
    if k < 2 {
        return Err(Error::precondition(format!("need at least 2 sets, got {k}")));
    }
    let j = normalize(j);
    let count = selector_count(k, j.len(), limits)?;
    let mut witnesses = Vec::with_capacity(count);
    for idx in 0..count {
        let selector = selector_at(k, j.len(), idx);
        let windows = windows_for(tuple, within, &j, &selector);
        match solver::solve(spec, &windows) {
            Some(word) => witnesses.push(SelectorWitness { selector, word }),
            None => return Ok(IndependenceOutcome::Refuted { selector }),
        }
    }
    Ok(IndependenceOutcome::Certified(IndependenceCertificate {
        tuple: tuple.to_vec(),
        within: within.cloned(),
        j,
        witnesses,
    }))
}

impl IndependenceCertificate {
    /// Replay every witness: selector order, allowedness and window matches.
    pub fn replay(&self, spec: &SubshiftSpec, limits: &Limits) -> Result<()> {
        let k = self.tuple.len();
        if k < 2 {
            return Err(Error::violated("independence", "tuple has fewer than 2 sets"));
        }
        if normalize(&self.j) != self.j {
            return Err(Error::violated("independence", "J is not sorted and distinct"));
        }
        let count = selector_count(k, self.j.len(), limits)?;
        if self.witnesses.len() != count {
            return Err(Error::violated(
                "independence",
                format!("{} witnesses for {count} selectors", self.witnesses.len()),
            ));
        }
        for (idx, w) in self.witnesses.iter().enumerate() {
            if w.selector != selector_at(k, self.j.len(), idx) {
                return Err(Error::violated("independence", format!("selector {idx} out of order")));
            }
            let windows = windows_for(&self.tuple, self.within.as_ref(), &self.j, &w.selector);
            if !spec.is_allowed(&w.word) || !solver::satisfies(&w.word, &windows) {
                return Err(Error::violated(
                    "independence",
                    format!("witness for selector {:?} does not replay", w.selector),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Extension {
    pub cert: IndependenceCertificate,
    pub density: DensityReport,
    pub horizon: usize,
}

/// Grow `seed` greedily inside `[0, horizon]`, smallest candidate first,
/// until `target` elements or the horizon is exhausted.
///
/// A candidate that fails once fails for every larger `J`, so one upward
/// pass is the whole greedy search.
pub fn independence_extend(
    spec: &SubshiftSpec,
    tuple: &[CylinderUnion],
    seed: &[usize],
    horizon: usize,
    target: usize,
    within: Option<&CylinderUnion>,
    limits: &Limits,
) -> Result<Extension> {
    let mut j = normalize(seed);
    if j.iter().any(|&t| t > horizon) {
        return Err(Error::precondition("seed lies past the horizon"));
    }
    let mut cert = match independence_check(spec, tuple, &j, within, limits)? {
        IndependenceOutcome::Certified(c) => c,
        IndependenceOutcome::Refuted { .. } => {
            return Err(Error::precondition("seed J is not an independence set"))
        }
    };
    let mut c = 0;
    while j.len() < target && c <= horizon {
        if j.binary_search(&c).is_err() {
            let mut cand = j.clone();
            cand.push(c);
            cand.sort_unstable();
            if let IndependenceOutcome::Certified(next) = independence_check(spec, tuple, &cand, within, limits)? {
                j = cand;
                cert = next;
            }
        }
        c += 1;
    }
    let density = density_bounds(&j, horizon + 1, horizon.max(1))?;
    Ok(Extension {
        cert,
        density,
        horizon,
    })
}

/// Does `cover` contain every allowed point of `[w]`?
fn covers(spec: &SubshiftSpec, w: &Word, cover: &CylinderUnion, limits: &Limits) -> Result<bool> {
    let len = w.len().max(cover.max_len());
    let mut pat: Vec<Option<u8>> = w.iter().map(|&a| Some(a)).collect();
    pat.resize(len, None);
    let exts = enumerate_pattern(spec, &pat, limits.max_words)?;
    Ok(exts
        .iter()
        .all(|e| cover.words().iter().any(|c| c.occurs_at(e, 0))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Split {
    /// 1 for the first half, 2 for the second.
    pub chosen: u8,
    pub tuple: Vec<CylinderUnion>,
    pub cert: IndependenceCertificate,
    /// Whether `|J'| >= ceil(|J| / 2)`.
    pub half_bound_met: bool,
}

fn subsets_of_size(j: &[usize], size: usize) -> Vec<Vec<usize>> {
    let n = j.len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size == 0 || size > n {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| j[i]).collect());
        let mut p = size;
        while p > 0 && idx[p - 1] == n - size + p - 1 {
            p -= 1;
        }
        if p == 0 {
            return out;
        }
        idx[p - 1] += 1;
        for q in p..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Replace `tuple[index]` by one of `halves` and keep independence on as much
/// of `J` as possible.
pub fn split_tuple(
    spec: &SubshiftSpec,
    tuple: &[CylinderUnion],
    index: usize,
    halves: (&CylinderUnion, &CylinderUnion),
    j: &[usize],
    within: Option<&CylinderUnion>,
    limits: &Limits,
) -> Result<Split> {
    if index >= tuple.len() {
        return Err(Error::InvalidSplit(format!("index {index} out of range")));
    }
    let j = normalize(j);
    if j.is_empty() {
        return Err(Error::InvalidSplit("J must be nonempty".into()));
    }
    let whole = halves.0.union(halves.1);
    for w in spec.restrict(&tuple[index]).words() {
        if !covers(spec, w, &whole, limits)? {
            return Err(Error::InvalidSplit(format!("halves do not cover cylinder {:?}", &w[..])));
        }
    }
    if !independence_check(spec, tuple, &j, within, limits)?.is_certified() {
        return Err(Error::InvalidSplit("J is not certified for the tuple".into()));
    }
    let with_half = |h: &CylinderUnion| {
        let mut t = tuple.to_vec();
        t[index] = h.clone();
        t
    };
    let candidates = [(1u8, with_half(halves.0)), (2u8, with_half(halves.1))];
    let need = j.len().div_ceil(2);
    // Size |J| comes first, so both halves are tried on the full J before any subset.
    for size in (1..=j.len()).rev() {
        for sub in subsets_of_size(&j, size) {
            for (chosen, t) in &candidates {
                if let IndependenceOutcome::Certified(cert) = independence_check(spec, t, &sub, within, limits)? {
                    return Ok(Split {
                        chosen: *chosen,
                        tuple: t.clone(),
                        cert,
                        half_bound_met: size >= need,
                    });
                }
            }
        }
    }
    Err(Error::InvalidSplit("neither half certifies a nonempty J'".into()))
}

//! Δ-transitivity, Δ-weak mixing, `A_m` membership, spread witnesses and
//! multi-transitive points of the full shift.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hitting::hitting_witness;
use crate::independence::{independence_check, IndependenceCertificate, IndependenceOutcome, SelectorWitness, selector_at};
use crate::limits::Limits;
use crate::solver::{self, Window};
use crate::subshift::{language, SubshiftSpec};
use crate::word::{CylinderUnion, Word};

/// The set a property is relative to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relative {
    Whole,
    /// Points starting in this union.
    Cylinders(CylinderUnion),
    /// A subsystem on the same alphabet, contained in the ambient SFT.
    SubShift(SubshiftSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RelativeTag {
    Whole,
    Cylinders(CylinderUnion),
    SubShift(String),
}

impl Relative {
    pub fn tag(&self) -> RelativeTag {
        match self {
            Relative::Whole => RelativeTag::Whole,
            Relative::Cylinders(c) => RelativeTag::Cylinders(c.clone()),
            Relative::SubShift(s) => RelativeTag::SubShift(s.name().into()),
        }
    }

    /// The SFT whose points are searched, and the extra constraint at 0.
    fn resolve<'a>(&'a self, ambient: &'a SubshiftSpec) -> Result<(&'a SubshiftSpec, Option<&'a CylinderUnion>)> {
        match self {
            Relative::Whole => Ok((ambient, None)),
            Relative::Cylinders(c) => Ok((ambient, Some(c))),
            Relative::SubShift(s) => {
                if !ambient.contains_subshift(s) {
                    return Err(Error::precondition(format!(
                        "'{}' is not a subsystem of '{}'",
                        s.name(),
                        ambient.name()
                    )));
                }
                Ok((s, None))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CertificateKind {
    DeltaTransitiveSystem,
    DeltaTransitiveSet,
    DeltaWmSet,
    AmMembership,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::DeltaTransitiveSystem => "delta_transitive_system",
            CertificateKind::DeltaTransitiveSet => "delta_transitive_set",
            CertificateKind::DeltaWmSet => "delta_wm_set",
            CertificateKind::AmMembership => "a_m_membership",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaCertificate {
    pub kind: CertificateKind,
    pub d: usize,
    pub sets: Vec<CylinderUnion>,
    pub relative: RelativeTag,
    pub n: usize,
    pub horizon: usize,
    /// One entry per selector; a single empty selector for transitivity.
    pub witnesses: Vec<SelectorWitness>,
    pub independence: Option<IndependenceCertificate>,
    /// The cover `W_1..W_k` for `A_m` membership.
    pub cover: Option<Vec<Word>>,
}

fn need_d(us: &[CylinderUnion]) -> Result<()> {
    if us.len() < 2 {
        return Err(Error::precondition(format!("need d >= 2 sets, got {}", us.len())));
    }
    Ok(())
}

fn need_nonempty(spec: &SubshiftSpec, u: &CylinderUnion, within: Option<&CylinderUnion>) -> Result<()> {
    let ok = match within {
        None => spec.union_is_nonempty(u),
        Some(a) => spec.union_is_nonempty(&u.intersect(a)),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::EmptyOpenSet)
    }
}

/// Least `n` in `N(U_1, ..., U_d)` up to the horizon.
pub fn delta_transitive_certificate(spec: &SubshiftSpec, us: &[CylinderUnion], horizon: usize) -> Result<DeltaCertificate> {
    delta_transitive_impl(spec, &Relative::Whole, us, horizon, CertificateKind::DeltaTransitiveSystem)
}

/// Least `n` in `N(U_1 ∩ A, U_2, ..., U_d)` up to the horizon.
pub fn delta_transitive_set_certificate(
    spec: &SubshiftSpec,
    a: &Relative,
    us: &[CylinderUnion],
    horizon: usize,
) -> Result<DeltaCertificate> {
    delta_transitive_impl(spec, a, us, horizon, CertificateKind::DeltaTransitiveSet)
}

fn delta_transitive_impl(
    spec: &SubshiftSpec,
    a: &Relative,
    us: &[CylinderUnion],
    horizon: usize,
    kind: CertificateKind,
) -> Result<DeltaCertificate> {
    need_d(us)?;
    let (space, within) = a.resolve(spec)?;
    for u in us {
        need_nonempty(space, u, None)?;
    }
    let mut sets = us.to_vec();
    if let Some(w) = within {
        sets[0] = sets[0].intersect(w);
        need_nonempty(space, &sets[0], None)?;
    }
    for n in 1..=horizon {
        if let Some(word) = hitting_witness(space, &sets, n) {
            return Ok(DeltaCertificate {
                kind,
                d: us.len(),
                sets: us.to_vec(),
                relative: a.tag(),
                n,
                horizon,
                witnesses: vec![SelectorWitness {
                    selector: Vec::new(),
                    word,
                }],
                independence: None,
                cover: None,
            });
        }
    }
    Err(Error::NoWitnessInHorizon { horizon })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemReport {
    pub d: usize,
    pub max_len: usize,
    pub horizon: usize,
    pub tuples: usize,
    /// Largest certified `n` over the grid.
    pub max_n: usize,
    /// Tuples with no witness up to the horizon.
    pub failures: Vec<Vec<Word>>,
}

/// Certify every `d`-tuple of allowed single cylinders with words of length
/// `1..=max_len`.
pub fn delta_transitive_system(spec: &SubshiftSpec, d: usize, max_len: usize, horizon: usize, limits: &Limits) -> Result<SystemReport> {
    if d < 2 {
        return Err(Error::precondition("need d >= 2"));
    }
    let mut words = Vec::new();
    for len in 1..=max_len {
        words.extend(language(spec, len, limits)?);
    }
    let total = words.len().checked_pow(d as u32).unwrap_or(usize::MAX);
    if total > limits.max_words {
        return Err(Error::CapExceeded {
            what: "tuple grid",
            limit: limits.max_words,
            requested: total,
        });
    }
    let mut report = SystemReport {
        d,
        max_len,
        horizon,
        tuples: total,
        max_n: 0,
        failures: Vec::new(),
    };
    for idx in 0..total {
        let pick = selector_at(words.len(), d, idx);
        let us: Vec<CylinderUnion> = pick.iter().map(|&i| CylinderUnion::single(words[i].clone())).collect();
        match delta_transitive_certificate(spec, &us, horizon) {
            Ok(c) => report.max_n = report.max_n.max(c.n),
            Err(Error::NoWitnessInHorizon { .. }) => {
                report.failures.push(pick.iter().map(|&i| words[i].clone()).collect())
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Least `n` with `{0, n, ..., (d-1)n}` independent for `(U_1..U_d)` with
/// respect to `A`.
pub fn delta_wm_certificate(
    spec: &SubshiftSpec,
    a: &Relative,
    us: &[CylinderUnion],
    horizon: usize,
    limits: &Limits,
) -> Result<DeltaCertificate> {
    need_d(us)?;
    let d = us.len();
    let (space, within) = a.resolve(spec)?;
    for u in us {
        need_nonempty(space, u, within)?;
    }
    let count = d.checked_pow(d as u32).unwrap_or(usize::MAX);
    if count > limits.max_selectors {
        return Err(Error::CapExceeded {
            what: "selectors",
            limit: limits.max_selectors,
            requested: count,
        });
    }
    for n in 1..=horizon {
        let j: Vec<usize> = (0..d).map(|i| i * n).collect();
        if let IndependenceOutcome::Certified(cert) = independence_check(space, us, &j, within, limits)? {
            return Ok(DeltaCertificate {
                kind: CertificateKind::DeltaWmSet,
                d,
                sets: us.to_vec(),
                relative: a.tag(),
                n,
                horizon,
                witnesses: cert.witnesses.clone(),
                independence: Some(cert),
                cover: None,
            });
        }
    }
    Err(Error::NoWitnessInHorizon { horizon })
}

/// Cylinder length `ceil(log2 m) + 1`, the shortest with diameter `< 1/m`.
pub fn cover_length(m: usize) -> usize {
    let mut l = 0;
    while (1usize << l) < m {
        l += 1;
    }
    l + 1
}

/// Condition (3) of `A_m` for `E = e` with the cover by allowed cylinders of
/// length [`cover_length`]`(m)` meeting `e`.
pub fn a_m_membership(spec: &SubshiftSpec, e: &CylinderUnion, m: usize, horizon: usize, limits: &Limits) -> Result<DeltaCertificate> {
    if m == 0 {
        return Err(Error::precondition("m must be at least 1"));
    }
    let e = spec.restrict(e);
    if e.len() < 2 {
        return Err(Error::precondition("E must contain at least two allowed cylinders"));
    }
    let len = cover_length(m);
    let cover: Vec<Word> = language(spec, len, limits)?
        .into_iter()
        .filter(|w| e.words().iter().any(|c| c.cylinders_meet(w)))
        .collect();
    let k = cover.len();
    let count = match k.checked_pow(k as u32) {
        Some(c) if c <= limits.max_selectors => c,
        other => {
            return Err(Error::CapExceeded {
                what: "selectors",
                limit: limits.max_selectors,
                requested: other.unwrap_or(usize::MAX),
            })
        }
    };
    let singles: Vec<Vec<Word>> = cover.iter().map(|w| vec![w.clone()]).collect();
    let first: Vec<Vec<Word>> = cover
        .iter()
        .map(|w| CylinderUnion::single(w.clone()).intersect(&e).words().to_vec())
        .collect();
    'n: for n in 1..=horizon {
        let mut witnesses = Vec::with_capacity(count);
        for idx in 0..count {
            let alpha = selector_at(k, k, idx);
            let windows: Vec<Window<'_>> = alpha
                .iter()
                .enumerate()
                .map(|(i, &a)| Window::new(i * n, if i == 0 { &first[a] } else { &singles[a] }))
                .collect();
            match solver::solve(spec, &windows) {
                Some(word) => witnesses.push(SelectorWitness { selector: alpha, word }),
                None => continue 'n,
            }
        }
        return Ok(DeltaCertificate {
            kind: CertificateKind::AmMembership,
            d: k,
            sets: vec![e.clone()],
            relative: RelativeTag::Cylinders(e),
            n,
            horizon,
            witnesses,
            independence: None,
            cover: Some(cover),
        });
    }
    Err(Error::NoWitnessInHorizon { horizon })
}

/// Replay an `A_m` certificate's selector witnesses.
pub fn replay_a_m(spec: &SubshiftSpec, cert: &DeltaCertificate) -> Result<()> {
    let bad = |msg: String| Error::violated("a_m_membership", msg);
    let cover = cert.cover.as_ref().ok_or_else(|| bad("missing cover".into()))?;
    let e = cert.sets.first().ok_or_else(|| bad("missing E".into()))?;
    let k = cover.len();
    if cert.witnesses.len() != k.pow(k as u32) {
        return Err(bad(format!("{} witnesses for {k}^{k} selectors", cert.witnesses.len())));
    }
    for (idx, w) in cert.witnesses.iter().enumerate() {
        if w.selector != selector_at(k, k, idx) || !spec.is_allowed(&w.word) || !e.matches_at(&w.word, 0) {
            return Err(bad(format!("selector {idx} does not replay")));
        }
        for (i, &a) in w.selector.iter().enumerate() {
            if !cover[a].occurs_at(&w.word, i * cert.n) {
                return Err(bad(format!("selector {idx} misses W_{a} at {}", i * cert.n)));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpreadWitness {
    /// `delta = 2^-p`: base points are words of length `p`.
    pub p: usize,
    /// `epsilon = 2^-q`: targets are words of length `q`.
    pub q: usize,
    pub d: usize,
    pub k: usize,
    pub zs: Vec<Word>,
    /// `targets[i][j - 1] = g_j(z_i)`.
    pub targets: Vec<Vec<Word>>,
    pub domain: RelativeTag,
}

/// Least `k > 2^q` with `T^{jk}[z_i] ∩ E ⊆ [g_j(z_i)]` for all `i` and
/// `j = 1..=d`, checked exactly.
pub fn spread_witness(
    spec: &SubshiftSpec,
    domain: &Relative,
    zs: &[Word],
    targets: &[Vec<Word>],
    horizon: usize,
    limits: &Limits,
) -> Result<SpreadWitness> {
    let (space, within) = domain.resolve(spec)?;
    let p = zs.first().map(|z| z.len()).ok_or_else(|| Error::precondition("no base points"))?;
    if zs.iter().any(|z| z.len() != p) || targets.len() != zs.len() {
        return Err(Error::precondition("base points must share one length and each need targets"));
    }
    let d = targets[0].len();
    let q = targets[0].first().map(|t| t.len()).unwrap_or(0);
    if d == 0 || q == 0 || targets.iter().any(|t| t.len() != d || t.iter().any(|g| g.len() != q)) {
        return Err(Error::precondition("targets must form a full table of equal-length words"));
    }
    for z in zs {
        let zc = CylinderUnion::single(z.clone());
        need_nonempty(space, &zc, within).map_err(|_| Error::precondition("base point outside E"))?;
    }
    for g in targets.iter().flatten() {
        if !space.is_allowed(g) {
            return Err(Error::precondition("target outside the language of E"));
        }
    }
    let others = language(space, q, limits)?;
    let start = (1usize << q.min(62)) + 1;
    'k: for k in start..=horizon {
        for (z, gs) in zs.iter().zip(targets) {
            let zw = [z.clone()];
            for (j, g) in gs.iter().enumerate() {
                let off = (j + 1) * k;
                for t in others.iter().filter(|t| *t != g) {
                    let tw = [t.clone()];
                    let mut windows = vec![Window::new(0, &zw), Window::new(off, &tw)];
                    if let Some(a) = within {
                        windows.push(Window::new(0, a.words()));
                    }
                    if solver::solve(space, &windows).is_some() {
                        continue 'k;
                    }
                }
            }
        }
        return Ok(SpreadWitness {
            p,
            q,
            d,
            k,
            zs: zs.to_vec(),
            targets: targets.to_vec(),
            domain: domain.tag(),
        });
    }
    Err(Error::NoWitnessInHorizon { horizon })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Requirement {
    pub d: usize,
    pub words: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransitivePoint {
    pub prefix: Word,
    /// `(requirement index, n)`: `words[j-1]` sits at `j * n` for `j = 1..=d`.
    pub schedule: Vec<(usize, usize)>,
}

/// A prefix of a point of the full shift whose diagonal orbit visits each
/// required product cylinder: for requirement `(d; w_1..w_d)` some `n` has
/// `w_j` at offset `j * n`. Each `n` is the least one placing every window at
/// or past the current frontier without self-conflict.
pub fn delta_transitive_point(alphabet_size: usize, requirements: &[Requirement], budget: usize) -> Result<TransitivePoint> {
    if alphabet_size == 0 {
        return Err(Error::precondition("alphabet must be nonempty"));
    }
    let mut pat: Vec<Option<u8>> = Vec::new();
    let mut schedule = Vec::new();
    for (ri, req) in requirements.iter().enumerate() {
        if req.d == 0 || req.words.len() != req.d {
            return Err(Error::precondition(format!("requirement {ri} needs exactly d words")));
        }
        if req.words.iter().flat_map(|w| w.iter()).any(|&a| a as usize >= alphabet_size) {
            return Err(Error::precondition(format!("requirement {ri} uses an unknown symbol")));
        }
        let frontier = pat.len();
        let mut n = frontier.max(1);
        let placed = loop {
            let end = req
                .words
                .iter()
                .enumerate()
                .map(|(j, w)| (j + 1) * n + w.len())
                .max()
                .unwrap_or(0);
            if end > budget {
                return Err(Error::BudgetExceeded { budget, needed: end });
            }
            let windows: Vec<(usize, &[u8])> = req.words.iter().enumerate().map(|(j, w)| ((j + 1) * n, &w[..])).collect();
            if let Some(local) = solver::pattern_of(&windows) {
                break local;
            }
            n += 1;
        };
        if pat.len() < placed.len() {
            pat.resize(placed.len(), None);
        }
        for (slot, a) in pat.iter_mut().zip(placed) {
            if a.is_some() {
                *slot = a;
            }
        }
        schedule.push((ri, n));
    }
    Ok(TransitivePoint {
        prefix: Word::new(pat.into_iter().map(|a| a.unwrap_or(0)).collect()),
        schedule,
    })
}

/// Replay a schedule against its prefix.
pub fn replay_transitive_point(requirements: &[Requirement], point: &TransitivePoint) -> bool {
    point.schedule.len() == requirements.len()
        && point.schedule.iter().all(|&(ri, n)| {
            requirements.get(ri).is_some_and(|req| {
                req.words
                    .iter()
                    .enumerate()
                    .all(|(j, w)| w.occurs_at(&point.prefix, (j + 1) * n))
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyl(ws: &[&[u8]]) -> CylinderUnion {
        CylinderUnion::from_symbols(ws)
    }

    #[test]
    fn transitive_examples() {
        let full = SubshiftSpec::full_shift(2);
        let c = delta_transitive_certificate(&full, &[cyl(&[&[0]]), cyl(&[&[1]]), cyl(&[&[0]])], 8).unwrap();
        assert_eq!(c.n, 1);
        let gm = SubshiftSpec::golden_mean();
        let one = cyl(&[&[1]]);
        let c = delta_transitive_certificate(&gm, &[one.clone(), one.clone(), one], 8).unwrap();
        assert_eq!(c.n, 2);
        let err = delta_transitive_certificate(&SubshiftSpec::cycle(2), &[cyl(&[&[0]]), cyl(&[&[0]]), cyl(&[&[1]])], 8)
            .unwrap_err();
        assert_eq!(err.name(), "NoWitnessInHorizon");
    }

    #[test]
    fn wm_examples() {
        let lim = Limits::default();
        let pair = [cyl(&[&[0]]), cyl(&[&[1]])];
        let c = delta_wm_certificate(&SubshiftSpec::full_shift(2), &Relative::Whole, &pair, 8, &lim).unwrap();
        assert_eq!(c.n, 1);
        let c = delta_wm_certificate(&SubshiftSpec::golden_mean(), &Relative::Whole, &pair, 8, &lim).unwrap();
        assert_eq!(c.n, 2);
        let triple = [cyl(&[&[0]]), cyl(&[&[1]]), cyl(&[&[0]])];
        let c = delta_wm_certificate(&SubshiftSpec::full_shift(2), &Relative::Whole, &triple, 8, &lim).unwrap();
        assert_eq!((c.n, c.witnesses.len()), (1, 27));
    }

    #[test]
    fn wm_relative_to_subshift() {
        let lim = Limits::default();
        let pair = [cyl(&[&[0]]), cyl(&[&[1]])];
        let a = Relative::SubShift(SubshiftSpec::golden_mean());
        let c = delta_wm_certificate(&SubshiftSpec::full_shift(2), &a, &pair, 8, &lim).unwrap();
        assert_eq!(c.n, 2);
        let bad = Relative::SubShift(SubshiftSpec::full_shift(2));
        assert!(delta_wm_certificate(&SubshiftSpec::golden_mean(), &bad, &pair, 8, &lim).is_err());
    }

    #[test]
    fn a_m_examples() {
        let lim = Limits::default();
        let e = cyl(&[&[0], &[1]]);
        let full = SubshiftSpec::full_shift(2);
        let c = a_m_membership(&full, &e, 1, 16, &lim).unwrap();
        assert_eq!((c.n, c.witnesses.len()), (1, 4));
        replay_a_m(&full, &c).unwrap();
        let c = a_m_membership(&full, &e, 2, 16, &lim).unwrap();
        assert_eq!(c.cover.as_ref().unwrap().len(), 4);
        assert_eq!((c.n, c.witnesses.len()), (2, 256));
        replay_a_m(&full, &c).unwrap();
        let c = a_m_membership(&SubshiftSpec::golden_mean(), &e, 1, 16, &lim).unwrap();
        assert_eq!(c.n, 2);
    }

    #[test]
    fn cover_lengths() {
        assert_eq!(cover_length(1), 1);
        assert_eq!(cover_length(2), 2);
        assert_eq!(cover_length(3), 3);
        assert_eq!(cover_length(4), 3);
    }

    #[test]
    fn spread_needs_constrained_domain() {
        let lim = Limits::default();
        let zero = Word::from(&[0u8][..]);
        let fixed = SubshiftSpec::from_matrix("fixed", alloc::vec!['0'], alloc::vec![alloc::vec![true]]).unwrap();
        let s = spread_witness(&fixed, &Relative::Whole, core::slice::from_ref(&zero), &[alloc::vec![zero.clone()]], 40, &lim).unwrap();
        assert_eq!(s.k, 3);
        let e = Relative::Cylinders(cyl(&[&[0]]));
        let err = spread_witness(&SubshiftSpec::full_shift(2), &e, core::slice::from_ref(&zero), &[alloc::vec![zero.clone()]], 40, &lim).unwrap_err();
        assert_eq!(err.name(), "NoWitnessInHorizon");
    }

    #[test]
    fn transitive_point_examples() {
        let w = |s: &[u8]| Word::from(s);
        let reqs = [Requirement { d: 3, words: alloc::vec![w(&[0]), w(&[1]), w(&[0])] }];
        let p = delta_transitive_point(2, &reqs, 100).unwrap();
        assert!(p.schedule[0].1 <= 33);
        assert!(replay_transitive_point(&reqs, &p));
        let empty = delta_transitive_point(2, &[], 10).unwrap();
        assert!(empty.prefix.is_empty() && empty.schedule.is_empty());
        let reqs = [
            Requirement { d: 2, words: alloc::vec![w(&[0, 1]), w(&[1, 0])] },
            Requirement { d: 2, words: alloc::vec![w(&[1, 1]), w(&[1, 1])] },
        ];
        let p = delta_transitive_point(2, &reqs, 100).unwrap();
        assert!(replay_transitive_point(&reqs, &p));
        assert_eq!(delta_transitive_point(2, &reqs, 8).unwrap_err().name(), "BudgetExceeded");
    }
}

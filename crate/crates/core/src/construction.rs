//! Finite-depth rendering of the inductive construction behind Theorem B.
//!
//! Level 1 is the seed family. Level `k` is built from level `k - 1`: an
//! arithmetic progression `{0, n_k, ..., (k-1) n_k}` independent for the
//! previous family gives, for every `σ = (σ_1..σ_k)`, the set `I_σ` of words
//! with `A_{σ_j}` at `(j-1) n_k`. Each `I_σ` is then halved down to one word,
//! keeping an independence set for the whole family at each step.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use crate::density::find_ap;
use crate::entropy::sft_entropy;
use crate::error::{Error, Result};
use crate::independence::{
    independence_check, independence_extend, selector_at, split_tuple, IndependenceCertificate, IndependenceOutcome,
};
use crate::limits::Limits;
use crate::subshift::{enumerate_pattern, SubshiftSpec};
use crate::word::{CylinderUnion, Word};

/// Entropy below this is treated as zero.
pub const ENTROPY_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TreeSet {
    /// Indices into the previous level, one per progression term.
    pub parents: Vec<usize>,
    pub word: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ApSource {
    /// Found by `find_ap` inside the previous level's `J`.
    Progression,
    /// `find_ap` gave nothing usable; the step was searched for directly.
    DirectSearch,
}

impl ApSource {
    pub fn name(self) -> &'static str {
        match self {
            ApSource::Progression => "progression",
            ApSource::DirectSearch => "direct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Level {
    pub k: usize,
    /// `n_k`; zero at level 1.
    pub step: usize,
    /// Start of the progression inside the previous `J`.
    pub ap_start: usize,
    pub ap_source: ApSource,
    /// Digest of the independence certificate of `{0, n_k, ..}` for level `k - 1`.
    pub ap_digest: String,
    pub j: Vec<usize>,
    /// Digest of this level's independence certificate on `j`.
    pub digest: String,
    pub sets: Vec<TreeSet>,
}

impl Level {
    pub fn family(&self) -> Vec<CylinderUnion> {
        self.sets.iter().map(|s| CylinderUnion::single(s.word.clone())).collect()
    }

    /// The flat index `σ ∈ {0..n}^{k!}` of set `idx`.
    pub fn sigma(levels: &[Level], level: usize, idx: usize) -> Vec<usize> {
        if level == 0 {
            return vec![idx];
        }
        levels[level].sets[idx]
            .parents
            .iter()
            .flat_map(|&p| Level::sigma(levels, level - 1, p))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTree {
    pub spec: SubshiftSpec,
    pub depth: usize,
    pub horizon: usize,
    pub seeds: Vec<Word>,
    pub levels: Vec<Level>,
}

fn put(h: &mut Sha256, bytes: &[u8]) {
    h.update((bytes.len() as u64).to_le_bytes());
    h.update(bytes);
}

fn put_n(h: &mut Sha256, n: usize) {
    h.update((n as u64).to_le_bytes());
}

fn put_spec(h: &mut Sha256, spec: &SubshiftSpec) {
    put(h, spec.name().as_bytes());
    let syms: String = spec.symbols().iter().collect();
    put(h, syms.as_bytes());
    put_n(h, spec.block_len());
    for b in spec.blocks() {
        put(h, b);
    }
    for row in spec.transitions() {
        let bits: Vec<u8> = row.iter().map(|&e| e as u8).collect();
        put(h, &bits);
    }
}

fn put_cert(h: &mut Sha256, cert: &IndependenceCertificate) {
    put_n(h, cert.tuple.len());
    for u in &cert.tuple {
        put_n(h, u.len());
        for w in u.words() {
            put(h, w);
        }
    }
    put_n(h, cert.j.len());
    for &t in &cert.j {
        put_n(h, t);
    }
    for w in &cert.witnesses {
        let sel: Vec<u8> = w.selector.iter().flat_map(|&s| (s as u64).to_le_bytes()).collect();
        put(h, &sel);
        put(h, &w.word);
    }
}

/// sha256 over the spec, horizon, level data and the full certificate.
pub fn evidence_digest(spec: &SubshiftSpec, horizon: usize, tag: &str, extra: &[usize], cert: &IndependenceCertificate) -> String {
    let mut h = Sha256::new();
    put(&mut h, b"deltamix-evidence-1");
    put(&mut h, tag.as_bytes());
    put_spec(&mut h, spec);
    put_n(&mut h, horizon);
    for &e in extra {
        put_n(&mut h, e);
    }
    put_cert(&mut h, cert);
    hex::encode(h.finalize())
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Target `|J|` at level `k` of a depth-`depth` tree over `family` sets.
fn target_size(k: usize, depth: usize, family: usize, limits: &Limits) -> usize {
    let want = 2 * (k + 1);
    if k < depth {
        return want;
    }
    let mut t = 0;
    while family.checked_pow(t as u32 + 1).is_some_and(|c| c <= limits.max_selectors) && t < want {
        t += 1;
    }
    t.max(1)
}

fn certify(spec: &SubshiftSpec, family: &[CylinderUnion], j: &[usize], limits: &Limits) -> Result<Option<IndependenceCertificate>> {
    Ok(independence_check(spec, family, j, None, limits)?.certificate())
}

fn progression(step: usize, terms: usize) -> Vec<usize> {
    (0..terms).map(|i| i * step).collect()
}

fn grow(
    spec: &SubshiftSpec,
    family: &[CylinderUnion],
    seed: &[usize],
    horizon: usize,
    target: usize,
    limits: &Limits,
) -> Result<IndependenceCertificate> {
    let ext = independence_extend(spec, family, seed, horizon, target, None, limits)?;
    if ext.cert.j.len() < target {
        return Err(Error::NoWitnessInHorizon { horizon });
    }
    Ok(ext.cert)
}

/// Build a depth-`depth` construction tree over `seeds`.
pub fn theorem_b_construct(
    spec: &SubshiftSpec,
    seeds: &[Word],
    depth: usize,
    horizon: usize,
    limits: &Limits,
) -> Result<ConstructionTree> {
    if sft_entropy(spec, 1e-12)?.value < ENTROPY_FLOOR {
        return Err(Error::EntropyZero);
    }
    if depth == 0 || depth > limits.max_depth {
        return Err(Error::precondition(format!("depth must be in 1..={}", limits.max_depth)));
    }
    if seeds.len() < 2 {
        return Err(Error::precondition("need at least 2 seeds"));
    }
    let family_size = seeds
        .len()
        .checked_pow(factorial(depth) as u32)
        .unwrap_or(usize::MAX);
    if family_size > limits.max_family {
        return Err(Error::CapExceeded {
            what: "family size",
            limit: limits.max_family,
            requested: family_size,
        });
    }
    for (i, s) in seeds.iter().enumerate() {
        if s.is_empty() || !spec.is_allowed(s) {
            return Err(Error::precondition(format!("seed {i} is not an allowed word")));
        }
        if seeds[..i].iter().any(|t| t.cylinders_meet(s)) {
            return Err(Error::precondition("seeds must be pairwise disjoint"));
        }
    }

    let first: Vec<CylinderUnion> = seeds.iter().map(|s| CylinderUnion::single(s.clone())).collect();
    let cert = grow(spec, &first, &[], horizon, target_size(1, depth, first.len(), limits), limits)?;
    let mut levels = vec![Level {
        k: 1,
        step: 0,
        ap_start: 0,
        ap_source: ApSource::Progression,
        ap_digest: String::new(),
        digest: evidence_digest(spec, horizon, "level", &[1], &cert),
        j: cert.j,
        sets: seeds
            .iter()
            .enumerate()
            .map(|(i, s)| TreeSet {
                parents: vec![i],
                word: s.clone(),
            })
            .collect(),
    }];

    for k in 2..=depth {
        let prev = levels.last().expect("level 1 exists");
        let prev_family = prev.family();
        let (ap_start, step, ap_source, ap_cert) = choose_step(spec, &prev_family, &prev.j, k, horizon, limits)?;

        let lmax = prev.sets.iter().map(|s| s.word.len()).max().unwrap_or(1);
        let len = ((k - 1) * step + lmax).max(k + 1);
        let count = prev.sets.len().pow(k as u32);
        let mut parents_of = Vec::with_capacity(count);
        let mut family = Vec::with_capacity(count);
        for idx in 0..count {
            let parents = selector_at(prev.sets.len(), k, idx);
            let placed: Vec<(usize, &[u8])> = parents
                .iter()
                .enumerate()
                .map(|(j, &p)| (j * step, &prev.sets[p].word[..]))
                .collect();
            let mut pat = crate::solver::pattern_of(&placed).ok_or_else(|| {
                Error::violated("ap-independence", format!("selector {parents:?} has conflicting windows"))
            })?;
            pat.resize(len, None);
            let words = enumerate_pattern(spec, &pat, limits.max_words)?;
            if words.is_empty() {
                return Err(Error::violated("ap-independence", format!("selector {parents:?} is empty")));
            }
            family.push(CylinderUnion::new(words));
            parents_of.push(parents);
        }

        let target = target_size(k, depth, count, limits);
        let mut j = grow(spec, &family, &[], horizon, target, limits)?.j;
        for idx in 0..count {
            while family[idx].len() > 1 {
                let (h1, h2) = family[idx].halves();
                let split = split_tuple(spec, &family, idx, (&h1, &h2), &j, None, limits)?;
                family = split.tuple;
                j = split.cert.j;
                if j.len() < target {
                    j = grow(spec, &family, &j, horizon, target, limits)?.j;
                }
            }
        }
        let cert = certify(spec, &family, &j, limits)?
            .ok_or_else(|| Error::violated("independence", "refined family lost its independence set"))?;
        levels.push(Level {
            k,
            step,
            ap_start,
            ap_source,
            ap_digest: evidence_digest(spec, horizon, "ap", &[k, ap_start, step], &ap_cert),
            digest: evidence_digest(spec, horizon, "level", &[k], &cert),
            j,
            sets: parents_of
                .into_iter()
                .zip(family)
                .map(|(parents, u)| TreeSet {
                    parents,
                    word: u.words()[0].clone(),
                })
                .collect(),
        });
    }

    let tree = ConstructionTree {
        spec: spec.clone(),
        depth,
        horizon,
        seeds: seeds.to_vec(),
        levels,
    };
    verify_tree(&tree, limits)?;
    Ok(tree)
}

/// `(ap_start, n_k, source, certificate of {0, n_k, .., (k-1) n_k})`.
fn choose_step(
    spec: &SubshiftSpec,
    family: &[CylinderUnion],
    j: &[usize],
    k: usize,
    horizon: usize,
    limits: &Limits,
) -> Result<(usize, usize, ApSource, IndependenceCertificate)> {
    if let Some((a, n)) = find_ap(j, k)? {
        if let Some(cert) = certify(spec, family, &progression(n, k), limits)? {
            return Ok((a, n, ApSource::Progression, cert));
        }
    }
    for n in 1..=horizon / (k - 1) {
        if let Some(cert) = certify(spec, family, &progression(n, k), limits)? {
            return Ok((0, n, ApSource::DirectSearch, cert));
        }
    }
    Err(Error::NoWitnessInHorizon { horizon })
}

/// Replay every invariant of `tree`, naming the first one that fails.
///
/// Order: index-scheme, nesting, allowed, diameter, disjointness,
/// ap-independence, independence.
pub fn verify_tree(tree: &ConstructionTree, limits: &Limits) -> Result<()> {
    check_index_scheme(tree)?;
    for (li, level) in tree.levels.iter().enumerate().skip(1) {
        let prev = &tree.levels[li - 1];
        for (idx, set) in level.sets.iter().enumerate() {
            for (j, &p) in set.parents.iter().enumerate() {
                if !prev.sets[p].word.occurs_at(&set.word, j * level.step) {
                    return Err(Error::violated(
                        "nesting",
                        format!("level {} set {idx}: parent {p} not found at offset {}", level.k, j * level.step),
                    ));
                }
            }
        }
    }
    for level in &tree.levels {
        for (idx, set) in level.sets.iter().enumerate() {
            if !tree.spec.is_allowed(&set.word) {
                return Err(Error::violated("allowed", format!("level {} set {idx} is not an allowed word", level.k)));
            }
        }
    }
    for level in tree.levels.iter().skip(1) {
        for (idx, set) in level.sets.iter().enumerate() {
            if set.word.len() < level.k + 1 {
                return Err(Error::violated(
                    "diameter",
                    format!("level {} set {idx} has length {} < {}", level.k, set.word.len(), level.k + 1),
                ));
            }
        }
    }
    for level in &tree.levels {
        for (a, sa) in level.sets.iter().enumerate() {
            for (b, sb) in level.sets.iter().enumerate().skip(a + 1) {
                if sa.word.cylinders_meet(&sb.word) {
                    return Err(Error::violated("disjointness", format!("level {} sets {a} and {b} meet", level.k)));
                }
            }
        }
    }
    for (li, level) in tree.levels.iter().enumerate().skip(1) {
        let prev = tree.levels[li - 1].family();
        let cert = certify(&tree.spec, &prev, &progression(level.step, level.k), limits)?;
        let ok = cert.is_some_and(|c| {
            evidence_digest(&tree.spec, tree.horizon, "ap", &[level.k, level.ap_start, level.step], &c) == level.ap_digest
        });
        if !ok {
            return Err(Error::violated("ap-independence", format!("level {} progression does not replay", level.k)));
        }
    }
    for level in &tree.levels {
        let bad = || Error::violated("independence", format!("level {} evidence does not replay", level.k));
        if level.j.is_empty() || level.j.iter().any(|&t| t > tree.horizon) || !level.j.windows(2).all(|p| p[0] < p[1]) {
            return Err(bad());
        }
        let cert = match independence_check(&tree.spec, &level.family(), &level.j, None, limits) {
            Ok(IndependenceOutcome::Certified(c)) => c,
            Ok(IndependenceOutcome::Refuted { .. }) | Err(Error::CapExceeded { .. }) => return Err(bad()),
            Err(e) => return Err(e),
        };
        if evidence_digest(&tree.spec, tree.horizon, "level", &[level.k], &cert) != level.digest {
            return Err(bad());
        }
    }
    Ok(())
}

fn check_index_scheme(tree: &ConstructionTree) -> Result<()> {
    let bad = |msg: String| Err(Error::violated("index-scheme", msg));
    let n = tree.seeds.len();
    if n < 2 || tree.depth == 0 || tree.levels.len() != tree.depth {
        return bad(format!("{} levels for depth {}", tree.levels.len(), tree.depth));
    }
    for (li, level) in tree.levels.iter().enumerate() {
        let k = li + 1;
        if level.k != k {
            return bad(format!("level {li} is labelled {}", level.k));
        }
        let expected = n.checked_pow(factorial(k) as u32);
        if expected != Some(level.sets.len()) {
            return bad(format!("level {k} has {} sets", level.sets.len()));
        }
        if k == 1 {
            if level.step != 0 || level.ap_start != 0 || !level.ap_digest.is_empty() {
                return bad("level 1 carries step data".into());
            }
            for (i, s) in level.sets.iter().enumerate() {
                if s.parents != [i] || s.word != tree.seeds[i] {
                    return bad(format!("level 1 set {i} is not seed {i}"));
                }
            }
            continue;
        }
        if level.step == 0 {
            return bad(format!("level {k} has step 0"));
        }
        let prev = tree.levels[li - 1].sets.len();
        for (idx, s) in level.sets.iter().enumerate() {
            if s.parents != selector_at(prev, k, idx) {
                return bad(format!("level {k} set {idx} has parents {:?}", s.parents));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[u8]) -> Word {
        Word::from(s)
    }

    #[test]
    fn zero_entropy_is_refused() {
        let err = theorem_b_construct(&SubshiftSpec::cycle(2), &[w(&[0]), w(&[1])], 2, 64, &Limits::default()).unwrap_err();
        assert_eq!(err, Error::EntropyZero);
    }

    #[test]
    fn full_shift_depth_two() {
        let lim = Limits::default();
        let tree = theorem_b_construct(&SubshiftSpec::full_shift(2), &[w(&[0]), w(&[1])], 2, 64, &lim).unwrap();
        assert_eq!(tree.levels[0].j, vec![0, 1, 2, 3]);
        assert_eq!(tree.levels[1].step, 1);
        assert_eq!(tree.levels[1].sets.len(), 4);
        verify_tree(&tree, &lim).unwrap();
    }

    #[test]
    fn golden_mean_depth_two() {
        let lim = Limits::default();
        let tree = theorem_b_construct(&SubshiftSpec::golden_mean(), &[w(&[0]), w(&[1, 0])], 2, 64, &lim).unwrap();
        assert_eq!(tree.levels[0].j, vec![0, 2, 4, 6]);
        assert!(tree.levels[1].step >= 2);
    }

    #[test]
    fn tampering_is_named() {
        let lim = Limits::default();
        let mut tree = theorem_b_construct(&SubshiftSpec::full_shift(2), &[w(&[0]), w(&[1])], 2, 64, &lim).unwrap();
        let mut word = tree.levels[1].sets[0].word.clone().into_inner();
        word[0] ^= 1;
        tree.levels[1].sets[0].word = Word::new(word);
        let err = verify_tree(&tree, &lim).unwrap_err();
        assert!(matches!(err, Error::InvariantViolated { invariant: "nesting", .. }));
    }

    #[test]
    fn sigma_flattens_parents() {
        let lim = Limits::default();
        let tree = theorem_b_construct(&SubshiftSpec::full_shift(2), &[w(&[0]), w(&[1])], 2, 64, &lim).unwrap();
        assert_eq!(Level::sigma(&tree.levels, 1, 2), vec![1, 0]);
    }
}

//! One-sided subshifts of finite type.
//!
//! Every SFT is carried as an order-1 graph on *states*. When the spec comes
//! from a transition matrix the states are the symbols themselves; when it
//! comes from forbidden words of length `m` the states are the allowed blocks
//! of length `m - 1`, trimmed to the essential core. Words are always over the
//! original alphabet: a symbol at position `p` constrains the state at `p` to
//! the blocks starting with that symbol.
//!
//! State sets are `u64` bitmasks, so at most 64 states are supported.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::word::{CylinderUnion, Word};

pub type StateSet = u64;

pub const MAX_STATES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Origin {
    /// Order-1 0/1 matrix over the alphabet, row = current symbol.
    Matrix(Vec<Vec<bool>>),
    /// Forbidden words, each of length at least 2.
    ForbiddenWords(Vec<Word>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubshiftSpec {
    name: String,
    symbols: Vec<char>,
    origin: Origin,
    block_len: usize,
    blocks: Vec<Word>,
    succ: Vec<StateSet>,
    by_first: Vec<StateSet>,
    all: StateSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub states: usize,
    pub essential: bool,
    pub irreducible: bool,
    /// gcd of cycle lengths, only meaningful when irreducible.
    pub period: Option<usize>,
}

fn bits(mut m: StateSet) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SubshiftSpec {
    pub fn from_matrix(name: &str, symbols: Vec<char>, matrix: Vec<Vec<bool>>) -> Result<Self> {
        let n = symbols.len();
        check_alphabet(&symbols)?;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSubshift(format!(
                "transition matrix must be {n}x{n}"
            )));
        }
        for a in 0..n {
            if !matrix[a].iter().any(|&e| e) {
                return Err(Error::InvalidSubshift(format!(
                    "symbol '{}' has no outgoing edge",
                    symbols[a]
                )));
            }
            if !(0..n).any(|p| matrix[p][a]) {
                return Err(Error::InvalidSubshift(format!(
                    "symbol '{}' has no incoming edge",
                    symbols[a]
                )));
            }
        }
        let mut succ = vec![0; n];
        for (a, row) in matrix.iter().enumerate() {
            for (b, &e) in row.iter().enumerate() {
                if e {
                    succ[a] |= 1 << b;
                }
            }
        }
        let blocks = (0..n as u8).map(|a| Word::new(vec![a])).collect();
        Ok(Self::assemble(
            name,
            symbols,
            Origin::Matrix(matrix),
            1,
            blocks,
            succ,
        ))
    }

    pub fn from_forbidden_words(name: &str, symbols: Vec<char>, forbidden: Vec<Word>) -> Result<Self> {
        check_alphabet(&symbols)?;
        let k = symbols.len();
        let mut forbidden = forbidden;
        forbidden.sort();
        forbidden.dedup();
        for w in &forbidden {
            if w.len() < 2 {
                return Err(Error::InvalidSubshift(
                    "forbidden words must have length at least 2".into(),
                ));
            }
            if w.iter().any(|&s| s as usize >= k) {
                return Err(Error::InvalidSubshift("forbidden word uses unknown symbol".into()));
            }
        }
        let m = forbidden.iter().map(|w| w.len()).max().unwrap_or(2);
        let block_len = m - 1;
        let candidates = k.checked_pow(block_len as u32).unwrap_or(usize::MAX);
        if candidates > 1 << 16 {
            return Err(Error::CapExceeded {
                what: "block recoding",
                limit: 1 << 16,
                requested: candidates,
            });
        }
        let avoids = |w: &[u8]| {
            !forbidden
                .iter()
                .any(|f| w.windows(f.len()).any(|win| win == &f[..]))
        };
        let mut blocks: Vec<Word> = Vec::new();
        let mut buf = vec![0u8; block_len];
        for code in 0..candidates {
            let mut c = code;
            for slot in buf.iter_mut().rev() {
                *slot = (c % k) as u8;
                c /= k;
            }
            if avoids(&buf) {
                blocks.push(Word::from(&buf[..]));
            }
        }
        // Adjacency before trimming.
        let nb = blocks.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nb];
        let mut joined = vec![0u8; block_len + 1];
        for (i, b) in blocks.iter().enumerate() {
            for (j, c) in blocks.iter().enumerate() {
                if b[1..] != c[..block_len - 1] {
                    continue;
                }
                joined[..block_len].copy_from_slice(b);
                joined[block_len] = c[block_len - 1];
                if avoids(&joined) {
                    adj[i].push(j);
                }
            }
        }
        // Trim to the essential core.
        let mut alive = vec![true; nb];
        loop {
            let mut changed = false;
            for i in 0..nb {
                if !alive[i] {
                    continue;
                }
                let has_out = adj[i].iter().any(|&j| alive[j]);
                let has_in = (0..nb).any(|p| alive[p] && adj[p].contains(&i));
                if !has_out || !has_in {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<usize> = (0..nb).filter(|&i| alive[i]).collect();
        if kept.is_empty() {
            return Err(Error::InvalidSubshift("empty language".into()));
        }
        if kept.len() > MAX_STATES {
            return Err(Error::CapExceeded {
                what: "states",
                limit: MAX_STATES,
                requested: kept.len(),
            });
        }
        for (s, sym) in symbols.iter().enumerate() {
            if !kept.iter().any(|&i| blocks[i].contains(&(s as u8))) {
                return Err(Error::InvalidSubshift(format!(
                    "symbol '{sym}' occurs in no bi-infinite point"
                )));
            }
        }
        let index_of = |old: usize| kept.iter().position(|&i| i == old);
        let mut succ = vec![0; kept.len()];
        for (new_i, &old_i) in kept.iter().enumerate() {
            for &old_j in &adj[old_i] {
                if let Some(new_j) = index_of(old_j) {
                    succ[new_i] |= 1 << new_j;
                }
            }
        }
        let core_blocks = kept.iter().map(|&i| blocks[i].clone()).collect();
        Ok(Self::assemble(
            name,
            symbols,
            Origin::ForbiddenWords(forbidden),
            block_len,
            core_blocks,
            succ,
        ))
    }

    fn assemble(
        name: &str,
        symbols: Vec<char>,
        origin: Origin,
        block_len: usize,
        blocks: Vec<Word>,
        succ: Vec<StateSet>,
    ) -> Self {
        let mut by_first = vec![0; symbols.len()];
        for (i, b) in blocks.iter().enumerate() {
            by_first[b[0] as usize] |= 1 << i;
        }
        let all = if blocks.len() == 64 {
            u64::MAX
        } else {
            (1u64 << blocks.len()) - 1
        };
        SubshiftSpec {
            name: name.into(),
            symbols,
            origin,
            block_len,
            blocks,
            succ,
            by_first,
            all,
        }
    }

    /// The full shift on `k` symbols named `0, 1, ...`.
    pub fn full_shift(k: usize) -> Self {
        let symbols = default_symbols(k);
        Self::from_matrix(&format!("full-{k}"), symbols, vec![vec![true; k]; k])
            .expect("full shift is essential")
    }

    /// Binary sequences without two consecutive 1s.
    pub fn golden_mean() -> Self {
        Self::from_matrix(
            "golden-mean",
            vec!['0', '1'],
            vec![vec![true, true], vec![true, false]],
        )
        .expect("golden mean shift is essential")
    }

    /// The single periodic orbit `0 -> 1 -> ... -> k-1 -> 0`.
    pub fn cycle(k: usize) -> Self {
        let mut m = vec![vec![false; k]; k];
        for (a, row) in m.iter_mut().enumerate() {
            row[(a + 1) % k] = true;
        }
        Self::from_matrix(&format!("cycle-{k}"), default_symbols(k), m).expect("cycle is essential")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> usize {
        self.symbols.len()
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn state_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    /// The order-1 0/1 matrix over states.
    pub fn transitions(&self) -> Vec<Vec<bool>> {
        let n = self.blocks.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.succ[i] >> j & 1 == 1).collect())
            .collect()
    }

    /// Is `other` a subsystem of `self` (same alphabet, language contained)?
    ///
    /// Checked on words of length `block_len + 1` of `other`, which determine
    /// its language.
    pub fn contains_subshift(&self, other: &SubshiftSpec) -> bool {
        if other.symbols != self.symbols {
            return false;
        }
        let n = (other.block_len.max(self.block_len)) + 1;
        match language(other, n, &Limits::default()) {
            Ok(words) => words.iter().all(|w| self.is_allowed(w)),
            Err(_) => false,
        }
    }

    pub(crate) fn all_states(&self) -> StateSet {
        self.all
    }

    pub(crate) fn with_first(&self, symbol: u8) -> StateSet {
        self.by_first.get(symbol as usize).copied().unwrap_or(0)
    }

    pub(crate) fn successors(&self, m: StateSet) -> StateSet {
        bits(m).fold(0, |acc, s| acc | self.succ[s])
    }

    pub(crate) fn predecessors(&self, m: StateSet) -> StateSet {
        (0..self.blocks.len())
            .filter(|&s| self.succ[s] & m != 0)
            .fold(0, |acc, s| acc | 1 << s)
    }

    /// Possible states at position `p` given the states at `p - 1` (`None` at
    /// the start) and an optional forced symbol.
    pub(crate) fn step(&self, prev: Option<StateSet>, forced: Option<u8>) -> StateSet {
        let base = match prev {
            None => self.all,
            Some(m) => self.successors(m),
        };
        match forced {
            Some(a) => base & self.with_first(a),
            None => base,
        }
    }

    /// Is `w` an allowed (hence extendable) word?
    pub fn is_allowed(&self, w: &[u8]) -> bool {
        if w.iter().any(|&a| a as usize >= self.symbols.len()) {
            return false;
        }
        let mut m: Option<StateSet> = None;
        for &a in w {
            let next = self.step(m, Some(a));
            if next == 0 {
                return false;
            }
            m = Some(next);
        }
        true
    }

    /// Nonempty iff some cylinder word is allowed.
    pub fn union_is_nonempty(&self, u: &CylinderUnion) -> bool {
        u.words().iter().any(|w| self.is_allowed(w))
    }

    /// The allowed words of `u`.
    pub fn restrict(&self, u: &CylinderUnion) -> CylinderUnion {
        u.words()
            .iter()
            .filter(|w| self.is_allowed(w))
            .cloned()
            .collect()
    }

    pub fn render(&self, w: &[u8]) -> String {
        w.iter()
            .map(|&a| self.symbols.get(a as usize).copied().unwrap_or('?'))
            .collect()
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| {
                self.symbols
                    .iter()
                    .position(|&x| x == c)
                    .map(|i| i as u8)
                    .ok_or_else(|| Error::precondition(format!("unknown symbol '{c}'")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word::new)
    }

    /// Strongly connected components of the state graph, in discovery order.
    pub(crate) fn components(&self) -> Vec<StateSet> {
        let n = self.blocks.len();
        let mut seen: StateSet = 0;
        let mut out = Vec::new();
        for s in 0..n {
            if seen >> s & 1 == 1 {
                continue;
            }
            let fwd = self.reach(1 << s, |m| self.successors(m));
            let bwd = self.reach(1 << s, |m| self.predecessors(m));
            let comp = fwd & bwd;
            seen |= comp;
            out.push(comp);
        }
        out
    }

    fn reach(&self, start: StateSet, next: impl Fn(StateSet) -> StateSet) -> StateSet {
        let mut m = start;
        loop {
            let grown = m | next(m);
            if grown == m {
                return m;
            }
            m = grown;
        }
    }

    pub(crate) fn succ_row(&self, s: usize) -> StateSet {
        self.succ[s]
    }
}

fn check_alphabet(symbols: &[char]) -> Result<()> {
    if symbols.is_empty() {
        return Err(Error::InvalidSubshift("alphabet must be nonempty".into()));
    }
    if symbols.len() > MAX_STATES {
        return Err(Error::CapExceeded {
            what: "alphabet",
            limit: MAX_STATES,
            requested: symbols.len(),
        });
    }
    for (i, c) in symbols.iter().enumerate() {
        if symbols[..i].contains(c) {
            return Err(Error::InvalidSubshift(format!("duplicate symbol '{c}'")));
        }
        if c.is_whitespace() || matches!(c, ',' | ';' | '|' | '#') {
            return Err(Error::InvalidSubshift(format!("reserved symbol '{c}'")));
        }
    }
    Ok(())
}

fn default_symbols(k: usize) -> Vec<char> {
    (0..k)
        .map(|i| core::char::from_digit(i as u32, 36).unwrap_or('?'))
        .collect()
}

/// Essentiality, irreducibility and period of the state graph.
pub fn validate_spec(spec: &SubshiftSpec) -> Result<ValidationReport> {
    let n = spec.state_count();
    if n == 0 {
        return Err(Error::InvalidSubshift("empty language".into()));
    }
    let essential = (0..n).all(|s| spec.succ[s] != 0 && spec.predecessors(1 << s) != 0);
    if !essential {
        return Err(Error::InvalidSubshift("state graph is not essential".into()));
    }
    let comps = spec.components();
    let irreducible = comps.len() == 1;
    let period = irreducible.then(|| graph_period(spec));
    Ok(ValidationReport {
        states: n,
        essential,
        irreducible,
        period,
    })
}

fn graph_period(spec: &SubshiftSpec) -> usize {
    let n = spec.state_count();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = alloc::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for v in bits(spec.succ[u]) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0;
    for u in 0..n {
        for v in bits(spec.succ[u]) {
            let diff = (level[u] + 1).abs_diff(level[v]);
            g = gcd(g, diff);
        }
    }
    g
}

/// All allowed words of length `n`, in lexicographic order of symbol indices.
pub fn language(spec: &SubshiftSpec, n: usize, limits: &Limits) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::precondition("word length must be at least 1"));
    }
    if n > limits.max_word_length {
        return Err(Error::CapExceeded {
            what: "word length",
            limit: limits.max_word_length,
            requested: n,
        });
    }
    let pattern = vec![None; n];
    enumerate_pattern(spec, &pattern, limits.max_words)
}

/// All allowed words matching `pattern` (`None` = free), sorted. Fails with
/// `CapExceeded` past `cap` words.
pub(crate) fn enumerate_pattern(
    spec: &SubshiftSpec,
    pattern: &[Option<u8>],
    cap: usize,
) -> Result<Vec<Word>> {
    let n = pattern.len();
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let feasible = backward_sets(spec, pattern);
    if feasible[0] == 0 {
        return Ok(out);
    }
    let mut word = vec![0u8; n];
    let mut stack: Vec<StateSet> = Vec::with_capacity(n);
    enumerate_rec(spec, pattern, &feasible, 0, None, &mut word, &mut stack, &mut out, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    spec: &SubshiftSpec,
    pattern: &[Option<u8>],
    feasible: &[StateSet],
    p: usize,
    prev: Option<StateSet>,
    word: &mut [u8],
    stack: &mut Vec<StateSet>,
    out: &mut Vec<Word>,
    cap: usize,
) -> Result<()> {
    if p == pattern.len() {
        if out.len() >= cap {
            return Err(Error::CapExceeded {
                what: "enumerated words",
                limit: cap,
                requested: cap + 1,
            });
        }
        out.push(Word::from(&*word));
        return Ok(());
    }
    let base = spec.step(prev, None) & feasible[p];
    for a in 0..spec.alphabet_size() as u8 {
        if pattern[p].is_some_and(|f| f != a) {
            continue;
        }
        let m = base & spec.with_first(a);
        if m == 0 {
            continue;
        }
        word[p] = a;
        stack.push(m);
        enumerate_rec(spec, pattern, feasible, p + 1, Some(m), word, stack, out, cap)?;
        stack.pop();
    }
    Ok(())
}

/// `result[p]` = states at `p` from which the rest of `pattern` can be met.
pub(crate) fn backward_sets(spec: &SubshiftSpec, pattern: &[Option<u8>]) -> Vec<StateSet> {
    let n = pattern.len();
    let mut sets = vec![0; n];
    let forced = |p: usize| match pattern[p] {
        Some(a) => spec.with_first(a),
        None => spec.all_states(),
    };
    if n == 0 {
        return sets;
    }
    sets[n - 1] = forced(n - 1);
    for p in (0..n - 1).rev() {
        let next = sets[p + 1];
        let mut m = 0;
        for s in bits(forced(p)) {
            if spec.succ_row(s) & next != 0 {
                m |= 1 << s;
            }
        }
        sets[p] = m;
    }
    sets
}

/// The lexicographically least allowed word matching `pattern`.
pub(crate) fn least_fill(spec: &SubshiftSpec, pattern: &[Option<u8>]) -> Option<Word> {
    let feasible = backward_sets(spec, pattern);
    if pattern.is_empty() {
        return Some(Word::default());
    }
    if feasible[0] == 0 {
        return None;
    }
    let mut out = Vec::with_capacity(pattern.len());
    let mut prev: Option<StateSet> = None;
    for (p, &forced) in pattern.iter().enumerate() {
        let base = spec.step(prev, None) & feasible[p];
        let a = (0..spec.alphabet_size() as u8).find(|&a| {
            forced.is_none_or(|f| f == a) && base & spec.with_first(a) != 0
        })?;
        out.push(a);
        prev = Some(base & spec.with_first(a));
    }
    Some(Word::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[u8]) -> Word {
        Word::from(s)
    }

    #[test]
    fn full_two_shift_report() {
        let r = validate_spec(&SubshiftSpec::full_shift(2)).unwrap();
        assert!(r.irreducible);
        assert_eq!(r.period, Some(1));
    }

    #[test]
    fn golden_mean_report() {
        let r = validate_spec(&SubshiftSpec::golden_mean()).unwrap();
        assert!(r.irreducible && r.essential);
        assert_eq!(r.period, Some(1));
    }

    #[test]
    fn cycle_has_period_two() {
        let r = validate_spec(&SubshiftSpec::cycle(2)).unwrap();
        assert!(r.irreducible);
        assert_eq!(r.period, Some(2));
    }

    #[test]
    fn dead_end_symbol_is_rejected() {
        let err = SubshiftSpec::from_matrix(
            "dead",
            vec!['0', '1'],
            vec![vec![false, true], vec![false, false]],
        )
        .unwrap_err();
        assert_eq!(err.name(), "InvalidSubshift");
    }

    #[test]
    fn reducible_graph_is_reported() {
        let spec = SubshiftSpec::from_matrix(
            "two-loops",
            vec!['a', 'b'],
            vec![vec![true, true], vec![false, true]],
        )
        .unwrap();
        let r = validate_spec(&spec).unwrap();
        assert!(!r.irreducible);
        assert_eq!(r.period, None);
    }

    #[test]
    fn language_counts() {
        let lim = Limits::default();
        assert_eq!(language(&SubshiftSpec::full_shift(2), 3, &lim).unwrap().len(), 8);
        let gm = SubshiftSpec::golden_mean();
        assert_eq!(language(&gm, 4, &lim).unwrap().len(), 8);
        assert_eq!(language(&gm, 1, &lim).unwrap(), vec![w(&[0]), w(&[1])]);
    }

    #[test]
    fn language_is_sorted_and_capped() {
        let lim = Limits::default();
        let words = language(&SubshiftSpec::golden_mean(), 6, &lim).unwrap();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        let err = language(&SubshiftSpec::full_shift(2), 25, &lim).unwrap_err();
        assert_eq!(err.name(), "CapExceeded");
    }

    #[test]
    fn forbidden_word_recoding_matches_matrix() {
        let direct = SubshiftSpec::from_forbidden_words("gm", vec!['0', '1'], vec![w(&[1, 1])]).unwrap();
        assert_eq!(direct.block_len(), 1);
        let lim = Limits::default();
        for n in 1..=8 {
            assert_eq!(
                language(&direct, n, &lim).unwrap(),
                language(&SubshiftSpec::golden_mean(), n, &lim).unwrap()
            );
        }
    }

    #[test]
    fn longer_forbidden_words_use_blocks() {
        let spec = SubshiftSpec::from_forbidden_words(
            "no-111",
            vec!['0', '1'],
            vec![w(&[1, 1, 1])],
        )
        .unwrap();
        assert_eq!(spec.block_len(), 2);
        assert!(spec.is_allowed(&[1, 1, 0, 1, 1]));
        assert!(!spec.is_allowed(&[0, 1, 1, 1]));
    }

    #[test]
    fn least_fill_respects_pattern() {
        let gm = SubshiftSpec::golden_mean();
        let got = least_fill(&gm, &[Some(1), None, Some(1), None]).unwrap();
        assert_eq!(got, w(&[1, 0, 1, 0]));
        assert!(least_fill(&gm, &[Some(1), Some(1)]).is_none());
    }
}

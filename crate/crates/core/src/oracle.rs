//! Brute-force reference implementations.
//!
//! These enumerate words symbol by symbol and test allowedness straight from
//! the spec's origin (matrix adjacency or absence of forbidden factors). They
//! share no code with the state-mask machinery and exist to cross-check it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::subshift::{Origin, SubshiftSpec};
use crate::word::{CylinderUnion, Word};

/// Longest word the oracle will build.
pub const MAX_ORACLE_LENGTH: usize = 24;

fn admissible(spec: &SubshiftSpec, w: &[u8]) -> bool {
    match spec.origin() {
        Origin::Matrix(m) => w.windows(2).all(|p| m[p[0] as usize][p[1] as usize]),
        Origin::ForbiddenWords(fs) => {
            // Only the factors ending at the last symbol are new.
            let n = w.len();
            fs.iter()
                .all(|f| f.len() > n || w[n - f.len()..] != f[..])
        }
    }
}

fn compatible(prefix: &[u8], offset: usize, word: &[u8]) -> bool {
    word.iter()
        .enumerate()
        .all(|(t, &a)| prefix.get(offset + t).is_none_or(|&b| b == a))
}

fn extend(
    spec: &SubshiftSpec,
    windows: &[(usize, &CylinderUnion)],
    len: usize,
    buf: &mut Vec<u8>,
) -> bool {
    if buf.len() == len {
        return windows
            .iter()
            .all(|(o, u)| u.words().iter().any(|w| w.occurs_at(buf, *o)));
    }
    for a in 0..spec.alphabet_size() as u8 {
        buf.push(a);
        let ok = admissible(spec, buf)
            && windows
                .iter()
                .all(|(o, u)| u.words().iter().any(|w| compatible(buf, *o, w)));
        if ok && extend(spec, windows, len, buf) {
            return true;
        }
        buf.pop();
    }
    false
}

/// Some admissible word realizing every window, found by exhaustive search.
pub fn brute_witness(spec: &SubshiftSpec, windows: &[(usize, &CylinderUnion)]) -> Result<Option<Word>> {
    let len = windows
        .iter()
        .map(|(o, u)| o + u.max_len())
        .max()
        .unwrap_or(0);
    if len > MAX_ORACLE_LENGTH {
        return Err(Error::CapExceeded {
            what: "oracle word length",
            limit: MAX_ORACLE_LENGTH,
            requested: len,
        });
    }
    let mut buf = Vec::with_capacity(len);
    Ok(extend(spec, windows, len, &mut buf).then(|| Word::new(buf)))
}

/// `N(U_1, ..., U_d)` on `[1, horizon]` by exhaustive search.
pub fn brute_hitting(spec: &SubshiftSpec, us: &[CylinderUnion], horizon: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for n in 1..=horizon {
        let windows: Vec<(usize, &CylinderUnion)> =
            us.iter().enumerate().map(|(i, u)| (i * n, u)).collect();
        if brute_witness(spec, &windows)?.is_some() {
            out.push(n);
        }
    }
    Ok(out)
}

/// All admissible words of length `n`, lexicographically.
pub fn brute_language(spec: &SubshiftSpec, n: usize) -> Result<Vec<Word>> {
    if n > MAX_ORACLE_LENGTH {
        return Err(Error::CapExceeded {
            what: "oracle word length",
            limit: MAX_ORACLE_LENGTH,
            requested: n,
        });
    }
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    collect(spec, n, &mut buf, &mut out);
    Ok(out)
}

fn collect(spec: &SubshiftSpec, n: usize, buf: &mut Vec<u8>, out: &mut Vec<Word>) {
    if buf.len() == n {
        out.push(Word::from(&buf[..]));
        return;
    }
    for a in 0..spec.alphabet_size() as u8 {
        buf.push(a);
        if admissible(spec, buf) {
            collect(spec, n, buf, out);
        }
        buf.pop();
    }
}

/// Least `(a, n)` with `{a, a+n, ..., a+(d-1)n}` inside `f`, by scanning every pair.
pub fn brute_ap(f: &[usize], d: usize) -> Option<(usize, usize)> {
    let max = *f.iter().max()?;
    let mut best = None;
    for &a in f {
        for n in 1..=max {
            if (0..d).all(|j| f.contains(&(a + j * n))) {
                let cand = (a, n);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::subshift::language;

    #[test]
    fn oracle_language_matches_fast_path() {
        let lim = Limits::default();
        for spec in [SubshiftSpec::golden_mean(), SubshiftSpec::full_shift(3), SubshiftSpec::cycle(3)] {
            for n in 1..=7 {
                assert_eq!(brute_language(&spec, n).unwrap(), language(&spec, n, &lim).unwrap());
            }
        }
    }

    #[test]
    fn oracle_hitting_golden_mean() {
        let one = CylinderUnion::from_symbols(&[&[1]]);
        let got = brute_hitting(&SubshiftSpec::golden_mean(), &[one.clone(), one], 10).unwrap();
        assert_eq!(got, (2..=10).collect::<Vec<_>>());
    }

    #[test]
    fn oracle_ap() {
        assert_eq!(brute_ap(&[1, 2, 3, 5, 7, 9], 3), Some((1, 1)));
        assert_eq!(brute_ap(&[1, 2, 4, 8, 16], 3), None);
    }
}

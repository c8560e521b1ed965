//! Topological entropy of SFTs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::independence::{independence_extend, IndependenceCertificate};
use crate::density::DensityReport;
use crate::limits::Limits;
use crate::subshift::SubshiftSpec;
use crate::word::CylinderUnion;

pub const MAX_POWER_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    Perron,
    WordCount,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Perron => "perron",
            Method::WordCount => "word_count",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WordRate {
    pub n: usize,
    pub count: u128,
    /// `(1/n) log |L_n|`.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyReport {
    pub method: Method,
    /// Natural log.
    pub value: f64,
    /// For `Perron`, the width of the bracket `[ln lower, ln upper]` around
    /// `log λ`. For `WordCount`, the last step `rate_{n-1} - rate_n`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub rates: Vec<WordRate>,
}

/// Largest eigenvalue bracket of the state graph restricted to `comp`, by
/// power iteration on `A + I` with Collatz–Wielandt bounds.
fn component_radius(spec: &SubshiftSpec, comp: u64, tol: f64) -> (f64, f64, usize, bool) {
    let states: Vec<usize> = (0..spec.state_count()).filter(|&s| comp >> s & 1 == 1).collect();
    let n = states.len();
    let adj: Vec<Vec<usize>> = states
        .iter()
        .map(|&s| {
            (0..n)
                .filter(|&t| spec.succ_row(s) >> states[t] & 1 == 1)
                .collect()
        })
        .collect();
    if adj.iter().all(|row| row.is_empty()) {
        return (0.0, 0.0, 0, true);
    }
    let mut v = vec![1.0f64; n];
    let mut next = vec![0.0f64; n];
    let mut lo = 0.0;
    let mut hi = f64::INFINITY;
    for it in 1..=MAX_POWER_ITERATIONS {
        for i in 0..n {
            next[i] = v[i] + adj[i].iter().map(|&t| v[t]).sum::<f64>();
        }
        lo = f64::INFINITY;
        hi = 0.0;
        for i in 0..n {
            let q = next[i] / v[i];
            lo = f64::min(lo, q);
            hi = f64::max(hi, q);
        }
        let (l, h) = (lo - 1.0, hi - 1.0);
        let norm = next.iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            v[i] = next[i] / norm;
        }
        if l > 0.0 && libm::log(h) - libm::log(l) <= tol {
            return (l, h, it, true);
        }
    }
    (lo - 1.0, hi - 1.0, MAX_POWER_ITERATIONS, false)
}

/// `log λ_max` of the state graph, maximized over strongly connected components.
pub fn sft_entropy(spec: &SubshiftSpec, tol: f64) -> Result<EntropyReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance);
    }
    let mut best: Option<(f64, f64)> = None;
    let mut iterations = 0;
    let mut converged = true;
    for comp in spec.components() {
        let (lo, hi, it, ok) = component_radius(spec, comp, tol);
        iterations += it;
        converged &= ok;
        if hi > 0.0 && best.is_none_or(|(_, h)| hi > h) {
            best = Some((lo, hi));
        }
    }
    let (lo, hi) = best.unwrap_or((1.0, 1.0));
    let (ln_lo, ln_hi) = (libm::log(lo.max(1.0)), libm::log(hi.max(1.0)));
    Ok(EntropyReport {
        method: Method::Perron,
        value: (ln_lo + ln_hi) / 2.0,
        residual: ln_hi - ln_lo,
        iterations,
        converged,
        rates: Vec::new(),
    })
}

/// Exact `|L_n|` by path counting on the state graph.
pub fn word_count(spec: &SubshiftSpec, n: usize) -> u128 {
    let b = spec.block_len();
    if n < b {
        let mut prefixes: Vec<&[u8]> = spec.blocks().iter().map(|w| &w[..n]).collect();
        prefixes.sort_unstable();
        prefixes.dedup();
        return prefixes.len() as u128;
    }
    let states = spec.state_count();
    let mut counts = vec![1u128; states];
    for _ in 0..n - b {
        let mut next = vec![0u128; states];
        for (s, c) in counts.iter().enumerate() {
            let mut m = spec.succ_row(s);
            while m != 0 {
                let t = m.trailing_zeros() as usize;
                m &= m - 1;
                next[t] = next[t].saturating_add(*c);
            }
        }
        counts = next;
    }
    counts.iter().fold(0u128, |a, &c| a.saturating_add(c))
}

/// `(1/n) log |L_n|` for `n = 1..=n_max`.
pub fn word_count_entropy(spec: &SubshiftSpec, n_max: usize, limits: &Limits) -> Result<EntropyReport> {
    if n_max == 0 {
        return Err(Error::precondition("n_max must be at least 1"));
    }
    if n_max > limits.max_word_length {
        return Err(Error::CapExceeded {
            what: "word length",
            limit: limits.max_word_length,
            requested: n_max,
        });
    }
    let rates: Vec<WordRate> = (1..=n_max)
        .map(|n| {
            let count = word_count(spec, n);
            WordRate {
                n,
                count,
                rate: libm::log(count as f64) / n as f64,
            }
        })
        .collect();
    let value = rates[n_max - 1].rate;
    let residual = if n_max >= 2 {
        rates[n_max - 2].rate - value
    } else {
        0.0
    };
    Ok(EntropyReport {
        method: Method::WordCount,
        value,
        residual,
        iterations: n_max,
        converged: true,
        rates,
    })
}

/// Neighborhoods with finite independence evidence. This is a candidate only:
/// nothing here shows the tuple is an entropy tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyTupleCandidate {
    pub cylinders: Vec<CylinderUnion>,
    pub cert: IndependenceCertificate,
    pub density: DensityReport,
}

pub fn entropy_tuple_candidate(
    spec: &SubshiftSpec,
    cylinders: &[CylinderUnion],
    horizon: usize,
    min_size: usize,
    limits: &Limits,
) -> Result<Option<EntropyTupleCandidate>> {
    if cylinders.len() < 2 {
        return Err(Error::precondition("need at least 2 neighborhoods"));
    }
    for (i, a) in cylinders.iter().enumerate() {
        for b in &cylinders[i + 1..] {
            if !a.disjoint_from(b) {
                return Err(Error::precondition("neighborhoods must be pairwise disjoint"));
            }
        }
    }
    let ext = independence_extend(spec, cylinders, &[], horizon, min_size, None, limits)?;
    Ok((ext.cert.j.len() >= min_size).then(|| EntropyTupleCandidate {
        cylinders: cylinders.to_vec(),
        cert: ext.cert,
        density: ext.density,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_shifts() {
        for k in 2..=4 {
            let r = sft_entropy(&SubshiftSpec::full_shift(k), 1e-12).unwrap();
            assert!((r.value - libm::log(k as f64)).abs() < 1e-9);
        }
    }

    #[test]
    fn golden_mean_matches_root() {
        let r = sft_entropy(&SubshiftSpec::golden_mean(), 1e-12).unwrap();
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!((r.value - libm::log(phi)).abs() < 1e-9);
        assert!(r.converged);
    }

    #[test]
    fn zero_entropy() {
        let fixed = SubshiftSpec::from_matrix("fixed", alloc::vec!['0'], alloc::vec![alloc::vec![true]]).unwrap();
        assert_eq!(sft_entropy(&fixed, 1e-9).unwrap().value, 0.0);
        assert!(sft_entropy(&SubshiftSpec::cycle(2), 1e-9).unwrap().value.abs() < 1e-12);
        let lim = Limits::default();
        let wc = word_count_entropy(&fixed, 5, &lim).unwrap();
        assert!(wc.rates.iter().all(|r| r.rate == 0.0));
    }

    #[test]
    fn bad_tolerance() {
        assert_eq!(sft_entropy(&SubshiftSpec::full_shift(2), 0.0).unwrap_err(), Error::InvalidTolerance);
    }

    #[test]
    fn fibonacci_counts() {
        let gm = SubshiftSpec::golden_mean();
        let fib: Vec<u128> = (1..=10).map(|n| word_count(&gm, n)).collect();
        assert_eq!(fib, alloc::vec![2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
    }

    #[test]
    fn cycle_has_no_candidate() {
        let lim = Limits::default();
        let pair = [CylinderUnion::from_symbols(&[&[0]]), CylinderUnion::from_symbols(&[&[1]])];
        assert!(entropy_tuple_candidate(&SubshiftSpec::cycle(2), &pair, 20, 3, &lim).unwrap().is_none());
        let c = entropy_tuple_candidate(&SubshiftSpec::full_shift(2), &pair, 20, 5, &lim).unwrap().unwrap();
        assert_eq!(c.cert.j, alloc::vec![0, 1, 2, 3, 4]);
    }
}

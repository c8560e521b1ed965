//! Finite density proxies and arithmetic-progression search.

use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// A nonnegative fraction, never reduced so that counts stay visible.
#[derive(Debug, Clone, Copy)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Ratio { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Count ratios `|F ∩ [0, n)| / n`.
///
/// `lower` and `upper` are the min and max of the ratio over the prefixes
/// `n` in `[ceil(window/2), window]`, standing in for liminf and limsup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityReport {
    pub lower: Ratio,
    pub upper: Ratio,
    pub at_window: Ratio,
    pub window: usize,
}

/// Density data of the set `f` (sorted, known on `[0, known)`) at `window`.
pub fn density_bounds(f: &[usize], known: usize, window: usize) -> Result<DensityReport> {
    if window == 0 {
        return Err(Error::precondition("window must be at least 1"));
    }
    if window > known {
        return Err(Error::HorizonExceeded {
            needed: window - 1,
            available: known.saturating_sub(1),
        });
    }
    let from = window.div_ceil(2).max(1);
    let mut count = 0u64;
    let mut it = f.iter().copied().peekable();
    let mut lower: Option<Ratio> = None;
    let mut upper: Option<Ratio> = None;
    for n in 1..=window {
        while it.peek().is_some_and(|&m| m < n) {
            it.next();
            count += 1;
        }
        if n >= from {
            let r = Ratio::new(count, n as u64);
            lower = Some(lower.map_or(r, |l| l.min(r)));
            upper = Some(upper.map_or(r, |u| u.max(r)));
        }
    }
    Ok(DensityReport {
        lower: lower.unwrap_or(Ratio::new(0, 1)),
        upper: upper.unwrap_or(Ratio::new(0, 1)),
        at_window: Ratio::new(count, window as u64),
        window,
    })
}

/// Least `(a, n)` in lexicographic order with `{a, a+n, ..., a+(d-1)n} ⊆ f`.
pub fn find_ap(f: &[usize], d: usize) -> Result<Option<(usize, usize)>> {
    if d < 2 {
        return Err(Error::precondition("progression length must be at least 2"));
    }
    let mut set = alloc::vec::Vec::from(f);
    set.sort_unstable();
    set.dedup();
    let Some(&max) = set.last() else {
        return Ok(None);
    };
    for &a in &set {
        let span = (max - a) / (d - 1);
        for n in 1..=span {
            if (1..d).all(|j| set.binary_search(&(a + j * n)).is_ok()) {
                return Ok(Some((a, n)));
            }
        }
    }
    Ok(None)
}

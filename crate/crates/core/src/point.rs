//! Points of a shift space given by finite rules, and the dyadic metric.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::subshift::SubshiftSpec;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Rule {
    /// `on` at every `n` in some `[base^k, factor * base^k)`, `off` elsewhere.
    Blocks { base: usize, factor: usize, on: u8, off: u8 },
    /// A literal finite prefix; indices past its end are out of horizon.
    Explicit(Word),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PointGen {
    EventuallyPeriodic { preperiod: Word, period: Word },
    Programmatic { rule: Rule, horizon: usize },
}

impl PointGen {
    pub fn periodic(period: &[u8]) -> Self {
        Self::eventually_periodic(&[], period)
    }

    pub fn eventually_periodic(preperiod: &[u8], period: &[u8]) -> Self {
        assert!(!period.is_empty(), "period word must be nonempty");
        PointGen::EventuallyPeriodic {
            preperiod: Word::from(preperiod),
            period: Word::from(period),
        }
    }

    pub fn explicit(word: Word) -> Self {
        let horizon = word.len().saturating_sub(1);
        PointGen::Programmatic {
            rule: Rule::Explicit(word),
            horizon,
        }
    }

    /// Largest index this generator can emit.
    pub fn horizon(&self) -> usize {
        match self {
            PointGen::EventuallyPeriodic { .. } => usize::MAX,
            PointGen::Programmatic { horizon, .. } => *horizon,
        }
    }

    pub fn symbol_at(&self, i: usize) -> Result<u8> {
        if i > self.horizon() {
            return Err(Error::HorizonExceeded {
                needed: i,
                available: self.horizon(),
            });
        }
        Ok(match self {
            PointGen::EventuallyPeriodic { preperiod, period } => {
                if i < preperiod.len() {
                    preperiod[i]
                } else {
                    period[(i - preperiod.len()) % period.len()]
                }
            }
            PointGen::Programmatic { rule, .. } => match rule {
                Rule::Blocks { base, factor, on, off } => {
                    if in_block(i, *base, *factor) {
                        *on
                    } else {
                        *off
                    }
                }
                Rule::Explicit(w) => w[i],
            },
        })
    }

    pub fn window(&self, start: usize, len: usize) -> Result<Vec<u8>> {
        if len > 0 {
            let last = start + len - 1;
            if last > self.horizon() {
                return Err(Error::HorizonExceeded {
                    needed: last,
                    available: self.horizon(),
                });
            }
        }
        (start..start + len).map(|i| self.symbol_at(i)).collect()
    }

    /// Is every window up to index `upto` allowed in `spec`?
    pub fn is_allowed_upto(&self, spec: &SubshiftSpec, upto: usize) -> Result<bool> {
        Ok(spec.is_allowed(&self.window(0, upto + 1)?))
    }
}

fn in_block(n: usize, base: usize, factor: usize) -> bool {
    if base < 2 || n == 0 {
        return false;
    }
    let mut p = 1usize;
    while p <= n {
        if n < p.saturating_mul(factor) {
            return true;
        }
        match p.checked_mul(base) {
            Some(q) => p = q,
            None => break,
        }
    }
    false
}

/// `rho(u, v) = 2^-k` for the first disagreement index `k` within a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Distance {
    /// Disagree first at this index.
    Differ(u32),
    /// Equal on the inspected window of this length; the true distance is
    /// below `2^-window`.
    AgreeOn(u32),
}

impl Distance {
    pub fn value(self) -> f64 {
        match self {
            Distance::Differ(k) => libm::exp2(-(k as f64)),
            Distance::AgreeOn(_) => 0.0,
        }
    }

    /// An upper bound on the true distance.
    pub fn upper_bound(self) -> f64 {
        match self {
            Distance::Differ(k) => libm::exp2(-(k as f64)),
            Distance::AgreeOn(w) => libm::exp2(-(w as f64)),
        }
    }

    /// Is the true distance at most `2^-p`?
    pub fn within(self, p: u32) -> bool {
        match self {
            Distance::Differ(k) => k >= p,
            Distance::AgreeOn(w) => w >= p,
        }
    }
}

/// `rho(T^{rn} x, T^{sn} y)` inspected on `window` symbols.
pub fn shift_distance(x: &PointGen, y: &PointGen, n: usize, r: usize, s: usize, window: usize) -> Result<Distance> {
    let xs = x.window(r * n, window)?;
    let ys = y.window(s * n, window)?;
    Ok(match xs.iter().zip(&ys).position(|(a, b)| a != b) {
        Some(k) => Distance::Differ(k as u32),
        None => Distance::AgreeOn(window as u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let zero = PointGen::periodic(&[0]);
        let ten = PointGen::eventually_periodic(&[1], &[0]);
        assert_eq!(shift_distance(&zero, &zero, 7, 1, 1, 16).unwrap().value(), 0.0);
        assert_eq!(shift_distance(&zero, &ten, 0, 1, 1, 16).unwrap(), Distance::Differ(0));
        assert_eq!(shift_distance(&zero, &ten, 1, 1, 1, 16).unwrap().value(), 0.0);
    }

    #[test]
    fn horizon_is_enforced() {
        let x = PointGen::explicit(Word::from(&[0u8, 1, 0][..]));
        assert!(x.symbol_at(2).is_ok());
        assert_eq!(x.symbol_at(3).unwrap_err().name(), "HorizonExceeded");
    }

    #[test]
    fn block_rule() {
        let y = PointGen::Programmatic {
            rule: Rule::Blocks { base: 4, factor: 2, on: 1, off: 0 },
            horizon: 100,
        };
        let w = y.window(0, 17).unwrap();
        assert_eq!(w, [0, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
    }
}

//! Hitting-time and entering-time sets at a finite horizon.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::point::PointGen;
use crate::solver::{self, Window};
use crate::subshift::{enumerate_pattern, SubshiftSpec};
use crate::word::{CylinderUnion, Word};

/// A subset of `[1, horizon]`. Nothing is known past the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeSet {
    pub members: Vec<usize>,
    pub horizon: usize,
    pub witnesses: Option<BTreeMap<usize, Word>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// Checked and absent.
    Absent,
    /// Past the horizon.
    Unchecked,
}

impl TimeSet {
    pub fn new(mut members: Vec<usize>, horizon: usize) -> Self {
        members.sort_unstable();
        members.dedup();
        members.retain(|&n| (1..=horizon).contains(&n));
        TimeSet {
            members,
            horizon,
            witnesses: None,
        }
    }

    pub fn status(&self, n: usize) -> Membership {
        if n == 0 || n > self.horizon {
            Membership::Unchecked
        } else if self.members.binary_search(&n).is_ok() {
            Membership::Member
        } else {
            Membership::Absent
        }
    }

    pub fn contains(&self, n: usize) -> bool {
        self.status(n) == Membership::Member
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn least(&self) -> Option<usize> {
        self.members.first().copied()
    }
}

fn nonempty(spec: &SubshiftSpec, u: &CylinderUnion) -> Result<()> {
    if spec.union_is_nonempty(u) {
        Ok(())
    } else {
        Err(Error::EmptyOpenSet)
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::precondition("horizon must be at least 1"));
    }
    Ok(())
}

/// A witness for `n` in `N(U_1, ..., U_d)`, if any.
pub fn hitting_witness(spec: &SubshiftSpec, us: &[CylinderUnion], n: usize) -> Option<Word> {
    let windows: Vec<Window<'_>> = us
        .iter()
        .enumerate()
        .map(|(i, u)| Window::new(i * n, u.words()))
        .collect();
    solver::solve(spec, &windows)
}

/// Does `w` realize `n` in `N(U_1, ..., U_d)`?
pub fn replay_hitting(spec: &SubshiftSpec, us: &[CylinderUnion], n: usize, w: &[u8]) -> bool {
    spec.is_allowed(w) && us.iter().enumerate().all(|(i, u)| u.matches_at(w, i * n))
}

/// `N(U, V) = {n : U ∩ T^-n V ≠ ∅}` on `[1, horizon]`.
pub fn hitting_set(spec: &SubshiftSpec, u: &CylinderUnion, v: &CylinderUnion, horizon: usize) -> Result<TimeSet> {
    generalized_hitting_set(spec, &[u.clone(), v.clone()], horizon)
}

/// `N(U_1, ..., U_d) = {n : ∩ T^-(i-1)n U_i ≠ ∅}` on `[1, horizon]`.
pub fn generalized_hitting_set(spec: &SubshiftSpec, us: &[CylinderUnion], horizon: usize) -> Result<TimeSet> {
    if us.len() < 2 {
        return Err(Error::precondition(format!("need d >= 2 sets, got {}", us.len())));
    }
    check_horizon(horizon)?;
    for u in us {
        nonempty(spec, u)?;
    }
    let mut members = Vec::new();
    let mut witnesses = BTreeMap::new();
    for n in 1..=horizon {
        if let Some(w) = hitting_witness(spec, us, n) {
            members.push(n);
            witnesses.insert(n, w);
        }
    }
    Ok(TimeSet {
        members,
        horizon,
        witnesses: Some(witnesses),
    })
}

/// `N(x, U) = {n : T^n x ∈ U}` on `[1, horizon]`.
pub fn entering_time_set(spec: &SubshiftSpec, x: &PointGen, u: &CylinderUnion, horizon: usize) -> Result<TimeSet> {
    check_horizon(horizon)?;
    let len = u.max_len();
    let needed = horizon + len.saturating_sub(1);
    if needed > x.horizon() {
        return Err(Error::HorizonExceeded {
            needed,
            available: x.horizon(),
        });
    }
    let u = spec.restrict(u);
    let mut members = Vec::new();
    let mut witnesses = BTreeMap::new();
    for n in 1..=horizon {
        if let Some(w) = u.words().iter().find(|w| x.window(n, w.len()).is_ok_and(|s| s == w[..])) {
            members.push(n);
            witnesses.insert(n, w.clone());
        }
    }
    Ok(TimeSet {
        members,
        horizon,
        witnesses: Some(witnesses),
    })
}

/// Least `start` with `[start, start + block)` inside `t`. `None` only means
/// no such run up to the horizon.
pub fn thickness_certificate(t: &TimeSet, block: usize) -> Result<Option<usize>> {
    if block == 0 {
        return Err(Error::precondition("block length must be at least 1"));
    }
    let mut run_start = 0;
    let mut run = 0;
    let mut prev = None;
    for &m in &t.members {
        if prev == Some(m.wrapping_sub(1)) {
            run += 1;
        } else {
            run_start = m;
            run = 1;
        }
        if run >= block {
            return Ok(Some(run_start));
        }
        prev = Some(m);
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FilterBase {
    pub m: usize,
    pub ws: Vec<CylinderUnion>,
    /// Members of `N(W_1..W_d)` up to the horizon, each checked against both
    /// `N(U..)` and `N(V..)`.
    pub checked: Vec<usize>,
    pub horizon: usize,
}

/// `U ∩ T^-m V` as an explicit union of allowed words.
pub fn shifted_meet(spec: &SubshiftSpec, u: &CylinderUnion, v: &CylinderUnion, m: usize, cap: usize) -> Result<CylinderUnion> {
    let len = u.max_len().max(m + v.max_len());
    let mut out = Vec::new();
    for a in u.words() {
        for b in v.words() {
            if let Some(mut pat) = solver::pattern_of(&[(0, &a[..]), (m, &b[..])]) {
                pat.resize(len, None);
                out.extend(enumerate_pattern(spec, &pat, cap)?);
                if out.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "filter base words",
                        limit: cap,
                        requested: out.len(),
                    });
                }
            }
        }
    }
    Ok(CylinderUnion::new(out))
}

/// Least `m` making every `W_i = U_i ∩ T^-m V_i` nonempty, with the inclusion
/// `N(W..) ⊆ N(U..) ∩ N(V..)` checked on the horizon.
pub fn filter_base_witness(
    spec: &SubshiftSpec,
    us: &[CylinderUnion],
    vs: &[CylinderUnion],
    horizon: usize,
    limits: &Limits,
) -> Result<FilterBase> {
    let d = us.len();
    if d < 2 || vs.len() != d {
        return Err(Error::precondition(format!(
            "need |us| = |vs| >= 2, got {} and {}",
            us.len(),
            vs.len()
        )));
    }
    check_horizon(horizon)?;
    for u in us.iter().chain(vs) {
        nonempty(spec, u)?;
    }
    for m in 1..=horizon {
        let mut ws = Vec::with_capacity(d);
        for (u, v) in us.iter().zip(vs) {
            let w = shifted_meet(spec, u, v, m, limits.max_words)?;
            if w.is_empty() {
                break;
            }
            ws.push(w);
        }
        if ws.len() < d {
            continue;
        }
        let nw = generalized_hitting_set(spec, &ws, horizon)?;
        let nu = generalized_hitting_set(spec, us, horizon)?;
        let nv = generalized_hitting_set(spec, vs, horizon)?;
        if let Some(&bad) = nw.members.iter().find(|&&n| !nu.contains(n) || !nv.contains(n)) {
            return Err(Error::violated(
                "filter-base inclusion",
                format!("n = {bad} is in N(W) but not in N(U) ∩ N(V)"),
            ));
        }
        return Ok(FilterBase {
            m,
            ws,
            checked: nw.members,
            horizon,
        });
    }
    Err(Error::NoWitnessInHorizon { horizon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cyl(ws: &[&[u8]]) -> CylinderUnion {
        CylinderUnion::from_symbols(ws)
    }

    #[test]
    fn full_shift_hits_everything() {
        let t = hitting_set(&SubshiftSpec::full_shift(2), &cyl(&[&[0]]), &cyl(&[&[1]]), 10).unwrap();
        assert_eq!(t.members, (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn golden_mean_examples() {
        let gm = SubshiftSpec::golden_mean();
        let one = cyl(&[&[1]]);
        let t = hitting_set(&gm, &one, &one, 10).unwrap();
        assert_eq!(t.members, (2..=10).collect::<Vec<_>>());
        let g = generalized_hitting_set(&gm, &[one.clone(), one.clone(), one.clone()], 8).unwrap();
        assert_eq!(g.members, (2..=8).collect::<Vec<_>>());
        let err = hitting_set(&gm, &cyl(&[&[1, 1]]), &one, 5).unwrap_err();
        assert_eq!(err, Error::EmptyOpenSet);
    }

    #[test]
    fn status_distinguishes_unchecked() {
        let t = TimeSet::new(vec![2, 4], 5);
        assert_eq!(t.status(4), Membership::Member);
        assert_eq!(t.status(3), Membership::Absent);
        assert_eq!(t.status(6), Membership::Unchecked);
    }

    #[test]
    fn entering_times() {
        let x = PointGen::periodic(&[0, 1]);
        let full = SubshiftSpec::full_shift(2);
        let t = entering_time_set(&full, &x, &cyl(&[&[0, 1]]), 10).unwrap();
        assert_eq!(t.members, vec![2, 4, 6, 8, 10]);
        let zero = PointGen::periodic(&[0]);
        assert!(entering_time_set(&full, &zero, &cyl(&[&[1]]), 10).unwrap().is_empty());
    }

    #[test]
    fn thickness() {
        let t = TimeSet::new((1..=10).collect(), 10);
        assert_eq!(thickness_certificate(&t, 5).unwrap(), Some(1));
        let evens = TimeSet::new((1..=10).map(|i| 2 * i).collect(), 20);
        assert_eq!(thickness_certificate(&evens, 2).unwrap(), None);
    }

    #[test]
    fn filter_base_examples() {
        let lim = Limits::default();
        let full = SubshiftSpec::full_shift(2);
        let fb = filter_base_witness(&full, &[cyl(&[&[0]]), cyl(&[&[1]])], &[cyl(&[&[1]]), cyl(&[&[0]])], 5, &lim).unwrap();
        assert_eq!(fb.m, 1);
        assert_eq!(fb.ws, vec![cyl(&[&[0, 1]]), cyl(&[&[1, 0]])]);

        let gm = SubshiftSpec::golden_mean();
        let us = [cyl(&[&[1]]), cyl(&[&[0]])];
        let fb = filter_base_witness(&gm, &us, &us, 5, &lim).unwrap();
        assert_eq!(fb.m, 2);
        assert_eq!(fb.ws, vec![cyl(&[&[1, 0, 1]]), cyl(&[&[0, 0, 0], &[0, 1, 0]])]);

        let err = filter_base_witness(&full, &[cyl(&[&[0]])], &[cyl(&[&[0]])], 5, &lim).unwrap_err();
        assert_eq!(err.name(), "PreconditionViolated");
    }
}

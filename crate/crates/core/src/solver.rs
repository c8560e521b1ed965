//! Exact feasibility of window systems on an SFT.
//!
//! A system is a list of windows `(offset, choices)`: find an allowed word in
//! which, for each window, some choice occurs at the offset. The search walks
//! windows in offset order, keeping the set of reachable states at the current
//! position and the still-pending forced symbols of overlapping choices. Free
//! stretches between windows are advanced until the state set stabilises.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::subshift::{least_fill, StateSet, SubshiftSpec};
use crate::word::Word;

#[derive(Clone, Copy)]
pub(crate) struct Window<'a> {
    pub offset: usize,
    pub choices: &'a [Word],
}

impl<'a> Window<'a> {
    pub fn new(offset: usize, choices: &'a [Word]) -> Self {
        Window { offset, choices }
    }
}

type Pending = Vec<Option<u8>>;

struct Search<'s, 'w> {
    spec: &'s SubshiftSpec,
    windows: Vec<Window<'w>>,
    failed: BTreeSet<(usize, StateSet, Pending)>,
    chosen: Vec<usize>,
}

/// States possible after walking `steps` positions from `mask` (the states at
/// the previous position) with `pending` forced symbols. Consumes the walked
/// part of `pending`.
fn advance(spec: &SubshiftSpec, mut mask: StateSet, pending: &mut Pending, steps: usize) -> StateSet {
    let forced_len = pending.len().min(steps);
    for &forced in &pending[..forced_len] {
        mask = spec.step(Some(mask), forced);
        if mask == 0 {
            return 0;
        }
    }
    pending.drain(..forced_len);
    for _ in forced_len..steps {
        let next = spec.step(Some(mask), None);
        if next == mask {
            break;
        }
        mask = next;
        if mask == 0 {
            return 0;
        }
    }
    mask
}

/// Overlay `w` onto `pending` at relative offset 0. `false` on a conflict.
fn merge(pending: &mut Pending, w: &[u8]) -> bool {
    if pending.len() < w.len() {
        pending.resize(w.len(), None);
    }
    for (slot, &a) in pending.iter_mut().zip(w) {
        match *slot {
            Some(b) if b != a => return false,
            _ => *slot = Some(a),
        }
    }
    true
}

impl<'s, 'w> Search<'s, 'w> {
    fn run(&mut self, i: usize, pos: usize, mask: StateSet, mut pending: Pending) -> bool {
        if i == self.windows.len() {
            let steps = pending.len();
            return advance(self.spec, mask, &mut pending, steps) != 0;
        }
        let win = self.windows[i];
        let mask = advance(self.spec, mask, &mut pending, win.offset - pos);
        if mask == 0 {
            return false;
        }
        let key = (i, mask, pending);
        if self.failed.contains(&key) {
            return false;
        }
        let pending = key.2.clone();
        for (c, w) in win.choices.iter().enumerate() {
            let mut next = pending.clone();
            if !merge(&mut next, w) {
                continue;
            }
            // Cheap check on the first forced symbol before recursing.
            if let Some(Some(a)) = next.first() {
                if self.spec.step(Some(mask), Some(*a)) == 0 {
                    continue;
                }
            }
            self.chosen.push(c);
            if self.run(i + 1, win.offset, mask, next) {
                return true;
            }
            self.chosen.pop();
        }
        self.failed.insert(key);
        false
    }
}

fn sorted(windows: &[Window<'_>]) -> Vec<(usize, usize)> {
    let mut idx: Vec<(usize, usize)> = windows.iter().enumerate().map(|(i, w)| (w.offset, i)).collect();
    idx.sort();
    idx
}

/// The forced-symbol pattern of a fully chosen system, or `None` on conflict.
pub(crate) fn pattern_of(windows: &[(usize, &[u8])]) -> Option<Vec<Option<u8>>> {
    let len = windows.iter().map(|(o, w)| o + w.len()).max().unwrap_or(0);
    let mut pat = vec![None; len];
    for &(o, w) in windows {
        for (t, &a) in w.iter().enumerate() {
            match pat[o + t] {
                Some(b) if b != a => return None,
                _ => pat[o + t] = Some(a),
            }
        }
    }
    Some(pat)
}

/// A canonical witness for the window system: the least allowed fill of the
/// first feasible choice combination in search order.
pub(crate) fn solve(spec: &SubshiftSpec, windows: &[Window<'_>]) -> Option<Word> {
    let order = sorted(windows);
    let ordered: Vec<Window<'_>> = order.iter().map(|&(_, i)| windows[i]).collect();
    if ordered.iter().any(|w| w.choices.is_empty()) {
        return None;
    }
    let mut search = Search {
        spec,
        windows: ordered,
        failed: BTreeSet::new(),
        chosen: Vec::new(),
    };
    if !search.run(0, 0, spec.all_states(), Vec::new()) {
        return None;
    }
    let picked: Vec<(usize, &[u8])> = search
        .windows
        .iter()
        .zip(&search.chosen)
        .map(|(w, &c)| (w.offset, &w.choices[c][..]))
        .collect();
    let pat = pattern_of(&picked)?;
    least_fill(spec, &pat)
}

/// Does `word` satisfy every window of the system?
pub(crate) fn satisfies(word: &[u8], windows: &[Window<'_>]) -> bool {
    windows
        .iter()
        .all(|w| w.choices.iter().any(|c| c.occurs_at(word, w.offset)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feasible(spec: &SubshiftSpec, windows: &[Window<'_>]) -> bool {
        solve(spec, windows).is_some()
    }

    fn words(ws: &[&[u8]]) -> Vec<Word> {
        ws.iter().map(|w| Word::from(*w)).collect()
    }

    #[test]
    fn golden_mean_gaps() {
        let gm = SubshiftSpec::golden_mean();
        let one = words(&[&[1]]);
        assert!(!feasible(&gm, &[Window::new(0, &one), Window::new(1, &one)]));
        let w = solve(&gm, &[Window::new(0, &one), Window::new(2, &one)]).unwrap();
        assert_eq!(&w[..], &[1, 0, 1]);
    }

    #[test]
    fn overlap_unification() {
        let full = SubshiftSpec::full_shift(2);
        let a = words(&[&[0, 1]]);
        let b = words(&[&[1, 1]]);
        let c = words(&[&[0, 0]]);
        assert!(feasible(&full, &[Window::new(0, &a), Window::new(1, &b)]));
        assert!(!feasible(&full, &[Window::new(0, &a), Window::new(1, &c)]));
    }

    #[test]
    fn witness_satisfies_windows() {
        let gm = SubshiftSpec::golden_mean();
        let u = words(&[&[0, 1], &[1, 0]]);
        let v = words(&[&[1]]);
        let sys = [Window::new(0, &u), Window::new(3, &v), Window::new(5, &u)];
        let w = solve(&gm, &sys).unwrap();
        assert!(gm.is_allowed(&w));
        assert!(satisfies(&w, &sys));
    }

    #[test]
    fn long_free_gap_on_cycle() {
        let cyc = SubshiftSpec::cycle(2);
        let zero = words(&[&[0]]);
        assert!(feasible(&cyc, &[Window::new(0, &zero), Window::new(400, &zero)]));
        assert!(!feasible(&cyc, &[Window::new(0, &zero), Window::new(401, &zero)]));
    }
}

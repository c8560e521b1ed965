use alloc::vec::Vec;
use core::ops::Deref;

/// A finite block of symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn repeat(symbol: u8, len: usize) -> Self {
        Word(alloc::vec![symbol; len])
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    /// `self` and `other` name overlapping cylinders iff one is a prefix of the other.
    pub fn cylinders_meet(&self, other: &Word) -> bool {
        let n = self.len().min(other.len());
        self.0[..n] == other.0[..n]
    }

    /// Does `self` appear at `offset` inside `host`?
    pub fn occurs_at(&self, host: &[u8], offset: usize) -> bool {
        host.len() >= offset + self.len() && host[offset..offset + self.len()] == self.0[..]
    }
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

/// A finite union of cylinder sets based at 0.
///
/// Words are kept sorted and deduplicated so two unions over the same words
/// compare equal. Words may have different lengths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CylinderUnion {
    words: Vec<Word>,
}

impl CylinderUnion {
    pub fn new(mut words: Vec<Word>) -> Self {
        words.sort();
        words.dedup();
        CylinderUnion { words }
    }

    pub fn single(word: Word) -> Self {
        CylinderUnion { words: alloc::vec![word] }
    }

    pub fn from_symbols(words: &[&[u8]]) -> Self {
        Self::new(words.iter().map(|w| Word::from(*w)).collect())
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Does the window of `host` at `offset` lie in this union?
    pub fn matches_at(&self, host: &[u8], offset: usize) -> bool {
        self.words.iter().any(|w| w.occurs_at(host, offset))
    }

    /// Cylinders of `self` and `other` are disjoint iff no pair of words meet.
    pub fn disjoint_from(&self, other: &CylinderUnion) -> bool {
        self.words
            .iter()
            .all(|a| other.words.iter().all(|b| !a.cylinders_meet(b)))
    }

    /// Intersection as a cylinder union: for each meeting pair keep the longer word.
    pub fn intersect(&self, other: &CylinderUnion) -> CylinderUnion {
        let mut out = Vec::new();
        for a in &self.words {
            for b in &other.words {
                if a.cylinders_meet(b) {
                    out.push(if a.len() >= b.len() { a.clone() } else { b.clone() });
                }
            }
        }
        CylinderUnion::new(out)
    }

    pub fn union(&self, other: &CylinderUnion) -> CylinderUnion {
        let mut w = self.words.clone();
        w.extend(other.words.iter().cloned());
        CylinderUnion::new(w)
    }

    /// Split into the first `ceil(len/2)` words and the rest.
    pub fn halves(&self) -> (CylinderUnion, CylinderUnion) {
        let mid = self.words.len().div_ceil(2);
        (
            CylinderUnion {
                words: self.words[..mid].to_vec(),
            },
            CylinderUnion {
                words: self.words[mid..].to_vec(),
            },
        )
    }
}

impl FromIterator<Word> for CylinderUnion {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        CylinderUnion::new(iter.into_iter().collect())
    }
}

/// Enumeration and search bounds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Limits {
    /// Longest word `language` will enumerate.
    pub max_word_length: usize,
    /// Largest number of words a single enumeration may return.
    pub max_words: usize,
    /// Largest selector count `k^|J|` an independence check may visit.
    pub max_selectors: usize,
    /// Deepest construction tree.
    pub max_depth: usize,
    /// Largest family at any level of a construction tree.
    pub max_family: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_word_length: 24,
            max_words: 1 << 20,
            max_selectors: 4096,
            max_depth: 3,
            max_family: 64,
        }
    }
}

/// Classification thresholds for the scrambled-pair scan.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Thresholds {
    /// A tail distance `<= 2^-p_min` counts as a proximal event.
    pub p_min: u32,
    /// A tail distance `>= eps_min` counts as a separation event.
    pub eps_min: f64,
    /// Fraction of the horizon (from the end) that forms the tail window.
    pub tail_fraction: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            p_min: 10,
            eps_min: 0.25,
            tail_fraction: 0.5,
        }
    }
}

pub const DEFAULT_HORIZON: usize = 512;

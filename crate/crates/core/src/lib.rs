//! Finite certificates for hitting-time sets, independence, Δ-mixing and
//! scrambled pairs on one-sided subshifts of finite type.
//!
//! The crate is `no_std` and only needs `alloc`. Every search is bounded by a
//! horizon or a cap from [`Limits`]; a failure to find a witness is reported
//! as such and never as a disproof.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chaos;
pub mod construction;
pub mod density;
pub mod entropy;
pub mod error;
pub mod hitting;
pub mod independence;
pub mod limits;
pub mod mixing;
pub mod oracle;
pub mod point;
mod solver;
pub mod subshift;
pub mod word;

pub use error::{Error, Result};
pub use limits::{Limits, Thresholds, DEFAULT_HORIZON};
pub use subshift::{language, validate_spec, Origin, SubshiftSpec, ValidationReport};
pub use word::{CylinderUnion, Word};

//! Workbench for additive combinatorics over prime fields.

pub mod apps;
pub mod avoidance;
pub mod bench;
pub mod energetics;
pub mod error;
pub mod families;
pub mod fpcore;
pub mod harmonic;
pub mod spectral;

pub use error::{Error, Result};
pub use fpcore::{Fraction, PrimeField, ResidueSet};

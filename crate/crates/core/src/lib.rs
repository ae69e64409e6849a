//! Pattern avoidance for cyclic permutations.
//!
//! A cyclic permutation of `[n]` can be read as its one-line word
//! `π(1)...π(n)` or as any of the `n` rotations of its cycle word
//! `(c1, ..., cn)`. This crate enumerates the n-cycles whose one-line word
//! avoids a pattern `sigma` and whose cycle words (the standard one, or all
//! rotations) avoid a pattern `tau`, and checks the Pell-number count for the
//! pair (2431, 1324) together with the maps and identities behind it.
//!
//! - [`perm`]: one-line and cycle words, conversions, rotations.
//! - [`pattern`]: containment, the pruned matcher and its naive oracle.
//! - [`class`]: class queries, the brute-force and pruned enumerators.
//! - [`theorem`]: Pell numbers, structural checks and bijection verification.

pub mod class;
pub mod error;
pub mod pattern;
pub mod perm;
pub mod theorem;

pub use class::{
    count_class, enumerate_class, partition_by_anchor, visit_class, Anchor, ClassQuery,
    ClassResult, Convention, Engine, EnumOptions,
};
pub use error::{Error, Result};
pub use pattern::{avoids_in_mode, contains, find_occurrence, reduce, AvoidanceMode, Occurrence, Pattern};
pub use perm::{
    cycle_to_oneline, make_permutation, oneline_to_cycle, rotations, standardize, CycleWord,
    Permutation, StandardCycleWord,
};
pub use theorem::{
    check_fact_structure, map_f_21, map_f_22, map_f_24, map_g_21, pell, verify_bijection,
    BijectionReport, FactReport, LemmaMap, PellTable, TheoremRow, TheoremSuite,
};

/// Largest supported permutation size.
pub const MAX_N: usize = 20;

//! Exact evaluation of elementary multisymmetric polynomials and finite-domain
//! checks of separation and minimality for sets of them.
//!
//! Points of `V^m` (with `V = K^n`) are `n x m` matrices; `S_n` permutes rows.

pub mod catalog;
pub mod error;
pub mod field;
pub mod invariants;
pub mod orbits;
pub mod partitions;
pub mod separation;

pub use catalog::{
    build_counterexample_s3, build_m, build_s, build_t, m0_of, size_m, size_s, CatalogId,
};
pub use error::{Error, Result};
pub use field::{char_ok_for, Field, FieldSpec, PrimeField, Rationals, Residue};
pub use invariants::{
    eval_invariant, expand_invariant, expand_set, Invariant, InvariantSet, MultiExponent,
};
pub use orbits::{parse_point, same_orbit, Point};
pub use partitions::{Permutation, SetPartition};
pub use separation::{
    fingerprint, separates, verify_expansion_theorem, verify_minimal, verify_separating,
    DomainSpec, MinimalEntry, MinimalOutcome, MinimalityReport, Sampling, SeparationReport,
    SeparationVerdict, VerifyOptions,
};

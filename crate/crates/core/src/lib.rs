//! Discovery of reliable approximate functional dependencies in categorical
//! data.
//!
//! A target `Y` depends approximately functionally on an attribute set `X`
//! when knowing `X` removes most of the uncertainty about `Y`. The fraction
//! of information `F = I(X; Y) / H(Y)` quantifies this, but its plug-in
//! estimate grows with the number of distinct values of `X` even when `X`
//! and `Y` are independent. The crate subtracts the expected value of that
//! estimate under a uniformly permuted target, giving the reliable fraction
//! `F0 = F - b0`, and searches the attribute lattice for the top-k sets by
//! `F0` with a best-first branch-and-bound whose bound `1 - b0` is
//! admissible because `b0` only grows along the subset order.
//!
//! Modules:
//!
//! - [`data`]: CSV ingestion, discretization, contingency tables.
//! - [`infotheory`]: entropies, mutual information, fraction of information.
//! - [`correction`]: expected mutual information under permutation and the
//!   corrected scores.
//! - [`search`]: best-first branch-and-bound and an exhaustive oracle.
//! - [`biasbench`]: simulation of estimator bias on sampled 3x3 pmfs.
//!
//! With the default `parallel` feature, independent work (cell sums,
//! successor scoring, simulation trials) runs on rayon; results are
//! bit-identical to sequential execution.

pub mod biasbench;
pub mod correction;
pub mod data;
pub mod error;
pub mod exec;
pub mod infotheory;
pub mod search;

pub use correction::{
    adjusted_fraction, expected_mi_bruteforce, expected_mi_permutation, hypergeometric_cell_sum,
    reliable_fraction, CorrectionValue, ReliableScore, ScoredPattern, Scorer,
};
pub use data::{
    build_table, encode_dataset, equal_frequency_bins, AttributeSet, Column, ContingencyTable,
    Dataset, RawTable,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use infotheory::{
    conditional_entropy, entropy, fraction_of_information, mutual_information, Bits,
};
pub use search::{
    best_first_search, bound, branch, cardinality_baseline_nodes, exhaustive_search, Guarantee,
    SearchConfig, SearchNode, SearchStats, TopKResult,
};

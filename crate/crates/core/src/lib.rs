//! Deterministic search for complete balanced k-partite subgraphs in dense
//! k-uniform hypergraphs.
//!
//! Given `H` with `n` vertices and density `d`, [`find_partite`] returns
//! `k` disjoint parts of size at least
//! `t = floor((ln n / ln(16/d))^(1/(k-1)))` such that every transversal is
//! an edge. Every witness can be rechecked with [`verify_witness`].

pub mod combinatorics;
pub mod error;
pub mod finder;
pub mod format;
pub mod generators;
pub mod hypergraph;
pub mod parameters;
pub mod verifier;

pub use error::{Error, Result};
pub use finder::{
    find_partite, find_partite_forced, trim_balanced, PartiteWitness, RecursionTrace, SearchStep,
    TraceLevel,
};
pub use generators::{generate, generate_with, GenKind, GenSpec, Probability};
pub use hypergraph::{Backend, BackendPolicy, Hypergraph, LinkSet};
pub use parameters::{derive_params, Density, ParamSet};
pub use verifier::{check_witness, verify_witness, Violation};

//! Exact analysis of unicast index coding problems with up to three
//! receivers: graph invariants (independence number, clique cover number,
//! its fractional relaxation, maximum acyclic induced subgraph), perfectness
//! testing, clique-cover code construction with verified locality-1
//! decoding, and exhaustive search over all codes at small parameters.
//!
//! Everything here is exact: invariants are computed by exhaustive or
//! branch-and-bound search, the fractional clique cover number by a rational
//! simplex solver, and converse claims by complete enumeration. Operations
//! refuse inputs beyond their search budget instead of approximating.

pub mod budget;
pub mod code;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod lp;
pub mod problem;

pub use budget::Budget;
pub use code::{
    build_clique_cover_code, lift_esup_code, lower_esup_code, verify_code, CodeCheck, Decoder,
    Encoder, IndexCode, ReceiverCode,
};
pub use error::{Error, Result};
pub use graph::{parse_graph_text, DirectedGraph, ParsedGraph, UndirectedGraph};
pub use invariants::{
    classify_subset, clique_cover_number, enumerate_maximal_cliques, independence_number,
    independent_directed_cycles, is_perfect, mais, mais_deficient_closed_form, CliquePartition,
    Perfectness, SubsetClass,
};
pub use lp::{
    format_rational, fractional_clique_cover_number, parse_rational, solve_min, LinearProgram,
    LpOutcome, Rational,
};
pub use problem::{
    build_bstar, build_bstar_sub, gstar, gstar_sub, subset_label_map, Receiver, Role, SubsetSpec,
    UnicastProblem, ValidationReport, Violation,
};

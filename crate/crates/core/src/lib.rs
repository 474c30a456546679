//! Betweenness between sets of vertices in finite graphs.
//!
//! Formulas are Boolean combinations of atoms `A|B|C`, read "every path from
//! a vertex of `A` to a vertex of `C` passes through `B` at an internal
//! vertex". The crate parses and renders formulas ([`syntax`], [`parser`]),
//! evaluates them in graphs ([`graph`], [`semantics`]), checks Hilbert-style
//! proofs in a nine-axiom system ([`kernel`]) and decides validity and
//! entailment over a fixed universe by enumerating all graphs
//! ([`decision`]). [`fuzz`] drives randomized soundness checks and [`cli`]
//! backs the `betw` binary.

pub mod cli;
pub mod decision;
pub mod fuzz;
pub mod graph;
pub mod kernel;
pub mod par;
pub mod parser;
pub mod semantics;
pub mod syntax;

pub use decision::{check_validity, entails, enumerate_graphs, schema_validity_sweep, DecisionConfig};
pub use graph::Graph;
pub use parser::{parse_formula, ParseError};
pub use semantics::{eval_atom, eval_formula, reachable_avoiding, Semantics};
pub use syntax::{Atom, Formula, Signature, VertexSet};

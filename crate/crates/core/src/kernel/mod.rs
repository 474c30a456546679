//! Axiom schemas, tautology checking and proof verification.

pub mod proof;
pub mod schema;
pub mod tautology;

pub use proof::{
    check_proof, load_proof, Proof, ProofChecker, ProofFile, ProofFileError, ProofFileLine,
    ProofLine, RejectReason, Rule, Verdict,
};
pub use schema::{
    all_substitutions, instantiate_schema, match_axiom_instance, match_schema, matching_schemas,
    side_conditions_hold, transitivity_template, AxiomInstance, AxiomSchema, SchemaError, SetVar,
    Substitution,
};
pub use tautology::{is_tautology, is_tautology_capped, TautologyError, DEFAULT_ATOM_CAP};

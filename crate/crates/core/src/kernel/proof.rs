//! Hilbert-style proofs: hypotheses, tautologies, axiom instances and
//! Modus Ponens.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::schema::{instantiate_schema, match_schema, matching_schemas, AxiomSchema, SchemaError, SetVar, Substitution};
use super::tautology::{is_tautology_capped, TautologyError, DEFAULT_ATOM_CAP};
use crate::parser::{parse_formula, ParseError};
use crate::syntax::{Formula, Signature, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Index into the hypothesis list (0-based); `None` accepts any equal
    /// hypothesis.
    Hypothesis(Option<usize>),
    Tautology,
    /// Schema and substitution as claimed by the proof. Missing parts are
    /// recovered by matching the line's formula.
    Axiom {
        schema: Option<AxiomSchema>,
        substitution: Option<Substitution>,
    },
    /// `ModusPonens(i, j)`: line `i` is `φ`, line `j` is `φ -> ψ`, and the
    /// current line is `ψ`. Line numbers are 1-based.
    ModusPonens(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub sig: Arc<Signature>,
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RejectReason {
    EmptyProof,
    SignatureMismatch,
    BadReference { reference: usize },
    HypothesisMismatch,
    NotATautology,
    TooManyAtoms { count: usize, cap: usize },
    AxiomMismatch { schema: Option<AxiomSchema> },
    InvalidInstance { message: String },
    ModusPonensMismatch,
}

impl RejectReason {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::EmptyProof => "EmptyProof",
            RejectReason::SignatureMismatch => "SignatureMismatch",
            RejectReason::BadReference { .. } => "BadReference",
            RejectReason::HypothesisMismatch => "HypothesisMismatch",
            RejectReason::NotATautology => "NotATautology",
            RejectReason::TooManyAtoms { .. } => "TooManyAtoms",
            RejectReason::AxiomMismatch { .. } => "AxiomMismatch",
            RejectReason::InvalidInstance { .. } => "InvalidInstance",
            RejectReason::ModusPonensMismatch => "ModusPonensMismatch",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())?;
        match self {
            RejectReason::BadReference { reference } => write!(f, " ({reference})"),
            RejectReason::TooManyAtoms { count, cap } => write!(f, " ({count} > {cap})"),
            RejectReason::AxiomMismatch { schema: Some(s) } => write!(f, " ({s})"),
            RejectReason::InvalidInstance { message } => write!(f, " ({message})"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `line` is 1-based; 0 for a proof without lines.
    Rejected { line: usize, reason: RejectReason },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProofChecker {
    pub tautology_atom_cap: usize,
}

impl Default for ProofChecker {
    fn default() -> Self {
        ProofChecker {
            tautology_atom_cap: DEFAULT_ATOM_CAP,
        }
    }
}

pub fn check_proof(proof: &Proof) -> Verdict {
    ProofChecker::default().check(proof)
}

impl ProofChecker {
    pub fn check(&self, proof: &Proof) -> Verdict {
        if proof.lines.is_empty() {
            return Verdict::Rejected {
                line: 0,
                reason: RejectReason::EmptyProof,
            };
        }
        let sig = &proof.sig;
        let hypotheses: Vec<Formula> = proof.hypotheses.iter().map(Formula::desugar).collect();
        if !hypotheses.iter().all(|h| h.is_valid_for(sig)) {
            return Verdict::Rejected {
                line: 0,
                reason: RejectReason::SignatureMismatch,
            };
        }
        let mut derived: Vec<Formula> = Vec::with_capacity(proof.lines.len());
        for (idx, line) in proof.lines.iter().enumerate() {
            let number = idx + 1;
            let formula = line.formula.desugar();
            if let Err(reason) = self.justify(sig, &hypotheses, &derived, number, &formula, &line.rule) {
                return Verdict::Rejected {
                    line: number,
                    reason,
                };
            }
            derived.push(formula);
        }
        Verdict::Accepted
    }

    fn justify(
        &self,
        sig: &Signature,
        hypotheses: &[Formula],
        derived: &[Formula],
        number: usize,
        formula: &Formula,
        rule: &Rule,
    ) -> Result<(), RejectReason> {
        if !formula.is_valid_for(sig) {
            return Err(RejectReason::SignatureMismatch);
        }
        match rule {
            Rule::Hypothesis(Some(i)) => match hypotheses.get(*i) {
                None => Err(RejectReason::BadReference { reference: i + 1 }),
                Some(h) if h == formula => Ok(()),
                Some(_) => Err(RejectReason::HypothesisMismatch),
            },
            Rule::Hypothesis(None) => hypotheses
                .contains(formula)
                .then_some(())
                .ok_or(RejectReason::HypothesisMismatch),
            Rule::Tautology => match is_tautology_capped(formula, self.tautology_atom_cap) {
                Ok(true) => Ok(()),
                Ok(false) => Err(RejectReason::NotATautology),
                Err(TautologyError::TooManyAtoms { count, cap }) => {
                    Err(RejectReason::TooManyAtoms { count, cap })
                }
            },
            Rule::Axiom {
                schema: Some(schema),
                substitution: Some(subst),
            } => {
                let expected = instantiate_schema(*schema, subst, sig).map_err(|e: SchemaError| {
                    RejectReason::InvalidInstance {
                        message: e.to_string(),
                    }
                })?;
                (expected == *formula)
                    .then_some(())
                    .ok_or(RejectReason::AxiomMismatch {
                        schema: Some(*schema),
                    })
            }
            Rule::Axiom {
                schema: Some(schema),
                substitution: None,
            } => match_schema(formula, *schema, sig)
                .map(|_| ())
                .ok_or(RejectReason::AxiomMismatch {
                    schema: Some(*schema),
                }),
            Rule::Axiom { schema: None, .. } => {
                if matching_schemas(formula, sig).is_empty() {
                    Err(RejectReason::AxiomMismatch { schema: None })
                } else {
                    Ok(())
                }
            }
            Rule::ModusPonens(i, j) => {
                let fetch = |r: usize| {
                    if r == 0 || r >= number {
                        Err(RejectReason::BadReference { reference: r })
                    } else {
                        Ok(&derived[r - 1])
                    }
                };
                let (minor, major) = (fetch(*i)?, fetch(*j)?);
                match major {
                    Formula::Implies(p, q) if **p == *minor && **q == *formula => Ok(()),
                    _ => Err(RejectReason::ModusPonensMismatch),
                }
            }
        }
    }
}

/// On-disk proof format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofFile {
    pub universe: Vec<String>,
    #[serde(default)]
    pub hypotheses: Vec<String>,
    pub lines: Vec<ProofFileLine>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofFileLine {
    pub formula: String,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subst: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refs: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("invalid proof JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid universe: {0}")]
    Signature(#[from] SignatureError),
    #[error("hypothesis {index}: {source}")]
    Hypothesis {
        index: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: {message}")]
    Rule { line: usize, message: String },
}

impl ProofFile {
    pub fn from_json(text: &str) -> Result<Self, ProofFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_proof(self) -> Result<Proof, ProofFileError> {
        let sig = Arc::new(Signature::new(self.universe)?);
        let hypotheses = self
            .hypotheses
            .iter()
            .enumerate()
            .map(|(i, text)| {
                parse_formula(text, &sig).map_err(|source| ProofFileError::Hypothesis {
                    index: i + 1,
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut lines = Vec::with_capacity(self.lines.len());
        for (idx, raw) in self.lines.into_iter().enumerate() {
            let line = idx + 1;
            let formula = parse_formula(&raw.formula, &sig)
                .map_err(|source| ProofFileError::Formula { line, source })?;
            let rule = parse_rule(&raw, &sig).map_err(|message| ProofFileError::Rule { line, message })?;
            lines.push(ProofLine { formula, rule });
        }
        Ok(Proof {
            sig,
            hypotheses,
            lines,
        })
    }
}

fn parse_rule(raw: &ProofFileLine, sig: &Signature) -> Result<Rule, String> {
    match raw.rule.to_ascii_lowercase().as_str() {
        "hypothesis" | "hyp" => match raw.refs.as_slice() {
            [] => Ok(Rule::Hypothesis(None)),
            [0] => Err("hypothesis references are 1-based".into()),
            [k] => Ok(Rule::Hypothesis(Some(k - 1))),
            _ => Err("a hypothesis line takes at most one reference".into()),
        },
        "tautology" | "taut" => Ok(Rule::Tautology),
        "axiom" => {
            let schema = raw
                .schema
                .as_deref()
                .map(|s| s.parse::<AxiomSchema>().map_err(|s| format!("unknown schema `{s}`")))
                .transpose()?;
            let substitution = raw
                .subst
                .as_ref()
                .map(|map| {
                    let mut s = Substitution::new();
                    for (var, names) in map {
                        let var: SetVar = var
                            .parse()
                            .map_err(|v| format!("unknown metavariable `{v}`"))?;
                        let set = sig
                            .set_of(names)
                            .map_err(|n| format!("unknown vertex `{n}` in substitution"))?;
                        s.insert(var, set);
                    }
                    Ok::<_, String>(s)
                })
                .transpose()?;
            if schema.is_none() && substitution.is_some() {
                return Err("a substitution needs a schema".into());
            }
            Ok(Rule::Axiom {
                schema,
                substitution,
            })
        }
        "mp" | "modus_ponens" | "modusponens" => match raw.refs.as_slice() {
            [i, j] => Ok(Rule::ModusPonens(*i, *j)),
            _ => Err("modus ponens takes exactly two references".into()),
        },
        other => Err(format!("unknown rule `{other}`")),
    }
}

/// Parses a proof file from JSON text.
pub fn load_proof(text: &str) -> Result<Proof, ProofFileError> {
    ProofFile::from_json(text)?.into_proof()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symmetry_proof(rule2: Rule) -> Proof {
        let sig = Arc::new(Signature::new(["a", "b", "c"]).unwrap());
        let p = |t: &str| parse_formula(t, &sig).unwrap();
        Proof {
            hypotheses: vec![p("a|b|c")],
            lines: vec![
                ProofLine {
                    formula: p("a|b|c"),
                    rule: Rule::Hypothesis(Some(0)),
                },
                ProofLine {
                    formula: p("a|b|c -> c|b|a"),
                    rule: rule2,
                },
                ProofLine {
                    formula: p("c|b|a"),
                    rule: Rule::ModusPonens(1, 2),
                },
            ],
            sig,
        }
    }

    fn symmetry_axiom() -> Rule {
        Rule::Axiom {
            schema: Some(AxiomSchema::Symmetry),
            substitution: None,
        }
    }

    #[test]
    fn accepts_symmetry_derivation() {
        assert_eq!(check_proof(&symmetry_proof(symmetry_axiom())), Verdict::Accepted);
    }

    #[test]
    fn rejects_contingent_tautology_claim() {
        assert_eq!(
            check_proof(&symmetry_proof(Rule::Tautology)),
            Verdict::Rejected {
                line: 2,
                reason: RejectReason::NotATautology
            }
        );
    }

    #[test]
    fn rejects_empty_proof() {
        let mut proof = symmetry_proof(symmetry_axiom());
        proof.lines.clear();
        assert_eq!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 0,
                reason: RejectReason::EmptyProof
            }
        );
    }

    #[test]
    fn rejects_forward_and_out_of_range_references() {
        let mut proof = symmetry_proof(symmetry_axiom());
        proof.lines[2].rule = Rule::ModusPonens(1, 3);
        assert_eq!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 3,
                reason: RejectReason::BadReference { reference: 3 }
            }
        );
        proof.lines[2].rule = Rule::ModusPonens(0, 2);
        assert_eq!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 3,
                reason: RejectReason::BadReference { reference: 0 }
            }
        );
        proof.lines[0].rule = Rule::Hypothesis(Some(4));
        assert_eq!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 1,
                reason: RejectReason::BadReference { reference: 5 }
            }
        );
    }

    #[test]
    fn rejects_swapped_modus_ponens() {
        let mut proof = symmetry_proof(symmetry_axiom());
        proof.lines[2].rule = Rule::ModusPonens(2, 1);
        assert_eq!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 3,
                reason: RejectReason::ModusPonensMismatch
            }
        );
    }

    #[test]
    fn rejects_wrong_schema_and_substitution() {
        let sig = Signature::new(["a", "b", "c"]).unwrap();
        let proof = symmetry_proof(Rule::Axiom {
            schema: Some(AxiomSchema::Aggregation),
            substitution: None,
        });
        assert_eq!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 2,
                reason: RejectReason::AxiomMismatch {
                    schema: Some(AxiomSchema::Aggregation)
                }
            }
        );
        let wrong = Substitution::new()
            .with(SetVar::A, sig.set_of(&["c"]).unwrap())
            .with(SetVar::B, sig.set_of(&["b"]).unwrap())
            .with(SetVar::C, sig.set_of(&["a"]).unwrap());
        let proof = symmetry_proof(Rule::Axiom {
            schema: Some(AxiomSchema::Symmetry),
            substitution: Some(wrong),
        });
        assert!(matches!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 2,
                reason: RejectReason::AxiomMismatch { .. }
            }
        ));
    }

    #[test]
    fn hypothesis_without_index_searches_the_list() {
        let mut proof = symmetry_proof(symmetry_axiom());
        proof.lines[0].rule = Rule::Hypothesis(None);
        assert!(check_proof(&proof).is_accepted());
        proof.hypotheses.clear();
        assert_eq!(
            check_proof(&proof),
            Verdict::Rejected {
                line: 1,
                reason: RejectReason::HypothesisMismatch
            }
        );
    }

    #[test]
    fn sugar_is_compared_after_desugaring() {
        let sig = Arc::new(Signature::new(["a", "b", "c"]).unwrap());
        let p = |t: &str| parse_formula(t, &sig).unwrap();
        let proof = Proof {
            hypotheses: vec![p("a|b|c & c|b|a")],
            lines: vec![
                ProofLine {
                    formula: p("~(a|b|c -> ~(c|b|a))"),
                    rule: Rule::Hypothesis(Some(0)),
                },
                ProofLine {
                    formula: p("(a|b|c & c|b|a) -> a|b|c"),
                    rule: Rule::Tautology,
                },
                ProofLine {
                    formula: p("a|b|c"),
                    rule: Rule::ModusPonens(1, 2),
                },
            ],
            sig,
        };
        assert!(check_proof(&proof).is_accepted());
    }

    #[test]
    fn loads_json_proof() {
        let text = r#"{
            "universe": ["a", "b", "c"],
            "hypotheses": ["a|b|c"],
            "lines": [
                {"formula": "a|b|c", "rule": "hypothesis", "refs": [1]},
                {"formula": "a|b|c -> c|b|a", "rule": "axiom", "schema": "Symmetry",
                 "subst": {"A": ["a"], "B": ["b"], "C": ["c"]}},
                {"formula": "c|b|a", "rule": "mp", "refs": [1, 2]}
            ]
        }"#;
        let proof = load_proof(text).unwrap();
        assert_eq!(proof.lines[0].rule, Rule::Hypothesis(Some(0)));
        assert!(check_proof(&proof).is_accepted());
    }

    #[test]
    fn malformed_files_are_load_errors() {
        assert!(matches!(load_proof("{\"universe\": [\"a\""), Err(ProofFileError::Json(_))));
        let bad_rule = r#"{"universe":["a"],"lines":[{"formula":"a|a|a","rule":"magic"}]}"#;
        assert!(matches!(load_proof(bad_rule), Err(ProofFileError::Rule { line: 1, .. })));
        let bad_mp = r#"{"universe":["a"],"lines":[{"formula":"a|a|a","rule":"mp","refs":[1]}]}"#;
        assert!(matches!(load_proof(bad_mp), Err(ProofFileError::Rule { line: 1, .. })));
        let bad_formula = r#"{"universe":["a"],"lines":[{"formula":"a|x|a","rule":"tautology"}]}"#;
        assert!(matches!(load_proof(bad_formula), Err(ProofFileError::Formula { line: 1, .. })));
    }
}

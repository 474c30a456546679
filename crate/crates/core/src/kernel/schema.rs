//! The nine axiom schemas, their instantiation and recognition.
//!
//! Templates (comma inside an atom is set union):
//!
//! | schema               | template                                              | side condition |
//! |----------------------|-------------------------------------------------------|----------------|
//! | TrivialPath          | `~(A|B|C)`                                            | `A ∩ C ≠ ∅`    |
//! | EmptySet             | `{}|B|C`                                              |                |
//! | ShortestPath         | `A|B|C -> A|B∖A|C`                                    |                |
//! | Aggregation          | `A1|B|C -> (A2|B|C -> A1,A2|B|C)`                     |                |
//! | Symmetry             | `A|B|C -> C|B|A`                                      |                |
//! | LeftMonotonicity     | `A1,A2|B|C -> A1|B|C`                                 |                |
//! | CentralMonotonicity  | `A|B1|C -> A|B1,B2|C`                                 |                |
//! | Insertion            | `A|B1,I,B2|C -> (A|I,C|B1 -> (B2|A,I|C -> A|I|C))`    |                |
//! | Transitivity         | `~(A|B|d) -> (~(d|B|C) -> ~(A|B|C))`                  | `d ∉ B`        |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Atom, Formula, Signature, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AxiomSchema {
    TrivialPath,
    EmptySet,
    ShortestPath,
    Aggregation,
    Symmetry,
    LeftMonotonicity,
    CentralMonotonicity,
    Insertion,
    Transitivity,
}

/// Metavariables ranging over vertex sets. `D` ranges over single vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SetVar {
    A,
    B,
    C,
    A1,
    A2,
    B1,
    B2,
    I,
    #[serde(rename = "d")]
    D,
}

impl SetVar {
    pub fn name(self) -> &'static str {
        match self {
            SetVar::A => "A",
            SetVar::B => "B",
            SetVar::C => "C",
            SetVar::A1 => "A1",
            SetVar::A2 => "A2",
            SetVar::B1 => "B1",
            SetVar::B2 => "B2",
            SetVar::I => "I",
            SetVar::D => "d",
        }
    }
}

impl fmt::Display for SetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "A" => SetVar::A,
            "B" => SetVar::B,
            "C" => SetVar::C,
            "A1" => SetVar::A1,
            "A2" => SetVar::A2,
            "B1" => SetVar::B1,
            "B2" => SetVar::B2,
            "I" => SetVar::I,
            "d" | "D" => SetVar::D,
            _ => return Err(s.to_string()),
        })
    }
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 9] = [
        AxiomSchema::TrivialPath,
        AxiomSchema::EmptySet,
        AxiomSchema::ShortestPath,
        AxiomSchema::Aggregation,
        AxiomSchema::Symmetry,
        AxiomSchema::LeftMonotonicity,
        AxiomSchema::CentralMonotonicity,
        AxiomSchema::Insertion,
        AxiomSchema::Transitivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::TrivialPath => "TrivialPath",
            AxiomSchema::EmptySet => "EmptySet",
            AxiomSchema::ShortestPath => "ShortestPath",
            AxiomSchema::Aggregation => "Aggregation",
            AxiomSchema::Symmetry => "Symmetry",
            AxiomSchema::LeftMonotonicity => "LeftMonotonicity",
            AxiomSchema::CentralMonotonicity => "CentralMonotonicity",
            AxiomSchema::Insertion => "Insertion",
            AxiomSchema::Transitivity => "Transitivity",
        }
    }

    /// The metavariables a substitution must supply, in display order.
    pub fn vars(self) -> &'static [SetVar] {
        use SetVar::*;
        match self {
            AxiomSchema::TrivialPath | AxiomSchema::ShortestPath | AxiomSchema::Symmetry => {
                &[A, B, C]
            }
            AxiomSchema::EmptySet => &[B, C],
            AxiomSchema::Aggregation | AxiomSchema::LeftMonotonicity => &[A1, A2, B, C],
            AxiomSchema::CentralMonotonicity => &[A, B1, B2, C],
            AxiomSchema::Insertion => &[A, B1, I, B2, C],
            AxiomSchema::Transitivity => &[A, B, C, D],
        }
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomSchema {
    type Err = String;

    /// Accepts the canonical name in any case, with or without `_`, `-` or
    /// spaces between words.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        AxiomSchema::ALL
            .into_iter()
            .find(|schema| schema.name().to_lowercase() == key)
            .ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("{schema} needs a value for {var}")]
    MissingSubstituent { schema: AxiomSchema, var: SetVar },
    #[error("{schema} has no metavariable {var}")]
    UnexpectedSubstituent { schema: AxiomSchema, var: SetVar },
    #[error("{schema} side condition violated: {condition}")]
    SideConditionViolated {
        schema: AxiomSchema,
        condition: &'static str,
    },
    #[error("substitution for {var} mentions vertices outside the universe")]
    SignatureMismatch { var: SetVar },
}

/// An assignment of vertex sets to metavariables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution(BTreeMap<SetVar, VertexSet>);

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn with(mut self, var: SetVar, set: VertexSet) -> Self {
        self.0.insert(var, set);
        self
    }

    pub fn insert(&mut self, var: SetVar, set: VertexSet) {
        self.0.insert(var, set);
    }

    pub fn get(&self, var: SetVar) -> Option<VertexSet> {
        self.0.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SetVar, VertexSet)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    /// `A={a} B={b,c} C={}`.
    pub fn render(&self, sig: &Signature) -> String {
        self.0
            .iter()
            .map(|(var, set)| {
                let members = set.iter().map(|v| sig.name(v)).collect::<Vec<_>>().join(",");
                format!("{var}={{{members}}}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Names per metavariable, as used in proof files and JSON reports.
    pub fn to_names(&self, sig: &Signature) -> BTreeMap<String, Vec<String>> {
        self.0
            .iter()
            .map(|(var, set)| {
                (
                    var.name().to_string(),
                    set.iter().map(|v| sig.name(v).to_string()).collect(),
                )
            })
            .collect()
    }
}

/// A formula together with the schema and substitution that produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomInstance {
    pub schema: AxiomSchema,
    pub substitution: Substitution,
    pub formula: Formula,
}

fn atom(l: VertexSet, m: VertexSet, r: VertexSet) -> Formula {
    Formula::atom(l, m, r)
}

/// Builds the template formula of `schema` under `subst`.
pub fn instantiate_schema(
    schema: AxiomSchema,
    subst: &Substitution,
    sig: &Signature,
) -> Result<Formula, SchemaError> {
    for (var, set) in subst.iter() {
        if !schema.vars().contains(&var) {
            return Err(SchemaError::UnexpectedSubstituent { schema, var });
        }
        if !sig.contains_set(set) {
            return Err(SchemaError::SignatureMismatch { var });
        }
    }
    let get = |var: SetVar| {
        subst
            .get(var)
            .ok_or(SchemaError::MissingSubstituent { schema, var })
    };
    let side = |condition: &'static str| SchemaError::SideConditionViolated { schema, condition };

    use SetVar::*;
    let formula = match schema {
        AxiomSchema::TrivialPath => {
            let (a, b, c) = (get(A)?, get(B)?, get(C)?);
            if a.is_disjoint(c) {
                return Err(side("A and C must intersect"));
            }
            Formula::not(atom(a, b, c))
        }
        AxiomSchema::EmptySet => atom(VertexSet::EMPTY, get(B)?, get(C)?),
        AxiomSchema::ShortestPath => {
            let (a, b, c) = (get(A)?, get(B)?, get(C)?);
            Formula::implies(atom(a, b, c), atom(a, b.difference(a), c))
        }
        AxiomSchema::Aggregation => {
            let (a1, a2, b, c) = (get(A1)?, get(A2)?, get(B)?, get(C)?);
            Formula::implies_chain(
                [atom(a1, b, c), atom(a2, b, c)],
                atom(a1.union(a2), b, c),
            )
        }
        AxiomSchema::Symmetry => {
            let (a, b, c) = (get(A)?, get(B)?, get(C)?);
            Formula::implies(atom(a, b, c), atom(c, b, a))
        }
        AxiomSchema::LeftMonotonicity => {
            let (a1, a2, b, c) = (get(A1)?, get(A2)?, get(B)?, get(C)?);
            Formula::implies(atom(a1.union(a2), b, c), atom(a1, b, c))
        }
        AxiomSchema::CentralMonotonicity => {
            let (a, b1, b2, c) = (get(A)?, get(B1)?, get(B2)?, get(C)?);
            Formula::implies(atom(a, b1, c), atom(a, b1.union(b2), c))
        }
        AxiomSchema::Insertion => {
            let (a, b1, i, b2, c) = (get(A)?, get(B1)?, get(I)?, get(B2)?, get(C)?);
            Formula::implies_chain(
                [
                    atom(a, b1.union(i).union(b2), c),
                    atom(a, i.union(c), b1),
                    atom(b2, a.union(i), c),
                ],
                atom(a, i, c),
            )
        }
        AxiomSchema::Transitivity => {
            let (a, b, c, d) = (get(A)?, get(B)?, get(C)?, get(D)?);
            if d.as_singleton().is_none() {
                return Err(side("d must be a single vertex"));
            }
            if !d.is_disjoint(b) {
                return Err(side("d must not belong to B"));
            }
            transitivity_template(a, b, c, d)
        }
    };
    Ok(formula)
}

/// `~(A|B|d) -> (~(d|B|C) -> ~(A|B|C))` without checking `d ∉ B`.
pub fn transitivity_template(a: VertexSet, b: VertexSet, c: VertexSet, d: VertexSet) -> Formula {
    Formula::implies_chain(
        [Formula::not(atom(a, b, d)), Formula::not(atom(d, b, c))],
        Formula::not(atom(a, b, c)),
    )
}

fn as_atom(f: &Formula) -> Option<&Atom> {
    match f {
        Formula::Atom(a) => Some(a),
        _ => None,
    }
}

fn as_not_atom(f: &Formula) -> Option<&Atom> {
    match f {
        Formula::Not(inner) => as_atom(inner),
        _ => None,
    }
}

fn as_implies(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(l, r) => Some((l, r)),
        _ => None,
    }
}

/// Splits `p1 -> (p2 -> .. -> goal)` into exactly `n` premises and a goal.
fn premises(f: &Formula, n: usize) -> Option<(Vec<&Formula>, &Formula)> {
    let mut out = Vec::with_capacity(n);
    let mut rest = f;
    for _ in 0..n {
        let (p, r) = as_implies(rest)?;
        out.push(p);
        rest = r;
    }
    Some((out, rest))
}

fn recognize(schema: AxiomSchema, f: &Formula) -> Option<Substitution> {
    use SetVar::*;
    let s = Substitution::new();
    match schema {
        AxiomSchema::TrivialPath => {
            let t = as_not_atom(f)?;
            (!t.left.is_disjoint(t.right))
                .then(|| s.with(A, t.left).with(B, t.middle).with(C, t.right))
        }
        AxiomSchema::EmptySet => {
            let t = as_atom(f)?;
            t.left
                .is_empty()
                .then(|| s.with(B, t.middle).with(C, t.right))
        }
        AxiomSchema::ShortestPath => {
            let (p, q) = as_implies(f)?;
            let (p, q) = (as_atom(p)?, as_atom(q)?);
            (q.left == p.left && q.right == p.right && q.middle == p.middle.difference(p.left))
                .then(|| s.with(A, p.left).with(B, p.middle).with(C, p.right))
        }
        AxiomSchema::Aggregation => {
            let (ps, goal) = premises(f, 2)?;
            let (p, q, goal) = (as_atom(ps[0])?, as_atom(ps[1])?, as_atom(goal)?);
            let same_bc = |x: &Atom| x.middle == p.middle && x.right == p.right;
            (same_bc(q) && same_bc(goal) && goal.left == p.left.union(q.left)).then(|| {
                s.with(A1, p.left)
                    .with(A2, q.left)
                    .with(B, p.middle)
                    .with(C, p.right)
            })
        }
        AxiomSchema::Symmetry => {
            let (p, q) = as_implies(f)?;
            let (p, q) = (as_atom(p)?, as_atom(q)?);
            (q.left == p.right && q.middle == p.middle && q.right == p.left)
                .then(|| s.with(A, p.left).with(B, p.middle).with(C, p.right))
        }
        AxiomSchema::LeftMonotonicity => {
            let (p, q) = as_implies(f)?;
            let (p, q) = (as_atom(p)?, as_atom(q)?);
            (q.middle == p.middle && q.right == p.right && q.left.is_subset(p.left)).then(|| {
                s.with(A1, q.left)
                    .with(A2, p.left.difference(q.left))
                    .with(B, p.middle)
                    .with(C, p.right)
            })
        }
        AxiomSchema::CentralMonotonicity => {
            let (p, q) = as_implies(f)?;
            let (p, q) = (as_atom(p)?, as_atom(q)?);
            (q.left == p.left && q.right == p.right && p.middle.is_subset(q.middle)).then(|| {
                s.with(A, p.left)
                    .with(B1, p.middle)
                    .with(B2, q.middle.difference(p.middle))
                    .with(C, p.right)
            })
        }
        AxiomSchema::Insertion => {
            // Every metavariable is pinned by some atom position, so the
            // partition of the first middle set is determined.
            let (ps, goal) = premises(f, 3)?;
            let (outer, left, right, goal) = (
                as_atom(ps[0])?,
                as_atom(ps[1])?,
                as_atom(ps[2])?,
                as_atom(goal)?,
            );
            let (a, c, i) = (goal.left, goal.right, goal.middle);
            let (b1, b2) = (left.right, right.left);
            let ok = outer.left == a
                && outer.right == c
                && outer.middle == b1.union(i).union(b2)
                && left.left == a
                && left.middle == i.union(c)
                && right.middle == a.union(i)
                && right.right == c;
            ok.then(|| {
                s.with(A, a)
                    .with(B1, b1)
                    .with(I, i)
                    .with(B2, b2)
                    .with(C, c)
            })
        }
        AxiomSchema::Transitivity => {
            let (ps, goal) = premises(f, 2)?;
            let (first, second, goal) =
                (as_not_atom(ps[0])?, as_not_atom(ps[1])?, as_not_atom(goal)?);
            let d = first.right;
            let (a, b, c) = (goal.left, goal.middle, goal.right);
            let ok = d.as_singleton().is_some()
                && d.is_disjoint(b)
                && first.left == a
                && first.middle == b
                && second.left == d
                && second.middle == b
                && second.right == c;
            ok.then(|| s.with(A, a).with(B, b).with(C, c).with(D, d))
        }
    }
}

/// Recognizes `f` as an instance of `schema`.
pub fn match_schema(f: &Formula, schema: AxiomSchema, sig: &Signature) -> Option<AxiomInstance> {
    if !f.is_valid_for(sig) {
        return None;
    }
    let substitution = recognize(schema, f)?;
    debug_assert_eq!(
        instantiate_schema(schema, &substitution, sig).as_ref(),
        Ok(f)
    );
    Some(AxiomInstance {
        schema,
        substitution,
        formula: f.clone(),
    })
}

/// The first schema (in [`AxiomSchema::ALL`] order) that `f` instantiates.
pub fn match_axiom_instance(f: &Formula, sig: &Signature) -> Option<AxiomInstance> {
    AxiomSchema::ALL
        .into_iter()
        .find_map(|schema| match_schema(f, schema, sig))
}

/// Every schema `f` instantiates; a formula can fit several.
pub fn matching_schemas(f: &Formula, sig: &Signature) -> Vec<AxiomInstance> {
    AxiomSchema::ALL
        .into_iter()
        .filter_map(|schema| match_schema(f, schema, sig))
        .collect()
}

/// Every substitution for `schema` over a universe of `n` vertices that
/// satisfies the side conditions, in a fixed order.
pub fn all_substitutions(schema: AxiomSchema, n: usize) -> impl Iterator<Item = Substitution> {
    let vars = schema.vars();
    let choices: Vec<Vec<VertexSet>> = vars
        .iter()
        .map(|&var| {
            if var == SetVar::D {
                (0..n).map(VertexSet::singleton).collect()
            } else {
                VertexSet::all_subsets(n).collect()
            }
        })
        .collect();
    let total: usize = choices.iter().map(Vec::len).product();
    (0..total).filter_map(move |mut idx| {
        let mut s = Substitution::new();
        for (var, options) in vars.iter().zip(&choices).rev() {
            s.insert(*var, options[idx % options.len()]);
            idx /= options.len();
        }
        side_conditions_hold(schema, &s).then_some(s)
    })
}

pub fn side_conditions_hold(schema: AxiomSchema, s: &Substitution) -> bool {
    match schema {
        AxiomSchema::TrivialPath => match (s.get(SetVar::A), s.get(SetVar::C)) {
            (Some(a), Some(c)) => !a.is_disjoint(c),
            _ => false,
        },
        AxiomSchema::Transitivity => match (s.get(SetVar::D), s.get(SetVar::B)) {
            (Some(d), Some(b)) => d.as_singleton().is_some() && d.is_disjoint(b),
            _ => false,
        },
        _ => true,
    }
}

//! Validity and entailment over all labeled graphs on a fixed universe.
//!
//! Every axiom holds in every graph and every formula true in all graphs on
//! `V` is derivable, so checking all `2^(n(n+1)/2)` graphs decides
//! derivability over `V`. Graphs are indexed by a bitmask over the vertex
//! pairs `aa, ab, .., bb, bc, ..` (see [`crate::graph::pairs`]): bit `i` of
//! the index is set when pair `i` is an edge. Countermodels are always the
//! falsifier with the smallest index.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{pair_count, pairs, Graph};
use crate::kernel::schema::{
    all_substitutions, instantiate_schema, side_conditions_hold, AxiomSchema, SchemaError, SetVar,
    Substitution,
};
use crate::par;
use crate::semantics::{formula_holds, ReachTable, Semantics};
use crate::syntax::{Formula, Signature, VertexSet};

pub const DEFAULT_MAX_UNIVERSE: usize = 5;
pub const HARD_MAX_UNIVERSE: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("universe has {size} vertices; the limit is {limit}")]
    UniverseTooLarge { size: usize, limit: usize },
    #[error("universe limit {0} exceeds the hard ceiling of {HARD_MAX_UNIVERSE}")]
    LimitAboveCeiling(usize),
    #[error("formula mentions vertices outside the universe")]
    SignatureMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecisionConfig {
    pub max_universe: usize,
    pub workers: usize,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            max_universe: DEFAULT_MAX_UNIVERSE,
            workers: 1,
        }
    }
}

impl DecisionConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_max_universe(mut self, max_universe: usize) -> Self {
        self.max_universe = max_universe;
        self
    }

    fn admit(&self, sig: &Signature) -> Result<(), DecisionError> {
        if self.max_universe > HARD_MAX_UNIVERSE {
            return Err(DecisionError::LimitAboveCeiling(self.max_universe));
        }
        if sig.len() > self.max_universe {
            return Err(DecisionError::UniverseTooLarge {
                size: sig.len(),
                limit: self.max_universe,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Countermodel(Graph),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn countermodel(&self) -> Option<&Graph> {
        match self {
            Verdict::Valid => None,
            Verdict::Countermodel(g) => Some(g),
        }
    }
}

/// All labeled graphs on a universe, addressable by index.
#[derive(Debug, Clone)]
pub struct GraphSpace {
    sig: Arc<Signature>,
    pairs: Vec<(usize, usize)>,
}

impl GraphSpace {
    pub fn len(&self) -> u64 {
        1u64 << self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn graph(&self, index: u64) -> Graph {
        Graph::from_pair_mask(self.sig.clone(), &self.pairs, index)
    }

    pub fn iter(&self) -> impl Iterator<Item = Graph> + '_ {
        (0..self.len()).map(|i| self.graph(i))
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }
}

/// The space of graphs over `sig`, in index order.
pub fn enumerate_graphs(sig: Arc<Signature>, config: &DecisionConfig) -> Result<GraphSpace, DecisionError> {
    config.admit(&sig)?;
    debug_assert_eq!(pairs(sig.len()).len(), pair_count(sig.len()));
    Ok(GraphSpace {
        pairs: pairs(sig.len()),
        sig,
    })
}

/// First graph, in index order, that satisfies every hypothesis and falsifies
/// `goal`.
fn search(
    hypotheses: &[Formula],
    goal: &Formula,
    sig: Arc<Signature>,
    mode: Semantics,
    config: &DecisionConfig,
) -> Result<Verdict, DecisionError> {
    if !goal.is_valid_for(&sig) || !hypotheses.iter().all(|h| h.is_valid_for(&sig)) {
        return Err(DecisionError::SignatureMismatch);
    }
    let space = enumerate_graphs(sig, config)?;
    let falsifies = |g: &Graph| {
        hypotheses.iter().all(|h| formula_holds(g, h, mode)) && !formula_holds(g, goal, mode)
    };
    let found = par::find_first(space.len(), config.workers, |i| falsifies(&space.graph(i)));
    Ok(match found {
        None => Verdict::Valid,
        Some(i) => {
            let g = space.graph(i);
            assert!(falsifies(&g), "countermodel {i} failed re-validation");
            Verdict::Countermodel(g)
        }
    })
}

/// Valid iff `f` holds in every graph on `sig`.
pub fn check_validity(
    f: &Formula,
    sig: Arc<Signature>,
    mode: Semantics,
    config: &DecisionConfig,
) -> Result<Verdict, DecisionError> {
    search(&[], f, sig, mode, config)
}

/// Valid iff every graph satisfying all `hypotheses` satisfies `goal`.
pub fn entails(
    hypotheses: &[Formula],
    goal: &Formula,
    sig: Arc<Signature>,
    mode: Semantics,
    config: &DecisionConfig,
) -> Result<Verdict, DecisionError> {
    search(hypotheses, goal, sig, mode, config)
}

/// Variants of the insertion principle, from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InsertionForm {
    /// `A|B1,B2|C -> (A|I|B1 -> (B2|I|C -> A|I|C))`
    Weak1,
    /// `A|B1,I,B2|C -> (A|I|B1 -> (B2|I|C -> A|I|C))`
    Weak2,
    /// `A|B1,I,B2|C -> (A|I,C|B1 -> (B2|A,I|C -> A|I|C))`, the Insertion axiom.
    Strongest,
}

impl InsertionForm {
    pub const ALL: [InsertionForm; 3] = [
        InsertionForm::Weak1,
        InsertionForm::Weak2,
        InsertionForm::Strongest,
    ];
}

pub fn insertion_principle(
    form: InsertionForm,
    subst: &Substitution,
    sig: &Signature,
) -> Result<Formula, SchemaError> {
    if form == InsertionForm::Strongest {
        return instantiate_schema(AxiomSchema::Insertion, subst, sig);
    }
    let schema = AxiomSchema::Insertion;
    let get = |var| {
        subst
            .get(var)
            .ok_or(SchemaError::MissingSubstituent { schema, var })
    };
    let (a, b1, i, b2, c) = (
        get(SetVar::A)?,
        get(SetVar::B1)?,
        get(SetVar::I)?,
        get(SetVar::B2)?,
        get(SetVar::C)?,
    );
    for (var, set) in subst.iter() {
        if !schema.vars().contains(&var) {
            return Err(SchemaError::UnexpectedSubstituent { schema, var });
        }
        if !sig.contains_set(set) {
            return Err(SchemaError::SignatureMismatch { var });
        }
    }
    let outer_middle = match form {
        InsertionForm::Weak1 => b1.union(b2),
        _ => b1.union(i).union(b2),
    };
    Ok(Formula::implies_chain(
        [
            Formula::atom(a, outer_middle, c),
            Formula::atom(a, i, b1),
            Formula::atom(b2, i, c),
        ],
        Formula::atom(a, i, c),
    ))
}

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub decision: DecisionConfig,
    /// Substitutions sampled per schema when the universe is too large for
    /// an exhaustive sweep.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            decision: DecisionConfig::default(),
            samples: 32,
            seed: 0,
        }
    }
}

/// Largest universe swept exhaustively.
pub const EXHAUSTIVE_SWEEP_LIMIT: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepFailure {
    pub graph: Graph,
    pub substitution: Substitution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaReport {
    pub schema: AxiomSchema,
    pub instances: u64,
    pub graphs: u64,
    /// Failing (instance, graph) pairs.
    pub failures: u64,
    /// The failure on the lowest-index graph, lowest instance first.
    pub first_failure: Option<SweepFailure>,
}

impl SchemaReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub mode: Semantics,
    pub exhaustive: bool,
    pub schemas: Vec<SchemaReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.schemas.iter().all(SchemaReport::passed)
    }
}

/// Uniform random substitution honouring the schema's side conditions.
pub fn random_substitution<R: Rng>(schema: AxiomSchema, n: usize, rng: &mut R) -> Substitution {
    let mut s = Substitution::new();
    let full = VertexSet::full(n).bits();
    for &var in schema.vars() {
        let set = if var == SetVar::D {
            VertexSet::singleton(rng.gen_range(0..n))
        } else {
            VertexSet::from_bits(rng.gen::<u64>() & full)
        };
        s.insert(var, set);
    }
    match schema {
        AxiomSchema::TrivialPath => {
            let a = s.get(SetVar::A).unwrap_or_default();
            if a.is_disjoint(s.get(SetVar::C).unwrap_or_default()) {
                let shared = *(0..n).collect::<Vec<_>>().choose(rng).expect("non-empty universe");
                s.insert(SetVar::A, a.with(shared));
                let c = s.get(SetVar::C).unwrap_or_default();
                s.insert(SetVar::C, c.with(shared));
            }
        }
        AxiomSchema::Transitivity => {
            let d = s.get(SetVar::D).unwrap_or_default();
            let b = s.get(SetVar::B).unwrap_or_default();
            s.insert(SetVar::B, b.difference(d));
        }
        _ => {}
    }
    debug_assert!(side_conditions_hold(schema, &s));
    s
}

struct ChunkTally {
    failures: u64,
    first: Option<(u64, usize)>,
}

/// Checks every instance of every schema against every graph on `sig`.
///
/// Universes up to [`EXHAUSTIVE_SWEEP_LIMIT`] are swept over all
/// substitutions; larger ones over `samples` seeded random substitutions per
/// schema.
pub fn schema_validity_sweep(
    sig: Arc<Signature>,
    mode: Semantics,
    config: &SweepConfig,
) -> Result<SweepReport, DecisionError> {
    let n = sig.len();
    let space = enumerate_graphs(sig.clone(), &config.decision)?;
    let exhaustive = n <= EXHAUSTIVE_SWEEP_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut schemas = Vec::with_capacity(AxiomSchema::ALL.len());
    for schema in AxiomSchema::ALL {
        let substitutions: Vec<Substitution> = if exhaustive {
            all_substitutions(schema, n).collect()
        } else {
            (0..config.samples)
                .map(|_| random_substitution(schema, n, &mut rng))
                .collect()
        };
        let formulas: Vec<Formula> = substitutions
            .iter()
            .map(|s| instantiate_schema(schema, s, &sig).expect("side conditions honoured"))
            .collect();
        let tallies = par::map_chunks(space.len(), config.decision.workers, |range| {
            let mut tally = ChunkTally {
                failures: 0,
                first: None,
            };
            for index in range {
                let table = ReachTable::new(&space.graph(index));
                for (k, f) in formulas.iter().enumerate() {
                    if !table.formula_holds(f, mode) {
                        tally.failures += 1;
                        tally.first.get_or_insert((index, k));
                    }
                }
            }
            tally
        });
        let failures = tallies.iter().map(|t| t.failures).sum();
        let first_failure = tallies.iter().find_map(|t| t.first).map(|(index, k)| SweepFailure {
            graph: space.graph(index),
            substitution: substitutions[k].clone(),
        });
        schemas.push(SchemaReport {
            schema,
            instances: formulas.len() as u64,
            graphs: space.len(),
            failures,
            first_failure,
        });
    }
    Ok(SweepReport {
        mode,
        exhaustive,
        schemas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::semantics::eval_formula;

    fn sig(names: &[&str]) -> Arc<Signature> {
        Arc::new(Signature::new(names.iter().copied()).unwrap())
    }

    #[test]
    fn graph_counts() {
        let cfg = DecisionConfig::default();
        assert_eq!(enumerate_graphs(sig(&["a"]), &cfg).unwrap().len(), 2);
        assert_eq!(enumerate_graphs(sig(&["a", "b"]), &cfg).unwrap().len(), 8);
        assert_eq!(enumerate_graphs(sig(&["a", "b", "c"]), &cfg).unwrap().len(), 64);
        let space = enumerate_graphs(sig(&["a", "b"]), &cfg).unwrap();
        let graphs: Vec<_> = space.iter().map(|g| g.edges()).collect();
        assert_eq!(graphs[0], vec![]);
        assert_eq!(graphs[1], vec![(0, 0)]);
        assert_eq!(graphs[2], vec![(0, 1)]);
        assert_eq!(graphs[7], vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn universe_caps() {
        let six = sig(&["a", "b", "c", "d", "e", "f"]);
        assert_eq!(
            enumerate_graphs(six.clone(), &DecisionConfig::default()).unwrap_err(),
            DecisionError::UniverseTooLarge { size: 6, limit: 5 }
        );
        assert!(enumerate_graphs(six, &DecisionConfig::default().with_max_universe(6)).is_ok());
        assert_eq!(
            enumerate_graphs(sig(&["a"]), &DecisionConfig::default().with_max_universe(8))
                .unwrap_err(),
            DecisionError::LimitAboveCeiling(8)
        );
    }

    #[test]
    fn symmetry_instance_is_valid() {
        let s = sig(&["a", "b", "c"]);
        let f = parse_formula("a|b|c -> c|b|a", &s).unwrap();
        let v = check_validity(&f, s, Semantics::Strict, &DecisionConfig::default()).unwrap();
        assert_eq!(v, Verdict::Valid);
    }

    #[test]
    fn bare_atom_has_edge_countermodel() {
        let s = sig(&["a", "b", "c"]);
        let f = parse_formula("a|b|c", &s).unwrap();
        let v = check_validity(&f, s, Semantics::Strict, &DecisionConfig::default()).unwrap();
        let g = v.countermodel().expect("not valid");
        assert_eq!(g.edges(), vec![(0, 2)]);
        assert!(!eval_formula(g, &f, Semantics::Strict).unwrap());
    }

    #[test]
    fn entailment_examples() {
        let s = sig(&["a", "b", "c", "d"]);
        let p = |t| parse_formula(t, &s).unwrap();
        let cfg = DecisionConfig::default();
        assert!(entails(&[p("a|b|c")], &p("c|b|a"), s.clone(), Semantics::Strict, &cfg)
            .unwrap()
            .is_valid());
        assert!(entails(&[p("a|b|c")], &p("a|b,d|c"), s.clone(), Semantics::Strict, &cfg)
            .unwrap()
            .is_valid());
        assert!(!entails(&[], &p("a|b|c"), s, Semantics::Strict, &cfg)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let small = sig(&["a"]);
        let f = Formula::atom(VertexSet::singleton(3), VertexSet::EMPTY, VertexSet::EMPTY);
        assert_eq!(
            check_validity(&f, small, Semantics::Strict, &DecisionConfig::default()),
            Err(DecisionError::SignatureMismatch)
        );
    }

    #[test]
    fn insertion_forms_differ_only_where_expected() {
        let s = sig(&["a", "b1", "b2", "i", "c"]);
        let one = |n: &str| s.set_of(&[n]).unwrap();
        let subst = Substitution::new()
            .with(SetVar::A, one("a"))
            .with(SetVar::B1, one("b1"))
            .with(SetVar::B2, one("b2"))
            .with(SetVar::I, one("i"))
            .with(SetVar::C, one("c"));
        let render = |form| insertion_principle(form, &subst, &s).unwrap().render(&s);
        assert_eq!(
            render(InsertionForm::Weak1),
            "a|b1,b2|c -> (a|i|b1 -> (b2|i|c -> a|i|c))"
        );
        assert_eq!(
            render(InsertionForm::Weak2),
            "a|b1,b2,i|c -> (a|i|b1 -> (b2|i|c -> a|i|c))"
        );
        assert_eq!(
            insertion_principle(InsertionForm::Strongest, &subst, &s).unwrap(),
            instantiate_schema(AxiomSchema::Insertion, &subst, &s).unwrap()
        );
        let partial = Substitution::new().with(SetVar::A, one("a"));
        assert!(matches!(
            insertion_principle(InsertionForm::Weak1, &partial, &s),
            Err(SchemaError::MissingSubstituent { .. })
        ));
    }

    #[test]
    fn random_substitutions_honour_side_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for schema in AxiomSchema::ALL {
            for _ in 0..200 {
                let s = random_substitution(schema, 4, &mut rng);
                assert!(side_conditions_hold(schema, &s), "{schema}");
                assert!(instantiate_schema(schema, &s, &sig(&["a", "b", "c", "d"])).is_ok());
            }
        }
    }

    #[test]
    fn sweep_over_two_vertices_passes() {
        let report =
            schema_validity_sweep(sig(&["a", "b"]), Semantics::Strict, &SweepConfig::default())
                .unwrap();
        assert!(report.exhaustive);
        assert!(report.passed(), "{report:?}");
        assert!(report.schemas.iter().all(|s| s.graphs == 8 && s.instances > 0));
    }
}

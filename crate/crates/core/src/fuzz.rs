//! Seeded random testing of axiom instances and of the atom evaluator.
//!
//! Iteration `i` draws from its own ChaCha stream (`seed`, stream `i`), so a
//! violation can be replayed from the seed and the iteration number alone,
//! and results do not depend on how iterations are spread over workers.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{random_substitution, DecisionConfig, DecisionError};
use crate::graph::{pair_count, pairs, Graph};
use crate::kernel::schema::{instantiate_schema, transitivity_template, AxiomSchema, SetVar, Substitution};
use crate::par;
use crate::semantics::{atom_holds, formula_holds, oracle_eval_atom, Semantics};
use crate::syntax::{Atom, Formula, Signature, VertexSet};

/// Largest universe on which the path-enumeration oracle is consulted.
pub const ORACLE_UNIVERSE_LIMIT: usize = 4;

/// Deliberately unsound schema variants, for checking that the fuzzer bites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutant {
    /// Transitivity with the `d ∉ B` side condition dropped.
    UnguardedTransitivity,
}

#[derive(Debug, Clone, Copy)]
pub struct FuzzConfig {
    pub seed: u64,
    pub iterations: u64,
    pub mode: Semantics,
    pub decision: DecisionConfig,
    pub mutant: Option<Mutant>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            iterations: 10_000,
            mode: Semantics::Strict,
            decision: DecisionConfig::default(),
            mutant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An axiom instance false in a graph.
    Schema {
        iteration: u64,
        schema: AxiomSchema,
        substitution: Substitution,
        graph: Graph,
        formula: Formula,
    },
    /// Reachability and path enumeration disagree on an atom.
    Oracle {
        iteration: u64,
        mode: Semantics,
        atom: Atom,
        graph: Graph,
        fast: bool,
        oracle: bool,
    },
}

impl Violation {
    pub fn iteration(&self) -> u64 {
        match self {
            Violation::Schema { iteration, .. } | Violation::Oracle { iteration, .. } => *iteration,
        }
    }

    pub fn describe(&self, sig: &Signature) -> String {
        match self {
            Violation::Schema {
                iteration,
                schema,
                substitution,
                graph,
                formula,
            } => format!(
                "violation iteration={iteration} schema={schema} subst=[{}] edges=[{}] formula: {}",
                substitution.render(sig),
                graph.render_edges(),
                formula.render(sig)
            ),
            Violation::Oracle {
                iteration,
                mode,
                atom,
                graph,
                fast,
                oracle,
            } => format!(
                "violation iteration={iteration} oracle mode={} atom={} edges=[{}] reachability={fast} paths={oracle}",
                mode.name(),
                atom.render(sig),
                graph.render_edges()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub seed: u64,
    pub iterations: u64,
    pub mode: Semantics,
    pub schema_checks: u64,
    pub oracle_checks: u64,
    pub violations: Vec<Violation>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Tally {
    schema_checks: u64,
    oracle_checks: u64,
    violations: Vec<Violation>,
}

pub fn iteration_rng(seed: u64, iteration: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

fn random_graph<R: Rng>(sig: &Arc<Signature>, pairs: &[(usize, usize)], rng: &mut R) -> Graph {
    let mask = rng.gen::<u64>() & ((1u64 << pairs.len()) - 1);
    Graph::from_pair_mask(sig.clone(), pairs, mask)
}

fn random_set<R: Rng>(n: usize, rng: &mut R) -> VertexSet {
    VertexSet::from_bits(rng.gen::<u64>() & VertexSet::full(n).bits())
}

fn run_iteration(
    sig: &Arc<Signature>,
    pairs: &[(usize, usize)],
    config: &FuzzConfig,
    iteration: u64,
    tally: &mut Tally,
) {
    let n = sig.len();
    let mut rng = iteration_rng(config.seed, iteration);
    let graph = random_graph(sig, pairs, &mut rng);

    let schema = AxiomSchema::ALL[rng.gen_range(0..AxiomSchema::ALL.len())];
    let (substitution, formula) = match (schema, config.mutant) {
        (AxiomSchema::Transitivity, Some(Mutant::UnguardedTransitivity)) => {
            let mut s = Substitution::new();
            for var in [SetVar::A, SetVar::B, SetVar::C] {
                s.insert(var, random_set(n, &mut rng));
            }
            s.insert(SetVar::D, VertexSet::singleton(rng.gen_range(0..n)));
            let get = |v| s.get(v).unwrap_or_default();
            let f = transitivity_template(get(SetVar::A), get(SetVar::B), get(SetVar::C), get(SetVar::D));
            (s, f)
        }
        _ => {
            let s = random_substitution(schema, n, &mut rng);
            let f = instantiate_schema(schema, &s, sig).expect("side conditions honoured");
            (s, f)
        }
    };
    tally.schema_checks += 1;
    if !formula_holds(&graph, &formula, config.mode) {
        tally.violations.push(Violation::Schema {
            iteration,
            schema,
            substitution,
            graph: graph.clone(),
            formula,
        });
    }

    if n <= ORACLE_UNIVERSE_LIMIT {
        let atom = Atom::new(random_set(n, &mut rng), random_set(n, &mut rng), random_set(n, &mut rng));
        for mode in [Semantics::Strict, Semantics::NonStrict] {
            tally.oracle_checks += 1;
            let fast = atom_holds(&graph, &atom, mode);
            let oracle = oracle_eval_atom(&graph, &atom, mode);
            if fast != oracle {
                tally.violations.push(Violation::Oracle {
                    iteration,
                    mode,
                    atom,
                    graph: graph.clone(),
                    fast,
                    oracle,
                });
            }
        }
    }
}

/// Runs `config.iterations` random checks over `sig`.
pub fn fuzz(sig: Arc<Signature>, config: &FuzzConfig) -> Result<FuzzReport, DecisionError> {
    if config.decision.max_universe > crate::decision::HARD_MAX_UNIVERSE {
        return Err(DecisionError::LimitAboveCeiling(config.decision.max_universe));
    }
    if sig.len() > config.decision.max_universe {
        return Err(DecisionError::UniverseTooLarge {
            size: sig.len(),
            limit: config.decision.max_universe,
        });
    }
    let pairs = pairs(sig.len());
    debug_assert_eq!(pairs.len(), pair_count(sig.len()));
    let tallies = par::map_chunks(config.iterations, config.decision.workers, |range| {
        let mut tally = Tally {
            schema_checks: 0,
            oracle_checks: 0,
            violations: Vec::new(),
        };
        for iteration in range {
            run_iteration(&sig, &pairs, config, iteration, &mut tally);
        }
        tally
    });
    let mut report = FuzzReport {
        seed: config.seed,
        iterations: config.iterations,
        mode: config.mode,
        schema_checks: 0,
        oracle_checks: 0,
        violations: Vec::new(),
    };
    for tally in tallies {
        report.schema_checks += tally.schema_checks;
        report.oracle_checks += tally.oracle_checks;
        report.violations.extend(tally.violations);
    }
    Ok(report)
}

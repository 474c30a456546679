//! Satisfaction of formulas in graphs.
//!
//! `A|B|C` holds in a graph when every path from a vertex of `A` to a vertex
//! of `C` has an internal vertex in `B`. Under [`Semantics::NonStrict`] the
//! endpoints count as well. The production evaluator decides atoms with a
//! reachability fixpoint; [`enumerate_simple_paths`] and [`oracle_eval_atom`]
//! implement the definition literally and exist for cross-checking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::syntax::{Atom, Formula, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Some *internal* vertex of every path lies in the middle set.
    #[default]
    Strict,
    /// Some vertex of every path, endpoints included, lies in the middle set.
    NonStrict,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Strict => "strict",
            Semantics::NonStrict => "nonstrict",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula mentions vertices outside the graph's universe")]
    SignatureMismatch,
}

/// Vertices reachable from `start` along paths whose internal vertices avoid
/// `blocked`.
///
/// Least fixpoint: `start` is reachable, and every neighbour of a reachable
/// `u` is reachable whenever `u == start` or `u` is not blocked.
pub fn reachable_avoiding(g: &Graph, start: usize, blocked: VertexSet) -> VertexSet {
    let mut reached = VertexSet::singleton(start);
    let mut frontier = g.neighbors(start);
    loop {
        let fresh = frontier.difference(reached);
        if fresh.is_empty() {
            return reached;
        }
        reached = reached.union(fresh);
        frontier = fresh
            .difference(blocked)
            .iter()
            .fold(VertexSet::EMPTY, |acc, u| acc.union(g.neighbors(u)));
    }
}

/// Decides an atom; the caller guarantees it fits the graph's universe.
pub(crate) fn atom_holds(g: &Graph, atom: &Atom, mode: Semantics) -> bool {
    match mode {
        Semantics::Strict => atom
            .left
            .iter()
            .all(|a| reachable_avoiding(g, a, atom.middle).is_disjoint(atom.right)),
        Semantics::NonStrict => {
            let targets = atom.right.difference(atom.middle);
            atom.left
                .difference(atom.middle)
                .iter()
                .all(|a| reachable_avoiding(g, a, atom.middle).is_disjoint(targets))
        }
    }
}

pub(crate) fn formula_holds(g: &Graph, f: &Formula, mode: Semantics) -> bool {
    f.evaluate_with(&mut |atom| atom_holds(g, atom, mode))
}

/// `reachable_avoiding(g, a, B)` for every start `a` and every blocked set
/// `B`, for evaluating many atoms against one small graph.
pub struct ReachTable {
    n: usize,
    table: Vec<VertexSet>,
}

impl ReachTable {
    /// Builds `n * 2^n` entries; intended for universes of at most 10 or so.
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 16, "reach table over {n} vertices is too large");
        let mut table = Vec::with_capacity(n << n);
        for start in 0..n {
            for blocked in VertexSet::all_subsets(n) {
                table.push(reachable_avoiding(g, start, blocked));
            }
        }
        ReachTable { n, table }
    }

    fn reach(&self, start: usize, blocked: VertexSet) -> VertexSet {
        self.table[(start << self.n) | blocked.bits() as usize]
    }

    pub fn atom_holds(&self, atom: &Atom, mode: Semantics) -> bool {
        match mode {
            Semantics::Strict => atom
                .left
                .iter()
                .all(|a| self.reach(a, atom.middle).is_disjoint(atom.right)),
            Semantics::NonStrict => {
                let targets = atom.right.difference(atom.middle);
                atom.left
                    .difference(atom.middle)
                    .iter()
                    .all(|a| self.reach(a, atom.middle).is_disjoint(targets))
            }
        }
    }

    pub fn formula_holds(&self, f: &Formula, mode: Semantics) -> bool {
        f.evaluate_with(&mut |atom| self.atom_holds(atom, mode))
    }
}

pub fn eval_atom(g: &Graph, atom: &Atom, mode: Semantics) -> Result<bool, EvalError> {
    if !atom.is_valid_for(g.signature()) {
        return Err(EvalError::SignatureMismatch);
    }
    Ok(atom_holds(g, atom, mode))
}

/// `g ⊨ f`. Sugar connectives are evaluated directly.
pub fn eval_formula(g: &Graph, f: &Formula, mode: Semantics) -> Result<bool, EvalError> {
    if !f.is_valid_for(g.signature()) {
        return Err(EvalError::SignatureMismatch);
    }
    Ok(formula_holds(g, f, mode))
}

/// All simple paths from `from` to `to`, each as its vertex sequence.
///
/// When `from == to` the only simple path is the trivial one.
pub fn enumerate_simple_paths(g: &Graph, from: usize, to: usize) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, to: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("path is never empty");
        if last == to {
            out.push(path.clone());
            return;
        }
        for next in g.neighbors(last).iter() {
            if !path.contains(&next) {
                path.push(next);
                extend(g, to, path, out);
                path.pop();
            }
        }
    }

    let mut out = Vec::new();
    extend(g, to, &mut vec![from], &mut out);
    out
}

/// Largest graph `oracle_eval_atom` accepts.
pub const ORACLE_MAX_VERTICES: usize = 6;

/// Decides an atom by enumerating simple paths. Exponential; test use only.
///
/// Panics on graphs with more than [`ORACLE_MAX_VERTICES`] vertices.
pub fn oracle_eval_atom(g: &Graph, atom: &Atom, mode: Semantics) -> bool {
    assert!(
        g.vertex_count() <= ORACLE_MAX_VERTICES,
        "path oracle limited to {ORACLE_MAX_VERTICES} vertices"
    );
    for a in atom.left.iter() {
        for c in atom.right.iter() {
            for path in enumerate_simple_paths(g, a, c) {
                let inspected = match mode {
                    Semantics::Strict if path.len() <= 2 => &[][..],
                    Semantics::Strict => &path[1..path.len() - 1],
                    Semantics::NonStrict => &path[..],
                };
                if !inspected.iter().any(|&v| atom.middle.contains(v)) {
                    return false;
                }
            }
        }
    }
    true
}

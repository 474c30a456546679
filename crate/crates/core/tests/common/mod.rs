#![allow(dead_code)]

use std::sync::Arc;

use betweenness::graph::{pairs, Graph};
use betweenness::{Atom, Semantics, Signature};
use proptest::prelude::*;

pub fn sig(n: usize) -> Arc<Signature> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Arc::new(Signature::new(names).unwrap())
}

pub fn all_graphs(n: usize) -> Vec<Graph> {
    let s = sig(n);
    let ps = pairs(n);
    (0..1u64 << ps.len())
        .map(|m| Graph::from_pair_mask(s.clone(), &ps, m))
        .collect()
}

/// Every walk `v0 .. vk` with `k <= n` from `from` to `to`. A superset of
/// the simple paths, built without reference to the crate's path code.
pub fn walks(g: &Graph, from: usize, to: usize) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut stack = vec![vec![from]];
    while let Some(w) = stack.pop() {
        let last = *w.last().unwrap();
        if last == to {
            out.push(w.clone());
        }
        if w.len() <= n {
            for v in 0..n {
                if g.has_edge(last, v) {
                    let mut next = w.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
        }
    }
    out
}

/// Literal reading of the satisfaction clause for atoms, over short walks.
pub fn walk_oracle(g: &Graph, atom: &Atom, mode: Semantics) -> bool {
    atom.left.iter().all(|a| {
        atom.right.iter().all(|c| {
            walks(g, a, c).iter().all(|w| {
                let inspected: &[usize] = match mode {
                    Semantics::Strict if w.len() <= 2 => &[],
                    Semantics::Strict => &w[1..w.len() - 1],
                    Semantics::NonStrict => w,
                };
                inspected.iter().any(|&v| atom.middle.contains(v))
            })
        })
    })
}

/// A random graph over `n` vertices, loops included.
pub fn graph_strategy(n: usize) -> impl Strategy<Value = Graph> {
    let ps = pairs(n);
    let s = sig(n);
    any::<u64>().prop_map(move |m| {
        let mask = m & ((1u64 << ps.len()) - 1);
        Graph::from_pair_mask(s.clone(), &ps, mask)
    })
}

/// Satisfaction of an atom by explicit enumeration of simple paths.
pub fn simple_path_oracle(g: &Graph, atom: &Atom, mode: Semantics) -> bool {
    let n = g.vertex_count();
    let mut ok = true;
    for a in atom.left.iter() {
        let mut stack = vec![vec![a]];
        while let Some(p) = stack.pop() {
            let last = *p.last().unwrap();
            if atom.right.contains(last) {
                let inspected: &[usize] = match mode {
                    Semantics::Strict if p.len() <= 2 => &[],
                    Semantics::Strict => &p[1..p.len() - 1],
                    Semantics::NonStrict => &p,
                };
                ok &= inspected.iter().any(|&v| atom.middle.contains(v));
            }
            for v in 0..n {
                if g.has_edge(last, v) && !p.contains(&v) {
                    let mut next = p.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
        }
    }
    ok
}

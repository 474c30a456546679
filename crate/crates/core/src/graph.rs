//! Finite undirected graphs with loops and their line-oriented text format.
//!
//! ```text
//! # comment
//! vertices a b c d
//! edge a b
//! edge b b      # loop
//! ```

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Signature, SignatureError, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {source}")]
    Signature {
        line: usize,
        #[source]
        source: SignatureError,
    },
    #[error("missing `vertices` declaration")]
    MissingVertices,
    #[error("line {line}: `vertices` must be declared exactly once, before any edge")]
    MisplacedVertices { line: usize },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("line {line}: directed graphs are not supported")]
    Directed { line: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("vertex index {0} is outside the universe")]
    VertexOutOfRange(usize),
}

/// Number of unordered vertex pairs, loops included, over `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Unordered pairs `(u, v)` with `u <= v` in lexicographic order:
/// `aa, ab, ac, .., bb, bc, .., cc`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect()
}

/// An undirected graph without multiple edges, possibly with loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    sig: Arc<Signature>,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// The edgeless graph on `sig`.
    pub fn empty(sig: Arc<Signature>) -> Self {
        let adj = vec![VertexSet::EMPTY; sig.len()];
        Graph { sig, adj }
    }

    pub fn from_edges<I>(sig: Arc<Signature>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(sig);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from names, e.g. `[("a", "b"), ("b", "c")]`.
    pub fn from_named_edges(sig: Arc<Signature>, edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(sig);
        for (u, v) in edges {
            let lookup = |name: &str| {
                g.sig.vertex(name).ok_or_else(|| GraphError::UnknownVertex {
                    line: 0,
                    name: name.to_string(),
                })
            };
            let (u, v) = (lookup(u)?, lookup(v)?);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// The graph whose edge set is `{ pairs(n)[i] : bit i of mask set }`.
    pub fn from_pair_mask(sig: Arc<Signature>, pairs: &[(usize, usize)], mask: u64) -> Self {
        let mut g = Graph::empty(sig);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.adj[u] = g.adj[u].with(v);
                g.adj[v] = g.adj[v].with(u);
            }
        }
        g
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn shared_signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Inserts `{u, v}`; returns false if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        for x in [u, v] {
            if x >= self.adj.len() {
                return Err(GraphError::VertexOutOfRange(x));
            }
        }
        if self.adj[u].contains(v) {
            return Ok(false);
        }
        self.adj[u] = self.adj[u].with(v);
        self.adj[v] = self.adj[v].with(u);
        Ok(true)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.adj.len() || v >= self.adj.len() || !self.adj[u].contains(v) {
            return false;
        }
        self.adj[u] = self.adj[u].difference(VertexSet::singleton(v));
        self.adj[v] = self.adj[v].difference(VertexSet::singleton(u));
        true
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|n| n.contains(v))
    }

    /// Neighbours of `v`, including `v` itself when it carries a loop.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// Edges as `(u, v)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.adj.len())
            .flat_map(|u| self.adj[u].iter().filter(move |&v| v >= u).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Renders the edge list as `a-b b-c`, or `(none)`.
    pub fn render_edges(&self) -> String {
        let edges = self.edges();
        if edges.is_empty() {
            return "(none)".to_string();
        }
        edges
            .iter()
            .map(|&(u, v)| format!("{}-{}", self.sig.name(u), self.sig.name(v)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the text format. The universe comes from the `vertices` line.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut words = content.split_whitespace();
            let Some(keyword) = words.next() else {
                continue;
            };
            let args: Vec<&str> = words.collect();
            match keyword {
                "vertices" => {
                    if graph.is_some() {
                        return Err(GraphError::MisplacedVertices { line });
                    }
                    let sig = Signature::new(args.iter().copied())
                        .map_err(|source| GraphError::Signature { line, source })?;
                    graph = Some(Graph::empty(Arc::new(sig)));
                }
                "edge" => {
                    let g = graph.as_mut().ok_or(GraphError::MisplacedVertices { line })?;
                    if args.len() != 2 {
                        if args.iter().any(|a| a.contains("->")) {
                            return Err(GraphError::Directed { line });
                        }
                        return Err(GraphError::Malformed {
                            line,
                            message: format!("`edge` takes 2 vertices, got {}", args.len()),
                        });
                    }
                    let lookup = |name: &str| {
                        g.sig.vertex(name).ok_or_else(|| GraphError::UnknownVertex {
                            line,
                            name: name.to_string(),
                        })
                    };
                    let (u, v) = (lookup(args[0])?, lookup(args[1])?);
                    if !g.add_edge(u, v)? {
                        return Err(GraphError::DuplicateEdge {
                            line,
                            u: args[0].to_string(),
                            v: args[1].to_string(),
                        });
                    }
                }
                "arc" | "directed" | "digraph" => return Err(GraphError::Directed { line }),
                other => {
                    return Err(GraphError::Malformed {
                        line,
                        message: format!("unknown directive `{other}`"),
                    })
                }
            }
        }
        graph.ok_or(GraphError::MissingVertices)
    }
}

impl fmt::Display for Graph {
    /// Writes the graph in the text format accepted by [`Graph::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.sig.names().join(" "))?;
        for (u, v) in self.edges() {
            writeln!(f, "edge {} {}", self.sig.name(u), self.sig.name(v))?;
        }
        Ok(())
    }
}

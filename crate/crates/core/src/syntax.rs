//! Vertex universes, vertex sets, betweenness atoms and formulas.
//!
//! A [`Formula`] refers to vertices by their index in a [`Signature`], so the
//! same AST can be rendered or evaluated against any graph whose universe it
//! was parsed for. Sets are stored as bitmasks, which makes atom equality
//! set equality for free.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Upper bound on the number of vertices a [`Signature`] may declare.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("universe must contain at least one vertex")]
    Empty,
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("duplicate vertex name `{0}`")]
    DuplicateName(String),
    #[error("universe has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
}

/// Returns true if `name` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The ordered finite vertex universe `V`.
#[derive(Debug, Clone)]
pub struct Signature {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Signature {
    pub fn new<I, S>(names: I) -> Result<Self, SignatureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(SignatureError::Empty);
        }
        if names.len() > MAX_VERTICES {
            return Err(SignatureError::TooManyVertices(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(SignatureError::InvalidName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(SignatureError::DuplicateName(name.clone()));
            }
        }
        Ok(Signature { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, vertex: usize) -> &str {
        &self.names[vertex]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The set of all vertices.
    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    /// Resolves a list of names to a set; unknown names are reported back.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet, String> {
        let mut set = VertexSet::EMPTY;
        for name in names {
            let v = self
                .vertex(name.as_ref())
                .ok_or_else(|| name.as_ref().to_string())?;
            set = set.with(v);
        }
        Ok(set)
    }

    pub fn contains_set(&self, set: VertexSet) -> bool {
        set.is_subset(self.full_set())
    }

    /// True if both signatures declare the same names in the same order.
    pub fn same_as(&self, other: &Signature) -> bool {
        self.names == other.names
    }

    pub fn render_set(&self, set: VertexSet) -> String {
        if set.is_empty() {
            return "{}".to_string();
        }
        set.iter()
            .map(|v| self.name(v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Signature {}

/// A subset of a universe, stored as a bitmask over vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(vertex: usize) -> Self {
        VertexSet(1 << vertex)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn with(self, vertex: usize) -> Self {
        VertexSet(self.0 | (1 << vertex))
    }

    pub fn contains(self, vertex: usize) -> bool {
        vertex < 64 && self.0 & (1 << vertex) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// The single member, if the set has exactly one.
    pub fn as_singleton(self) -> Option<usize> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// All subsets of a universe with `n` vertices, in bitmask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
        assert!(n < 64, "cannot enumerate subsets of a 64-vertex universe");
        (0..1u64 << n).map(VertexSet)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(VertexSet::EMPTY, VertexSet::with)
    }
}

/// The betweenness statement `left | middle | right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub left: VertexSet,
    pub middle: VertexSet,
    pub right: VertexSet,
}

impl Atom {
    pub fn new(left: VertexSet, middle: VertexSet, right: VertexSet) -> Self {
        Atom {
            left,
            middle,
            right,
        }
    }

    pub fn is_valid_for(&self, sig: &Signature) -> bool {
        sig.contains_set(self.left) && sig.contains_set(self.middle) && sig.contains_set(self.right)
    }

    pub fn render(&self, sig: &Signature) -> String {
        format!(
            "{}|{}|{}",
            sig.render_set(self.left),
            sig.render_set(self.middle),
            sig.render_set(self.right)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl From<Atom> for Formula {
    fn from(atom: Atom) -> Self {
        Formula::Atom(atom)
    }
}

impl Formula {
    pub fn atom(left: VertexSet, middle: VertexSet, right: VertexSet) -> Self {
        Formula::Atom(Atom::new(left, middle, right))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Right-nested implication chain `p1 -> (p2 -> (... -> goal))`.
    pub fn implies_chain<I>(premises: I, goal: Formula) -> Self
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        premises
            .into_iter()
            .rev()
            .fold(goal, |acc, p| Formula::implies(p, acc))
    }

    /// True if only atoms, negations and implications occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_core(),
            Formula::Implies(l, r) => l.is_core() && r.is_core(),
            Formula::And(..) | Formula::Or(..) | Formula::Iff(..) => false,
        }
    }

    /// Rewrites `&`, `\/` and `<->` into negation and implication.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(*a),
            Formula::Not(f) => Formula::not(f.desugar()),
            Formula::Implies(l, r) => Formula::implies(l.desugar(), r.desugar()),
            Formula::And(l, r) => Formula::not(Formula::implies(
                l.desugar(),
                Formula::not(r.desugar()),
            )),
            Formula::Or(l, r) => Formula::implies(Formula::not(l.desugar()), r.desugar()),
            Formula::Iff(l, r) => Formula::and(
                Formula::implies((**l).clone(), (**r).clone()),
                Formula::implies((**r).clone(), (**l).clone()),
            )
            .desugar(),
        }
    }

    /// Distinct atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(*a);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::Implies(l, r) | Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn is_valid_for(&self, sig: &Signature) -> bool {
        self.atoms().iter().all(|a| a.is_valid_for(sig))
    }

    /// Boolean value of the formula given a valuation of its atoms.
    pub fn evaluate_with<F>(&self, value: &mut F) -> bool
    where
        F: FnMut(&Atom) -> bool,
    {
        match self {
            Formula::Atom(a) => value(a),
            Formula::Not(f) => !f.evaluate_with(value),
            Formula::Implies(l, r) => !l.evaluate_with(value) || r.evaluate_with(value),
            Formula::And(l, r) => l.evaluate_with(value) && r.evaluate_with(value),
            Formula::Or(l, r) => l.evaluate_with(value) || r.evaluate_with(value),
            Formula::Iff(l, r) => l.evaluate_with(value) == r.evaluate_with(value),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::Implies(l, r) | Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    pub fn render(&self, sig: &Signature) -> String {
        self.display(sig).to_string()
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }
}

/// Renders a formula in the concrete syntax accepted by
/// [`parse_formula`](crate::parser::parse_formula).
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, formula: &Formula) -> fmt::Result {
        match formula {
            Formula::Atom(a) => write!(f, "{}", a.render(self.sig)),
            Formula::Not(inner) => {
                f.write_str("~")?;
                if matches!(**inner, Formula::Not(_)) {
                    self.write(f, inner)
                } else {
                    f.write_str("(")?;
                    self.write(f, inner)?;
                    f.write_str(")")
                }
            }
            Formula::Implies(l, r) => self.write_binary(f, l, "->", r),
            Formula::And(l, r) => self.write_binary(f, l, "&", r),
            Formula::Or(l, r) => self.write_binary(f, l, "\\/", r),
            Formula::Iff(l, r) => self.write_binary(f, l, "<->", r),
        }
    }

    fn write_binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        lhs: &Formula,
        op: &str,
        rhs: &Formula,
    ) -> fmt::Result {
        self.write_operand(f, lhs)?;
        write!(f, " {op} ")?;
        self.write_operand(f, rhs)
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, operand: &Formula) -> fmt::Result {
        match operand {
            Formula::Atom(_) | Formula::Not(_) => self.write(f, operand),
            _ => {
                f.write_str("(")?;
                self.write(f, operand)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula)
    }
}

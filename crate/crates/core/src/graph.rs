//! Undirected multigraphs with optional source/sink terminals, linear
//! arrangements over them, and the edge-list text format.
//!
//! Nodes carry opaque string ids. Internally every node gets a dense index in
//! order of first appearance, and all algorithms work on those indices.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("self-loop on node {0:?}")]
    SelfLoop(String),
    #[error("edge endpoint {0} is not a node index")]
    UnknownEndpoint(usize),
    #[error("duplicate node id {0:?}")]
    DuplicateId(String),
    #[error("unknown node id {0:?}")]
    UnknownNode(String),
    #[error("source and sink must be distinct")]
    SameTerminals,
    #[error("graph is disconnected: node {0:?} is unreachable")]
    Disconnected(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected `<u> <v>`, found {found:?}")]
    BadEdgeLine { line: usize, found: String },
    #[error("line {line}: malformed terminals line")]
    BadTerminals { line: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A connected undirected multigraph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    terminals: Option<(usize, usize)>,
    degree: Vec<usize>,
}

impl Graph {
    /// Builds a graph from node ids and index-based edges.
    pub fn new(
        names: Vec<String>,
        edges: Vec<(usize, usize)>,
        terminals: Option<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        if names.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(name.clone()));
            }
        }
        let n = names.len();
        let mut degree = vec![0; n];
        for &(u, v) in &edges {
            if u >= n {
                return Err(GraphError::UnknownEndpoint(u));
            }
            if v >= n {
                return Err(GraphError::UnknownEndpoint(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(names[u].clone()));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        if let Some((s, t)) = terminals {
            if s >= n {
                return Err(GraphError::UnknownEndpoint(s));
            }
            if t >= n {
                return Err(GraphError::UnknownEndpoint(t));
            }
            if s == t {
                return Err(GraphError::SameTerminals);
            }
        }
        let g = Graph {
            names,
            index,
            edges,
            terminals,
            degree,
        };
        if let Some(unreached) = g.first_unreachable() {
            return Err(GraphError::Disconnected(g.names[unreached].clone()));
        }
        Ok(g)
    }

    /// Builds a graph from id pairs; nodes are indexed in order of first
    /// appearance.
    pub fn from_named_edges<S: AsRef<str>>(
        edges: &[(S, S)],
        terminals: Option<(&str, &str)>,
    ) -> Result<Self, GraphError> {
        let mut interner = Interner::default();
        let edges: Vec<_> = edges
            .iter()
            .map(|(u, v)| (interner.intern(u.as_ref()), interner.intern(v.as_ref())))
            .collect();
        let terminals = match terminals {
            Some((s, t)) => Some((interner.lookup(s)?, interner.lookup(t)?)),
            None => None,
        };
        Graph::new(interner.names, edges, terminals)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.names.len();
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn terminals(&self) -> Option<(usize, usize)> {
        self.terminals
    }

    /// Returns a copy with the given terminals.
    pub fn with_terminals(&self, source: usize, sink: usize) -> Result<Self, GraphError> {
        let n = self.node_count();
        if source >= n {
            return Err(GraphError::UnknownEndpoint(source));
        }
        if sink >= n {
            return Err(GraphError::UnknownEndpoint(sink));
        }
        if source == sink {
            return Err(GraphError::SameTerminals);
        }
        let mut g = self.clone();
        g.terminals = Some((source, sink));
        Ok(g)
    }

    /// Degree of a node, counting parallel edges separately.
    pub fn degree(&self, node: usize) -> usize {
        self.degree[node]
    }

    /// Per node, its incident edges as `(neighbour, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }
}

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    fn lookup(&self, name: &str) -> Result<usize, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }
}

/// Maximum node degree, parallel edges counted with multiplicity.
pub fn max_degree(g: &Graph) -> usize {
    g.degree.iter().copied().max().unwrap_or(0)
}

/// A linear arrangement: `positions[node]` is the 1-based position of `node`.
///
/// Construction does not check bijectivity; use [`validate_arrangement`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrangement {
    positions: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("domain mismatch: graph has {expected} nodes, arrangement covers {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("duplicate position {0}")]
    DuplicatePosition(usize),
    #[error("position {0} outside 1..={1}")]
    PositionOutOfRange(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("node {0} is not in the arrangement")]
pub struct UnknownNode(pub usize);

impl Arrangement {
    pub fn from_positions(positions: Vec<usize>) -> Self {
        Arrangement { positions }
    }

    /// Builds the arrangement that places `order[i]` at position `i + 1`.
    ///
    /// `order` must be a permutation of `0..order.len()`.
    pub fn from_order(order: &[usize]) -> Result<Self, Violation> {
        let n = order.len();
        let mut positions = vec![0; n];
        for (i, &node) in order.iter().enumerate() {
            if node >= n {
                return Err(Violation::DomainMismatch {
                    expected: n,
                    found: node + 1,
                });
            }
            if positions[node] != 0 {
                return Err(Violation::DuplicatePosition(positions[node]));
            }
            positions[node] = i + 1;
        }
        Ok(Arrangement { positions })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, node: usize) -> Option<usize> {
        self.positions.get(node).copied()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Nodes from left to right. Assumes a valid arrangement.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.positions.len()];
        for (node, &p) in self.positions.iter().enumerate() {
            order[p - 1] = node;
        }
        order
    }

    /// The mirrored arrangement, `p -> n + 1 - p`.
    pub fn reversed(&self) -> Self {
        let n = self.positions.len();
        Arrangement {
            positions: self.positions.iter().map(|&p| n + 1 - p).collect(),
        }
    }
}

pub fn edge_length(arr: &Arrangement, u: usize, v: usize) -> Result<usize, UnknownNode> {
    let pu = arr.position(u).ok_or(UnknownNode(u))?;
    let pv = arr.position(v).ok_or(UnknownNode(v))?;
    Ok(pu.abs_diff(pv))
}

pub fn validate_arrangement(g: &Graph, arr: &Arrangement) -> Result<(), Violation> {
    let n = g.node_count();
    if arr.len() != n {
        return Err(Violation::DomainMismatch {
            expected: n,
            found: arr.len(),
        });
    }
    let mut used = vec![false; n + 1];
    for &p in arr.positions() {
        if p == 0 || p > n {
            return Err(Violation::PositionOutOfRange(p, n));
        }
        if used[p] {
            return Err(Violation::DuplicatePosition(p));
        }
        used[p] = true;
    }
    Ok(())
}

/// Total edge length of `arr`; each parallel edge contributes.
pub fn arrangement_cost(g: &Graph, arr: &Arrangement) -> Result<u64, Violation> {
    if arr.len() != g.node_count() {
        return Err(Violation::DomainMismatch {
            expected: g.node_count(),
            found: arr.len(),
        });
    }
    let p = arr.positions();
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| p[u].abs_diff(p[v]) as u64)
        .sum())
}

/// True when `map` (a node of `a` to a node of `b`) is a bijection carrying
/// the edge multiset of `a` exactly onto that of `b`.
pub fn maps_edges_onto(a: &Graph, b: &Graph, map: &[usize]) -> bool {
    if a.node_count() != b.node_count() || map.len() != a.node_count() {
        return false;
    }
    if a.edge_count() != b.edge_count() {
        return false;
    }
    let mut hit = vec![false; b.node_count()];
    for &m in map {
        if m >= hit.len() || hit[m] {
            return false;
        }
        hit[m] = true;
    }
    let key = |u: usize, v: usize| if u < v { (u, v) } else { (v, u) };
    let mut left: Vec<_> = a
        .edges()
        .iter()
        .map(|&(u, v)| key(map[u], map[v]))
        .collect();
    let mut right: Vec<_> = b.edges().iter().map(|&(u, v)| key(u, v)).collect();
    left.sort_unstable();
    right.sort_unstable();
    left == right
}

/// Parses the edge-list format: an optional leading
/// `# terminals <source> <sink>` line, then one `<u> <v>` pair per line.
/// Other lines starting with `#` are comments.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut interner = Interner::default();
    let mut edges = Vec::new();
    let mut terminals: Option<(String, String)> = None;
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut tokens = comment.split_whitespace();
            if !seen_content && tokens.next() == Some("terminals") {
                let rest: Vec<_> = tokens.collect();
                if rest.len() != 2 {
                    return Err(ParseError::BadTerminals { line: i + 1 });
                }
                terminals = Some((rest[0].to_string(), rest[1].to_string()));
            }
            seen_content = true;
            continue;
        }
        seen_content = true;
        let tokens: Vec<_> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(ParseError::BadEdgeLine {
                line: i + 1,
                found: raw.to_string(),
            });
        }
        let u = interner.intern(tokens[0]);
        let v = interner.intern(tokens[1]);
        edges.push((u, v));
    }
    let terminals = match terminals {
        Some((s, t)) => Some((interner.lookup(&s)?, interner.lookup(&t)?)),
        None => None,
    };
    Ok(Graph::new(interner.names, edges, terminals)?)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    if let Some((s, t)) = g.terminals() {
        let _ = writeln!(out, "# terminals {} {}", g.name(s), g.name(t));
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", g.name(u), g.name(v));
    }
    out
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_edge_list(self))
    }
}

//! SP-trees: rooted L/S/P decomposition trees.
//!
//! Trees are stored as an arena in depth-first post-order, so every child
//! index is smaller than its parent's and the root is the last node. All
//! traversals are iterative; trees whose depth is linear in the edge count
//! are legal and must not exhaust the call stack.
//!
//! Text form: `L(k)` is a path with `k` edges, `S(t1,...,tm)` chains its
//! children in order, `P(t1,...,tm)` glues them between shared terminals.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// A path with the given number of edges (at least one).
    Leaf(usize),
    Series,
    Parallel,
}

impl Kind {
    pub fn letter(self) -> char {
        match self {
            Kind::Leaf(_) => 'L',
            Kind::Series => 'S',
            Kind::Parallel => 'P',
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("{kind}-node needs at least 2 children, found {found}")]
    Arity { kind: char, found: usize },
    #[error("leaf must have k >= 1")]
    ZeroLeaf,
    #[error("child reference {0} does not exist")]
    BadChild(NodeId),
    #[error("node {0} is reachable twice")]
    Shared(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    kind: Kind,
    children: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpTree {
    nodes: Vec<Node>,
}

impl SpTree {
    pub fn leaf(k: usize) -> Result<Self, TreeError> {
        let mut b = TreeBuilder::new();
        let root = b.leaf(k);
        b.finish(root)
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    /// Number of tree nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, id: NodeId) -> Kind {
        self.nodes[id].kind
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn ids(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, Kind::Leaf(_)))
            .count()
    }

    /// Number of edges of the expanded graph.
    pub fn edge_count(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| match n.kind {
                Kind::Leaf(k) => k,
                _ => 0,
            })
            .sum()
    }

    /// Number of nodes of the expanded graph.
    pub fn graph_node_count(&self) -> usize {
        2 + self
            .nodes
            .iter()
            .map(|n| match n.kind {
                Kind::Leaf(k) => k - 1,
                Kind::Series => n.children.len() - 1,
                Kind::Parallel => 0,
            })
            .sum::<usize>()
    }

    /// Parent of every node; `None` for the root.
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parent = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(id);
            }
        }
        parent
    }
}

/// Collects nodes bottom-up and renumbers them into a canonical [`SpTree`].
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, k: usize) -> NodeId {
        self.push(Kind::Leaf(k), Vec::new())
    }

    pub fn series(&mut self, children: Vec<NodeId>) -> NodeId {
        self.push(Kind::Series, children)
    }

    pub fn parallel(&mut self, children: Vec<NodeId>) -> NodeId {
        self.push(Kind::Parallel, children)
    }

    pub fn node(&mut self, kind: Kind, children: Vec<NodeId>) -> NodeId {
        self.push(kind, children)
    }

    fn push(&mut self, kind: Kind, children: Vec<NodeId>) -> NodeId {
        self.nodes.push(Node { kind, children });
        self.nodes.len() - 1
    }

    pub fn kind(&self, id: NodeId) -> Kind {
        self.nodes[id].kind
    }

    pub fn finish(self, root: NodeId) -> Result<SpTree, TreeError> {
        self.finish_with_map(root).map(|(t, _)| t)
    }

    /// Like [`finish`](Self::finish), also returning where each builder id
    /// ended up (`None` if unreachable from `root`).
    pub fn finish_with_map(
        self,
        root: NodeId,
    ) -> Result<(SpTree, Vec<Option<NodeId>>), TreeError> {
        let n = self.nodes.len();
        if root >= n {
            return Err(TreeError::BadChild(root));
        }
        for node in &self.nodes {
            match node.kind {
                Kind::Leaf(0) => return Err(TreeError::ZeroLeaf),
                Kind::Leaf(_) => {}
                kind if node.children.len() < 2 => {
                    return Err(TreeError::Arity {
                        kind: kind.letter(),
                        found: node.children.len(),
                    })
                }
                _ => {}
            }
            if let Some(&c) = node.children.iter().find(|&&c| c >= n) {
                return Err(TreeError::BadChild(c));
            }
        }

        let mut map = vec![None; n];
        let mut visited = vec![false; n];
        let mut out: Vec<Node> = Vec::new();
        let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
        visited[root] = true;
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            let children = &self.nodes[id].children;
            if *next < children.len() {
                let c = children[*next];
                *next += 1;
                if visited[c] {
                    return Err(TreeError::Shared(c));
                }
                visited[c] = true;
                stack.push((c, 0));
            } else {
                stack.pop();
                let node = &self.nodes[id];
                let children = node
                    .children
                    .iter()
                    .map(|&c| map[c].expect("child emitted before parent"))
                    .collect();
                map[id] = Some(out.len());
                out.push(Node {
                    kind: node.kind,
                    children,
                });
            }
        }
        Ok((SpTree { nodes: out }, map))
    }
}

pub fn parse_tree(text: &str) -> Result<SpTree, TreeError> {
    Parser {
        bytes: text.as_bytes(),
        pos: 0,
    }
    .run()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, TreeError> {
        Err(TreeError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, byte: u8) -> Result<(), TreeError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{}`", byte as char))
        }
    }

    fn number(&mut self) -> Result<usize, TreeError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        match digits.parse() {
            Ok(k) => Ok(k),
            Err(_) => Err(TreeError::Syntax {
                offset: start,
                message: "integer out of range".into(),
            }),
        }
    }

    fn run(mut self) -> Result<SpTree, TreeError> {
        let mut b = TreeBuilder::new();
        // open S/P nodes and their children so far
        let mut open: Vec<(Kind, Vec<NodeId>)> = Vec::new();
        loop {
            let mut done = match self.peek() {
                Some(b'L') => {
                    self.pos += 1;
                    self.expect(b'(')?;
                    let k = self.number()?;
                    if k == 0 {
                        return Err(TreeError::ZeroLeaf);
                    }
                    self.expect(b')')?;
                    b.leaf(k)
                }
                Some(c @ (b'S' | b'P')) => {
                    self.pos += 1;
                    self.expect(b'(')?;
                    let kind = if c == b'S' {
                        Kind::Series
                    } else {
                        Kind::Parallel
                    };
                    open.push((kind, Vec::new()));
                    continue;
                }
                Some(_) => return self.error("expected `L`, `S` or `P`"),
                None => return self.error("unexpected end of input"),
            };
            // attach the finished subtree, closing parents as needed
            loop {
                let Some((_, children)) = open.last_mut() else {
                    if self.peek().is_some() {
                        return self.error("trailing input");
                    }
                    return b.finish(done);
                };
                children.push(done);
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        break;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        let (kind, children) = open.pop().expect("open node");
                        if children.len() < 2 {
                            return Err(TreeError::Arity {
                                kind: kind.letter(),
                                found: children.len(),
                            });
                        }
                        done = b.node(kind, children);
                    }
                    _ => return self.error("expected `,` or `)`"),
                }
            }
        }
    }
}

pub fn serialize_tree(t: &SpTree) -> String {
    let mut out = String::with_capacity(4 * t.len());
    let mut stack: Vec<(NodeId, usize)> = vec![(t.root(), 0)];
    while let Some(&mut (id, ref mut next)) = stack.last_mut() {
        let node = &t.nodes[id];
        match node.kind {
            Kind::Leaf(k) => {
                out.push_str("L(");
                out.push_str(&k.to_string());
                out.push(')');
                stack.pop();
            }
            kind => {
                if *next == 0 {
                    out.push(kind.letter());
                    out.push('(');
                } else if *next < node.children.len() {
                    out.push(',');
                }
                if *next < node.children.len() {
                    let c = node.children[*next];
                    *next += 1;
                    stack.push((c, 0));
                } else {
                    out.push(')');
                    stack.pop();
                }
            }
        }
    }
    out
}

impl fmt::Display for SpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_tree(self))
    }
}

impl FromStr for SpTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MinimalityViolation {
    #[error("node {0}: S-node has an S-node child")]
    SeriesUnderSeries(NodeId),
    #[error("node {0}: S-node has no P-node child")]
    SeriesWithoutParallel(NodeId),
    #[error("node {0}: P-node has a P-node child")]
    ParallelUnderParallel(NodeId),
}

/// Checks that S-nodes have only P/L children with at least one P, and that
/// P-nodes have only S/L children.
pub fn validate_minimal(t: &SpTree) -> Result<(), MinimalityViolation> {
    for id in t.ids() {
        let kinds = t.children(id).iter().map(|&c| t.kind(c));
        match t.kind(id) {
            Kind::Leaf(_) => {}
            Kind::Series => {
                if kinds.clone().any(|k| k == Kind::Series) {
                    return Err(MinimalityViolation::SeriesUnderSeries(id));
                }
                if !kinds.clone().any(|k| k == Kind::Parallel) {
                    return Err(MinimalityViolation::SeriesWithoutParallel(id));
                }
            }
            Kind::Parallel => {
                if kinds.clone().any(|k| k == Kind::Parallel) {
                    return Err(MinimalityViolation::ParallelUnderParallel(id));
                }
            }
        }
    }
    Ok(())
}

pub fn minimize(t: &SpTree) -> SpTree {
    minimize_tracked(t).0
}

/// Minimizes `t` and reports, for every node of the result, the leaves of
/// `t` it was built from (in series order; empty for inner nodes).
///
/// Nested same-kind nodes are flattened, runs of adjacent leaves under an
/// S-node merge into one leaf, and an S-node left with a single child is
/// replaced by that child. Runs in time linear in the size of `t`.
pub fn minimize_tracked(t: &SpTree) -> (SpTree, Vec<Vec<NodeId>>) {
    let parent = t.parents();
    let is_cluster_root = |id: NodeId| match parent[id] {
        None => true,
        Some(p) => t.kind(p) != t.kind(id),
    };

    let mut b = TreeBuilder::new();
    let mut groups: Vec<Vec<NodeId>> = Vec::new();
    let mut image: Vec<Option<NodeId>> = vec![None; t.len()];
    let mut effective: Vec<NodeId> = Vec::new();
    let mut stack: Vec<(NodeId, usize)> = Vec::new();

    for id in t.ids() {
        if !is_cluster_root(id) {
            continue;
        }
        let kind = t.kind(id);
        if let Kind::Leaf(k) = kind {
            image[id] = Some(b.leaf(k));
            groups.push(vec![id]);
            continue;
        }

        // children of the maximal same-kind cluster rooted here, in order
        effective.clear();
        stack.push((id, 0));
        while let Some(&mut (n, ref mut next)) = stack.last_mut() {
            let children = t.children(n);
            if *next < children.len() {
                let c = children[*next];
                *next += 1;
                if t.kind(c) == kind {
                    stack.push((c, 0));
                } else {
                    effective.push(image[c].expect("cluster child minimized first"));
                }
            } else {
                stack.pop();
            }
        }

        let new = if kind == Kind::Parallel {
            b.parallel(effective.clone())
        } else {
            let mut merged = Vec::with_capacity(effective.len());
            let mut i = 0;
            while i < effective.len() {
                let mut j = i;
                while j < effective.len() && matches!(b.kind(effective[j]), Kind::Leaf(_)) {
                    j += 1;
                }
                if j - i >= 2 {
                    let run = &effective[i..j];
                    let k = run
                        .iter()
                        .map(|&l| match b.kind(l) {
                            Kind::Leaf(k) => k,
                            _ => unreachable!(),
                        })
                        .sum();
                    let leaf = b.leaf(k);
                    groups.push(run.iter().flat_map(|&l| groups[l].clone()).collect());
                    merged.push(leaf);
                    i = j;
                } else if j > i {
                    merged.push(effective[i]);
                    i = j;
                } else {
                    merged.push(effective[i]);
                    i += 1;
                }
            }
            if merged.len() == 1 {
                merged[0]
            } else {
                b.series(merged)
            }
        };
        if groups.len() < b.nodes.len() {
            groups.resize(b.nodes.len(), Vec::new());
        }
        image[id] = Some(new);
    }

    let root = image[t.root()].expect("root minimized");
    let (tree, map) = b.finish_with_map(root).expect("minimize builds a valid tree");
    let mut final_groups = vec![Vec::new(); tree.len()];
    for (old, new) in map.into_iter().enumerate() {
        if let Some(new) = new {
            if let Some(g) = groups.get_mut(old) {
                final_groups[new] = std::mem::take(g);
            }
        }
    }
    (tree, final_groups)
}

/// A text form that is equal for two trees exactly when they differ only in
/// the order of P-node children.
pub fn canonical_form(t: &SpTree) -> String {
    let mut forms: Vec<String> = Vec::with_capacity(t.len());
    for id in t.ids() {
        let form = match t.kind(id) {
            Kind::Leaf(k) => format!("L({k})"),
            kind => {
                let mut parts: Vec<_> = t
                    .children(id)
                    .iter()
                    .map(|&c| std::mem::take(&mut forms[c]))
                    .collect();
                if kind == Kind::Parallel {
                    parts.sort_unstable();
                }
                format!("{}({})", kind.letter(), parts.join(","))
            }
        };
        forms.push(form);
    }
    forms.pop().unwrap_or_default()
}

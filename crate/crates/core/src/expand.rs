//! Materializing an SP-tree into a concrete graph.
//!
//! Node indices are laid out so that every component is described by its two
//! terminals plus one contiguous range of interior nodes, and its edges form
//! one contiguous range of the graph's edge list. The root source is node 0,
//! the root sink node 1.
//!
//! Generated ids are path-encoded: `r` is the root, `r.2.0` the first child
//! of the third child of the root. A leaf at path `p` names its interior
//! nodes `p:1 .. p:k-1`; an S-node at `p` names the junction between its
//! children `i-1` and `i` as `p~i`. The root terminals are `s` and `t`.

use std::ops::Range;

use crate::graph::Graph;
use crate::tree::{validate_minimal, Kind, MinimalityViolation, NodeId, SpTree};

/// Terminals, interior node range and edge range of every tree node.
#[derive(Debug, Clone)]
pub struct Layout {
    pub(crate) source: Vec<usize>,
    pub(crate) sink: Vec<usize>,
    pub(crate) interior: Vec<Range<usize>>,
    pub(crate) edges: Vec<Range<usize>>,
    /// First junction index of each S-node (unused otherwise).
    pub(crate) junctions: Vec<usize>,
    pub(crate) node_count: usize,
    pub(crate) edge_count: usize,
}

impl Layout {
    pub fn new(t: &SpTree) -> Self {
        let n = t.len();
        let mut interior = vec![0..0; n];
        let mut edges = vec![0..0; n];
        let mut junctions = vec![0; n];
        let mut next_node = 2;
        let mut next_edge = 0;
        // post-order: a subtree's allocations are contiguous
        for id in t.ids() {
            let children = t.children(id);
            let (node_lo, edge_lo) = match children.first() {
                Some(&c) => (interior[c].start, edges[c].start),
                None => (next_node, next_edge),
            };
            match t.kind(id) {
                Kind::Leaf(k) => {
                    next_node += k - 1;
                    next_edge += k;
                }
                Kind::Series => {
                    junctions[id] = next_node;
                    next_node += children.len() - 1;
                }
                Kind::Parallel => {}
            }
            interior[id] = node_lo..next_node;
            edges[id] = edge_lo..next_edge;
        }

        let mut source = vec![0; n];
        let mut sink = vec![0; n];
        source[t.root()] = 0;
        sink[t.root()] = 1;
        for id in t.ids().rev() {
            let (s, e) = (source[id], sink[id]);
            let children = t.children(id);
            match t.kind(id) {
                Kind::Leaf(_) => {}
                Kind::Series => {
                    let m = children.len();
                    for (i, &c) in children.iter().enumerate() {
                        source[c] = if i == 0 { s } else { junctions[id] + i - 1 };
                        sink[c] = if i == m - 1 { e } else { junctions[id] + i };
                    }
                }
                Kind::Parallel => {
                    for &c in children {
                        source[c] = s;
                        sink[c] = e;
                    }
                }
            }
        }
        Layout {
            source,
            sink,
            interior,
            edges,
            junctions,
            node_count: next_node,
            edge_count: next_edge,
        }
    }

    /// Node sequence of a leaf path, source first.
    pub(crate) fn leaf_path(&self, id: NodeId) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.source[id])
            .chain(self.interior[id].clone())
            .chain(std::iter::once(self.sink[id]))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }
}

/// A tree node together with the subgraph it induces.
#[derive(Debug, Clone, Copy)]
pub struct ComponentView<'a> {
    pub id: NodeId,
    pub kind: Kind,
    pub source: usize,
    pub sink: usize,
    /// Nodes other than the two terminals.
    pub interior: &'a Range<usize>,
    /// Indices into the graph's edge list.
    pub edges: &'a Range<usize>,
    pub children: &'a [NodeId],
}

impl ComponentView<'_> {
    /// `|C|`
    pub fn size(&self) -> usize {
        self.interior.len() + 2
    }

    /// `|C|` without the sink.
    pub fn size_without_sink(&self) -> usize {
        self.interior.len() + 1
    }

    /// `|C|` without both terminals.
    pub fn interior_size(&self) -> usize {
        self.interior.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        [self.source, self.sink]
            .into_iter()
            .chain(self.interior.clone())
    }

    pub fn contains(&self, node: usize) -> bool {
        node == self.source || node == self.sink || self.interior.contains(&node)
    }
}

/// The graph of an SP-tree together with its component hierarchy.
#[derive(Debug, Clone)]
pub struct Expansion {
    tree: SpTree,
    layout: Layout,
    graph: Graph,
}

pub fn expand(t: &SpTree) -> Expansion {
    let layout = Layout::new(t);
    let names = node_names(t, &layout);
    let mut edges = vec![(0, 0); layout.edge_count];
    for id in t.ids() {
        if let Kind::Leaf(_) = t.kind(id) {
            let path: Vec<usize> = layout.leaf_path(id).collect();
            for (e, w) in layout.edges[id].clone().zip(path.windows(2)) {
                edges[e] = (w[0], w[1]);
            }
        }
    }
    let graph = Graph::new(names, edges, Some((0, 1))).expect("expansion is a valid graph");
    Expansion {
        tree: t.clone(),
        layout,
        graph,
    }
}

fn node_names(t: &SpTree, layout: &Layout) -> Vec<String> {
    let mut paths = vec![String::new(); t.len()];
    paths[t.root()] = "r".to_string();
    let mut names = vec![String::new(); layout.node_count];
    names[0] = "s".into();
    names[1] = "t".into();
    for id in t.ids().rev() {
        let path = std::mem::take(&mut paths[id]);
        match t.kind(id) {
            Kind::Leaf(_) => {
                for (i, node) in layout.interior[id].clone().enumerate() {
                    names[node] = format!("{path}:{}", i + 1);
                }
            }
            Kind::Series => {
                for i in 1..t.children(id).len() {
                    names[layout.junctions[id] + i - 1] = format!("{path}~{i}");
                }
            }
            Kind::Parallel => {}
        }
        for (i, &c) in t.children(id).iter().enumerate() {
            paths[c] = format!("{path}.{i}");
        }
    }
    names
}

impl Expansion {
    pub fn tree(&self) -> &SpTree {
        &self.tree
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn root(&self) -> ComponentView<'_> {
        self.component(self.tree.root())
    }

    pub fn component(&self, id: NodeId) -> ComponentView<'_> {
        ComponentView {
            id,
            kind: self.tree.kind(id),
            source: self.layout.source[id],
            sink: self.layout.sink[id],
            interior: &self.layout.interior[id],
            edges: &self.layout.edges[id],
            children: self.tree.children(id),
        }
    }

    pub fn components(&self) -> impl Iterator<Item = ComponentView<'_>> + '_ {
        self.tree.ids().map(move |id| self.component(id))
    }

    pub fn component_edges(&self, id: NodeId) -> &[(usize, usize)] {
        &self.graph.edges()[self.layout.edges[id].clone()]
    }
}

/// Tree nodes split into simple node sequences (leaves), parallel
/// components and series components (S-nodes only; leaves are counted once,
/// as simple node sequences).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Census {
    pub leaves: Vec<NodeId>,
    pub parallels: Vec<NodeId>,
    pub series: Vec<NodeId>,
}

pub fn component_census(x: &Expansion) -> Result<Census, MinimalityViolation> {
    validate_minimal(x.tree())?;
    let mut census = Census::default();
    for id in x.tree().ids() {
        match x.tree().kind(id) {
            Kind::Leaf(_) => census.leaves.push(id),
            Kind::Series => census.series.push(id),
            Kind::Parallel => census.parallels.push(id),
        }
    }
    Ok(census)
}

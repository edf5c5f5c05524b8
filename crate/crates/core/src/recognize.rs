//! Sequential recognition of series-parallel multigraphs by series and
//! parallel reductions.
//!
//! Every edge starts as a fragment. Fragments between the same node pair are
//! merged into a parallel fragment as soon as they meet; a non-terminal node
//! with exactly two distinct neighbours is then series-reduced, merging its
//! two fragments. Candidates are taken smallest id first. The graph is
//! series-parallel iff one fragment remains.
//!
//! Fragments are stored with their own endpoint order; references carry a
//! reversal flag, so orienting a whole subtree is free until the final tree
//! is materialized.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::expand::Layout;
use crate::graph::{Graph, GraphError};
use crate::tree::{minimize_tracked, Kind, NodeId, SpTree, TreeBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognizeError {
    #[error("graph is not series-parallel for the requested terminals")]
    NotSeriesParallel,
    #[error("bad terminals: {0}")]
    BadTerminals(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type FragId = usize;

#[derive(Debug)]
enum FragKind {
    Edge(usize),
    Series,
    Parallel,
}

#[derive(Debug)]
struct Fragment {
    kind: FragKind,
    /// `(child, reversed)` relative to this fragment's `ends`.
    children: Vec<(FragId, bool)>,
    ends: (usize, usize),
}

/// The recognizer's replay log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// Node `node` of degree two was removed; its fragments now form one
    /// between `ends`.
    Series { node: usize, ends: (usize, usize) },
    /// Fragments between `ends` were bundled.
    Parallel { ends: (usize, usize), count: usize },
}

struct Reducer<'g> {
    g: &'g Graph,
    frags: Vec<Fragment>,
    adj: Vec<HashMap<usize, FragId>>,
    protected: Vec<bool>,
    rank: Vec<usize>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
    live: usize,
    trace: Vec<Reduction>,
}

impl<'g> Reducer<'g> {
    fn new(g: &'g Graph, protected: &[usize]) -> Self {
        let n = g.node_count();
        let mut by_name: Vec<usize> = (0..n).collect();
        by_name.sort_by(|&a, &b| g.name(a).cmp(g.name(b)));
        let mut rank = vec![0; n];
        for (r, &node) in by_name.iter().enumerate() {
            rank[node] = r;
        }
        let mut is_protected = vec![false; n];
        for &p in protected {
            is_protected[p] = true;
        }
        let mut r = Reducer {
            g,
            frags: Vec::with_capacity(2 * g.edge_count()),
            adj: vec![HashMap::new(); n],
            protected: is_protected,
            rank,
            heap: BinaryHeap::new(),
            live: 0,
            trace: Vec::new(),
        };
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            r.frags.push(Fragment {
                kind: FragKind::Edge(e),
                children: Vec::new(),
                ends: (u, v),
            });
            r.attach(r.frags.len() - 1);
        }
        for node in 0..n {
            r.consider(node);
        }
        r
    }

    /// Inserts a fragment between its ends, bundling with an existing one.
    fn attach(&mut self, f: FragId) {
        let (a, b) = self.frags[f].ends;
        match self.adj[a].get(&b).copied() {
            None => {
                self.adj[a].insert(b, f);
                self.adj[b].insert(a, f);
                self.live += 1;
            }
            Some(existing) => {
                let reversed = self.frags[f].ends.0 != self.frags[existing].ends.0;
                if matches!(self.frags[existing].kind, FragKind::Parallel) {
                    self.frags[existing].children.push((f, reversed));
                    let count = self.frags[existing].children.len();
                    if let Some(Reduction::Parallel { ends, count: c }) = self.trace.last_mut() {
                        if *ends == self.frags[existing].ends {
                            *c = count;
                            return;
                        }
                    }
                    self.trace.push(Reduction::Parallel {
                        ends: self.frags[existing].ends,
                        count,
                    });
                } else {
                    let ends = self.frags[existing].ends;
                    self.frags.push(Fragment {
                        kind: FragKind::Parallel,
                        children: vec![(existing, false), (f, reversed)],
                        ends,
                    });
                    let p = self.frags.len() - 1;
                    self.adj[a].insert(b, p);
                    self.adj[b].insert(a, p);
                    self.trace.push(Reduction::Parallel { ends, count: 2 });
                }
            }
        }
    }

    fn consider(&mut self, node: usize) {
        if !self.protected[node] && self.adj[node].len() == 2 {
            self.heap.push(Reverse((self.rank[node], node)));
        }
    }

    fn run(&mut self) {
        while let Some(Reverse((_, x))) = self.heap.pop() {
            if self.adj[x].len() != 2 {
                continue;
            }
            let mut it = self.adj[x].iter().map(|(&w, &f)| (w, f));
            let (mut a, mut fa) = it.next().expect("two neighbours");
            let (mut b, mut fb) = it.next().expect("two neighbours");
            if self.rank[a] > self.rank[b] {
                std::mem::swap(&mut a, &mut b);
                std::mem::swap(&mut fa, &mut fb);
            }
            self.adj[x].clear();
            self.adj[a].remove(&x);
            self.adj[b].remove(&x);
            let fa_rev = self.frags[fa].ends.0 != a;
            let fb_rev = self.frags[fb].ends.0 != x;
            self.frags.push(Fragment {
                kind: FragKind::Series,
                children: vec![(fa, fa_rev), (fb, fb_rev)],
                ends: (a, b),
            });
            self.live -= 2;
            self.trace.push(Reduction::Series { node: x, ends: (a, b) });
            self.attach(self.frags.len() - 1);
            self.consider(a);
            self.consider(b);
        }
    }

    /// The single remaining fragment, if the reduction completed.
    fn result(&self) -> Option<FragId> {
        if self.live != 1 {
            return None;
        }
        self.adj.iter().find_map(|m| m.values().next().copied())
    }

    /// Builds the binary tree below `top`, oriented `from -> ...`, together
    /// with the oriented edge of every leaf.
    fn materialize(&self, top: FragId, from: usize) -> (SpTree, Vec<(usize, usize)>) {
        let mut b = TreeBuilder::new();
        let mut leaf_edges: Vec<(usize, usize)> = Vec::new();
        let mut built: Vec<Vec<NodeId>> = vec![Vec::new()];
        let root_rev = self.frags[top].ends.0 != from;
        // (fragment, reversed, next child)
        let mut stack: Vec<(FragId, bool, usize)> = vec![(top, root_rev, 0)];
        while let Some(&mut (f, rev, ref mut next)) = stack.last_mut() {
            let frag = &self.frags[f];
            if let FragKind::Edge(e) = frag.kind {
                let (u, v) = self.g.edges()[e];
                let (u, v) = if (u, v) == frag.ends { (u, v) } else { (v, u) };
                leaf_edges.push(if rev { (v, u) } else { (u, v) });
                let id = b.leaf(1);
                stack.pop();
                built.last_mut().expect("open parent").push(id);
                continue;
            }
            let m = frag.children.len();
            if *next < m {
                let i = *next;
                *next += 1;
                let slot = match frag.kind {
                    FragKind::Series if rev => m - 1 - i,
                    _ => i,
                };
                let (c, crev) = frag.children[slot];
                if i == 0 {
                    built.push(Vec::new());
                }
                stack.push((c, crev ^ rev, 0));
            } else {
                stack.pop();
                let kids = built.pop().expect("children collected");
                let id = match frag.kind {
                    FragKind::Series => b.series(kids),
                    _ => b.parallel(kids),
                };
                built.last_mut().expect("open parent").push(id);
            }
        }
        let root = built[0][0];
        let tree = b.finish(root).expect("reduction tree is valid");
        // post-order meets the leaves left to right, as they were built
        let mut edges = vec![(0, 0); tree.len()];
        let mut k = 0;
        for id in tree.ids() {
            if matches!(tree.kind(id), Kind::Leaf(_)) {
                edges[id] = leaf_edges[k];
                k += 1;
            }
        }
        (tree, edges)
    }
}

/// A minimal SP-tree of a graph plus the correspondence between the nodes of
/// its expansion and the graph's nodes.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub tree: SpTree,
    /// `embedding[i]` is the graph node playing expansion node `i`.
    pub embedding: Vec<usize>,
    pub source: usize,
    pub sink: usize,
    pub trace: Vec<Reduction>,
}

fn check_terminals(g: &Graph, source: usize, sink: usize) -> Result<(), RecognizeError> {
    let n = g.node_count();
    if source >= n || sink >= n {
        return Err(RecognizeError::BadTerminals("terminal is not a node".into()));
    }
    if source == sink {
        return Err(RecognizeError::BadTerminals("source equals sink".into()));
    }
    for t in [source, sink] {
        if g.degree(t) == 0 {
            return Err(RecognizeError::BadTerminals(format!(
                "terminal {:?} has degree 0",
                g.name(t)
            )));
        }
    }
    Ok(())
}

fn finish(r: &Reducer<'_>, top: FragId, source: usize, sink: usize) -> Decomposition {
    let (binary, leaf_edges) = r.materialize(top, source);
    let (tree, groups) = minimize_tracked(&binary);
    let layout = Layout::new(&tree);
    let mut embedding = vec![usize::MAX; layout.node_count()];
    for id in tree.ids() {
        if !matches!(tree.kind(id), Kind::Leaf(_)) {
            continue;
        }
        let original = groups[id]
            .iter()
            .map(|&old| leaf_edges[old])
            .flat_map(|(u, v)| [u, v]);
        let mut path = Vec::new();
        for node in original {
            if path.last() != Some(&node) {
                path.push(node);
            }
        }
        for (expanded, node) in layout.leaf_path(id).zip(path) {
            embedding[expanded] = node;
        }
    }
    Decomposition {
        tree,
        embedding,
        source,
        sink,
        trace: r.trace.clone(),
    }
}

/// Decomposes `g` between the given terminals (or the graph's own).
pub fn decompose(g: &Graph, terminals: Option<(usize, usize)>) -> Result<SpTree, RecognizeError> {
    decompose_embedded(g, terminals).map(|d| d.tree)
}

pub fn decompose_embedded(
    g: &Graph,
    terminals: Option<(usize, usize)>,
) -> Result<Decomposition, RecognizeError> {
    let (source, sink) = terminals
        .or(g.terminals())
        .ok_or_else(|| RecognizeError::BadTerminals("no terminals given".into()))?;
    check_terminals(g, source, sink)?;
    let mut r = Reducer::new(g, &[source, sink]);
    r.run();
    let top = r.result().ok_or(RecognizeError::NotSeriesParallel)?;
    let ends = r.frags[top].ends;
    if ends != (source, sink) && ends != (sink, source) {
        return Err(RecognizeError::NotSeriesParallel);
    }
    Ok(finish(&r, top, source, sink))
}

/// Finds a terminal pair by reducing with nothing protected; the pair that
/// survives is returned with its decomposition. Other valid pairs may exist.
pub fn recognize(g: &Graph) -> Result<Decomposition, RecognizeError> {
    let mut r = Reducer::new(g, &[]);
    r.run();
    let top = r.result().ok_or(RecognizeError::NotSeriesParallel)?;
    let (a, b) = r.frags[top].ends;
    let (source, sink) = if r.rank[a] <= r.rank[b] { (a, b) } else { (b, a) };
    Ok(finish(&r, top, source, sink))
}

pub fn recognize_terminals(g: &Graph) -> Result<(usize, usize), RecognizeError> {
    recognize(g).map(|d| (d.source, d.sink))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::graph::maps_edges_onto;
    use crate::tree::{canonical_form, parse_tree, validate_minimal};

    fn graph(edges: &[(&str, &str)], terminals: Option<(&str, &str)>) -> Graph {
        Graph::from_named_edges(edges, terminals).unwrap()
    }

    fn k4() -> Graph {
        graph(
            &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")],
            None,
        )
    }

    fn check_embedding(g: &Graph, d: &Decomposition) {
        let x = expand(&d.tree);
        let g = g.with_terminals(d.source, d.sink).unwrap();
        assert!(maps_edges_onto(x.graph(), &g, &d.embedding));
        assert_eq!(d.embedding[0], d.source);
        assert_eq!(d.embedding[1], d.sink);
    }

    #[test]
    fn diamond() {
        let g = graph(&[("s", "a"), ("a", "t"), ("s", "b"), ("b", "t")], Some(("s", "t")));
        let d = decompose_embedded(&g, None).unwrap();
        assert_eq!(d.tree.to_string(), "P(L(2),L(2))");
        check_embedding(&g, &d);
        assert_eq!(
            recognize_terminals(&g),
            Ok((g.node_index("s").unwrap(), g.node_index("t").unwrap()))
        );
    }

    #[test]
    fn triangle() {
        let g = graph(&[("s", "a"), ("a", "t"), ("s", "t")], Some(("s", "t")));
        let d = decompose_embedded(&g, None).unwrap();
        assert_eq!(canonical_form(&d.tree), "P(L(1),L(2))");
        check_embedding(&g, &d);
    }

    #[test]
    fn k4_is_rejected() {
        let g = k4();
        assert_eq!(recognize_terminals(&g), Err(RecognizeError::NotSeriesParallel));
        let (a, b) = (g.node_index("a").unwrap(), g.node_index("b").unwrap());
        assert_eq!(decompose(&g, Some((a, b))), Err(RecognizeError::NotSeriesParallel));
    }

    #[test]
    fn path_terminals_are_the_ends() {
        let g = graph(&[("u", "v"), ("v", "w")], None);
        let (s, t) = recognize_terminals(&g).unwrap();
        let mut ends = [g.name(s), g.name(t)];
        ends.sort();
        assert_eq!(ends, ["u", "w"]);
        let d = recognize(&g).unwrap();
        assert_eq!(d.tree.to_string(), "L(2)");
        check_embedding(&g, &d);
    }

    #[test]
    fn terminals_must_survive() {
        // the path is SP between its ends, not between an end and the middle
        let g = graph(&[("u", "v"), ("v", "w")], None);
        let (u, v) = (g.node_index("u").unwrap(), g.node_index("v").unwrap());
        assert_eq!(decompose(&g, Some((u, v))), Err(RecognizeError::NotSeriesParallel));
    }

    #[test]
    fn pendant_is_not_series_parallel() {
        let g = graph(&[("s", "a"), ("a", "t"), ("a", "p")], Some(("s", "t")));
        assert_eq!(decompose(&g, None), Err(RecognizeError::NotSeriesParallel));
    }

    #[test]
    fn orientation_follows_the_terminals() {
        let g = graph(
            &[("s", "x"), ("x", "t"), ("x", "t"), ("s", "y"), ("y", "x")],
            Some(("t", "s")),
        );
        let d = decompose_embedded(&g, None).unwrap();
        assert_eq!(d.tree.to_string(), "S(P(L(1),L(1)),P(L(1),L(2)))");
        check_embedding(&g, &d);
    }

    #[test]
    fn bad_terminals() {
        let g = graph(&[("a", "b")], None);
        assert!(matches!(
            decompose(&g, None),
            Err(RecognizeError::BadTerminals(_))
        ));
        assert!(matches!(
            decompose(&g, Some((0, 0))),
            Err(RecognizeError::BadTerminals(_))
        ));
        assert!(matches!(
            decompose(&g, Some((0, 9))),
            Err(RecognizeError::BadTerminals(_))
        ));
    }

    #[test]
    fn multi_edges() {
        let g = graph(&[("s", "t"), ("t", "s"), ("s", "t")], Some(("s", "t")));
        let d = decompose_embedded(&g, None).unwrap();
        assert_eq!(d.tree.to_string(), "P(L(1),L(1),L(1))");
        check_embedding(&g, &d);
    }

    #[test]
    fn round_trip_nested() {
        for s in [
            "S(L(2),P(L(1),L(3)),L(1),P(S(L(1),P(L(2),L(1)),L(2)),L(4)),L(3))",
            "P(S(L(3),P(L(1),L(1))),S(P(L(2),L(2),L(1)),L(1)),L(5))",
            "P(L(1),L(1))",
            "L(4)",
        ] {
            let t = parse_tree(s).unwrap();
            let x = expand(&t);
            let d = decompose_embedded(x.graph(), None).unwrap();
            assert!(validate_minimal(&d.tree).is_ok());
            assert_eq!(canonical_form(&d.tree), canonical_form(&t), "{s}");
            check_embedding(x.graph(), &d);
        }
    }

    #[test]
    fn trace_records_reductions() {
        let g = graph(&[("s", "a"), ("a", "t"), ("s", "b"), ("b", "t")], Some(("s", "t")));
        let d = decompose_embedded(&g, None).unwrap();
        let series = d
            .trace
            .iter()
            .filter(|r| matches!(r, Reduction::Series { .. }))
            .count();
        assert_eq!(series, 2);
        assert!(matches!(
            d.trace.last(),
            Some(Reduction::Parallel { count: 2, .. })
        ));
    }

    /// K4 with edge `i` replaced by a path of `1 + (mask >> 2i & 3)` edges.
    fn subdivided_k4(mask: u32) -> Graph {
        let corners = ["a", "b", "c", "d"];
        let mut edges: Vec<(String, String)> = Vec::new();
        let mut i = 0;
        for x in 0..4 {
            for y in x + 1..4 {
                let extra = (mask >> (2 * i) & 3) as usize;
                let mut prev = corners[x].to_string();
                for j in 0..extra {
                    let mid = format!("{}{}{j}", corners[x], corners[y]);
                    edges.push((prev, mid.clone()));
                    prev = mid;
                }
                edges.push((prev, corners[y].to_string()));
                i += 1;
            }
        }
        let named: Vec<(&str, &str)> = edges.iter().map(|(u, v)| (u.as_str(), v.as_str())).collect();
        graph(&named, None)
    }

    #[test]
    fn k4_subdivisions_are_rejected_for_every_pair() {
        for mask in (0..1u32 << 12).step_by(37) {
            let g = subdivided_k4(mask);
            assert_eq!(recognize_terminals(&g), Err(RecognizeError::NotSeriesParallel));
            for s in 0..g.node_count() {
                for t in s + 1..g.node_count() {
                    assert_eq!(
                        decompose(&g, Some((s, t))),
                        Err(RecognizeError::NotSeriesParallel),
                        "mask {mask} terminals {s} {t}"
                    );
                }
            }
        }
    }
}

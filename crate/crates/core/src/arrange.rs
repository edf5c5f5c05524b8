//! Recursive arrangement of series-parallel graphs over a minimal SP-tree.
//!
//! Every component is laid out with its source first and its sink second,
//! followed by its interior nodes. Simple node sequences use the zigzag
//! order `1, k, 2, k-1, ...`. A parallel component appends the interiors of
//! its children, a biggest child last. A series component appends one block
//! per child; each child after the first owns its source (the junction it
//! shares with its predecessor) at the left end of its block. With `a` the
//! index of a biggest child, blocks are emitted as
//! `B1 .. B(a-1), rev(Bm), rev(B(m-1)) .. rev(B(a+1)), Ba`.
//!
//! Ties for "biggest" go to the highest child index.
//!
//! [`arrange_sns`], [`arrange_parallel`] and [`arrange_series`] work on
//! explicit node lists. [`arrange`] produces the same order in time linear in
//! the tree by concatenating blocks lazily and flattening once at the end.

use thiserror::Error;

use crate::expand::Layout;
use crate::graph::Arrangement;
use crate::tree::{validate_minimal, Kind, MinimalityViolation, SpTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangeError {
    #[error("tree is not minimal: {0}")]
    NotMinimal(#[from] MinimalityViolation),
    #[error("a composition needs at least 2 children, got {0}")]
    TooFewChildren(usize),
    #[error("child {0} does not share the parallel terminals")]
    TerminalMismatch(usize),
    #[error("child {0} does not start where the previous child ends")]
    ChainMismatch(usize),
}

/// Order of one component's nodes, leftmost first: source, sink, interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalOrder<T>(Vec<T>);

impl<T> LocalOrder<T> {
    /// Wraps a list whose first two entries are the source and sink.
    ///
    /// Panics if `nodes` has fewer than two entries.
    pub fn new(nodes: Vec<T>) -> Self {
        assert!(nodes.len() >= 2, "a component has two terminals");
        LocalOrder(nodes)
    }

    pub fn source(&self) -> &T {
        &self.0[0]
    }

    pub fn sink(&self) -> &T {
        &self.0[1]
    }

    pub fn interior(&self) -> &[T] {
        &self.0[2..]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

/// Zigzag order of a path given source to sink.
///
/// Panics if the path has fewer than two nodes.
pub fn arrange_sns<T: Clone>(path: &[T]) -> LocalOrder<T> {
    assert!(path.len() >= 2, "a simple node sequence has at least one edge");
    let mut out = Vec::with_capacity(path.len());
    let (mut lo, mut hi) = (0, path.len() - 1);
    let mut left = true;
    while lo <= hi {
        if left {
            out.push(path[lo].clone());
            lo += 1;
        } else {
            out.push(path[hi].clone());
            hi -= 1;
        }
        left = !left;
    }
    LocalOrder(out)
}

/// Index of a biggest entry, preferring the highest index on ties.
fn biggest(sizes: impl Iterator<Item = usize>) -> usize {
    let mut best = (0, 0);
    for (i, s) in sizes.enumerate() {
        if i == 0 || s >= best.1 {
            best = (i, s);
        }
    }
    best.0
}

pub fn arrange_parallel<T: Clone + PartialEq>(
    children: &[LocalOrder<T>],
) -> Result<LocalOrder<T>, ArrangeError> {
    if children.len() < 2 {
        return Err(ArrangeError::TooFewChildren(children.len()));
    }
    let (u, v) = (children[0].source(), children[0].sink());
    if let Some(i) = children
        .iter()
        .position(|c| c.source() != u || c.sink() != v)
    {
        return Err(ArrangeError::TerminalMismatch(i));
    }
    let m = biggest(children.iter().map(LocalOrder::len));
    let mut out = vec![u.clone(), v.clone()];
    for (i, c) in children.iter().enumerate() {
        if i != m {
            out.extend_from_slice(c.interior());
        }
    }
    out.extend_from_slice(children[m].interior());
    Ok(LocalOrder(out))
}

pub fn arrange_series<T: Clone + PartialEq>(
    children: &[LocalOrder<T>],
) -> Result<LocalOrder<T>, ArrangeError> {
    let m = children.len();
    if m < 2 {
        return Err(ArrangeError::TooFewChildren(m));
    }
    if let Some(i) = (1..m).find(|&i| children[i - 1].sink() != children[i].source()) {
        return Err(ArrangeError::ChainMismatch(i));
    }
    let block = |i: usize| -> Vec<T> {
        let c = &children[i];
        if i == 0 {
            c.interior().to_vec()
        } else {
            std::iter::once(c.source().clone())
                .chain(c.interior().iter().cloned())
                .collect()
        }
    };
    let a = biggest(children.iter().map(LocalOrder::len));
    let mut out = vec![children[0].source().clone(), children[m - 1].sink().clone()];
    for i in 0..a {
        out.extend(block(i));
    }
    for i in (a + 1..m).rev() {
        out.extend(block(i).into_iter().rev());
    }
    out.extend(block(a));
    Ok(LocalOrder(out))
}

/// Reference composition through the list operations. Quadratic in the
/// worst case; [`arrange`] is the linear-time equivalent.
pub fn arrange_by_lists(t: &SpTree) -> Result<Arrangement, ArrangeError> {
    validate_minimal(t)?;
    let layout = Layout::new(t);
    let mut orders: Vec<Option<LocalOrder<usize>>> = vec![None; t.len()];
    for id in t.ids() {
        let order = match t.kind(id) {
            Kind::Leaf(_) => arrange_sns(&layout.leaf_path(id).collect::<Vec<_>>()),
            kind => {
                let kids: Vec<_> = t
                    .children(id)
                    .iter()
                    .map(|&c| orders[c].take().expect("child arranged first"))
                    .collect();
                if kind == Kind::Series {
                    arrange_series(&kids)?
                } else {
                    arrange_parallel(&kids)?
                }
            }
        };
        orders[id] = Some(order);
    }
    let root = orders[t.root()].take().expect("root arranged");
    Ok(Arrangement::from_order(root.as_slice()).expect("arrangement is a permutation"))
}

type PieceId = usize;

enum Piece {
    /// A slice of the shared node buffer.
    Run(std::ops::Range<usize>),
    /// Concatenation of pieces, each optionally reversed.
    Cat(Vec<(PieceId, bool)>),
}

/// Arranges the graph of a minimal SP-tree. Node indices follow
/// [`expand`](crate::expand::expand).
pub fn arrange(t: &SpTree) -> Result<Arrangement, ArrangeError> {
    validate_minimal(t)?;
    let layout = Layout::new(t);
    Ok(arrange_with_layout(t, &layout))
}

pub(crate) fn arrange_with_layout(t: &SpTree, layout: &Layout) -> Arrangement {
    let mut buffer: Vec<usize> = Vec::with_capacity(layout.node_count);
    let mut pieces: Vec<Piece> = Vec::with_capacity(2 * t.len());
    // interior order of each component
    let mut body: Vec<PieceId> = vec![0; t.len()];
    let mut sizes: Vec<usize> = Vec::new();

    for id in t.ids() {
        let children = t.children(id);
        let piece = match t.kind(id) {
            Kind::Leaf(_) => {
                let start = buffer.len();
                let r = layout.interior[id].clone();
                // zigzag over labels 1..=K with label i at interior r.start + i - 2
                let (mut lo, mut hi) = (r.start, r.end);
                let mut left = true;
                while lo < hi {
                    if left {
                        buffer.push(lo);
                        lo += 1;
                    } else {
                        hi -= 1;
                        buffer.push(hi);
                    }
                    left = !left;
                }
                Piece::Run(start..buffer.len())
            }
            Kind::Parallel => {
                sizes.clear();
                sizes.extend(children.iter().map(|&c| layout.interior[c].len()));
                let m = biggest(sizes.iter().copied());
                let mut parts: Vec<_> = children
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != m)
                    .map(|(_, &c)| (body[c], false))
                    .collect();
                parts.push((body[children[m]], false));
                Piece::Cat(parts)
            }
            Kind::Series => {
                let m = children.len();
                sizes.clear();
                sizes.extend(children.iter().map(|&c| layout.interior[c].len()));
                let a = biggest(sizes.iter().copied());
                let mut blocks: Vec<PieceId> = Vec::with_capacity(m);
                blocks.push(body[children[0]]);
                for (i, &c) in children.iter().enumerate().skip(1) {
                    let start = buffer.len();
                    buffer.push(layout.source[c]);
                    pieces.push(Piece::Run(start..start + 1));
                    let owned = pieces.len() - 1;
                    pieces.push(Piece::Cat(vec![(owned, false), (body[c], false)]));
                    blocks.push(pieces.len() - 1);
                    debug_assert_eq!(layout.source[c], layout.junctions[id] + i - 1);
                }
                let mut parts = Vec::with_capacity(m);
                parts.extend(blocks[..a].iter().map(|&b| (b, false)));
                parts.extend(blocks[a + 1..].iter().rev().map(|&b| (b, true)));
                parts.push((blocks[a], false));
                Piece::Cat(parts)
            }
        };
        pieces.push(piece);
        body[id] = pieces.len() - 1;
    }

    let root = t.root();
    let mut order = Vec::with_capacity(layout.node_count);
    order.push(layout.source[root]);
    order.push(layout.sink[root]);
    let mut stack = vec![(body[root], false)];
    while let Some((p, rev)) = stack.pop() {
        match &pieces[p] {
            Piece::Run(r) => {
                let run = &buffer[r.clone()];
                if rev {
                    order.extend(run.iter().rev());
                } else {
                    order.extend_from_slice(run);
                }
            }
            Piece::Cat(parts) => {
                // push so that the first emitted part is popped first
                if rev {
                    stack.extend(parts.iter().map(|&(q, r)| (q, r ^ rev)));
                } else {
                    stack.extend(parts.iter().rev().map(|&(q, r)| (q, r ^ rev)));
                }
            }
        }
    }
    let mut positions = vec![0; order.len()];
    for (i, &node) in order.iter().enumerate() {
        positions[node] = i + 1;
    }
    Arrangement::from_positions(positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::graph::{arrangement_cost, validate_arrangement};
    use crate::tree::parse_tree;

    fn lo(nodes: &[&'static str]) -> LocalOrder<&'static str> {
        LocalOrder::new(nodes.to_vec())
    }

    fn names(t: &str) -> (Vec<String>, u64) {
        let tree = parse_tree(t).unwrap();
        let x = expand(&tree);
        let arr = arrange(&tree).unwrap();
        let order = arr
            .order()
            .into_iter()
            .map(|n| x.graph().name(n).to_string())
            .collect();
        (order, arrangement_cost(x.graph(), &arr).unwrap())
    }

    #[test]
    fn zigzag() {
        let six: Vec<u32> = (1..=6).collect();
        assert_eq!(arrange_sns(&six).into_vec(), vec![1, 6, 2, 5, 3, 4]);
        assert_eq!(arrange_sns(&[1, 2]).into_vec(), vec![1, 2]);
        assert_eq!(arrange_sns(&[1, 2, 3]).into_vec(), vec![1, 3, 2]);
    }

    #[test]
    fn parallel_examples() {
        let out = arrange_parallel(&[lo(&["s", "t", "a"]), lo(&["s", "t", "b"])]).unwrap();
        assert_eq!(out.into_vec(), vec!["s", "t", "a", "b"]);
        // path s-a-t and zigzag of s-b-c-t = s,t,b,c
        let out = arrange_parallel(&[lo(&["s", "t", "a"]), lo(&["s", "t", "b", "c"])]).unwrap();
        assert_eq!(out.into_vec(), vec!["s", "t", "a", "b", "c"]);
        let out = arrange_parallel(&[lo(&["u", "v"]), lo(&["u", "v"])]).unwrap();
        assert_eq!(out.into_vec(), vec!["u", "v"]);
        // biggest child moves last, the others keep their order
        let out = arrange_parallel(&[
            lo(&["s", "t", "x", "y"]),
            lo(&["s", "t", "a"]),
            lo(&["s", "t", "b"]),
        ])
        .unwrap();
        assert_eq!(out.into_vec(), vec!["s", "t", "a", "b", "x", "y"]);
    }

    #[test]
    fn parallel_errors() {
        assert_eq!(
            arrange_parallel(&[lo(&["s", "t"])]),
            Err(ArrangeError::TooFewChildren(1))
        );
        assert_eq!(
            arrange_parallel(&[lo(&["s", "t"]), lo(&["s", "x"])]),
            Err(ArrangeError::TerminalMismatch(1))
        );
    }

    #[test]
    fn series_last_is_biggest() {
        let out = arrange_series(&[lo(&["u", "w"]), lo(&["w", "v"])]).unwrap();
        assert_eq!(out.into_vec(), vec!["u", "v", "w"]);
    }

    #[test]
    fn series_middle_is_biggest() {
        // |P1^-| = 1, |P2^-| = 3, |P3^-| = 1
        let p1 = lo(&["u", "x", "a"]);
        let p2 = lo(&["x", "y", "b1", "b2"]);
        let p3 = lo(&["y", "v", "c"]);
        let out = arrange_series(&[p1, p2, p3]).unwrap();
        // u, v, int(P1), rev([y] ++ int(P3)), [x] ++ int(P2)
        assert_eq!(
            out.into_vec(),
            vec!["u", "v", "a", "c", "y", "x", "b1", "b2"]
        );
    }

    #[test]
    fn series_first_is_biggest() {
        let p1 = lo(&["u", "x", "a1", "a2"]);
        let p2 = lo(&["x", "v", "b"]);
        let out = arrange_series(&[p1, p2]).unwrap();
        assert_eq!(out.into_vec(), vec!["u", "v", "b", "x", "a1", "a2"]);
    }

    #[test]
    fn series_errors() {
        assert_eq!(
            arrange_series(&[lo(&["u", "x"]), lo(&["y", "v"])]),
            Err(ArrangeError::ChainMismatch(1))
        );
        assert_eq!(
            arrange_series::<&str>(&[]),
            Err(ArrangeError::TooFewChildren(0))
        );
    }

    #[test]
    fn tree_examples() {
        assert_eq!(names("L(1)"), (vec!["s".into(), "t".into()], 1));
        let (order, cost) = names("P(L(2),L(2))");
        assert_eq!(order, ["s", "t", "r.0:1", "r.1:1"]);
        assert_eq!(cost, 8);
        let (order, cost) = names("S(L(1),P(L(1),L(1)))");
        assert_eq!(order, ["s", "t", "r~1"]);
        assert_eq!(cost, 4);
        assert_eq!(names("L(5)").1, 9);
    }

    #[test]
    fn rejects_non_minimal() {
        assert!(matches!(
            arrange(&parse_tree("S(L(1),L(1))").unwrap()),
            Err(ArrangeError::NotMinimal(_))
        ));
    }

    #[test]
    fn lazy_and_list_routes_agree() {
        for s in [
            "S(L(2),P(L(1),L(3)),L(1),P(S(L(1),P(L(2),L(1)),L(2)),L(4)),L(3))",
            "P(S(L(3),P(L(1),L(1))),S(P(L(2),L(2),L(1)),L(1)),L(5))",
            "S(P(L(4),L(1)),P(L(1),L(1)),P(L(2),L(2)))",
        ] {
            let t = parse_tree(s).unwrap();
            let fast = arrange(&t).unwrap();
            assert_eq!(fast, arrange_by_lists(&t).unwrap(), "{s}");
            let x = expand(&t);
            assert_eq!(validate_arrangement(x.graph(), &fast), Ok(()));
            let order = fast.order();
            assert_eq!((order[0], order[1]), (0, 1));
        }
    }
}

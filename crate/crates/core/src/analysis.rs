//! Cost accounting per component and the inequalities that bound the
//! arrangement's cost from above and an optimum's cost from below.
//!
//! All bounds are compared in half-units (both sides doubled) so the checks
//! involving `½(…)` stay exact integer comparisons.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::arrange::arrange;
use crate::expand::{expand, ComponentView, Expansion};
use crate::graph::{arrangement_cost, max_degree, Arrangement};
use crate::tree::{Kind, NodeId, SpTree, TreeBuilder};

/// Component nodes in outer order, i.e. the restriction of an arrangement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedArrangement {
    nodes: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl RestrictedArrangement {
    /// Nodes left to right.
    pub fn order(&self) -> &[usize] {
        &self.nodes
    }

    /// 1-based position inside the component.
    pub fn position(&self, node: usize) -> Option<usize> {
        self.position.get(&node).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn sorted_nodes(arr: &Arrangement, c: &ComponentView<'_>, out: &mut Vec<usize>) {
    out.clear();
    out.extend(c.nodes());
    let pos = arr.positions();
    out.sort_unstable_by_key(|&v| pos[v]);
}

pub fn restrict(arr: &Arrangement, c: &ComponentView<'_>) -> RestrictedArrangement {
    let mut nodes = Vec::with_capacity(c.size());
    sorted_nodes(arr, c, &mut nodes);
    let position = nodes.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    RestrictedArrangement { nodes, position }
}

fn gap(a: usize, b: usize) -> u64 {
    a.abs_diff(b) as u64
}

pub fn restricted_cost(x: &Expansion, arr: &Arrangement, id: NodeId) -> u64 {
    let r = restrict(arr, &x.component(id));
    x.component_edges(id)
        .iter()
        .map(|&(u, v)| gap(r.position(u).unwrap(), r.position(v).unwrap()))
        .sum()
}

pub fn exclusive_cost(x: &Expansion, arr: &Arrangement, id: NodeId) -> u64 {
    let own = restricted_cost(x, arr, id);
    let children: u64 = x
        .tree()
        .children(id)
        .iter()
        .map(|&c| restricted_cost(x, arr, c))
        .sum();
    own - children
}

fn delta_of(size: usize, ps: usize, pt: usize) -> usize {
    [ps - 1, size - ps, pt - 1, size - pt]
        .into_iter()
        .min()
        .expect("four candidates")
}

/// Fewest nodes on the near side of a terminal, over both terminals.
pub fn delta(arr: &Arrangement, c: &ComponentView<'_>) -> usize {
    let r = restrict(arr, c);
    delta_of(
        r.len(),
        r.position(c.source).unwrap(),
        r.position(c.sink).unwrap(),
    )
}

/// `⌊(|C|-2)/2⌋`
pub fn delta_cap(c: &ComponentView<'_>) -> usize {
    (c.size() - 2) / 2
}

/// Simple path given by its nodes (source first) and the graph edges
/// between consecutive nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Path {
    fn walk(x: &Expansion, start: usize, edges: Vec<usize>) -> Path {
        let all = x.graph().edges();
        let mut nodes = Vec::with_capacity(edges.len() + 1);
        nodes.push(start);
        for &e in &edges {
            let (u, v) = all[e];
            let at = *nodes.last().expect("nonempty");
            nodes.push(if u == at { v } else { u });
        }
        Path { nodes, edges }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelPaths {
    pub a_path: Path,
    pub s_paths: Vec<Path>,
}

/// A-path and S-paths of every P-node, indexed by tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SDecomposition {
    paths: Vec<Option<ParallelPaths>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdError {
    #[error("node {0} is not a P-node or has no paths")]
    Missing(NodeId),
    #[error("path through P-node {0} is not a simple source-sink path inside it")]
    Malformed(NodeId),
    #[error("P-node {id} has {found} paths for {expected} children")]
    Count {
        id: NodeId,
        expected: usize,
        found: usize,
    },
    #[error("edge {0} lies on more than one S-path")]
    Shared(usize),
}

impl SDecomposition {
    pub fn paths(&self, id: NodeId) -> Option<&ParallelPaths> {
        self.paths.get(id).and_then(Option::as_ref)
    }

    /// Checks every path is a simple source-sink path through its P-node
    /// and that no edge is used by two S-paths.
    pub fn check(&self, x: &Expansion) -> Result<(), SdError> {
        let g = x.graph();
        let mut used = vec![false; g.edge_count()];
        let mut seen = vec![usize::MAX; g.node_count()];
        let mut stamp = 0;
        for c in x.components() {
            if c.kind != Kind::Parallel {
                if self.paths(c.id).is_some() {
                    return Err(SdError::Missing(c.id));
                }
                continue;
            }
            let pp = self.paths(c.id).ok_or(SdError::Missing(c.id))?;
            let found = 1 + pp.s_paths.len();
            if found != c.children.len() {
                return Err(SdError::Count {
                    id: c.id,
                    expected: c.children.len(),
                    found,
                });
            }
            for p in std::iter::once(&pp.a_path).chain(&pp.s_paths) {
                stamp += 1;
                let ok = p.nodes.first() == Some(&c.source)
                    && p.nodes.last() == Some(&c.sink)
                    && p.nodes.len() == p.edges.len() + 1
                    && p.edges.iter().all(|e| c.edges.contains(e))
                    && p.edges.iter().zip(p.nodes.windows(2)).all(|(&e, w)| {
                        let (u, v) = g.edges()[e];
                        (u, v) == (w[0], w[1]) || (v, u) == (w[0], w[1])
                    })
                    && p.nodes.iter().all(|&v| {
                        let fresh = seen[v] != stamp;
                        seen[v] = stamp;
                        fresh
                    });
                if !ok {
                    return Err(SdError::Malformed(c.id));
                }
            }
            for p in &pp.s_paths {
                for &e in &p.edges {
                    if std::mem::replace(&mut used[e], true) {
                        return Err(SdError::Shared(e));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the S-decomposition taking each P-node's first child as its
/// A-path.
pub fn s_decomposition(x: &Expansion) -> SDecomposition {
    let t = x.tree();
    let mut paths: Vec<Option<ParallelPaths>> = vec![None; t.len()];
    // edges of the path each component hands to its parent
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); t.len()];
    for id in t.ids() {
        let c = x.component(id);
        match c.kind {
            Kind::Leaf(_) => through[id] = c.edges.clone().collect(),
            Kind::Series => {
                let mut q = Vec::new();
                for &k in c.children {
                    q.append(&mut through[k]);
                }
                through[id] = q;
            }
            Kind::Parallel => {
                let mut qs = c
                    .children
                    .iter()
                    .map(|&k| Path::walk(x, c.source, std::mem::take(&mut through[k])));
                let a_path = qs.next().expect("P-node has children");
                let s_paths = qs.collect();
                through[id] = a_path.edges.clone();
                paths[id] = Some(ParallelPaths { a_path, s_paths });
            }
        }
    }
    SDecomposition { paths }
}

/// Per-component restricted, exclusive and amortized costs plus Δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostLedger {
    pub restricted: Vec<u64>,
    pub exclusive: Vec<u64>,
    pub amortized: Vec<u64>,
    pub delta: Vec<usize>,
}

impl CostLedger {
    /// One bottom-up pass; each component's restriction is built once.
    pub fn compute(x: &Expansion, arr: &Arrangement, sd: &SDecomposition) -> Self {
        let t = x.tree();
        let edges = x.graph().edges();
        let n = t.len();
        let mut ledger = CostLedger {
            restricted: vec![0; n],
            exclusive: vec![0; n],
            amortized: vec![0; n],
            delta: vec![0; n],
        };
        let mut rpos = vec![0usize; x.graph().node_count()];
        let mut order = Vec::new();
        for id in t.ids() {
            let c = x.component(id);
            sorted_nodes(arr, &c, &mut order);
            for (i, &v) in order.iter().enumerate() {
                rpos[v] = i + 1;
            }
            let len = |e: usize| gap(rpos[edges[e].0], rpos[edges[e].1]);
            let r: u64 = c.edges.clone().map(len).sum();
            let e = r - c.children.iter().map(|&k| ledger.restricted[k]).sum::<u64>();
            let mut extra = 0;
            if c.kind == Kind::Series {
                for &k in c.children {
                    match t.kind(k) {
                        Kind::Leaf(_) => extra += x.component(k).edges.clone().map(len).sum::<u64>(),
                        _ => {
                            let pp = sd.paths(k).expect("P-node has paths");
                            extra += pp
                                .s_paths
                                .iter()
                                .flat_map(|p| &p.edges)
                                .map(|&e| len(e))
                                .sum::<u64>();
                        }
                    }
                }
            }
            ledger.restricted[id] = r;
            ledger.exclusive[id] = e;
            ledger.amortized[id] = e + extra;
            ledger.delta[id] = delta_of(c.size(), rpos[c.source], rpos[c.sink]);
        }
        ledger
    }

    pub fn exclusive_total(&self) -> u64 {
        self.exclusive.iter().sum()
    }

    pub fn amortized_total(&self) -> u64 {
        self.amortized.iter().sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("exclusive costs sum to {sum}, arrangement costs {total}")]
pub struct CostMismatch {
    pub sum: u64,
    pub total: u64,
}

/// Exclusive costs over all components must add up to the total cost.
pub fn check_cost_decomposition(x: &Expansion, arr: &Arrangement) -> Result<(), CostMismatch> {
    let ledger = CostLedger::compute(x, arr, &s_decomposition(x));
    let sum = ledger.exclusive_total();
    let total = arrangement_cost(x.graph(), arr).expect("arrangement covers the expansion");
    if sum == total {
        Ok(())
    } else {
        Err(CostMismatch { sum, total })
    }
}

/// `Σ|S_i^-| - max|S_i^-|` for a P-node, `Σ|P_i^⊖| - max|P_i^⊖|` for an
/// S-node, `2(|L|-1)` for a leaf.
pub fn size_term(x: &Expansion, id: NodeId) -> u64 {
    let c = x.component(id);
    let sizes = c.children.iter().map(|&k| {
        let kc = x.component(k);
        match c.kind {
            Kind::Series => kc.size_without_sink(),
            _ => kc.interior_size(),
        }
    });
    match c.kind {
        Kind::Leaf(k) => 2 * k as u64,
        _ => {
            let (sum, max) = sizes.fold((0, 0), |(s, m), z| (s + z, m.max(z)));
            (sum - max) as u64
        }
    }
}

pub fn opt_lower_bound_rhs(x: &Expansion) -> u64 {
    x.tree().ids().map(|id| size_term(x, id)).sum()
}

pub fn alg_upper_bound_rhs(x: &Expansion, d: u64) -> u128 {
    x.tree()
        .ids()
        .map(|id| {
            let term = size_term(x, id) as u128;
            let d = d as u128;
            match x.tree().kind(id) {
                Kind::Leaf(_) => term,
                Kind::Parallel => 2 * d * d * term,
                Kind::Series => 2 * d * term,
            }
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    AlgSns,
    AlgPc,
    AlgSc,
    AlgSnsLocal,
    AlgPcLocal,
    AlgScLocal,
    OptSns,
    OptSc,
    OptPc,
    Amortization,
    OptTotal,
    AlgTotal,
    Theorem,
    Observation,
    DeltaBound,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::AlgSns,
        Family::AlgPc,
        Family::AlgSc,
        Family::AlgSnsLocal,
        Family::AlgPcLocal,
        Family::AlgScLocal,
        Family::OptSns,
        Family::OptSc,
        Family::OptPc,
        Family::Amortization,
        Family::OptTotal,
        Family::AlgTotal,
        Family::Theorem,
        Family::Observation,
        Family::DeltaBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::AlgSns => "algsns",
            Family::AlgPc => "algpc",
            Family::AlgSc => "algsc",
            Family::AlgSnsLocal => "algsns-local",
            Family::AlgPcLocal => "algpc-local",
            Family::AlgScLocal => "algsc-local",
            Family::OptSns => "optsns",
            Family::OptSc => "optsc",
            Family::OptPc => "optpc",
            Family::Amortization => "amortization",
            Family::OptTotal => "opttotal",
            Family::AlgTotal => "algtotal",
            Family::Theorem => "theorem",
            Family::Observation => "observation",
            Family::DeltaBound => "deltabound",
        }
    }

    /// Whether the family is about an optimal arrangement.
    pub fn needs_opt(self) -> bool {
        matches!(
            self,
            Family::OptSns
                | Family::OptSc
                | Family::OptPc
                | Family::Amortization
                | Family::OptTotal
                | Family::Theorem
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// One evaluated inequality, both sides in half-units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Check {
    pub family: Family,
    /// `None` for whole-graph checks.
    pub component: Option<NodeId>,
    pub lhs2: i128,
    pub rhs2: i128,
    pub relation: Relation,
}

impl Check {
    /// How far the check is from failing, in half-units; negative on failure.
    pub fn slack(&self) -> i128 {
        match self.relation {
            Relation::Le => self.rhs2 - self.lhs2,
            Relation::Ge => self.lhs2 - self.rhs2,
            Relation::Eq => -(self.lhs2 - self.rhs2).abs(),
        }
    }

    pub fn holds(&self) -> bool {
        self.slack() >= 0
    }
}

/// Prints a half-unit value in whole units.
pub struct Half(pub i128);

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            let sign = if self.0 < 0 { "-" } else { "" };
            write!(f, "{sign}{}.5", self.0.abs() / 2)
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BoundReport {
    pub checks: Vec<Check>,
}

impl BoundReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds())
    }

    pub fn all_hold(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn family(&self, f: Family) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.family == f)
    }

    /// The check of a family closest to failing (the first failure if any).
    pub fn tightest(&self, f: Family) -> Option<&Check> {
        self.family(f).min_by_key(|c| c.slack())
    }

    /// One `<family> PASS|FAIL <lhs> <rhs>` line per evaluated family.
    pub fn lines(&self) -> Vec<String> {
        Family::ALL
            .into_iter()
            .filter_map(|f| {
                let c = self.tightest(f)?;
                let verdict = if self.family(f).all(Check::holds) {
                    "PASS"
                } else {
                    "FAIL"
                };
                Some(format!("{f} {verdict} {} {}", Half(c.lhs2), Half(c.rhs2)))
            })
            .collect()
    }
}

fn check(family: Family, component: Option<NodeId>, lhs2: i128, relation: Relation, rhs2: i128) -> Check {
    Check {
        family,
        component,
        lhs2,
        rhs2,
        relation,
    }
}

fn ledger_checks(
    x: &Expansion,
    arr: &Arrangement,
    ledger: &CostLedger,
    out: &mut Vec<Check>,
) -> i128 {
    let total = arrangement_cost(x.graph(), arr).expect("arrangement covers the expansion") as i128;
    out.push(check(
        Family::Observation,
        None,
        2 * ledger.exclusive_total() as i128,
        Relation::Eq,
        2 * total,
    ));
    for c in x.components() {
        out.push(check(
            Family::DeltaBound,
            Some(c.id),
            2 * ledger.delta[c.id] as i128,
            Relation::Le,
            2 * delta_cap(&c) as i128,
        ));
    }
    total
}

/// The subtree rooted at `id` as a tree of its own.
pub fn subtree(t: &SpTree, id: NodeId) -> SpTree {
    let mut first = id;
    while let Some(&c) = t.children(first).first() {
        first = c;
    }
    let mut b = TreeBuilder::new();
    for old in first..=id {
        let kids = t.children(old).iter().map(|&c| c - first).collect();
        b.node(t.kind(old), kids);
    }
    b.finish(id - first).expect("a subtree is a tree")
}

/// The algorithm-side component bounds evaluated at the recursion level
/// where each component is arranged: the subtree is arranged on its own and
/// its exclusive cost taken there, before any ancestor moves its terminals.
/// `D` is the whole graph's maximum degree.
///
/// These are diagnostics next to [`Family::AlgSns`], [`Family::AlgPc`] and
/// [`Family::AlgSc`], which use the final arrangement as the exclusive cost
/// is defined.
pub fn local_level_checks(x: &Expansion) -> Vec<Check> {
    let t = x.tree();
    let d = max_degree(x.graph()) as i128;
    let mut out = Vec::new();
    for id in t.ids() {
        let (family, factor) = match t.kind(id) {
            Kind::Leaf(_) => (Family::AlgSnsLocal, 1),
            Kind::Parallel => (Family::AlgPcLocal, 2 * d * d),
            Kind::Series => (Family::AlgScLocal, 2 * d),
        };
        let sub = subtree(t, id);
        let local = expand(&sub);
        let arr = arrange(&sub).expect("subtrees of minimal trees are minimal");
        let e = exclusive_cost(&local, &arr, sub.root()) as i128;
        let rhs = factor * size_term(&local, sub.root()) as i128;
        out.push(check(family, Some(id), 2 * e, Relation::Le, 2 * rhs));
    }
    out
}

/// Evaluates every inequality on the algorithm's arrangement and, if given,
/// on an optimal one. `sd` must be an S-decomposition of `x`.
pub fn component_bound_report(
    x: &Expansion,
    alg: &Arrangement,
    opt: Option<&Arrangement>,
    sd: &SDecomposition,
) -> BoundReport {
    let mut checks = Vec::new();
    let d = max_degree(x.graph()) as i128;
    let la = CostLedger::compute(x, alg, sd);
    let alg_cost = ledger_checks(x, alg, &la, &mut checks);
    for c in x.components() {
        let e2 = 2 * la.exclusive[c.id] as i128;
        let term = size_term(x, c.id) as i128;
        let (family, rhs) = match c.kind {
            Kind::Leaf(_) => (Family::AlgSns, term),
            Kind::Parallel => (Family::AlgPc, 2 * d * d * term),
            Kind::Series => (Family::AlgSc, 2 * d * term),
        };
        checks.push(check(family, Some(c.id), e2, Relation::Le, 2 * rhs));
    }
    checks.push(check(
        Family::AlgTotal,
        None,
        2 * alg_cost,
        Relation::Le,
        2 * alg_upper_bound_rhs(x, d as u64) as i128,
    ));

    if let Some(opt) = opt {
        let lo = CostLedger::compute(x, opt, sd);
        let opt_cost = ledger_checks(x, opt, &lo, &mut checks);
        for c in x.components() {
            let a2 = 2 * lo.amortized[c.id] as i128;
            let child_delta: i128 = c.children.iter().map(|&k| lo.delta[k] as i128).sum();
            let own = lo.delta[c.id] as i128;
            let term = size_term(x, c.id) as i128;
            let (family, rhs2) = match c.kind {
                Kind::Leaf(_) => (Family::OptSns, 2 * (c.size() as i128 - 1 + own)),
                Kind::Series => (Family::OptSc, term + 2 + 2 * child_delta - 2 * own),
                Kind::Parallel => (Family::OptPc, term + 2 * child_delta - 2 * own),
            };
            checks.push(check(family, Some(c.id), a2, Relation::Ge, rhs2));
        }
        checks.push(check(
            Family::Amortization,
            None,
            2 * lo.amortized_total() as i128,
            Relation::Le,
            6 * lo.exclusive_total() as i128,
        ));
        checks.push(check(
            Family::OptTotal,
            None,
            14 * opt_cost,
            Relation::Ge,
            2 * opt_lower_bound_rhs(x) as i128,
        ));
        checks.push(check(
            Family::Theorem,
            None,
            2 * alg_cost,
            Relation::Le,
            28 * d * d * opt_cost,
        ));
    }
    BoundReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_tree;

    fn ex(s: &str) -> Expansion {
        expand(&parse_tree(s).unwrap())
    }

    fn order(x: &Expansion, names: &[&str]) -> Arrangement {
        let ids: Vec<usize> = names
            .iter()
            .map(|n| x.graph().node_index(n).unwrap())
            .collect();
        Arrangement::from_order(&ids).unwrap()
    }

    // diamond: s, t, a = r.0:1, b = r.1:1
    fn diamond() -> (Expansion, Arrangement) {
        let x = ex("P(L(2),L(2))");
        let arr = order(&x, &["s", "t", "r.0:1", "r.1:1"]);
        (x, arr)
    }

    #[test]
    fn restrict_drops_and_compacts() {
        let (x, arr) = diamond();
        let child = x.component(x.root().children[0]);
        let r = restrict(&arr, &child);
        let g = x.graph();
        assert_eq!(r.position(g.node_index("s").unwrap()), Some(1));
        assert_eq!(r.position(g.node_index("t").unwrap()), Some(2));
        assert_eq!(r.position(g.node_index("r.0:1").unwrap()), Some(3));
        assert_eq!(r.position(g.node_index("r.1:1").unwrap()), None);
        let whole = restrict(&arr, &x.root());
        assert_eq!(whole.order(), arr.order().as_slice());
    }

    #[test]
    fn diamond_ledger() {
        let (x, arr) = diamond();
        let [a, b] = [x.root().children[0], x.root().children[1]];
        assert_eq!(restricted_cost(&x, &arr, a), 3);
        assert_eq!(restricted_cost(&x, &arr, b), 3);
        assert_eq!(restricted_cost(&x, &arr, x.tree().root()), 8);
        assert_eq!(exclusive_cost(&x, &arr, x.tree().root()), 2);
        assert_eq!(exclusive_cost(&x, &arr, a), 3);
        let ledger = CostLedger::compute(&x, &arr, &s_decomposition(&x));
        assert_eq!(ledger.exclusive, vec![3, 3, 2]);
        assert_eq!(ledger.amortized, ledger.exclusive);
        assert!(check_cost_decomposition(&x, &arr).is_ok());
    }

    #[test]
    fn zigzag_leaf() {
        let x = ex("L(5)");
        let arr = arrange(x.tree()).unwrap();
        assert_eq!(exclusive_cost(&x, &arr, 0), 9);
        assert!(check_cost_decomposition(&x, &arr).is_ok());
    }

    #[test]
    fn series_example() {
        let x = ex("S(L(1),P(L(1),L(1)))");
        let alg = arrange(x.tree()).unwrap();
        assert_eq!(exclusive_cost(&x, &alg, x.tree().root()), 1);
        // optimum s, x, t
        let opt = order(&x, &["s", "r~1", "t"]);
        let sd = s_decomposition(&x);
        let ledger = CostLedger::compute(&x, &opt, &sd);
        let root = x.tree().root();
        assert_eq!(ledger.exclusive[root], 0);
        // leaf edge s-x plus the S-path edge x-t
        assert_eq!(ledger.amortized[root], 2);
        let report = component_bound_report(&x, &alg, Some(&opt), &sd);
        let optsc = report.tightest(Family::OptSc).unwrap();
        assert_eq!((optsc.lhs2, optsc.rhs2), (4, 3));
        assert!(report.all_hold());
    }

    #[test]
    fn delta_examples() {
        let x = ex("L(5)");
        let c = x.root();
        let g = x.graph();
        let names = ["r:1", "r:2", "s", "t", "r:3", "r:4"];
        let arr = order(&x, &names);
        assert_eq!(delta(&arr, &c), 2);
        assert_eq!(delta_cap(&c), 2);
        let arr = order(&x, &["s", "r:1", "r:2", "r:3", "r:4", "t"]);
        assert_eq!(delta(&arr, &c), 0);
        let x4 = ex("L(4)");
        let arr = order(&x4, &["t", "r:1", "s", "r:2", "r:3"]);
        assert_eq!(delta(&arr, &x4.root()), 0);
        let _ = g;
    }

    #[test]
    fn diamond_s_decomposition() {
        let x = ex("P(L(2),L(2))");
        let sd = s_decomposition(&x);
        let pp = sd.paths(x.tree().root()).unwrap();
        let g = x.graph();
        let names = |p: &Path| p.nodes.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
        assert_eq!(names(&pp.a_path), ["s", "r.0:1", "t"]);
        assert_eq!(pp.s_paths.len(), 1);
        assert_eq!(names(&pp.s_paths[0]), ["s", "r.1:1", "t"]);
        assert!(sd.check(&x).is_ok());
    }

    #[test]
    fn parallel_edges_decomposition() {
        let x = ex("P(L(1),L(1))");
        let sd = s_decomposition(&x);
        let pp = sd.paths(x.tree().root()).unwrap();
        assert_eq!(pp.a_path.edges, vec![0]);
        assert_eq!(pp.s_paths[0].edges, vec![1]);
        assert!(sd.check(&x).is_ok());
    }

    #[test]
    fn nested_decomposition_is_disjoint() {
        // two inner P-nodes inside each branch of an outer one
        let x = ex("P(S(P(L(2),L(1),L(2)),L(1),P(L(1),L(3))),S(L(2),P(L(2),L(2))),L(4))");
        let sd = s_decomposition(&x);
        assert!(sd.check(&x).is_ok());
        let root = sd.paths(x.tree().root()).unwrap();
        // the outer A-path runs through the inner A-paths
        let inner = x.component(x.root().children[0]).children[0];
        let inner_a = &sd.paths(inner).unwrap().a_path.edges;
        assert!(inner_a.iter().all(|e| root.a_path.edges.contains(e)));
        let mut broken = sd.clone();
        let pp = broken.paths[x.tree().root()].as_mut().unwrap();
        pp.s_paths[0] = sd.paths(inner).unwrap().s_paths[0].clone();
        assert!(broken.check(&x).is_err());
    }

    #[test]
    fn rhs_examples() {
        let x = ex("P(L(2),L(2))");
        assert_eq!(opt_lower_bound_rhs(&x), 9);
        assert_eq!(alg_upper_bound_rhs(&x, 2), 16);
        assert_eq!(opt_lower_bound_rhs(&ex("L(1)")), 2);
        assert_eq!(opt_lower_bound_rhs(&ex("L(4)")), 8);
        assert_eq!(alg_upper_bound_rhs(&ex("L(5)"), 2), 10);
        assert_eq!(alg_upper_bound_rhs(&ex("L(2)"), 2), 4);
    }

    #[test]
    fn diamond_report() {
        let (x, alg) = diamond();
        let opt = order(&x, &["s", "r.0:1", "t", "r.1:1"]);
        assert_eq!(arrangement_cost(x.graph(), &opt), Ok(6));
        let report = component_bound_report(&x, &alg, Some(&opt), &s_decomposition(&x));
        assert!(report.all_hold(), "{:?}", report.lines());
        let lines = report.lines();
        assert!(lines.contains(&"opttotal PASS 42 9".to_string()), "{lines:?}");
        assert!(lines.contains(&"algtotal PASS 8 16".to_string()), "{lines:?}");
        let alg_only = component_bound_report(&x, &alg, None, &s_decomposition(&x));
        assert!(alg_only.checks.iter().all(|c| !c.family.needs_opt()));
    }

    #[test]
    fn lent_sink_stretches_a_parallel_child() {
        // the series level moves P's sink away from its interior node
        let x = ex("S(P(L(1),L(2)),L(6))");
        let alg = arrange(x.tree()).unwrap();
        let p = x.root().children[0];
        assert_eq!(exclusive_cost(&x, &alg, p), 1);
        assert_eq!(size_term(&x, p), 0);
        let report = component_bound_report(&x, &alg, None, &s_decomposition(&x));
        assert!(!report.family(Family::AlgPc).all(Check::holds));
        let local = local_level_checks(&x);
        let at_p = local.iter().find(|c| c.component == Some(p)).unwrap();
        assert_eq!((at_p.lhs2, at_p.rhs2), (0, 0));
    }

    #[test]
    fn lent_sink_stretches_a_leaf() {
        let x = ex("S(L(7),P(L(1),L(3),L(1),L(3),L(3)))");
        let alg = arrange(x.tree()).unwrap();
        assert_eq!(exclusive_cost(&x, &alg, 0), 15);
        assert_eq!(size_term(&x, 0), 14);
        let local = local_level_checks(&x);
        assert!(local.iter().all(Check::holds));
        assert_eq!(local[0].family, Family::AlgSnsLocal);
    }

    #[test]
    fn subtree_extraction() {
        let t = parse_tree("S(L(2),P(S(L(1),P(L(1),L(3))),L(2)),L(1))").unwrap();
        let p = t.children(t.root())[1];
        assert_eq!(subtree(&t, p).to_string(), "P(S(L(1),P(L(1),L(3))),L(2))");
        assert_eq!(subtree(&t, t.root()), t);
        assert_eq!(subtree(&t, 0).to_string(), "L(2)");
    }

    #[test]
    fn half_display() {
        assert_eq!(Half(3).to_string(), "1.5");
        assert_eq!(Half(-3).to_string(), "-1.5");
        assert_eq!(Half(-4).to_string(), "-2");
        assert_eq!(Half(0).to_string(), "0");
    }
}

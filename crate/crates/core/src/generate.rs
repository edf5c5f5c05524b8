//! Seeded random SP-trees.
//!
//! The generator is ChaCha8 seeded with `seed_from_u64(seed)`. The tree is
//! built top-down, drawing in pre-order:
//!
//! * a budget of 1 becomes `L(k)` with `k` uniform in `1..=kmax`;
//! * otherwise the node is S with probability `balance`, else P; its fan-out
//!   is uniform in `2..=min(max_fan, budget)`, and the budget is split into
//!   that many positive parts by `fan - 1` distinct cut points drawn
//!   uniformly from `1..budget`; children are then built left to right.
//!
//! The result is minimized, so the final leaf count can be smaller than the
//! budget (adjacent leaves under an S-node merge).

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::{minimize, Kind, NodeId, SpTree, TreeBuilder};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    /// Leaf budget, at least 1.
    pub leaves: usize,
    /// At least 2.
    pub max_fan: usize,
    /// Leaf lengths are drawn from `1..=kmax`.
    pub kmax: usize,
    /// Probability of an S-node, in `(0, 1)`.
    pub balance: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            leaves: 8,
            max_fan: 4,
            kmax: 3,
            balance: 0.5,
        }
    }
}

impl GenParams {
    fn assert_valid(&self) {
        assert!(self.leaves >= 1, "leaf budget must be at least 1");
        assert!(self.max_fan >= 2, "max fan-out must be at least 2");
        assert!(self.kmax >= 1, "kmax must be at least 1");
        assert!(
            self.balance > 0.0 && self.balance < 1.0,
            "balance must lie in (0, 1)"
        );
    }
}

pub fn generate(p: &GenParams) -> SpTree {
    generate_with(&mut ChaCha8Rng::seed_from_u64(p.seed), p)
}

/// Like [`generate`] but drawing from `rng`; `p.seed` is ignored.
pub fn generate_with<R: Rng + ?Sized>(rng: &mut R, p: &GenParams) -> SpTree {
    p.assert_valid();
    struct Frame {
        kind: Kind,
        parts: Vec<usize>,
        kids: Vec<NodeId>,
    }
    let mut b = TreeBuilder::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut pending = Some(p.leaves);
    let root = loop {
        if let Some(budget) = pending.take() {
            if budget == 1 {
                let id = b.leaf(rng.gen_range(1..=p.kmax));
                match stack.last_mut() {
                    Some(f) => f.kids.push(id),
                    None => break id,
                }
            } else {
                let kind = if rng.gen_bool(p.balance) {
                    Kind::Series
                } else {
                    Kind::Parallel
                };
                let fan = rng.gen_range(2..=p.max_fan.min(budget));
                let mut cuts = sample(rng, budget - 1, fan - 1).into_vec();
                cuts.sort_unstable();
                let mut parts = Vec::with_capacity(fan);
                let mut prev = 0;
                for c in cuts {
                    parts.push(c + 1 - prev);
                    prev = c + 1;
                }
                parts.push(budget - prev);
                parts.reverse();
                stack.push(Frame {
                    kind,
                    parts,
                    kids: Vec::with_capacity(fan),
                });
            }
        }
        let top = stack.last_mut().expect("an open node");
        if let Some(next) = top.parts.pop() {
            pending = Some(next);
            continue;
        }
        let f = stack.pop().expect("an open node");
        let id = b.node(f.kind, f.kids);
        match stack.last_mut() {
            Some(parent) => parent.kids.push(id),
            None => break id,
        }
    };
    minimize(&b.finish(root).expect("generated tree is well-formed"))
}

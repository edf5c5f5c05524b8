//! End-to-end checks: arrange, solve exactly, evaluate every bound.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    check_cost_decomposition, component_bound_report, local_level_checks, s_decomposition, BoundReport, Family,
};
use crate::arrange::arrange;
use crate::expand::expand;
use crate::generate::{generate, generate_with, GenParams};
use crate::graph::{arrangement_cost, max_degree, Arrangement};
use crate::oracle::{brute_force_minla, exact_minla, DEFAULT_BRUTE_LIMIT};
use crate::par::Execution;
use crate::tree::SpTree;

/// Outcome of verifying one tree.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub tree: String,
    pub nodes: usize,
    pub degree: usize,
    pub alg_cost: u64,
    pub opt_cost: Option<u64>,
    pub report: BoundReport,
    /// Problems outside the bound report (S-decomposition, oracle
    /// disagreement, shuffled cost decomposition).
    pub errors: Vec<String>,
    pub brute_checked: bool,
    pub shuffled_checked: usize,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.report.all_hold()
    }

    /// Report lines plus summary comments.
    pub fn lines(&self) -> Vec<String> {
        let mut out = self.report.lines();
        out.push(format!(
            "sdecomposition {}",
            if self.errors.iter().any(|e| e.starts_with("sdecomposition")) {
                "FAIL"
            } else {
                "PASS"
            }
        ));
        out.push(format!("# tree {}", self.tree));
        out.push(format!("# nodes {} degree {}", self.nodes, self.degree));
        out.push(format!("# alg {}", self.alg_cost));
        if let Some(opt) = self.opt_cost {
            out.push(format!("# opt {opt}"));
        }
        out.extend(self.errors.iter().map(|e| format!("# error {e}")));
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Solve exactly and evaluate the optimal-side bounds.
    pub opt: bool,
    pub dp_limit: usize,
    /// Cross-check the DP by enumeration up to this many nodes.
    pub brute_limit: usize,
    /// Random arrangements on which to re-check the cost decomposition.
    pub shuffles: usize,
    pub shuffle_seed: u64,
    /// Add the per-recursion-level diagnostics (quadratic in the depth).
    pub local_checks: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            opt: true,
            dp_limit: 20,
            brute_limit: DEFAULT_BRUTE_LIMIT,
            shuffles: 0,
            shuffle_seed: 0,
            local_checks: true,
        }
    }
}

/// Runs the whole pipeline on one minimal tree.
pub fn verify_tree(t: &SpTree, o: &VerifyOptions) -> Result<Verdict, crate::arrange::ArrangeError> {
    let alg = arrange(t)?;
    let x = expand(t);
    let g = x.graph();
    let alg_cost = arrangement_cost(g, &alg).expect("arrangement covers the expansion");
    let sd = s_decomposition(&x);
    let mut errors = Vec::new();
    if let Err(e) = sd.check(&x) {
        errors.push(format!("sdecomposition {e}"));
    }
    let mut brute_checked = false;
    let opt = if o.opt {
        match exact_minla(g, o.dp_limit) {
            Ok((cost, arr)) => {
                if g.node_count() <= o.brute_limit {
                    brute_checked = true;
                    let (bf, _) = brute_force_minla(g, o.brute_limit, Execution::Sequential)
                        .expect("within the brute-force limit");
                    if bf != cost {
                        errors.push(format!("oracle dp {cost} != enumeration {bf}"));
                    }
                }
                Some((cost, arr))
            }
            Err(e) => {
                errors.push(format!("oracle {e}"));
                None
            }
        }
    } else {
        None
    };
    let mut report = component_bound_report(&x, &alg, opt.as_ref().map(|(_, a)| a), &sd);
    if o.local_checks {
        report.checks.extend(local_level_checks(&x));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(o.shuffle_seed);
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    for _ in 0..o.shuffles {
        order.shuffle(&mut rng);
        let arr = Arrangement::from_order(&order).expect("permutation");
        if let Err(e) = check_cost_decomposition(&x, &arr) {
            errors.push(format!("shuffled {e}"));
        }
    }
    Ok(Verdict {
        tree: t.to_string(),
        nodes: g.node_count(),
        degree: max_degree(g),
        alg_cost,
        opt_cost: opt.map(|(c, _)| c),
        report,
        errors,
        brute_checked,
        shuffled_checked: o.shuffles,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SweepParams {
    pub count: usize,
    pub max_nodes: usize,
    pub seed: u64,
    pub max_fan: usize,
    pub kmax: usize,
    /// Random arrangements per instance for the cost decomposition check.
    pub shuffles: usize,
    pub exec: Execution,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            count: 500,
            max_nodes: 10,
            seed: 0,
            max_fan: 4,
            kmax: 3,
            shuffles: 1,
            exec: Execution::Parallel,
        }
    }
}

/// The tree for sweep instance `index`: ChaCha8 seeded with `seed` on
/// stream `index`; a leaf budget uniform in `1..=max_nodes` is drawn and the
/// tree generated from the same stream, retrying until the expanded graph
/// has at most `max_nodes` nodes.
pub fn sweep_instance(p: &SweepParams, index: usize) -> SpTree {
    assert!(p.max_nodes >= 2, "a graph has at least two nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(index as u64);
    let kmax = p.kmax.min(p.max_nodes - 1);
    loop {
        let params = GenParams {
            seed: 0,
            leaves: rng.gen_range(1..=p.max_nodes),
            max_fan: p.max_fan,
            kmax,
            balance: 0.5,
        };
        let t = generate_with(&mut rng, &params);
        if t.graph_node_count() <= p.max_nodes {
            return t;
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub instances: usize,
    /// Per family: (checks evaluated, checks failed).
    pub families: BTreeMap<Family, (usize, usize)>,
    pub sd_failures: usize,
    pub brute_checked: usize,
    pub shuffled_checked: usize,
    /// Largest ALG/OPT as a fraction.
    pub max_ratio: Option<(u64, u64)>,
    /// `(instance, tree, message)`
    pub failures: Vec<(usize, String, String)>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn add(&mut self, index: usize, v: &Verdict) {
        self.instances += 1;
        for c in &v.report.checks {
            let entry = self.families.entry(c.family).or_default();
            entry.0 += 1;
            if !c.holds() {
                entry.1 += 1;
                self.failures.push((
                    index,
                    v.tree.clone(),
                    format!("{} component {:?} lhs2 {} rhs2 {}", c.family, c.component, c.lhs2, c.rhs2),
                ));
            }
        }
        for e in &v.errors {
            if e.starts_with("sdecomposition") {
                self.sd_failures += 1;
            }
            self.failures.push((index, v.tree.clone(), e.clone()));
        }
        self.brute_checked += v.brute_checked as usize;
        self.shuffled_checked += v.shuffled_checked;
        if let Some(opt) = v.opt_cost {
            let better = match self.max_ratio {
                None => true,
                Some((a, o)) => v.alg_cost as u128 * o as u128 > a as u128 * opt as u128,
            };
            if better {
                self.max_ratio = Some((v.alg_cost, opt));
            }
        }
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (family, (checked, failed)) in &self.families {
            let verdict = if *failed == 0 { "PASS" } else { "FAIL" };
            writeln!(f, "{family} {verdict} checked={checked} failed={failed}")?;
        }
        let verdict = if self.sd_failures == 0 { "PASS" } else { "FAIL" };
        writeln!(f, "sdecomposition {verdict} failed={}", self.sd_failures)?;
        writeln!(f, "# instances {}", self.instances)?;
        writeln!(f, "# brute-force cross-checks {}", self.brute_checked)?;
        writeln!(f, "# shuffled arrangements {}", self.shuffled_checked)?;
        if let Some((a, o)) = self.max_ratio {
            writeln!(f, "# max ratio {a}/{o} = {:.4}", a as f64 / o as f64)?;
        }
        for (i, tree, msg) in &self.failures {
            writeln!(f, "# failure instance {i} {tree}: {msg}")?;
        }
        Ok(())
    }
}

/// Verifies `count` generated instances; aggregation follows instance order.
pub fn run_verify(p: &SweepParams) -> SweepSummary {
    let opts = VerifyOptions {
        shuffles: p.shuffles,
        dp_limit: p.max_nodes.max(20),
        ..VerifyOptions::default()
    };
    let verdicts = p.exec.map((0..p.count).collect(), |i| {
        let t = sweep_instance(p, i);
        let o = VerifyOptions {
            shuffle_seed: p.seed ^ (i as u64).rotate_left(32),
            ..opts
        };
        verify_tree(&t, &o).expect("generated trees are minimal")
    });
    let mut summary = SweepSummary::default();
    for (i, v) in verdicts.iter().enumerate() {
        summary.add(i, v);
    }
    summary
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRow {
    pub edges: usize,
    pub time: Duration,
}

/// A tree with roughly `edges` edges (the leaf budget is `edges / 2` with
/// leaf lengths in `1..=3`).
pub fn bench_tree(edges: usize, seed: u64) -> SpTree {
    generate(&GenParams {
        seed,
        leaves: (edges / 2).max(1),
        max_fan: 4,
        kmax: 3,
        balance: 0.5,
    })
}

/// Times [`arrange`] alone (best of `runs`) on pre-generated trees.
pub fn run_bench(sizes: &[usize], seed: u64, runs: usize) -> Vec<BenchRow> {
    sizes
        .iter()
        .map(|&size| {
            let t = bench_tree(size, seed);
            let time = (0..runs.max(1))
                .map(|_| {
                    let start = Instant::now();
                    let arr = arrange(&t).expect("generated trees are minimal");
                    let elapsed = start.elapsed();
                    std::hint::black_box(arr);
                    elapsed
                })
                .min()
                .expect("at least one run");
            BenchRow {
                edges: t.edge_count(),
                time,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_tree;

    #[test]
    fn diamond_fixture() {
        let v = verify_tree(&parse_tree("P(L(2),L(2))").unwrap(), &VerifyOptions::default()).unwrap();
        assert!(v.passed(), "{:?}", v.lines());
        assert_eq!((v.alg_cost, v.opt_cost, v.degree), (8, Some(6), 2));
        assert!(v.lines().contains(&"theorem PASS 8 336".to_string()));
    }

    #[test]
    fn single_edge_fixture() {
        let v = verify_tree(&parse_tree("L(1)").unwrap(), &VerifyOptions::default()).unwrap();
        assert!(v.passed());
        assert_eq!((v.alg_cost, v.opt_cost), (1, Some(1)));
    }

    #[test]
    fn sweep_instances_are_bounded_and_reproducible() {
        let p = SweepParams {
            count: 50,
            max_nodes: 7,
            seed: 3,
            ..SweepParams::default()
        };
        for i in 0..p.count {
            let t = sweep_instance(&p, i);
            assert!(t.graph_node_count() <= 7);
            assert_eq!(t, sweep_instance(&p, i));
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut p = SweepParams {
            count: 40,
            max_nodes: 8,
            seed: 11,
            ..SweepParams::default()
        };
        let a = run_verify(&p).to_string();
        p.exec = Execution::Sequential;
        assert_eq!(a, run_verify(&p).to_string());
    }

    #[test]
    fn bench_rows() {
        assert!(run_bench(&[], 1, 1).is_empty());
        let a = run_bench(&[1000, 2000], 5, 1);
        let b = run_bench(&[1000, 2000], 5, 1);
        assert_eq!(a.len(), 2);
        assert_eq!(
            a.iter().map(|r| r.edges).collect::<Vec<_>>(),
            b.iter().map(|r| r.edges).collect::<Vec<_>>()
        );
    }
}

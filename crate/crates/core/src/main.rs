use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use sp_arrange::graph::{arrangement_cost, parse_edge_list, Arrangement, Graph};
use sp_arrange::oracle::{exact_minla, DEFAULT_DP_LIMIT};
use sp_arrange::recognize::{decompose_embedded, recognize};
use sp_arrange::tree::{parse_tree, SpTree};
use sp_arrange::verify::{run_bench, run_verify, verify_tree, SweepParams, VerifyOptions};
use sp_arrange::{arrange, expand, generate, Execution, GenParams};

#[derive(Parser)]
#[command(name = "sp-arrange", version, about = "Linear arrangements of series-parallel graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a random minimal SP-tree.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        leaves: usize,
        #[arg(long, default_value_t = 4)]
        max_fan: usize,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value_t = 0.5)]
        balance: f64,
    },
    /// Print the minimal SP-tree of an edge list.
    Decompose {
        #[arg(long)]
        edges: String,
        #[arg(long, requires = "sink")]
        source: Option<String>,
        #[arg(long, requires = "source")]
        sink: Option<String>,
    },
    /// Arrange a tree's expansion or an edge list.
    Arrange {
        #[command(flatten)]
        input: Input,
    },
    /// Exact minimum linear arrangement of a small edge list.
    Exact {
        #[arg(long)]
        edges: String,
        #[arg(long, default_value_t = DEFAULT_DP_LIMIT)]
        limit: usize,
    },
    /// Evaluate the cost bounds on one tree or a random sweep.
    Verify {
        #[arg(long, conflicts_with = "sweep")]
        tree: Option<String>,
        /// Also solve exactly and check the optimal-side bounds.
        #[arg(long)]
        opt: bool,
        /// Number of random instances.
        #[arg(long)]
        sweep: Option<usize>,
        #[arg(long, default_value_t = 10)]
        max_nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random arrangements per instance for the cost decomposition.
        #[arg(long, default_value_t = 1)]
        shuffles: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Time the arrangement of generated trees.
    Bench {
        /// Comma-separated approximate edge counts.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        runs: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    #[arg(long)]
    tree: Option<String>,
    #[arg(long)]
    edges: Option<String>,
}

fn read(path: &str) -> Result<String> {
    if path == "-" {
        return std::io::read_to_string(std::io::stdin()).context("reading stdin");
    }
    fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn read_tree(path: &str) -> Result<SpTree> {
    Ok(parse_tree(read(path)?.trim())?)
}

fn read_graph(path: &str) -> Result<Graph> {
    Ok(parse_edge_list(&read(path)?)?)
}

fn node(g: &Graph, name: &str) -> Result<usize> {
    g.node_index(name)
        .with_context(|| format!("unknown node {name:?}"))
}

fn print_arrangement(g: &Graph, arr: &Arrangement) {
    for v in arr.order() {
        println!("{} {}", g.name(v), arr.positions()[v]);
    }
    println!("# cost {}", arrangement_cost(g, arr).expect("arrangement covers the graph"));
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen {
            seed,
            leaves,
            max_fan,
            kmax,
            balance,
        } => {
            if leaves == 0 || max_fan < 2 || kmax == 0 || !(balance > 0.0 && balance < 1.0) {
                bail!("need leaves >= 1, max-fan >= 2, kmax >= 1 and 0 < balance < 1");
            }
            let t = generate(&GenParams {
                seed,
                leaves,
                max_fan,
                kmax,
                balance,
            });
            println!("{t}");
        }
        Cmd::Decompose {
            edges,
            source,
            sink,
        } => {
            let g = read_graph(&edges)?;
            let d = match (source, sink) {
                (Some(s), Some(t)) => decompose_embedded(&g, Some((node(&g, &s)?, node(&g, &t)?)))?,
                _ if g.terminals().is_some() => decompose_embedded(&g, None)?,
                _ => recognize(&g)?,
            };
            println!("{}", d.tree);
            println!("# source {} sink {}", g.name(d.source), g.name(d.sink));
        }
        Cmd::Arrange { input } => {
            if let Some(path) = input.tree {
                let t = read_tree(&path)?;
                let x = expand(&t);
                print_arrangement(x.graph(), &arrange(&t)?);
            } else if let Some(path) = input.edges {
                let g = read_graph(&path)?;
                let d = if g.terminals().is_some() {
                    decompose_embedded(&g, None)?
                } else {
                    recognize(&g)?
                };
                let on_tree = arrange(&d.tree)?;
                let mut positions = vec![0; g.node_count()];
                for (expanded, &p) in on_tree.positions().iter().enumerate() {
                    positions[d.embedding[expanded]] = p;
                }
                print_arrangement(&g, &Arrangement::from_positions(positions));
            }
        }
        Cmd::Exact { edges, limit } => {
            let g = read_graph(&edges)?;
            let (_, arr) = exact_minla(&g, limit)?;
            print_arrangement(&g, &arr);
        }
        Cmd::Verify {
            tree,
            opt,
            sweep,
            max_nodes,
            seed,
            shuffles,
            sequential,
        } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            if let Some(path) = tree {
                let t = read_tree(&path)?;
                let v = verify_tree(
                    &t,
                    &VerifyOptions {
                        opt,
                        ..VerifyOptions::default()
                    },
                )?;
                for line in v.lines() {
                    println!("{line}");
                }
                if let Some(o) = v.opt_cost {
                    println!("# ratio {}/{} = {:.4}", v.alg_cost, o, v.alg_cost as f64 / o as f64);
                }
                return Ok(v.passed());
            }
            let Some(count) = sweep else {
                bail!("verify needs --tree or --sweep");
            };
            if !(2..=20).contains(&max_nodes) {
                bail!("--max-nodes must lie in 2..=20 for the exact oracle");
            }
            let summary = run_verify(&SweepParams {
                count,
                max_nodes,
                seed,
                shuffles,
                exec,
                ..SweepParams::default()
            });
            print!("{summary}");
            return Ok(summary.passed());
        }
        Cmd::Bench { sizes, seed, runs } => {
            let rows = run_bench(&sizes, seed, runs);
            for r in &rows {
                println!("{} {:.6}", r.edges, r.time.as_secs_f64());
            }
            for w in rows.windows(2) {
                println!(
                    "# ratio {}->{} edges: {:.2}x time",
                    w[0].edges,
                    w[1].edges,
                    w[1].time.as_secs_f64() / w[0].time.as_secs_f64().max(1e-9)
                );
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

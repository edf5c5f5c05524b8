//! Linear arrangements of series-parallel graphs: recognition into minimal
//! SP-trees, a recursive arrangement with a `14·D²` guarantee, and exact
//! checking of its cost analysis against an optimal arrangement.

pub mod analysis;
pub mod arrange;
pub mod expand;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod par;
pub mod recognize;
pub mod tree;
pub mod verify;

pub use analysis::{component_bound_report, s_decomposition, CostLedger, Family, SDecomposition};
pub use arrange::{arrange, ArrangeError};
pub use expand::{expand, Expansion};
pub use generate::{generate, GenParams};
pub use graph::{arrangement_cost, max_degree, parse_edge_list, Arrangement, Graph};
pub use oracle::{brute_force_minla, exact_minla};
pub use par::Execution;
pub use recognize::{decompose, decompose_embedded, recognize_terminals, RecognizeError};
pub use tree::{minimize, parse_tree, validate_minimal, SpTree};
pub use verify::{run_bench, run_verify, verify_tree, SweepParams, VerifyOptions};

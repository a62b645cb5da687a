//! Minimum-cut toolkit for weighted undirected graphs.
//!
//! * [`graph`]: the graph type, cuts and contraction.
//! * [`maxflow`]: exact `s`-`t` max-flow with canonical minimal cuts.
//! * [`isolating`]: minimum isolating cuts with logarithmically many flows.
//! * [`steiner`]: Steiner trees, centroids and the decomposition used by
//!   the recursion.
//! * [`mincuts`]: the guided single-source recursion ([`tree_mincuts`],
//!   [`leaf_mincuts`]) and tightness verification ([`sstcv_verify`]).
//! * [`gomory_hu`]: Gusfield's Gomory-Hu tree, used as a baseline.
//! * [`oracle`]: exhaustive ground truth for small graphs.

pub mod error;
pub mod generate;
pub mod gomory_hu;
pub mod graph;
pub mod io;
pub mod isolating;
pub mod maxflow;
pub mod mincuts;
pub mod oracle;
pub mod steiner;
pub mod value;

pub use error::{Error, Result};
pub use generate::{generate, random_spanning_tree, random_tree, random_tree_with_leaf_source, GraphKind};
pub use gomory_hu::{build_gusfield, build_gusfield_with, verify_gh, Counterexample, GHTree};
pub use graph::{contract, ContractionMap, Cut, Edge, Graph};
pub use isolating::{isolating_cuts, IsolatingCut, IsolatingResult};
pub use maxflow::{max_flow, max_flow_multi, FlowResult};
pub use mincuts::{
    derive_seed, leaf_mincuts, sstcv_verify, tree_mincuts, Config, MuEntry, MuTable, Phase, Procedure,
    RecursionStats, StatEntry, Verdict,
};
pub use oracle::{
    brute_eta_tk, brute_isolating, brute_lambda, brute_lambda_tk, brute_steiner_mincut, IsolatingAnswer,
    Oracle, OracleAnswer,
};
pub use steiner::{centroid, decompose, split_at, Decomposition, SteinerTree};
pub use value::CutValue;

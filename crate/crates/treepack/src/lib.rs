//! Spanning-tree packings, coverings and decompositions of loopless
//! multigraphs, plus a budgeted exchange simulator for lazily presented
//! countable graphs.
//!
//! The toolkit revolves around three certificate kinds over a fixed
//! graph: a packing (edge-disjoint spanning trees), a covering (spanning
//! trees whose union is the edge set) and a decomposition (both at
//! once). Good vertex orderings witness the colouring number, back-edge
//! blocks give rainbow forest covers, matroid union builds packings and
//! density certificates, and the exchange engine turns a packing into a
//! decomposition by replacing the latest edge of a fundamental cycle
//! with an earlier uncovered one.

pub mod cert;
pub mod connectivity;
pub mod cover;
pub mod error;
pub mod exchange;
pub mod generate;
pub mod graph;
pub mod io;
pub mod lazy;
pub mod matroid;
pub mod ordering;

pub use cert::{verify_certificate, CertKind, Certificate, Verdict};
pub use connectivity::edge_connectivity;
pub use cover::{
    build_covering, eh_forest_cover, extend_to_spanning_trees, min_cover_number,
    nash_williams_check, CoverOutcome, DensityCertificate, ForestCover, NwMode,
};
pub use error::{Error, Result};
pub use exchange::{
    attach_bond_monitor, choose_tree, choose_tree_among, exchange_step, init_state,
    invariant_report, run_finite, BondMonitor, ExchangeHost, ExchangeStepRecord, InvariantReport,
    PackingState, StepAction,
};
pub use graph::{
    bfs_spanning_tree, contract, crosses_bond, fundamental_cycle, is_spanning_tree, EdgeId,
    EdgeSet, MultiGraph, SpanningTree, VertexId,
};
pub use lazy::{
    closure_budgeted, run_budgeted, ClosureResult, LazyCountableGraph, OverlayTree, SimOutcome,
    SimReport,
};
pub use matroid::{max_tree_packing, PackingOutcome, PartitionWitness};
pub use ordering::{
    back_edge_partition, build_edge_order, colouring_number, degeneracy_ordering,
    verify_good_ordering, BackEdgePartition, EdgeOrder, GoodOrdering,
};

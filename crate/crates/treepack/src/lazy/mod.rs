//! Lazily presented countable multigraphs and budgeted exchange runs.
//!
//! A family provides, by closed formulas: a vertex ordering (ids are the
//! ordering positions), an edge enumeration of order type omega that
//! lists whole back-edge blocks in position order, k edge-disjoint base
//! spanning trees given by membership predicates and parent pointers,
//! a window function, and optional finite bonds for monitoring.
//!
//! The budgeted run drives the exchange engine over the enumeration
//! prefix, resolving fundamental cycles inside materialized windows and
//! re-checking window soundness, tree disjointness and acyclicity, bond
//! monotonicity and persistence at every step.

mod families;

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exchange::{
    exchange_step, BondMonitor, ExchangeHost, ExchangeStepRecord, StepAction,
};
use crate::graph::{DisjointSets, EdgeId, EdgeSet, MultiGraph, VertexId};

pub use families::LazyEdge;
use families::FamilyKind;

/// An implicitly presented countable multigraph with rule-based base
/// spanning trees.
#[derive(Debug, Clone)]
pub struct LazyCountableGraph {
    kind: FamilyKind,
}

impl LazyCountableGraph {
    /// The ray with every edge doubled; the two copy-rays are the base
    /// trees and the packing is already a decomposition.
    pub fn doubled_ray() -> Self {
        LazyCountableGraph { kind: FamilyKind::DoubledRay }
    }

    /// The ray with `m >= 2` parallel copies per edge. Base trees are
    /// the first two copies; for `m > 2` the extra copies are uncovered
    /// and unplaceable, the negative control.
    pub fn multiplied_ray(m: usize) -> Result<Self> {
        Ok(LazyCountableGraph { kind: families::make_multiplied_ray(m)? })
    }

    /// The comb-star instance: a 2-packing, colouring number 3, and
    /// infinitely many uncovered edges that force real exchange work.
    pub fn comb_star() -> Self {
        LazyCountableGraph { kind: FamilyKind::CombStar }
    }

    /// Embeds a finite graph with a verified packing as a constant
    /// family (stages stop growing).
    pub fn from_finite(graph: MultiGraph, trees: Vec<EdgeSet>) -> Result<Self> {
        Ok(LazyCountableGraph { kind: families::make_finite(graph, trees)? })
    }

    pub fn name(&self) -> String {
        self.kind.name()
    }

    /// Number of base spanning trees.
    pub fn k(&self) -> usize {
        self.kind.tree_count()
    }

    pub fn stage_vertex_count(&self, stage: usize) -> usize {
        self.kind.stage_vertex_count(stage)
    }

    pub fn stage_edge_count(&self, stage: usize) -> usize {
        self.kind.stage_edge_count(stage)
    }

    pub fn edge_record(&self, id: EdgeId) -> LazyEdge {
        self.kind.edge_record(id)
    }

    pub fn edges_before_position(&self, pos: usize) -> usize {
        self.kind.edges_before_position(pos)
    }

    pub fn base_tree_contains(&self, tree: usize, id: EdgeId) -> bool {
        self.kind.base_tree_contains(tree, id)
    }

    pub fn base_parent(&self, tree: usize, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.kind.base_parent(tree, v)
    }

    pub fn window_stage(&self, step: usize) -> usize {
        self.kind.window_stage(step)
    }

    pub fn stable_prefix(&self, step: usize) -> usize {
        self.kind.stable_prefix(step)
    }

    pub fn declared_bonds(&self) -> Vec<EdgeSet> {
        self.kind.declared_bonds()
    }

    /// `None` for genuinely infinite families.
    pub fn edge_limit(&self) -> Option<usize> {
        self.kind.edge_limit()
    }

    /// Edge ids on the base-tree path between `u` and `v`, found by
    /// climbing parent pointers to the common ancestor.
    pub fn tree_path(&self, tree: usize, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        let climb = |mut x: VertexId| {
            let mut chain = vec![x];
            while let Some((p, _)) = self.base_parent(tree, x) {
                chain.push(p);
                x = p;
            }
            chain
        };
        let up = climb(u);
        let vp = climb(v);
        let on_v: std::collections::HashSet<VertexId> = vp.iter().copied().collect();
        let meet = *up.iter().find(|x| on_v.contains(x)).expect("trees share a root");
        let mut path = Vec::new();
        let mut x = u;
        while x != meet {
            let (p, e) = self.base_parent(tree, x).unwrap();
            path.push(e);
            x = p;
        }
        let mut tail = Vec::new();
        let mut y = v;
        while y != meet {
            let (p, e) = self.base_parent(tree, y).unwrap();
            tail.push(e);
            y = p;
        }
        tail.reverse();
        path.extend(tail);
        path
    }

    /// Vertices on the path from `x` to the root of the base tree,
    /// including both ends.
    pub fn root_path_vertices(&self, tree: usize, x: VertexId) -> Vec<VertexId> {
        let mut chain = vec![x];
        let mut cur = x;
        while let Some((p, _)) = self.base_parent(tree, cur) {
            chain.push(p);
            cur = p;
        }
        chain
    }

    /// The finite stage-`n` subgraph. Stages are enumeration prefixes,
    /// so local edge ids coincide with global ones.
    pub fn materialize(&self, stage: usize) -> (MultiGraph, BoundaryInfo) {
        let nv = self.stage_vertex_count(stage);
        let ne = self.stage_edge_count(stage);
        let edges: Vec<(VertexId, VertexId)> = (0..ne)
            .map(|id| {
                let rec = self.edge_record(id);
                (rec.u, rec.v)
            })
            .collect();
        let graph = MultiGraph::new(nv, edges).expect("stage subgraph is well formed");
        let mut tree_exits = vec![Vec::new(); self.k()];
        for (tree, exits) in tree_exits.iter_mut().enumerate() {
            for v in 0..nv {
                if let Some((p, e)) = self.base_parent(tree, v) {
                    if p >= nv || e >= ne {
                        exits.push(v);
                    }
                }
            }
        }
        (graph, BoundaryInfo { tree_exits })
    }
}

/// Which base-tree links leave a materialized window: per tree, the
/// window vertices whose parent edge is outside.
#[derive(Debug, Clone)]
pub struct BoundaryInfo {
    pub tree_exits: Vec<Vec<VertexId>>,
}

/// A base spanning tree with a finite patch: `added` holds non-base
/// edges swapped in, `removed` base or previously added edges swapped
/// out.
#[derive(Debug, Clone, Default)]
pub struct OverlayTree {
    added: BTreeSet<EdgeId>,
    removed: BTreeSet<EdgeId>,
}

impl OverlayTree {
    pub fn contains(&self, base: bool, e: EdgeId) -> bool {
        if self.removed.contains(&e) {
            return false;
        }
        base || self.added.contains(&e)
    }

    fn insert(&mut self, e: EdgeId, base: bool) {
        if self.removed.remove(&e) {
            return;
        }
        debug_assert!(!base, "a present base edge cannot be inserted again");
        self.added.insert(e);
    }

    fn remove(&mut self, e: EdgeId, base: bool) {
        if self.added.remove(&e) {
            return;
        }
        debug_assert!(base, "removed edge must be base or previously added");
        self.removed.insert(e);
    }

    pub fn added(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.added.iter().copied()
    }

    pub fn removed(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.removed.iter().copied()
    }

    pub fn patch_size(&self) -> usize {
        self.added.len() + self.removed.len()
    }
}

/// Result of a budgeted closure computation.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub vertices: Vec<VertexId>,
    pub fixed_point: bool,
    pub rounds_used: usize,
}

/// Iterates `X <- union of base-tree root paths of members of X` for at
/// most `budget` rounds or until a fixed point.
pub fn closure_budgeted(
    lg: &LazyCountableGraph,
    x: &[VertexId],
    budget: usize,
) -> ClosureResult {
    let mut set: BTreeSet<VertexId> = x.iter().copied().collect();
    let mut rounds_used = 0;
    let mut fixed_point = set.is_empty();
    for _ in 0..budget {
        let mut next = set.clone();
        for &v in &set {
            for tree in 0..lg.k() {
                next.extend(lg.root_path_vertices(tree, v));
            }
        }
        rounds_used += 1;
        if next == set {
            fixed_point = true;
            break;
        }
        set = next;
    }
    // A full extra round without growth certifies the fixed point even
    // when the budget ran out exactly at stabilization.
    if !fixed_point && !set.is_empty() {
        let mut probe = set.clone();
        for &v in &set {
            for tree in 0..lg.k() {
                probe.extend(lg.root_path_vertices(tree, v));
            }
        }
        fixed_point = probe == set;
    }
    ClosureResult { vertices: set.into_iter().collect(), fixed_point, rounds_used }
}

/// Outcome of a budgeted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimOutcome {
    /// All budgeted steps executed.
    Completed,
    /// The engine found an uncovered edge no tree can take; expected for
    /// families violating the block-size bound.
    Obstructed { step: usize, edge: EdgeId },
}

/// Coverage snapshot taken at a checkpoint: tree membership of every
/// edge below the stable prefix.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub step: usize,
    pub stable_prefix: usize,
    coverage: Vec<Option<usize>>,
}

/// Everything a budgeted run reports.
#[derive(Debug, Clone)]
pub struct SimReport {
    pub family: String,
    pub k: usize,
    pub budget: usize,
    pub steps_executed: usize,
    pub outcome: SimOutcome,
    pub trace: Vec<ExchangeStepRecord>,
    pub swap_count: usize,
    pub checkpoints: Vec<Checkpoint>,
    /// every checkpoint's coverage equals the final one on its prefix
    pub stabilization_ok: bool,
    /// every edge below the final stable prefix ended covered
    pub prefix_fully_covered: bool,
    pub overlays: Vec<OverlayTree>,
    pub final_stage: usize,
    pub bonds_monitored: usize,
}

struct LazyHost<'a> {
    lg: &'a LazyCountableGraph,
    k: usize,
    overlays: Vec<OverlayTree>,
    coverage_override: HashMap<EdgeId, Option<usize>>,
    window: MultiGraph,
    window_stage: usize,
    step: usize,
}

impl<'a> LazyHost<'a> {
    fn new(lg: &'a LazyCountableGraph) -> Self {
        let stage = lg.window_stage(0);
        let (window, _) = lg.materialize(stage);
        LazyHost {
            lg,
            k: lg.k(),
            overlays: vec![OverlayTree::default(); lg.k()],
            coverage_override: HashMap::new(),
            window,
            window_stage: stage,
            step: 0,
        }
    }

    fn grow_window(&mut self, stage: usize) {
        if stage > self.window_stage {
            let (window, _) = self.lg.materialize(stage);
            self.window = window;
            self.window_stage = stage;
        }
    }

    /// Disjointness and acyclicity of all overlay trees inside the
    /// current window.
    fn check_window_invariants(&self) -> Result<()> {
        let nv = self.window.vertex_count();
        let ne = self.window.edge_count();
        let mut owner: Vec<Option<usize>> = vec![None; ne];
        for tree in 0..self.k {
            let mut ds = DisjointSets::new(nv);
            for e in 0..ne {
                if self.tree_contains(tree, e) {
                    if let Some(other) = owner[e] {
                        return Err(Error::Invariant(format!(
                            "step {}: trees {other} and {tree} share edge {e}",
                            self.step
                        )));
                    }
                    owner[e] = Some(tree);
                    let (u, v) = self.window.endpoints(e);
                    if !ds.union(u, v) {
                        return Err(Error::Invariant(format!(
                            "step {}: tree {tree} has a cycle through edge {e}",
                            self.step
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn coverage_of_prefix(&self, prefix: usize) -> Vec<Option<usize>> {
        (0..prefix).map(|e| self.covered_by(e)).collect()
    }
}

impl ExchangeHost for LazyHost<'_> {
    fn tree_count(&self) -> usize {
        self.k
    }

    fn edge_at_rank(&self, rank: usize) -> EdgeId {
        rank // enumeration index is the rank
    }

    fn rank_of(&self, e: EdgeId) -> usize {
        e
    }

    fn block_start_of_rank(&self, rank: usize) -> usize {
        let block = self.lg.edge_record(rank).block;
        self.lg.edges_before_position(block)
    }

    fn covered_by(&self, e: EdgeId) -> Option<usize> {
        if let Some(&over) = self.coverage_override.get(&e) {
            return over;
        }
        (0..self.k).find(|&i| self.lg.base_tree_contains(i, e))
    }

    fn tree_contains(&self, tree: usize, e: EdgeId) -> bool {
        self.overlays[tree].contains(self.lg.base_tree_contains(tree, e), e)
    }

    fn fundamental_cycle(&mut self, tree: usize, e: EdgeId) -> Result<Vec<EdgeId>> {
        let rec = self.lg.edge_record(e);
        let nv = self.window.vertex_count();
        if rec.u >= nv || rec.v >= nv {
            return Err(Error::WindowViolation {
                step: self.step,
                detail: format!("edge {e} has an endpoint outside the window"),
            });
        }
        // BFS through the overlay tree restricted to the window; the
        // window forest is a subforest of the true tree, so any path it
        // finds is the unique tree path.
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut queue = std::collections::VecDeque::new();
        seen[rec.u] = true;
        queue.push_back(rec.u);
        'bfs: while let Some(v) = queue.pop_front() {
            for &(w, id) in self.window.incident(v) {
                if !seen[w] && self.tree_contains(tree, id) {
                    seen[w] = true;
                    parent[w] = Some((v, id));
                    if w == rec.v {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !seen[rec.v] {
            return Err(Error::WindowViolation {
                step: self.step,
                detail: format!(
                    "tree {tree} path for edge {e} leaves the stage-{} window",
                    self.window_stage
                ),
            });
        }
        let mut cycle = vec![e];
        let mut cur = rec.v;
        while cur != rec.u {
            let (p, id) = parent[cur].expect("BFS reconstruction");
            cycle.push(id);
            cur = p;
        }
        Ok(cycle)
    }

    fn apply_swap(&mut self, tree: usize, insert: EdgeId, remove: EdgeId) {
        let insert_base = self.lg.base_tree_contains(tree, insert);
        let remove_base = self.lg.base_tree_contains(tree, remove);
        self.overlays[tree].insert(insert, insert_base);
        self.overlays[tree].remove(remove, remove_base);
        self.coverage_override.insert(insert, Some(tree));
        self.coverage_override.insert(remove, None);
    }
}

/// Runs the exchange for `budget` steps over the enumeration, with
/// checkpoints every `checkpoint_every` steps. Invariant violations and
/// window violations are hard errors; `NoEligibleTree` is reported as a
/// structured obstruction.
pub fn run_budgeted(
    lg: &LazyCountableGraph,
    k: usize,
    budget: usize,
    checkpoint_every: usize,
) -> Result<SimReport> {
    if k != lg.k() {
        return Err(Error::Input(format!(
            "family {} has {} base trees, asked to run with k = {k}",
            lg.name(),
            lg.k()
        )));
    }
    if checkpoint_every == 0 {
        return Err(Error::Input("checkpoint interval must be positive".into()));
    }
    let steps_total = match lg.edge_limit() {
        Some(m) => budget.min(m),
        None => budget,
    };
    let mut host = LazyHost::new(lg);
    let mut monitors: Vec<BondMonitor> = lg
        .declared_bonds()
        .into_iter()
        .map(|bond| BondMonitor::from_edges(&host, bond))
        .collect();
    for monitor in &monitors {
        if !monitor.is_clean() {
            return Err(Error::Invariant(format!(
                "bond monitor unhappy at attach time: {:?}",
                monitor.violations()
            )));
        }
    }
    let mut trace = Vec::with_capacity(steps_total);
    let mut checkpoints = Vec::new();
    let mut outcome = SimOutcome::Completed;
    let mut steps_executed = 0;
    for t in 0..steps_total {
        host.step = t;
        host.grow_window(lg.window_stage(t));
        match exchange_step(&mut host, t) {
            Ok(record) => {
                if matches!(record.action, StepAction::Swap { .. }) {
                    host.check_window_invariants()?;
                }
                trace.push(record);
            }
            Err(Error::NoEligibleTree { step, edge }) => {
                trace.push(ExchangeStepRecord {
                    t,
                    edge,
                    action: StepAction::Error {
                        reason: format!("no eligible tree at step {step}"),
                    },
                });
                outcome = SimOutcome::Obstructed { step, edge };
                break;
            }
            Err(other) => return Err(other),
        }
        steps_executed = t + 1;
        for monitor in &mut monitors {
            monitor.advance(&host, t);
            if !monitor.is_clean() {
                return Err(Error::Invariant(format!(
                    "bond monotonicity violated: {:?}",
                    monitor.violations()
                )));
            }
        }
        if steps_executed % checkpoint_every == 0 && steps_executed < steps_total {
            let stable_prefix = lg.stable_prefix(steps_executed);
            checkpoints.push(Checkpoint {
                step: steps_executed,
                stable_prefix,
                coverage: host.coverage_of_prefix(stable_prefix),
            });
        }
    }
    let final_prefix = lg.stable_prefix(steps_executed);
    let final_coverage = host.coverage_of_prefix(final_prefix);
    let stabilization_ok = checkpoints.iter().all(|cp| {
        cp.coverage
            .iter()
            .enumerate()
            .all(|(e, &cov)| final_coverage.get(e) == Some(&cov))
    });
    let prefix_fully_covered = final_coverage.iter().all(Option::is_some);
    let swap_count = trace
        .iter()
        .filter(|r| matches!(r.action, StepAction::Swap { .. }))
        .count();
    Ok(SimReport {
        family: lg.name(),
        k,
        budget,
        steps_executed,
        outcome,
        trace,
        swap_count,
        checkpoints,
        stabilization_ok,
        prefix_fully_covered,
        overlays: host.overlays,
        final_stage: host.window_stage,
        bonds_monitored: monitors.len(),
    })
}

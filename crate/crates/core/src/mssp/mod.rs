//! Multiple-source shortest paths around a face.
//!
//! Both engines move the holiest tree's source through the vertices on a
//! face `r` in boundary-walk order, one special pivot plus a run of regular
//! pivots per move, and emit the identical pivot stream. [`reference`]
//! recomputes distances and colors after every pivot and is the oracle;
//! [`linear`] is the staged cut-graph engine for small integer costs.

pub mod linear;
pub mod reference;

use crate::embedding::{DartId, EmbeddedGraph, FaceId, VertexId};
use crate::homology::{homology_signatures, tree_cotree, HomologyTable, TreeCotree};
use crate::perturb::{cotree_drainage, perturb_costs, CostTable, Drainage, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotKind {
    Special,
    Regular,
}

/// One step of the MSSP process: the dart that entered the tree, the dart
/// that left, and the unperturbed component of the parameter when it fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotEvent {
    /// 1-based index of the source move this pivot belongs to.
    pub iteration: usize,
    pub kind: PivotKind,
    pub dart_in: DartId,
    pub dart_out: Option<DartId>,
    pub lambda0: i64,
}

impl PivotEvent {
    /// The JSON-lines trace representation shared by both engines.
    pub fn to_json(&self) -> String {
        let kind = match self.kind {
            PivotKind::Special => "special",
            PivotKind::Regular => "regular",
        };
        let out = match self.dart_out {
            Some(d) => d.index().to_string(),
            None => "null".to_string(),
        };
        format!(
            "{{\"iter\":{},\"kind\":\"{}\",\"in\":{},\"out\":{},\"lambda_c0\":{}}}",
            self.iteration,
            kind,
            self.dart_in.index(),
            out,
            self.lambda0
        )
    }
}

pub fn trace_to_string(events: &[PivotEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&e.to_json());
        out.push('\n');
    }
    out
}

/// The source moves around `r`: for each dart `d` of `r`'s clockwise
/// boundary walk, the source moves from `tail(d)` to `head(d)` and the
/// special pivot inserts `rev(d)`.
pub fn source_moves(g: &EmbeddedGraph, r: FaceId) -> Vec<(VertexId, VertexId, DartId)> {
    g.face(r)
        .iter()
        .map(|&d| (g.tail(d), g.head(d), d))
        .collect()
}

/// The shared deterministic perturbation pipeline: a tree-cotree
/// decomposition rooted at vertex 0 and face `r`, its signatures, the
/// cotree drainage with sink `r`, and the perturbed costs.
pub struct Pipeline {
    pub tc: TreeCotree,
    pub sigs: HomologyTable,
    pub drainage: Drainage,
    pub costs: CostTable,
}

pub fn pipeline(g: &EmbeddedGraph, c: &[i64], r: FaceId, variant: Variant) -> Pipeline {
    let tc = tree_cotree(g, VertexId(0), r);
    let sigs = homology_signatures(g, &tc);
    let drainage = cotree_drainage(g, &tc);
    let costs = perturb_costs(g, c, &sigs, &drainage, variant);
    Pipeline {
        tc,
        sigs,
        drainage,
        costs,
    }
}

/// Observer hooks fired by both engines, in event order. Used by the
/// distance streamer and by tests.
pub trait MsspObserver {
    /// Before any iteration, with the initial holiest tree at the first
    /// source.
    fn on_start(&mut self, _tree: &crate::sssp::HolyTree) {}

    /// After the special pivot opening iteration `iteration` (1-based),
    /// where the source moved from `u` to `v` along the boundary dart
    /// `u -> v`, with `dist0` the unperturbed distance from `u` to `v`.
    fn on_special_pivot(&mut self, _iteration: usize, _boundary_dart: DartId, _dist0: i64) {}

    /// After a regular pivot.
    fn on_pivot(&mut self, _event: &PivotEvent) {}

    /// A fully completed round: the unperturbed parameter component rose by
    /// one. `boundary_edges` yields each edge crossing the blue/red
    /// boundary exactly once: the edges of the active darts plus the
    /// parametric dart's edge while any vertex is red.
    fn on_round_completed(
        &mut self,
        _boundary_edges: &mut dyn Iterator<Item = crate::embedding::EdgeId>,
    ) {
    }

    /// After iteration `iteration` ended: the tree is the holiest tree at
    /// the new source and `slack0` evaluates unperturbed slacks under it.
    fn on_iteration_end(&mut self, _iteration: usize, _slack0: &dyn Fn(DartId) -> i64) {}
}

/// An observer that ignores everything.
pub struct NullObserver;

impl MsspObserver for NullObserver {}

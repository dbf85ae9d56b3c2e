//! The reference multiple-source shortest paths engine.
//!
//! Distances and colors are rebuilt by tree traversal after every pivot.
//! This deliberately trades speed for obviousness: it is the oracle the
//! staged engine is validated against, not the product.

use thiserror::Error;

use crate::embedding::{DartId, EmbeddedGraph, FaceId, VertexId};
use crate::mssp::{source_moves, MsspObserver, Pipeline, PivotEvent, PivotKind};
use crate::perturb::{CostTable, CostVec, Variant};
use crate::sssp::{holiest_sssp, holiest_tree_small_int, HolyTree, SsspError};

#[derive(Debug, Error)]
pub enum MsspError {
    #[error("two active darts share the minimum slack; the perturbation failed to break a tie")]
    TieDetected,
    #[error("engine requires a planar instance")]
    NotPlanar,
    #[error(transparent)]
    Sssp(#[from] SsspError),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// Snapshot of the parametric state offered to inspection callbacks before
/// each regular pivot is applied.
pub struct RefState<'s> {
    /// The parametric dart `v -> u` whose cost is the rising parameter.
    pub parametric: DartId,
    pub root: VertexId,
    pub pred: &'s [Option<DartId>],
    /// Red vertices: tree path from the root uses the parametric dart.
    pub red: &'s [bool],
    /// Parameter-free distance parts from the current source; a red
    /// vertex's distance is `base_dist + lambda`.
    pub base_dist: &'s [CostVec],
    pub lambda: &'s CostVec,
}

/// Darts with a blue tail and a red head, excluding the parametric dart.
pub fn active_darts(g: &EmbeddedGraph, state: &RefState<'_>) -> Vec<DartId> {
    g.darts()
        .filter(|&d| {
            d != state.parametric
                && !state.red[g.tail(d).index()]
                && state.red[g.head(d).index()]
        })
        .collect()
}

/// The pivot threshold of an active dart: its slack plus the parameter,
/// which stays fixed while the tree does.
pub fn pivot_threshold(
    g: &EmbeddedGraph,
    costs: &CostTable,
    state: &RefState<'_>,
    d: DartId,
) -> CostVec {
    let mut k = state.base_dist[g.tail(d).index()]
        .try_add(costs.cost(d))
        .expect("uniform table");
    k.sub_assign(&state.base_dist[g.head(d).index()]);
    k
}

/// The Eisenstat-Klein style selector for planar instances: the first
/// minimum-original-slack active dart along the dual cotree path from `q`
/// to `r`. Must agree with the perturbed argmin.
pub fn leafmost_planar_pivot(
    g: &EmbeddedGraph,
    costs: &CostTable,
    state: &RefState<'_>,
    r: FaceId,
) -> Result<Option<DartId>, MsspError> {
    if g.genus() != 0 {
        return Err(MsspError::NotPlanar);
    }
    // The complement of the current tree is a dual spanning tree; orient it
    // toward r and walk from q = head face of the parametric dart.
    let mut in_tree = vec![false; g.num_edges()];
    for &pd in state.pred.iter().flatten() {
        in_tree[pd.edge().index()] = true;
    }
    let mut parent: Vec<Option<DartId>> = vec![None; g.num_faces()];
    let mut seen = vec![false; g.num_faces()];
    seen[r.index()] = true;
    let mut queue = std::collections::VecDeque::from([r]);
    while let Some(f) = queue.pop_front() {
        for &d in g.face(f) {
            if in_tree[d.edge().index()] {
                continue;
            }
            let p = g.tail_face(d);
            if !seen[p.index()] {
                seen[p.index()] = true;
                parent[p.index()] = Some(d);
                queue.push_back(p);
            }
        }
    }
    let q = g.head_face(state.parametric);
    let mut best: Option<(i64, DartId)> = None;
    let mut f = q;
    while let Some(d) = parent[f.index()] {
        // d runs f -> parent in the dual; its primal dart is a candidate.
        let active = !state.red[g.tail(d).index()] && state.red[g.head(d).index()]
            && d != state.parametric;
        if active {
            let k0 = pivot_threshold(g, costs, state, d).c0();
            if best.is_none_or(|(b, _)| k0 < b) {
                best = Some((k0, d));
            }
        }
        f = g.head_face(d);
    }
    Ok(best.map(|(_, d)| d))
}

/// Runs the reference engine, returning the pivot stream.
pub fn mssp_reference(
    g: &EmbeddedGraph,
    pipe: &Pipeline,
    r: FaceId,
) -> Result<Vec<PivotEvent>, MsspError> {
    run_reference(g, pipe, r, &mut crate::mssp::NullObserver, &mut |_, _| {})
}

/// Full-control entry point: observer hooks, per-pivot inspection, and
/// optional tree audits.
pub fn run_reference(
    g: &EmbeddedGraph,
    pipe: &Pipeline,
    r: FaceId,
    observer: &mut dyn MsspObserver,
    inspect: &mut dyn FnMut(&RefState<'_>, &PivotEvent),
) -> Result<Vec<PivotEvent>, MsspError> {
    let costs = &pipe.costs;
    let raw: Vec<i64> = g.darts().map(|d| costs.cost(d).c0()).collect();
    let initial_tree = |source: VertexId| -> Result<HolyTree, SsspError> {
        match costs.variant {
            Variant::Standard => holiest_sssp(g, costs, source),
            Variant::Modified => holiest_tree_small_int(g, &raw, costs, source),
        }
    };

    let moves = source_moves(g, r);
    let mut events = Vec::new();
    let Some(&(u1, _, _)) = moves.first() else {
        return Ok(events);
    };
    let mut tree = initial_tree(u1)?;
    let mut pred = tree.pred.clone();
    observer.on_start(&tree);

    for (i, &(u, v, boundary)) in moves.iter().enumerate() {
        let iteration = i + 1;
        let parametric = boundary.rev();
        if u == v {
            // A loop dart on the boundary: the tree is unchanged and no
            // dart is ever active.
            events.push(PivotEvent {
                iteration,
                kind: PivotKind::Special,
                dart_in: parametric,
                dart_out: None,
                lambda0: 0,
            });
            observer.on_special_pivot(iteration, boundary, 0);
            let slack0 = |d: DartId| {
                tree.dist[g.tail(d).index()].c0() + costs.cost(d).c0()
                    - tree.dist[g.head(d).index()].c0()
            };
            observer.on_iteration_end(iteration, &slack0);
            continue;
        }

        // Special pivot: reroot at v, give v -> u the parametric cost.
        let dist_uv = tree.dist[v.index()].clone();
        let d_out = pred[v.index()].expect("v is not the root");
        let mut lambda = dist_uv.negate();
        events.push(PivotEvent {
            iteration,
            kind: PivotKind::Special,
            dart_in: parametric,
            dart_out: Some(d_out),
            lambda0: lambda.c0(),
        });
        observer.on_special_pivot(iteration, boundary, dist_uv.c0());
        pred[v.index()] = None;
        pred[u.index()] = Some(parametric);

        loop {
            let (red, base) = recompute(g, costs, &pred, v, parametric);
            let state = RefState {
                parametric,
                root: v,
                pred: &pred,
                red: &red,
                base_dist: &base,
                lambda: &lambda,
            };
            let mut best: Option<(CostVec, DartId)> = None;
            let mut tie = false;
            for d in active_darts(g, &state) {
                let k = pivot_threshold(g, costs, &state, d);
                match &best {
                    Some((bk, bd)) if *bk == k && *bd != d => tie = true,
                    Some((bk, _)) if k < *bk => {
                        best = Some((k, d));
                        tie = false;
                    }
                    None => best = Some((k, d)),
                    _ => {}
                }
            }
            let limit = costs.cost(parametric);
            match best {
                Some((k, d_in)) if k < *limit => {
                    if tie {
                        return Err(MsspError::TieDetected);
                    }
                    emit_rounds(g, observer, &state, k.c0() - lambda.c0());
                    let head = g.head(d_in);
                    let d_out = pred[head.index()].expect("red vertices have predecessors");
                    debug_assert!(k > lambda, "parameter rises strictly");
                    let event = PivotEvent {
                        iteration,
                        kind: PivotKind::Regular,
                        dart_in: d_in,
                        dart_out: Some(d_out),
                        lambda0: k.c0(),
                    };
                    inspect(&state, &event);
                    observer.on_pivot(&event);
                    events.push(event);
                    pred[head.index()] = Some(d_in);
                    lambda = k;
                }
                _ => {
                    emit_rounds(g, observer, &state, limit.c0() - lambda.c0());
                    lambda = limit.clone();
                    break;
                }
            }
        }

        // The iteration is over; the parametric dart carries its true cost
        // again and the tree must be the holiest tree rooted at v.
        tree = initial_tree(v)?;
        let engine_set: Vec<DartId> = {
            let mut s: Vec<DartId> = pred.iter().flatten().copied().collect();
            s.sort();
            s
        };
        if engine_set != tree.dart_set() {
            return Err(MsspError::InternalInvariantViolation(format!(
                "tree after iteration {iteration} differs from the holiest tree at {v:?}"
            )));
        }
        pred.clone_from(&tree.pred);
        let slack0 = |d: DartId| {
            tree.dist[g.tail(d).index()].c0() + costs.cost(d).c0()
                - tree.dist[g.head(d).index()].c0()
        };
        observer.on_iteration_end(iteration, &slack0);
    }
    Ok(events)
}

fn emit_rounds(
    g: &EmbeddedGraph,
    observer: &mut dyn MsspObserver,
    state: &RefState<'_>,
    count: i64,
) {
    if count <= 0 {
        return;
    }
    let mut edges: Vec<crate::embedding::EdgeId> = active_darts(g, state)
        .into_iter()
        .map(|d| d.edge())
        .collect();
    if state.red.iter().any(|&r| r) {
        edges.push(state.parametric.edge());
    }
    for _ in 0..count {
        observer.on_round_completed(&mut edges.iter().copied());
    }
}

/// Rebuilds colors and parameter-free distances by tree traversal.
fn recompute(
    g: &EmbeddedGraph,
    costs: &CostTable,
    pred: &[Option<DartId>],
    root: VertexId,
    parametric: DartId,
) -> (Vec<bool>, Vec<CostVec>) {
    let n = g.num_vertices();
    let mut children: Vec<Vec<(usize, DartId)>> = vec![Vec::new(); n];
    for (v, pd) in pred.iter().enumerate() {
        if let Some(d) = pd {
            children[g.tail(*d).index()].push((v, *d));
        }
    }
    let mut red = vec![false; n];
    let mut base = vec![costs.zero_vec(); n];
    let mut stack = vec![root.index()];
    let mut seen = vec![false; n];
    seen[root.index()] = true;
    while let Some(v) = stack.pop() {
        for &(child, d) in &children[v] {
            if seen[child] {
                continue;
            }
            seen[child] = true;
            red[child] = red[v] || d == parametric;
            base[child] = if d == parametric {
                base[v].clone()
            } else {
                base[v].try_add(costs.cost(d)).expect("uniform table")
            };
            stack.push(child);
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "pred forms a spanning arborescence");
    (red, base)
}

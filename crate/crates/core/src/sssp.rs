//! Holiest single-source shortest path trees.
//!
//! Two engines: a priority-queue label-setting engine for the standard
//! variant (all perturbed costs are lexicographically non-negative), and a
//! two-phase engine for the modified variant with small non-negative integer
//! costs: an unperturbed bucket-queue pass followed by a relaxation in
//! topological order of the zero-slack dart set, which is acyclic whenever
//! every directed cycle has strictly positive cost.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::embedding::{DartId, EmbeddedGraph, VertexId};
use crate::perturb::{CostTable, CostVec, Variant};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SsspError {
    #[error("cost table variant does not match the engine")]
    VariantMismatch,
    #[error("dart {0} has negative unperturbed cost")]
    NegativeCostDart(usize),
    #[error("a zero-cost directed cycle exists; the modified variant requires strictly positive cycles")]
    ZeroCostCycleDetected,
    #[error("vertex {0} was not reached")]
    UnreachedVertex(usize),
}

/// A rooted holiest shortest-path tree: predecessor darts and full perturbed
/// distance vectors.
#[derive(Debug, Clone)]
pub struct HolyTree {
    pub root: VertexId,
    pub variant: Variant,
    pub pred: Vec<Option<DartId>>,
    pub dist: Vec<CostVec>,
}

impl HolyTree {
    /// Tree darts from the root to `v`, in path order.
    pub fn path_to_in(&self, g: &EmbeddedGraph, v: VertexId) -> Vec<DartId> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(d) = self.pred[cur.index()] {
            path.push(d);
            cur = g.tail(d);
        }
        path.reverse();
        path
    }

    /// The set of tree darts, sorted by id.
    pub fn dart_set(&self) -> Vec<DartId> {
        let mut darts: Vec<DartId> = self.pred.iter().flatten().copied().collect();
        darts.sort();
        darts
    }
}

/// Finds a directed cycle consisting entirely of zero-cost darts, if any.
pub fn find_zero_cost_cycle(g: &EmbeddedGraph, c: &[i64]) -> Option<Vec<DartId>> {
    let n = g.num_vertices();
    let mut out_deg = vec![0usize; n];
    for d in g.darts() {
        if c[d.index()] == 0 {
            out_deg[g.tail(d).index()] += 1;
        }
    }
    let mut removed = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| out_deg[v] == 0).collect();
    let mut alive = n;
    while let Some(v) = queue.pop() {
        removed[v] = true;
        alive -= 1;
        for &din in g.rotation(VertexId(v)) {
            let t = g.tail(din).index();
            if c[din.index()] == 0 && !removed[t] {
                out_deg[t] -= 1;
                if out_deg[t] == 0 {
                    queue.push(t);
                }
            }
        }
    }
    if alive == 0 {
        return None;
    }
    // Every surviving vertex keeps a zero-cost dart into a surviving head;
    // walk forward until a vertex repeats.
    let start = removed.iter().position(|&r| !r).expect("alive > 0");
    let mut seen_at = vec![usize::MAX; n];
    let mut walk: Vec<DartId> = Vec::new();
    let mut v = VertexId(start);
    loop {
        if seen_at[v.index()] != usize::MAX {
            return Some(walk.split_off(seen_at[v.index()]));
        }
        seen_at[v.index()] = walk.len();
        let d = g
            .out_darts(v)
            .find(|d| c[d.index()] == 0 && !removed[g.head(*d).index()])
            .expect("surviving vertices keep a zero-cost out-dart");
        walk.push(d);
        v = g.head(d);
    }
}

/// Label-setting shortest paths under standard-variant perturbed costs.
pub fn holiest_sssp(
    g: &EmbeddedGraph,
    costs: &CostTable,
    source: VertexId,
) -> Result<HolyTree, SsspError> {
    if costs.variant != Variant::Standard {
        return Err(SsspError::VariantMismatch);
    }
    for d in g.darts() {
        if costs.cost(d).c0() < 0 {
            return Err(SsspError::NegativeCostDart(d.index()));
        }
    }
    let n = g.num_vertices();
    let mut dist: Vec<Option<CostVec>> = vec![None; n];
    let mut pred: Vec<Option<DartId>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(CostVec, usize)>> = BinaryHeap::new();
    dist[source.index()] = Some(costs.zero_vec());
    heap.push(Reverse((costs.zero_vec(), source.index())));
    while let Some(Reverse((dv, v))) = heap.pop() {
        if settled[v] {
            continue;
        }
        settled[v] = true;
        for d in g.out_darts(VertexId(v)) {
            let u = g.head(d).index();
            if settled[u] {
                continue;
            }
            let cand = dv.try_add(costs.cost(d)).expect("uniform table");
            if dist[u].as_ref().is_none_or(|cur| cand < *cur) {
                dist[u] = Some(cand.clone());
                pred[u] = Some(d);
                heap.push(Reverse((cand, u)));
            }
        }
    }
    let dist = dist
        .into_iter()
        .enumerate()
        .map(|(v, d)| d.ok_or(SsspError::UnreachedVertex(v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HolyTree {
        root: source,
        variant: Variant::Standard,
        pred,
        dist,
    })
}

/// Unperturbed shortest-path distances by bucket-queue label setting.
/// Distances are bounded by the sum of the dart costs.
pub fn unperturbed_distances(g: &EmbeddedGraph, c: &[i64], source: VertexId) -> Vec<i64> {
    let n = g.num_vertices();
    let total: i64 = c.iter().sum();
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); total as usize + 1];
    let mut dist = vec![i64::MAX; n];
    let mut settled = vec![false; n];
    dist[source.index()] = 0;
    buckets[0].push(source.index() as u32);
    let mut remaining = n;
    let mut cur = 0usize;
    while remaining > 0 && cur < buckets.len() {
        while let Some(v) = buckets[cur].pop() {
            let v = v as usize;
            if settled[v] {
                continue;
            }
            settled[v] = true;
            remaining -= 1;
            for d in g.out_darts(VertexId(v)) {
                let u = g.head(d).index();
                let nd = dist[v] + c[d.index()];
                if nd < dist[u] {
                    dist[u] = nd;
                    buckets[nd as usize].push(u as u32);
                }
            }
        }
        cur += 1;
    }
    dist
}

/// Holiest tree for the modified variant with small non-negative integer
/// costs: an unperturbed pass restricts attention to the zero-slack darts,
/// an acyclic set whenever directed cycles have strictly positive cost, and
/// a relaxation in topological order settles the perturbed order.
pub fn holiest_tree_small_int(
    g: &EmbeddedGraph,
    c: &[i64],
    costs: &CostTable,
    source: VertexId,
) -> Result<HolyTree, SsspError> {
    if costs.variant != Variant::Modified {
        return Err(SsspError::VariantMismatch);
    }
    for d in g.darts() {
        if c[d.index()] < 0 {
            return Err(SsspError::NegativeCostDart(d.index()));
        }
    }
    if find_zero_cost_cycle(g, c).is_some() {
        return Err(SsspError::ZeroCostCycleDetected);
    }
    let n = g.num_vertices();
    let dist0 = unperturbed_distances(g, c, source);
    debug_assert!(dist0.iter().all(|&d| d < i64::MAX), "connected graph");

    let in_h = |d: DartId| dist0[g.tail(d).index()] + c[d.index()] == dist0[g.head(d).index()];

    // Kahn order over the zero-slack darts.
    let mut in_deg = vec![0usize; n];
    for d in g.darts() {
        if in_h(d) {
            in_deg[g.head(d).index()] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut queue: Vec<usize> = (0..n).filter(|&v| in_deg[v] == 0).collect();
    while let Some(v) = queue.pop() {
        order.push(v);
        for d in g.out_darts(VertexId(v)) {
            if in_h(d) {
                let u = g.head(d).index();
                in_deg[u] -= 1;
                if in_deg[u] == 0 {
                    queue.push(u);
                }
            }
        }
    }
    assert_eq!(order.len(), n, "zero-slack darts are acyclic");

    let mut dist: Vec<Option<CostVec>> = vec![None; n];
    let mut pred: Vec<Option<DartId>> = vec![None; n];
    dist[source.index()] = Some(costs.zero_vec());
    for &v in &order {
        let Some(dv) = dist[v].clone() else {
            continue;
        };
        for d in g.out_darts(VertexId(v)) {
            if !in_h(d) {
                continue;
            }
            let u = g.head(d).index();
            let cand = dv.try_add(costs.cost(d)).expect("uniform table");
            if dist[u].as_ref().is_none_or(|cur| cand < *cur) {
                dist[u] = Some(cand);
                pred[u] = Some(d);
            }
        }
    }
    let dist = dist
        .into_iter()
        .enumerate()
        .map(|(v, d)| d.ok_or(SsspError::UnreachedVertex(v)))
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert!(dist
        .iter()
        .enumerate()
        .all(|(v, dv)| dv.c0() == dist0[v]));
    Ok(HolyTree {
        root: source,
        variant: Variant::Modified,
        pred,
        dist,
    })
}

/// Slack of a dart with respect to a tree: `dist(tail) + c'(d) - dist(head)`.
/// Zero exactly on tree darts; lexicographically positive elsewhere.
pub fn slack(
    g: &EmbeddedGraph,
    costs: &CostTable,
    tree: &HolyTree,
    d: DartId,
) -> Result<CostVec, SsspError> {
    let t = tree
        .dist
        .get(g.tail(d).index())
        .ok_or(SsspError::UnreachedVertex(g.tail(d).index()))?;
    let h = tree
        .dist
        .get(g.head(d).index())
        .ok_or(SsspError::UnreachedVertex(g.head(d).index()))?;
    let mut s = t.try_add(costs.cost(d)).expect("uniform table");
    s.sub_assign(h);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology_signatures, tree_cotree};
    use crate::oracles::{brute_sssp, bouquet, planar_grid, torus_grid, unit_costs};
    use crate::perturb::{cotree_drainage, perturb_costs};
    use crate::FaceId;

    fn setup(g: &EmbeddedGraph, c: &[i64], variant: Variant) -> CostTable {
        let tc = tree_cotree(g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(g, &tc);
        let dr = cotree_drainage(g, &tc);
        perturb_costs(g, c, &sigs, &dr, variant)
    }

    fn four_cycle() -> EmbeddedGraph {
        let mut rotations = vec![Vec::new(); 4];
        for i in 0..4usize {
            rotations[(i + 1) % 4].push(DartId(2 * i));
            rotations[i].push(DartId(2 * i + 1));
        }
        EmbeddedGraph::new(4, 4, rotations).unwrap()
    }

    #[test]
    fn single_vertex_trivial_tree() {
        let g = EmbeddedGraph::new(1, 0, vec![vec![]]).unwrap();
        let table = setup(&g, &[], Variant::Standard);
        let tree = holiest_sssp(&g, &table, VertexId(0)).unwrap();
        assert!(tree.pred[0].is_none());
        assert!(tree.dist[0].is_zero());
    }

    #[test]
    fn parallel_edges_break_ties_deterministically() {
        // Two vertices joined by two parallel edges of equal cost; exactly
        // one is chosen on every run and after rotating the rotation lists.
        let rot_a = vec![vec![DartId(1), DartId(3)], vec![DartId(0), DartId(2)]];
        let rot_b = vec![vec![DartId(3), DartId(1)], vec![DartId(2), DartId(0)]];
        let ga = EmbeddedGraph::new(2, 2, rot_a).unwrap();
        let gb = EmbeddedGraph::new(2, 2, rot_b).unwrap();
        let c = vec![1i64; 4];
        let ta = setup(&ga, &c, Variant::Standard);
        let tb = setup(&gb, &c, Variant::Standard);
        let tree_a = holiest_sssp(&ga, &ta, VertexId(0)).unwrap();
        let tree_b = holiest_sssp(&gb, &tb, VertexId(0)).unwrap();
        assert_eq!(tree_a.dart_set(), tree_b.dart_set());
        // Matches Bellman-Ford over the same vectors.
        let brute = brute_sssp(&ga, &ta, VertexId(0)).unwrap();
        assert_eq!(brute[1].as_ref().unwrap(), &tree_a.dist[1]);
    }

    #[test]
    fn four_cycle_matches_brute_force() {
        let g = four_cycle();
        let c = vec![1i64; 8];
        let table = setup(&g, &c, Variant::Standard);
        let tree = holiest_sssp(&g, &table, VertexId(0)).unwrap();
        let brute = brute_sssp(&g, &table, VertexId(0)).unwrap();
        for v in g.vertices() {
            assert_eq!(brute[v.index()].as_ref().unwrap(), &tree.dist[v.index()]);
        }
        // The antipodal tie is broken: the tree path is one of the two
        // length-2 paths and its perturbed cost is the Bellman-Ford optimum.
        let path = tree.path_to_in(&g, VertexId(2));
        assert_eq!(path.len(), 2);
    }

    #[test]
    fn small_int_engine_on_path_graph_is_bfs() {
        let g = planar_grid(5, 1);
        let c = unit_costs(&g);
        let table = setup(&g, &c, Variant::Modified);
        let tree = holiest_tree_small_int(&g, &c, &table, VertexId(0)).unwrap();
        for v in g.vertices() {
            assert_eq!(tree.dist[v.index()].c0(), v.index() as i64);
        }
    }

    #[test]
    fn small_int_engine_on_bouquet_is_trivial() {
        let g = bouquet(1);
        let c = unit_costs(&g);
        let table = setup(&g, &c, Variant::Modified);
        let tree = holiest_tree_small_int(&g, &c, &table, VertexId(0)).unwrap();
        assert!(tree.pred[0].is_none());
    }

    #[test]
    fn small_int_engine_matches_brute_force_on_torus() {
        let g = torus_grid(3, 3);
        let c = unit_costs(&g);
        let table = setup(&g, &c, Variant::Modified);
        for s in 0..g.num_vertices() {
            let tree = holiest_tree_small_int(&g, &c, &table, VertexId(s)).unwrap();
            let brute = brute_sssp(&g, &table, VertexId(s)).unwrap();
            for v in g.vertices() {
                assert_eq!(
                    brute[v.index()].as_ref().unwrap(),
                    &tree.dist[v.index()],
                    "source {s}, vertex {v:?}"
                );
            }
        }
    }

    #[test]
    fn zero_cost_cycle_is_rejected() {
        let g = torus_grid(2, 2);
        let c = vec![0i64; g.num_darts()];
        let table = setup(&g, &c, Variant::Modified);
        assert_eq!(
            holiest_tree_small_int(&g, &c, &table, VertexId(0)).unwrap_err(),
            SsspError::ZeroCostCycleDetected
        );
    }

    #[test]
    fn variant_mismatch_is_rejected() {
        let g = four_cycle();
        let c = vec![1i64; 8];
        let std_table = setup(&g, &c, Variant::Standard);
        let mod_table = setup(&g, &c, Variant::Modified);
        assert_eq!(
            holiest_sssp(&g, &mod_table, VertexId(0)).unwrap_err(),
            SsspError::VariantMismatch
        );
        assert_eq!(
            holiest_tree_small_int(&g, &c, &std_table, VertexId(0)).unwrap_err(),
            SsspError::VariantMismatch
        );
    }

    #[test]
    fn slack_properties() {
        let g = four_cycle();
        let c = vec![1i64; 8];
        let table = setup(&g, &c, Variant::Standard);
        let tree = holiest_sssp(&g, &table, VertexId(0)).unwrap();
        for d in g.darts() {
            let s = slack(&g, &table, &tree, d).unwrap();
            if tree.pred[g.head(d).index()] == Some(d) {
                assert!(s.is_zero(), "tree dart {d:?}");
            } else {
                assert!(s.is_positive(), "non-tree dart {d:?} slack {s:?}");
            }
        }
        // Homology and face parts of slack(rev(tree dart)) vanish.
        for v in g.vertices() {
            if let Some(d) = tree.pred[v.index()] {
                let s = slack(&g, &table, &tree, d.rev()).unwrap();
                assert!(s.hom().iter().all(|&x| x == 0));
                assert_eq!(s.z_part(), 0);
            }
        }
    }

    #[test]
    fn negative_cost_dart_rejected() {
        let g = four_cycle();
        let mut c = vec![1i64; 8];
        c[3] = -2;
        let table = setup(&g, &c, Variant::Standard);
        assert!(matches!(
            holiest_sssp(&g, &table, VertexId(0)).unwrap_err(),
            SsspError::NegativeCostDart(3)
        ));
    }
}

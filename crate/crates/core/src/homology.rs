//! Tree-cotree decompositions and integer homology signatures.
//!
//! A tree-cotree decomposition partitions the edge set into a primal
//! spanning tree `T`, a dual spanning tree `C` (the cotree), and `2g`
//! leftover edges `L`. Each leftover edge closes one dual fundamental cycle
//! with the cotree; signatures record, per edge, which of those cycles it
//! lies on and with which orientation. Summing dart signatures along a
//! closed walk classifies its homology class over the integers.

use std::collections::VecDeque;

use thiserror::Error;

use crate::embedding::{DartId, EdgeId, EmbeddedGraph, FaceId, VertexId};

#[derive(Debug, Clone)]
pub struct TreeCotree {
    pub root_vertex: VertexId,
    pub root_face: FaceId,
    /// `true` for edges of the primal spanning tree.
    pub in_tree: Vec<bool>,
    /// `true` for edges of the dual spanning tree.
    pub in_cotree: Vec<bool>,
    /// The 2g leftover edges in increasing index order.
    pub leftover: Vec<EdgeId>,
    /// Per vertex, the tree dart into it from its parent (root: None).
    pub parent_dart: Vec<Option<DartId>>,
    /// Per face, the dual dart out of it toward its cotree parent (root: None).
    pub succ_dart: Vec<Option<DartId>>,
    /// Cotree depth per face.
    pub cotree_depth: Vec<u32>,
}

impl TreeCotree {
    pub fn tree_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_tree
            .iter()
            .enumerate()
            .filter_map(|(i, &t)| t.then_some(EdgeId(i)))
    }

    pub fn cotree_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_cotree
            .iter()
            .enumerate()
            .filter_map(|(i, &t)| t.then_some(EdgeId(i)))
    }
}

/// Computes a tree-cotree decomposition: a BFS spanning tree from
/// `root_vertex`, a BFS dual spanning tree of the remaining edges rooted at
/// `root_face`, and the leftover edges in index order.
pub fn tree_cotree(g: &EmbeddedGraph, root_vertex: VertexId, root_face: FaceId) -> TreeCotree {
    let mut in_tree = vec![false; g.num_edges()];
    let mut parent_dart = vec![None; g.num_vertices()];
    let mut seen = vec![false; g.num_vertices()];
    seen[root_vertex.index()] = true;
    let mut queue = VecDeque::new();
    queue.push_back(root_vertex);
    while let Some(v) = queue.pop_front() {
        for d in g.out_darts(v) {
            let u = g.head(d);
            if !seen[u.index()] {
                seen[u.index()] = true;
                in_tree[d.edge().index()] = true;
                parent_dart[u.index()] = Some(d);
                queue.push_back(u);
            }
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "graph is connected by construction");

    let mut in_cotree = vec![false; g.num_edges()];
    let mut succ_dart = vec![None; g.num_faces()];
    let mut cotree_depth = vec![0u32; g.num_faces()];
    let mut fseen = vec![false; g.num_faces()];
    fseen[root_face.index()] = true;
    let mut fqueue = VecDeque::new();
    fqueue.push_back(root_face);
    while let Some(f) = fqueue.pop_front() {
        // Incoming dual darts at f are exactly the darts of f's orbit.
        for &d in g.face(f) {
            if in_tree[d.edge().index()] {
                continue;
            }
            let p = g.tail_face(d);
            if !fseen[p.index()] {
                fseen[p.index()] = true;
                in_cotree[d.edge().index()] = true;
                // d runs p -> f in the dual, so it is p's dart toward its parent.
                succ_dart[p.index()] = Some(d);
                cotree_depth[p.index()] = cotree_depth[f.index()] + 1;
                fqueue.push_back(p);
            }
        }
    }
    debug_assert!(fseen.iter().all(|&s| s), "cotree spans the dual");

    let leftover = (0..g.num_edges())
        .map(EdgeId)
        .filter(|e| !in_tree[e.index()] && !in_cotree[e.index()])
        .collect();

    TreeCotree {
        root_vertex,
        root_face,
        in_tree,
        in_cotree,
        leftover,
        parent_dart,
        succ_dart,
        cotree_depth,
    }
}

/// Per-edge homology signatures: length-2g vectors with entries in
/// {-1, 0, +1}. Component `i` reflects membership in the dual fundamental
/// cycle of the i-th leftover edge, oriented along that edge's canonical
/// dart.
#[derive(Debug, Clone)]
pub struct HomologyTable {
    pub two_g: usize,
    sig: Vec<Vec<i32>>,
}

impl HomologyTable {
    /// Signature of an edge (equals the signature of its canonical dart).
    pub fn edge(&self, e: EdgeId) -> &[i32] {
        &self.sig[e.index()]
    }

    /// Signature of a dart: the edge signature, negated for the non-canonical dart.
    pub fn dart(&self, d: DartId) -> Vec<i32> {
        let s = &self.sig[d.edge().index()];
        if d.is_canonical() {
            s.clone()
        } else {
            s.iter().map(|&x| -x).collect()
        }
    }

    /// Adds the signature of `d` into `acc`.
    pub fn accumulate(&self, acc: &mut [i32], d: DartId, times: i32) {
        let s = &self.sig[d.edge().index()];
        let sign = if d.is_canonical() { times } else { -times };
        for (a, &x) in acc.iter_mut().zip(s.iter()) {
            *a += sign * x;
        }
    }
}

/// Computes homology signatures by walking the 2g dual fundamental cycles of
/// the leftover edges with the cotree. O(gn) total.
pub fn homology_signatures(g: &EmbeddedGraph, tc: &TreeCotree) -> HomologyTable {
    let two_g = tc.leftover.len();
    debug_assert_eq!(two_g, 2 * g.genus());
    let mut sig = vec![vec![0i32; two_g]; g.num_edges()];
    for (i, &e) in tc.leftover.iter().enumerate() {
        for d in dual_fundamental_cycle(g, tc, e) {
            let s = if d.is_canonical() { 1 } else { -1 };
            sig[d.edge().index()][i] = s;
        }
    }
    HomologyTable { two_g, sig }
}

/// The dual fundamental cycle of leftover edge `e` with the cotree, oriented
/// along `e`'s canonical dart. Returned as a dart sequence.
fn dual_fundamental_cycle(g: &EmbeddedGraph, tc: &TreeCotree, e: EdgeId) -> Vec<DartId> {
    let d = e.canonical();
    // The dual dart of d runs tail_face(d) -> head_face(d); close the cycle
    // with the cotree path from head_face(d) back to tail_face(d).
    let mut cycle = vec![d];
    let mut up = g.head_face(d);
    let mut down = g.tail_face(d);
    let mut up_part = Vec::new();
    let mut down_part = Vec::new();
    while tc.cotree_depth[up.index()] > tc.cotree_depth[down.index()] {
        let s = tc.succ_dart[up.index()].expect("non-root face has a successor");
        up_part.push(s);
        up = g.head_face(s);
    }
    while tc.cotree_depth[down.index()] > tc.cotree_depth[up.index()] {
        let s = tc.succ_dart[down.index()].expect("non-root face has a successor");
        down_part.push(s);
        down = g.head_face(s);
    }
    while up != down {
        let su = tc.succ_dart[up.index()].expect("distinct faces below the root");
        up_part.push(su);
        up = g.head_face(su);
        let sd = tc.succ_dart[down.index()].expect("distinct faces below the root");
        down_part.push(sd);
        down = g.head_face(sd);
    }
    cycle.extend(up_part);
    cycle.extend(down_part.into_iter().rev().map(DartId::rev));
    cycle
}

/// Componentwise sum of dart signatures along a walk.
pub fn walk_signature(sigs: &HomologyTable, walk: &[DartId]) -> Vec<i32> {
    let mut acc = vec![0i32; sigs.two_g];
    for &d in walk {
        sigs.accumulate(&mut acc, d, 1);
    }
    acc
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CirculationError {
    #[error("dart multiset is not a circulation: vertex {0} has imbalance {1}")]
    NotACirculation(usize, i64),
}

/// Net flow into each vertex for a dart multiset with integer multiplicities.
pub fn imbalance(g: &EmbeddedGraph, flow: &[(DartId, i64)]) -> Vec<i64> {
    let mut imb = vec![0i64; g.num_vertices()];
    for &(d, k) in flow {
        imb[g.head(d).index()] += k;
        imb[g.tail(d).index()] -= k;
    }
    imb
}

/// Net dual flow into each face, for an antisymmetric per-edge value `z`
/// carried on the canonical dual dart.
pub fn dual_imbalance(g: &EmbeddedGraph, z: &[i64]) -> Vec<i64> {
    let mut imb = vec![0i64; g.num_faces()];
    for e in g.edges() {
        let d = e.canonical();
        imb[g.head_face(d).index()] += z[e.index()];
        imb[g.head_face(d.rev()).index()] -= z[e.index()];
    }
    imb
}

/// True iff the circulation is the boundary of a potential function, i.e.
/// its homology signature vanishes. Errs if the input is not a circulation.
pub fn is_boundary_class(
    g: &EmbeddedGraph,
    sigs: &HomologyTable,
    circulation: &[(DartId, i64)],
) -> Result<bool, CirculationError> {
    let imb = imbalance(g, circulation);
    if let Some((v, &x)) = imb.iter().enumerate().find(|(_, &x)| x != 0) {
        return Err(CirculationError::NotACirculation(v, x));
    }
    let mut acc = vec![0i32; sigs.two_g];
    for &(d, k) in circulation {
        sigs.accumulate(&mut acc, d, i32::try_from(k).expect("small multiplicity"));
    }
    Ok(acc.iter().all(|&x| x == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{bouquet, torus_grid};

    fn four_cycle() -> EmbeddedGraph {
        let mut rotations = vec![Vec::new(); 4];
        for i in 0..4usize {
            rotations[(i + 1) % 4].push(DartId(2 * i));
            rotations[i].push(DartId(2 * i + 1));
        }
        EmbeddedGraph::new(4, 4, rotations).unwrap()
    }

    #[test]
    fn four_cycle_partition_sizes() {
        let g = four_cycle();
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        assert_eq!(tc.tree_edges().count(), 3);
        assert_eq!(tc.cotree_edges().count(), 1);
        assert!(tc.leftover.is_empty());
    }

    #[test]
    fn bouquet_partition_sizes() {
        let g = bouquet(1);
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        assert_eq!(tc.tree_edges().count(), 0);
        assert_eq!(tc.cotree_edges().count(), 0);
        assert_eq!(tc.leftover, vec![EdgeId(0), EdgeId(1)]);
    }

    #[test]
    fn torus_grid_partition_sizes() {
        let g = torus_grid(3, 3);
        assert_eq!(g.genus(), 1);
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        assert_eq!(tc.tree_edges().count(), 8);
        assert_eq!(tc.cotree_edges().count(), 8);
        assert_eq!(tc.leftover.len(), 2);
    }

    #[test]
    fn planar_signatures_are_empty() {
        let g = four_cycle();
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(&g, &tc);
        assert_eq!(sigs.two_g, 0);
        for e in g.edges() {
            assert!(sigs.edge(e).is_empty());
        }
    }

    #[test]
    fn bouquet_signatures_are_unit_vectors() {
        let g = bouquet(1);
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(&g, &tc);
        assert_eq!(sigs.edge(EdgeId(0)), &[1, 0]);
        assert_eq!(sigs.edge(EdgeId(1)), &[0, 1]);
    }

    #[test]
    fn tree_edges_have_zero_signature_and_leftovers_are_units() {
        let g = torus_grid(3, 3);
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(&g, &tc);
        for e in tc.tree_edges() {
            assert!(sigs.edge(e).iter().all(|&x| x == 0), "edge {e:?}");
        }
        for (i, &e) in tc.leftover.iter().enumerate() {
            let s = sigs.edge(e);
            assert_eq!(s[i], 1);
            assert!(s.iter().enumerate().all(|(j, &x)| j == i || x == 0));
        }
    }

    #[test]
    fn facial_walks_have_zero_signature() {
        for g in [torus_grid(3, 3), bouquet(2)] {
            let tc = tree_cotree(&g, VertexId(0), FaceId(0));
            let sigs = homology_signatures(&g, &tc);
            for f in g.faces() {
                let s = walk_signature(&sigs, f);
                assert!(s.iter().all(|&x| x == 0), "face walk {f:?} -> {s:?}");
            }
        }
    }

    #[test]
    fn signature_additivity() {
        let g = torus_grid(3, 3);
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(&g, &tc);
        let w1: Vec<DartId> = g.face(FaceId(0)).to_vec();
        let w2 = vec![DartId(0), DartId(3), DartId(5)];
        let mut concat = w1.clone();
        concat.extend(&w2);
        let lhs = walk_signature(&sigs, &concat);
        let s1 = walk_signature(&sigs, &w1);
        let s2 = walk_signature(&sigs, &w2);
        let rhs: Vec<i32> = s1.iter().zip(&s2).map(|(a, b)| a + b).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_class_checks() {
        let g = bouquet(1);
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(&g, &tc);
        // A facial walk is a boundary.
        let facial: Vec<(DartId, i64)> = g.face(FaceId(0)).iter().map(|&d| (d, 1)).collect();
        assert!(is_boundary_class(&g, &sigs, &facial).unwrap());
        // Loop a alone is a circulation with non-trivial homology.
        assert!(!is_boundary_class(&g, &sigs, &[(DartId(0), 1)]).unwrap());
        // a followed by rev(a) cancels.
        assert!(is_boundary_class(&g, &sigs, &[(DartId(0), 1), (DartId(1), 1)]).unwrap());
    }

    #[test]
    fn non_circulation_is_rejected() {
        let g = four_cycle();
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(&g, &tc);
        let err = is_boundary_class(&g, &sigs, &[(DartId(0), 1)]).unwrap_err();
        assert!(matches!(err, CirculationError::NotACirculation(_, _)));
    }

    #[test]
    fn empty_walk_has_zero_signature() {
        let g = bouquet(2);
        let tc = tree_cotree(&g, VertexId(0), FaceId(0));
        let sigs = homology_signatures(&g, &tc);
        assert_eq!(walk_signature(&sigs, &[]), vec![0; 4]);
    }
}

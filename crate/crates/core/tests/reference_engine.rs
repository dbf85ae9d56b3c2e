//! Fuzz validation of the reference MSSP engine: the engine's internal
//! per-iteration tree audit, tie-freeness, the planar leafmost rule, and the
//! distance stream against per-pair recomputation.

use surface_mssp::distances::{mssp_distances, EngineKind, MonotoneCorrespondence, Walk};
use surface_mssp::mssp::reference::{
    active_darts, leafmost_planar_pivot, mssp_reference, pivot_threshold, run_reference,
};
use surface_mssp::mssp::{pipeline, NullObserver, PivotKind};
use surface_mssp::oracles::{fuzz_instance, fuzz_planar_instance, unit_costs};
use surface_mssp::sssp::unperturbed_distances;
use surface_mssp::{DartId, Variant, VertexId};

#[test]
fn fuzz_reference_engine_small_instances() {
    for seed in 0..250 {
        let (g, c, r) = fuzz_instance(seed, 10, 3, 4);
        let pipe = pipeline(&g, &c, r, Variant::Modified);
        mssp_reference(&g, &pipe, r).unwrap_or_else(|e| {
            panic!("seed {seed}: n={} g={} r={r:?}: {e}", g.num_vertices(), g.genus())
        });
    }
}

#[test]
fn fuzz_reference_engine_standard_variant() {
    for seed in 0..100 {
        let (g, c, r) = fuzz_instance(seed + 10_000, 9, 2, 4);
        let pipe = pipeline(&g, &c, r, Variant::Standard);
        mssp_reference(&g, &pipe, r).unwrap_or_else(|e| {
            panic!("seed {seed}: n={} g={}: {e}", g.num_vertices(), g.genus())
        });
    }
}

#[test]
fn planar_leafmost_rule_matches_perturbed_argmin() {
    let mut pivots_checked = 0usize;
    for seed in 0..120 {
        let (g, c, r) = fuzz_planar_instance(seed, 12, 4);
        let pipe = pipeline(&g, &c, r, Variant::Modified);
        let mut checked = 0usize;
        run_reference(&g, &pipe, r, &mut NullObserver, &mut |state, event| {
            if event.kind != PivotKind::Regular {
                return;
            }
            let leafmost = leafmost_planar_pivot(&g, &pipe.costs, state, r)
                .expect("planar instance")
                .expect("a pivot is available when one fires");
            assert_eq!(
                leafmost, event.dart_in,
                "seed {seed}: leafmost selector disagrees with the perturbed argmin"
            );
            checked += 1;
        })
        .unwrap();
        pivots_checked += checked;
    }
    assert!(pivots_checked > 50, "exercised {pivots_checked} pivots");
}

#[test]
fn planar_active_darts_form_the_cotree_path() {
    // On planar instances the active darts are exactly the q-to-r path in
    // the dual tree complementary to the current shortest-path tree.
    for seed in 0..60 {
        let (g, c, r) = fuzz_planar_instance(seed + 777, 10, 3);
        let pipe = pipeline(&g, &c, r, Variant::Modified);
        run_reference(&g, &pipe, r, &mut NullObserver, &mut |state, _| {
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
            let mut path = Vec::new();
            let mut f = g.head_face(state.parametric);
            while let Some(d) = parent[f.index()] {
                path.push(d);
                f = g.head_face(d);
            }
            let mut expected = active_darts(&g, state);
            expected.sort();
            let mut path_sorted = path.clone();
            path_sorted.sort();
            assert_eq!(path_sorted, expected, "seed {seed}");
        })
        .unwrap();
    }
}

#[test]
fn thresholds_strictly_order_active_darts() {
    // Distinct active darts never share a pivot threshold (tie-freeness).
    for seed in 0..60 {
        let (g, c, r) = fuzz_instance(seed + 5_000, 9, 3, 3);
        let pipe = pipeline(&g, &c, r, Variant::Modified);
        run_reference(&g, &pipe, r, &mut NullObserver, &mut |state, _| {
            let darts = active_darts(&g, state);
            for (i, &a) in darts.iter().enumerate() {
                for &b in &darts[i + 1..] {
                    let ka = pivot_threshold(&g, &pipe.costs, state, a);
                    let kb = pivot_threshold(&g, &pipe.costs, state, b);
                    assert_ne!(ka, kb, "seed {seed}: darts {a:?} and {b:?} tie");
                }
            }
        })
        .unwrap();
    }
}

#[test]
fn distances_match_per_pair_recomputation() {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    for seed in 0..80 {
        let (g, c, r) = fuzz_instance(seed + 42_000, 12, 3, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut darts = Vec::new();
        let start = VertexId(rng.gen_range(0..g.num_vertices()));
        let mut at = start;
        for _ in 0..rng.gen_range(0..2 * g.num_vertices()) {
            let outs: Vec<DartId> = g.out_darts(at).collect();
            let Some(&d) = outs.choose(&mut rng) else {
                break;
            };
            darts.push(d);
            at = g.head(d);
        }
        let walk = Walk { start, darts };
        let k1 = g.face(r).len();
        let k2 = walk.num_vertices();
        let mut pairs = Vec::new();
        let (mut i, mut j) = (1usize, 1usize);
        loop {
            pairs.push((i, j));
            if pairs.len() >= 4 * g.num_vertices() || (i == k1 && j == k2) {
                break;
            }
            if i < k1 && (j == k2 || rng.gen_bool(0.5)) {
                i += 1;
            } else {
                j += 1;
            }
        }
        let corr = MonotoneCorrespondence::new(pairs).unwrap();
        let out = mssp_distances(&g, &c, r, &walk, &corr, EngineKind::Reference).unwrap();
        let sources: Vec<VertexId> = g.face(r).iter().map(|&d| g.tail(d)).collect();
        let mut walk_vertices = vec![walk.start];
        for &d in &walk.darts {
            walk_vertices.push(g.head(d));
        }
        let mut memo: std::collections::HashMap<usize, Vec<i64>> = Default::default();
        for (i, j, dist) in out {
            let s = sources[i - 1];
            let d = memo
                .entry(s.index())
                .or_insert_with(|| unperturbed_distances(&g, &c, s));
            assert_eq!(
                dist,
                d[walk_vertices[j - 1].index()],
                "seed {seed} pair ({i},{j}) source {s:?}"
            );
        }
    }
}

#[test]
fn pivot_counts_scale_linearly_on_torus_grids() {
    let mut counts = Vec::new();
    for w in [3usize, 6, 12] {
        let g = surface_mssp::oracles::torus_grid(w, 3);
        let c = unit_costs(&g);
        let r = surface_mssp::FaceId(0);
        let pipe = pipeline(&g, &c, r, Variant::Modified);
        let events = mssp_reference(&g, &pipe, r).unwrap();
        let regular = events.iter().filter(|e| e.kind == PivotKind::Regular).count();
        let n = g.num_vertices();
        assert!(
            regular <= 16 * (g.genus() + 1) * n,
            "{regular} pivots on {n} vertices"
        );
        counts.push(regular as f64);
    }
    assert!(counts[1] <= 2.5 * counts[0] && counts[2] <= 2.5 * counts[1]);
}

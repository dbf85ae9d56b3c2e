//! Instance generators and brute-force ground truth.
//!
//! Everything here trades speed for obviousness: Bellman-Ford over exact
//! cost vectors, exhaustive path and flow enumeration on tiny instances, and
//! seeded deterministic generators for the fuzz campaigns.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::embedding::{DartId, EdgeId, EmbeddedGraph, VertexId};
use crate::perturb::{CostTable, CostVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive enumeration")]
    TooLarge,
    #[error("lexicographically negative cycle reachable from the source")]
    NegativeCycle,
    #[error("no feasible flow exists")]
    Infeasible,
    #[error("bad generator parameters: {0}")]
    BadParameters(&'static str),
}

/// Bellman-Ford over perturbed cost vectors. The ground truth for both
/// shortest-path engines.
pub fn brute_sssp(
    g: &EmbeddedGraph,
    costs: &CostTable,
    source: VertexId,
) -> Result<Vec<Option<CostVec>>, OracleError> {
    let mut dist: Vec<Option<CostVec>> = vec![None; g.num_vertices()];
    dist[source.index()] = Some(costs.zero_vec());
    for round in 0..g.num_vertices() {
        let mut changed = false;
        for d in g.darts() {
            let (t, h) = (g.tail(d), g.head(d));
            let Some(dt) = dist[t.index()].clone() else {
                continue;
            };
            let cand = dt.try_add(costs.cost(d)).expect("uniform table");
            if dist[h.index()].as_ref().is_none_or(|cur| cand < *cur) {
                dist[h.index()] = Some(cand);
                changed = true;
            }
        }
        if !changed {
            return Ok(dist);
        }
        if round == g.num_vertices() - 1 {
            return Err(OracleError::NegativeCycle);
        }
    }
    Ok(dist)
}

/// All simple `s`,`t`-paths of minimum unperturbed cost, by exhaustive DFS.
/// Rejects instances with more than `max_vertices` vertices.
pub fn enumerate_min_paths(
    g: &EmbeddedGraph,
    c: &[i64],
    s: VertexId,
    t: VertexId,
    max_vertices: usize,
) -> Result<Vec<Vec<DartId>>, OracleError> {
    if g.num_vertices() > max_vertices {
        return Err(OracleError::TooLarge);
    }
    let mut best: Option<i64> = None;
    let mut paths: Vec<Vec<DartId>> = Vec::new();
    let mut on_path = vec![false; g.num_vertices()];
    let mut stack: Vec<DartId> = Vec::new();

    fn dfs(
        g: &EmbeddedGraph,
        c: &[i64],
        v: VertexId,
        t: VertexId,
        cost: i64,
        on_path: &mut Vec<bool>,
        stack: &mut Vec<DartId>,
        best: &mut Option<i64>,
        paths: &mut Vec<Vec<DartId>>,
    ) {
        if v == t {
            match *best {
                Some(b) if cost > b => {}
                Some(b) if cost == b => paths.push(stack.clone()),
                _ => {
                    *best = Some(cost);
                    paths.clear();
                    paths.push(stack.clone());
                }
            }
            return;
        }
        on_path[v.index()] = true;
        for d in g.out_darts(v) {
            let u = g.head(d);
            if on_path[u.index()] {
                continue;
            }
            stack.push(d);
            dfs(g, c, u, t, cost + c[d.index()], on_path, stack, best, paths);
            stack.pop();
        }
        on_path[v.index()] = false;
    }

    dfs(g, c, s, t, 0, &mut on_path, &mut stack, &mut best, &mut paths);
    Ok(paths)
}

/// All integral feasible flows of minimum unperturbed cost, by pruned
/// exhaustive search over dart values in `[0, capacity]`.
///
/// `demands[v]` is the required imbalance at `v`; `capacities` and `costs`
/// are per dart. Instances are restricted to at most `max_edges` edges.
pub fn enumerate_min_flows(
    g: &EmbeddedGraph,
    c: &[i64],
    capacities: &[i64],
    demands: &[i64],
    max_edges: usize,
) -> Result<Vec<Vec<i64>>, OracleError> {
    if g.num_edges() > max_edges {
        return Err(OracleError::TooLarge);
    }
    if demands.iter().sum::<i64>() != 0 {
        return Err(OracleError::Infeasible);
    }
    let nd = g.num_darts();
    // Remaining in/out capacity per vertex over unassigned darts; used to
    // prune branches whose imbalance can no longer meet the demand.
    let mut in_slack = vec![0i64; g.num_vertices()];
    let mut out_slack = vec![0i64; g.num_vertices()];
    for d in g.darts() {
        in_slack[g.head(d).index()] += capacities[d.index()];
        out_slack[g.tail(d).index()] += capacities[d.index()];
    }

    struct Search<'a> {
        g: &'a EmbeddedGraph,
        c: &'a [i64],
        capacities: &'a [i64],
        demands: &'a [i64],
        values: Vec<i64>,
        imbalance: Vec<i64>,
        in_slack: Vec<i64>,
        out_slack: Vec<i64>,
        best: Option<i64>,
        flows: Vec<Vec<i64>>,
    }

    impl Search<'_> {
        fn feasible_so_far(&self, v: VertexId) -> bool {
            let need = self.demands[v.index()] - self.imbalance[v.index()];
            -self.out_slack[v.index()] <= need && need <= self.in_slack[v.index()]
        }

        fn run(&mut self, dart: usize, cost: i64) {
            if self.best.is_some_and(|b| cost > b) {
                return;
            }
            if dart == self.values.len() {
                if self
                    .g
                    .vertices()
                    .any(|v| self.imbalance[v.index()] != self.demands[v.index()])
                {
                    return;
                }
                if self.best != Some(cost) {
                    self.best = Some(cost);
                    self.flows.clear();
                }
                self.flows.push(self.values.clone());
                return;
            }
            let d = DartId(dart);
            let (t, h) = (self.g.tail(d), self.g.head(d));
            let cap = self.capacities[dart];
            self.in_slack[h.index()] -= cap;
            self.out_slack[t.index()] -= cap;
            for f in 0..=cap {
                self.values[dart] = f;
                self.imbalance[h.index()] += f;
                self.imbalance[t.index()] -= f;
                if self.feasible_so_far(h) && self.feasible_so_far(t) {
                    self.run(dart + 1, cost + f * self.c[dart]);
                }
                self.imbalance[h.index()] -= f;
                self.imbalance[t.index()] += f;
            }
            self.values[dart] = 0;
            self.in_slack[h.index()] += cap;
            self.out_slack[t.index()] += cap;
        }
    }

    let mut search = Search {
        g,
        c,
        capacities,
        demands,
        values: vec![0; nd],
        imbalance: vec![0; g.num_vertices()],
        in_slack,
        out_slack,
        best: None,
        flows: Vec::new(),
    };
    search.run(0, 0);
    if search.flows.is_empty() {
        return Err(OracleError::Infeasible);
    }
    Ok(search.flows)
}

/// Perturbed cost of an integral flow: sum of dart costs weighted by values.
pub fn flow_cost(table: &CostTable, flow: &[i64]) -> CostVec {
    let mut acc = table.zero_vec();
    for (d, &f) in flow.iter().enumerate() {
        if f != 0 {
            acc.add_assign(&table.cost(DartId(d)).scale(f));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// A `w` by `h` grid on the torus: every vertex has a rightward and an
/// upward edge with wraparound. Genus 1 for all `w, h >= 1`.
pub fn torus_grid(w: usize, h: usize) -> EmbeddedGraph {
    assert!(w >= 1 && h >= 1);
    let n = w * h;
    let vid = |x: usize, y: usize| (y % h) * w + (x % w);
    // Edge 2v is v's rightward edge, 2v + 1 its upward edge; canonical darts
    // point away from v.
    let right_in = |x: usize, y: usize| DartId(4 * vid(x, y) + 1);
    let right_from_left = |x: usize, y: usize| DartId(4 * vid((x + w - 1) % w, y));
    let up_in = |x: usize, y: usize| DartId(4 * vid(x, y) + 2 + 1);
    let up_from_below = |x: usize, y: usize| DartId(4 * vid(x, (y + h - 1) % h) + 2);
    let mut rotations = vec![Vec::new(); n];
    for y in 0..h {
        for x in 0..w {
            rotations[vid(x, y)] = vec![
                right_in(x, y),
                up_in(x, y),
                right_from_left(x, y),
                up_from_below(x, y),
            ];
        }
    }
    EmbeddedGraph::new(n, 2 * n, rotations).expect("torus grid is a valid embedding")
}

/// A planar `w` by `h` grid (no wraparound). Genus 0.
pub fn planar_grid(w: usize, h: usize) -> EmbeddedGraph {
    assert!(w >= 1 && h >= 1 && w * h >= 2);
    let n = w * h;
    let vid = |x: usize, y: usize| y * w + x;
    let num_right = (w - 1) * h;
    let right_edge = |x: usize, y: usize| y * (w - 1) + x;
    let up_edge = |x: usize, y: usize| num_right + y * w + x;
    let mut rotations = vec![Vec::new(); n];
    for y in 0..h {
        for x in 0..w {
            let mut rot = Vec::new();
            if x + 1 < w {
                rot.push(DartId(2 * right_edge(x, y) + 1));
            }
            if y + 1 < h {
                rot.push(DartId(2 * up_edge(x, y) + 1));
            }
            if x > 0 {
                rot.push(DartId(2 * right_edge(x - 1, y)));
            }
            if y > 0 {
                rot.push(DartId(2 * up_edge(x, y - 1)));
            }
            rotations[vid(x, y)] = rot;
        }
    }
    let num_edges = num_right + w * (h - 1);
    EmbeddedGraph::new(n, num_edges, rotations).expect("planar grid is a valid embedding")
}

/// One vertex with `2g` loops interleaved pairwise, giving a single face and
/// genus `g`.
pub fn bouquet(genus: usize) -> EmbeddedGraph {
    let mut rotation = Vec::with_capacity(4 * genus);
    for i in 0..genus {
        let a = EdgeId(2 * i);
        let b = EdgeId(2 * i + 1);
        rotation.extend([a.darts()[0], b.darts()[0], a.darts()[1], b.darts()[1]]);
    }
    EmbeddedGraph::new(1, 2 * genus, vec![rotation]).expect("bouquet is a valid embedding")
}

/// An undirected multigraph skeleton: vertex count plus endpoint pairs.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub num_vertices: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

/// A random connected skeleton: a random attachment tree plus extra edges
/// (loops and parallels permitted). Deterministic under the given rng.
pub fn random_skeleton(n: usize, extra_edges: usize, rng: &mut ChaCha8Rng) -> Skeleton {
    assert!(n >= 1);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((VertexId(u), VertexId(v)));
    }
    for _ in 0..extra_edges {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        edges.push((VertexId(u), VertexId(v)));
    }
    Skeleton {
        num_vertices: n,
        edges,
    }
}

/// Embeds a skeleton with uniformly random rotations. The genus falls out of
/// the Euler count.
pub fn random_rotation(skeleton: &Skeleton, rng: &mut ChaCha8Rng) -> EmbeddedGraph {
    let mut rotations = vec![Vec::new(); skeleton.num_vertices];
    for (i, &(u, v)) in skeleton.edges.iter().enumerate() {
        let e = EdgeId(i);
        // Canonical dart u -> v.
        rotations[v.index()].push(e.darts()[0]);
        rotations[u.index()].push(e.darts()[1]);
    }
    for rot in &mut rotations {
        rot.shuffle(rng);
    }
    EmbeddedGraph::new(skeleton.num_vertices, skeleton.edges.len(), rotations)
        .expect("any rotation system over a connected skeleton embeds")
}

/// Keeps drawing random rotations until the genus is at most `max_genus`.
pub fn random_embedding(n: usize, extra_edges: usize, max_genus: usize, rng: &mut ChaCha8Rng) -> EmbeddedGraph {
    loop {
        let skeleton = random_skeleton(n, extra_edges, rng);
        let g = random_rotation(&skeleton, rng);
        if g.genus() <= max_genus {
            return g;
        }
    }
}

pub fn unit_costs(g: &EmbeddedGraph) -> Vec<i64> {
    vec![1; g.num_darts()]
}

pub fn random_costs(g: &EmbeddedGraph, max: i64, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..g.num_darts()).map(|_| rng.gen_range(0..=max)).collect()
}

/// Bumps one dart per zero-cost directed cycle to cost 1 until none remain.
/// Keeps zero-cost darts in the instance without violating the positive
/// cycle assumption.
pub fn repair_zero_cost_cycles(g: &EmbeddedGraph, c: &mut Vec<i64>) {
    while let Some(cycle) = crate::sssp::find_zero_cost_cycle(g, c) {
        let d = cycle.iter().min().expect("cycles are nonempty");
        c[d.index()] = 1;
    }
}

/// One seeded fuzz instance: a random bounded-genus embedding, repaired
/// random costs, and a random face. Deterministic per seed.
pub fn fuzz_instance(
    seed: u64,
    max_n: usize,
    max_genus: usize,
    max_cost: i64,
) -> (EmbeddedGraph, Vec<i64>, crate::embedding::FaceId) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n.max(2));
    let extra = rng.gen_range(0..=2 * max_genus);
    let g = random_embedding(n, extra, max_genus, &mut rng);
    let mut c = random_costs(&g, max_cost, &mut rng);
    repair_zero_cost_cycles(&g, &mut c);
    let r = crate::embedding::FaceId(rng.gen_range(0..g.num_faces()));
    (g, c, r)
}

/// Like [`fuzz_instance`] but planar: a random planar grid with a few rows
/// and columns, or a random rotation instance filtered to genus zero.
pub fn fuzz_planar_instance(
    seed: u64,
    max_n: usize,
    max_cost: i64,
) -> (EmbeddedGraph, Vec<i64>, crate::embedding::FaceId) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let g = if rng.gen_bool(0.5) {
        let w = rng.gen_range(2..=(max_n / 2).max(2));
        let h = rng.gen_range(1..=(max_n / w).max(1));
        planar_grid(w.max(2), h.max(1))
    } else {
        let n = rng.gen_range(2..=max_n.max(2));
        let extra = rng.gen_range(0..=2);
        random_embedding(n, extra, 0, &mut rng)
    };
    let mut c = random_costs(&g, max_cost, &mut rng);
    repair_zero_cost_cycles(&g, &mut c);
    let r = crate::embedding::FaceId(rng.gen_range(0..g.num_faces()));
    (g, c, r)
}

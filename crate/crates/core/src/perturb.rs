//! Drainages and lexicographically perturbed cost vectors.
//!
//! A drainage is an antisymmetric dual flow whose imbalance is -1 at every
//! face except a designated sink `r`. Perturbed dart costs concatenate the
//! original cost, optionally a unit component, the dart's homology
//! signature, and its drainage value; comparisons are lexicographic and all
//! arithmetic is exact machine-integer (overflow panics in debug builds).

use std::cmp::Ordering;

use thiserror::Error;

use crate::embedding::{DartId, EdgeId, EmbeddedGraph, FaceId};
use crate::homology::{HomologyTable, TreeCotree};

/// Which perturbation variant a vector belongs to.
///
/// `Standard` carries a unit second component and suits non-negative costs;
/// `Modified` drops it and requires every directed cycle to have strictly
/// positive unperturbed cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Standard,
    Modified,
}

impl Variant {
    /// Total component count for genus-derived signature length `2g`.
    pub fn len(self, two_g: usize) -> usize {
        match self {
            Variant::Standard => two_g + 3,
            Variant::Modified => two_g + 2,
        }
    }

    /// Index of the first homology component.
    fn hom_start(self) -> usize {
        match self {
            Variant::Standard => 2,
            Variant::Modified => 1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexError {
    #[error("operands have mismatched variants or dimensions")]
    DimensionMismatch,
}

/// An exact lexicographically compared cost vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVec {
    variant: Variant,
    comps: Vec<i64>,
}

impl CostVec {
    pub fn new(variant: Variant, comps: Vec<i64>) -> Self {
        CostVec { variant, comps }
    }

    pub fn zero(variant: Variant, two_g: usize) -> Self {
        CostVec {
            variant,
            comps: vec![0; variant.len(two_g)],
        }
    }

    #[inline]
    pub fn variant(&self) -> Variant {
        self.variant
    }

    #[inline]
    pub fn components(&self) -> &[i64] {
        &self.comps
    }

    /// The unperturbed (first) component.
    #[inline]
    pub fn c0(&self) -> i64 {
        self.comps[0]
    }

    /// The homology components.
    pub fn hom(&self) -> &[i64] {
        let s = self.variant.hom_start();
        &self.comps[s..self.comps.len() - 1]
    }

    /// The face (drainage) component.
    pub fn z_part(&self) -> i64 {
        *self.comps.last().expect("cost vectors are non-empty")
    }

    fn check(&self, other: &Self) -> Result<(), LexError> {
        if self.variant != other.variant || self.comps.len() != other.comps.len() {
            return Err(LexError::DimensionMismatch);
        }
        Ok(())
    }

    pub fn try_compare(&self, other: &Self) -> Result<Ordering, LexError> {
        self.check(other)?;
        Ok(self.comps.cmp(&other.comps))
    }

    pub fn try_add(&self, other: &Self) -> Result<CostVec, LexError> {
        self.check(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CostVec {
            variant: self.variant,
            comps,
        })
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check(other).expect("matching cost vectors");
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        self.check(other).expect("matching cost vectors");
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            *a -= b;
        }
    }

    pub fn negate(&self) -> CostVec {
        CostVec {
            variant: self.variant,
            comps: self.comps.iter().map(|&x| -x).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> CostVec {
        CostVec {
            variant: self.variant,
            comps: self.comps.iter().map(|&x| k * x).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|&x| x == 0)
    }

    pub fn is_positive(&self) -> bool {
        self.comps.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }
}

impl PartialOrd for CostVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CostVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_compare(other).expect("matching cost vectors")
    }
}

/// Sums the perturbed costs of the darts of a walk.
pub fn sum_over<'a>(
    table: &CostTable,
    walk: impl IntoIterator<Item = &'a DartId>,
) -> CostVec {
    let mut acc = CostVec::zero(table.variant, table.two_g);
    for &d in walk {
        acc.add_assign(table.cost(d));
    }
    acc
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DrainageError {
    #[error("edge set is not a spanning cotree")]
    NotASpanningCotree,
}

/// An antisymmetric dual flow with imbalance -1 at every non-sink face.
/// One integer per edge, carried on the canonical dart; the reversal holds
/// the negation.
#[derive(Debug, Clone)]
pub struct Drainage {
    pub sink: FaceId,
    z: Vec<i64>,
}

impl Drainage {
    /// Drainage value on the given dart's dual dart.
    #[inline]
    pub fn z_dart(&self, d: DartId) -> i64 {
        let v = self.z[d.edge().index()];
        if d.is_canonical() {
            v
        } else {
            -v
        }
    }

    #[inline]
    pub fn z_edge(&self, e: EdgeId) -> i64 {
        self.z[e.index()]
    }
}

/// Builds the cotree drainage: each non-sink face sends one unit of dual
/// flow along the cotree toward the sink, so the dart from `p` toward its
/// parent carries the subtree size of `p`.
pub fn cotree_drainage(g: &EmbeddedGraph, tc: &TreeCotree) -> Drainage {
    let mut size = vec![1i64; g.num_faces()];
    let mut order: Vec<FaceId> = g.face_ids().collect();
    order.sort_by_key(|f| std::cmp::Reverse(tc.cotree_depth[f.index()]));
    let mut z = vec![0i64; g.num_edges()];
    for f in order {
        if let Some(s) = tc.succ_dart[f.index()] {
            let parent = g.head_face(s);
            size[parent.index()] += size[f.index()];
            z[s.edge().index()] = if s.is_canonical() {
                size[f.index()]
            } else {
                -size[f.index()]
            };
        }
    }
    Drainage {
        sink: tc.root_face,
        z,
    }
}

/// Builds the cotree drainage from a raw edge set, validating that it is a
/// spanning cotree.
pub fn cotree_drainage_from_set(
    g: &EmbeddedGraph,
    root: FaceId,
    edges: &[EdgeId],
) -> Result<Drainage, DrainageError> {
    if edges.len() + 1 != g.num_faces() {
        return Err(DrainageError::NotASpanningCotree);
    }
    let mut in_set = vec![false; g.num_edges()];
    for &e in edges {
        in_set[e.index()] = true;
    }
    // BFS over the dual restricted to the set.
    let mut succ = vec![None; g.num_faces()];
    let mut depth = vec![0u32; g.num_faces()];
    let mut seen = vec![false; g.num_faces()];
    seen[root.index()] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut count = 1;
    while let Some(f) = queue.pop_front() {
        for &d in g.face(f) {
            if !in_set[d.edge().index()] {
                continue;
            }
            let p = g.tail_face(d);
            if !seen[p.index()] {
                seen[p.index()] = true;
                succ[p.index()] = Some(d);
                depth[p.index()] = depth[f.index()] + 1;
                count += 1;
                queue.push_back(p);
            }
        }
    }
    if count != g.num_faces() {
        return Err(DrainageError::NotASpanningCotree);
    }
    let tc = TreeCotree {
        root_vertex: crate::embedding::VertexId(0),
        root_face: root,
        in_tree: vec![false; g.num_edges()],
        in_cotree: in_set,
        leftover: Vec::new(),
        parent_dart: vec![None; g.num_vertices()],
        succ_dart: succ,
        cotree_depth: depth,
    };
    Ok(cotree_drainage(g, &tc))
}

/// Sum of drainage values over the clockwise neighborhood of a face subset:
/// the darts whose dual darts enter the subset from outside.
pub fn cut_sum(g: &EmbeddedGraph, dr: &Drainage, face_subset: &[FaceId]) -> i64 {
    let mut in_set = vec![false; g.num_faces()];
    for &f in face_subset {
        in_set[f.index()] = true;
    }
    let mut total = 0i64;
    for d in g.darts() {
        if in_set[g.head_face(d).index()] && !in_set[g.tail_face(d).index()] {
            total += dr.z_dart(d);
        }
    }
    total
}

/// Per-dart perturbed cost vectors, all of one variant.
#[derive(Debug, Clone)]
pub struct CostTable {
    pub variant: Variant,
    pub two_g: usize,
    costs: Vec<CostVec>,
}

impl CostTable {
    #[inline]
    pub fn cost(&self, d: DartId) -> &CostVec {
        &self.costs[d.index()]
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn zero_vec(&self) -> CostVec {
        CostVec::zero(self.variant, self.two_g)
    }
}

/// Assembles perturbed costs from original dart costs, homology signatures,
/// and a drainage.
pub fn perturb_costs(
    g: &EmbeddedGraph,
    c: &[i64],
    sigs: &HomologyTable,
    dr: &Drainage,
    variant: Variant,
) -> CostTable {
    assert_eq!(c.len(), g.num_darts());
    let two_g = sigs.two_g;
    let mut costs = Vec::with_capacity(g.num_darts());
    for d in g.darts() {
        let mut comps = Vec::with_capacity(variant.len(two_g));
        comps.push(c[d.index()]);
        if variant == Variant::Standard {
            comps.push(1);
        }
        let sign = if d.is_canonical() { 1 } else { -1 };
        comps.extend(sigs.edge(d.edge()).iter().map(|&x| i64::from(sign * x)));
        comps.push(dr.z_dart(d));
        costs.push(CostVec::new(variant, comps));
    }
    CostTable {
        variant,
        two_g,
        costs,
    }
}

#[derive(Debug, Error)]
pub enum CostParseError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("dart {0} out of range")]
    DartOutOfRange(usize),
    #[error("dart {0} listed twice")]
    DuplicateDart(usize),
    #[error("no cost given for dart {0} and no default configured")]
    MissingDartCost(usize),
}

/// Parses the `.cst` format: one `dart_id cost` pair per line. Darts not
/// listed take `default` when provided, otherwise parsing fails.
pub fn parse_costs(
    text: &str,
    num_darts: usize,
    default: Option<i64>,
) -> Result<Vec<i64>, CostParseError> {
    let mut costs: Vec<Option<i64>> = vec![None; num_darts];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let dart: usize = it
            .next()
            .unwrap()
            .parse()
            .map_err(|e| CostParseError::Syntax(i + 1, format!("bad dart id: {e}")))?;
        let cost: i64 = it
            .next()
            .ok_or_else(|| CostParseError::Syntax(i + 1, "missing cost".into()))?
            .parse()
            .map_err(|e| CostParseError::Syntax(i + 1, format!("bad cost: {e}")))?;
        if dart >= num_darts {
            return Err(CostParseError::DartOutOfRange(dart));
        }
        if costs[dart].is_some() {
            return Err(CostParseError::DuplicateDart(dart));
        }
        costs[dart] = Some(cost);
    }
    costs
        .into_iter()
        .enumerate()
        .map(|(d, c)| c.or(default).ok_or(CostParseError::MissingDartCost(d)))
        .collect()
}

pub fn write_costs(costs: &[i64]) -> String {
    let mut out = String::new();
    for (d, c) in costs.iter().enumerate() {
        out.push_str(&format!("{d} {c}\n"));
    }
    out
}

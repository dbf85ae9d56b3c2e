//! Streamed unperturbed shortest-path distances over monotone
//! correspondences.
//!
//! The streamer subscribes to an MSSP engine's hooks and maintains one
//! scalar distance for a moving (source, target) pair: target advances add
//! `c(d) - slack0(d)` along the target walk, source advances subtract the
//! boundary step's distance, and every fully completed round adds one while
//! the target is red. Redness is answered by the parity of marked edges
//! carrying active darts, where marks track edge parity along a maintained
//! source-to-target walk.

use thiserror::Error;

use crate::embedding::{DartId, EdgeId, EmbeddedGraph, FaceId, VertexId};
use crate::mssp::reference::{run_reference, MsspError};
use crate::mssp::{pipeline, MsspObserver};
use crate::perturb::Variant;
use crate::sssp::HolyTree;

#[derive(Debug, Error)]
pub enum DistancesError {
    #[error("correspondence is not monotone at pair index {0}")]
    NonMonotone(usize),
    #[error("pair index {0} is out of range")]
    PairOutOfRange(usize),
    #[error("walk is disconnected at dart index {0}")]
    WalkDisconnected(usize),
    #[error(transparent)]
    Engine(#[from] MsspError),
}

/// Source/target index pairs, non-decreasing in both coordinates. Indices
/// are 1-based: `i` into the source sequence around `r`, `j` into the walk's
/// vertex sequence.
#[derive(Debug, Clone)]
pub struct MonotoneCorrespondence {
    pairs: Vec<(usize, usize)>,
}

impl MonotoneCorrespondence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self, DistancesError> {
        for (idx, w) in pairs.windows(2).enumerate() {
            if w[1].0 < w[0].0 || w[1].1 < w[0].1 {
                return Err(DistancesError::NonMonotone(idx + 1));
            }
        }
        if pairs.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(DistancesError::PairOutOfRange(0));
        }
        Ok(MonotoneCorrespondence { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// A walk through the graph: a start vertex and a dart sequence. The vertex
/// sequence it spells has length `darts.len() + 1`.
#[derive(Debug, Clone)]
pub struct Walk {
    pub start: VertexId,
    pub darts: Vec<DartId>,
}

impl Walk {
    pub fn validate(&self, g: &EmbeddedGraph) -> Result<(), DistancesError> {
        let mut at = self.start;
        for (i, &d) in self.darts.iter().enumerate() {
            if g.tail(d) != at {
                return Err(DistancesError::WalkDisconnected(i));
            }
            at = g.head(d);
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.darts.len() + 1
    }
}

/// The engine the distance stream rides on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Reference,
    Linear,
}

struct DistanceStream<'a> {
    g: &'a EmbeddedGraph,
    c: &'a [i64],
    walk: &'a Walk,
    pairs: &'a [(usize, usize)],
    cursor: usize,
    target: usize,
    dist: i64,
    marks: Vec<bool>,
    out: Vec<(usize, usize, i64)>,
}

impl<'a> DistanceStream<'a> {
    fn new(g: &'a EmbeddedGraph, c: &'a [i64], walk: &'a Walk, pairs: &'a [(usize, usize)]) -> Self {
        DistanceStream {
            g,
            c,
            walk,
            pairs,
            cursor: 0,
            target: 1,
            dist: 0,
            marks: vec![false; g.num_edges()],
            out: Vec::new(),
        }
    }

    fn flip(&mut self, e: EdgeId) {
        self.marks[e.index()] = !self.marks[e.index()];
    }

    /// Emits all pairs whose source index is `source`, advancing the target
    /// cursor along the walk.
    fn drain_source(&mut self, source: usize, slack0: &dyn Fn(DartId) -> i64) {
        while let Some(&(pi, pj)) = self.pairs.get(self.cursor) {
            if pi != source {
                break;
            }
            while self.target < pj {
                let d = self.walk.darts[self.target - 1];
                self.dist += self.c[d.index()] - slack0(d);
                self.flip(d.edge());
                self.target += 1;
            }
            self.out.push((pi, pj, self.dist));
            self.cursor += 1;
        }
    }
}

impl MsspObserver for DistanceStream<'_> {
    fn on_start(&mut self, tree: &HolyTree) {
        self.dist = tree.dist[self.walk.start.index()].c0();
        for d in tree.path_to_in(self.g, self.walk.start) {
            self.flip(d.edge());
        }
        let (g, c) = (self.g, self.c);
        let slack0 = move |d: DartId| {
            tree.dist[g.tail(d).index()].c0() + c[d.index()] - tree.dist[g.head(d).index()].c0()
        };
        self.drain_source(1, &slack0);
    }

    fn on_special_pivot(&mut self, _iteration: usize, boundary_dart: DartId, dist0: i64) {
        self.dist -= dist0;
        self.flip(boundary_dart.edge());
    }

    fn on_round_completed(&mut self, active_edges: &mut dyn Iterator<Item = EdgeId>) {
        let marked = active_edges.filter(|e| self.marks[e.index()]).count();
        if marked % 2 == 1 {
            self.dist += 1;
        }
    }

    fn on_iteration_end(&mut self, iteration: usize, slack0: &dyn Fn(DartId) -> i64) {
        self.drain_source(iteration + 1, slack0);
    }
}

/// Streams the unperturbed distance from `u_i` to `v_j` for every pair of a
/// monotone correspondence, alongside one full MSSP run around `r`.
pub fn mssp_distances(
    g: &EmbeddedGraph,
    c: &[i64],
    r: FaceId,
    walk: &Walk,
    corr: &MonotoneCorrespondence,
    engine: EngineKind,
) -> Result<Vec<(usize, usize, i64)>, DistancesError> {
    walk.validate(g)?;
    let k1 = g.face(r).len();
    let k2 = walk.num_vertices();
    for (idx, &(i, j)) in corr.pairs().iter().enumerate() {
        if i > k1 || j > k2 {
            return Err(DistancesError::PairOutOfRange(idx + 1));
        }
    }
    let pipe = pipeline(g, c, r, Variant::Modified);
    let mut stream = DistanceStream::new(g, c, walk, corr.pairs());
    match engine {
        EngineKind::Reference => {
            run_reference(g, &pipe, r, &mut stream, &mut |_, _| {})?;
        }
        EngineKind::Linear => {
            crate::mssp::linear::run_linear(g, &pipe, r, &mut stream)?;
        }
    }
    debug_assert_eq!(stream.out.len(), corr.pairs().len());
    Ok(stream.out)
}

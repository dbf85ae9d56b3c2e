//! Cellularly embedded directed multigraphs given as rotation systems.
//!
//! Every edge `e` owns two darts `2e` (canonical) and `2e + 1`; `rev` flips
//! the lowest bit. The permutation `pi` maps each dart to the next dart
//! directed into the same vertex in counterclockwise order. Orbits of
//! `rev ∘ pi` are the clockwise boundary walks of the faces, which double as
//! the vertices of the dual graph: the dual dart of `d` crosses `d` from its
//! left face to its right face.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

macro_rules! index_id {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!(stringify!($name), "({})"), self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

index_id!(
    /// A directed half of an edge.
    DartId
);
index_id!(
    /// An undirected edge; its darts are `2e` and `2e + 1`.
    EdgeId
);
index_id!(VertexId);
index_id!(FaceId);

impl DartId {
    /// The other dart of the same edge.
    #[inline]
    pub fn rev(self) -> DartId {
        DartId(self.0 ^ 1)
    }

    #[inline]
    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 >> 1)
    }

    /// True for the dart `2e` of its edge.
    #[inline]
    pub fn is_canonical(self) -> bool {
        self.0 & 1 == 0
    }
}

impl EdgeId {
    #[inline]
    pub fn canonical(self) -> DartId {
        DartId(self.0 << 1)
    }

    #[inline]
    pub fn darts(self) -> [DartId; 2] {
        [DartId(self.0 << 1), DartId(self.0 << 1 | 1)]
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("dart {0} listed more than once in the rotation system")]
    DartMultiplyListed(usize),
    #[error("dart {0} missing from the rotation system")]
    DartMissing(usize),
    #[error("dart {0} out of range for {1} edges")]
    DartOutOfRange(usize, usize),
    #[error("Euler count |V| - |E| + |F| = {0} is not of the form 2 - 2g")]
    NonIntegralGenus(i64),
}

/// An immutable cellular embedding. Faces and genus are computed at build
/// time; the structure is safe to share across threads afterwards.
#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    num_vertices: usize,
    num_edges: usize,
    head: Vec<VertexId>,
    pi: Vec<DartId>,
    rotations: Vec<Vec<DartId>>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<DartId>>,
    pos_in_face: Vec<u32>,
    genus: usize,
}

impl EmbeddedGraph {
    /// Builds and validates an embedding from per-vertex rotations.
    ///
    /// `rotations[v]` lists the darts directed into `v` in counterclockwise
    /// order; dart heads are implied by the list a dart appears in.
    pub fn new(
        num_vertices: usize,
        num_edges: usize,
        rotations: Vec<Vec<DartId>>,
    ) -> Result<Self, BuildError> {
        assert_eq!(rotations.len(), num_vertices, "one rotation list per vertex");
        let num_darts = 2 * num_edges;
        let mut head = vec![VertexId(usize::MAX); num_darts];
        let mut pi = vec![DartId(usize::MAX); num_darts];
        let mut seen = vec![false; num_darts];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d.0 >= num_darts {
                    return Err(BuildError::DartOutOfRange(d.0, num_edges));
                }
                if seen[d.0] {
                    return Err(BuildError::DartMultiplyListed(d.0));
                }
                seen[d.0] = true;
                head[d.0] = VertexId(v);
                pi[d.0] = rot[(i + 1) % rot.len()];
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(BuildError::DartMissing(missing));
        }

        // Connectivity over the underlying undirected graph.
        if num_vertices > 0 {
            let mut reached = vec![false; num_vertices];
            let mut queue = VecDeque::new();
            reached[0] = true;
            queue.push_back(VertexId(0));
            let mut count = 1;
            while let Some(v) = queue.pop_front() {
                for &d in &rotations[v.0] {
                    let u = head[d.0 ^ 1];
                    if !reached[u.0] {
                        reached[u.0] = true;
                        count += 1;
                        queue.push_back(u);
                    }
                }
            }
            if count != num_vertices {
                return Err(BuildError::NotConnected);
            }
        }

        // Faces: orbits of rev ∘ pi, each a clockwise boundary walk.
        let mut face_of = vec![FaceId(usize::MAX); num_darts];
        let mut pos_in_face = vec![0u32; num_darts];
        let mut faces = Vec::new();
        for start in 0..num_darts {
            if face_of[start].0 != usize::MAX {
                continue;
            }
            let id = FaceId(faces.len());
            let mut orbit = Vec::new();
            let mut d = DartId(start);
            loop {
                face_of[d.0] = id;
                pos_in_face[d.0] = orbit.len() as u32;
                orbit.push(d);
                d = pi[d.0].rev();
                if d.0 == start {
                    break;
                }
            }
            faces.push(orbit);
        }
        if faces.is_empty() && num_vertices == 1 {
            // A single vertex on the sphere bounds one empty face.
            faces.push(Vec::new());
        }

        let euler = num_vertices as i64 - num_edges as i64 + faces.len() as i64;
        let two_g = 2 - euler;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(BuildError::NonIntegralGenus(euler));
        }

        Ok(EmbeddedGraph {
            num_vertices,
            num_edges,
            head,
            pi,
            rotations,
            face_of,
            faces,
            pos_in_face,
            genus: (two_g / 2) as usize,
        })
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    #[inline]
    pub fn num_darts(&self) -> usize {
        2 * self.num_edges
    }

    #[inline]
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    #[inline]
    pub fn genus(&self) -> usize {
        self.genus
    }

    #[inline]
    pub fn head(&self, d: DartId) -> VertexId {
        self.head[d.0]
    }

    #[inline]
    pub fn tail(&self, d: DartId) -> VertexId {
        self.head[d.0 ^ 1]
    }

    /// Next dart into `head(d)` counterclockwise.
    #[inline]
    pub fn pi(&self, d: DartId) -> DartId {
        self.pi[d.0]
    }

    /// The face to the right of `d`; equivalently the head of `d`'s dual dart.
    #[inline]
    pub fn head_face(&self, d: DartId) -> FaceId {
        self.face_of[d.0]
    }

    /// The face to the left of `d`; the tail of `d`'s dual dart.
    #[inline]
    pub fn tail_face(&self, d: DartId) -> FaceId {
        self.face_of[d.0 ^ 1]
    }

    /// Position of `d` in its face orbit.
    #[inline]
    pub fn pos_in_face(&self, d: DartId) -> u32 {
        self.pos_in_face[d.0]
    }

    pub fn darts(&self) -> impl Iterator<Item = DartId> {
        (0..self.num_darts()).map(DartId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.num_edges).map(EdgeId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.num_vertices).map(VertexId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    /// Darts directed into `v` in counterclockwise order.
    #[inline]
    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rotations[v.0]
    }

    /// Darts directed out of `v`, in the rotation order of their reversals.
    pub fn out_darts(&self, v: VertexId) -> impl Iterator<Item = DartId> + '_ {
        self.rotations[v.0].iter().map(|d| d.rev())
    }

    /// All face orbits as clockwise dart sequences.
    pub fn faces(&self) -> &[Vec<DartId>] {
        &self.faces
    }

    /// The clockwise boundary walk of one face.
    #[inline]
    pub fn face(&self, f: FaceId) -> &[DartId] {
        &self.faces[f.0]
    }

    /// The dual interpretation of the embedding.
    pub fn dual(&self) -> DualView<'_> {
        DualView { graph: self }
    }
}

/// The dual graph: one vertex per face, the same darts and edges. The dual
/// dart of a primal dart `d` goes from the face left of `d` to the face on
/// its right.
#[derive(Clone, Copy)]
pub struct DualView<'a> {
    graph: &'a EmbeddedGraph,
}

impl<'a> DualView<'a> {
    #[inline]
    pub fn head(&self, d: DartId) -> FaceId {
        self.graph.head_face(d)
    }

    #[inline]
    pub fn tail(&self, d: DartId) -> FaceId {
        self.graph.tail_face(d)
    }

    /// Reinterprets the dual as a primal embedding. Dualizing the result
    /// again recovers the original incidences.
    pub fn as_graph(&self) -> EmbeddedGraph {
        let g = self.graph;
        let rotations = g.faces.clone();
        EmbeddedGraph::new(g.faces.len(), g.num_edges, rotations)
            .expect("dual of a valid embedding is valid")
    }
}

#[derive(Debug, Error)]
pub enum EmgParseError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Parses the `.emg` text format: `emg 1`, then `<V> <E>`, then one
/// counterclockwise rotation line of dart ids per vertex.
pub fn parse_emg(text: &str) -> Result<EmbeddedGraph, EmgParseError> {
    let mut lines = text.lines().enumerate();
    let (n, header) = lines
        .next()
        .ok_or_else(|| EmgParseError::Syntax(1, "empty file".into()))?;
    if header.trim() != "emg 1" {
        return Err(EmgParseError::Syntax(n + 1, "expected header `emg 1`".into()));
    }
    let (n, counts) = lines
        .next()
        .ok_or_else(|| EmgParseError::Syntax(2, "missing `<V> <E>` line".into()))?;
    let mut it = counts.split_whitespace();
    let parse = |tok: Option<&str>, line: usize| -> Result<usize, EmgParseError> {
        tok.ok_or_else(|| EmgParseError::Syntax(line, "expected two integers".into()))?
            .parse()
            .map_err(|e| EmgParseError::Syntax(line, format!("bad integer: {e}")))
    };
    let num_vertices = parse(it.next(), n + 1)?;
    let num_edges = parse(it.next(), n + 1)?;
    let mut rotations = Vec::with_capacity(num_vertices);
    for _ in 0..num_vertices {
        let (n, line) = lines
            .next()
            .ok_or_else(|| EmgParseError::Syntax(0, "missing rotation line".into()))?;
        let mut rot = Vec::new();
        for tok in line.split_whitespace() {
            let d: usize = tok
                .parse()
                .map_err(|e| EmgParseError::Syntax(n + 1, format!("bad dart id: {e}")))?;
            rot.push(DartId(d));
        }
        rotations.push(rot);
    }
    Ok(EmbeddedGraph::new(num_vertices, num_edges, rotations)?)
}

/// Serializes an embedding in the `.emg` format.
pub fn write_emg(g: &EmbeddedGraph) -> String {
    let mut out = String::new();
    out.push_str("emg 1\n");
    out.push_str(&format!("{} {}\n", g.num_vertices(), g.num_edges()));
    for v in g.vertices() {
        let line: Vec<String> = g.rotation(v).iter().map(|d| d.0.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

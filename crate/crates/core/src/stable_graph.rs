//! Stable dual graphs and the moves relating them.
//!
//! A [`StableGraph`] is the dual graph of a stable nodal surface: one vertex
//! per irreducible component (decorated with its genus), one edge per node
//! (a loop when the node is non-separating on its component) and one leg per
//! marked point. Vertex and edge identity is positional; graphs from
//! different sources are compared through [`crate::canonical`].
//!
//! Two families of moves are provided. Contractions smooth nodes and move
//! towards the open stratum; [`StableGraph::split_vertex`] and
//! [`StableGraph::add_nonseparating_node`] create a node and move one step
//! deeper into the boundary.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The ambient type `(g, n)`: genus `g` with `n` ordered marked points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AmbientType {
    genus: u32,
    legs: u32,
}

impl AmbientType {
    /// Rejects the unstable types with `2g - 2 + n <= 0`.
    pub fn new(genus: u32, legs: u32) -> Result<Self, GraphError> {
        if 2 * i64::from(genus) - 2 + i64::from(legs) <= 0 {
            return Err(GraphError::UnstableAmbient { genus, legs });
        }
        Ok(AmbientType { genus, legs })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn legs(&self) -> u32 {
        self.legs
    }

    /// Complex dimension `3g - 3 + n`, which is also the maximal number of nodes.
    pub fn dimension(&self) -> u32 {
        3 * self.genus + self.legs - 3
    }

    /// `2g - 2 + n`: minus the Euler characteristic, and the number of pairs of pants.
    pub fn euler_weight(&self) -> u32 {
        2 * self.genus + self.legs - 2
    }
}

impl fmt::Display for AmbientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.genus, self.legs)
    }
}

/// A single failed invariant, reported by [`StableGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoVertices,
    EdgeEndpointOutOfRange { edge: usize, vertex: usize },
    LegOutOfRange { leg: u32, vertex: usize },
    Disconnected,
    Unstable { vertex: usize, genus: u32, valence: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::EdgeEndpointOutOfRange { edge, vertex } => {
                write!(f, "edge {edge} references missing vertex {vertex}")
            }
            Violation::LegOutOfRange { leg, vertex } => {
                write!(f, "leg {leg} references missing vertex {vertex}")
            }
            Violation::Disconnected => write!(f, "graph is disconnected"),
            Violation::Unstable { vertex, genus, valence } => {
                write!(f, "vertex {vertex} is unstable: 2*{genus} - 2 + {valence} <= 0")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("type ({genus}, {legs}) is unstable: 2g - 2 + n must be positive")]
    UnstableAmbient { genus: u32, legs: u32 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("genus split {first} + {second} does not add up to {genus}")]
    GenusSplitMismatch { genus: u32, first: u32, second: u32 },
    #[error("{0:?} is not attached to vertex {1}")]
    ForeignIncidence(Incidence, usize),
    #[error("vertex {vertex} would be unstable (genus {genus}, valence {valence})")]
    Unstable { vertex: usize, genus: u32, valence: usize },
    #[error("vertex {0} has genus 0; no non-separating node can be added")]
    GenusZero(usize),
    #[error("graph has type {found}, expected {expected}")]
    TypeMismatch { expected: AmbientType, found: AmbientType },
    #[error("invalid stable graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Something attached to a vertex: one end of an edge, or a leg.
///
/// Edge ends are numbered by their position in the stored pair, so both ends
/// of a loop are distinct incidences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Incidence {
    HalfEdge { edge: usize, end: u8 },
    Leg(u32),
}

/// A set of edges to contract. The empty set is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContractionMove(BTreeSet<usize>);

impl ContractionMove {
    pub fn identity() -> Self {
        ContractionMove(BTreeSet::new())
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.0.contains(&edge)
    }

    /// Edges selected by the bits of `mask`.
    pub fn from_mask(mask: u64, edge_count: usize) -> Self {
        (0..edge_count).filter(|&e| mask >> e & 1 == 1).collect()
    }
}

impl FromIterator<usize> for ContractionMove {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ContractionMove(iter.into_iter().collect())
    }
}

/// Result of a tracked contraction: the contracted graph and, for every
/// edge of the source, its index in the result (`None` if contracted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub graph: StableGraph,
    pub survivors: Vec<Option<usize>>,
}

impl Contraction {
    /// The unique source edge that survives as `edge`.
    pub fn preimage(&self, edge: usize) -> Option<usize> {
        self.survivors.iter().position(|&s| s == Some(edge))
    }
}

/// Dual graph of a stable nodal surface.
///
/// Edges are stored as `(a, b)` with `a <= b`; a loop is `(v, v)`. Leg `i`
/// (1-based label) sits on vertex `legs[i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    genera: Vec<u32>,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
}

impl StableGraph {
    /// Builds a graph without checking any invariant. Use [`StableGraph::validate`]
    /// or [`StableGraph::new`] when the input is untrusted.
    pub fn from_parts(genera: Vec<u32>, edges: Vec<(usize, usize)>, legs: Vec<usize>) -> Self {
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        StableGraph { genera, edges, legs }
    }

    /// Builds a graph and rejects it unless [`StableGraph::validate`] is empty.
    pub fn new(genera: Vec<u32>, edges: Vec<(usize, usize)>, legs: Vec<usize>) -> Result<Self, GraphError> {
        let graph = Self::from_parts(genera, edges, legs);
        let violations = graph.validate();
        if violations.is_empty() {
            Ok(graph)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    /// The open stratum: a single smooth vertex carrying every leg.
    pub fn smooth(ty: AmbientType) -> Self {
        StableGraph { genera: vec![ty.genus()], edges: Vec::new(), legs: vec![0; ty.legs() as usize] }
    }

    pub fn vertex_count(&self) -> usize {
        self.genera.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn genus_of(&self, vertex: usize) -> u32 {
        self.genera[vertex]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertex of every leg, in label order.
    pub fn leg_vertices(&self) -> &[usize] {
        &self.legs
    }

    /// Labels of the legs sitting on `vertex`, ascending.
    pub fn legs_at(&self, vertex: usize) -> Vec<u32> {
        self.legs.iter().enumerate().filter(|&(_, &v)| v == vertex).map(|(i, _)| i as u32 + 1).collect()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    /// Edge ends at `vertex` (a loop counts twice).
    pub fn degree(&self, vertex: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == vertex) + usize::from(b == vertex)).sum()
    }

    /// Edge ends plus legs at `vertex`.
    pub fn valence(&self, vertex: usize) -> usize {
        self.degree(vertex) + self.legs.iter().filter(|&&v| v == vertex).count()
    }

    /// Everything attached to `vertex`: half-edges first (by edge, then end), then legs.
    pub fn incidences(&self, vertex: usize) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (edge, &(a, b)) in self.edges.iter().enumerate() {
            if a == vertex {
                out.push(Incidence::HalfEdge { edge, end: 0 });
            }
            if b == vertex {
                out.push(Incidence::HalfEdge { edge, end: 1 });
            }
        }
        out.extend(self.legs_at(vertex).into_iter().map(Incidence::Leg));
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.genera.len();
        if n == 0 {
            return false;
        }
        let mut uf = UnionFind::new(n);
        for &(a, b) in &self.edges {
            if a < n && b < n {
                uf.union(a, b);
            }
        }
        (1..n).all(|v| uf.find(v) == uf.find(0))
    }

    /// Every invariant the graph breaks; empty iff the graph is a valid stable graph.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.genera.len();
        if n == 0 {
            return vec![Violation::NoVertices];
        }
        let mut out = Vec::new();
        for (edge, &(a, b)) in self.edges.iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= n {
                    out.push(Violation::EdgeEndpointOutOfRange { edge, vertex });
                }
            }
        }
        for (i, &vertex) in self.legs.iter().enumerate() {
            if vertex >= n {
                out.push(Violation::LegOutOfRange { leg: i as u32 + 1, vertex });
            }
        }
        if !self.is_connected() {
            out.push(Violation::Disconnected);
        }
        for vertex in 0..n {
            let genus = self.genera[vertex];
            let valence = self.valence(vertex);
            if !is_stable_vertex(genus, valence) {
                out.push(Violation::Unstable { vertex, genus, valence });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `sum h_v + |E| - |V| + 1`.
    pub fn total_genus(&self) -> Result<u32, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let sum: u64 = self.genera.iter().map(|&h| u64::from(h)).sum();
        Ok((sum + self.edges.len() as u64 + 1 - self.genera.len() as u64) as u32)
    }

    pub fn ambient_type(&self) -> Result<AmbientType, GraphError> {
        AmbientType::new(self.total_genus()?, self.legs.len() as u32)
    }

    /// Smooths the node `edge`.
    pub fn contract_edge(&self, edge: usize) -> Result<StableGraph, GraphError> {
        self.contract_set(&ContractionMove::from_iter([edge]))
    }

    /// Smooths every node in `moves` at once.
    pub fn contract_set(&self, moves: &ContractionMove) -> Result<StableGraph, GraphError> {
        Ok(self.contract_tracked(moves)?.graph)
    }

    /// Contracts `moves` and records where each surviving edge went.
    ///
    /// Merged vertices are numbered in order of their smallest source vertex
    /// and surviving edges keep their relative order, so contracting `A` then
    /// `B` yields the same positional graph as contracting `A ∪ B`.
    pub fn contract_tracked(&self, moves: &ContractionMove) -> Result<Contraction, GraphError> {
        if let Some(edge) = moves.edges().find(|&e| e >= self.edges.len()) {
            return Err(GraphError::NoSuchEdge(edge));
        }
        let n = self.genera.len();
        let mut uf = UnionFind::new(n);
        for edge in moves.edges() {
            let (a, b) = self.edges[edge];
            uf.union(a, b);
        }
        // A merged vertex has genus sum(h) + |contracted edges| - |merged vertices| + 1.
        let mut new_index = vec![usize::MAX; n];
        let mut root_index = vec![usize::MAX; n];
        let mut genera: Vec<i64> = Vec::new();
        for (v, slot) in new_index.iter_mut().enumerate() {
            let r = uf.find(v);
            if root_index[r] == usize::MAX {
                root_index[r] = genera.len();
                genera.push(1);
            }
            *slot = root_index[r];
            genera[root_index[r]] += i64::from(self.genera[v]) - 1;
        }
        for edge in moves.edges() {
            genera[new_index[self.edges[edge].0]] += 1;
        }
        let genera = genera.into_iter().map(|h| h as u32).collect();
        let mut survivors = Vec::with_capacity(self.edges.len());
        let mut edges = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if moves.contains(e) {
                survivors.push(None);
            } else {
                survivors.push(Some(edges.len()));
                let (x, y) = (new_index[a], new_index[b]);
                edges.push((x.min(y), x.max(y)));
            }
        }
        let legs = self.legs.iter().map(|&v| new_index[v]).collect();
        Ok(Contraction { graph: StableGraph { genera, edges, legs }, survivors })
    }

    /// Replaces `vertex` by two vertices of genera `genus.0` and `genus.1`
    /// joined by a new edge (appended last). Incidences listed in
    /// `second_side` move to the new vertex (appended last); the rest stay.
    pub fn split_vertex(
        &self,
        vertex: usize,
        genus: (u32, u32),
        second_side: &BTreeSet<Incidence>,
    ) -> Result<StableGraph, GraphError> {
        if vertex >= self.genera.len() {
            return Err(GraphError::NoSuchVertex(vertex));
        }
        let h = self.genera[vertex];
        if genus.0 + genus.1 != h {
            return Err(GraphError::GenusSplitMismatch { genus: h, first: genus.0, second: genus.1 });
        }
        let attached: BTreeSet<Incidence> = self.incidences(vertex).into_iter().collect();
        if let Some(&foreign) = second_side.iter().find(|i| !attached.contains(i)) {
            return Err(GraphError::ForeignIncidence(foreign, vertex));
        }
        let new_vertex = self.genera.len();
        let mut genera = self.genera.clone();
        genera[vertex] = genus.0;
        genera.push(genus.1);
        let mut edges = self.edges.clone();
        for inc in second_side {
            if let Incidence::HalfEdge { edge, end } = *inc {
                let (a, b) = edges[edge];
                edges[edge] = if end == 0 { (new_vertex, b) } else { (a, new_vertex) };
            }
        }
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.push((vertex, new_vertex));
        let mut legs = self.legs.clone();
        for inc in second_side {
            if let Incidence::Leg(label) = *inc {
                legs[label as usize - 1] = new_vertex;
            }
        }
        let graph = StableGraph { genera, edges, legs };
        for v in [vertex, new_vertex] {
            let valence = graph.valence(v);
            if !is_stable_vertex(graph.genera[v], valence) {
                return Err(GraphError::Unstable { vertex: v, genus: graph.genera[v], valence });
            }
        }
        Ok(graph)
    }

    /// Pinches a non-separating curve on `vertex`: its genus drops by one and
    /// a loop is appended.
    pub fn add_nonseparating_node(&self, vertex: usize) -> Result<StableGraph, GraphError> {
        match self.genera.get(vertex) {
            None => Err(GraphError::NoSuchVertex(vertex)),
            Some(0) => Err(GraphError::GenusZero(vertex)),
            Some(_) => {
                let mut graph = self.clone();
                graph.genera[vertex] -= 1;
                graph.edges.push((vertex, vertex));
                Ok(graph)
            }
        }
    }

    /// The same graph with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> StableGraph {
        let mut genera = vec![0; self.genera.len()];
        for (v, &h) in self.genera.iter().enumerate() {
            genera[perm[v]] = h;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        let legs = self.legs.iter().map(|&v| perm[v]).collect();
        StableGraph { genera, edges, legs }
    }

    /// The same graph with its edge list sorted.
    pub fn with_sorted_edges(mut self) -> StableGraph {
        self.edges.sort_unstable();
        self
    }
}

/// `2h - 2 + val > 0`.
pub fn is_stable_vertex(genus: u32, valence: usize) -> bool {
    2 * genus as usize + valence > 2
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Smaller index becomes the root.
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

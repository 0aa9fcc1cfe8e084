//! Canonical forms, isomorphism and automorphism counts for stable graphs.
//!
//! Two stable graphs are isomorphic when a vertex bijection preserves genera,
//! maps the edge multiset onto the edge multiset and fixes every leg label.
//! The canonical form is the lexicographically smallest serialization over
//! all vertex orderings compatible with a refined colouring of the vertices.
//! Colour classes are ordered by (genus, leg labels, degree) and then split by
//! neighbourhood refinement, so only permutations inside a class are tried.

use serde::Serialize;

use crate::stable_graph::StableGraph;

/// Isomorphism-invariant key of a stable graph.
///
/// Layout: `[|V|, genus..., leg vertex..., |E|, a0, b0, a1, b1, ...]`, all
/// after canonical relabeling, with the edge list sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CanonicalForm(Vec<u64>);

impl CanonicalForm {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }

    /// Rebuilds the canonical representative the key was serialized from.
    pub fn to_graph(&self, legs: usize) -> StableGraph {
        let k = &self.0;
        let v = k[0] as usize;
        let genera = k[1..1 + v].iter().map(|&h| h as u32).collect();
        let leg_vertices = k[1 + v..1 + v + legs].iter().map(|&x| x as usize).collect();
        let e = k[1 + v + legs] as usize;
        let edges =
            k[2 + v + legs..2 + v + legs + 2 * e].chunks(2).map(|p| (p[0] as usize, p[1] as usize)).collect();
        StableGraph::from_parts(genera, edges, leg_vertices)
    }
}

/// Outcome of the labelling search.
#[derive(Clone, Debug)]
pub struct Canonized {
    pub form: CanonicalForm,
    /// `graph` relabeled into canonical order, edges sorted.
    pub graph: StableGraph,
    /// Vertex automorphisms fixing all legs (edges not counted).
    pub vertex_automorphisms: u64,
}

/// Canonical key of `graph`.
pub fn canonical_form(graph: &StableGraph) -> CanonicalForm {
    canonize(graph).form
}

pub fn are_isomorphic(a: &StableGraph, b: &StableGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && a.leg_count() == b.leg_count()
        && canonical_form(a) == canonical_form(b)
}

/// Order of the automorphism group acting on vertices and edges, legs fixed.
///
/// Parallel edges (and parallel loops) may be permuted freely, so each
/// class of `m` edges with the same endpoints contributes `m!`.
pub fn automorphism_count(graph: &StableGraph) -> u64 {
    canonize(graph).vertex_automorphisms * parallel_edge_factor(graph)
}

/// [`automorphism_count`] times `2^loops`, also counting the swap of the two
/// half-edges of every loop.
pub fn extended_automorphism_count(graph: &StableGraph) -> u64 {
    automorphism_count(graph) << graph.loop_count()
}

/// Product of `m!` over classes of parallel edges.
pub fn parallel_edge_factor(graph: &StableGraph) -> u64 {
    let mut edges = graph.edges().to_vec();
    edges.sort_unstable();
    edges.chunk_by(|a, b| a == b).map(|run| (1..=run.len() as u64).product::<u64>()).product()
}

/// Runs the labelling search, returning the key, the canonical
/// representative and the vertex automorphism count.
pub fn canonize(graph: &StableGraph) -> Canonized {
    let n = graph.vertex_count();
    let search = run_search(graph, false);
    let (edges, perm) = search.best.expect("at least one labelling exists");
    let ties = search.ties;
    let relabeled = graph.relabel(&perm).with_sorted_edges();
    debug_assert_eq!(relabeled.edges(), &edges[..]);

    let mut key = Vec::with_capacity(2 + n + graph.leg_count() + 2 * edges.len());
    key.push(n as u64);
    key.extend(relabeled.genera().iter().map(|&h| u64::from(h)));
    key.extend(relabeled.leg_vertices().iter().map(|&v| v as u64));
    key.push(edges.len() as u64);
    for &(a, b) in &edges {
        key.push(a as u64);
        key.push(b as u64);
    }
    Canonized { form: CanonicalForm(key), graph: relabeled, vertex_automorphisms: ties }
}

/// Every vertex permutation `sigma` (as `sigma[v]`) preserving genera, legs
/// and the edge multiset. The identity comes first.
pub fn vertex_automorphisms(graph: &StableGraph) -> Vec<Vec<usize>> {
    let n = graph.vertex_count();
    let search = run_search(graph, true);
    let tied = search.tied.expect("requested");
    // Two optimal labellings p, q differ by the automorphism q^-1 . p.
    let mut inverse_first = vec![0; n];
    for (v, &slot) in tied[0].iter().enumerate() {
        inverse_first[slot] = v;
    }
    let mut out: Vec<Vec<usize>> =
        tied.iter().map(|p| (0..n).map(|v| inverse_first[p[v]]).collect()).collect();
    out.sort_by_key(|sigma: &Vec<usize>| sigma.iter().enumerate().any(|(v, &w)| v != w));
    out
}

/// Sorted edge list under a labelling, plus the labelled leg vertices.
type Labelled = (Vec<(usize, usize)>, Vec<usize>);

struct Outcome {
    best: Option<Labelled>,
    ties: u64,
    tied: Option<Vec<Vec<usize>>>,
}

fn run_search(graph: &StableGraph, collect_ties: bool) -> Outcome {
    let n = graph.vertex_count();
    let colours = refined_colours(graph);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (colours[v], v));
    let classes: Vec<Vec<usize>> =
        order.chunk_by(|&a, &b| colours[a] == colours[b]).map(|c| c.to_vec()).collect();
    let mut search = Search {
        graph,
        classes: &classes,
        perm: vec![usize::MAX; n],
        best: None,
        ties: 0,
        tied: collect_ties.then(Vec::new),
    };
    search.descend(0, 0, &mut Vec::new());
    Outcome { best: search.best, ties: search.ties, tied: search.tied }
}

struct Search<'a> {
    graph: &'a StableGraph,
    classes: &'a [Vec<usize>],
    perm: Vec<usize>,
    best: Option<Labelled>,
    ties: u64,
    /// Every labelling attaining `best`, when requested.
    tied: Option<Vec<Vec<usize>>>,
}

impl Search<'_> {
    /// Assigns canonical positions class by class; `base` is the first
    /// position of `class`, `slots` the members of `class` already placed.
    fn descend(&mut self, class: usize, base: usize, slots: &mut Vec<usize>) {
        if class == self.classes.len() {
            self.leaf();
            return;
        }
        let classes = self.classes;
        let members = &classes[class];
        if slots.len() == members.len() {
            let mut next = Vec::with_capacity(self.classes.get(class + 1).map_or(0, Vec::len));
            self.descend(class + 1, base + members.len(), &mut next);
            return;
        }
        for &v in members {
            if self.perm[v] != usize::MAX {
                continue;
            }
            self.perm[v] = base + slots.len();
            slots.push(v);
            self.descend(class, base, slots);
            slots.pop();
            self.perm[v] = usize::MAX;
        }
    }

    fn leaf(&mut self) {
        let mut edges: Vec<(usize, usize)> = self
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.perm[a], self.perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        match &self.best {
            Some((best, _)) if *best < edges => {}
            Some((best, _)) if *best == edges => {
                self.ties += 1;
                if let Some(tied) = &mut self.tied {
                    tied.push(self.perm.clone());
                }
            }
            _ => {
                self.best = Some((edges, self.perm.clone()));
                self.ties = 1;
                if let Some(tied) = &mut self.tied {
                    *tied = vec![self.perm.clone()];
                }
            }
        }
    }
}

/// Isomorphism-invariant vertex colours, numbered so that colour order is
/// itself invariant. Initial colours sort by (genus, legs, degree); each
/// round splits classes by the multiset of (neighbour colour, multiplicity).
fn refined_colours(graph: &StableGraph) -> Vec<usize> {
    let n = graph.vertex_count();
    let initial: Vec<(u32, Vec<u32>, usize, usize)> = (0..n)
        .map(|v| {
            let loops = graph.edges().iter().filter(|&&(a, b)| a == v && b == v).count();
            (graph.genus_of(v), graph.legs_at(v), graph.degree(v), loops)
        })
        .collect();
    let mut colours = rank(&initial);
    let mut classes = count_distinct(&colours);
    loop {
        let signatures: Vec<(usize, Vec<(usize, usize)>)> = (0..n)
            .map(|v| {
                let mut nbrs: Vec<usize> = graph
                    .edges()
                    .iter()
                    .filter_map(|&(a, b)| match (a == v, b == v) {
                        (true, false) => Some(colours[b]),
                        (false, true) => Some(colours[a]),
                        _ => None,
                    })
                    .collect();
                nbrs.sort_unstable();
                let counted = nbrs.chunk_by(|a, b| a == b).map(|run| (run[0], run.len())).collect();
                (colours[v], counted)
            })
            .collect();
        let next = rank(&signatures);
        let next_classes = count_distinct(&next);
        colours = next;
        if next_classes == classes {
            return colours;
        }
        classes = next_classes;
    }
}

fn rank<T: Ord>(items: &[T]) -> Vec<usize> {
    let mut sorted: Vec<&T> = items.iter().collect();
    sorted.sort();
    sorted.dedup();
    items.iter().map(|x| sorted.binary_search(&x).expect("present")).collect()
}

fn count_distinct(colours: &[usize]) -> usize {
    colours.iter().copied().max().map_or(0, |m| m + 1)
}

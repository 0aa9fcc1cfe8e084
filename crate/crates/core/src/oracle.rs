//! Brute-force reference implementations.
//!
//! Nothing here shares code with [`crate::canonical`] or [`crate::enumerate`]:
//! isomorphism is decided by trying every vertex bijection, and stable graphs
//! are generated bottom-up by filtering all decorated multigraphs of bounded
//! size. Exponential by construction; only meant for small types.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::stable_graph::{AmbientType, StableGraph};

/// Key of the orbit of `graph` under all `|V|!` vertex relabelings: the
/// smallest `(genera, leg vertices, sorted edges)` triple.
pub type BruteKey = (Vec<u32>, Vec<usize>, Vec<(usize, usize)>);

fn permuted(graph: &StableGraph, perm: &[usize]) -> BruteKey {
    let n = graph.vertex_count();
    let mut genera = vec![0; n];
    for v in 0..n {
        genera[perm[v]] = graph.genus_of(v);
    }
    let legs = graph.leg_vertices().iter().map(|&v| perm[v]).collect();
    let mut edges: Vec<(usize, usize)> =
        graph.edges().iter().map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b]))).collect();
    edges.sort_unstable();
    (genera, legs, edges)
}

pub fn brute_force_key(graph: &StableGraph) -> BruteKey {
    let n = graph.vertex_count();
    (0..n).permutations(n).map(|perm| permuted(graph, &perm)).min().expect("n! >= 1")
}

pub fn brute_force_isomorphic(a: &StableGraph, b: &StableGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() || a.leg_count() != b.leg_count() {
        return false;
    }
    let target = permuted(b, &(0..n).collect::<Vec<_>>());
    (0..n).permutations(n).any(|perm| permuted(a, &perm) == target)
}

/// Vertex bijections fixing genera, legs and the edge multiset, times the
/// ways of matching parallel edges.
pub fn brute_force_automorphisms(graph: &StableGraph) -> u64 {
    let n = graph.vertex_count();
    let identity = permuted(graph, &(0..n).collect::<Vec<_>>());
    let vertex_maps = (0..n).permutations(n).filter(|perm| permuted(graph, perm) == identity).count() as u64;
    let mut multiplicity: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for &e in graph.edges() {
        *multiplicity.entry(e).or_default() += 1;
    }
    let edge_maps: u64 = multiplicity.values().map(|&m| (1..=m).product::<u64>()).product();
    vertex_maps * edge_maps
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every stable graph of type `ty` up to isomorphism, as `(codim, graph)`
/// sorted by codimension then brute-force key.
///
/// Candidates are all multigraphs on at most `2g - 2 + n` vertices with at
/// most `3g - 3 + n` edges, every genus decoration with the right total and
/// every leg placement; survivors of the connectivity, stability and genus
/// filters are deduplicated by [`brute_force_key`].
pub fn enumerate_bottom_up(ty: AmbientType) -> Vec<(usize, StableGraph)> {
    let g = ty.genus() as i64;
    let n_legs = ty.legs() as usize;
    let mut found: BTreeMap<(usize, BruteKey), StableGraph> = BTreeMap::new();
    for v in 1..=ty.euler_weight() as usize {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        for e in 0..=ty.dimension() as usize {
            let genus_sum = g - e as i64 + v as i64 - 1;
            if genus_sum < 0 || e + 1 < v {
                continue;
            }
            let decorations = compositions(genus_sum as u32, v);
            let leg_maps = placements(n_legs, v);
            for edges in pairs.iter().copied().combinations_with_replacement(e) {
                if !connected(v, &edges) {
                    continue;
                }
                let mut degree = vec![0usize; v];
                for &(a, b) in &edges {
                    degree[a] += 1;
                    degree[b] += 1;
                }
                for genera in &decorations {
                    // Legs each vertex still needs to become stable.
                    let deficit: usize =
                        (0..v).map(|x| 3usize.saturating_sub(2 * genera[x] as usize + degree[x])).sum();
                    if deficit > n_legs {
                        continue;
                    }
                    for legs in &leg_maps {
                        let stable = (0..v).all(|x| {
                            let on_x = legs.iter().filter(|&&l| l == x).count();
                            2 * genera[x] as usize + degree[x] + on_x > 2
                        });
                        if !stable {
                            continue;
                        }
                        let graph = StableGraph::from_parts(genera.clone(), edges.clone(), legs.clone());
                        let key = brute_force_key(&graph);
                        found.entry((e, key)).or_insert(graph);
                    }
                }
            }
        }
    }
    found.into_iter().map(|((e, _), graph)| (e, graph)).collect()
}

/// Every map from `legs` labels to `vertices` vertices, as vertex lists.
fn placements(legs: usize, vertices: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(legs)];
    for _ in 0..legs {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..vertices).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Strata count per codimension from [`enumerate_bottom_up`].
pub fn codim_profile(strata: &[(usize, StableGraph)]) -> Vec<usize> {
    let max = strata.iter().map(|(c, _)| *c).max().unwrap_or(0);
    let mut out = vec![0; max + 1];
    for (c, _) in strata {
        out[*c] += 1;
    }
    out
}

//! The degeneration poset of strata.
//!
//! Nodes are isomorphism classes of stable graphs. `Γ ≤ Γ'` when `Γ'` is a
//! contraction of `Γ`, so the smooth graph is the unique maximum and covers
//! go from codimension `c` to `c - 1`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canonical_form, vertex_automorphisms, CanonicalForm};
use crate::enumerate::{enumerate_strata, EnumerateError, Strata, Stratum};
use crate::stable_graph::{AmbientType, ContractionMove, GraphError, StableGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("class {0:?} is not in the poset")]
    UnknownClass(CanonicalForm),
    #[error("edge {edge} of the contracted graph has no preimage")]
    Identification { edge: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `from` covers-down to `to`: contracting one edge of `from` gives `to`,
/// in `multiplicity` different ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cover {
    pub from: usize,
    pub to: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct StrataPoset {
    pub ty: AmbientType,
    /// Sorted by `(codim, key)`; index 0 is the smooth graph.
    pub nodes: Vec<Stratum>,
    pub covers: Vec<Cover>,
    index: HashMap<CanonicalForm, usize>,
    /// `reach[i][j]`: node `j` is a contraction of node `i`.
    reach: Vec<Vec<bool>>,
}

pub fn build_poset(ty: AmbientType) -> Result<StrataPoset, EnumerateError> {
    Ok(StrataPoset::from_strata(&enumerate_strata(ty)?))
}

impl StrataPoset {
    pub fn from_strata(strata: &Strata) -> Self {
        let nodes: Vec<Stratum> = strata.iter().cloned().collect();
        let index: HashMap<CanonicalForm, usize> =
            nodes.iter().enumerate().map(|(i, s)| (s.key.clone(), i)).collect();
        let covers: Vec<Cover> = nodes
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, s)| {
                let mut targets: BTreeMap<usize, usize> = BTreeMap::new();
                for e in 0..s.graph.edge_count() {
                    let c = s.graph.contract_edge(e).expect("edge exists");
                    let j = index[&canonical_form(&c)];
                    *targets.entry(j).or_default() += 1;
                }
                targets.into_iter().map(move |(to, multiplicity)| Cover { from: i, to, multiplicity })
            })
            .collect();

        let n = nodes.len();
        let mut down: Vec<Vec<usize>> = vec![Vec::new(); n];
        for c in &covers {
            down[c.from].push(c.to);
        }
        // Cover targets have smaller codimension, hence smaller index.
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            reach[i][i] = true;
            for &j in &down[i] {
                debug_assert!(j < i);
                let (head, tail) = reach.split_at_mut(i);
                for (dst, &src) in tail[0].iter_mut().zip(&head[j]) {
                    *dst |= src;
                }
            }
        }
        StrataPoset { ty: strata.ty, nodes, covers, index, reach }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, key: &CanonicalForm) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn codim(&self, node: usize) -> usize {
        self.nodes[node].codim()
    }

    /// `upper` is a contraction of `lower` (reflexive).
    pub fn reaches(&self, lower: usize, upper: usize) -> bool {
        self.reach[lower][upper]
    }

    /// Whether the class `upper` lies in the closure relation above `lower`,
    /// i.e. some edge subset of `lower` contracts onto `upper`.
    pub fn closure_contains(
        &self,
        lower: &CanonicalForm,
        upper: &CanonicalForm,
    ) -> Result<bool, StrataError> {
        let i = self.index_of(lower).ok_or_else(|| StrataError::UnknownClass(lower.clone()))?;
        let j = self.index_of(upper).ok_or_else(|| StrataError::UnknownClass(upper.clone()))?;
        Ok(self.reaches(i, j))
    }

    /// Nodes with nothing below them.
    pub fn minimal_elements(&self) -> Vec<usize> {
        let mut has_cover_from = vec![false; self.len()];
        for c in &self.covers {
            has_cover_from[c.to] = true;
        }
        (0..self.len()).filter(|&i| !has_cover_from[i]).collect()
    }

    /// Nodes with nothing above them.
    pub fn maximal_elements(&self) -> Vec<usize> {
        let mut covers_something = vec![false; self.len()];
        for c in &self.covers {
            covers_something[c.from] = true;
        }
        (0..self.len()).filter(|&i| !covers_something[i]).collect()
    }
}

/// Rank of the free abelian group of Dehn twists about the nodes.
pub fn isotropy_rank(graph: &StableGraph) -> usize {
    graph.edge_count()
}

/// For every class reached by contracting a subset of edges of `graph`,
/// the number of subsets landing on it. Requires fewer than 64 edges.
pub fn contraction_profile(graph: &StableGraph) -> BTreeMap<CanonicalForm, u64> {
    let e = graph.edge_count();
    let mut out = BTreeMap::new();
    for mask in 0u64..(1 << e) {
        let c = graph.contract_set(&ContractionMove::from_mask(mask, e)).expect("edges exist");
        *out.entry(canonical_form(&c)).or_default() += 1;
    }
    out
}

/// Edge subsets `A` of `source` with `source / A ≅ target`.
pub fn count_contraction_subsets(source: &StableGraph, target: &StableGraph) -> u64 {
    contraction_profile(source).get(&canonical_form(target)).copied().unwrap_or(0)
}

/// The automorphism group of `graph` acting on edge indices (legs fixed,
/// parallel edges permuted freely). Its order is
/// [`crate::canonical::automorphism_count`].
pub fn edge_automorphisms(graph: &StableGraph) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, &e) in graph.edges().iter().enumerate() {
        classes.entry(e).or_default().push(i);
    }
    let class_list: Vec<&Vec<usize>> = classes.values().collect();
    let shuffles: Vec<Vec<usize>> = class_list
        .iter()
        .map(|members| (0..members.len()).permutations(members.len()))
        .multi_cartesian_product()
        .map(|choice: Vec<Vec<usize>>| {
            let mut perm = vec![0; graph.edge_count()];
            for (members, order) in class_list.iter().zip(&choice) {
                for (k, &m) in members.iter().enumerate() {
                    perm[m] = members[order[k]];
                }
            }
            perm
        })
        .collect();
    // multi_cartesian_product of zero factors yields nothing.
    let shuffles = if class_list.is_empty() { vec![Vec::new()] } else { shuffles };

    let mut out = Vec::new();
    for sigma in vertex_automorphisms(graph) {
        // Match class (a, b) onto class sigma(a, b) in index order.
        let mut base = vec![0; graph.edge_count()];
        for (&(a, b), members) in &classes {
            let (x, y) = (sigma[a].min(sigma[b]), sigma[a].max(sigma[b]));
            for (&m, &t) in members.iter().zip(&classes[&(x, y)]) {
                base[m] = t;
            }
        }
        for shuffle in &shuffles {
            out.push(shuffle.iter().map(|&s| base[s]).collect());
        }
    }
    out
}

/// Orbits under [`edge_automorphisms`] of the edge subsets counted by
/// [`count_contraction_subsets`].
pub fn count_contraction_orbits(source: &StableGraph, target: &StableGraph) -> u64 {
    let e = source.edge_count();
    let key = canonical_form(target);
    let group = edge_automorphisms(source);
    let mut seen = BTreeSet::new();
    for mask in 0u64..(1 << e) {
        let c = source.contract_set(&ContractionMove::from_mask(mask, e)).expect("edges exist");
        if canonical_form(&c) != key {
            continue;
        }
        let smallest = group
            .iter()
            .map(|perm| (0..e).filter(|&i| mask >> i & 1 == 1).map(|i| 1u64 << perm[i]).sum::<u64>())
            .min()
            .expect("identity");
        seen.insert(smallest);
    }
    seen.len() as u64
}

/// Pulls `second` (edges of `graph / first`) back to `graph` and joins it
/// with `first`.
pub fn compose_contractions(
    graph: &StableGraph,
    first: &ContractionMove,
    second: &ContractionMove,
) -> Result<ContractionMove, StrataError> {
    let tracked = graph.contract_tracked(first)?;
    let mut out: BTreeSet<usize> = first.edges().collect();
    for edge in second.edges() {
        let source = tracked.preimage(edge).ok_or(StrataError::Identification { edge })?;
        out.insert(source);
    }
    Ok(out.into_iter().collect())
}

//! Top-down enumeration of the stable graphs of a type.
//!
//! Starting from the smooth graph, every admissible one-node degeneration is
//! applied level by level. Each level is deduplicated by canonical form, so
//! level `c` holds exactly the strata of codimension `c`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{canonize, CanonicalForm};
use crate::stable_graph::{AmbientType, GraphError, Incidence, StableGraph};

/// Largest `3g - 3 + n` enumerated without an explicit override.
pub const MAX_DIMENSION: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(
        "type {ty} has 3g - 3 + n = {dimension} > {MAX_DIMENSION}; \
         enumeration is exponential in boundary depth (pass --force to override)"
    )]
    TooDeep { ty: AmbientType, dimension: u32 },
}

/// One isomorphism class: its key and canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub key: CanonicalForm,
    #[serde(skip)]
    pub graph: StableGraph,
}

impl Stratum {
    pub fn from_graph(graph: &StableGraph) -> Self {
        let c = canonize(graph);
        Stratum { key: c.form, graph: c.graph }
    }

    pub fn codim(&self) -> usize {
        self.graph.edge_count()
    }
}

/// All strata of a type, grouped by codimension and sorted by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strata {
    pub ty: AmbientType,
    pub by_codim: Vec<Vec<Stratum>>,
}

impl Strata {
    pub fn len(&self) -> usize {
        self.by_codim.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Strata in `(codim, key)` order.
    pub fn iter(&self) -> impl Iterator<Item = &Stratum> {
        self.by_codim.iter().flatten()
    }

    pub fn profile(&self) -> Vec<usize> {
        self.by_codim.iter().map(Vec::len).collect()
    }
}

/// Isomorphism classes one node deeper than `graph`, sorted by key.
///
/// Moves: every admissible [`StableGraph::split_vertex`] and every
/// [`StableGraph::add_nonseparating_node`].
pub fn one_step_degenerations(graph: &StableGraph) -> Vec<Stratum> {
    let mut out: BTreeMap<CanonicalForm, StableGraph> = BTreeMap::new();
    let mut insert = |g: StableGraph| {
        let c = canonize(&g);
        out.entry(c.form).or_insert(c.graph);
    };
    for v in 0..graph.vertex_count() {
        if let Ok(g) = graph.add_nonseparating_node(v) {
            insert(g);
        }
        let h = graph.genus_of(v);
        let incidences = graph.incidences(v);
        let k = incidences.len();
        for h1 in 0..=h / 2 {
            let h2 = h - h1;
            for mask in 0u64..(1 << k) {
                // Sides are unordered: with equal genera, incidence 0 stays on the first side.
                if h1 == h2 && k > 0 && mask & 1 == 1 {
                    continue;
                }
                let second: BTreeSet<Incidence> = incidences
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &inc)| inc)
                    .collect();
                if let Ok(g) = graph.split_vertex(v, (h1, h2), &second) {
                    insert(g);
                }
            }
        }
    }
    out.into_iter().map(|(key, graph)| Stratum { key, graph }).collect()
}

/// Strata of `ty`, refusing types deeper than [`MAX_DIMENSION`].
pub fn enumerate_strata(ty: AmbientType) -> Result<Strata, EnumerateError> {
    if ty.dimension() > MAX_DIMENSION {
        return Err(EnumerateError::TooDeep { ty, dimension: ty.dimension() });
    }
    Ok(enumerate_strata_unbounded(ty))
}

/// Strata of `ty` without the depth guard.
pub fn enumerate_strata_unbounded(ty: AmbientType) -> Strata {
    let mut by_codim = vec![vec![Stratum::from_graph(&StableGraph::smooth(ty))]];
    loop {
        let frontier = by_codim.last().expect("nonempty");
        let children: Vec<Vec<Stratum>> =
            frontier.par_iter().map(|s| one_step_degenerations(&s.graph)).collect();
        let mut next: BTreeMap<CanonicalForm, StableGraph> = BTreeMap::new();
        for s in children.into_iter().flatten() {
            next.entry(s.key).or_insert(s.graph);
        }
        if next.is_empty() {
            break;
        }
        by_codim.push(next.into_iter().map(|(key, graph)| Stratum { key, graph }).collect());
    }
    Strata { ty, by_codim }
}

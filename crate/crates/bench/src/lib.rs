//! Fixtures shared by the criterion benches.

use strata_core::{enumerate_strata, AmbientType, IntMatrix, OrderComplex, StableGraph, StrataPoset};

pub fn ambient(g: u32, n: u32) -> AmbientType {
    AmbientType::new(g, n).expect("stable type")
}

/// Canonical representatives of every stratum of type `(g, n)`, each
/// relabelled by reversing its vertices so canonization has work to do.
pub fn shuffled_graphs(g: u32, n: u32) -> Vec<StableGraph> {
    enumerate_strata(ambient(g, n))
        .expect("within guard rail")
        .iter()
        .map(|s| {
            let reversed: Vec<usize> = (0..s.graph.vertex_count()).rev().collect();
            s.graph.relabel(&reversed)
        })
        .collect()
}

/// The largest boundary matrix of the order complex of the poset of `(g, n)`.
pub fn largest_boundary(g: u32, n: u32) -> IntMatrix {
    let poset = StrataPoset::from_strata(&enumerate_strata(ambient(g, n)).expect("within guard rail"));
    let chains = OrderComplex::of_poset(&poset).boundary_matrices();
    (1..)
        .map_while(|k| chains.boundary(k).cloned())
        .max_by_key(|m| m.rows() * m.cols())
        .expect("poset has a chain of length one")
}

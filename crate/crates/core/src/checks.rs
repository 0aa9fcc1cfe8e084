//! Invariant suites run by `strata check`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::canonical::canonical_form;
use crate::enumerate::{enumerate_strata, EnumerateError, Strata};
use crate::fn_coords::chart_dims;
use crate::io::{parse_graph, serialize_graph};
use crate::nerve::{betti_euler_characteristic, is_acyclic, OrderComplex};
use crate::stable_graph::AmbientType;
use crate::strata::{contraction_profile, isotropy_rank, StrataPoset};

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub genus: u32,
    pub legs: u32,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

fn item(name: &'static str, failures: Vec<String>, checked: usize) -> CheckItem {
    let passed = failures.is_empty();
    let detail = if passed {
        format!("{checked} checked")
    } else {
        let shown: Vec<String> = failures.iter().take(3).cloned().collect();
        format!("{} of {checked} failed: {}", failures.len(), shown.join("; "))
    };
    CheckItem { name, passed, detail }
}

/// Every invariant suite for type `ty`.
pub fn run_checks(ty: AmbientType) -> Result<CheckReport, EnumerateError> {
    Ok(check_strata(&enumerate_strata(ty)?))
}

/// Every invariant suite over an already enumerated type.
pub fn check_strata(strata: &Strata) -> CheckReport {
    let ty = strata.ty;
    let poset = StrataPoset::from_strata(strata);
    let items = vec![
        graphs_are_valid(strata),
        canonical_keys(strata),
        codimension_grading(strata, &poset),
        closed_under_contraction(strata),
        dimension_identities(strata),
        subset_counts(strata),
        poset_shape(&poset),
        nerve_contractible(&poset),
        boundary_nerve_consistent(&poset),
        io_round_trip(strata),
    ];
    CheckReport { genus: ty.genus(), legs: ty.legs(), items }
}

fn graphs_are_valid(strata: &Strata) -> CheckItem {
    let ty = strata.ty;
    let mut failures = Vec::new();
    for s in strata.iter() {
        let g = &s.graph;
        let violations = g.validate();
        if !violations.is_empty() {
            failures.push(format!("{:?}: {violations:?}", s.key));
        } else if g.total_genus() != Ok(ty.genus()) || g.leg_count() != ty.legs() as usize {
            failures.push(format!("{:?}: wrong type", s.key));
        } else if ty.genus() == 0
            && (g.edge_count() + 1 != g.vertex_count() || g.genera().iter().any(|&h| h != 0))
        {
            failures.push(format!("{:?}: genus-0 graph is not a tree", s.key));
        }
    }
    item("stable graphs of the right type", failures, strata.len())
}

fn canonical_keys(strata: &Strata) -> CheckItem {
    let mut failures = Vec::new();
    for s in strata.iter() {
        let n = s.graph.vertex_count();
        let reversed: Vec<usize> = (0..n).rev().collect();
        if canonical_form(&s.graph) != s.key || canonical_form(&s.graph.relabel(&reversed)) != s.key {
            failures.push(format!("{:?}", s.key));
        }
    }
    item("canonical keys are relabeling invariant", failures, strata.len())
}

fn codimension_grading(strata: &Strata, poset: &StrataPoset) -> CheckItem {
    let mut failures = Vec::new();
    for (c, layer) in strata.by_codim.iter().enumerate() {
        for s in layer {
            if s.codim() != c || isotropy_rank(&s.graph) != c {
                failures.push(format!("{:?} listed at codim {c}", s.key));
            }
        }
    }
    if strata.by_codim.len() != strata.ty.dimension() as usize + 1 {
        failures.push(format!("deepest codim {} != 3g-3+n", strata.by_codim.len() - 1));
    }
    for cover in &poset.covers {
        if poset.codim(cover.from) != poset.codim(cover.to) + 1 {
            failures.push(format!("cover {} -> {}", cover.from, cover.to));
        }
    }
    item("codim = nodes = isotropy rank", failures, strata.len() + poset.covers.len())
}

fn closed_under_contraction(strata: &Strata) -> CheckItem {
    let keys: BTreeSet<_> = strata.iter().map(|s| s.key.clone()).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for s in strata.iter() {
        for e in 0..s.graph.edge_count() {
            checked += 1;
            let c = s.graph.contract_edge(e).expect("edge exists");
            if !c.is_valid() || c.total_genus() != s.graph.total_genus() {
                failures.push(format!("{:?} edge {e}: contraction invalid", s.key));
            } else if !keys.contains(&canonical_form(&c)) {
                failures.push(format!("{:?} edge {e}: contraction not enumerated", s.key));
            }
        }
    }
    item("closed under edge contraction", failures, checked)
}

fn dimension_identities(strata: &Strata) -> CheckItem {
    let mut failures = Vec::new();
    for s in strata.iter() {
        match chart_dims(&s.graph, strata.ty) {
            Ok(d) => {
                let broken = d.failures(strata.ty);
                if !broken.is_empty() {
                    failures.push(format!("{:?}: {broken:?}", s.key));
                }
            }
            Err(e) => failures.push(format!("{:?}: {e}", s.key)),
        }
    }
    item("Fenchel-Nielsen dimension identities", failures, strata.len())
}

fn subset_counts(strata: &Strata) -> CheckItem {
    let mut failures = Vec::new();
    for s in strata.iter() {
        let total: u64 = contraction_profile(&s.graph).values().sum();
        if total != 1 << s.graph.edge_count() {
            failures.push(format!("{:?}: {total}", s.key));
        }
    }
    item("contraction subsets sum to 2^|E|", failures, strata.len())
}

fn poset_shape(poset: &StrataPoset) -> CheckItem {
    let mut failures = Vec::new();
    if poset.maximal_elements() != vec![0] || poset.codim(0) != 0 {
        failures.push("smooth graph is not the unique maximum".to_string());
    }
    for i in 0..poset.len() {
        for j in 0..poset.len() {
            if i != j && poset.reaches(i, j) && poset.reaches(j, i) {
                failures.push(format!("{i} and {j} reach each other"));
            }
        }
    }
    item("partial order with unique maximum", failures, poset.len())
}

fn nerve_contractible(poset: &StrataPoset) -> CheckItem {
    let x = OrderComplex::of_poset(poset);
    let chains = x.boundary_matrices();
    let h = chains.homology();
    let mut failures = Vec::new();
    if !chains.squares_to_zero() {
        failures.push("boundary of boundary is nonzero".to_string());
    }
    if !is_acyclic(&h) {
        failures.push(format!("homology {h:?}"));
    }
    if x.euler_characteristic() != betti_euler_characteristic(&h) {
        failures.push("Euler characteristics disagree".to_string());
    }
    item("order complex has the homology of a point", failures, x.counts().iter().sum())
}

fn boundary_nerve_consistent(poset: &StrataPoset) -> CheckItem {
    let x = OrderComplex::of_boundary(poset);
    let chains = x.boundary_matrices();
    let h = chains.homology();
    let mut failures = Vec::new();
    if !chains.squares_to_zero() {
        failures.push("boundary of boundary is nonzero".to_string());
    }
    if x.euler_characteristic() != betti_euler_characteristic(&h) {
        failures.push("Euler characteristics disagree".to_string());
    }
    item("boundary order complex is a chain complex", failures, x.counts().iter().sum())
}

fn io_round_trip(strata: &Strata) -> CheckItem {
    let mut failures = Vec::new();
    for s in strata.iter() {
        match parse_graph(&serialize_graph(&s.graph)) {
            Ok(g) if canonical_form(&g) == s.key => {}
            Ok(_) => failures.push(format!("{:?}: class changed", s.key)),
            Err(e) => failures.push(format!("{:?}: {e}", s.key)),
        }
    }
    item("JSON round trip", failures, strata.len())
}

//! Fenchel–Nielsen dimension bookkeeping per stratum.
//!
//! On a stable nodal surface with node set `N`, a complete cut system `C`
//! cuts the smooth part into pairs of pants. Each curve of `C` carries a
//! length and a twist (one factor of the upper half plane), each node a
//! complex plumbing coordinate. A component of genus `h` with `k` special
//! points needs `3h - 3 + k` cut curves and splits into `2h - 2 + k` pants.

use serde::Serialize;

use crate::enumerate::{enumerate_strata, EnumerateError, Strata};
use crate::stable_graph::{AmbientType, GraphError, StableGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChartDims {
    pub cut_system_size: u32,
    pub node_count: u32,
    pub pants_count: u32,
    pub stratum_dim_complex: i64,
    pub chart_dim_real: i64,
}

/// Which of the four identities a [`ChartDims`] row breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionIdentity {
    CutsPlusNodes,
    ChartDimension,
    PantsCount,
    StratumDimension,
}

impl ChartDims {
    /// Identities that fail for type `ty`.
    pub fn failures(&self, ty: AmbientType) -> Vec<DimensionIdentity> {
        let dim = i64::from(ty.dimension());
        let mut out = Vec::new();
        if i64::from(self.cut_system_size + self.node_count) != dim {
            out.push(DimensionIdentity::CutsPlusNodes);
        }
        if self.chart_dim_real != 2 * dim {
            out.push(DimensionIdentity::ChartDimension);
        }
        if self.pants_count != ty.euler_weight() {
            out.push(DimensionIdentity::PantsCount);
        }
        if self.stratum_dim_complex != dim - i64::from(self.node_count) {
            out.push(DimensionIdentity::StratumDimension);
        }
        out
    }
}

/// Per-vertex counts summed over `graph`, which must be a valid stable graph
/// of type `ty`.
pub fn chart_dims(graph: &StableGraph, ty: AmbientType) -> Result<ChartDims, GraphError> {
    let violations = graph.validate();
    if !violations.is_empty() {
        return Err(GraphError::Invalid(violations));
    }
    let found = graph.ambient_type()?;
    if found != ty {
        return Err(GraphError::TypeMismatch { expected: ty, found });
    }
    let mut cuts = 0i64;
    let mut pants = 0i64;
    for v in 0..graph.vertex_count() {
        let h = i64::from(graph.genus_of(v));
        let k = graph.valence(v) as i64;
        cuts += 3 * h - 3 + k;
        pants += 2 * h - 2 + k;
    }
    let node_count = graph.edge_count() as u32;
    // Each cut curve contributes a length and a twist; each node a complex
    // coordinate. Both are real dimension 2.
    let chart_dim_real = 2 * cuts + 2 * i64::from(node_count);
    Ok(ChartDims {
        cut_system_size: cuts as u32,
        node_count,
        pants_count: pants as u32,
        stratum_dim_complex: cuts,
        chart_dim_real,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsRow {
    pub codim: usize,
    pub key: crate::canonical::CanonicalForm,
    #[serde(flatten)]
    pub dims: ChartDims,
    pub failures: Vec<DimensionIdentity>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsReport {
    pub genus: u32,
    pub legs: u32,
    pub rows: Vec<DimsRow>,
}

impl DimsReport {
    pub fn failure_count(&self) -> usize {
        self.rows.iter().map(|r| r.failures.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.failure_count() == 0
    }
}

/// [`chart_dims`] and its identities for every stratum of `ty`.
pub fn verify_dimension_identities(ty: AmbientType) -> Result<DimsReport, EnumerateError> {
    Ok(dimension_report(&enumerate_strata(ty)?)?)
}

pub fn dimension_report(strata: &Strata) -> Result<DimsReport, GraphError> {
    let ty = strata.ty;
    let rows = strata
        .iter()
        .map(|s| {
            let dims = chart_dims(&s.graph, ty)?;
            Ok(DimsRow { codim: s.codim(), key: s.key.clone(), failures: dims.failures(ty), dims })
        })
        .collect::<Result<Vec<_>, GraphError>>()?;
    Ok(DimsReport { genus: ty.genus(), legs: ty.legs(), rows })
}

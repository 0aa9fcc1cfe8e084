//! Combinatorics of the boundary stratification of the moduli space of
//! stable curves.
//!
//! The crate enumerates the stable dual graphs of a type `(g, n)`, arranges
//! them into the degeneration poset, checks the Fenchel–Nielsen dimension
//! bookkeeping of every stratum and computes the integral homology of the
//! poset's order complex through Smith normal form.
//!
//! ```
//! use strata_core::{enumerate_strata, AmbientType};
//!
//! let strata = enumerate_strata(AmbientType::new(2, 0).unwrap()).unwrap();
//! assert_eq!(strata.profile(), vec![1, 2, 2, 2]);
//! ```

pub mod canonical;
pub mod checks;
pub mod enumerate;
pub mod fn_coords;
pub mod io;
pub mod nerve;
pub mod oracle;
pub mod smith;
pub mod stable_graph;
pub mod strata;

pub use canonical::{
    are_isomorphic, automorphism_count, canonical_form, extended_automorphism_count, CanonicalForm,
};
pub use enumerate::{enumerate_strata, one_step_degenerations, EnumerateError, Strata, Stratum};
pub use fn_coords::{chart_dims, dimension_report, verify_dimension_identities, ChartDims};
pub use nerve::{ChainComplex, Homology, OrderComplex};
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
pub use stable_graph::{AmbientType, ContractionMove, GraphError, Incidence, StableGraph, Violation};
pub use strata::{build_poset, StrataPoset};

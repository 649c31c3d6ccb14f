//! Stationary points of the constrained potential: closed forms at zero
//! coupling, the transition graph, and continuation to positive coupling.

pub mod continuation;
pub mod graph;
pub mod horseshoe;
pub mod points;
pub mod triples;

pub use continuation::{
    continue_to_gamma, continue_with, sigma_brackets, ContinuationOptions, ContinuationReport,
};
pub use graph::{build_transition_graph, GraphMode, TransitionGraph};
pub use horseshoe::{check_domain, horseshoe_map, horseshoe_map_inverse, HorseshoeDomain};
pub use points::{connect_saddle, SaddleEndpoints, StationaryPoint};
pub use triples::{
    alpha_from_triple, enumerate_triples, family_cardinality, AlphaRoots, Family, FamilyKind,
    Triple,
};

//! Eyring-Kramers times, Hessian closed forms, symmetry bookkeeping and the
//! spectral gap.

pub mod gap;
pub mod hessian;
pub mod kramers;
pub mod symmetry;

pub use gap::{reduced_block, spectral_gap, two_orbit_chain, GapReport, IrrepGap, ReducedBlock};
pub use hessian::{hessian_closed_forms, HessianClosedForms};
pub use kramers::{kramers_time, rate_table, symmetric_transition_time, RateEstimate};
pub use symmetry::{active_orbits, irreps, ActiveOrbits, GroupElement, IrrepSpec};

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::should_implement_trait)]

pub mod error;
pub mod intpoly;

pub use error::{Error, Result};
pub use intpoly::{resultant, AlgebraicInvariant, IntPolynomial, InvariantKind, SquarefreeFactor};
pub mod roots;
pub use roots::{find_roots, root_bound, DiskCount, RootEntry, RootSet};
pub mod measure;
pub use measure::{delta_of, AtomicMeasure, Atom, EnergyMode, ExtendedReal, Functional, FunctionalValue};
pub mod potential;
pub use potential::{CapacityEstimate, CapacityMethod, CompactSetSpec, Shape};
pub mod transport;
pub use transport::{kr_dual_bound, w1_distance, TransportPlan};
pub mod families;
pub use families::{
    enumerate_complete_sets, family_member, ramsay_gap_experiment, regularity_chain_check, run_convergence,
    FamilyKind, FamilySpec, IndexRange, RegularityReport,
};

pub mod artin;
pub mod group;
pub mod intmat;
pub mod lattice;
pub mod ramification;

pub use artin::{
    additivity_from_formula, artin_conductor, isogeny_invariance_check, torus_conductor_formula, IsogenyCheck,
};
pub use group::FiniteGroup;
pub use intmat::IntMatrix;
pub use lattice::{GLattice, LatticeSequence, SaturatedSublattice};
pub use ramification::{ramification_filtration_from_extension, FiltrationWitness, RamificationData};

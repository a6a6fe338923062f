pub mod conductor;
pub mod report;

pub use conductor::{
    additivity_defect, conductor_from_resolution, conductor_induced_artin, conductor_induced_discriminant,
    conductor_induced_liecoker, gamma_defect, ResolutionLattice, ResolutionSpec,
};
pub use report::{ratio_string, ConductorReport, Method, Witness};

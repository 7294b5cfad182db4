//! Numerical checks of the structure identities satisfied by solutions.

mod energy;
mod exact;
mod interaction;
mod khm;
mod kinetic;
mod report;

pub use energy::{energy_balance_residual, EnergyReport};
pub use interaction::{interaction_identity_residual, InteractionFields};
pub use khm::{
    conservation_flux_term, conservation_khm_residual, integrated_terms, khm_integrated_residual,
    khm_modified_residual, khm_pointwise_residual, khm_signed_residual, Flux, IntegratedOptions, IntegratedTerms,
    KhmOptions,
};
pub use kinetic::{
    cube_identity, kinetic_profile, kinetic_residual, kinetic_trajectory, lower_wedge_integral, q_decomposition,
    q_lattice, trajectory_range, KineticProfile, KineticTrajectory, QDecomposition, VGrid,
};
pub use report::{IdentityReport, Resolution};

//! Time integration of the Kuramoto-Sivashinsky and Burgers-family equations.

mod equation;
mod initial;
mod manufactured;
mod stepper;
mod viscosity;

pub use equation::{linear_symbol, EquationKind, EquationSpec, Forcing};
pub use initial::random_initial;
pub use manufactured::{
    effective_forcing, manufactured_equation, manufactured_forcing, sample_manufactured,
    FnSolution, ManufacturedSolution, StandingWave,
};
pub use stepper::{
    dealias_cutoff, integrate, ResolutionDiagnostics, RunResult, Scheme, StepperConfig,
    BLOWUP_THRESHOLD, MAX_STIFFNESS,
};
pub use viscosity::vanishing_viscosity_run;

//! Besov norms of trajectories: Littlewood-Paley and finite-difference
//! estimators, and checks of the inequalities relating them.

mod checks;
mod duality;
mod engine;
mod fd;
mod hgrid;
mod inequalities;
mod lp;
mod params;
mod split;

pub use checks::{
    abs_increment_ratio, derivative_transfer_check, interpolation_check, InterpolationReport, TransferReport,
};
pub use duality::{duality_bound_check, duality_pairing, DualityBound, DualityPairing};
pub use engine::{Moment, StructureEngine};
pub use fd::{besov_norm_fd, besov_norms_fd, rescale_factor, rescaled_norm, stationarity, Method, Stationarity};
pub use hgrid::{HGrid, DEFAULT_PERIODS, DEFAULT_PER_DECADE};
pub use inequalities::{agmon_check, sobolev_check, Inequality};
pub use lp::{band_profile, besov_norm_lp, lp_decompose, LPFamily};
pub use params::{BesovParams, NormEstimate, TAIL_FLAG_THRESHOLD};
pub use split::{three_scale_split, ThreeScale};

use super::equation::EquationSpec;
use super::stepper::{integrate, RunResult, StepperConfig};
use crate::error::{config, Result};
use crate::spectral::RealField;
use crate::Scalar;

/// Integrates `∂t u + u∂x u = ε∂x²u` from `u0` for each `ε`, in the given
/// (strictly decreasing) order.
///
/// Viscosities below `4·dx·max|u0|` would leave the viscous layer unresolved
/// on the grid and are rejected.
pub fn vanishing_viscosity_run<T: Scalar>(
    u0: &RealField<T>,
    eps_list: &[T],
    cfg: &StepperConfig<T>,
    t_end: T,
) -> Result<Vec<(T, RunResult<T>)>> {
    if eps_list.is_empty() {
        return Err(config("empty viscosity list"));
    }
    let floor = T::lit(4.0) * u0.grid().dx() * u0.max_abs();
    for (i, &eps) in eps_list.iter().enumerate() {
        if !(eps > T::zero()) {
            return Err(config(format!("viscosity must be > 0, got {eps}")));
        }
        if i > 0 && !(eps < eps_list[i - 1]) {
            return Err(config("viscosities must be strictly decreasing"));
        }
        if eps < floor {
            return Err(config(format!(
                "viscosity {eps} under-resolved: need ≥ 4·dx·max|u0| = {floor}"
            )));
        }
    }
    eps_list
        .iter()
        .map(|&eps| {
            let spec = EquationSpec::forced_burgers(eps, None, None)?;
            Ok((eps, integrate(&spec, u0, cfg, t_end)?))
        })
        .collect()
}

use super::report::{IdentityReport, Resolution};
use crate::evolution::RunResult;
use crate::sum::NeumaierSum;
use crate::Scalar;

/// Energy balance of a KS run with the constants of the two energy estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub report: IdentityReport,
    /// Relative residual at each interior frame (frames `1..len−1`).
    pub per_frame: Vec<f64>,
    /// `max E(t+s)/E(t)` over `s ∈ (0, 1]`, if the run spans a unit window.
    pub c1: Option<f64>,
    /// `max [∫_t^{t+1}∫u_xx² + sup_{[t,t+1]} E] / E(t)`, if the run spans a unit window.
    pub c2: Option<f64>,
}

/// `d/dt ∫u² = 2∫u_x² − 2∫u_xx²` at every interior frame, with the time
/// derivative from centered differences of the energy series and the right
/// side by Parseval.
pub fn energy_balance_residual<T: Scalar>(run: &RunResult<T>) -> EnergyReport {
    let traj = &run.trajectory;
    let dt = traj.dt_rec().as_f64();
    let l = traj.grid().length().as_f64();
    let energy: Vec<f64> = run.energy_series.iter().map(|e| e.as_f64()).collect();
    let (grad, curv): (Vec<f64>, Vec<f64>) = traj
        .frames()
        .iter()
        .map(|f| {
            let s = f.spectrum();
            let (mut a, mut b) = (NeumaierSum::new(), NeumaierSum::new());
            for (i, c) in s.modes().iter().enumerate() {
                let xi2 = s.grid().wavenumber(i).as_f64().powi(2);
                let p = c.norm_sqr().as_f64();
                a.add(xi2 * p);
                b.add(xi2 * xi2 * p);
            }
            (l * a.value(), l * b.value())
        })
        .unzip();

    let n = energy.len();
    let mut per_frame = Vec::with_capacity(n.saturating_sub(2));
    let (mut worst_abs, mut worst_rel) = (0.0f64, 0.0f64);
    let (mut lmax, mut gmax, mut cmax) = (0.0f64, 0.0f64, 0.0f64);
    for i in 1..n.saturating_sub(1) {
        let lhs = (energy[i + 1] - energy[i - 1]) / (2.0 * dt);
        let rhs = 2.0 * grad[i] - 2.0 * curv[i];
        let scale = lhs.abs().max(2.0 * grad[i]).max(2.0 * curv[i]);
        let d = (lhs - rhs).abs();
        let rel = if scale > 0.0 { d / scale } else { d };
        per_frame.push(rel);
        worst_abs = worst_abs.max(d);
        worst_rel = worst_rel.max(rel);
        lmax = lmax.max(lhs.abs());
        gmax = gmax.max(2.0 * grad[i]);
        cmax = cmax.max(2.0 * curv[i]);
    }
    let mut report = IdentityReport::new(
        "energy",
        vec![("dE/dt", lmax), ("2|u_x|^2", gmax), ("2|u_xx|^2", cmax)],
        worst_abs,
        Resolution {
            n: traj.grid().n(),
            dt: Some(dt),
            ..Default::default()
        },
    );
    report.residual_rel = worst_rel;

    let w = (1.0 / dt).round() as usize;
    let (c1, c2) = window_constants(&energy, &curv, dt, w);
    EnergyReport {
        report,
        per_frame,
        c1,
        c2,
    }
}

fn window_constants(energy: &[f64], curv: &[f64], dt: f64, w: usize) -> (Option<f64>, Option<f64>) {
    if w == 0 || energy.len() <= w {
        return (None, None);
    }
    let (mut c1, mut c2) = (None::<f64>, None::<f64>);
    for i in 0..energy.len() - w {
        let e0 = energy[i];
        if !(e0 > 0.0) {
            continue;
        }
        let window = &energy[i..=i + w];
        let sup = window.iter().cloned().fold(0.0f64, f64::max);
        let r1 = window[1..].iter().cloned().fold(0.0f64, f64::max) / e0;
        let tw = crate::special::trapezoid_weights(w + 1, dt);
        let dissipated: f64 = curv[i..=i + w].iter().zip(&tw).map(|(c, w)| c * w).sum();
        let r2 = (dissipated + sup) / e0;
        c1 = Some(c1.map_or(r1, |c| c.max(r1)));
        c2 = Some(c2.map_or(r2, |c| c.max(r2)));
    }
    (c1, c2)
}

//! Identity and inequality suites at fixed standard resolutions.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ksbesov_core::besov::{
    agmon_check, besov_norm_fd, besov_norm_lp, duality_bound_check, duality_pairing, interpolation_check,
    sobolev_check, three_scale_split, BesovParams, HGrid, LPFamily,
};
use ksbesov_core::evolution::{
    dealias_cutoff, integrate, random_initial, sample_manufactured, EquationSpec, StandingWave, StepperConfig,
};
use ksbesov_core::identities::{
    conservation_khm_residual, cube_identity, energy_balance_residual, integrated_terms, interaction_identity_residual,
    khm_integrated_residual, khm_modified_residual, khm_pointwise_residual, khm_signed_residual, kinetic_residual,
    kinetic_trajectory, q_lattice, trajectory_range, Flux, InteractionFields, IntegratedOptions, KhmOptions,
    QDecomposition,
};
use ksbesov_core::{Field64, Grid64, Trajectory64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Khm,
    KhmInt,
    Interaction,
    Kinetic,
    QDecomp,
    Energy,
    Duality,
    Interpolation,
    ThreeScale,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Khm,
        Suite::KhmInt,
        Suite::Interaction,
        Suite::Kinetic,
        Suite::QDecomp,
        Suite::Energy,
        Suite::Duality,
        Suite::Interpolation,
        Suite::ThreeScale,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Khm => "khm",
            Suite::KhmInt => "khm-int",
            Suite::Interaction => "interaction",
            Suite::Kinetic => "kinetic",
            Suite::QDecomp => "q-decomp",
            Suite::Energy => "energy",
            Suite::Duality => "duality",
            Suite::Interpolation => "interpolation",
            Suite::ThreeScale => "three-scale",
        }
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Overrides for the standard resolutions.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Grid size of the energy run (default 1024).
    pub n: Option<usize>,
    /// 2/3-rule dealiasing in the energy run.
    pub dealias: bool,
    /// `range/Δv` pair of the Q-decomposition refinement.
    pub dv_divisions: (f64, f64),
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n: None,
            dealias: true,
            dv_divisions: (256.0, 512.0),
        }
    }
}

/// One measured quantity against its limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    /// `value ≤ limit` when set, `value ≥ limit` otherwise.
    pub upper: bool,
    pub note: String,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            upper: true,
            note: String::new(),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            upper: false,
            ..Self::at_most(name, value, limit)
        }
    }

    /// A measured value with no limit.
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self::at_most(name, value, f64::INFINITY).with_note("measured")
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        if self.upper {
            self.value <= self.limit
        } else {
            self.value >= self.limit
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["suite", "check", "value", "limit", "kind", "passed", "note"])?;
        for c in &self.checks {
            w.write_record([
                self.suite.name().to_string(),
                c.name.clone(),
                format!("{}", c.value),
                format!("{}", c.limit),
                if c.upper { "max" } else { "min" }.to_string(),
                c.passed().to_string(),
                c.note.clone(),
            ])?;
        }
        w.flush().map_err(crate::error::io_err("<csv>"))?;
        Ok(())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let op = if c.upper { "<=" } else { ">=" };
            let status = if c.passed() { "ok  " } else { "FAIL" };
            write!(f, "[{status}] {}: {:.4e} {op} {:.4e}", c.name, c.value, c.limit)?;
            if !c.note.is_empty() {
                write!(f, " ({})", c.note)?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{}: {}",
            self.suite,
            if self.passed() { "all checks passed" } else { "FAILED" }
        )
    }
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Khm => khm()?,
        Suite::KhmInt => khm_int()?,
        Suite::Interaction => interaction()?,
        Suite::Kinetic => kinetic()?,
        Suite::QDecomp => q_decomp(opts.dv_divisions)?,
        Suite::Energy => energy(opts)?,
        Suite::Duality => duality()?,
        Suite::Interpolation => interpolation()?,
        Suite::ThreeScale => three_scale()?,
    };
    Ok(SuiteReport { suite, checks })
}

/// Length of the manufactured-solution domain.
const LM: f64 = 10.0;

/// `u* = 0.1 sin(2πx/L) cos t` with its Burgers forcing on `[0, t_end]`.
pub fn standing_wave(n: usize, dt: f64, t_end: f64) -> Result<(Trajectory64, Trajectory64)> {
    let g = Grid64::new(LM, n)?;
    let spec = EquationSpec::forced_burgers(0.0, None, None)?;
    let frames = (t_end / dt).round() as usize + 1;
    Ok(sample_manufactured(
        Arc::new(StandingWave::default_on(LM)),
        &spec,
        &g,
        0.0,
        dt,
        frames,
    )?)
}

fn khm() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (u, eta) = standing_wave(256, 1e-3, 0.25)?;
    let (u2, eta2) = standing_wave(256, 5e-4, 0.25)?;
    let opts = KhmOptions::for_length(LM);
    let fine = KhmOptions {
        dh: opts.dh / 2.0,
        ..opts
    };
    for (label, h) in [("L/7", LM / 7.0), ("L/3", LM / 3.0)] {
        let m = khm_modified_residual(&u, &eta, h, &opts)?;
        let m2 = khm_modified_residual(&u2, &eta2, h, &fine)?;
        let s = khm_signed_residual(&u, &eta, h, &opts)?;
        let s2 = khm_signed_residual(&u2, &eta2, h, &fine)?;
        out.push(Check::at_most(format!("modified h={label} residual_rel"), m.residual_rel, 1e-5));
        out.push(Check::at_least(
            format!("modified h={label} refinement ratio"),
            m.residual_abs / m2.residual_abs,
            3.5,
        ));
        out.push(Check::at_most(format!("signed h={label} residual_rel"), s.residual_rel, 1e-5));
        out.push(Check::at_least(
            format!("signed h={label} refinement ratio"),
            s.residual_abs / s2.residual_abs,
            3.5,
        ));
    }
    Ok(out)
}

fn khm_int() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (u, eta) = standing_wave(256, 1e-3, 1.0)?;
    let r = khm_integrated_residual(&u, &eta, LM / 5.0, &IntegratedOptions::default())?;
    out.push(Check::at_most("integrated h=L/5 residual_rel", r.residual_rel, 1e-4));
    let mid = u.len() / 2;
    out.push(Check::at_most(
        "pointwise h=L/7 max residual",
        khm_pointwise_residual(&u, &eta, mid, LM / 7.0)?,
        1e-5,
    ));
    // Quartic flux: ∂t u + ∂x(u⁴/4) = η for the same u*.
    let k = TAU / LM;
    let g = u.grid().clone();
    let (dt, frames) = (1e-3, 251);
    let uq = Trajectory64::from_fn(&g, 0.0, dt, frames, |t, x| 0.1 * (k * x).sin() * t.cos())?;
    let eq = Trajectory64::from_fn(&g, 0.0, dt, frames, |t, x| {
        let v = 0.1 * (k * x).sin() * t.cos();
        -0.1 * (k * x).sin() * t.sin() + v.powi(3) * 0.1 * k * (k * x).cos() * t.cos()
    })?;
    let opts = KhmOptions::for_length(LM);
    let r = conservation_khm_residual(&uq, &eq, &Flux::power(4), LM / 7.0, &opts)?;
    out.push(Check::at_most("conservation a=u^4/4 residual_rel", r.residual_rel, 1e-4));
    let short = u.window(0..101)?;
    let se = eta.window(0..101)?;
    let a = khm_modified_residual(&short, &se, LM / 7.0, &opts)?;
    let b = conservation_khm_residual(&short, &se, &Flux::burgers(), LM / 7.0, &opts)?;
    let scale = a.terms.iter().fold(0.0f64, |m, t| m.max(t.1.abs()));
    let gap = a
        .terms
        .iter()
        .zip(&b.terms)
        .fold(0.0f64, |m, (x, y)| m.max((x.1 - y.1).abs()));
    out.push(Check::at_most("conservation a=u^2/2 vs modified KHM", gap / scale, 1e-10));
    Ok(out)
}

/// Single-mode fields `A = sin kx cos t`, `B = cos 2kx`, `D = cos 2kx sin t`,
/// `E = sin kx`, with `C` and `F` the residuals of the two balance laws.
pub fn interaction_fields(n: usize, dt: f64) -> Result<InteractionFields<f64>> {
    let g = Grid64::new(LM, n)?;
    let k = TAU / LM;
    let count = (1.0 / dt).round() as usize + 1;
    let tr = |f: &dyn Fn(f64, f64) -> f64| Trajectory64::from_fn(&g, 0.0, dt, count, f);
    Ok(InteractionFields {
        a: tr(&|t, x| (k * x).sin() * t.cos())?,
        b: tr(&|_, x| (2.0 * k * x).cos())?,
        c: tr(&|t, x| -(k * x).sin() * t.sin() - 2.0 * k * (2.0 * k * x).sin())?,
        d: tr(&|t, x| (2.0 * k * x).cos() * t.sin())?,
        e: tr(&|_, x| (k * x).sin())?,
        f: tr(&|t, x| (2.0 * k * x).cos() * t.cos() + k * (k * x).cos())?,
    })
}

fn interaction() -> Result<Vec<Check>> {
    let r = interaction_identity_residual(&interaction_fields(256, 1e-3)?)?;
    Ok(vec![Check::at_most("single-mode fields residual_rel", r.residual_rel, 1e-6)])
}

fn kinetic() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (lhs, rhs) = cube_identity(1.0, 0.0, 1.0 / 512.0)?;
    out.push(Check::at_most("cube (1,0) |lhs - 1/6|", (lhs - 1.0 / 6.0).abs(), 0.0));
    out.push(Check::at_most("cube (1,0) |rhs - lhs| at dv=1/512", (rhs - lhs).abs(), 1e-3));
    let e = |dv: f64| -> Result<f64> {
        let (l, r) = cube_identity(1.0, 0.0, dv)?;
        Ok((r - l).abs())
    };
    out.push(Check::at_least("cube (1,0) error ratio per halving", e(1.0 / 256.0)? / e(1.0 / 512.0)?, 1.8));
    let (u, eta) = standing_wave(256, 1e-3, 1.0)?;
    let (lo, hi) = trajectory_range(&u);
    let res: Vec<f64> = [64.0, 256.0, 1024.0]
        .iter()
        .map(|k| -> Result<f64> {
            Ok(kinetic_residual(&kinetic_trajectory(&u, (hi - lo) / k)?, &eta)?.residual_abs)
        })
        .collect::<Result<_>>()?;
    out.push(Check::info("weak residual at dv=range/256", res[1]));
    out.push(
        Check::at_least("weak residual ratio range/64 -> range/256", res[0] / res[1], 1.4 * 1.4)
            .with_note("two halvings, first order"),
    );
    out.push(
        Check::at_least("weak residual ratio range/256 -> range/1024", res[1] / res[2], 1.4 * 1.4)
            .with_note("two halvings, first order"),
    );
    Ok(out)
}

/// Q-decomposition on `u*` over `[0, 1]` at two lattice spacings.
pub fn q_decomposition_pair(divisions: (f64, f64)) -> Result<Vec<(f64, QDecomposition, QDecomposition)>> {
    let (u, eta) = standing_wave(256, 1e-3, 1.0)?;
    let (lo, hi) = trajectory_range(&u);
    let opts = IntegratedOptions::default();
    [LM / 7.0, LM / 3.0]
        .into_iter()
        .map(|h| {
            let t = integrated_terms(&u, &eta, h, &opts)?;
            let at = |k: f64| -> Result<QDecomposition> {
                let dv = (hi - lo) / k;
                Ok(QDecomposition {
                    q: q_lattice(&u, h, dv)?,
                    q12: t.source,
                    q3: -t.boundary,
                    cubic: t.cubic,
                    dv,
                })
            };
            Ok((h, at(divisions.0)?, at(divisions.1)?))
        })
        .collect()
}

fn q_decomp(divisions: (f64, f64)) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (h, a, b) in q_decomposition_pair(divisions)? {
        let label = format!("h={h:.4} dv=range/{}", divisions.0);
        out.push(Check::at_most(format!("{label} Q = Q1+Q2+Q3"), a.decomposition_residual(), 1e-3));
        out.push(Check::at_most(format!("{label} Q = (1/6)|D^h u|^3"), a.cube_residual(), 1e-3));
        out.push(Check::at_least(
            format!("h={h:.4} refinement ratio range/{} -> range/{}", divisions.0, divisions.1),
            a.decomposition_residual() / b.decomposition_residual(),
            1.8,
        ));
    }
    Ok(out)
}

/// KS run for the energy balance: L = 100 with burn-in 50 and a window of 20
/// recorded every 0.01.
pub fn energy_run(n: usize, dealias: bool) -> Result<ksbesov_core::evolution::RunResult<f64>> {
    let l = 100.0;
    let g = Grid64::new(l, n)?;
    let cutoff = if dealias { dealias_cutoff(n) } else { (n / 2) as i64 };
    let xi = TAU * cutoff as f64 / l;
    // Largest step dividing 0.01 that stays within the stiffness guard.
    let sub = ((0.01 * xi.powi(4) / 400.0).ceil() as usize).max(5);
    let mut cfg = StepperConfig::etdrk4(0.01 / sub as f64, sub);
    cfg.dealias = dealias;
    let spec = EquationSpec::kuramoto_sivashinsky();
    let burn = integrate(&spec, &random_initial(&g, 1), &cfg, 50.0)?;
    let start = burn.trajectory.frames().last().expect("recorded").clone();
    Ok(integrate(&spec, &start, &cfg, 20.0)?)
}

fn energy(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let n = opts.n.unwrap_or(1024);
    let run = energy_run(n, opts.dealias)?;
    let e = energy_balance_residual(&run);
    let note = format!("N={n}, dealias={}", opts.dealias);
    let mut out = vec![Check::at_most("per-frame residual_rel", e.report.residual_rel, 1e-3).with_note(note)];
    if let Some(c) = e.c1 {
        out.push(Check::info("c in E(t+s) <= c E(t)", c));
    }
    if let Some(c) = e.c2 {
        out.push(Check::info("c in unit-window estimate", c));
    }
    Ok(out)
}

/// A random real trigonometric polynomial with modes `1..=kmax`.
pub fn random_trig(g: &Grid64, kmax: usize, seed: u64) -> Field64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<(f64, f64)> = (0..kmax)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let l = g.length();
    Field64::from_fn(g, |x| {
        c.iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let k = TAU * (i + 1) as f64 / l;
                a * (k * x).cos() + b * (k * x).sin()
            })
            .sum()
    })
}

fn static_traj(u: Field64) -> Result<Trajectory64> {
    Ok(Trajectory64::new(u.grid().clone(), 0.0, 1.0, vec![u])?)
}

fn duality() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let g = Grid64::new(2.0 * PI, 64)?;
    let hg = HGrid::with_density(&g, 128)?;
    let cos = Field64::from_fn(&g, |x| x.cos());
    let p = duality_pairing(&cos, &cos, &hg)?;
    out.push(Check::at_most("cos: |lhs - pi| / pi", (p.lhs - PI).abs() / PI, 1e-12));
    out.push(Check::at_most("cos: relative gap", p.relative_gap(), 1e-4));
    let (mut worst, mut tail) = (0.0f64, 0.0f64);
    for seed in 0..10 {
        let a = random_trig(&g, 10, 2 * seed);
        let b = random_trig(&g, 10, 2 * seed + 1);
        let p = duality_pairing(&a, &b, &hg)?;
        worst = worst.max(p.relative_gap());
        tail = tail.max(p.tail_fraction);
    }
    out.push(Check::at_most("random pairs: worst relative gap", worst, 1e-4).with_note("128 offsets per decade"));
    // The sub-h1 and beyond-period parts are closed forms here, so a large
    // tail share is not a resolution problem.
    out.push(Check::info("random pairs: largest tail share", tail));
    Ok(out)
}

/// The `(s, p, r)` cases of the estimator cross-validation.
pub fn cross_validation_params() -> Vec<BesovParams> {
    let mut v = Vec::new();
    for s in [0.3, 0.5, 0.7] {
        for (p, r) in [(2.0, 2.0), (3.0, 3.0)] {
            v.push(BesovParams { s, p, r });
        }
    }
    v
}

fn interpolation() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let g = Grid64::new(2.0 * PI, 128)?;
    let hg = HGrid::for_grid(&g);
    let fam = LPFamily::new(&g);
    let fields: Vec<Trajectory64> = (0..20).map(|s| static_traj(random_trig(&g, 12, 100 + s))).collect::<Result<_>>()?;
    let mut worst_c = 1.0f64;
    for bp in cross_validation_params() {
        let mut ratios = Vec::new();
        let (mut interp_slack, mut dual_ratio) = (f64::INFINITY, 0.0f64);
        let a = BesovParams { s: bp.s - 0.2, ..bp };
        let b = BesovParams { s: bp.s + 0.2, ..bp };
        for (i, t) in fields.iter().enumerate() {
            let fd = besov_norm_fd(t, &bp, &hg)?;
            let lp = besov_norm_lp(t, &bp, &fam)?;
            ratios.push(fd.value / lp.value);
            let rep = interpolation_check(t, &a, &b, 0.5, &fam)?;
            interp_slack = interp_slack.min(rep.slack() / rep.bound());
            let partner = &fields[(i + 1) % fields.len()];
            let d = duality_bound_check(t, partner, &bp, &hg)?;
            dual_ratio = dual_ratio.max(d.ratio());
        }
        let mut sorted = ratios.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        let spread = sorted[sorted.len() - 1] / sorted[0];
        for r in &ratios {
            worst_c = worst_c.max(r.max(1.0 / r));
        }
        out.push(Check::info(format!("{bp} fd/lp median"), median));
        out.push(Check::at_most(
            format!("{bp} fd/lp ratios within ±10% of median"),
            sorted[sorted.len() - 1].max(median * median / sorted[0]) / median,
            1.1,
        ));
        out.push(Check::info(format!("{bp} fd/lp max/min"), spread));
        out.push(Check::at_least(format!("{bp} interpolation relative slack"), interp_slack, -1e-6));
        out.push(Check::at_most(format!("{bp} duality pairing / bound"), dual_ratio, 1.0 + 1e-6));
    }
    out.push(Check::info("measured equivalence constant c", worst_c));
    Ok(out)
}

/// A short KS trajectory on `L = 50`.
pub fn ks_trajectory(length: f64, t_avg: f64) -> Result<Trajectory64> {
    let mut cfg = crate::config::SimConfig::new(length);
    cfg.t_burn = 50.0;
    cfg.t_avg = t_avg;
    cfg.seed = 5;
    Ok(crate::run::simulate(&cfg)?.run.trajectory)
}

fn three_scale() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let traj = ks_trajectory(50.0, 50.0)?;
    let l = traj.grid().length();
    // The default 32 offsets per decade leave the trapezoid reference near 5e-4.
    let hg = HGrid::with_density(traj.grid(), 256)?;
    for ell in [l / 16.0, l / 4.0, l / 2.0] {
        let t = three_scale_split(&traj, ell, &hg)?;
        let label = format!("ell={ell:.3}");
        if t.flagged {
            out.push(Check::at_most(format!("{label} flagged"), 1.0, 0.0).with_note("unresolved split"));
        }
        out.push(Check::at_most(format!("{label} (A+B+C) vs full"), t.reconstruction_error(), 1e-4));
        out.push(Check::at_most(
            format!("{label} C / ((pi^2/6)(A+B))"),
            t.c / (PI * PI / 6.0 * (t.a + t.b)),
            1.0,
        ));
        out.push(Check::at_most(
            format!("{label} B / (ln(L/ell) sup)"),
            t.b / t.middle_bound(l),
            1.0,
        ));
    }
    let (mut agmon, mut sobolev) = (f64::INFINITY, f64::INFINITY);
    for f in traj.frames() {
        agmon = agmon.min(agmon_check(f)?.slack());
        sobolev = sobolev.min(sobolev_check(f).slack());
    }
    out.push(Check::at_least("Agmon slack over frames", agmon, -1e-10));
    out.push(Check::at_least("Fourier-Sobolev slack over frames", sobolev, -1e-10));
    Ok(out)
}

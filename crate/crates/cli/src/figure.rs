//! Sweeps behind `gauss-bs figure`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use clap::ValueEnum;
use gauss_bs_core::beamsplitter::{output_blocks, partial_trace_product};
use gauss_bs_core::cascade::depletion_run;
use gauss_bs_core::measures::{log_negativity, report, s_n, two_mode_nonclassical_depth};
use gauss_bs_core::{BeamSplitterParams, PhaseChoice, SingleModeCovariance, TwoModeCovariance};

use crate::error::{CliError, Result};
use crate::table::Table;

pub const DEFAULT_POINTS: usize = 201;
/// Depletion stages tabulated by `fig3`.
pub const DEPLETION_STAGES: usize = 4;
pub const FIG4A_PURITIES: [f64; 3] = [1.0, 0.8, 0.5];
/// `fig4b` sweeps `1/(2λ_min)` over `[1, FIG4B_MAX_INVERSE_WIDTH]`.
pub const FIG4B_MAX_INVERSE_WIDTH: f64 = 10.0;

const DEFAULT_LAMBDA: f64 = 0.335;
const DEFAULT_LAMBDA_STRONG: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    /// Entanglement and remaining depth after one BS with vacuum.
    Fig2,
    /// Four-stage depletion: per-stage entanglement and depth.
    Fig3,
    /// `S_N` and `E_N` vs θ for three purities.
    Fig4a,
    /// `E_N` and `S_N` at θ = π/4 vs `1/(2λ_min)`.
    Fig4b,
    /// Nonclassicality budget vs θ, state mixed with vacuum (or thermal).
    Fig5,
    /// Nonclassicality budget vs θ for two nonclassical inputs (or thermal).
    Fig6,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FigureOptions {
    pub lambda1_min: Option<f64>,
    pub lambda2_min: Option<f64>,
    pub n_thermal: Option<f64>,
    pub purity: Option<f64>,
    pub points: Option<usize>,
}

impl FigureOptions {
    fn allow(&self, id: FigureId, allowed: &[&str]) -> Result<()> {
        let given = [
            ("--lambda1-min", self.lambda1_min.is_some()),
            ("--lambda2-min", self.lambda2_min.is_some()),
            ("--n-thermal", self.n_thermal.is_some()),
            ("--purity", self.purity.is_some()),
        ];
        match given.iter().find(|(name, set)| *set && !allowed.contains(name)) {
            Some((name, _)) => Err(CliError::Usage(format!("{name} does not apply to {}", id.name()))),
            None => Ok(()),
        }
    }

    fn points(&self) -> Result<usize> {
        match self.points.unwrap_or(DEFAULT_POINTS) {
            n if n >= 2 => Ok(n),
            n => Err(CliError::Usage(format!("--points must be at least 2, got {n}"))),
        }
    }

    fn first_input(&self, default_lambda: f64) -> Result<SingleModeCovariance> {
        let lambda = self.lambda1_min.unwrap_or(default_lambda);
        let purity = self.purity.unwrap_or(1.0);
        if !(lambda > 0.0 && lambda < 0.5) {
            return Err(CliError::Usage(format!("--lambda1-min must lie in (0, 1/2), got {lambda}")));
        }
        Ok(SingleModeCovariance::with_purity(lambda, purity)?)
    }

    fn thermal(&self) -> Result<Option<SingleModeCovariance>> {
        match self.n_thermal {
            Some(n) if n.is_finite() && n >= 0.0 => Ok(Some(SingleModeCovariance::thermal(n))),
            Some(n) => Err(CliError::Usage(format!("--n-thermal must be a finite mean photon number ≥ 0, got {n}"))),
            None => Ok(None),
        }
    }
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
        }
    }
}

/// `points` angles spanning `[0, π/2]`; both ends and (for odd counts) π/4 are exact.
pub fn theta_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|k| FRAC_PI_2 * (k as f64 / last)).collect()
}

pub fn figure(id: FigureId, opts: &FigureOptions) -> Result<Table> {
    match id {
        FigureId::Fig2 => {
            opts.allow(id, &["--lambda1-min", "--purity"])?;
            fig2(&opts.first_input(DEFAULT_LAMBDA)?, opts.points()?)
        }
        FigureId::Fig3 => {
            opts.allow(id, &["--lambda1-min", "--purity"])?;
            fig3(&opts.first_input(DEFAULT_LAMBDA)?, opts.points()?)
        }
        FigureId::Fig4a => {
            opts.allow(id, &["--lambda1-min"])?;
            let base = opts.first_input(DEFAULT_LAMBDA)?;
            fig4a(base.lambda_min(), opts.points()?)
        }
        FigureId::Fig4b => {
            opts.allow(id, &[])?;
            fig4b(opts.points()?)
        }
        FigureId::Fig5 => {
            opts.allow(id, &["--lambda1-min", "--purity", "--n-thermal"])?;
            let partner = opts.thermal()?.unwrap_or_else(SingleModeCovariance::vacuum);
            budget(&opts.first_input(DEFAULT_LAMBDA)?, &partner, opts.points()?)
        }
        FigureId::Fig6 => {
            opts.allow(id, &["--lambda1-min", "--lambda2-min", "--purity", "--n-thermal"])?;
            if opts.lambda2_min.is_some() && opts.n_thermal.is_some() {
                return Err(CliError::Usage("--lambda2-min and --n-thermal are mutually exclusive".into()));
            }
            let partner = match opts.thermal()? {
                Some(t) => t,
                None => {
                    let lambda = opts.lambda2_min.unwrap_or(DEFAULT_LAMBDA);
                    if !(lambda > 0.0 && lambda <= 0.5) {
                        return Err(CliError::Usage(format!("--lambda2-min must lie in (0, 1/2], got {lambda}")));
                    }
                    SingleModeCovariance::pure_with_min_eigenvalue(lambda)?
                }
            };
            budget(&opts.first_input(DEFAULT_LAMBDA_STRONG)?, &partner, opts.points()?)
        }
    }
}

fn fig2(v: &SingleModeCovariance, points: usize) -> Result<Table> {
    let vac = SingleModeCovariance::vacuum();
    let tau_in = two_mode_nonclassical_depth(&TwoModeCovariance::product(*v, vac));
    let mut table = Table::new(["theta", "e_n", "tau_in", "tau_out"]);
    for theta in theta_grid(points) {
        let out = output_blocks(v, &vac, &BeamSplitterParams::matched(theta, v, &vac)?);
        let tau_out = two_mode_nonclassical_depth(&partial_trace_product(&out));
        table.push(&[theta, log_negativity(&out)?, tau_in, tau_out]);
    }
    Ok(table)
}

fn fig3(v: &SingleModeCovariance, points: usize) -> Result<Table> {
    let header = std::iter::once("theta".to_string())
        .chain((1..=DEPLETION_STAGES).map(|i| format!("e_n_bs{i}")))
        .chain((0..=DEPLETION_STAGES).map(|i| format!("tau_{i}")));
    let mut table = Table::new(header);
    let phases = [PhaseChoice::Matched; DEPLETION_STAGES];
    for theta in theta_grid(points) {
        let run = depletion_run(v, &[theta; DEPLETION_STAGES], &phases)?;
        let mut row = vec![theta];
        row.extend(run.e_n_per_stage());
        row.push(run.initial_tau());
        row.extend(run.tau_per_stage());
        table.push(&row);
    }
    Ok(table)
}

fn fig4a(lambda: f64, points: usize) -> Result<Table> {
    let header = std::iter::once("theta".to_string())
        .chain(FIG4A_PURITIES.iter().map(|&u| format!("s_n_u{u}")))
        .chain(FIG4A_PURITIES.iter().map(|&u| format!("e_n_u{u}")));
    let mut table = Table::new(header);
    let vac = SingleModeCovariance::vacuum();
    let inputs =
        FIG4A_PURITIES.iter().map(|&u| SingleModeCovariance::with_purity(lambda, u)).collect::<Result<Vec<_>, _>>()?;
    for theta in theta_grid(points) {
        let mut s_cols = Vec::with_capacity(inputs.len());
        let mut e_cols = Vec::with_capacity(inputs.len());
        for v in &inputs {
            let out = output_blocks(v, &vac, &BeamSplitterParams::matched(theta, v, &vac)?);
            s_cols.push(s_n(&TwoModeCovariance::product(*v, vac), &out)?);
            e_cols.push(log_negativity(&out)?);
        }
        let mut row = vec![theta];
        row.extend(s_cols);
        row.extend(e_cols);
        table.push(&row);
    }
    Ok(table)
}

fn fig4b(points: usize) -> Result<Table> {
    let vac = SingleModeCovariance::vacuum();
    let p = BeamSplitterParams::new(FRAC_PI_4, 0.0)?;
    let mut table = Table::new(["inv_two_lambda_min", "lambda_min", "e_n", "s_n"]);
    let last = (points - 1) as f64;
    for k in 0..points {
        let x = 1.0 + (FIG4B_MAX_INVERSE_WIDTH - 1.0) * (k as f64 / last);
        let v = SingleModeCovariance::pure_with_min_eigenvalue(0.5 / x)?;
        let out = output_blocks(&v, &vac, &p);
        table.push(&[x, v.lambda_min(), log_negativity(&out)?, s_n(&TwoModeCovariance::product(v, vac), &out)?]);
    }
    Ok(table)
}

fn budget(v1: &SingleModeCovariance, v2: &SingleModeCovariance, points: usize) -> Result<Table> {
    let mut table = Table::new(["theta", "n_in", "n_out", "s_n", "e_n"]);
    for theta in theta_grid(points) {
        let r = report(v1, v2, &BeamSplitterParams::matched(theta, v1, v2)?)?;
        table.push(&[theta, r.n_in, r.n_out, r.s_n, r.e_n]);
    }
    Ok(table)
}

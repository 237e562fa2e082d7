//! Configured multi-BS experiments behind `gauss-bs cascade`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::Path;

use gauss_bs_core::cascade::{depletion_run, limit_totals, split_tree, MAX_TREE_DEPTH};
use gauss_bs_core::measures::{nonclassical_depth, nonclassicality};
use gauss_bs_core::{AngleSchedule, Complex64, PhaseChoice, SingleModeCovariance};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::table::{float, Table};

pub const COLUMNS: [&str; 6] = ["level", "sum_tau", "sum_n", "cum_s_n", "residual", "e_n"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Depletion,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keyword {
    Random,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ThetaSchedule {
    Constant(f64),
    List(Vec<f64>),
    Keyword(Keyword),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeConfig {
    pub protocol: Protocol,
    /// Pure input with this minimum eigenvalue; exclusive with `a`.
    pub lambda1_min: Option<f64>,
    pub a: Option<f64>,
    pub b_re: Option<f64>,
    pub b_im: Option<f64>,
    /// Tree depth.
    pub depth: Option<usize>,
    /// Depletion stages.
    pub stages: Option<usize>,
    pub theta_schedule: Option<ThetaSchedule>,
    pub seed: Option<u64>,
}

/// Validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Depletion { input: SingleModeCovariance, thetas: Vec<f64> },
    Tree { input: SingleModeCovariance, depth: usize, schedule: AngleSchedule },
}

/// Final tree level against the infinite-tree limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitComparison {
    pub depth: usize,
    pub sum_n: f64,
    pub cum_s_n: f64,
    pub n_tot: f64,
    pub s_tot: f64,
}

impl fmt::Display for LimitComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "level {}: sum_n {:.12} vs limit {:.12} (diff {:.3e})",
            self.depth,
            self.sum_n,
            self.n_tot,
            self.sum_n - self.n_tot
        )?;
        write!(
            f,
            "level {}: cum_s_n {:.12} vs limit {:.12} (diff {:.3e})",
            self.depth,
            self.cum_s_n,
            self.s_tot,
            self.cum_s_n - self.s_tot
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeOutput {
    pub table: Table,
    pub limit: Option<LimitComparison>,
}

impl CascadeConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
        Self::parse(&text).map_err(|message| CliError::Config { path: path.to_owned(), message })
    }

    fn input(&self) -> std::result::Result<SingleModeCovariance, String> {
        match (self.lambda1_min, self.a) {
            (Some(lambda), None) => {
                if self.b_re.is_some() || self.b_im.is_some() {
                    return Err("b_re/b_im require `a` instead of `lambda1_min`".into());
                }
                SingleModeCovariance::pure_with_min_eigenvalue(lambda).map_err(|e| format!("lambda1_min: {e}"))
            }
            (None, Some(a)) => {
                let b = Complex64::new(self.b_re.unwrap_or(0.0), self.b_im.unwrap_or(0.0));
                SingleModeCovariance::new(a, b).map_err(|e| format!("a, b_re, b_im: {e}"))
            }
            (Some(_), Some(_)) => Err("give either lambda1_min or a, not both".into()),
            (None, None) => Err("missing input state: give lambda1_min or a (with b_re, b_im)".into()),
        }
    }

    fn schedule(&self, steps: Option<usize>) -> std::result::Result<AngleSchedule, String> {
        let schedule = match self.theta_schedule.clone() {
            None => AngleSchedule::Constant(FRAC_PI_4),
            Some(ThetaSchedule::Constant(t)) => AngleSchedule::Constant(t),
            Some(ThetaSchedule::List(ts)) => AngleSchedule::PerLevel(ts),
            Some(ThetaSchedule::Keyword(Keyword::Random)) => match self.seed {
                Some(seed) => AngleSchedule::Random { seed },
                None => return Err("theta_schedule \"random\" requires seed".into()),
            },
        };
        if self.seed.is_some() && !matches!(schedule, AngleSchedule::Random { .. }) {
            return Err("seed only applies to theta_schedule \"random\"".into());
        }
        if let (AngleSchedule::PerLevel(ts), Some(n)) = (&schedule, steps) {
            if ts.len() != n {
                return Err(format!("theta_schedule has {} angles for {n} steps", ts.len()));
            }
        }
        Ok(schedule)
    }

    pub fn experiment(&self) -> std::result::Result<Experiment, String> {
        let input = self.input()?;
        if nonclassical_depth(&input) <= 0.0 {
            return Err(format!("input state is classical (λ_min = {})", input.lambda_min()));
        }
        match self.protocol {
            Protocol::Tree => {
                if self.stages.is_some() {
                    return Err("stages applies to the depletion protocol; use depth".into());
                }
                let depth = self.depth.ok_or("tree protocol requires depth")?;
                if depth == 0 || depth > MAX_TREE_DEPTH {
                    return Err(format!("depth must lie in 1..={MAX_TREE_DEPTH}, got {depth}"));
                }
                Ok(Experiment::Tree { input, depth, schedule: self.schedule(Some(depth))? })
            }
            Protocol::Depletion => {
                if self.depth.is_some() {
                    return Err("depth applies to the tree protocol; use stages".into());
                }
                let stages = match (self.stages, &self.theta_schedule) {
                    (Some(n), _) => n,
                    (None, Some(ThetaSchedule::List(ts))) => ts.len(),
                    (None, _) => return Err("depletion protocol requires stages".into()),
                };
                if stages == 0 {
                    return Err("stages must be at least 1".into());
                }
                let schedule = self.schedule(Some(stages))?;
                let thetas = (0..stages).map(|i| schedule.theta(i, 0)).collect();
                Ok(Experiment::Depletion { input, thetas })
            }
        }
    }
}

fn row(level: usize, values: [f64; 5]) -> Vec<String> {
    std::iter::once(level.to_string()).chain(values.iter().map(|&x| float(x))).collect()
}

pub fn run(experiment: &Experiment) -> Result<CascadeOutput> {
    let mut table = Table::new(COLUMNS);
    match experiment {
        Experiment::Tree { input, depth, schedule } => {
            let tree = split_tree(input, *depth, schedule)?;
            for l in tree.levels() {
                table.push_cells(row(l.level, [l.sum_tau, l.sum_n, l.cum_s_n, l.residual, l.sum_e_n]));
            }
            let last = tree.final_level();
            let (n_tot, s_tot) = limit_totals(input);
            let limit = LimitComparison { depth: *depth, sum_n: last.sum_n, cum_s_n: last.cum_s_n, n_tot, s_tot };
            Ok(CascadeOutput { table, limit: Some(limit) })
        }
        Experiment::Depletion { input, thetas } => {
            let run = depletion_run(input, thetas, &vec![PhaseChoice::Matched; thetas.len()])?;
            let n0 = nonclassicality(input);
            table.push_cells(row(0, [nonclassical_depth(input), n0, 0.0, 0.0, 0.0]));
            let mut cum_s_n = 0.0;
            for (i, stage) in run.stages().iter().enumerate() {
                let (a, b) = (stage.output.block_a(), stage.output.block_b());
                let n = stage.n_out();
                cum_s_n += stage.s_n;
                let sum_tau = nonclassical_depth(a) + nonclassical_depth(b);
                table.push_cells(row(i + 1, [sum_tau, n, cum_s_n, (n0 - n - cum_s_n).abs(), stage.e_n]));
            }
            Ok(CascadeOutput { table, limit: None })
        }
    }
}

//! Multi-beam-splitter protocols.
//!
//! Two protocols are provided:
//! - [`depletion_run`]: a nonclassical state is mixed with vacuum, the output
//!   is replaced by the product of its marginals, and the two marginals are
//!   mixed with each other at the next BS, and so on.
//! - [`split_tree`]: every output mode is sent to a fresh BS with a vacuum
//!   ancilla, doubling the number of modes per level.
//!
//! At each BS the minimum eigenvalues are conserved when the phase condition
//! holds, and `N_in = N_out + S_N`, so over a tree the depths of the leaves
//! always sum to the input depth and the leaf nonclassicality plus all
//! generated `S_N` sum to the input `N_noncl`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LOG2_E};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::beamsplitter::{matched_phase, output_blocks, partial_trace_product, BeamSplitterParams};
use crate::covariance::{SingleModeCovariance, TwoModeCovariance};
use crate::error::{Error, Result};
use crate::measures::{log_negativity, nonclassical_depth, nonclassicality, s_n, two_mode_nonclassical_depth};

/// Deepest tree [`split_tree`] accepts (2²⁴ leaves).
pub const MAX_TREE_DEPTH: usize = 24;

/// Deepest level [`CascadeTree::level_states`] will materialize.
pub const MAX_MATERIALIZED_LEVEL: usize = 20;

/// Subtrees at least this tall are split across threads.
const PARALLEL_HEIGHT: usize = 10;

/// How the BS phase of a depletion stage is picked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseChoice {
    /// `φ = arg(b)/2 − arg(d)/2` for the stage's actual inputs.
    Matched,
    /// Wrapped into `(−π, π]`.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepletionStage {
    pub params: BeamSplitterParams,
    pub inputs: (SingleModeCovariance, SingleModeCovariance),
    pub output: TwoModeCovariance,
    /// `E_N` of `output`, bits.
    pub e_n: f64,
    pub s_n: f64,
    /// Two-mode depth of the product of the output marginals.
    pub tau: f64,
}

impl DepletionStage {
    pub fn traced(&self) -> TwoModeCovariance {
        partial_trace_product(&self.output)
    }

    /// `N_out1 + N_out2`.
    pub fn n_out(&self) -> f64 {
        nonclassicality(self.output.block_a()) + nonclassicality(self.output.block_b())
    }
}

/// Result of [`depletion_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct DepletionRun {
    initial: SingleModeCovariance,
    stages: Vec<DepletionStage>,
}

impl DepletionRun {
    pub fn initial(&self) -> &SingleModeCovariance {
        &self.initial
    }

    pub fn stages(&self) -> &[DepletionStage] {
        &self.stages
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.params.theta()).collect()
    }

    pub fn e_n_per_stage(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.e_n).collect()
    }

    /// `τ_i` after stage `i` (index 0 is stage 1).
    pub fn tau_per_stage(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.tau).collect()
    }

    /// `τ₀`: two-mode depth of the input `V_ncs ⊕ vacuum`.
    pub fn initial_tau(&self) -> f64 {
        two_mode_nonclassical_depth(&TwoModeCovariance::product(self.initial, SingleModeCovariance::vacuum()))
    }
}

/// Runs the serial depletion protocol.
///
/// Stage 1 mixes `v_ncs` with vacuum; stage `i > 1` mixes the two marginals
/// left by stage `i − 1`.
pub fn depletion_run(v_ncs: &SingleModeCovariance, thetas: &[f64], phis: &[PhaseChoice]) -> Result<DepletionRun> {
    if thetas.is_empty() || thetas.len() != phis.len() {
        return Err(Error::InvalidSchedule(format!(
            "need equally many (≥ 1) angles and phases, got {} and {}",
            thetas.len(),
            phis.len()
        )));
    }
    let mut inputs = (*v_ncs, SingleModeCovariance::vacuum());
    let mut stages = Vec::with_capacity(thetas.len());
    for (&theta, phi) in thetas.iter().zip(phis) {
        let params = match *phi {
            PhaseChoice::Matched => BeamSplitterParams::matched(theta, &inputs.0, &inputs.1)?,
            PhaseChoice::Fixed(phi) => BeamSplitterParams::with_wrapped_phase(theta, phi)?,
        };
        let v_in = TwoModeCovariance::product(inputs.0, inputs.1);
        let output = output_blocks(&inputs.0, &inputs.1, &params);
        let stage = DepletionStage {
            params,
            inputs,
            output,
            e_n: log_negativity(&output)?,
            s_n: s_n(&v_in, &output)?,
            tau: two_mode_nonclassical_depth(&partial_trace_product(&output)),
        };
        inputs = (*output.block_a(), *output.block_b());
        stages.push(stage);
    }
    Ok(DepletionRun { initial: *v_ncs, stages })
}

/// Mixing angle for each BS of a splitting tree.
#[derive(Debug, Clone, PartialEq)]
pub enum AngleSchedule {
    Constant(f64),
    /// Entry `k` is used for every BS acting on level-`k` modes.
    PerLevel(Vec<f64>),
    /// Independent uniform angles in `[0, π/2]`, reproducible from the seed
    /// and the node position regardless of traversal order.
    Random {
        seed: u64,
    },
}

impl Default for AngleSchedule {
    fn default() -> Self {
        AngleSchedule::Constant(FRAC_PI_4)
    }
}

impl AngleSchedule {
    /// Angle of the BS splitting node `index` of `level`.
    pub fn theta(&self, level: usize, index: u64) -> f64 {
        match self {
            AngleSchedule::Constant(t) => *t,
            AngleSchedule::PerLevel(ts) => ts[level],
            AngleSchedule::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(level as u64);
                rng.set_word_pos(u128::from(index) * 2);
                rng.gen_range(0.0..=FRAC_PI_2)
            }
        }
    }

    fn validate(&self, depth: usize) -> Result<()> {
        let check = |t: f64| {
            if (0.0..=FRAC_PI_2).contains(&t) {
                Ok(())
            } else {
                Err(Error::InvalidSchedule(format!("angle {t} outside [0, π/2]")))
            }
        };
        match self {
            AngleSchedule::Constant(t) => check(*t),
            AngleSchedule::PerLevel(ts) => {
                if ts.len() < depth {
                    return Err(Error::InvalidSchedule(format!("{} angles for a tree of depth {depth}", ts.len())));
                }
                ts.iter().try_for_each(|t| check(*t))
            }
            AngleSchedule::Random { .. } => Ok(()),
        }
    }
}

/// Aggregates over all modes of one tree level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSummary {
    pub level: usize,
    pub leaves: u64,
    pub sum_tau: f64,
    pub sum_lambda_min: f64,
    /// `Σ N_noncl` over the modes of this level.
    pub sum_n: f64,
    /// `S_N` generated by the BSs that produced this level.
    pub level_s_n: f64,
    /// `S_N` generated by all BSs up to this level.
    pub cum_s_n: f64,
    /// `E_N` summed over the BSs that produced this level.
    pub sum_e_n: f64,
    /// `|N₀ − sum_n − cum_s_n|`.
    pub residual: f64,
    /// Largest `|τ_parent − τ_left − τ_right|` among this level's BSs.
    pub max_local_depth_residual: f64,
    /// Largest `|N_parent − N_left − N_right − S_N|` among this level's BSs.
    pub max_local_conservation_residual: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct LevelAccum {
    sum_tau: f64,
    sum_lambda_min: f64,
    sum_n: f64,
    s_n: f64,
    e_n: f64,
    depth_residual: f64,
    conservation_residual: f64,
}

impl LevelAccum {
    fn merge(self, other: Self) -> Self {
        Self {
            sum_tau: self.sum_tau + other.sum_tau,
            sum_lambda_min: self.sum_lambda_min + other.sum_lambda_min,
            sum_n: self.sum_n + other.sum_n,
            s_n: self.s_n + other.s_n,
            e_n: self.e_n + other.e_n,
            depth_residual: self.depth_residual.max(other.depth_residual),
            conservation_residual: self.conservation_residual.max(other.conservation_residual),
        }
    }
}

/// Binary splitting tree, stored as per-level aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeTree {
    root: SingleModeCovariance,
    depth: usize,
    schedule: AngleSchedule,
    levels: Vec<LevelSummary>,
}

impl CascadeTree {
    pub fn root(&self) -> &SingleModeCovariance {
        &self.root
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn schedule(&self) -> &AngleSchedule {
        &self.schedule
    }

    /// One entry per level, `0..=depth`; level 0 is the input mode.
    pub fn levels(&self) -> &[LevelSummary] {
        &self.levels
    }

    pub fn final_level(&self) -> &LevelSummary {
        self.levels.last().expect("level 0 is always present")
    }

    /// All modes of `level`, left to right.
    pub fn level_states(&self, level: usize) -> Result<Vec<SingleModeCovariance>> {
        if level > self.depth || level > MAX_MATERIALIZED_LEVEL {
            return Err(Error::InvalidSchedule(format!(
                "level {level} not available (depth {}, cap {MAX_MATERIALIZED_LEVEL})",
                self.depth
            )));
        }
        let mut states = vec![self.root];
        for k in 0..level {
            let mut next = Vec::with_capacity(states.len() * 2);
            for (i, v) in states.iter().enumerate() {
                let out = split_node(v, self.schedule.theta(k, i as u64))?;
                next.push(*out.block_a());
                next.push(*out.block_b());
            }
            states = next;
        }
        Ok(states)
    }
}

fn split_node(v: &SingleModeCovariance, theta: f64) -> Result<TwoModeCovariance> {
    let vacuum = SingleModeCovariance::vacuum();
    let params = BeamSplitterParams::new(theta, matched_phase(v, &vacuum))?;
    Ok(output_blocks(v, &vacuum, &params))
}

struct TreeContext<'a> {
    depth: usize,
    schedule: &'a AngleSchedule,
}

/// Per-level aggregates for the subtree under `v`, for levels `level + 1 ..= depth`.
fn subtree(v: SingleModeCovariance, level: usize, index: u64, ctx: &TreeContext<'_>) -> Result<Vec<LevelAccum>> {
    if level == ctx.depth {
        return Ok(Vec::new());
    }
    let vacuum = SingleModeCovariance::vacuum();
    let out = split_node(&v, ctx.schedule.theta(level, index))?;
    let (left, right) = (*out.block_a(), *out.block_b());
    let (n_left, n_right) = (nonclassicality(&left), nonclassicality(&right));
    let (tau_left, tau_right) = (nonclassical_depth(&left), nonclassical_depth(&right));
    let generated = s_n(&TwoModeCovariance::product(v, vacuum), &out)?;
    let here = LevelAccum {
        sum_tau: tau_left + tau_right,
        sum_lambda_min: left.lambda_min() + right.lambda_min(),
        sum_n: n_left + n_right,
        s_n: generated,
        e_n: log_negativity(&out)?,
        depth_residual: (nonclassical_depth(&v) - tau_left - tau_right).abs(),
        conservation_residual: (nonclassicality(&v) - n_left - n_right - generated).abs(),
    };

    let (lhs, rhs) = if ctx.depth - level > PARALLEL_HEIGHT {
        rayon::join(|| subtree(left, level + 1, 2 * index, ctx), || subtree(right, level + 1, 2 * index + 1, ctx))
    } else {
        (subtree(left, level + 1, 2 * index, ctx), subtree(right, level + 1, 2 * index + 1, ctx))
    };
    let mut acc = Vec::with_capacity(ctx.depth - level);
    acc.push(here);
    acc.extend(lhs?.into_iter().zip(rhs?).map(|(l, r)| l.merge(r)));
    Ok(acc)
}

/// Splits `v_ncs` through `depth` levels of BSs, each fed a vacuum ancilla.
///
/// Leaves are never stored; each level is reduced by pairwise summation
/// over the tree, so the result does not depend on thread scheduling.
pub fn split_tree(v_ncs: &SingleModeCovariance, depth: usize, schedule: &AngleSchedule) -> Result<CascadeTree> {
    if depth == 0 || depth > MAX_TREE_DEPTH {
        return Err(Error::InvalidSchedule(format!("depth {depth} outside 1..={MAX_TREE_DEPTH}")));
    }
    schedule.validate(depth)?;
    let ctx = TreeContext { depth, schedule };
    let per_level = subtree(*v_ncs, 0, 0, &ctx)?;

    let n0 = nonclassicality(v_ncs);
    let mut levels = Vec::with_capacity(depth + 1);
    levels.push(LevelSummary {
        level: 0,
        leaves: 1,
        sum_tau: nonclassical_depth(v_ncs),
        sum_lambda_min: v_ncs.lambda_min(),
        sum_n: n0,
        level_s_n: 0.0,
        cum_s_n: 0.0,
        sum_e_n: 0.0,
        residual: 0.0,
        max_local_depth_residual: 0.0,
        max_local_conservation_residual: 0.0,
    });
    let mut cum_s_n = 0.0;
    for (k, acc) in per_level.into_iter().enumerate() {
        cum_s_n += acc.s_n;
        levels.push(LevelSummary {
            level: k + 1,
            leaves: 1u64 << (k + 1),
            sum_tau: acc.sum_tau,
            sum_lambda_min: acc.sum_lambda_min,
            sum_n: acc.sum_n,
            level_s_n: acc.s_n,
            cum_s_n,
            sum_e_n: acc.e_n,
            residual: (n0 - acc.sum_n - cum_s_n).abs(),
            max_local_depth_residual: acc.depth_residual,
            max_local_conservation_residual: acc.conservation_residual,
        });
    }
    Ok(CascadeTree { root: *v_ncs, depth, schedule: schedule.clone(), levels })
}

/// Infinite-tree limits `(N_tot, S_N_tot)`:
/// `N_tot = (1 − 2λ_min) log₂e` and `S_N_tot = −log₂(2λ_min) − N_tot`.
///
/// Meaningful for nonclassical inputs (`λ_min ≤ 1/2`).
pub fn limit_totals(v_ncs: &SingleModeCovariance) -> (f64, f64) {
    let lambda = v_ncs.lambda_min();
    let n_tot = (1.0 - 2.0 * lambda) * LOG2_E;
    (n_tot, nonclassicality(v_ncs) - n_tot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pure(l: f64) -> SingleModeCovariance {
        SingleModeCovariance::pure_with_min_eigenvalue(l).unwrap()
    }

    #[test]
    fn depletion_rejects_bad_schedules() {
        let v = pure(0.3);
        assert!(depletion_run(&v, &[], &[]).is_err());
        assert!(depletion_run(&v, &[0.1, 0.2], &[PhaseChoice::Matched]).is_err());
        assert!(depletion_run(&v, &[2.0], &[PhaseChoice::Matched]).is_err());
    }

    #[test]
    fn depletion_with_zero_angles_is_idle() {
        let v = pure(0.3);
        let run = depletion_run(&v, &[0.0; 4], &[PhaseChoice::Matched; 4]).unwrap();
        assert!(run.e_n_per_stage().iter().all(|&e| e == 0.0));
        assert!(run.tau_per_stage().iter().all(|&t| (t - run.initial_tau()).abs() < 1e-15));
    }

    #[test]
    fn balanced_first_stage_leaves_identical_marginals() {
        let v = SingleModeCovariance::with_purity(0.3, 0.8).unwrap();
        let run = depletion_run(
            &v,
            &[FRAC_PI_4, 0.4, 0.9],
            &[PhaseChoice::Matched, PhaseChoice::Matched, PhaseChoice::Fixed(0.0)],
        )
        .unwrap();
        let second = &run.stages()[1];
        let (x, y) = second.inputs;
        assert!((x.lambda_min() - y.lambda_min()).abs() < 1e-15);
        assert!((x.lambda_max() - y.lambda_max()).abs() < 1e-15);
        assert_eq!(x.phase(), y.phase());
        assert!(second.e_n.abs() < 1e-12);
        assert!(run.stages()[0].e_n > 0.0);
    }

    #[test]
    fn depletion_stage_e_n_does_not_grow() {
        let v = pure(0.335);
        let thetas = [std::f64::consts::PI / 5.0; 4];
        let run = depletion_run(&v, &thetas, &[PhaseChoice::Matched; 4]).unwrap();
        let e = run.e_n_per_stage();
        assert!(e.windows(2).all(|w| w[1] <= w[0]), "{e:?}");
        let t = run.tau_per_stage();
        assert!(t.windows(2).all(|w| w[1] <= w[0]), "{t:?}");
    }

    #[test]
    fn tree_depth_one_balanced() {
        let v = pure(0.25);
        let tree = split_tree(&v, 1, &AngleSchedule::Constant(FRAC_PI_4)).unwrap();
        let leaves = tree.level_states(1).unwrap();
        assert_eq!(leaves.len(), 2);
        for leaf in &leaves {
            assert_abs_diff_eq!(nonclassical_depth(leaf), 0.125, epsilon = 1e-15);
        }
        assert_eq!(tree.levels().len(), 2);
    }

    #[test]
    fn tree_with_zero_angles_copies_left_spine() {
        let v = pure(0.2);
        let tree = split_tree(&v, 5, &AngleSchedule::Constant(0.0)).unwrap();
        for summary in tree.levels() {
            assert_eq!(summary.cum_s_n, 0.0);
            assert_abs_diff_eq!(summary.sum_tau, 0.3, epsilon = 1e-15);
        }
        let leaves = tree.level_states(5).unwrap();
        assert_eq!(leaves[0], v);
        assert!(leaves[1..].iter().all(|l| *l == SingleModeCovariance::vacuum()));
    }

    #[test]
    fn tree_levels_conserve_depth_and_nonclassicality() {
        let v = SingleModeCovariance::with_purity(0.15, 0.6).unwrap();
        for schedule in [
            AngleSchedule::Random { seed: 7 },
            AngleSchedule::PerLevel(vec![0.1, 1.2, 0.7, FRAC_PI_2, 0.3, 0.5, 0.9, 1.0]),
        ] {
            let tree = split_tree(&v, 8, &schedule).unwrap();
            for (k, s) in tree.levels().iter().enumerate() {
                assert_eq!(s.leaves, 1 << k);
                assert_abs_diff_eq!(s.sum_tau, 0.35, epsilon = 1e-13);
                assert_abs_diff_eq!(s.sum_lambda_min - 0.5 * (s.leaves - 1) as f64, 0.15, epsilon = 1e-12);
                assert!(s.residual < 1e-12);
                assert!(s.max_local_depth_residual < 1e-15);
                assert!(s.max_local_conservation_residual < 1e-14);
            }
            // aggregates agree with materialized leaves
            let leaves = tree.level_states(8).unwrap();
            let n: f64 = leaves.iter().map(nonclassicality).sum();
            assert_abs_diff_eq!(n, tree.final_level().sum_n, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_schedule_is_position_keyed() {
        let s = AngleSchedule::Random { seed: 1 };
        assert_eq!(s.theta(3, 5), s.theta(3, 5));
        assert_ne!(s.theta(3, 5), s.theta(3, 6));
        assert_ne!(s.theta(3, 5), s.theta(4, 5));
        let v = pure(0.3);
        let a = split_tree(&v, 12, &s).unwrap();
        let b = split_tree(&v, 12, &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tree_rejects_bad_arguments() {
        let v = pure(0.3);
        assert!(split_tree(&v, 0, &AngleSchedule::default()).is_err());
        assert!(split_tree(&v, MAX_TREE_DEPTH + 1, &AngleSchedule::default()).is_err());
        assert!(split_tree(&v, 3, &AngleSchedule::PerLevel(vec![0.1, 0.2])).is_err());
        assert!(split_tree(&v, 1, &AngleSchedule::Constant(-0.1)).is_err());
        let tree = split_tree(&v, 2, &AngleSchedule::default()).unwrap();
        assert!(tree.level_states(3).is_err());
    }

    #[test]
    fn limit_examples() {
        assert_eq!(limit_totals(&SingleModeCovariance::vacuum()), (0.0, 0.0));
        let (n, s) = limit_totals(&pure(0.25));
        assert_abs_diff_eq!(n, 0.5 * LOG2_E, epsilon = 1e-15);
        assert_abs_diff_eq!(n, 0.721347520444, epsilon = 1e-12);
        assert_abs_diff_eq!(s, 0.278652479556, epsilon = 1e-12);
        assert_abs_diff_eq!(n + s, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn balanced_tree_error_matches_second_order_term() {
        // leaves carry τ₀/2^m each, so N_tot − 2τ₀log₂e ≈ 2τ₀² log₂e / 2^m
        let v = pure(0.25);
        let tau0: f64 = 0.25;
        let tree = split_tree(&v, 12, &AngleSchedule::Constant(FRAC_PI_4)).unwrap();
        let (limit, _) = limit_totals(&v);
        let mut last = f64::INFINITY;
        for s in &tree.levels()[1..] {
            let err = s.sum_n - limit;
            let leading = 2.0 * tau0 * tau0 * LOG2_E / s.leaves as f64;
            assert!((err - leading).abs() < leading * 2.0 * tau0 / s.leaves as f64 * 2.0);
            assert!(err < last);
            last = err;
        }
    }
}

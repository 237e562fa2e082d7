//! Nonclassicality and entanglement quantifiers.
//!
//! Single-mode measures read only `λ_min`:
//! - nonclassical depth `τ = max{0, 1/2 − λ_min}`,
//! - nonclassicality `N_noncl = −log₂(2λ_min)` in bits (negative when the
//!   state is noisier than the vacuum in every quadrature).
//!
//! For a two-mode state with blocks `A`, `B`, `C` the invariant
//! `S = 2(Det A + Det B − 2 Det C)` gives the logarithmic negativity
//! `E_N = max{0, −½ log₂(S − √(S² − 16 Det V))}`. Across one beam splitter
//! the drop in summed nonclassicality,
//! `S_N = log₂(λ̃₁λ̃₂ / λ₁λ₂)`, satisfies
//! `N_in1 + N_in2 = N_out1 + N_out2 + S_N` and has the same sign as `E_N`
//! when one input is pure and `𝒞 > 0`.

use crate::beamsplitter::{output_blocks, BeamSplitterParams};
use crate::covariance::{SingleModeCovariance, TwoModeCovariance, PHYSICALITY_TOL};
use crate::error::{Error, Result};
use crate::symplectic;

/// Margin on `S − (1/2 + 8 Det V)` below which a state counts as separable.
pub const ENTANGLEMENT_MARGIN: f64 = 1e-12;

/// Relative size of a negative `S² − 16 Det V` that is reported as an error;
/// anything smaller is rounded to zero.
const RADICAND_REJECT: f64 = 1e-9;

pub fn nonclassical_depth(v: &SingleModeCovariance) -> f64 {
    (0.5 - v.lambda_min()).max(0.0)
}

/// `−log₂(2λ_min)` in bits.
pub fn nonclassicality(v: &SingleModeCovariance) -> f64 {
    -(2.0 * v.lambda_min()).log2()
}

/// `max{0, 1/2 − λ_min}` over the smallest eigenvalue of the full 4×4 covariance.
///
/// On product states this is the larger of the two single-mode depths.
pub fn two_mode_nonclassical_depth(v: &TwoModeCovariance) -> f64 {
    let lambda_min = if v.is_block_diagonal() {
        v.block_a().lambda_min().min(v.block_b().lambda_min())
    } else {
        symplectic::min_eigenvalue(&v.to_real_quadrature())
    };
    (0.5 - lambda_min).max(0.0)
}

/// `S = 2(Det A + Det B − 2 Det C)`.
pub fn s_quantity(v: &TwoModeCovariance) -> f64 {
    2.0 * (v.block_a().det() + v.block_b().det() - 2.0 * v.block_c().det())
}

/// `S` for the output of a phase-matched BS fed with `V₁ ⊕ V₂`:
/// `(λ₁+λ₂)(λ₁max+λ₂max) + (λ₁−λ₂)(λ₁max−λ₂max) cos 4θ`.
pub fn s_quantity_closed_form(v1: &SingleModeCovariance, v2: &SingleModeCovariance, theta: f64) -> f64 {
    let (l1, m1) = v1.eigenvalues();
    let (l2, m2) = v2.eigenvalues();
    (l1 + l2) * (m1 + m2) + (l1 - l2) * (m1 - m2) * (4.0 * theta).cos()
}

/// Logarithmic negativity in bits from `S` and `Det V`.
///
/// `S − √(S² − 16 Det V)` is evaluated as `16 Det V / (S + √(S² − 16 Det V))`.
pub fn log_negativity(v: &TwoModeCovariance) -> Result<f64> {
    if v.is_block_diagonal() {
        // product states are separable
        return Ok(0.0);
    }
    let s = s_quantity(v);
    let det = v.det();
    let scale = s.abs().max(1.0).powi(2);
    let mut radicand = s * s - 16.0 * det;
    if radicand < -RADICAND_REJECT * scale {
        return Err(Error::InvalidCovariance(format!("S² − 16 Det V = {radicand} < 0")));
    }
    // pure-boundary states land a few ulps below zero
    if radicand < 0.0 {
        radicand = 0.0;
    }
    let denom = s + radicand.sqrt();
    if !(denom > 0.0 && det > 0.0) {
        return Err(Error::InvalidCovariance(format!("S = {s}, Det V = {det}")));
    }
    let smallest = 16.0 * det / denom;
    Ok((-0.5 * smallest.log2()).max(0.0))
}

/// `E_N = max{0, −log₂(2ν̃)}` with `ν̃` the smallest symplectic eigenvalue of
/// the partially transposed real-quadrature covariance.
pub fn oracle_log_negativity(v: &TwoModeCovariance) -> f64 {
    let sigma = symplectic::partial_transpose(&v.to_real_quadrature());
    let nu = symplectic::symplectic_eigenvalues(&sigma)[0];
    (-(2.0 * nu).log2()).max(0.0)
}

/// `S_N = log₂(λ̃₁min λ̃₂min / (λ₁min λ₂min))` from the diagonal blocks.
pub fn s_n(v_in: &TwoModeCovariance, v_out: &TwoModeCovariance) -> Result<f64> {
    let lambdas = [
        v_in.block_a().lambda_min(),
        v_in.block_b().lambda_min(),
        v_out.block_a().lambda_min(),
        v_out.block_b().lambda_min(),
    ];
    if let Some(bad) = lambdas.iter().find(|l| l.is_nan() || **l <= 0.0) {
        return Err(Error::DegenerateEigenvalue(format!("λ_min = {bad}")));
    }
    Ok(((lambdas[2] * lambdas[3]) / (lambdas[0] * lambdas[1])).log2())
}

/// `𝒞 = 8λ₁min λ₂min (λ₁max − λ₂max) / (λ₂min − λ₁min)`.
pub fn c_constant(v1: &SingleModeCovariance, v2: &SingleModeCovariance) -> Result<f64> {
    let (l1, m1) = v1.eigenvalues();
    let (l2, m2) = v2.eigenvalues();
    let gap = l2 - l1;
    if gap.abs() <= 1e-14 * l1.max(l2) {
        return Err(Error::DegenerateCase(format!("λ₁min = λ₂min = {l1}")));
    }
    Ok(8.0 * l1 * l2 * (m1 - m2) / gap)
}

/// `𝒞` for a state mixed with vacuum, from its depth `τ > 0` and purity `u`:
/// `1/(u²τ) − (1 − 2τ)/τ`.
pub fn c_constant_vacuum(tau: f64, purity: f64) -> f64 {
    1.0 / (purity * purity * tau) - (1.0 - 2.0 * tau) / tau
}

/// `𝒞` for a pure state mixed with a thermal state of `n` photons:
/// `2(2n+1)(1 − 2λ₁min(2n+1)) / (2n + 1 − 2λ₁min)`.
pub fn c_constant_thermal(lambda1_min: f64, n: f64) -> f64 {
    let m = 2.0 * n + 1.0;
    2.0 * m * (1.0 - 2.0 * lambda1_min * m) / (m - 2.0 * lambda1_min)
}

/// `|S − (1/2 + 8 Det V_out) − 𝒞(λ̃₁λ̃₂/(λ₁λ₂) − 1)|` for `V₁ ⊕ V₂` through `p`.
///
/// Zero up to rounding when one input is pure and `p` satisfies the phase
/// condition.
pub fn identity_residual(v1: &SingleModeCovariance, v2: &SingleModeCovariance, p: &BeamSplitterParams) -> Result<f64> {
    let c = c_constant(v1, v2)?;
    let out = output_blocks(v1, v2, p);
    Ok(identity_residual_of(v1, v2, &out, c))
}

fn identity_residual_of(v1: &SingleModeCovariance, v2: &SingleModeCovariance, out: &TwoModeCovariance, c: f64) -> f64 {
    let lhs = s_quantity(out) - (0.5 + 8.0 * out.det());
    let ratio = out.block_a().lambda_min() * out.block_b().lambda_min() / (v1.lambda_min() * v2.lambda_min());
    (lhs - c * (ratio - 1.0)).abs()
}

/// `S > 1/2 + 8 Det V`, with a margin of [`ENTANGLEMENT_MARGIN`].
pub fn entanglement_condition(v: &TwoModeCovariance) -> bool {
    s_quantity(v) - (0.5 + 8.0 * v.det()) > ENTANGLEMENT_MARGIN
}

/// Every measure for one BS event `V₁ ⊕ V₂ → V_out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureReport {
    pub params: BeamSplitterParams,
    pub tau1: f64,
    pub tau2: f64,
    pub tau1_out: f64,
    pub tau2_out: f64,
    /// `N_in1 + N_in2`, bits.
    pub n_in: f64,
    /// `N_out1 + N_out2`, bits.
    pub n_out: f64,
    pub s_n: f64,
    pub e_n: f64,
    pub s_quantity: f64,
    /// `None` when `λ₁min = λ₂min`.
    pub c_constant: Option<f64>,
    /// `|n_in − n_out − s_n|`.
    pub residual_conservation: f64,
    /// Present only when `𝒞` is defined and at least one input is pure.
    pub residual_identity: Option<f64>,
}

pub fn report(v1: &SingleModeCovariance, v2: &SingleModeCovariance, p: &BeamSplitterParams) -> Result<MeasureReport> {
    let v_in = TwoModeCovariance::product(*v1, *v2);
    let out = output_blocks(v1, v2, p);
    let n_in = nonclassicality(v1) + nonclassicality(v2);
    let n_out = nonclassicality(out.block_a()) + nonclassicality(out.block_b());
    let s_n = s_n(&v_in, &out)?;
    let c_constant = match c_constant(v1, v2) {
        Ok(c) => Some(c),
        Err(Error::DegenerateCase(_)) => None,
        Err(e) => return Err(e),
    };
    let one_pure = v1.is_pure(PHYSICALITY_TOL) || v2.is_pure(PHYSICALITY_TOL);
    let residual_identity = c_constant.filter(|_| one_pure).map(|c| identity_residual_of(v1, v2, &out, c));
    Ok(MeasureReport {
        params: *p,
        tau1: nonclassical_depth(v1),
        tau2: nonclassical_depth(v2),
        tau1_out: nonclassical_depth(out.block_a()),
        tau2_out: nonclassical_depth(out.block_b()),
        n_in,
        n_out,
        s_n,
        e_n: log_negativity(&out)?,
        s_quantity: s_quantity(&out),
        c_constant,
        residual_conservation: (n_in - n_out - s_n).abs(),
        residual_identity,
    })
}

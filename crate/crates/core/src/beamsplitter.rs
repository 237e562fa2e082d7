//! Lossless beam splitter acting on two-mode covariances.
//!
//! The BS maps amplitudes as `β = M α` with
//! `M = [[cos θ, sin θ e^{iφ}], [−sin θ e^{−iφ}, cos θ]]`; on the covariance
//! this is `V_out = U†(θ, φ) V_in U(θ, φ)` with `U` from [`unitary`].

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::covariance::{wrap_angle, CrossBlock, SingleModeCovariance, TwoModeCovariance};
use crate::error::{Error, Result};

/// Mixing angle `θ ∈ [0, π/2]` (transmittance `cos²θ`) and phase `φ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    theta: f64,
    phi: f64,
}

impl BeamSplitterParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParams(format!("θ = {theta} outside [0, π/2]")));
        }
        if !(phi > -PI && phi <= PI) {
            return Err(Error::InvalidParams(format!("φ = {phi} outside (−π, π]")));
        }
        Ok(Self { theta, phi })
    }

    /// Like [`Self::new`] but wraps `φ` into `(−π, π]` first.
    pub fn with_wrapped_phase(theta: f64, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParams(format!("φ = {phi} is not finite")));
        }
        Self::new(theta, wrap_angle(phi))
    }

    /// `θ` with `φ` chosen by [`phase_condition`] for the two inputs.
    pub fn matched(theta: f64, v1: &SingleModeCovariance, v2: &SingleModeCovariance) -> Result<Self> {
        Self::new(theta, matched_phase(v1, v2))
    }

    /// 50:50 splitter with `φ = 0`.
    pub fn balanced() -> Self {
        Self { theta: std::f64::consts::FRAC_PI_4, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn transmittance(&self) -> f64 {
        self.theta.cos().powi(2)
    }
}

/// The 4×4 unitary acting on `(α₁*, α₁, α₂*, α₂)`.
pub fn unitary(p: &BeamSplitterParams) -> Matrix4<Complex64> {
    let (s, c) = p.theta.sin_cos();
    let c = Complex64::new(c, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let e_plus = Complex64::from_polar(s, p.phi);
    let e_minus = Complex64::from_polar(s, -p.phi);
    #[rustfmt::skip]
    let u = Matrix4::new(
        c, z, -e_plus, z,
        z, c, z, -e_minus,
        e_minus, z, c, z,
        z, e_plus, z, c,
    );
    u
}

/// `U†VU` by explicit matrix product; accepts any valid two-mode state.
pub fn apply(v: &TwoModeCovariance, p: &BeamSplitterParams) -> TwoModeCovariance {
    transform(v, &unitary(p))
}

pub(crate) fn transform(v: &TwoModeCovariance, u: &Matrix4<Complex64>) -> TwoModeCovariance {
    let out = u.adjoint() * v.matrix() * u;
    TwoModeCovariance::from_matrix_unchecked(&out).expect("a passive unitary preserves the (α*, α) block structure")
}

/// Closed-form output blocks for a product input `V₁ ⊕ V₂`.
///
/// With `c = cos θ`, `s = sin θ`:
/// - `A = [[a c² + c' s², b c² + d s² e^{2iφ}], …]`
/// - `B = [[a s² + c' c², b s² e^{−2iφ} + d c²], …]`
/// - `C = −s c [[(a − c') e^{iφ}, b e^{−iφ} − d e^{iφ}], …]`
///
/// where `(a, b)` and `(c', d)` are the entries of `V₁` and `V₂`. The sign of
/// `C` is the one produced by `U†VU`.
///
/// The minimum eigenvalue of `A` is evaluated as
/// `λ₁ c² + λ₂ s² + δ` with `δ ≥ 0` vanishing when the squeezing axes line
/// up (`arg b = arg d + 2φ`), so under the phase condition the output
/// eigenvalues depend on the inputs only through their eigenvalues.
pub fn output_blocks(
    v1: &SingleModeCovariance,
    v2: &SingleModeCovariance,
    p: &BeamSplitterParams,
) -> TwoModeCovariance {
    let (s, c) = p.theta.sin_cos();
    let (c2, s2, sc) = (c * c, s * s, s * c);
    let (b1, b2) = (v1.abs_b(), v2.abs_b());
    let (l1, m1) = v1.eigenvalues();
    let (l2, m2) = v2.eigenvalues();

    // misalignment of the two squeezing axes after the BS phase
    let dpsi = (v1.phase() - v2.phase()) - 2.0 * p.phi;
    let mismatch = (2.0 * sc).powi(2) * b1 * b2 * (0.5 * dpsi).sin().powi(2);

    let block = |w1: f64, w2: f64, off: Complex64| {
        let aligned = w1 * b1 + w2 * b2;
        let modulus = (aligned * aligned - mismatch).max(0.0).sqrt();
        let delta = if aligned + modulus > 0.0 { mismatch / (aligned + modulus) } else { 0.0 };
        let phase = if modulus > 0.0 { off.arg() } else { 0.0 };
        SingleModeCovariance::from_eigenvalues_unchecked(w1 * l1 + w2 * l2 + delta, w1 * m1 + w2 * m2 - delta, phase)
    };

    let e2 = Complex64::from_polar(1.0, 2.0 * p.phi);
    let (bv1, bv2) = (v1.b(), v2.b());
    let a_block = block(c2, s2, bv1 * c2 + bv2 * e2 * s2);
    let b_block = block(s2, c2, bv1 * e2.conj() * s2 + bv2 * c2);

    let e1 = Complex64::from_polar(1.0, p.phi);
    let cross = CrossBlock::new(-(v1.a() - v2.a()) * sc * e1, -(bv1 * e1.conj() - bv2 * e1) * sc);
    TwoModeCovariance::from_blocks_unchecked(a_block, b_block, cross)
}

/// `Tr₂ρ ⊗ Tr₁ρ`: keeps `A` and `B`, drops `C`.
pub fn partial_trace_product(v: &TwoModeCovariance) -> TwoModeCovariance {
    TwoModeCovariance::product(*v.block_a(), *v.block_b())
}

/// `φ = arg(b)/2 − arg(d)/2`, with `arg 0 = 0`.
///
/// With this phase the minimum eigenvalues of the outputs are
/// `λ̃₁ = λ₁ cos²θ + λ₂ sin²θ` and `λ̃₂ = λ₁ sin²θ + λ₂ cos²θ`.
pub fn phase_condition(b: Complex64, d: Complex64) -> f64 {
    let arg = |z: Complex64| if z.norm() == 0.0 { 0.0 } else { z.arg() };
    0.5 * arg(b) - 0.5 * arg(d)
}

/// [`phase_condition`] on the stored phases of two states.
pub fn matched_phase(v1: &SingleModeCovariance, v2: &SingleModeCovariance) -> f64 {
    0.5 * v1.phase() - 0.5 * v2.phase()
}

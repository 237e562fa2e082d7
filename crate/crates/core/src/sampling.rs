//! Seeded random states for property sweeps and the `verify` command.
//!
//! Generic two-mode states are built directly in the real quadrature
//! picture from random symplectic matrices, without going through the
//! beam-splitter code they are used to test.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::beamsplitter::BeamSplitterParams;
use crate::covariance::{SingleModeCovariance, TwoModeCovariance};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // (−π, π]
    PI - rng.gen::<f64>() * 2.0 * PI
}

/// Any physical single-mode state, possibly mixed and possibly classical.
pub fn single_mode<R: Rng + ?Sized>(rng: &mut R) -> SingleModeCovariance {
    let lambda_min: f64 = rng.gen_range(0.05..1.2);
    let floor = (lambda_min * lambda_min).max(0.25);
    let det = floor * rng.gen_range(1.0..3.0);
    SingleModeCovariance::from_eigenvalues(lambda_min, det / lambda_min, phase(rng))
        .expect("sampled eigenvalues are physical")
}

/// Pure state with `λ_min ∈ [0.05, 0.5]` and random phase.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R) -> SingleModeCovariance {
    let lambda_min: f64 = rng.gen_range(0.05..=0.5);
    SingleModeCovariance::from_eigenvalues(lambda_min, 0.25 / lambda_min, phase(rng)).expect("pure state is physical")
}

/// Nonclassical input for mixing with vacuum: `λ_min ∈ [0.02, 0.49]`, purity in `[0.3, 1]`.
pub fn nonclassical_state<R: Rng + ?Sized>(rng: &mut R) -> SingleModeCovariance {
    let lambda_min = rng.gen_range(0.02..0.49);
    let purity = rng.gen_range(0.3..=1.0);
    let v = SingleModeCovariance::with_purity(lambda_min, purity).expect("λ_min < 1/2 admits any purity");
    SingleModeCovariance::from_eigenvalues(v.lambda_min(), v.lambda_max(), phase(rng)).expect("same eigenvalues")
}

/// A pair where `V₁` is pure and the eigenvalues interlace so that `𝒞 > 0`:
/// `λ₁ < λ₂ ≤ λ₂max < λ₁max` or `λ₂ < λ₁ < λ₁max < λ₂max`.
pub fn constrained_pair<R: Rng + ?Sized>(rng: &mut R) -> (SingleModeCovariance, SingleModeCovariance) {
    let l1: f64 = rng.gen_range(0.05..0.48);
    let m1 = 0.25 / l1;
    let (l2, m2) = if rng.gen_bool(0.5) {
        let l2 = l1 + (m1 - l1) * rng.gen_range(0.01..0.99);
        let lo = l2.max(0.25 / l2);
        (l2, lo + (m1 - lo) * rng.gen_range(0.0..0.99))
    } else {
        let l2 = l1 * rng.gen_range(0.05..0.99);
        let lo = 0.25 / l2;
        (l2, lo * rng.gen_range(1.0..3.0))
    };
    let v1 = SingleModeCovariance::from_eigenvalues(l1, m1, phase(rng)).expect("pure");
    let v2 = SingleModeCovariance::from_eigenvalues(l2, m2, phase(rng)).expect("physical");
    if rng.gen_bool(0.5) {
        (v1, v2)
    } else {
        (v2, v1)
    }
}

pub fn params<R: Rng + ?Sized>(rng: &mut R) -> BeamSplitterParams {
    BeamSplitterParams::new(rng.gen_range(0.0..=FRAC_PI_2), phase(rng)).expect("in range")
}

fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn local(r1: Matrix2<f64>, r2: Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&r1);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&r2);
    m
}

fn random_passive<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    let (s, c) = rng.gen_range(0.0..FRAC_PI_2).sin_cos();
    let mut mix = Matrix4::identity() * c;
    for k in 0..2 {
        mix[(k, k + 2)] = s;
        mix[(k + 2, k)] = -s;
    }
    local(rotation(phase(rng)), rotation(phase(rng))) * mix * local(rotation(phase(rng)), rotation(phase(rng)))
}

/// Real covariance `S diag(ν₁, ν₁, ν₂, ν₂) Sᵀ` for a random symplectic `S`.
pub fn real_two_mode<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    let nu = |rng: &mut R| if rng.gen_bool(0.3) { 0.5 } else { rng.gen_range(0.5..2.0) };
    let (nu1, nu2) = (nu(rng), nu(rng));
    let (r1, r2): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let squeeze = Matrix4::from_diagonal(&Vector4::new(r1.exp(), (-r1).exp(), r2.exp(), (-r2).exp()));
    let s = random_passive(rng) * squeeze * random_passive(rng);
    let thermal = Matrix4::from_diagonal(&Vector4::new(nu1, nu1, nu2, nu2));
    let sigma = s * thermal * s.transpose();
    (sigma + sigma.transpose()) * 0.5
}

/// Random physical two-mode state, generally with `C ≠ 0`.
pub fn two_mode<R: Rng + ?Sized>(rng: &mut R) -> TwoModeCovariance {
    TwoModeCovariance::from_real_quadrature(&real_two_mode(rng)).expect("symplectic image of a thermal state")
}

//! Gaussian covariance types in the complex-amplitude convention.
//!
//! A single mode is `V = [[a, b], [b*, a]]` with `a` real and `b` complex;
//! the vacuum is `a = 1/2, b = 0`. Physical states satisfy
//! `a² ≥ |b|² + 1/4`, with equality exactly for pure states.
//!
//! [`SingleModeCovariance`] keeps its eigen-decomposition
//! (`λ_min = a − |b|`, `λ_max = a + |b|`, `arg b`) rather than `(a, b)`.
//! Every quantity in this crate is a function of those three numbers, and
//! storing them means `λ_min` is not re-derived through a cancelling
//! subtraction each time it is read.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symplectic;

/// Tolerance on `a² − |b|² − 1/4` below which a state is clamped to pure.
pub const PHYSICALITY_TOL: f64 = 1e-12;

/// Tolerance on the smallest symplectic eigenvalue of a two-mode state.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// Looser clamp used when reading single-mode blocks back out of a 4×4 matrix.
const BLOCK_TOL: f64 = 1e-9;

pub const VACUUM_VARIANCE: f64 = 0.5;

/// Wraps an angle into `(−π, π]`.
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y <= -PI {
        y += 2.0 * PI;
    } else if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Covariance of one zero-mean Gaussian mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeCovariance {
    lambda_min: f64,
    lambda_max: f64,
    phase: f64,
}

impl SingleModeCovariance {
    /// Builds `[[a, b], [b*, a]]`, rejecting `a² < |b|² + 1/4 − tol`.
    ///
    /// States within [`PHYSICALITY_TOL`] of the pure boundary are clamped onto it.
    pub fn new(a: f64, b: Complex64) -> Result<Self> {
        Self::with_tolerance(a, b, PHYSICALITY_TOL)
    }

    fn with_tolerance(a: f64, b: Complex64, tol: f64) -> Result<Self> {
        if !a.is_finite() || !b.re.is_finite() || !b.im.is_finite() {
            return Err(Error::UnphysicalState(format!("non-finite entries a={a}, b={b}")));
        }
        if a <= 0.0 {
            return Err(Error::UnphysicalState(format!("a = {a} must be positive")));
        }
        let abs_b = b.norm();
        let det = a * a - abs_b * abs_b;
        if det < 0.25 - tol {
            return Err(Error::UnphysicalState(format!("a² − |b|² = {det} < 1/4 (a = {a}, |b| = {abs_b})")));
        }
        let phase = if abs_b == 0.0 { 0.0 } else { b.arg() };
        let lambda_max = a + abs_b;
        let lambda_min = if det < 0.25 { 0.25 / lambda_max } else { a - abs_b };
        Ok(Self { lambda_min, lambda_max, phase })
    }

    /// Builds a state from its eigenvalues and the phase of `b`.
    pub fn from_eigenvalues(lambda_min: f64, lambda_max: f64, phase: f64) -> Result<Self> {
        if !(lambda_min.is_finite() && lambda_max.is_finite() && phase.is_finite()) {
            return Err(Error::UnphysicalState("non-finite eigenvalues or phase".into()));
        }
        if lambda_min <= 0.0 || lambda_max < lambda_min {
            return Err(Error::UnphysicalState(format!("need 0 < λ_min ≤ λ_max, got ({lambda_min}, {lambda_max})")));
        }
        let det = lambda_min * lambda_max;
        if det < 0.25 - PHYSICALITY_TOL {
            return Err(Error::UnphysicalState(format!("λ_min·λ_max = {det} < 1/4")));
        }
        let lambda_max = if det < 0.25 { 0.25 / lambda_min } else { lambda_max };
        let phase = if lambda_max == lambda_min { 0.0 } else { wrap_angle(phase) };
        Ok(Self { lambda_min, lambda_max, phase })
    }

    /// Skips validation; callers guarantee physicality (BS outputs of valid inputs).
    pub(crate) fn from_eigenvalues_unchecked(lambda_min: f64, lambda_max: f64, phase: f64) -> Self {
        Self { lambda_min, lambda_max, phase }
    }

    /// Reads a block `[[a, b], [b*, a]]` that came out of a transformed valid state.
    pub(crate) fn from_block(a: f64, b: Complex64) -> Result<Self> {
        Self::with_tolerance(a, b, BLOCK_TOL * a.abs().max(1.0).powi(2))
    }

    pub fn vacuum() -> Self {
        Self { lambda_min: VACUUM_VARIANCE, lambda_max: VACUUM_VARIANCE, phase: 0.0 }
    }

    /// Pure squeezed state with `λ_min = e^{−2r}/2` and `b` real positive.
    ///
    /// # Panics
    /// If `r` is negative or not finite.
    pub fn squeezed(r: f64) -> Self {
        assert!(r.is_finite() && r >= 0.0, "squeezing parameter must be ≥ 0, got {r}");
        Self { lambda_min: 0.5 * (-2.0 * r).exp(), lambda_max: 0.5 * (2.0 * r).exp(), phase: 0.0 }
    }

    /// Thermal state with mean photon number `n`: `a = n + 1/2`, `b = 0`.
    ///
    /// # Panics
    /// If `n` is negative or not finite.
    pub fn thermal(n: f64) -> Self {
        assert!(n.is_finite() && n >= 0.0, "thermal photon number must be ≥ 0, got {n}");
        let a = n + 0.5;
        Self { lambda_min: a, lambda_max: a, phase: 0.0 }
    }

    /// Pure state with the given minimum eigenvalue and real positive `b`.
    pub fn pure_with_min_eigenvalue(lambda_min: f64) -> Result<Self> {
        Self::with_purity(lambda_min, 1.0)
    }

    /// State with minimum eigenvalue `lambda_min` and purity `u`, `b` real positive.
    ///
    /// `λ_max = 1/(4u²λ_min)`; requires `λ_max ≥ λ_min`.
    pub fn with_purity(lambda_min: f64, purity: f64) -> Result<Self> {
        if !(purity > 0.0 && purity <= 1.0) {
            return Err(Error::UnphysicalState(format!("purity {purity} outside (0, 1]")));
        }
        if lambda_min.is_nan() || lambda_min <= 0.0 {
            return Err(Error::UnphysicalState(format!("λ_min = {lambda_min} must be positive")));
        }
        let lambda_max = 0.25 / (purity * purity * lambda_min);
        if lambda_max < lambda_min {
            return Err(Error::UnphysicalState(format!(
                "λ_min = {lambda_min} with purity {purity} gives λ_max = {lambda_max} < λ_min"
            )));
        }
        Self::from_eigenvalues(lambda_min, lambda_max, 0.0)
    }

    pub fn a(&self) -> f64 {
        0.5 * (self.lambda_min + self.lambda_max)
    }

    pub fn b(&self) -> Complex64 {
        Complex64::from_polar(self.abs_b(), self.phase)
    }

    /// `|b|`, read directly from the eigenvalue gap.
    pub fn abs_b(&self) -> f64 {
        0.5 * (self.lambda_max - self.lambda_min)
    }

    /// `arg b`, with `arg 0 = 0`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// `(λ_min, λ_max) = (a − |b|, a + |b|)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }

    /// `a² − |b|² = λ_min λ_max`.
    pub fn det(&self) -> f64 {
        self.lambda_min * self.lambda_max
    }

    /// `u = 1/(2√(λ_min λ_max))`, in `(0, 1]`.
    pub fn purity(&self) -> f64 {
        (0.5 / self.det().sqrt()).min(1.0)
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.det() - 0.25).abs() <= tol
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        let a = Complex64::new(self.a(), 0.0);
        let b = self.b();
        Matrix2::new(a, b, b.conj(), a)
    }
}

impl fmt::Display for SingleModeCovariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a(), self.b(), self.b().conj(), self.a())
    }
}

/// Cross-correlation block `C = [[p, q], [q*, p*]]`.
///
/// Any real 2×2 quadrature cross block maps to this shape, so `Det C` is
/// always real.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CrossBlock {
    pub p: Complex64,
    pub q: Complex64,
}

impl CrossBlock {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(p: Complex64, q: Complex64) -> Self {
        Self { p, q }
    }

    /// `|p|² − |q|²`.
    pub fn det(&self) -> f64 {
        self.p.norm_sqr() - self.q.norm_sqr()
    }

    pub fn is_zero(&self) -> bool {
        self.p == Complex64::default() && self.q == Complex64::default()
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.p, self.q, self.q.conj(), self.p.conj())
    }
}

/// Two-mode covariance `[[A, C], [C†, B]]` over `(α₁*, α₁, α₂*, α₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    a: SingleModeCovariance,
    b: SingleModeCovariance,
    c: CrossBlock,
}

impl TwoModeCovariance {
    /// Product state `V₁ ⊕ V₂` (`C = 0`).
    pub fn product(v1: SingleModeCovariance, v2: SingleModeCovariance) -> Self {
        Self { a: v1, b: v2, c: CrossBlock::zero() }
    }

    /// Assembles blocks and checks that every symplectic eigenvalue is ≥ 1/2.
    pub fn from_blocks(a: SingleModeCovariance, b: SingleModeCovariance, c: CrossBlock) -> Result<Self> {
        let v = Self { a, b, c };
        if !c.is_zero() {
            v.check_physical()?;
        }
        Ok(v)
    }

    pub(crate) fn from_blocks_unchecked(a: SingleModeCovariance, b: SingleModeCovariance, c: CrossBlock) -> Self {
        Self { a, b, c }
    }

    /// Parses a full 4×4 matrix, checking the complex-amplitude structure
    /// (Hermitian, equal diagonal pairs, conjugate-paired `C`) and physicality.
    pub fn from_matrix(m: &Matrix4<Complex64>) -> Result<Self> {
        let v = Self::from_matrix_unchecked(m)?;
        v.check_physical()?;
        Ok(v)
    }

    pub(crate) fn from_matrix_unchecked(m: &Matrix4<Complex64>) -> Result<Self> {
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let tol = 1e-10 * scale;
        let close = |x: Complex64, y: Complex64| (x - y).norm() <= tol;
        if (m - m.adjoint()).iter().any(|z| z.norm() > tol) {
            return Err(Error::InvalidCovariance("matrix is not Hermitian".into()));
        }
        let structured = close(m[(0, 0)], m[(1, 1)])
            && close(m[(2, 2)], m[(3, 3)])
            && close(m[(0, 2)], m[(1, 3)].conj())
            && close(m[(0, 3)], m[(1, 2)].conj());
        if !structured {
            return Err(Error::InvalidCovariance("matrix does not have the (α*, α) block structure".into()));
        }
        let a = SingleModeCovariance::from_block(
            0.5 * (m[(0, 0)].re + m[(1, 1)].re),
            0.5 * (m[(0, 1)] + m[(1, 0)].conj()),
        )?;
        let b = SingleModeCovariance::from_block(
            0.5 * (m[(2, 2)].re + m[(3, 3)].re),
            0.5 * (m[(2, 3)] + m[(3, 2)].conj()),
        )?;
        let c = CrossBlock::new(0.5 * (m[(0, 2)] + m[(1, 3)].conj()), 0.5 * (m[(0, 3)] + m[(1, 2)].conj()));
        Ok(Self { a, b, c })
    }

    /// Inverse of [`Self::to_real_quadrature`].
    pub fn from_real_quadrature(sigma: &Matrix4<f64>) -> Result<Self> {
        let t = quadrature_basis();
        let sigma_c = sigma.map(|x| Complex64::new(x, 0.0));
        Self::from_matrix(&(t * sigma_c * t.adjoint()))
    }

    fn check_physical(&self) -> Result<()> {
        let nu = symplectic::symplectic_eigenvalues(&self.to_real_quadrature());
        if nu[0] < VACUUM_VARIANCE - SYMPLECTIC_TOL {
            return Err(Error::UnphysicalState(format!("smallest symplectic eigenvalue {} < 1/2", nu[0])));
        }
        Ok(())
    }

    pub fn block_a(&self) -> &SingleModeCovariance {
        &self.a
    }

    pub fn block_b(&self) -> &SingleModeCovariance {
        &self.b
    }

    pub fn block_c(&self) -> &CrossBlock {
        &self.c
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.c.is_zero()
    }

    pub fn matrix(&self) -> Matrix4<Complex64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.a.matrix());
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.b.matrix());
        let c = self.c.matrix();
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.adjoint());
        m
    }

    /// `Det[V]` by LU on the full 4×4 matrix.
    pub fn det(&self) -> f64 {
        self.matrix().determinant().re
    }

    /// Real covariance over `(x₁, p₁, x₂, p₂)` with `α = (x + ip)/√2`.
    ///
    /// Per mode `σ_xx = a + Re b`, `σ_pp = a − Re b`, `σ_xp = Im b`. The
    /// basis change is unitary, so the determinant and spectrum are kept.
    pub fn to_real_quadrature(&self) -> Matrix4<f64> {
        let t = quadrature_basis();
        let sigma = (t.adjoint() * self.matrix() * t).map(|z| z.re);
        (sigma + sigma.transpose()) * 0.5
    }
}

/// `T = L ⊕ L` with rows `(1, i)/√2` and `(1, −i)/√2`, so that `V = T σ T†`.
fn quadrature_basis() -> Matrix4<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(h, 0.0);
    let i = Complex64::new(0.0, h);
    let mut t = Matrix4::zeros();
    for k in [0, 2] {
        t[(k, k)] = one;
        t[(k, k + 1)] = i;
        t[(k + 1, k)] = one;
        t[(k + 1, k + 1)] = -i;
    }
    t
}

//! Symplectic spectrum of real two-mode covariance matrices.
//!
//! Works in the real quadrature ordering `(x₁, p₁, x₂, p₂)` with vacuum
//! covariance `I/2`. The spectrum is obtained from the antisymmetric matrix
//! `K = σ^{1/2} Ω σ^{1/2}`: its eigenvalues are `±iν_k`, so `KᵀK` has the
//! doubly degenerate spectrum `ν_k²`. Nothing here uses the closed-form
//! invariants of the complex-amplitude path.

use nalgebra::{Matrix4, SymmetricEigen};

/// Symplectic form `Ω = ω ⊕ ω` with `ω = [[0, 1], [-1, 0]]`.
pub fn omega() -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m[(0, 1)] = 1.0;
    m[(1, 0)] = -1.0;
    m[(2, 3)] = 1.0;
    m[(3, 2)] = -1.0;
    m
}

/// Partial transpose on mode 2: `p₂ → -p₂`.
pub fn partial_transpose(sigma: &Matrix4<f64>) -> Matrix4<f64> {
    let flip = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    flip * sigma * flip
}

fn symmetric_sqrt(sigma: &Matrix4<f64>) -> Matrix4<f64> {
    let sym = (sigma + sigma.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

/// The two symplectic eigenvalues of `sigma`, ascending.
///
/// `sigma` must be symmetric positive semi-definite; negative eigenvalues
/// from rounding are clamped to zero before taking the square root.
pub fn symplectic_eigenvalues(sigma: &Matrix4<f64>) -> [f64; 2] {
    let root = symmetric_sqrt(sigma);
    let k = root * omega() * root;
    let gram = k.transpose() * k;
    let gram = (gram + gram.transpose()) * 0.5;
    let mut spectrum: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().map(|v| v.max(0.0)).collect();
    spectrum.sort_by(|x, y| x.total_cmp(y));
    [(0.5 * (spectrum[0] + spectrum[1])).sqrt(), (0.5 * (spectrum[2] + spectrum[3])).sqrt()]
}

/// Smallest ordinary eigenvalue of a real symmetric matrix.
pub fn min_eigenvalue(sigma: &Matrix4<f64>) -> f64 {
    let sym = (sigma + sigma.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

/// `SᵀΩS = Ω` within `tol` (max-abs entry).
pub fn is_symplectic(s: &Matrix4<f64>, tol: f64) -> bool {
    let w = omega();
    (s.transpose() * w * s - w).amax() <= tol
}

//! Exact entanglement measures for 4x4 two-qubit density matrices.
//!
//! Basis order is `|A0 B0>, |A0 B1>, |A1 B0>, |A1 B1>` (A-major), consistent
//! with [`crate::qubit`]; the Wootters spin flip and the partial transpose
//! below depend on this ordering.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
// float intrinsics for no_std builds; test builds unify num-traits/std and shadow it
#[allow(unused_imports)]
use num_traits::Float;

use crate::measures::binary_entropy;
use crate::{Error, Result};

/// Absolute tolerance on the minimum eigenvalue when validating PSD inputs.
pub const PSD_TOL: f64 = 1e-9;

/// Summary of all standard measures for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureReport {
    pub concurrence: f64,
    /// Tangle `tau = C^2`.
    pub tangle: f64,
    /// Entanglement of formation in bits.
    pub eof: f64,
    pub negativity: f64,
    /// Von Neumann entropy of Alice's reduction, in bits.
    pub vn_entropy_a: f64,
}

/// Checks Hermiticity (1e-10), unit trace (1e-10) and positivity
/// (eigenvalues >= -[`PSD_TOL`]).
pub fn validate_density(rho: &Matrix4<Complex64>) -> Result<()> {
    let scale = rho.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1.0);
    if (rho - rho.adjoint()).iter().any(|z| z.norm() > 1e-10 * scale) {
        return Err(Error::InvalidState("density matrix is not Hermitian"));
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::InvalidState("density matrix trace is not 1"));
    }
    let eigs = hermitian_eigenvalues(rho);
    if eigs.iter().any(|&l| l < -PSD_TOL) {
        return Err(Error::InvalidState("density matrix has a negative eigenvalue"));
    }
    Ok(())
}

/// Real eigenvalues of a Hermitian 4x4 matrix (symmetrized first so roundoff
/// asymmetry cannot leak imaginary parts).
fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> [f64; 4] {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut out = [0.0; 4];
    for (o, &l) in out.iter_mut().zip(eig.eigenvalues.iter()) {
        *o = l;
    }
    out
}

/// `sy (x) sy`, which is real: antidiag(-1, 1, 1, -1).
fn yy_matrix() -> Matrix4<Complex64> {
    let mut yy = Matrix4::<Complex64>::zeros();
    let one = Complex64::new(1.0, 0.0);
    yy[(0, 3)] = -one;
    yy[(1, 2)] = one;
    yy[(2, 1)] = one;
    yy[(3, 0)] = -one;
    yy
}

/// The Wootters spin flip `rho_tilde = (sy (x) sy) conj(rho) (sy (x) sy)`.
pub fn spin_flip(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let yy = yy_matrix();
    yy * rho.map(|z| z.conj()) * yy
}

/// Wootters concurrence `C = max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) -
/// sqrt(mu4))`, with `mu_i` the descending eigenvalues of `rho rho_tilde`.
///
/// The square roots are obtained directly as the singular values of the
/// complex-symmetric matrix `A = L^T (sy (x) sy) L` with `rho = L L^H`:
/// `A^H A` is similar to `rho_tilde rho`, so `sv(A)_i = sqrt(mu_i)`. This
/// avoids forming `rho rho_tilde` (which squares the conditioning and limits
/// small concurrences to ~1e-8 absolute); the singular values carry only
/// machine-epsilon absolute error.
pub fn concurrence(rho: &Matrix4<Complex64>) -> Result<f64> {
    validate_density(rho)?;
    let h = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut l = eig.eigenvectors;
    for j in 0..4 {
        let s = Complex64::new(eig.eigenvalues[j].max(0.0).sqrt(), 0.0);
        for i in 0..4 {
            l[(i, j)] *= s;
        }
    }
    let a = l.transpose() * yy_matrix() * l;
    // singular values via the Hermitian embedding [[0, A], [A^H, 0]], whose
    // spectrum is {+-sv(A)}; nalgebra's direct complex SVD is not trustworthy
    let mut emb = nalgebra::SMatrix::<Complex64, 8, 8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            emb[(i, 4 + j)] = a[(i, j)];
            emb[(4 + i, j)] = a[(j, i)].conj();
        }
    }
    let mut ev: [f64; 8] = [0.0; 8];
    for (o, &s) in ev.iter_mut().zip(emb.symmetric_eigen().eigenvalues.iter()) {
        *o = s;
    }
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let sv = &ev[..4];
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// Partial transpose on qubit B: `[rho^TB]_{(i,k),(j,l)} = rho_{(i,l),(j,k)}`.
pub fn partial_transpose_b(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::<Complex64>::zeros();
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = rho[(2 * i + l, 2 * j + k)];
                }
            }
        }
    }
    out
}

/// Negativity: sum of magnitudes of the negative eigenvalues of the partial
/// transpose on qubit B.
pub fn negativity4(rho: &Matrix4<Complex64>) -> Result<f64> {
    validate_density(rho)?;
    let pt = partial_transpose_b(rho);
    let n: f64 = hermitian_eigenvalues(&pt).iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    Ok(n.min(0.5))
}

/// Entanglement of formation in bits: `h((1 + sqrt(1 - C^2)) / 2)`.
pub fn eof(c: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(Error::Domain("concurrence outside [0, 1]"));
    }
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// Von Neumann entropy in bits of a Hermitian PSD unit-trace 2x2 matrix.
pub fn vn_entropy(m: &Matrix2<Complex64>) -> Result<f64> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1.0);
    if (m - m.adjoint()).iter().any(|z| z.norm() > 1e-9 * scale) {
        return Err(Error::InvalidState("matrix is not Hermitian"));
    }
    if (m.trace() - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
        return Err(Error::InvalidState("matrix trace is not 1"));
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut s = 0.0;
    for &l in eig.eigenvalues.iter() {
        if l < -PSD_TOL {
            return Err(Error::InvalidState("matrix has a negative eigenvalue"));
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Alice's reduced 2x2 state (trace over B).
pub fn partial_trace_b(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|i, j| rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)])
}

/// Bob's reduced 2x2 state (trace over A).
pub fn partial_trace_a(rho: &Matrix4<Complex64>) -> Matrix2<Complex64> {
    Matrix2::from_fn(|k, l| rho[(k, l)] + rho[(2 + k, 2 + l)])
}

/// All measures at once.
pub fn measure_report(rho: &Matrix4<Complex64>) -> Result<MeasureReport> {
    let c = concurrence(rho)?;
    Ok(MeasureReport {
        concurrence: c,
        tangle: c * c,
        eof: eof(c)?,
        negativity: negativity4(rho)?,
        vn_entropy_a: vn_entropy(&partial_trace_b(rho))?,
    })
}

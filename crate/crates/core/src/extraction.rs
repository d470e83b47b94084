//! Effective Pauli operators on the local two-dimensional subspace and the
//! three-gate SWAP that transfers the filtered entanglement onto true
//! ancilla qubits.
//!
//! In the region basis `{phi_0, phi_1}` the operator `X = sqrt(3) q / a` has
//! exactly the matrix `sigma_x`. The naive projection of
//! `Y = -2 a p / sqrt(3)` is non-Hermitian (a boundary term at the region
//! edges survives the truncation); its Hermitization is `-sigma_y`, which
//! fixes the local qubit frame used by the SWAP composition.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
// float intrinsics for no_std builds; test builds unify num-traits/std and shadow it
#[allow(unused_imports)]
use num_traits::Float;

use crate::qubit::{project_two_qubit, validity_spectrum, Region};
use crate::state::OscillatorSystem;
use crate::two_qubit::{concurrence, validate_density};
use crate::{Error, Result};

/// Effective Pauli operators in the `{phi_0, phi_1}` basis of one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePauli {
    pub half_width: f64,
    /// Matrix of `sqrt(3) q / a`: exactly `sigma_x`.
    pub x_eff: Matrix2<Complex64>,
    /// Hermitized matrix of `-2 a p / sqrt(3)`: exactly `-sigma_y`.
    pub y_eff: Matrix2<Complex64>,
}

fn sigma_x() -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    )
}

fn sigma_y() -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
    )
}

/// Raw (unsymmetrized) matrix of the momentum operator `p = -i d/dx`
/// truncated to `{phi_0, phi_1}`: strictly upper triangular, since
/// `phi_0' = 0` inside the region and the `<phi_1| p |phi_0>` boundary term
/// is lost by the truncation.
pub fn truncated_momentum(a: f64) -> Result<Matrix2<Complex64>> {
    if !(a > 0.0) {
        return Err(Error::Parameter("half-width must be positive"));
    }
    // <phi_0| p |phi_1> = -i sqrt(1/2a) sqrt(3/2a^3) * 2a = -i sqrt(3)/a
    let mut m = Matrix2::zeros();
    m[(0, 1)] = Complex64::new(0.0, -(3.0f64).sqrt() / a);
    Ok(m)
}

/// The effective Pauli pair for a region of half-width `a`.
pub fn effective_pauli(a: f64) -> Result<EffectivePauli> {
    let raw = truncated_momentum(a)?;
    let herm = (raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    let y_eff = herm * Complex64::new(-2.0 * a / (3.0f64).sqrt(), 0.0);
    Ok(EffectivePauli { half_width: a, x_eff: sigma_x(), y_eff })
}

fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `exp(i theta H)` for Hermitian `H`.
fn expi(theta: f64, h: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut d = Matrix4::<Complex64>::zeros();
    for i in 0..4 {
        d[(i, i)] = Complex64::from_polar(1.0, theta * eig.eigenvalues[i]);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// The three-factor SWAP in the (ancilla qubit (x) effective qubit)
/// representation:
/// `U = F_1 F_2 F_1` with
/// `F_1 = exp[i pi/4 (-sigma_y (x) 1 - 1)(1 (x) X_eff - 1)]` and
/// `F_2 = exp[i pi/4 ( sigma_x (x) 1 - 1)(1 (x) Y_eff - 1)]`.
///
/// The ancilla operators `(sigma_x, -sigma_y)` mirror the effective pair
/// `(X_eff, Y_eff)`; with matching frames the composition is the standard
/// SWAP up to a global phase.
pub fn u_swap_qubit_rep() -> Result<Matrix4<Complex64>> {
    let pauli = effective_pauli(1.0)?;
    let id = Matrix2::identity();
    let ancilla_y = -sigma_y();
    let ancilla_x = sigma_x();
    let one = Matrix4::<Complex64>::identity();
    let theta = core::f64::consts::FRAC_PI_4;
    let f1 = expi(theta, &((kron2(&ancilla_y, &id) - one) * (kron2(&id, &pauli.x_eff) - one)));
    let f2 = expi(theta, &((kron2(&ancilla_x, &id) - one) * (kron2(&id, &pauli.y_eff) - one)));
    let u = f1 * f2 * f1;
    if (&u * u.adjoint() - one).norm() > 1e-12 {
        return Err(Error::Consistency("SWAP composition is not unitary"));
    }
    Ok(u)
}

/// Outcome of a simulated extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionReport {
    /// Concurrence of the two ancilla qubits after the SWAPs.
    pub ancilla_concurrence: f64,
    /// Concurrence of the effective two-qubit state before extraction.
    pub reference_concurrence: f64,
    /// Validity metric `lambda_3 / lambda_2` of the filtered reduced state.
    pub lambda_ratio: f64,
}

/// Simulate the extraction protocol for the ground state of `sys` on a
/// filter region: localize (filter + two-level reduction), attach ancilla
/// qubits in `|0>`, apply the qubit-representation SWAP on each side, trace
/// out the continuous subspaces and measure the ancilla concurrence.
///
/// The two-level simulation is gated on `lambda_3 / lambda_2 <= 1e-2` from
/// [`validity_spectrum`]; larger regions are rejected.
pub fn simulate_extraction(
    sys: &OscillatorSystem,
    region: &Region,
    grid_n: usize,
) -> Result<(f64, ExtractionReport)> {
    let wf = sys.ground_wavefunction();
    let lam = validity_spectrum(|qa, qb| wf.eval(qa, qb), region, grid_n)?;
    let ratio = if lam[1] > 1e-14 { lam[2] / lam[1] } else { 0.0 };
    if ratio > 1e-2 {
        return Err(Error::RegionTooLarge(ratio));
    }
    let (eff, _) = project_two_qubit(&sys.ground_state(), region, 16)?;
    let reference = concurrence(&eff.matrix)?;

    // full space (aA, eA, aB, eB), index aA*8 + eA*4 + aB*2 + eB
    let u = u_swap_qubit_rep()?;
    let dim = 16;
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for ea in 0..2usize {
        for eb in 0..2usize {
            for ea_p in 0..2usize {
                for eb_p in 0..2usize {
                    rho[(ea * 4 + eb, ea_p * 4 + eb_p)] =
                        eff.matrix[(2 * ea + eb, 2 * ea_p + eb_p)];
                }
            }
        }
    }
    // U_A acts on (aA, eA), U_B on (aB, eB)
    let mut u_full = DMatrix::<Complex64>::zeros(dim, dim);
    for r in 0..dim {
        let (aa, ea, ab, eb) = (r >> 3 & 1, r >> 2 & 1, r >> 1 & 1, r & 1);
        for c in 0..dim {
            let (aa_p, ea_p, ab_p, eb_p) = (c >> 3 & 1, c >> 2 & 1, c >> 1 & 1, c & 1);
            u_full[(r, c)] =
                u[(2 * aa + ea, 2 * aa_p + ea_p)] * u[(2 * ab + eb, 2 * ab_p + eb_p)];
        }
    }
    let rho = &u_full * rho * u_full.adjoint();
    // trace out both effective subspaces
    let mut anc = Matrix4::<Complex64>::zeros();
    for aa in 0..2usize {
        for ab in 0..2usize {
            for aa_p in 0..2usize {
                for ab_p in 0..2usize {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for ea in 0..2usize {
                        for eb in 0..2usize {
                            sum += rho[(aa * 8 + ea * 4 + ab * 2 + eb,
                                        aa_p * 8 + ea * 4 + ab_p * 2 + eb)];
                        }
                    }
                    anc[(2 * aa + ab, 2 * aa_p + ab_p)] = sum;
                }
            }
        }
    }
    validate_density(&anc)?;
    let c = concurrence(&anc)?;
    Ok((c, ExtractionReport { ancilla_concurrence: c, reference_concurrence: reference, lambda_ratio: ratio }))
}

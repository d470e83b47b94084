//! Covariance-matrix reference values: global negativity and the full-state
//! reduced entropy.
//!
//! Convention: ordering `(q_A, p_A, q_B, p_B)`, vacuum diagonal entries 1/2
//! at `m = w = 1`, so pure two-mode Gaussian states satisfy
//! `det sigma = 1/16` and physicality reads `nu_j >= 1/2` for all symplectic
//! eigenvalues.

use nalgebra::{Matrix2, Matrix4};
// float intrinsics for no_std builds; test builds unify num-traits/std and shadow it
#[allow(unused_imports)]
use num_traits::Float;

use crate::state::OscillatorSystem;
use crate::{Error, Result};

/// Second-moment (covariance) matrix of a two-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance4 {
    mat: Matrix4<f64>,
}

impl Covariance4 {
    /// Validates symmetry and physicality (`sigma + i Omega / 2 >= 0`, i.e.
    /// all symplectic eigenvalues at least `1/2 - 1e-10`).
    pub fn new(mat: Matrix4<f64>) -> Result<Self> {
        let scale = mat.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1.0);
        if (mat - mat.transpose()).iter().any(|v| v.abs() > 1e-10 * scale) {
            return Err(Error::InvalidState("covariance matrix is not symmetric"));
        }
        let cov = Self { mat };
        let (nu1, nu2) = cov.symplectic_eigenvalues()?;
        if nu1 < 0.5 - 1e-10 || nu2 < 0.5 - 1e-10 {
            return Err(Error::InvalidState("covariance matrix violates the uncertainty bound"));
        }
        Ok(cov)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.mat
    }

    fn blocks(&self) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
        let a = self.mat.fixed_view::<2, 2>(0, 0).into_owned();
        let b = self.mat.fixed_view::<2, 2>(2, 2).into_owned();
        let c = self.mat.fixed_view::<2, 2>(0, 2).into_owned();
        (a, b, c)
    }

    /// Two-mode symplectic eigenvalues, ascending: the singular values of
    /// `sqrt(sigma) Omega sqrt(sigma)` (each appearing twice). This route
    /// keeps full precision near purity, where the textbook
    /// `Delta`-invariant formula loses half the digits to cancellation.
    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        nu_pair(&self.mat)
    }

    /// Smallest symplectic eigenvalue of the partially transposed covariance
    /// (`p_B -> -p_B`).
    pub fn nu_tilde(&self) -> Result<f64> {
        let flip = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        Ok(nu_pair(&(flip * self.mat * flip))?.0)
    }
}

fn nu_pair(sigma: &Matrix4<f64>) -> Result<(f64, f64)> {
    let eig = sigma.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidState("covariance matrix is not positive definite"));
    }
    let mut d = Matrix4::<f64>::zeros();
    for i in 0..4 {
        d[(i, i)] = eig.eigenvalues[i].sqrt();
    }
    let root = &eig.eigenvectors * d * eig.eigenvectors.transpose();
    let mut omega = Matrix4::<f64>::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    let k = &root * omega * root;
    let svd = k.svd(false, false);
    let mut sv: [f64; 4] = [0.0; 4];
    for (o, &s) in sv.iter_mut().zip(svd.singular_values.iter()) {
        *o = s;
    }
    sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((sv[0], sv[2]))
}

/// Covariance matrix of the (possibly thermal) state of `sys`: normal-mode
/// moments `<q_s^2> = coth(w_s / 2T) / (2 m w_s)`,
/// `<p_s^2> = (m w_s / 2) coth(w_s / 2T)` rotated to particle coordinates;
/// `T = 0` uses `coth -> 1`.
pub fn covariance_from_system(sys: &OscillatorSystem, t: f64) -> Result<Covariance4> {
    if t < 0.0 {
        return Err(Error::Parameter("temperature must be non-negative"));
    }
    let coth = |w: f64| if t == 0.0 { 1.0 } else { 1.0 / (w / (2.0 * t)).tanh() };
    let (wp, wm) = (sys.omega_plus, sys.omega_minus);
    let q2p = coth(wp) / (2.0 * sys.mass * wp);
    let q2m = coth(wm) / (2.0 * sys.mass * wm);
    let p2p = 0.5 * sys.mass * wp * coth(wp);
    let p2m = 0.5 * sys.mass * wm * coth(wm);
    // normal modes q_+- = (q_A +- q_B)/sqrt(2):
    // <q_A^2> = <q_B^2> = (<q_+^2> + <q_-^2>)/2, <q_A q_B> = (<q_+^2> - <q_-^2>)/2
    let qaa = 0.5 * (q2p + q2m);
    let qab = 0.5 * (q2p - q2m);
    let paa = 0.5 * (p2p + p2m);
    let pab = 0.5 * (p2p - p2m);
    let mut m = Matrix4::zeros();
    m[(0, 0)] = qaa;
    m[(2, 2)] = qaa;
    m[(1, 1)] = paa;
    m[(3, 3)] = paa;
    m[(0, 2)] = qab;
    m[(2, 0)] = qab;
    m[(1, 3)] = pab;
    m[(3, 1)] = pab;
    Covariance4::new(m)
}

/// Global negativity `N_g = max(0, (1 - 2 nu_tilde) / (4 nu_tilde))` from the
/// smallest symplectic eigenvalue of the partially transposed covariance.
pub fn global_negativity(cov: &Covariance4) -> Result<f64> {
    let nt = cov.nu_tilde()?;
    if !(nt > 0.0) {
        return Err(Error::InvalidState("degenerate partially transposed covariance"));
    }
    Ok(((1.0 - 2.0 * nt) / (4.0 * nt)).max(0.0))
}

/// Von Neumann entropy (bits) of Alice's reduction of a pure global Gaussian
/// state: `nu = sqrt(det sigma_A)`,
/// `S = (nu + 1/2) log2(nu + 1/2) - (nu - 1/2) log2(nu - 1/2)`.
///
/// Mixed global states (`det sigma != 1/16`) are rejected; the saturation
/// comparison is defined for the ground state only.
pub fn reduced_entropy_global(cov: &Covariance4) -> Result<f64> {
    let det = cov.matrix().determinant();
    if (det - 0.0625).abs() > 1e-6 {
        return Err(Error::Unsupported("reduced entropy reference requires a pure global state"));
    }
    let (a, _, _) = cov.blocks();
    let nu = a.determinant().max(0.0).sqrt();
    let plus = nu + 0.5;
    let minus = nu - 0.5;
    let term = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    Ok((term(plus) - term(minus)).max(0.0))
}

/// Temperature at which the global negativity of `sys` first vanishes,
/// located by bisection to `tol` (the negativity is monotonically
/// decreasing in `T` for these states).
pub fn global_negativity_threshold(
    sys: &OscillatorSystem,
    t_lo: f64,
    t_hi: f64,
    tol: f64,
) -> Result<f64> {
    if !(t_hi > t_lo && t_lo >= 0.0 && tol > 0.0) {
        return Err(Error::Parameter("invalid bisection bracket"));
    }
    let entangled = |t: f64| -> Result<bool> {
        Ok(global_negativity(&covariance_from_system(sys, t)?)? > 0.0)
    };
    if !entangled(t_lo)? || entangled(t_hi)? {
        return Err(Error::Parameter("bracket does not straddle the threshold"));
    }
    let (mut lo, mut hi) = (t_lo, t_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if entangled(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

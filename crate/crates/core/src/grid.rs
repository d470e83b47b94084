//! Brute-force grid oracles: discretized wavefunctions and density matrices,
//! projective filtering, Schmidt entropies and grid-level partial-transpose
//! negativity.
//!
//! Everything here is deliberately direct — trapezoid weights, dense
//! eigenproblems, spectral sums — so it can serve as an independent check on
//! the leading-order formulas in [`crate::measures`] and the quadrature
//! reductions in [`crate::qubit`].

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
// float intrinsics for no_std builds; test builds unify num-traits/std and shadow it
#[allow(unused_imports)]
use num_traits::Float;

use crate::measures::binary_entropy_inv;
use crate::state::OscillatorSystem;
use crate::{Error, Result};

/// Default cap on the composite dimension `n_A * n_B` of dense grid
/// eigenproblems.
pub const DEFAULT_GRID_BUDGET: usize = 4096;

/// Number of oscillator eigenfunctions in thermal spectral sums.
pub const THERMAL_MODE_BUDGET: usize = 60;

/// A uniform 1D grid with trapezoid quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::Parameter("grid upper bound must exceed lower bound"));
        }
        if n < 16 {
            return Err(Error::Parameter("grid must have at least 16 points"));
        }
        Ok(Self { lo, hi, n })
    }

    /// Symmetric grid on `[-lim, lim]`.
    pub fn symmetric(lim: f64, n: usize) -> Result<Self> {
        Self::new(-lim, lim, n)
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Trapezoid weights (half weight at the endpoints).
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }

    /// Index of the node nearest to `x` (clamped to the grid).
    pub fn snap(&self, x: f64) -> usize {
        let i = ((x - self.lo) / self.spacing() + 0.5).floor();
        (i.max(0.0) as usize).min(self.n - 1)
    }

    /// Snap an interval to node indices; the snapped node values are what
    /// all filtered quantities refer to.
    pub fn snap_interval(&self, lo: f64, hi: f64) -> Result<(usize, usize)> {
        let (i, j) = (self.snap(lo), self.snap(hi));
        if j <= i {
            return Err(Error::Parameter("snapped interval collapses to a single node"));
        }
        Ok((i, j))
    }

    /// Sub-grid over the snapped index range `[i, j]`.
    fn slice(&self, i: usize, j: usize) -> Grid1D {
        Grid1D { lo: self.node(i), hi: self.node(j), n: j - i + 1 }
    }
}

/// A pure two-mode state sampled on a grid pair, normalized under trapezoid
/// weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPureState {
    pub grid_a: Grid1D,
    pub grid_b: Grid1D,
    /// Amplitudes `psi(q_A[i], q_B[j])`.
    pub amp: DMatrix<Complex64>,
}

/// A two-mode density matrix on the composite grid index `I = i_A n_B + i_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    pub grid_a: Grid1D,
    pub grid_b: Grid1D,
    /// Kernel values `rho(q_I; q_J)`; Hermitian, unit trace under weights.
    pub mat: DMatrix<Complex64>,
    /// For non-discarding ensembles: whether each Alice node lies inside the
    /// filtered region (cross-block coherences are exactly zero).
    pub block_mask: Option<Vec<bool>>,
}

impl GridDensity {
    /// Composite trapezoid weights in index order `I = i_A n_B + i_B`.
    pub fn composite_weights(&self) -> Vec<f64> {
        let wa = self.grid_a.weights();
        let wb = self.grid_b.weights();
        let mut w = Vec::with_capacity(wa.len() * wb.len());
        for &x in &wa {
            for &y in &wb {
                w.push(x * y);
            }
        }
        w
    }

    pub fn trace(&self) -> f64 {
        self.composite_weights()
            .iter()
            .enumerate()
            .map(|(i, w)| w * self.mat[(i, i)].re)
            .sum()
    }
}

/// Sample without containment checks; returns the state and the quadrature
/// norm before renormalization.
fn sample_pure(
    psi: &impl Fn(f64, f64) -> Complex64,
    grid_a: &Grid1D,
    grid_b: &Grid1D,
) -> Result<(GridPureState, f64)> {
    let xa = grid_a.nodes();
    let xb = grid_b.nodes();
    let mut amp = DMatrix::<Complex64>::from_fn(grid_a.n, grid_b.n, |i, j| psi(xa[i], xb[j]));
    let wa = grid_a.weights();
    let wb = grid_b.weights();
    let mut norm_sq = 0.0;
    for i in 0..grid_a.n {
        for j in 0..grid_b.n {
            norm_sq += wa[i] * wb[j] * amp[(i, j)].norm_sqr();
        }
    }
    if norm_sq < 1e-300 {
        return Err(Error::EmptyRegion(norm_sq));
    }
    let norm = norm_sq.sqrt();
    amp /= Complex64::new(norm, 0.0);
    Ok((GridPureState { grid_a: grid_a.clone(), grid_b: grid_b.clone(), amp }, norm))
}

/// Discretize a wavefunction, checking containment (boundary probability
/// below 1e-10 of the peak) and renormalizing under trapezoid weights.
///
/// Returns the state and the renormalization factor (the pre-normalization
/// quadrature norm; within 1e-4 of 1 for well-contained normalized states).
pub fn discretize_pure(
    psi: impl Fn(f64, f64) -> Complex64,
    grid_a: &Grid1D,
    grid_b: &Grid1D,
) -> Result<(GridPureState, f64)> {
    let (state, norm) = sample_pure(&psi, grid_a, grid_b)?;
    let peak = state.amp.iter().map(|z| z.norm_sqr()).fold(0.0f64, f64::max);
    let (na, nb) = (grid_a.n, grid_b.n);
    let mut boundary: f64 = 0.0;
    for i in 0..na {
        boundary = boundary
            .max(state.amp[(i, 0)].norm_sqr())
            .max(state.amp[(i, nb - 1)].norm_sqr());
    }
    for j in 0..nb {
        boundary = boundary
            .max(state.amp[(0, j)].norm_sqr())
            .max(state.amp[(na - 1, j)].norm_sqr());
    }
    if boundary > 1e-10 * peak {
        return Err(Error::Domain("state is not contained within the grid bounds"));
    }
    Ok((state, norm))
}

/// Projective position filter on the discarding ensemble of a pure state.
///
/// Region edges are snapped to grid nodes; the filtered state is re-sampled
/// on the sub-grids (its own trapezoid rule, so captured probabilities are
/// second-order accurate) and renormalized. Returns the state and `p`, the
/// captured probability.
pub fn filter_discard_pure(
    state: &GridPureState,
    region_a: (f64, f64),
    region_b: Option<(f64, f64)>,
) -> Result<(GridPureState, f64)> {
    let (ia, ja) = state.grid_a.snap_interval(region_a.0, region_a.1)?;
    let (ib, jb) = match region_b {
        Some(r) => state.grid_b.snap_interval(r.0, r.1)?,
        None => (0, state.grid_b.n - 1),
    };
    let sub_a = state.grid_a.slice(ia, ja);
    let sub_b = state.grid_b.slice(ib, jb);
    let amp = state.amp.view((ia, ib), (sub_a.n, sub_b.n)).into_owned();
    let wa = sub_a.weights();
    let wb = sub_b.weights();
    let mut p = 0.0;
    for i in 0..sub_a.n {
        for j in 0..sub_b.n {
            p += wa[i] * wb[j] * amp[(i, j)].norm_sqr();
        }
    }
    if p < 1e-12 {
        return Err(Error::EmptyRegion(p));
    }
    let amp = amp / Complex64::new(p.sqrt(), 0.0);
    Ok((GridPureState { grid_a: sub_a, grid_b: sub_b, amp }, p))
}

/// Projective position filter on the discarding ensemble of a density
/// matrix; same snapping and renormalization conventions as
/// [`filter_discard_pure`].
pub fn filter_discard_density(
    rho: &GridDensity,
    region_a: (f64, f64),
    region_b: Option<(f64, f64)>,
) -> Result<(GridDensity, f64)> {
    let (ia, ja) = rho.grid_a.snap_interval(region_a.0, region_a.1)?;
    let (ib, jb) = match region_b {
        Some(r) => rho.grid_b.snap_interval(r.0, r.1)?,
        None => (0, rho.grid_b.n - 1),
    };
    let sub_a = rho.grid_a.slice(ia, ja);
    let sub_b = rho.grid_b.slice(ib, jb);
    let (na, nb) = (sub_a.n, sub_b.n);
    let nb_full = rho.grid_b.n;
    let mut mat = DMatrix::<Complex64>::zeros(na * nb, na * nb);
    for i in 0..na {
        for j in 0..nb {
            let src_i = (ia + i) * nb_full + ib + j;
            for k in 0..na {
                for l in 0..nb {
                    let src_j = (ia + k) * nb_full + ib + l;
                    mat[(i * nb + j, k * nb + l)] = rho.mat[(src_i, src_j)];
                }
            }
        }
    }
    let out = GridDensity { grid_a: sub_a, grid_b: sub_b, mat, block_mask: None };
    let p = out.trace();
    if p < 1e-12 {
        return Err(Error::EmptyRegion(p));
    }
    let mut out = out;
    out.mat /= Complex64::new(p, 0.0);
    Ok((out, p))
}

/// Non-discarding ensemble `rho_ND = E rho E + E' rho E'` of a pure state for
/// an Alice-side filter: both outcomes are kept but the coherence between
/// them is removed. Node membership in the snapped region defines the
/// discrete projector, so the block structure is exact.
pub fn build_nondiscard(state: &GridPureState, region_a: (f64, f64)) -> Result<GridDensity> {
    let (ia, ja) = state.grid_a.snap_interval(region_a.0, region_a.1)?;
    let (na, nb) = (state.grid_a.n, state.grid_b.n);
    let mask: Vec<bool> = (0..na).map(|i| i >= ia && i <= ja).collect();
    let dim = na * nb;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..na {
        for j in 0..nb {
            for k in 0..na {
                if mask[i] != mask[k] {
                    continue;
                }
                for l in 0..nb {
                    mat[(i * nb + j, k * nb + l)] = state.amp[(i, j)] * state.amp[(k, l)].conj();
                }
            }
        }
    }
    Ok(GridDensity {
        grid_a: state.grid_a.clone(),
        grid_b: state.grid_b.clone(),
        mat,
        block_mask: Some(mask),
    })
}

/// Schmidt coefficients `lambda_i` (descending, summing to 1) of a pure grid
/// state: squared singular values of the weighted amplitude matrix.
pub fn schmidt_coefficients(state: &GridPureState) -> Result<Vec<f64>> {
    let wa = state.grid_a.weights();
    let wb = state.grid_b.weights();
    let m = DMatrix::<Complex64>::from_fn(state.grid_a.n, state.grid_b.n, |i, j| {
        state.amp[(i, j)] * Complex64::new((wa[i] * wb[j]).sqrt(), 0.0)
    });
    let svd = m.svd(false, false);
    let total: f64 = svd.singular_values.iter().map(|s| s * s).sum();
    if !(total > 0.0) {
        return Err(Error::Numeric("SVD of the weighted amplitude matrix failed", total));
    }
    let mut lam: Vec<f64> = svd.singular_values.iter().map(|s| s * s / total).collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(lam)
}

/// Schmidt entropy in bits. Full mode: `-sum lambda log2 lambda`. Two-level
/// mode: binary entropy of the top two coefficients renormalized.
pub fn schmidt_entropy(state: &GridPureState, two_level_only: bool) -> Result<f64> {
    let lam = schmidt_coefficients(state)?;
    if two_level_only {
        let top = lam[0] + lam[1];
        let e = lam[1] / top;
        let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
        Ok(term(e) + term(1.0 - e))
    } else {
        Ok(lam.iter().map(|&l| if l > 0.0 { -l * l.log2() } else { 0.0 }).sum())
    }
}

/// Density-matrix form `rho = |psi><psi|` of a pure grid state.
pub fn density_from_pure(state: &GridPureState) -> GridDensity {
    let (na, nb) = (state.grid_a.n, state.grid_b.n);
    let dim = na * nb;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..na {
        for j in 0..nb {
            for k in 0..na {
                for l in 0..nb {
                    mat[(i * nb + j, k * nb + l)] = state.amp[(i, j)] * state.amp[(k, l)].conj();
                }
            }
        }
    }
    GridDensity { grid_a: state.grid_a.clone(), grid_b: state.grid_b.clone(), mat, block_mask: None }
}

/// Grid-level negativity: partial transpose on Bob's indices, then the sum
/// of magnitudes of negative eigenvalues under quadrature weighting.
pub fn grid_negativity(rho: &GridDensity, budget: usize) -> Result<f64> {
    let (na, nb) = (rho.grid_a.n, rho.grid_b.n);
    let dim = na * nb;
    if dim > budget {
        return Err(Error::Budget { dim, budget });
    }
    let w = rho.composite_weights();
    let sqrt_w: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    // weighted partial transpose: PT[(i,j),(k,l)] = rho[(i,l),(k,j)]
    let pt = DMatrix::<Complex64>::from_fn(dim, dim, |r, c| {
        let (i, j) = (r / nb, r % nb);
        let (k, l) = (c / nb, c % nb);
        rho.mat[(i * nb + l, k * nb + j)] * Complex64::new(sqrt_w[r] * sqrt_w[c], 0.0)
    });
    // our physical kernels are real; use the much faster real solver then
    let max_im = pt.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
    let scale = pt.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1e-300);
    let neg_sum = if max_im < 1e-13 * scale {
        let re = pt.map(|z| z.re);
        let sym = (&re + re.transpose()) * 0.5;
        sym.symmetric_eigen().eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum()
    } else {
        let herm = (&pt + pt.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigen().eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum()
    };
    Ok(neg_sum)
}

/// Normalized Hermite functions `h_0 .. h_nmax` at `u`:
/// `h_n(u) = (2^n n! sqrt(pi))^{-1/2} H_n(u) e^{-u^2/2}`.
pub fn hermite_functions(nmax: usize, u: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(nmax + 1);
    h.push(core::f64::consts::PI.powf(-0.25) * (-0.5 * u * u).exp());
    if nmax >= 1 {
        h.push(2.0f64.sqrt() * u * h[0]);
    }
    for n in 2..=nmax {
        let nf = n as f64;
        let next = u * (2.0 / nf).sqrt() * h[n - 1] - ((nf - 1.0) / nf).sqrt() * h[n - 2];
        h.push(next);
    }
    h
}

/// Boltzmann weights of the first `nmax + 1` oscillator levels at frequency
/// `omega` (T = 0 collapses onto the ground level). The discarded tail must
/// be below 1e-12.
fn boltzmann_weights(omega: f64, t: f64, nmax: usize) -> Result<Vec<f64>> {
    if t == 0.0 {
        let mut w = vec![0.0; nmax + 1];
        w[0] = 1.0;
        return Ok(w);
    }
    let x = (-omega / t).exp();
    // geometric tail after truncation: x^(nmax+1)
    if x.powi(nmax as i32 + 1) > 1e-12 {
        return Err(Error::Parameter("temperature too high for the spectral-mode budget"));
    }
    let mut w: Vec<f64> = (0..=nmax).map(|n| x.powi(n as i32)).collect();
    let sum: f64 = w.iter().sum();
    for v in &mut w {
        *v /= sum;
    }
    Ok(w)
}

/// Single-mode thermal density kernel in closed form,
/// `rho(x, x') = z exp(-l (x^2 + x'^2) - (mu/2)(x - x')^2)`.
pub fn thermal_kernel_1d(mass: f64, omega: f64, t: f64, x: f64, x_p: f64) -> f64 {
    let (l, mu) = if t == 0.0 {
        (0.5 * mass * omega, 0.0)
    } else {
        (0.5 * mass * omega * (omega / (2.0 * t)).tanh(), mass * omega / (omega / t).sinh())
    };
    let z = (2.0 * l / core::f64::consts::PI).sqrt();
    z * (-l * (x * x + x_p * x_p) - 0.5 * mu * (x - x_p) * (x - x_p)).exp()
}

/// Eigenvalues (descending, summing to 1) of the single-mode thermal state
/// filtered to `[center - a, center + a]` and renormalized, on an `n`-point
/// grid over the region.
pub fn filtered_spectrum_1d(
    mass: f64,
    omega: f64,
    t: f64,
    center: f64,
    a: f64,
    n: usize,
) -> Result<Vec<f64>> {
    if !(a > 0.0) {
        return Err(Error::Parameter("filter half-width must be positive"));
    }
    let grid = Grid1D::new(center - a, center + a, n)?;
    let xs = grid.nodes();
    let w = grid.weights();
    let mut m = DMatrix::<f64>::from_fn(n, n, |i, j| {
        (w[i] * w[j]).sqrt() * thermal_kernel_1d(mass, omega, t, xs[i], xs[j])
    });
    let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
    if trace < 1e-300 {
        return Err(Error::EmptyRegion(trace));
    }
    m /= trace;
    let sym = (&m + m.transpose()) * 0.5;
    let mut lam: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().cloned().collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(lam)
}

/// Thermal two-mode density matrix on a grid pair, built by spectral sums
/// over normal-mode eigenfunctions (the oracle for the closed-form Gaussian
/// kernel). Normalized to unit trace under the grid weights.
pub fn thermal_density_grid(
    sys: &OscillatorSystem,
    t: f64,
    grid_a: &Grid1D,
    grid_b: &Grid1D,
) -> Result<GridDensity> {
    if t < 0.0 {
        return Err(Error::Parameter("temperature must be non-negative"));
    }
    let nmax = THERMAL_MODE_BUDGET;
    let wts_p = boltzmann_weights(sys.omega_plus, t, nmax)?;
    let wts_m = boltzmann_weights(sys.omega_minus, t, nmax)?;
    let (na, nb) = (grid_a.n, grid_b.n);
    let dim = na * nb;
    let xa = grid_a.nodes();
    let xb = grid_b.nodes();
    // per-mode tables Phi_s[I, n] = sqrt(p_n) phi_n(u_s(I)) with
    // phi_n(x) = (m w_s)^(1/4) h_n(sqrt(m w_s) x); the mode kernel is the
    // Gram matrix Phi Phi^T and the full density their elementwise product
    let mut gram_p = DMatrix::<f64>::zeros(dim, dim);
    let mut gram_m = DMatrix::<f64>::zeros(dim, dim);
    for (plus, wts, omega_s, gram) in [
        (true, &wts_p, sys.omega_plus, &mut gram_p),
        (false, &wts_m, sys.omega_minus, &mut gram_m),
    ] {
        let scale = (sys.mass * omega_s).sqrt();
        let mut table = DMatrix::<f64>::zeros(dim, nmax + 1);
        for idx in 0..dim {
            let (i, j) = (idx / nb, idx % nb);
            let u = if plus {
                (xa[i] + xb[j]) / 2.0f64.sqrt()
            } else {
                (xa[i] - xb[j]) / 2.0f64.sqrt()
            };
            let h = hermite_functions(nmax, scale * u);
            for (nn, &hv) in h.iter().enumerate() {
                table[(idx, nn)] = scale.sqrt() * hv * wts[nn].sqrt();
            }
        }
        *gram = &table * table.transpose();
    }
    let mut mat = DMatrix::<Complex64>::from_fn(dim, dim, |i, j| {
        Complex64::new(gram_p[(i, j)] * gram_m[(i, j)], 0.0)
    });
    let wa = grid_a.weights();
    let wb = grid_b.weights();
    let mut trace = 0.0;
    for idx in 0..dim {
        let (i, j) = (idx / nb, idx % nb);
        trace += wa[i] * wb[j] * mat[(idx, idx)].re;
    }
    if trace < 1e-300 {
        return Err(Error::EmptyRegion(trace));
    }
    mat /= Complex64::new(trace, 0.0);
    Ok(GridDensity { grid_a: grid_a.clone(), grid_b: grid_b.clone(), mat, block_mask: None })
}

/// One row of a Fig. 1-style sweep over region sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Full region width `2a` (square regions, `a = b`).
    pub two_a: f64,
    pub s_full_bits: f64,
    pub s_twolevel_bits: f64,
    /// Concurrence density recovered by inverting the two-level entropy.
    pub c_estimate: f64,
}

/// Sweep the ground state of `sys` over square filter regions of full width
/// `sizes`, reporting full and two-level Schmidt entropies and the recovered
/// concurrence density. The filtered state is re-discretized on an
/// `n`-point-per-axis grid over each region.
pub fn region_sweep(
    sys: &OscillatorSystem,
    sizes: &[f64],
    center: (f64, f64),
    n: usize,
) -> Result<Vec<SweepRow>> {
    let wf = sys.ground_wavefunction();
    let mut rows = Vec::with_capacity(sizes.len());
    for &two_a in sizes {
        if !(two_a > 0.0) {
            return Err(Error::Parameter("region sizes must be positive"));
        }
        let a = 0.5 * two_a;
        let grid_a = Grid1D::new(center.0 - a, center.0 + a, n)?;
        let grid_b = Grid1D::new(center.1 - a, center.1 + a, n)?;
        let (state, _) =
            sample_pure(&|qa, qb| Complex64::new(wf.eval(qa, qb), 0.0), &grid_a, &grid_b)?;
        let s_full = schmidt_entropy(&state, false)?;
        let s_two = schmidt_entropy(&state, true)?;
        let eps = binary_entropy_inv(s_two)?;
        let c_estimate = 2.0 * eps.sqrt() / (a * a);
        rows.push(SweepRow { two_a, s_full_bits: s_full, s_twolevel_bits: s_two, c_estimate });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{concurrence_density, epsilon_filter, tangle_leading};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const ERF_1: f64 = 0.842_700_792_949_714_9;

    fn sys(alpha: f64) -> OscillatorSystem {
        OscillatorSystem::new(1.0, 1.0, alpha).unwrap()
    }

    fn ground_grid(alpha: f64, n: usize) -> GridPureState {
        let wf = sys(alpha).ground_wavefunction();
        let g = Grid1D::symmetric(6.0, n).unwrap();
        discretize_pure(|qa, qb| Complex64::new(wf.eval(qa, qb), 0.0), &g, &g).unwrap().0
    }

    #[test]
    fn grid1d_basics() {
        let g = Grid1D::new(-2.0, 2.0, 17).unwrap();
        assert_abs_diff_eq!(g.spacing(), 0.25);
        assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 4.0, epsilon = 1e-12);
        assert_eq!(g.snap(-2.0), 0);
        assert_eq!(g.snap(0.13), 9);
        assert_eq!(g.snap(5.0), 16);
        assert!(Grid1D::new(0.0, 1.0, 8).is_err());
        assert!(Grid1D::new(1.0, 0.0, 32).is_err());
    }

    #[test]
    fn discretize_product_state() {
        let wf = sys(0.0).ground_wavefunction();
        let g = Grid1D::symmetric(6.0, 64).unwrap();
        let (state, norm) =
            discretize_pure(|qa, qb| Complex64::new(wf.eval(qa, qb), 0.0), &g, &g).unwrap();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-4);
        let lam = schmidt_coefficients(&state).unwrap();
        assert_abs_diff_eq!(lam[0], 1.0, epsilon = 1e-10);
        // exact normalization after renormalizing
        let wa = state.grid_a.weights();
        let total: f64 = (0..64)
            .flat_map(|i| (0..64).map(move |j| (i, j)))
            .map(|(i, j)| wa[i] * wa[j] * state.amp[(i, j)].norm_sqr())
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn discretize_rejects_uncontained() {
        let wf = sys(0.0).ground_wavefunction();
        let g = Grid1D::symmetric(1.0, 32).unwrap();
        assert!(matches!(
            discretize_pure(|qa, qb| Complex64::new(wf.eval(qa, qb), 0.0), &g, &g),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn filter_probabilities_match_erf() {
        // 481 points puts nodes exactly at +-1
        let wf = sys(0.0).ground_wavefunction();
        let g = Grid1D::symmetric(6.0, 481).unwrap();
        let (state, _) =
            discretize_pure(|qa, qb| Complex64::new(wf.eval(qa, qb), 0.0), &g, &g).unwrap();
        let (_, p_full) = filter_discard_pure(&state, (-6.0, 6.0), None).unwrap();
        assert_abs_diff_eq!(p_full, 1.0, epsilon = 1e-12);
        let (_, p_a) = filter_discard_pure(&state, (-1.0, 1.0), None).unwrap();
        assert_abs_diff_eq!(p_a, ERF_1, epsilon = 1e-4);
        let (filtered, p_ab) =
            filter_discard_pure(&state, (-1.0, 1.0), Some((-1.0, 1.0))).unwrap();
        assert_abs_diff_eq!(p_ab, ERF_1 * ERF_1, epsilon = 1e-4);
        // renormalized
        let wa = filtered.grid_a.weights();
        let wb = filtered.grid_b.weights();
        let total: f64 = (0..filtered.grid_a.n)
            .flat_map(|i| (0..filtered.grid_b.n).map(move |j| (i, j)))
            .map(|(i, j)| wa[i] * wb[j] * filtered.amp[(i, j)].norm_sqr())
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn nondiscard_block_structure() {
        let state = ground_grid(10.0, 24);
        let rho = build_nondiscard(&state, (-1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        let mask = rho.block_mask.as_ref().unwrap();
        let nb = rho.grid_b.n;
        // cross-block elements vanish exactly
        for i in 0..rho.grid_a.n {
            for k in 0..rho.grid_a.n {
                if mask[i] != mask[k] {
                    for j in 0..nb {
                        for l in 0..nb {
                            assert_eq!(rho.mat[(i * nb + j, k * nb + l)], Complex64::new(0.0, 0.0));
                        }
                    }
                }
            }
        }
        // block weights are (p_a, 1 - p_a) under the discrete projector
        let w = rho.composite_weights();
        let mut p_in = 0.0;
        let mut p_out = 0.0;
        for idx in 0..w.len() {
            let inside = mask[idx / nb];
            let v = w[idx] * rho.mat[(idx, idx)].re;
            if inside {
                p_in += v;
            } else {
                p_out += v;
            }
        }
        assert_abs_diff_eq!(p_in + p_out, 1.0, epsilon = 1e-10);
        assert!(p_in > 0.0 && p_out > 0.0);
    }

    #[test]
    fn schmidt_entropy_values() {
        // product: zero
        let prod = ground_grid(0.0, 64);
        assert_abs_diff_eq!(schmidt_entropy(&prod, false).unwrap(), 0.0, epsilon = 1e-9);
        // alpha = 10 full state vs the symplectic closed form
        let state = ground_grid(10.0, 256);
        let s_grid = schmidt_entropy(&state, false).unwrap();
        let s_ref = {
            let (wp, wm) = (1.0, (21.0f64).sqrt());
            let q2 = (1.0 / (2.0 * wp) + 1.0 / (2.0 * wm)) / 2.0;
            let p2 = (wp / 2.0 + wm / 2.0) / 2.0;
            let nu = (q2 * p2).sqrt();
            (nu + 0.5) * (nu + 0.5).log2() - (nu - 0.5) * (nu - 0.5).log2()
        };
        assert_abs_diff_eq!(s_grid, s_ref, epsilon = 1e-3);
    }

    #[test]
    fn filtered_entropy_matches_leading_tangle() {
        let s = sys(10.0);
        let wf = s.ground_wavefunction();
        let a = 0.05;
        let g = Grid1D::symmetric(a, 256).unwrap();
        let (state, _) =
            sample_pure(&|qa, qb| Complex64::new(wf.eval(qa, qb), 0.0), &g, &g).unwrap();
        let s_grid = schmidt_entropy(&state, false).unwrap();
        let block = s.ground_state().derivative_block((0.0, 0.0)).unwrap();
        let tau = tangle_leading(&block, a, a).unwrap();
        let h_tau = {
            let e = tau / 4.0;
            -(e * e.log2() + (1.0 - e) * (1.0 - e).log2())
        };
        assert_relative_eq!(s_grid, h_tau, max_relative = 0.05);
    }

    #[test]
    fn negativity_product_state_zero() {
        let state = ground_grid(0.0, 24);
        let rho = density_from_pure(&state);
        let n = grid_negativity(&rho, DEFAULT_GRID_BUDGET).unwrap();
        assert_abs_diff_eq!(n, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn negativity_bell_like_state() {
        // symmetrized two-hump Gaussian
        let d = 1.5;
        let hump = |x: f64, y: f64, cx: f64, cy: f64| {
            (-(x - cx) * (x - cx) / 2.0 - (y - cy) * (y - cy) / 2.0).exp()
        };
        let g = Grid1D::symmetric(7.5, 32).unwrap();
        let (state, _) = discretize_pure(
            |qa, qb| Complex64::new(hump(qa, qb, d, d) + hump(qa, qb, -d, -d), 0.0),
            &g,
            &g,
        )
        .unwrap();
        let lam = schmidt_coefficients(&state).unwrap();
        // pure-state negativity from Schmidt data: sum_{i<j} sigma_i sigma_j
        let sig: Vec<f64> = lam.iter().map(|l| l.sqrt()).collect();
        let sum: f64 = sig.iter().sum();
        let sum_sq: f64 = lam.iter().sum();
        let n_ref = 0.5 * (sum * sum - sum_sq);
        let rho = density_from_pure(&state);
        let n = grid_negativity(&rho, DEFAULT_GRID_BUDGET).unwrap();
        assert_abs_diff_eq!(n, n_ref, epsilon = 1e-3);
        // dominated by two Schmidt terms: N ~ C/2 = sigma_1 sigma_2
        assert_abs_diff_eq!(n, sig[0] * sig[1], epsilon = 1e-3);
    }

    #[test]
    fn negativity_nondiscard_block_additivity() {
        let state = ground_grid(10.0, 24);
        let rho_nd = build_nondiscard(&state, (-0.8, 0.8)).unwrap();
        let n_nd = grid_negativity(&rho_nd, DEFAULT_GRID_BUDGET).unwrap();
        // filtered discard states on each block share the full grid here, so
        // build them from the ND matrix itself
        let mask = rho_nd.block_mask.clone().unwrap();
        let nb = rho_nd.grid_b.n;
        let w = rho_nd.composite_weights();
        let mut parts = 0.0;
        for keep_inside in [true, false] {
            let mut blk = rho_nd.clone();
            for i in 0..blk.grid_a.n {
                if mask[i] == keep_inside {
                    continue;
                }
                for j in 0..nb {
                    let idx = i * nb + j;
                    for c in 0..blk.mat.ncols() {
                        blk.mat[(idx, c)] = Complex64::new(0.0, 0.0);
                        blk.mat[(c, idx)] = Complex64::new(0.0, 0.0);
                    }
                }
            }
            let p: f64 =
                (0..w.len()).map(|i| w[i] * blk.mat[(i, i)].re).sum();
            blk.mat /= Complex64::new(p, 0.0);
            parts += p * grid_negativity(&blk, DEFAULT_GRID_BUDGET).unwrap();
        }
        assert_abs_diff_eq!(n_nd, parts, epsilon = 1e-6);
    }

    #[test]
    fn negativity_budget_error() {
        let state = ground_grid(0.0, 24);
        let rho = density_from_pure(&state);
        assert!(matches!(
            grid_negativity(&rho, 100),
            Err(Error::Budget { dim: 576, budget: 100 })
        ));
    }

    #[test]
    fn thermal_grid_matches_kernel_pointwise() {
        let s = sys(2.0);
        let t = 0.2;
        let g = Grid1D::symmetric(6.0, 24).unwrap();
        let rho = thermal_density_grid(&s, t, &g, &g).unwrap();
        let kernel = s.thermal_state(t).unwrap();
        let xs = g.nodes();
        let nb = g.n;
        for &(i, j, k, l) in &[(0usize, 12usize, 12usize, 12usize), (10, 14, 9, 13), (12, 12, 12, 12), (5, 20, 18, 3)] {
            let grid_val = rho.mat[(i * nb + j, k * nb + l)].re;
            let exact = kernel.eval(xs[i], xs[j], xs[k], xs[l]).re;
            assert_abs_diff_eq!(grid_val, exact, epsilon = 1e-7);
        }
    }

    #[test]
    fn thermal_grid_rejects_hot_states() {
        let s = sys(0.5);
        let g = Grid1D::symmetric(6.0, 24).unwrap();
        assert!(matches!(
            thermal_density_grid(&s, 50.0, &g, &g),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn epsilon_oracle_single_mode() {
        // Alice's reduction of the alpha = 0 thermal state is exactly the
        // single-mode thermal kernel
        let t = 1.0;
        let th = sys(0.0).thermal_state(t).unwrap();
        let red = th.reduced_a_derivs(0.0).unwrap();
        let mut ratios = Vec::new();
        for &a in &[0.02, 0.01, 0.005] {
            let eps = epsilon_filter(&red, a).unwrap();
            ratios.push(eps / (a * a));
            let lam = filtered_spectrum_1d(1.0, 1.0, t, 0.0, a, 400).unwrap();
            if a == 0.01 {
                assert_relative_eq!(eps, lam[1], max_relative = 1e-3);
            }
        }
        // eps/a^2 is a constant of the state
        assert_relative_eq!(ratios[0], ratios[1], max_relative = 1e-6);
        assert_relative_eq!(ratios[1], ratios[2], max_relative = 1e-6);
    }

    #[test]
    fn region_sweep_fig1_shape() {
        let s = sys(10.0);
        let sizes = [0.1, 0.5, 1.0, 2.0, 4.0, 8.0];
        let rows = region_sweep(&s, &sizes, (0.0, 0.0), 256).unwrap();
        // monotone nondecreasing entropy
        for w in rows.windows(2) {
            assert!(w[1].s_full_bits >= w[0].s_full_bits - 1e-9);
        }
        // saturation at 2a = 8
        let s_ref = {
            let (wp, wm) = (1.0, (21.0f64).sqrt());
            let q2 = (1.0 / (2.0 * wp) + 1.0 / (2.0 * wm)) / 2.0;
            let p2 = (wp / 2.0 + wm / 2.0) / 2.0;
            let nu = (q2 * p2).sqrt();
            (nu + 0.5) * (nu + 0.5).log2() - (nu - 0.5) * (nu - 0.5).log2()
        };
        let last = rows.last().unwrap();
        assert_relative_eq!(last.s_full_bits, s_ref, max_relative = 0.02);
        // small-region concurrence estimate
        let block = s.ground_state().derivative_block((0.0, 0.0)).unwrap();
        let c = concurrence_density(&block).unwrap();
        assert_relative_eq!(rows[0].c_estimate, c, max_relative = 0.05);
    }
}

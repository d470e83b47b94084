//! Two-mode continuous-variable states and their local derivative data.
//!
//! A state is represented either by an analytic Gaussian kernel
//! ([`GaussianCV`]) or by any type implementing [`DensityKernel`]. All
//! leading-order entanglement formulas consume the 16 mixed partial
//! derivatives of the kernel at a configuration-space point ([`DerivBlock`])
//! or the four derivatives of Alice's reduced kernel ([`ReducedADerivs`]).

use alloc::vec::Vec;
use nalgebra::{Matrix2, Matrix3, Matrix4, Vector2, Vector4};
use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::GaussLegendre;
use crate::{Error, Result};

const PI: f64 = core::f64::consts::PI;

/// Relative tolerance for the Hermiticity of a derivative block.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Two coupled harmonic oscillators: physical parameters and derived
/// normal-mode frequencies.
///
/// Under the default convention the symmetric mode keeps the bare frequency
/// and the relative mode is stiffened by the coupling:
/// `w+ = w`, `w- = w * sqrt(1 + 2 alpha)` with `alpha = 2K / (m w^2)`.
/// [`OscillatorSystem::with_normal_modes`] injects any other convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSystem {
    pub mass: f64,
    pub omega: f64,
    pub alpha: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

impl OscillatorSystem {
    pub fn new(mass: f64, omega: f64, alpha: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Parameter("mass must be positive"));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Parameter("omega must be positive"));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::Parameter(
                "alpha must be non-negative (attractive-instability region not modeled)",
            ));
        }
        Ok(Self {
            mass,
            omega,
            alpha,
            omega_plus: omega,
            omega_minus: omega * (1.0 + 2.0 * alpha).sqrt(),
        })
    }

    /// Build a system directly from its normal-mode frequencies.
    pub fn with_normal_modes(mass: f64, omega_plus: f64, omega_minus: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::Parameter("mass must be positive"));
        }
        if !(omega_plus > 0.0) || !(omega_minus > 0.0) {
            return Err(Error::Parameter("normal-mode frequencies must be positive"));
        }
        let omega = omega_plus;
        let ratio = omega_minus / omega_plus;
        Ok(Self {
            mass,
            omega,
            alpha: (ratio * ratio - 1.0) / 2.0,
            omega_plus,
            omega_minus,
        })
    }

    /// Ground-state density kernel (pure: `M = 0`, `K = 0`).
    pub fn ground_state(&self) -> GaussianCV {
        let l = rotate_diag(self.mass * self.omega_plus / 2.0, self.mass * self.omega_minus / 2.0);
        GaussianCV::from_l_m(l, Matrix2::zeros())
    }

    /// Thermal density kernel at temperature `t` (units of `w`, `k_B = 1`).
    ///
    /// Per normal mode `s`: `L_s = (m w_s / 2) tanh(w_s / 2T)` and
    /// `M_s = m w_s / sinh(w_s / T)`; `t = 0` returns the ground state
    /// exactly.
    pub fn thermal_state(&self, t: f64) -> Result<GaussianCV> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Parameter("temperature must be non-negative"));
        }
        if t == 0.0 {
            return Ok(self.ground_state());
        }
        let m = self.mass;
        let (lp, mp) = thermal_mode_coeffs(m, self.omega_plus, t);
        let (lm, mm) = thermal_mode_coeffs(m, self.omega_minus, t);
        let l = rotate_diag(lp, lm);
        let mmat = rotate_diag(mp, mm);
        Ok(GaussianCV::from_l_m(l, mmat))
    }

    /// The (real) ground-state wavefunction, for grid discretization.
    pub fn ground_wavefunction(&self) -> GroundWavefunction {
        let g = self.ground_state();
        GroundWavefunction { l: g.l, norm: g.zeta1.sqrt() }
    }
}

fn thermal_mode_coeffs(m: f64, w: f64, t: f64) -> (f64, f64) {
    let l = (m * w / 2.0) * (w / (2.0 * t)).tanh();
    let mm = m * w / (w / t).sinh();
    (l, mm)
}

/// `O^T diag(d_plus, d_minus) O` with `O = [[1,1],[1,-1]]/sqrt(2)`.
fn rotate_diag(d_plus: f64, d_minus: f64) -> Matrix2<f64> {
    let s = (d_plus + d_minus) / 2.0;
    let d = (d_plus - d_minus) / 2.0;
    Matrix2::new(s, d, d, s)
}

/// Ground-state amplitude `psi(qA, qB) = N exp(-q^T L q)`.
#[derive(Debug, Clone, Copy)]
pub struct GroundWavefunction {
    pub l: Matrix2<f64>,
    pub norm: f64,
}

impl GroundWavefunction {
    pub fn eval(&self, qa: f64, qb: f64) -> f64 {
        let q = Vector2::new(qa, qb);
        self.norm * (-(q.transpose() * self.l * q)[0]).exp()
    }
}

/// Uniform interface for evaluating two-mode density kernels, so that
/// non-Gaussian states plug into the quadrature and finite-difference paths.
pub trait DensityKernel {
    /// Kernel value `rho(qA, qB; qA', qB')`.
    fn eval(&self, qa: f64, qb: f64, qa_p: f64, qb_p: f64) -> Complex64;
    /// Whether the kernel factorizes as `psi(q) psi*(q')`.
    fn is_pure(&self) -> bool;
}

/// Wrap a deterministic closure as a [`DensityKernel`].
pub struct FnKernel<F> {
    pub f: F,
    pub pure: bool,
}

impl<F: Fn(f64, f64, f64, f64) -> Complex64> DensityKernel for FnKernel<F> {
    fn eval(&self, qa: f64, qb: f64, qa_p: f64, qb_p: f64) -> Complex64 {
        (self.f)(qa, qb, qa_p, qb_p)
    }
    fn is_pure(&self) -> bool {
        self.pure
    }
}

/// Two-mode Gaussian density kernel
/// `rho(q; q') = zeta1 exp[-q^T L q - q'^T L q' - (1/2)(q-q')^T M (q-q')
///               + (i/2)(q-q')^T K (q+q')]`.
///
/// `zeta1` is fixed by the unit-trace condition `zeta1 = sqrt(det 2L) / pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCV {
    pub l: Matrix2<f64>,
    pub m: Matrix2<f64>,
    pub kmat: Matrix2<f64>,
    pub zeta1: f64,
}

impl GaussianCV {
    pub fn new(l: Matrix2<f64>, m: Matrix2<f64>, kmat: Matrix2<f64>) -> Result<Self> {
        if (l[(0, 1)] - l[(1, 0)]).abs() > 1e-12 * l.norm() {
            return Err(Error::Parameter("L must be symmetric"));
        }
        if (m[(0, 1)] - m[(1, 0)]).abs() > 1e-12 * (1.0 + m.norm()) {
            return Err(Error::Parameter("M must be symmetric"));
        }
        let det2l = (2.0 * l).determinant();
        if !(det2l > 0.0) || !(l.trace() > 0.0) {
            return Err(Error::Parameter("L must be positive definite"));
        }
        Ok(Self { l, m, kmat, zeta1: det2l.sqrt() / PI })
    }

    fn from_l_m(l: Matrix2<f64>, m: Matrix2<f64>) -> Self {
        Self::new(l, m, Matrix2::zeros()).expect("constructor matrices are valid by construction")
    }

    /// `M = 0` and `K = 0`: the kernel factorizes as `psi(q) psi*(q')`.
    pub fn is_pure_kernel(&self) -> bool {
        self.m.norm() <= 1e-14 * self.l.norm() && self.kmat.norm() <= 1e-14 * self.l.norm()
    }

    /// Apply the local dilation `qA -> s * qA` (a local unitary on Alice).
    pub fn dilate_a(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::Parameter("dilation factor must be positive"));
        }
        let d = Matrix2::new(s, 0.0, 0.0, 1.0);
        Self::new(d * self.l * d, d * self.m * d, d * self.kmat * d)
    }

    /// The exponent as a complex quadratic form `z^T S z` in
    /// `z = (qA, qB, qA', qB')`.
    fn quad_form(&self) -> Matrix4<Complex64> {
        let a = -(self.l + self.m / 2.0);
        let ksym = (self.kmat + self.kmat.transpose()) / 2.0;
        let kasym = (self.kmat - self.kmat.transpose()) / 2.0;
        let mut s = Matrix4::<Complex64>::zeros();
        for r in 0..2 {
            for c in 0..2 {
                s[(r, c)] = Complex64::new(a[(r, c)], 0.5 * ksym[(r, c)]);
                s[(r + 2, c + 2)] = Complex64::new(a[(r, c)], -0.5 * ksym[(r, c)]);
                let cross = Complex64::new(0.5 * self.m[(r, c)], 0.5 * kasym[(r, c)]);
                s[(r, c + 2)] = cross;
                s[(c + 2, r)] = cross;
            }
        }
        s
    }

    pub fn eval(&self, qa: f64, qb: f64, qa_p: f64, qb_p: f64) -> Complex64 {
        let s = self.quad_form();
        let z = Vector4::new(
            Complex64::new(qa, 0.0),
            Complex64::new(qb, 0.0),
            Complex64::new(qa_p, 0.0),
            Complex64::new(qb_p, 0.0),
        );
        let q = (z.transpose() * s * z)[0];
        Complex64::new(self.zeta1, 0.0) * q.exp()
    }

    /// All 16 mixed partials at a diagonal configuration point, by exact
    /// differentiation of the quadratic exponent.
    pub fn derivative_block(&self, center: (f64, f64)) -> Result<DerivBlock> {
        let s = self.quad_form();
        let z = Vector4::new(
            Complex64::new(center.0, 0.0),
            Complex64::new(center.1, 0.0),
            Complex64::new(center.0, 0.0),
            Complex64::new(center.1, 0.0),
        );
        let value = Complex64::new(self.zeta1, 0.0) * (z.transpose() * s * z)[0].exp();
        let grad = (s * z) * Complex64::new(2.0, 0.0);
        let hess = s * Complex64::new(2.0, 0.0);
        let mut coeffs = [Complex64::zero(); 16];
        for idx in 0..16usize {
            let (i, j, k, l) = split_idx(idx);
            let mut vars = Vec::with_capacity(4);
            // z ordering: qA=0, qB=1, qA'=2, qB'=3
            if i == 1 {
                vars.push(0);
            }
            if j == 1 {
                vars.push(2);
            }
            if k == 1 {
                vars.push(1);
            }
            if l == 1 {
                vars.push(3);
            }
            coeffs[idx] = exp_quadratic_partial(&grad, &hess, &vars) * value;
        }
        DerivBlock::new(center, coeffs)
    }

    /// Derivatives of Alice's reduced kernel at `qbar`, by integrating the
    /// quadratic form over Bob's coordinate in closed form.
    pub fn reduced_a_derivs(&self, qbar: f64) -> Result<ReducedADerivs> {
        let k = self.reduced_a_kernel()?;
        let v = Vector2::new(Complex64::new(qbar, 0.0), Complex64::new(qbar, 0.0));
        let value = k.prefactor * (v.transpose() * k.p * v)[0].exp();
        let grad = (k.p * v) * Complex64::new(2.0, 0.0);
        ReducedADerivs::new(
            qbar,
            value,
            grad[0] * value,
            grad[1] * value,
            (2.0 * k.p[(0, 1)] + grad[0] * grad[1]) * value,
        )
    }

    /// Alice's reduced kernel `rho^A(qA, qA')` in closed form.
    pub fn reduced_a_kernel(&self) -> Result<ReducedKernelA> {
        let s = self.quad_form();
        // u = (qA, qA', x) with z = (qA, x, qA', x)
        let mut t = nalgebra::Matrix4x3::<Complex64>::zeros();
        t[(0, 0)] = Complex64::new(1.0, 0.0);
        t[(1, 2)] = Complex64::new(1.0, 0.0);
        t[(2, 1)] = Complex64::new(1.0, 0.0);
        t[(3, 2)] = Complex64::new(1.0, 0.0);
        let p: Matrix3<Complex64> = t.transpose() * s * t;
        let p_xx = p[(2, 2)];
        if p_xx.re >= 0.0 {
            return Err(Error::Consistency("trace over Bob's coordinate diverges"));
        }
        let p_vx = Vector2::new(p[(0, 2)], p[(1, 2)]);
        let mut p_vv = Matrix2::<Complex64>::zeros();
        for r in 0..2 {
            for c in 0..2 {
                p_vv[(r, c)] = p[(r, c)] - p_vx[r] * p_vx[c] / p_xx;
            }
        }
        let prefactor = Complex64::new(self.zeta1, 0.0) * (Complex64::new(PI, 0.0) / -p_xx).sqrt();
        Ok(ReducedKernelA { prefactor, p: p_vv })
    }
}

impl DensityKernel for GaussianCV {
    fn eval(&self, qa: f64, qb: f64, qa_p: f64, qb_p: f64) -> Complex64 {
        GaussianCV::eval(self, qa, qb, qa_p, qb_p)
    }
    fn is_pure(&self) -> bool {
        self.is_pure_kernel()
    }
}

/// Alice's reduced Gaussian kernel `rho^A(qA, qA') = pref * exp(v^T P v)`.
#[derive(Debug, Clone, Copy)]
pub struct ReducedKernelA {
    pub prefactor: Complex64,
    pub p: Matrix2<Complex64>,
}

impl ReducedKernelA {
    pub fn eval(&self, qa: f64, qa_p: f64) -> Complex64 {
        let v = Vector2::new(Complex64::new(qa, 0.0), Complex64::new(qa_p, 0.0));
        self.prefactor * (v.transpose() * self.p * v)[0].exp()
    }
}

/// Mixed partial of `e^Q` over distinct variables `vars`, divided by `e^Q`,
/// for quadratic `Q` with gradient `grad` and (constant) Hessian `hess`.
///
/// Uses the recurrence D(S) = g_v D(S\{v}) + sum_u H_{vu} D(S\{v,u}); third
/// and higher derivatives of Q vanish.
fn exp_quadratic_partial(
    grad: &Vector4<Complex64>,
    hess: &Matrix4<Complex64>,
    vars: &[usize],
) -> Complex64 {
    match vars.split_first() {
        None => Complex64::new(1.0, 0.0),
        Some((&v, rest)) => {
            let mut out = grad[v] * exp_quadratic_partial(grad, hess, rest);
            for (pos, &u) in rest.iter().enumerate() {
                let mut sub = Vec::with_capacity(rest.len().saturating_sub(1));
                sub.extend_from_slice(&rest[..pos]);
                sub.extend_from_slice(&rest[pos + 1..]);
                out += hess[(v, u)] * exp_quadratic_partial(grad, hess, &sub);
            }
            out
        }
    }
}

#[inline]
fn split_idx(idx: usize) -> (usize, usize, usize, usize) {
    ((idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
}

/// The 16 mixed partials `rho_{ijkl}` (`i`,`j`,`k`,`l` in `{0,1}`: orders of
/// d/dqA, d/dqA', d/dqB, d/dqB') of a kernel at a configuration-space point.
#[derive(Debug, Clone, Copy)]
pub struct DerivBlock {
    pub center: (f64, f64),
    coeffs: [Complex64; 16],
}

impl DerivBlock {
    /// Validate Hermiticity (`rho_{ijkl} = conj(rho_{jilk})`), then
    /// symmetrize exactly.
    pub fn new(center: (f64, f64), coeffs: [Complex64; 16]) -> Result<Self> {
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Consistency("derivative block is zero or non-finite"));
        }
        let mut sym = [Complex64::zero(); 16];
        for idx in 0..16usize {
            let (i, j, k, l) = split_idx(idx);
            let mirror = (j << 3) | (i << 2) | (l << 1) | k;
            let resid = (coeffs[idx] - coeffs[mirror].conj()).norm();
            if resid > HERMITICITY_TOL * scale {
                return Err(Error::Consistency("derivative block violates Hermiticity"));
            }
            sym[idx] = (coeffs[idx] + coeffs[mirror].conj()) / 2.0;
        }
        if !(sym[0].re > 0.0) {
            return Err(Error::Consistency("rho_0000 must be real and positive"));
        }
        Ok(Self { center, coeffs: sym })
    }

    /// `rho_{ijkl}` with each index 0 or 1.
    #[inline]
    pub fn coeff(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        debug_assert!(i < 2 && j < 2 && k < 2 && l < 2);
        self.coeffs[(i << 3) | (j << 2) | (k << 1) | l]
    }

    pub fn rho0(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Maximum residual of the pure-state factorization
    /// `rho_{ijkl} = psi_{ik} conj(psi_{jl})`, relative to the block scale.
    ///
    /// `psi_{ik}` is recovered from the `j = l = 0` entries with the phase
    /// convention `psi_00` real positive.
    pub fn purity_residual(&self) -> f64 {
        let psi00 = self.rho0().sqrt();
        let mut psi = [Complex64::zero(); 4];
        for i in 0..2 {
            for k in 0..2 {
                psi[2 * i + k] = self.coeff(i, 0, k, 0) / psi00;
            }
        }
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for idx in 0..16usize {
            let (i, j, k, l) = split_idx(idx);
            let predicted = psi[2 * i + k] * psi[2 * j + l].conj();
            worst = worst.max((self.coeffs[idx] - predicted).norm());
        }
        worst / scale
    }

    pub fn is_pure_factorizable(&self, tol: f64) -> bool {
        self.purity_residual() <= tol
    }
}

/// Derivatives of Alice's reduced kernel at `qbar`:
/// `rho^A_{nm} = d^n/dqA^n d^m/dqA'^m rho^A` at the diagonal point.
#[derive(Debug, Clone, Copy)]
pub struct ReducedADerivs {
    pub center: f64,
    pub d00: Complex64,
    pub d10: Complex64,
    pub d01: Complex64,
    pub d11: Complex64,
}

impl ReducedADerivs {
    pub fn new(center: f64, d00: Complex64, d10: Complex64, d01: Complex64, d11: Complex64) -> Result<Self> {
        let scale = [d00, d10, d01, d11].iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !(d00.re > 0.0) || d00.im.abs() > HERMITICITY_TOL * scale {
            return Err(Error::Consistency("rho^A_00 must be real and positive"));
        }
        if (d10 - d01.conj()).norm() > 1e-8 * scale {
            return Err(Error::Consistency("rho^A_10 must equal conj(rho^A_01)"));
        }
        Ok(Self { center, d00, d10, d01, d11 })
    }
}

/// Finite-difference step for a mixed partial with `order` distinct
/// differenced variables. Higher orders need larger steps: the stencil
/// denominator `(2h)^order` amplifies roundoff.
fn fd_step(order: usize) -> f64 {
    match order {
        1 | 2 => 1e-4,
        3 => 4e-3,
        _ => 1e-2,
    }
}

/// Derivative block of a generic kernel by central finite differences with
/// two-level Richardson refinement.
pub fn derivative_block_fd<K: DensityKernel + ?Sized>(
    kernel: &K,
    center: (f64, f64),
) -> Result<DerivBlock> {
    let base = kernel.eval(center.0, center.1, center.0, center.1);
    let scale0 = base.norm();
    let mut coeffs = [Complex64::zero(); 16];
    for idx in 0..16usize {
        let (i, j, k, l) = split_idx(idx);
        // kernel Hermiticity gives the mirror entry for free
        let mirror = (j << 3) | (i << 2) | (l << 1) | k;
        if mirror < idx {
            coeffs[idx] = coeffs[mirror].conj();
            continue;
        }
        let mut vars = Vec::new();
        // variable ordering: (qA, qB, qA', qB')
        if i == 1 {
            vars.push(0);
        }
        if k == 1 {
            vars.push(1);
        }
        if j == 1 {
            vars.push(2);
        }
        if l == 1 {
            vars.push(3);
        }
        if vars.is_empty() {
            coeffs[idx] = base;
            continue;
        }
        let h = fd_step(vars.len());
        let d_h = central_difference(kernel, center, &vars, h);
        let d_h2 = central_difference(kernel, center, &vars, h / 2.0);
        let disagreement = (d_h - d_h2).norm();
        if disagreement > 0.3 * (d_h.norm() + d_h2.norm()) + 1e-6 * scale0 {
            return Err(Error::Numeric(
                "finite-difference derivative is noise-dominated",
                disagreement,
            ));
        }
        coeffs[idx] = (4.0 * d_h2 - d_h) / 3.0;
    }
    DerivBlock::new(center, coeffs)
}

/// Central-difference stencil for the mixed first partial over `vars`
/// (indices into `(qA, qB, qA', qB')`), all with step `h`.
fn central_difference<K: DensityKernel + ?Sized>(
    kernel: &K,
    center: (f64, f64),
    vars: &[usize],
    h: f64,
) -> Complex64 {
    let n = vars.len();
    let mut sum = Complex64::zero();
    for bits in 0..(1u32 << n) {
        let mut z = [center.0, center.1, center.0, center.1];
        let mut sign = 1.0;
        for (pos, &v) in vars.iter().enumerate() {
            if bits >> pos & 1 == 1 {
                z[v] += h;
            } else {
                z[v] -= h;
                sign = -sign;
            }
        }
        sum += sign * kernel.eval(z[0], z[1], z[2], z[3]);
    }
    sum / (2.0 * h).powi(n as i32)
}

/// Reduced derivatives of a generic kernel: adaptive quadrature over Bob's
/// coordinate plus finite differences in Alice's.
///
/// `half_range` bounds the quadrature interval; the state must be contained
/// well inside it.
pub fn reduced_a_derivs_numeric<K: DensityKernel + ?Sized>(
    kernel: &K,
    qbar: f64,
    half_range: f64,
) -> Result<ReducedADerivs> {
    let orders = [48usize, 96, 192];
    let mut chosen = None;
    let mut prev = Complex64::zero();
    let mut achieved = f64::INFINITY;
    for (step, &ord) in orders.iter().enumerate() {
        let rule = GaussLegendre::new(ord)?;
        let val = integrate_bob(kernel, qbar, qbar, half_range, &rule);
        if step > 0 {
            achieved = (val - prev).norm() / (1.0 + val.norm());
            if achieved <= 1e-11 {
                chosen = Some(rule);
                break;
            }
        }
        prev = val;
        chosen = Some(rule);
    }
    let rule = chosen.expect("at least one quadrature order is attempted");
    if achieved > 1e-9 {
        return Err(Error::Numeric("reduced-kernel quadrature did not converge", achieved));
    }

    let reduced = |qa: f64, qa_p: f64| integrate_bob(kernel, qa, qa_p, half_range, &rule);
    let h = fd_step(1);
    let d = |va: i32, vb: i32, h: f64| {
        // central difference in (qA, qA') with orders (va, vb) in {0,1}
        let mut sum = Complex64::zero();
        for bits in 0..(1u32 << (va + vb)) {
            let mut qa = qbar;
            let mut qa_p = qbar;
            let mut sign = 1.0;
            let mut pos = 0;
            if va == 1 {
                if bits >> pos & 1 == 1 {
                    qa += h;
                } else {
                    qa -= h;
                    sign = -sign;
                }
                pos += 1;
            }
            if vb == 1 {
                if bits >> pos & 1 == 1 {
                    qa_p += h;
                } else {
                    qa_p -= h;
                    sign = -sign;
                }
            }
            sum += sign * reduced(qa, qa_p);
        }
        sum / (2.0 * h).powi(va + vb)
    };
    let richardson = |va: i32, vb: i32| {
        if va + vb == 0 {
            return reduced(qbar, qbar);
        }
        (4.0 * d(va, vb, h / 2.0) - d(va, vb, h)) / 3.0
    };
    ReducedADerivs::new(qbar, richardson(0, 0), richardson(1, 0), richardson(0, 1), richardson(1, 1))
}

fn integrate_bob<K: DensityKernel + ?Sized>(
    kernel: &K,
    qa: f64,
    qa_p: f64,
    half_range: f64,
    rule: &GaussLegendre,
) -> Complex64 {
    let (xs, ws) = rule.mapped(0.0, half_range);
    let mut sum = Complex64::zero();
    for (&x, &w) in xs.iter().zip(&ws) {
        sum += w * kernel.eval(qa, x, qa_p, x);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sys(alpha: f64) -> OscillatorSystem {
        OscillatorSystem::new(1.0, 1.0, alpha).unwrap()
    }

    #[test]
    fn make_system_uncoupled_limit() {
        let s = sys(0.0);
        assert_eq!(s.omega_plus, 1.0);
        assert_eq!(s.omega_minus, 1.0);
    }

    #[test]
    fn make_system_coupled() {
        let s = sys(10.0);
        assert_relative_eq!(s.omega_minus, 21.0f64.sqrt(), max_relative = 1e-14);
        assert_eq!(s.omega_plus, 1.0);
    }

    #[test]
    fn make_system_rejects_bad_parameters() {
        assert!(OscillatorSystem::new(1.0, -1.0, 1.0).is_err());
        assert!(OscillatorSystem::new(0.0, 1.0, 1.0).is_err());
        assert!(OscillatorSystem::new(1.0, 1.0, -0.5).is_err());
    }

    #[test]
    fn with_normal_modes_roundtrip() {
        let s = OscillatorSystem::with_normal_modes(1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(s.alpha, 1.5, max_relative = 1e-14);
    }

    #[test]
    fn ground_state_uncoupled_is_vacuum_product() {
        let g = sys(0.0).ground_state();
        assert_relative_eq!(g.l[(0, 0)], 0.5, max_relative = 1e-14);
        assert_relative_eq!(g.l[(1, 1)], 0.5, max_relative = 1e-14);
        assert_abs_diff_eq!(g.l[(0, 1)], 0.0, epsilon = 1e-15);
        assert_eq!(g.m, Matrix2::zeros());
    }

    #[test]
    fn ground_state_coupled_off_diagonal_sign() {
        let s = sys(10.0);
        let g = s.ground_state();
        let expected = (s.mass / 4.0) * (s.omega_plus - s.omega_minus);
        assert!(expected < 0.0);
        assert_relative_eq!(g.l[(0, 1)], expected, max_relative = 1e-14);
    }

    #[test]
    fn ground_state_kernel_factorizes() {
        let s = sys(10.0);
        let g = s.ground_state();
        let psi = s.ground_wavefunction();
        for &(qa, qb, qap, qbp) in
            &[(0.1, -0.2, 0.3, 0.4), (1.0, 1.0, -1.0, 0.5), (0.0, 0.0, 2.0, -2.0)]
        {
            let lhs = g.eval(qa, qb, qap, qbp);
            let rhs = psi.eval(qa, qb) * psi.eval(qap, qbp);
            assert_abs_diff_eq!(lhs.re, rhs, epsilon = 1e-12);
            assert_abs_diff_eq!(lhs.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn thermal_zero_temperature_is_ground_state() {
        let s = sys(2.0);
        let g = s.ground_state();
        let t0 = s.thermal_state(0.0).unwrap();
        assert_relative_eq!(t0.l, g.l, max_relative = 1e-12);
        assert_abs_diff_eq!(t0.m.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn thermal_rejects_negative_temperature() {
        assert!(sys(1.0).thermal_state(-0.5).is_err());
    }

    #[test]
    fn thermal_low_temperature_converges_to_ground() {
        let s = sys(2.0);
        let g = s.ground_state();
        for &t in &[0.05, 0.02] {
            let th = s.thermal_state(t).unwrap();
            let err = (th.l - g.l).norm() + th.m.norm();
            // entrywise error decays like exp(-w_minus / T); w_plus = 1 dominates L
            let bound = 8.0 * (-s.omega_plus / t).exp();
            assert!(err < bound, "T={t}: err={err:e} bound={bound:e}");
        }
    }

    #[test]
    fn eval_diagonal_real_nonnegative_and_hermitian() {
        let th = sys(2.0).thermal_state(0.5).unwrap();
        let d = th.eval(0.3, -0.4, 0.3, -0.4);
        assert!(d.re >= 0.0 && d.im.abs() < 1e-15);
        let a = th.eval(0.3, -0.1, 0.2, 0.4);
        let b = th.eval(0.2, 0.4, 0.3, -0.1);
        assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-14);
        assert_abs_diff_eq!(a.im, -b.im, epsilon = 1e-14);
    }

    #[test]
    fn trace_on_grid_is_unity() {
        // int rho(q, q) d^2 q over [-8, 8]^2 on a 200^2 trapezoid grid
        for state in [sys(0.5).ground_state(), sys(2.0).thermal_state(0.7).unwrap()] {
            let n = 200;
            let h = 16.0 / (n - 1) as f64;
            let mut tr = 0.0;
            for i in 0..n {
                let wa = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                let qa = -8.0 + i as f64 * h;
                for j in 0..n {
                    let wb = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                    let qb = -8.0 + j as f64 * h;
                    tr += wa * wb * state.eval(qa, qb, qa, qb).re;
                }
            }
            tr *= h * h;
            assert_abs_diff_eq!(tr, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn derivative_block_origin_trivia() {
        let g = sys(3.0).ground_state();
        let blk = g.derivative_block((0.0, 0.0)).unwrap();
        // even kernel: odd derivative vanishes at the origin
        assert_abs_diff_eq!(blk.coeff(1, 0, 0, 0).norm(), 0.0, epsilon = 1e-14);
        // exponent vanishes at the origin
        assert_relative_eq!(blk.rho0(), g.zeta1, max_relative = 1e-14);
    }

    #[test]
    fn derivative_block_matches_finite_differences() {
        let s = OscillatorSystem::with_normal_modes(1.0, 1.0, 2.0).unwrap();
        let g = s.ground_state();
        let center = (0.4, -0.7);
        let analytic = g.derivative_block(center).unwrap();
        let fd = derivative_block_fd(&g, center).unwrap();
        let scale = analytic.rho0();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let a = analytic.coeff(i, j, k, l);
                        let f = fd.coeff(i, j, k, l);
                        let denom = a.norm().max(1e-3 * scale);
                        assert!(
                            (a - f).norm() / denom <= 1e-6,
                            "({i}{j}{k}{l}): analytic={a} fd={f}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_block_fd_matches_for_thermal_state() {
        let th = sys(2.0).thermal_state(0.5).unwrap();
        let center = (0.2, 0.1);
        let analytic = th.derivative_block(center).unwrap();
        let fd = derivative_block_fd(&th, center).unwrap();
        for idx in 0..16 {
            let (i, j, k, l) = super::split_idx(idx);
            let a = analytic.coeff(i, j, k, l);
            let f = fd.coeff(i, j, k, l);
            let denom = a.norm().max(1e-3 * analytic.rho0());
            assert!((a - f).norm() / denom <= 1e-6, "({i}{j}{k}{l})");
        }
    }

    #[test]
    fn pure_block_factorizes() {
        let g = sys(10.0).ground_state();
        let blk = g.derivative_block((0.9, -1.4)).unwrap();
        assert!(blk.purity_residual() <= 1e-8);
        let th = sys(10.0).thermal_state(0.5).unwrap();
        let blk = th.derivative_block((0.0, 0.0)).unwrap();
        assert!(blk.purity_residual() > 1e-4);
    }

    #[test]
    fn reduced_pure_state_determinant_vanishes() {
        // Alice's reduction is pure only for the uncoupled (product) ground state
        let g = sys(0.0).ground_state();
        let r = g.reduced_a_derivs(0.3).unwrap();
        let det = r.d11 * r.d00 - r.d01 * r.d10;
        // relative to the cancelling products themselves
        let scale = (r.d11 * r.d00).norm() + (r.d01 * r.d10).norm() + r.d00.norm().powi(2);
        assert!(det.norm() <= 1e-10 * scale, "det={det} scale={scale}");
    }

    #[test]
    fn reduced_thermal_state_is_mixed() {
        let th = sys(2.0).thermal_state(1.0).unwrap();
        let r = th.reduced_a_derivs(0.0).unwrap();
        let det = (r.d11 * r.d00 - r.d01 * r.d10).re;
        assert!(det > 0.0);
    }

    #[test]
    fn reduced_analytic_matches_numeric_quadrature() {
        let th = sys(2.0).thermal_state(1.0).unwrap();
        for &qbar in &[0.0, 0.6] {
            let a = th.reduced_a_derivs(qbar).unwrap();
            let n = reduced_a_derivs_numeric(&th, qbar, 10.0).unwrap();
            for (x, y) in [(a.d00, n.d00), (a.d10, n.d10), (a.d01, n.d01), (a.d11, n.d11)] {
                let denom = x.norm().max(1e-3 * a.d00.norm());
                assert!((x - y).norm() / denom <= 1e-7, "analytic={x} numeric={y}");
            }
        }
    }

    #[test]
    fn dilation_transforms_quadratic_forms() {
        let th = sys(2.0).thermal_state(0.3).unwrap();
        let d = th.dilate_a(2.0).unwrap();
        // rho'(qA,...) = s * rho(s qA, ...)
        let lhs = d.eval(0.2, 0.1, -0.3, 0.4);
        let rhs = 2.0 * th.eval(0.4, 0.1, -0.6, 0.4);
        assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12);
    }
}

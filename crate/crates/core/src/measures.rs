//! Leading-order (small-region) entanglement quantities computed from local
//! derivative data.
//!
//! With filtering half-widths `a`, `b` small, the filtered two-mode state is
//! an effective two-qubit state and its entanglement is controlled entirely
//! by the kernel derivatives at the region centre: the concurrence density
//! `c`, the coefficients `D1`, `D2`, `C1` and the negativity density
//! `n = sqrt(C1 + D1 D2) - sqrt(D1 D2)`.

// float intrinsics for no_std builds; test builds unify num-traits/std and shadow it
#[allow(unused_imports)]
use num_traits::Float;

use crate::state::{DerivBlock, ReducedADerivs};
use crate::{Error, Result};

/// Tolerance under which negative radicands/probabilities are treated as
/// roundoff and clamped; larger violations raise consistency errors.
pub const CLAMP_TOL: f64 = 1e-12;

/// The quantities `D1`, `D2`, `C1` controlling the leading-order negativity
/// of a mixed state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityCoeffs {
    pub d1: f64,
    pub d2: f64,
    pub c1: f64,
}

/// Local entanglement densities at one configuration-space point.
///
/// `c` and `n` are in units of `m*w`; `optimal_ratio` is the region aspect
/// ratio `a/b` maximizing the negativity at fixed area (`None` when the
/// optimum is undefined, e.g. for pure states).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDensityReport {
    pub c: f64,
    pub n: f64,
    pub c1_negative: bool,
    pub optimal_ratio: Option<f64>,
}

/// Smaller eigenvalue of Alice's filtered reduced state at leading order:
/// `eps = (a^2 / 3 rho00^2)(rho11 rho00 - rho01 rho10)`, clamped to
/// `[0, 1/2]`.
pub fn epsilon_filter(derivs: &ReducedADerivs, a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::Parameter("half-width must be non-negative"));
    }
    let r00 = derivs.d00.re;
    let num = derivs.d11 * derivs.d00 - derivs.d01 * derivs.d10;
    let scale = (derivs.d11 * derivs.d00).norm() + derivs.d00.norm().powi(2);
    if num.im.abs() > 1e-10 * scale {
        return Err(Error::Consistency("epsilon numerator is not real"));
    }
    let eps = a * a / (3.0 * r00 * r00) * num.re;
    if eps < -CLAMP_TOL {
        return Err(Error::Consistency("negative filtered eigenvalue: corrupted derivatives"));
    }
    Ok(eps.clamp(0.0, 0.5))
}

/// Binary entropy `h(x) = -x log2 x - (1-x) log2(1-x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if x < -1e-12 || x > 1.0 + 1e-12 {
        return Err(Error::Domain("binary entropy argument outside [0, 1]"));
    }
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// Inverse of [`binary_entropy`] on the branch `[0, 1/2]`, by bisection.
pub fn binary_entropy_inv(s: f64) -> Result<f64> {
    if s < -1e-12 || s > 1.0 + 1e-12 {
        return Err(Error::Domain("binary entropy value outside [0, 1]"));
    }
    let s = s.clamp(0.0, 1.0);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid)? < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Concurrence density
/// `c = (2 / 3 rho0000) sqrt(rho1100 rho0011 + rho0000 rho1111
///      - rho1000 rho0111 - rho0100 rho1011)`.
pub fn concurrence_density(block: &DerivBlock) -> Result<f64> {
    let r = |i, j, k, l| block.coeff(i, j, k, l);
    let rad = r(1, 1, 0, 0) * r(0, 0, 1, 1) + r(0, 0, 0, 0) * r(1, 1, 1, 1)
        - r(1, 0, 0, 0) * r(0, 1, 1, 1)
        - r(0, 1, 0, 0) * r(1, 0, 1, 1);
    let scale = (r(1, 1, 0, 0) * r(0, 0, 1, 1)).norm()
        + (r(0, 0, 0, 0) * r(1, 1, 1, 1)).norm()
        + (r(1, 0, 0, 0) * r(0, 1, 1, 1)).norm()
        + (r(0, 1, 0, 0) * r(1, 0, 1, 1)).norm()
        + block.rho0().powi(2);
    if rad.im.abs() > 1e-10 * scale {
        return Err(Error::Consistency("concurrence radicand is not real"));
    }
    if rad.re < -1e-10 * scale {
        return Err(Error::Consistency("concurrence radicand is negative"));
    }
    Ok(2.0 / (3.0 * block.rho0()) * rad.re.max(0.0).sqrt())
}

/// Pure-state tangle at leading order: `tau = (c a b)^2`.
///
/// The associated entanglement estimate is `h(tau / 4)` via
/// [`binary_entropy`]. Mixed-state blocks are rejected; their concurrence
/// has no closed leading-order form and is computed numerically through the
/// two-qubit reduction instead.
pub fn tangle_leading(block: &DerivBlock, a: f64, b: f64) -> Result<f64> {
    if !block.is_pure_factorizable(1e-8) {
        return Err(Error::Unsupported("leading-order tangle requires a pure state"));
    }
    let c = concurrence_density(block)?;
    Ok((c * a * b).powi(2))
}

/// The coefficients `D1`, `D2`, `C1` from the derivative block.
pub fn negativity_coeffs(block: &DerivBlock) -> Result<NegativityCoeffs> {
    let r = |i, j, k, l| block.coeff(i, j, k, l);
    let r0 = block.rho0();
    let d1 = (r(1, 1, 0, 0) * r(0, 0, 0, 0) - r(0, 1, 0, 0) * r(1, 0, 0, 0)) / (3.0 * r0 * r0);
    let d2 = (r(0, 0, 1, 1) * r(0, 0, 0, 0) - r(0, 0, 0, 1) * r(0, 0, 1, 0)) / (3.0 * r0 * r0);
    let c1 = ((r(0, 0, 0, 0) * r(0, 1, 0, 1) - r(0, 0, 0, 1) * r(0, 1, 0, 0)) * r(1, 0, 1, 0)
        + r(0, 0, 1, 1) * (r(0, 1, 0, 0) * r(1, 0, 0, 0) - r(0, 0, 0, 0) * r(1, 1, 0, 0))
        + r(0, 0, 1, 0) * (r(0, 0, 0, 1) * r(1, 1, 0, 0) - r(0, 1, 0, 1) * r(1, 0, 0, 0)))
        / (9.0 * r0 * r0 * r0);
    for (v, name) in [
        (d1, "D1 has a non-real part"),
        (d2, "D2 has a non-real part"),
        (c1, "C1 has a non-real part"),
    ] {
        if v.im.abs() > 1e-10 * (1.0 + v.norm()) {
            return Err(Error::Consistency(name));
        }
    }
    Ok(NegativityCoeffs { d1: d1.re, d2: d2.re, c1: c1.re })
}

/// Negativity density `n` and the `C1 < 0` flag.
///
/// For `C1 >= 0`: `n = sqrt(C1 + D1 D2) - sqrt(D1 D2)`; for `C1 < 0` there
/// is no negativity at leading order and `n = 0`.
pub fn negativity_density(coeffs: &NegativityCoeffs) -> (f64, bool) {
    if coeffs.c1 < 0.0 {
        return (0.0, true);
    }
    // D1 D2 < 0 is possible only through numerical noise on physical states
    let dd = (coeffs.d1 * coeffs.d2).max(0.0);
    let n = ((coeffs.c1 + dd).max(0.0)).sqrt() - dd.sqrt();
    (n.max(0.0), false)
}

/// Region aspect ratio `a/b` maximizing the negativity at fixed area `ab`,
/// from the stationarity condition `a^2 D1 = b^2 D2`.
pub fn optimal_ratio(coeffs: &NegativityCoeffs) -> Result<f64> {
    if coeffs.d1 <= 0.0 || coeffs.d2 <= 0.0 {
        return Err(Error::UndefinedOptimum(
            "D1 and D2 must be positive; for pure or degenerate states any region shape is equivalent at leading order",
        ));
    }
    Ok((coeffs.d2 / coeffs.d1).sqrt())
}

/// Convenience: all local densities at one point from a derivative block.
pub fn local_density_report(block: &DerivBlock) -> Result<LocalDensityReport> {
    let c = concurrence_density(block)?;
    let coeffs = negativity_coeffs(block)?;
    let (n, c1_negative) = negativity_density(&coeffs);
    Ok(LocalDensityReport { c, n, c1_negative, optimal_ratio: optimal_ratio(&coeffs).ok() })
}

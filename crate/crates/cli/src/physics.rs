//! Shared computational helpers used by the commands and the validation
//! sweep: grid-budget plumbing, the mixed-state concurrence extrapolation and
//! the local entanglement threshold.

use localent_core::measures::negativity_coeffs;
use localent_core::qubit::{leading_two_qubit, project_two_qubit, Region};
use localent_core::state::{DensityKernel, GaussianCV, OscillatorSystem};
use localent_core::two_qubit::concurrence;
use localent_core::Error as CoreError;

use crate::error::CliError;

/// Default cap on per-axis grid dimensions.
pub const DEFAULT_GRID_BUDGET: usize = 4096;

/// Grid-dimension cap from `LOCALENT_GRID_BUDGET` (default 4096).
pub fn grid_budget() -> Result<usize, CliError> {
    match std::env::var("LOCALENT_GRID_BUDGET") {
        Ok(s) => s.parse().map_err(|_| {
            CliError::parameter(format!("LOCALENT_GRID_BUDGET: cannot parse `{s}`"))
        }),
        Err(_) => Ok(DEFAULT_GRID_BUDGET),
    }
}

/// Reject grid dimensions beyond the budget with exit code 4.
pub fn check_budget(dim: usize, budget: usize) -> Result<(), CliError> {
    if dim > budget {
        return Err(CliError::from(CoreError::Budget { dim, budget }));
    }
    Ok(())
}

/// Richardson-extrapolate `f(a) = f0 + beta a^2 + O(a^4)` to `a -> 0` from
/// two evaluations at `a` and `2a`.
pub fn richardson2(f_a: f64, f_2a: f64) -> f64 {
    f_a + (f_a - f_2a) / 3.0
}

/// Second-order Richardson over the ladder `{base, base/2, base/4}`,
/// removing the `a^2` and `a^4` terms of an even expansion.
pub fn richardson3(mut f: impl FnMut(f64) -> Result<f64, CoreError>, base: f64) -> Result<f64, CoreError> {
    let (f1, f2, f3) = (f(base)?, f(base / 2.0)?, f(base / 4.0)?);
    let r1 = richardson2(f2, f1);
    let r2 = richardson2(f3, f2);
    Ok(r2 + (r2 - r1) / 15.0)
}

/// Mixed-state concurrence density from the leading-order two-qubit
/// reduction: Wootters concurrence of the `DerivBlock` reduction divided by
/// the region area, Richardson-extrapolated `a -> 0` from `a in {0.02,
/// 0.01}`.
///
/// Accurate to ~1e-9 relative except in the crossover band where the thermal
/// occupancy is comparable to `a^2` (`T` near 0.15 for unit frequency),
/// where the even expansion degrades and errors can reach ~1e-3. Smaller
/// sizes cannot fix this: the fourth Wootters root scales like the product
/// of the filtered eigenvalues and falls below double-precision resolution.
pub fn mixed_c_leading(block: &localent_core::state::DerivBlock) -> Result<f64, CoreError> {
    let c_at = |a: f64| -> Result<f64, CoreError> {
        let st = leading_two_qubit(block, a, a)?;
        Ok(concurrence(&st.matrix)? / (a * a))
    };
    Ok(richardson2(c_at(0.01)?, c_at(0.02)?).max(0.0))
}

/// Extrapolation ladder base for [`mixed_c_quadrature`]: nearly pure states
/// (mean occupancy of the softest mode below 1e-3) must be sampled where
/// `a^2` is small against the thermal admixture `nbar`, which forces tiny
/// regions; genuinely mixed states must instead stay at larger sizes where
/// all four Wootters roots are resolvable in double precision.
pub fn quad_ladder_base(omega: f64, t: f64) -> f64 {
    let nbar = if t > 0.0 { 1.0 / ((omega / t).exp() - 1.0) } else { 0.0 };
    if nbar < 1e-3 {
        0.002
    } else {
        0.08
    }
}

/// Mixed-state concurrence density from the quadrature path: project the
/// kernel exactly on square regions `{base, base/2, base/4}`, take the
/// Wootters concurrence per unit area and Richardson-extrapolate in `a^2`
/// at second order.
pub fn mixed_c_quadrature<K: DensityKernel>(
    kernel: &K,
    center: (f64, f64),
    quad_order: usize,
    base: f64,
) -> Result<f64, CoreError> {
    let c_at = |a: f64| -> Result<f64, CoreError> {
        let region = Region::new(center, (a, a))?;
        let (st, _) = project_two_qubit(kernel, &region, quad_order)?;
        Ok(concurrence(&st.matrix)? / (a * a))
    };
    Ok(richardson3(c_at, base)?.max(0.0))
}

/// Temperature at which the local negativity density vanishes (`C1` changes
/// sign at the origin), by bisection over `[t_lo, t_hi]`.
pub fn local_threshold(
    sys: &OscillatorSystem,
    t_lo: f64,
    t_hi: f64,
    tol: f64,
) -> Result<f64, CoreError> {
    let c1_at = |t: f64| -> Result<f64, CoreError> {
        let block = sys.thermal_state(t)?.derivative_block((0.0, 0.0))?;
        Ok(negativity_coeffs(&block)?.c1)
    };
    let (mut lo, mut hi) = (t_lo, t_hi);
    let f_lo = c1_at(lo)?;
    let f_hi = c1_at(hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(CoreError::Domain("threshold bracket does not straddle C1 = 0"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if c1_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Thermal kernel for `sys` at temperature `t` (ground state when `t = 0`).
pub fn thermal_kernel(sys: &OscillatorSystem, t: f64) -> Result<GaussianCV, CoreError> {
    if t == 0.0 {
        Ok(sys.ground_state())
    } else {
        sys.thermal_state(t)
    }
}

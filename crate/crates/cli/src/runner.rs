//! Command implementations. Each function does the physics and returns the
//! full output text (or writes the CSV file), leaving flag parsing to the
//! binary.

use std::fmt::Write as _;

use rayon::prelude::*;

use localent_core::extraction::simulate_extraction;
use localent_core::gaussian_ref::{covariance_from_system, global_negativity};
use localent_core::grid::region_sweep;
use localent_core::measures::{
    concurrence_density, negativity_coeffs, negativity_density, optimal_ratio,
};
use localent_core::qubit::{project_two_qubit, Provenance, Region};
use localent_core::state::OscillatorSystem;
use localent_core::two_qubit::measure_report;
use localent_core::Error as CoreError;

use crate::error::CliError;
use crate::output::{csv_document, fmt_e, UNIT_COMMENT};
use crate::physics::{check_budget, mixed_c_leading, thermal_kernel};

/// State family selected by `--mode`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Ground,
    Thermal,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ground" => Ok(Mode::Ground),
            "thermal" => Ok(Mode::Thermal),
            other => Err(format!("unknown mode `{other}` (expected ground|thermal)")),
        }
    }
}

fn make_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::numeric(format!("cannot build thread pool: {e}")))
}

/// `fig1`: region-size sweep of filtered entropies for the ground state.
pub fn fig1(
    sys: &OscillatorSystem,
    sizes: &[f64],
    center: (f64, f64),
    grid_n: usize,
    jobs: usize,
    budget: usize,
) -> Result<String, CliError> {
    check_budget(grid_n, budget)?;
    let pool = make_pool(jobs)?;
    let rows: Result<Vec<Vec<f64>>, CoreError> = pool.install(|| {
        sizes
            .par_iter()
            .map(|&two_a| {
                let row = region_sweep(sys, &[two_a], center, grid_n)?;
                let r = row[0];
                Ok(vec![r.two_a, r.s_full_bits, r.s_twolevel_bits, r.c_estimate])
            })
            .collect()
    });
    Ok(csv_document("two_a,S_full_bits,S_twolevel_bits,c_estimate", &rows?))
}

/// `fig2`: temperature sweep of local densities against the global
/// negativity, for each coupling in `alphas`.
pub fn fig2(
    mass: f64,
    omega: f64,
    alphas: &[f64],
    t_min: f64,
    t_max: f64,
    dt: f64,
    jobs: usize,
) -> Result<String, CliError> {
    if !(dt > 0.0) || !(t_max >= t_min) || !(t_min > 0.0) {
        return Err(CliError::parameter("fig2 needs 0 < tmin <= tmax and dt > 0".into()));
    }
    let mut points = Vec::new();
    for &alpha in alphas {
        let mut k = 0usize;
        loop {
            let t = t_min + k as f64 * dt;
            if t > t_max + 1e-9 * dt {
                break;
            }
            points.push((alpha, t));
            k += 1;
        }
    }
    let pool = make_pool(jobs)?;
    let rows: Result<Vec<Vec<f64>>, CoreError> = pool.install(|| {
        points
            .par_iter()
            .map(|&(alpha, t)| {
                let sys = OscillatorSystem::new(mass, omega, alpha)?;
                let block = sys.thermal_state(t)?.derivative_block((0.0, 0.0))?;
                let coeffs = negativity_coeffs(&block)?;
                let (n_local, _) = negativity_density(&coeffs);
                let c_local = mixed_c_leading(&block)?;
                let n_global = global_negativity(&covariance_from_system(&sys, t)?)?;
                Ok(vec![t, alpha, n_local, c_local, n_global])
            })
            .collect()
    });
    Ok(csv_document("T,alpha,n_local,c_local,N_global", &rows?))
}

/// `density`: local entanglement densities at one configuration-space point.
pub fn density(
    sys: &OscillatorSystem,
    mode: Mode,
    temp: f64,
    center: (f64, f64),
) -> Result<String, CliError> {
    let kernel = match mode {
        Mode::Ground => sys.ground_state(),
        Mode::Thermal => thermal_kernel(sys, temp)?,
    };
    let block = kernel.derivative_block(center)?;
    let coeffs = negativity_coeffs(&block)?;
    let (n, c1_negative) = negativity_density(&coeffs);
    let c = match mode {
        Mode::Ground => concurrence_density(&block)?,
        Mode::Thermal => mixed_c_leading(&block)?,
    };
    let ratio = match optimal_ratio(&coeffs) {
        Ok(r) => fmt_e(r),
        Err(CoreError::UndefinedOptimum(_)) => "undefined".to_string(),
        Err(e) => return Err(e.into()),
    };
    let mut out = String::new();
    let _ = writeln!(out, "{UNIT_COMMENT}");
    let _ = writeln!(out, "mode = {}", if mode == Mode::Ground { "ground" } else { "thermal" });
    let _ = writeln!(out, "alpha = {}", fmt_e(sys.alpha));
    if mode == Mode::Thermal {
        let _ = writeln!(out, "T = {}", fmt_e(temp));
    }
    let _ = writeln!(out, "center = {},{}", fmt_e(center.0), fmt_e(center.1));
    let _ = writeln!(out, "c = {}", fmt_e(c));
    let _ = writeln!(out, "n = {}", fmt_e(n));
    let _ = writeln!(out, "D1 = {}", fmt_e(coeffs.d1));
    let _ = writeln!(out, "D2 = {}", fmt_e(coeffs.d2));
    let _ = writeln!(out, "C1 = {}", fmt_e(coeffs.c1));
    let _ = writeln!(out, "C1_negative = {}", c1_negative);
    let _ = writeln!(out, "optimal_ratio = {ratio}");
    Ok(out)
}

/// `reduce`: dump the quadrature two-qubit reduction and its measures for a
/// region.
pub fn reduce(
    sys: &OscillatorSystem,
    mode: Mode,
    temp: f64,
    center: (f64, f64),
    half_widths: (f64, f64),
    quad_order: usize,
) -> Result<String, CliError> {
    let kernel = match mode {
        Mode::Ground => sys.ground_state(),
        Mode::Thermal => thermal_kernel(sys, temp)?,
    };
    let region = Region::new(center, half_widths)?;
    let (state, p_region) = project_two_qubit(&kernel, &region, quad_order)?;
    let report = measure_report(&state.matrix)?;
    let mut out = String::new();
    let _ = writeln!(out, "{UNIT_COMMENT}");
    match state.provenance {
        Provenance::Quadrature { order, converged } => {
            let _ = writeln!(out, "provenance = quadrature order={order} converged={converged}");
        }
        Provenance::LeadingOrder => {
            let _ = writeln!(out, "provenance = leading-order");
        }
    }
    let _ = writeln!(out, "p_region = {}", fmt_e(p_region));
    for i in 0..4 {
        for j in 0..4 {
            let z = state.matrix[(i, j)];
            let _ = writeln!(out, "rho {i} {j} = {} {}", fmt_e(z.re), fmt_e(z.im));
        }
    }
    let _ = writeln!(out, "concurrence = {}", fmt_e(report.concurrence));
    let _ = writeln!(out, "tangle = {}", fmt_e(report.tangle));
    let _ = writeln!(out, "eof_bits = {}", fmt_e(report.eof));
    let _ = writeln!(out, "negativity = {}", fmt_e(report.negativity));
    let _ = writeln!(out, "vn_entropy_a_bits = {}", fmt_e(report.vn_entropy_a));
    Ok(out)
}

/// `extract`: simulate the SWAP extraction protocol on a square region.
pub fn extract(
    sys: &OscillatorSystem,
    center: (f64, f64),
    a: f64,
    grid_n: usize,
    budget: usize,
) -> Result<String, CliError> {
    check_budget(grid_n, budget)?;
    let region = Region::new(center, (a, a))?;
    let (_, report) = simulate_extraction(sys, &region, grid_n)?;
    let mut out = String::new();
    let _ = writeln!(out, "{UNIT_COMMENT}");
    let _ = writeln!(out, "lambda_ratio = {}", fmt_e(report.lambda_ratio));
    let _ = writeln!(out, "reference_concurrence = {}", fmt_e(report.reference_concurrence));
    let _ = writeln!(out, "ancilla_concurrence = {}", fmt_e(report.ancilla_concurrence));
    Ok(out)
}

//! Validation sweep: every documented correctness property of the library,
//! checked end to end. `sweep-validate` prints one line per criterion; the
//! suite is also asserted by the integration tests.

use rayon::prelude::*;

use localent_core::extraction::{simulate_extraction, u_swap_qubit_rep};
use localent_core::gaussian_ref::{
    covariance_from_system, global_negativity_threshold, reduced_entropy_global,
};
use localent_core::grid::{filtered_spectrum_1d, region_sweep};
use localent_core::measures::{
    concurrence_density, epsilon_filter, negativity_coeffs, negativity_density, optimal_ratio,
};
use localent_core::qubit::{project_two_qubit, validity_spectrum, Region};
use localent_core::state::OscillatorSystem;
use localent_core::two_qubit::{concurrence, negativity4};
use localent_core::{Complex64, Error as CoreError};
use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::physics::{local_threshold, mixed_c_quadrature, quad_ladder_base};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the full sweep.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionReport>,
    /// Informational line (no pass/fail weight): coupling-convention
    /// comparison for the closed-form ground-state concurrence density.
    pub diagnostic: String,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    /// Render the report as printed by `sweep-validate`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            out.push_str(&format!(
                "criterion {:2} {} {}: {}\n",
                c.id,
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!("info          {}\n", self.diagnostic));
        let n_pass = self.criteria.iter().filter(|c| c.passed).count();
        out.push_str(&format!("result: {}/{} criteria passed\n", n_pass, self.criteria.len()));
        out
    }
}

fn report(
    id: usize,
    name: &'static str,
    outcome: Result<(bool, String), CoreError>,
) -> CriterionReport {
    match outcome {
        Ok((passed, detail)) => CriterionReport { id, name, passed, detail },
        Err(e) => CriterionReport { id, name, passed: false, detail: format!("error: {e}") },
    }
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Coefficient of variation (population std / mean).
fn cov(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt() / mean
}

/// 1. Leading-order convergence of the quadrature concurrence to the
/// closed-form concurrence density, with second-order error in the region
/// size.
fn criterion_1() -> Result<(bool, String), CoreError> {
    let sys = OscillatorSystem::with_normal_modes(1.0, 1.0, 2.0)?;
    let kernel = sys.ground_state();
    let c_ref = concurrence_density(&kernel.derivative_block((0.0, 0.0))?)?;
    let oracle_ok = (c_ref - 1.0 / 3.0).abs() <= 1e-12;
    let sizes = [0.2, 0.1, 0.05, 0.025];
    let errs: Result<Vec<f64>, CoreError> = sizes
        .par_iter()
        .map(|&a| {
            let (st, _) = project_two_qubit(&kernel, &Region::square(a)?, 16)?;
            let c = concurrence(&st.matrix)? / (a * a);
            Ok((c - c_ref).abs())
        })
        .collect();
    let errs = errs?;
    let xs: Vec<f64> = sizes.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let s = slope(&xs, &ys);
    let passed = oracle_ok && (s - 2.0).abs() <= 0.2;
    Ok((passed, format!("c_ref={c_ref:.12}, error slope {s:.3} (target 2 +- 0.2)")))
}

/// 2. Filtered-eigenvalue formula against the grid spectrum of the thermal
/// single-mode state, plus exact `a^2` scaling of the analytic value.
fn criterion_2() -> Result<(bool, String), CoreError> {
    let t = 0.5;
    let sys = OscillatorSystem::new(1.0, 1.0, 0.0)?;
    let derivs = sys.thermal_state(t)?.reduced_a_derivs(0.0)?;
    let a0 = 0.01;
    let eps_analytic = epsilon_filter(&derivs, a0)?;
    let eps_grid = filtered_spectrum_1d(1.0, 1.0, t, 0.0, a0, 400)?[1];
    let rel = (eps_analytic - eps_grid).abs() / eps_grid;
    let base = eps_analytic / (a0 * a0);
    let mut drift: f64 = 0.0;
    for a in [0.02, 0.005] {
        let r = epsilon_filter(&derivs, a)? / (a * a);
        drift = drift.max((r - base).abs() / base);
    }
    let passed = rel <= 1e-3 && drift <= 1e-6;
    Ok((passed, format!("grid rel err {rel:.2e} (<=1e-3), eps/a^2 drift {drift:.2e} (<=1e-6)")))
}

/// 3. Pure-state relation n = c/2.
fn criterion_3() -> Result<(bool, String), CoreError> {
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 2.0, 10.0] {
        let sys = OscillatorSystem::new(1.0, 1.0, alpha)?;
        for center in [(0.0, 0.0), (0.3, -0.2)] {
            let block = sys.ground_state().derivative_block(center)?;
            let c = concurrence_density(&block)?;
            let (n, _) = negativity_density(&negativity_coeffs(&block)?);
            worst = worst.max((n - c / 2.0).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |n - c/2| = {worst:.2e} (<=1e-10)")))
}

/// 4. Position independence of the densities over 25 centers in [-1,1]^2,
/// on the analytic and the quadrature paths, for ground and thermal states.
fn criterion_4() -> Result<(bool, String), CoreError> {
    let sys = OscillatorSystem::new(1.0, 1.0, 2.0)?;
    let kernels = [("ground", sys.ground_state()), ("thermal", sys.thermal_state(0.3)?)];
    let centers: Vec<(f64, f64)> = (0..5)
        .flat_map(|i| (0..5).map(move |j| (-1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64)))
        .collect();
    let mut worst_analytic: f64 = 0.0;
    let mut worst_quad: f64 = 0.0;
    for (label, kernel) in &kernels {
        let analytic: Result<Vec<(f64, f64)>, CoreError> = centers
            .par_iter()
            .map(|&ctr| {
                let block = kernel.derivative_block(ctr)?;
                let c = if *label == "ground" {
                    concurrence_density(&block)?
                } else {
                    // three-point ladder: the position-dependent residual of
                    // the two-point form would dominate the CoV budget
                    crate::physics::richardson3(
                        |a| {
                            let st = localent_core::qubit::leading_two_qubit(&block, a, a)?;
                            Ok(concurrence(&st.matrix)? / (a * a))
                        },
                        0.02,
                    )?
                };
                let (n, _) = negativity_density(&negativity_coeffs(&block)?);
                Ok((c, n))
            })
            .collect();
        let analytic = analytic?;
        let cs: Vec<f64> = analytic.iter().map(|p| p.0).collect();
        let ns: Vec<f64> = analytic.iter().map(|p| p.1).collect();
        worst_analytic = worst_analytic.max(cov(&cs)).max(cov(&ns));

        let a = 0.004;
        let quad: Result<Vec<(f64, f64)>, CoreError> = centers
            .par_iter()
            .map(|&ctr| {
                let (st, _) = project_two_qubit(kernel, &Region::new(ctr, (a, a))?, 8)?;
                let c = concurrence(&st.matrix)? / (a * a);
                let n = negativity4(&st.matrix)? / (a * a);
                Ok((c, n))
            })
            .collect();
        let quad = quad?;
        let cs: Vec<f64> = quad.iter().map(|p| p.0).collect();
        let ns: Vec<f64> = quad.iter().map(|p| p.1).collect();
        worst_quad = worst_quad.max(cov(&cs)).max(cov(&ns));
    }
    let passed = worst_analytic <= 1e-8 && worst_quad <= 1e-4;
    Ok((
        passed,
        format!("CoV analytic {worst_analytic:.2e} (<=1e-8), quadrature {worst_quad:.2e} (<=1e-4)"),
    ))
}

/// 5. Mixed-Gaussian relation c = 2n below the entanglement threshold, with
/// the mixed concurrence from the extrapolated quadrature path.
fn criterion_5() -> Result<(bool, String), CoreError> {
    let combos = [(0.5, 0.1), (0.5, 0.3), (2.0, 0.1), (2.0, 0.3), (2.0, 0.6)];
    let rels: Result<Vec<f64>, CoreError> = combos
        .par_iter()
        .map(|&(alpha, t)| {
            let sys = OscillatorSystem::new(1.0, 1.0, alpha)?;
            let kernel = sys.thermal_state(t)?;
            let block = kernel.derivative_block((0.0, 0.0))?;
            let (n, _) = negativity_density(&negativity_coeffs(&block)?);
            let c = mixed_c_quadrature(&kernel, (0.0, 0.0), 16, quad_ladder_base(1.0, t))?;
            Ok((c - 2.0 * n).abs() / (2.0 * n))
        })
        .collect();
    let worst = rels?.into_iter().fold(0.0f64, f64::max);
    Ok((worst <= 1e-6, format!("max rel |c - 2n| = {worst:.2e} (<=1e-6)")))
}

/// 6. The local negativity density and the global negativity vanish at the
/// same temperature.
fn criterion_6() -> Result<(bool, String), CoreError> {
    let mut detail = String::new();
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 2.0] {
        let sys = OscillatorSystem::new(1.0, 1.0, alpha)?;
        let t_local = local_threshold(&sys, 0.05, 1.5, 1e-4)?;
        let t_global = global_negativity_threshold(&sys, 0.05, 1.5, 1e-4)?;
        worst = worst.max((t_local - t_global).abs());
        detail.push_str(&format!("alpha={alpha}: local {t_local:.4}, global {t_global:.4}; "));
    }
    detail.push_str(&format!("max gap {worst:.2e} (<=0.02)"));
    Ok((worst <= 0.02, detail))
}

/// 7. Region-size sweep of the filtered entropy: monotone growth, saturation
/// at the global reduced entropy, and small-region recovery of the
/// concurrence density.
fn criterion_7() -> Result<(bool, String), CoreError> {
    let sys = OscillatorSystem::new(1.0, 1.0, 10.0)?;
    let n_grid = 256;
    let sizes: Vec<f64> =
        (0..24).map(|i| 0.05 * (8.0f64 / 0.05).powf(i as f64 / 23.0)).collect();
    let rows: Result<Vec<_>, CoreError> = sizes
        .par_iter()
        .map(|&s| Ok(region_sweep(&sys, &[s], (0.0, 0.0), n_grid)?[0]))
        .collect();
    let rows = rows?;
    let monotone = rows.windows(2).all(|w| w[1].s_full_bits >= w[0].s_full_bits - 1e-9);
    let s_ref = reduced_entropy_global(&covariance_from_system(&sys, 0.0)?)?;
    let s_large = rows.last().unwrap().s_full_bits;
    let sat_rel = (s_large - s_ref).abs() / s_ref;
    let small = region_sweep(&sys, &[0.1], (0.0, 0.0), n_grid)?[0];
    let c_ref = concurrence_density(&sys.ground_state().derivative_block((0.0, 0.0))?)?;
    let c_rel = (small.c_estimate - c_ref).abs() / c_ref;
    let passed = monotone && sat_rel <= 0.02 && c_rel <= 0.05;
    Ok((
        passed,
        format!(
            "monotone={monotone}, saturation rel {sat_rel:.2e} (<=2e-2), \
             small-region c rel {c_rel:.2e} (<=5e-2)"
        ),
    ))
}

/// 8. Two-level validity: the third filtered eigenvalue scales as the square
/// of the second.
fn criterion_8() -> Result<(bool, String), CoreError> {
    let sys = OscillatorSystem::new(1.0, 1.0, 10.0)?;
    let wf = sys.ground_wavefunction();
    let sizes = [0.4, 0.2, 0.1];
    let lams: Result<Vec<(f64, f64)>, CoreError> = sizes
        .par_iter()
        .map(|&a| {
            let lam = validity_spectrum(|qa, qb| wf.eval(qa, qb), &Region::square(a)?, 64)?;
            Ok((lam[1], lam[2]))
        })
        .collect();
    let lams = lams?;
    let xs: Vec<f64> = lams.iter().map(|l| l.0.ln()).collect();
    let ys: Vec<f64> = lams.iter().map(|l| l.1.ln()).collect();
    let s = slope(&xs, &ys);
    Ok(((s - 2.0).abs() <= 0.3, format!("lambda3 vs lambda2 exponent {s:.3} (target 2 +- 0.3)")))
}

/// 9. Optimal region shape: the numerical argmax of the quadrature
/// negativity over the aspect ratio at fixed area matches the predicted
/// optimum for an asymmetrically dilated state.
fn criterion_9() -> Result<(bool, String), CoreError> {
    let sys = OscillatorSystem::new(1.0, 1.0, 2.0)?;
    let kernel = sys.thermal_state(0.3)?.dilate_a(2.0)?;
    let block = kernel.derivative_block((0.0, 0.0))?;
    let pred = optimal_ratio(&negativity_coeffs(&block)?)?;
    let area = 1e-4;
    let n_scan = 41usize;
    let ratios: Vec<f64> = (0..n_scan)
        .map(|k| pred * 0.9 * (1.1f64 / 0.9).powf(k as f64 / (n_scan - 1) as f64))
        .collect();
    let negs: Result<Vec<f64>, CoreError> = ratios
        .par_iter()
        .map(|&r| {
            let a = (area * r).sqrt();
            let b = (area / r).sqrt();
            let (st, _) = project_two_qubit(&kernel, &Region::new((0.0, 0.0), (a, b))?, 8)?;
            negativity4(&st.matrix)
        })
        .collect();
    let negs = negs?;
    let k_max = negs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(k, _)| k)
        .unwrap();
    // parabolic refinement in ln(ratio) when the maximum is interior
    let r_star = if k_max > 0 && k_max < n_scan - 1 {
        let (y0, y1, y2) = (negs[k_max - 1], negs[k_max], negs[k_max + 1]);
        let h = (ratios[1] / ratios[0]).ln();
        let delta = 0.5 * (y0 - y2) / (y0 - 2.0 * y1 + y2);
        ratios[k_max] * (delta * h).exp()
    } else {
        ratios[k_max]
    };
    let rel = (r_star - pred).abs() / pred;
    Ok((rel <= 0.01, format!("argmax a/b = {r_star:.5}, predicted {pred:.5}, rel {rel:.2e}")))
}

fn werner(p: f64) -> Matrix4<Complex64> {
    // |Psi-> = (|01> - |10>)/sqrt(2) in the basis |A0 B0>, |A0 B1>, ...
    let mut psi = Matrix4::<Complex64>::zeros();
    let s = Complex64::new(0.5, 0.0);
    psi[(1, 1)] = s;
    psi[(2, 2)] = s;
    psi[(1, 2)] = -s;
    psi[(2, 1)] = -s;
    let eye = Matrix4::<Complex64>::identity() * Complex64::new(0.25, 0.0);
    psi * Complex64::new(p, 0.0) + eye * Complex64::new(1.0 - p, 0.0)
}

/// 10. Closed-form Werner-state measures and PPT/concurrence agreement on
/// random density matrices.
fn criterion_10() -> Result<(bool, String), CoreError> {
    let mut worst: f64 = 0.0;
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let rho = werner(p);
        let c = concurrence(&rho)?;
        let n = negativity4(&rho)?;
        worst = worst.max((c - (0.0f64).max((3.0 * p - 1.0) / 2.0)).abs());
        worst = worst.max((n - (0.0f64).max((3.0 * p - 1.0) / 4.0)).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut normal = move || {
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * core::f64::consts::PI * u2).cos()
    };
    let mut agree = 0usize;
    let total = 1000usize;
    for _ in 0..total {
        let g = Matrix4::<Complex64>::from_fn(|_, _| Complex64::new(normal(), normal()));
        let rho = &g * g.adjoint();
        let rho = rho * Complex64::new(1.0 / rho.trace().re, 0.0);
        let entangled_c = concurrence(&rho)? > 1e-7;
        let entangled_n = negativity4(&rho)? > 1e-9;
        if entangled_c == entangled_n {
            agree += 1;
        }
    }
    let passed = worst <= 1e-9 && agree == total;
    Ok((passed, format!("Werner max err {worst:.2e} (<=1e-9), PPT agreement {agree}/{total}")))
}

/// 11. Extraction: the qubit-representation SWAP is exact up to a global
/// phase, and the protocol transfers the region concurrence to the ancillas.
fn criterion_11() -> Result<(bool, String), CoreError> {
    let u = u_swap_qubit_rep()?;
    let mut swap = Matrix4::<Complex64>::identity();
    swap.swap_rows(1, 2); // SWAP in the |A B> product basis
    let phase = (u * swap.adjoint())[(0, 0)];
    let phase = phase / Complex64::new(phase.norm(), 0.0);
    let dist = (u - swap * phase).iter().map(|z| z.norm()).fold(0.0f64, f64::max);

    let sys = OscillatorSystem::new(1.0, 1.0, 10.0)?;
    let (_, rep) = simulate_extraction(&sys, &Region::square(0.05)?, 64)?;
    let rel = (rep.ancilla_concurrence - rep.reference_concurrence).abs()
        / rep.reference_concurrence;
    let passed = dist <= 1e-10 && rel <= 0.01;
    Ok((
        passed,
        format!("SWAP phase distance {dist:.2e} (<=1e-10), ancilla rel err {rel:.2e} (<=1e-2)"),
    ))
}

/// 12. Closed-form ground-state concurrence density: the analytic path
/// reproduces c = (m/3)|w+ - w-|, the second cross-derivative form of the
/// log-wavefunction identity, for several normal-mode splittings.
fn criterion_12() -> Result<(bool, String), CoreError> {
    let mut worst: f64 = 0.0;
    for (wp, wm) in [(1.0, 2.0), (1.0, 1.5), (0.8, 2.3)] {
        let sys = OscillatorSystem::with_normal_modes(1.0, wp, wm)?;
        let block = sys.ground_state().derivative_block((0.3, -0.4))?;
        let c = concurrence_density(&block)?;
        let c_ref = (wp - wm as f64).abs() / 3.0;
        worst = worst.max((c - c_ref).abs());
    }
    Ok((worst <= 1e-10, format!("max |c - (m/3)|w+ - w-|| = {worst:.2e} (<=1e-10)")))
}

/// Informational only: compare the adopted coupling convention's
/// ground-state concurrence density at alpha = 2 with the published
/// closed-form expression sqrt(2) m w / 6 sqrt(1 + 2a - sqrt(1 + 4a)).
fn eq17_diagnostic() -> String {
    let alpha = 2.0f64;
    let adopted = OscillatorSystem::new(1.0, 1.0, alpha)
        .and_then(|sys| sys.ground_state().derivative_block((0.0, 0.0)))
        .and_then(|b| concurrence_density(&b));
    let published =
        (2.0f64).sqrt() / 6.0 * (1.0 + 2.0 * alpha - (1.0 + 4.0 * alpha).sqrt()).sqrt();
    match adopted {
        Ok(c) => format!(
            "closed-form c at alpha=2: adopted convention {c:.6}, published form {published:.6} \
             (ratio {:.4}; convention difference, informational only)",
            c / published
        ),
        Err(e) => format!("closed-form diagnostic unavailable: {e}"),
    }
}

/// Run the full validation sweep.
pub fn run_all() -> SuiteReport {
    let criteria = vec![
        report(1, "leading-order convergence", criterion_1()),
        report(2, "filtered eigenvalue vs grid", criterion_2()),
        report(3, "pure-state relation n = c/2", criterion_3()),
        report(4, "position independence", criterion_4()),
        report(5, "mixed relation c = 2n", criterion_5()),
        report(6, "threshold coincidence", criterion_6()),
        report(7, "region-size sweep", criterion_7()),
        report(8, "two-level validity scaling", criterion_8()),
        report(9, "optimal region shape", criterion_9()),
        report(10, "two-qubit measure oracles", criterion_10()),
        report(11, "extraction protocol", criterion_11()),
        report(12, "closed-form concurrence density", criterion_12()),
    ];
    SuiteReport { criteria, diagnostic: eq17_diagnostic() }
}

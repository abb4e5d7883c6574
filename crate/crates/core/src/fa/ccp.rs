use nalgebra::DVector;

use super::objective::{check_gamma, objective_with};
use super::problem::{EigenRoute, FaProblem, FaSolution, SecondMoment};
use super::spectral::{scaled_spectrum, Spectrum};
use crate::Result;

/// Relative margin below `1 / eps` under which a coordinate counts as unsaturated.
pub const SATURATION_TOLERANCE: f64 = 1e-6;

/// Number of coordinates with `gamma_i < (1 - 1e-6) / eps`, i.e. unique variance above the floor.
pub fn support_size(gamma: &DVector<f64>, eps_floor: f64) -> usize {
    let cut = (1.0 - SATURATION_TOLERANCE) / eps_floor;
    gamma.iter().filter(|&&g| g < cut).count()
}

/// Spectral weights `max(0, 1 - 1/l_i)` for the leading `r` eigenvalues, zero elsewhere.
fn weights(spectrum: &Spectrum, r: usize) -> Vec<f64> {
    (0..spectrum.values.len())
        .map(|i| {
            let l = spectrum.values[i];
            if i < r && l > 1.0 {
                1.0 - 1.0 / l
            } else {
                0.0
            }
        })
        .collect()
}

/// `grad_i = (1/gamma_i) sum_j w_j l_j U_ij^2`, the diagonal of
/// `Gamma^-1/2 U D U^T Gamma^1/2 R`.
fn gradient_from(gamma: &DVector<f64>, spectrum: &Spectrum, r: usize) -> DVector<f64> {
    let w = weights(spectrum, r);
    let mut grad = DVector::zeros(gamma.len());
    for (j, &wj) in w.iter().enumerate() {
        if wj == 0.0 {
            continue;
        }
        let scale = wj * spectrum.values[j];
        for (i, g) in grad.iter_mut().enumerate() {
            let u = spectrum.vectors[(i, j)];
            *g += scale * u * u;
        }
    }
    grad.component_div_assign(gamma);
    grad
}

/// Subgradient of the spectral part `f2` at `gamma`. All entries are non-negative.
pub fn subgradient_f2(gamma: &DVector<f64>, moment: &SecondMoment, r: usize) -> Result<DVector<f64>> {
    check_gamma(gamma, moment.dim())?;
    let spectrum = scaled_spectrum(moment, gamma, EigenRoute::Auto);
    Ok(gradient_from(gamma, &spectrum, r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcpStep {
    pub gamma: DVector<f64>,
    /// Coordinates whose denominator `R_ii - grad_i` was not positive; they are set to `1 / eps`.
    pub degenerate: usize,
}

fn step_from(gamma: &DVector<f64>, diag: &DVector<f64>, spectrum: &Spectrum, r: usize, eps_floor: f64) -> CcpStep {
    let grad = gradient_from(gamma, spectrum, r);
    let cap = 1.0 / eps_floor;
    let mut degenerate = 0;
    let next = DVector::from_iterator(
        gamma.len(),
        diag.iter().zip(grad.iter()).map(|(&c, &g)| {
            let den = c - g;
            if den > 0.0 {
                (1.0 / den).min(cap)
            } else {
                degenerate += 1;
                cap
            }
        }),
    );
    CcpStep { gamma: next, degenerate }
}

/// One convex-concave update: minimizes `sum_i (-ln g_i + (R_ii - grad_i) g_i)` over `0 < g_i <= 1/eps`.
pub fn ccp_step(gamma: &DVector<f64>, moment: &SecondMoment, r: usize, eps_floor: f64) -> Result<CcpStep> {
    check_gamma(gamma, moment.dim())?;
    let spectrum = scaled_spectrum(moment, gamma, EigenRoute::Auto);
    Ok(step_from(gamma, &moment.diagonal(), &spectrum, r, eps_floor))
}

/// Default start: `gamma_i = min(1 / R_ii, 1 / eps)`, with `1 / eps` on zero diagonal entries.
pub fn initial_gamma(diag: &DVector<f64>, eps_floor: f64) -> DVector<f64> {
    let cap = 1.0 / eps_floor;
    diag.map(|c| if c > 0.0 { (1.0 / c).min(cap) } else { cap })
}

/// Iterates [`ccp_step`] until the relative change of `gamma` drops below
/// `eps_stop` or `max_iter` steps have been taken.
pub fn dc_solve(problem: &FaProblem, gamma_init: Option<&DVector<f64>>) -> Result<FaSolution> {
    problem.validate()?;
    let moment = &problem.moment;
    let diag = moment.diagonal();
    let cap = 1.0 / problem.eps_floor;
    let mut gamma = match gamma_init {
        Some(g) => {
            check_gamma(g, moment.dim())?;
            g.map(|x| x.min(cap))
        }
        None => initial_gamma(&diag, problem.eps_floor),
    };
    let mut spectrum = scaled_spectrum(moment, &gamma, problem.route);
    let mut objective_trace = vec![objective_with(&gamma, &diag, &spectrum, problem.rank)];
    let mut step_norms = Vec::new();
    let mut degenerate_updates = 0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < problem.max_iter {
        let step = step_from(&gamma, &diag, &spectrum, problem.rank, problem.eps_floor);
        degenerate_updates += step.degenerate;
        let change = (&step.gamma - &gamma).norm();
        let reference = gamma.norm();
        gamma = step.gamma;
        spectrum = scaled_spectrum(moment, &gamma, problem.route);
        objective_trace.push(objective_with(&gamma, &diag, &spectrum, problem.rank));
        step_norms.push(change);
        iterations += 1;
        if change < problem.eps_stop * reference {
            converged = true;
            break;
        }
    }
    Ok(FaSolution {
        tau: support_size(&gamma, problem.eps_floor),
        gamma,
        objective_trace,
        step_norms,
        iterations,
        converged,
        degenerate_updates,
        eps_floor: problem.eps_floor,
    })
}

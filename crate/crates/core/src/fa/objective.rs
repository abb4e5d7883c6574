use nalgebra::{DMatrix, DVector};

use super::problem::{EigenRoute, SecondMoment};
use super::spectral::{scaled_spectrum, Spectrum};
use crate::{Error, Result};

/// `sum_{i<r} (max(1, l_i) - 1 - ln max(1, l_i))` over the leading eigenvalues; the
/// convex spectral part that the iteration linearizes.
pub fn f2_value(spectrum: &Spectrum, r: usize) -> f64 {
    (0..r)
        .map(|i| {
            let m = spectrum.value(i).max(1.0);
            m - 1.0 - m.ln()
        })
        .sum()
}

pub(crate) fn check_gamma(gamma: &DVector<f64>, d: usize) -> Result<()> {
    if gamma.len() != d {
        return Err(Error::Dimension {
            context: "gamma",
            expected: d.to_string(),
            got: gamma.len().to_string(),
        });
    }
    if let Some(bad) = gamma.iter().find(|&&g| !(g > 0.0 && g.is_finite())) {
        return Err(Error::Domain(format!("gamma entries must be positive and finite, found {bad}")));
    }
    Ok(())
}

pub(crate) fn objective_with(gamma: &DVector<f64>, diag: &DVector<f64>, spectrum: &Spectrum, r: usize) -> f64 {
    let convex: f64 = gamma.iter().zip(diag.iter()).map(|(&g, &c)| -g.ln() + c * g).sum();
    convex - f2_value(spectrum, r)
}

/// Reduced objective `log det P + tr(P^-1/2 R P^-1/2) + e_r(lambda')` written in `gamma = diag(P^-1)`.
pub fn p2_objective(gamma: &DVector<f64>, moment: &SecondMoment, r: usize) -> Result<f64> {
    check_gamma(gamma, moment.dim())?;
    let spectrum = scaled_spectrum(moment, gamma, EigenRoute::Auto);
    Ok(objective_with(gamma, &moment.diagonal(), &spectrum, r))
}

/// Negative log-likelihood form `-log det(Sigma^-1) + tr(Sigma^-1 R)`.
pub fn p1_objective(sigma: &DMatrix<f64>, r: &DMatrix<f64>) -> Result<f64> {
    let chol = sigma
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Domain("covariance is not positive definite".into()))?;
    let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>();
    Ok(log_det + chol.solve(r).trace())
}

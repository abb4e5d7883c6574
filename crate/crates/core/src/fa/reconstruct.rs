use nalgebra::{DMatrix, DVector};

use super::objective::check_gamma;
use super::problem::{EigenRoute, SecondMoment};
use super::spectral::scaled_spectrum;
use crate::{Error, Result};

/// Covariance `Sigma = V V^T + P` rebuilt from a solved `gamma`.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// `d x r` loading matrix.
    pub v: DMatrix<f64>,
    /// Diagonal of `P`, i.e. `1 / gamma`.
    pub p: DVector<f64>,
    pub sigma: DMatrix<f64>,
}

/// Builds the optimal low-rank part for fixed `P = Gamma^-1`: with `(l_i, u_i)` the
/// eigenpairs of `Gamma^1/2 R Gamma^1/2`, column `i` of `V` is
/// `P^1/2 u_i sqrt(max(1, l_i) - 1)`.
pub fn reconstruct_covariance(gamma: &DVector<f64>, moment: &SecondMoment, r: usize) -> Result<Reconstruction> {
    let d = moment.dim();
    check_gamma(gamma, d)?;
    let spectrum = scaled_spectrum(moment, gamma, EigenRoute::Auto);
    let p = gamma.map(|g| 1.0 / g);
    let v = DMatrix::from_fn(d, r, |i, j| {
        let scale = (spectrum.value(j).max(1.0) - 1.0).sqrt();
        if scale == 0.0 {
            0.0
        } else {
            p[i].sqrt() * spectrum.vectors[(i, j)] * scale
        }
    });
    let mut sigma = &v * v.transpose();
    for i in 0..d {
        sigma[(i, i)] += p[i];
    }
    Ok(Reconstruction { v, p, sigma })
}

/// `(V V^T + P)^-1 = P^-1 - P^-1 V (I + V^T P^-1 V)^-1 V^T P^-1` for diagonal `P > 0`.
pub fn sherman_woodbury_inverse(v: &DMatrix<f64>, p: &DVector<f64>) -> Result<DMatrix<f64>> {
    if v.nrows() != p.len() {
        return Err(Error::Dimension {
            context: "Sherman-Woodbury loading",
            expected: format!("{} rows", p.len()),
            got: format!("{} rows", v.nrows()),
        });
    }
    if p.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Domain("diagonal of P must be positive and finite".into()));
    }
    let pinv = p.map(|x| 1.0 / x);
    let w = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| pinv[i] * v[(i, j)]);
    let mut core = v.tr_mul(&w);
    for k in 0..core.nrows() {
        core[(k, k)] += 1.0;
    }
    let core_inv = core
        .cholesky()
        .ok_or_else(|| Error::Domain("capacitance matrix is not positive definite".into()))?
        .inverse();
    let mut out = -(&w * core_inv * w.transpose());
    for i in 0..p.len() {
        out[(i, i)] += pinv[i];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::fa::{dc_solve, p1_objective, p2_objective, FaProblem};

    fn sample_moment() -> SecondMoment {
        let f = DMatrix::from_fn(6, 5, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.1 * j as f64);
        SecondMoment::from_factor(f)
    }

    #[test]
    fn inverse_matches_direct() {
        let v = DMatrix::from_row_slice(3, 2, &[1.0, 0.5, -0.3, 2.0, 0.7, 0.0]);
        let p = DVector::from_vec(vec![0.5, 1.5, 2.0]);
        let sigma = &v * v.transpose() + DMatrix::from_diagonal(&p);
        let direct = sigma.try_inverse().unwrap();
        assert_relative_eq!(sherman_woodbury_inverse(&v, &p).unwrap(), direct, epsilon = 1e-12);
    }

    #[test]
    fn inverse_rejects_bad_p() {
        let v = DMatrix::zeros(2, 1);
        assert!(sherman_woodbury_inverse(&v, &DVector::from_vec(vec![1.0, 0.0])).is_err());
        assert!(sherman_woodbury_inverse(&v, &DVector::from_vec(vec![1.0])).is_err());
    }

    #[test]
    fn reconstruction_objective_equals_reduced_objective() {
        let m = sample_moment();
        for r in 1..4 {
            let sol = dc_solve(&FaProblem::new(m.clone(), r, 1e-2).unwrap(), None).unwrap();
            let rec = reconstruct_covariance(&sol.gamma, &m, r).unwrap();
            let p1 = p1_objective(&rec.sigma, m.matrix()).unwrap();
            let p2 = p2_objective(&sol.gamma, &m, r).unwrap();
            assert_relative_eq!(p1, p2, max_relative = 1e-9);
            assert!(rec.p.iter().all(|&x| x >= 1e-2 * (1.0 - 1e-12)));
        }
    }
}

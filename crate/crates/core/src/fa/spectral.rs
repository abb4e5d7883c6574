use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::problem::{EigenRoute, SecondMoment};

/// Eigenvalues below this are treated as exactly zero.
pub const EIGEN_CLAMP: f64 = 1e-12;

/// Leading eigenpairs of `Gamma^1/2 R Gamma^1/2` in descending order.
///
/// The dense route returns all `d` pairs; the Gram route returns one pair per
/// factor row. Pairs that are not returned have eigenvalue zero.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Unit eigenvectors, column `j` pairs with `values[j]`.
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    /// Eigenvalue `i` (zero past the computed range).
    pub fn value(&self, i: usize) -> f64 {
        self.values.get(i).copied().unwrap_or(0.0)
    }
}

pub fn scaled_spectrum(moment: &SecondMoment, gamma: &DVector<f64>, route: EigenRoute) -> Spectrum {
    let use_gram = match route {
        EigenRoute::Dense => false,
        EigenRoute::Gram => moment.factor().is_some(),
        EigenRoute::Auto => moment.factor().is_some_and(|f| f.nrows() < moment.dim()),
    };
    let sqrt_gamma = gamma.map(f64::sqrt);
    if use_gram {
        gram_spectrum(moment.factor().unwrap(), &sqrt_gamma)
    } else {
        dense_spectrum(moment.matrix(), &sqrt_gamma)
    }
}

fn dense_spectrum(r: &DMatrix<f64>, sqrt_gamma: &DVector<f64>) -> Spectrum {
    let d = r.nrows();
    let scaled = DMatrix::from_fn(d, d, |i, j| sqrt_gamma[i] * r[(i, j)] * sqrt_gamma[j]);
    let eig = SymmetricEigen::new(scaled);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| clamp(eig.eigenvalues[i])).collect();
    let vectors = DMatrix::from_fn(d, d, |row, col| eig.eigenvectors[(row, order[col])]);
    Spectrum { values, vectors }
}

/// With `M = F Gamma^1/2` (`m x d`), the non-zero eigenpairs of `M^T M` follow
/// from those of the `m x m` matrix `M M^T`: `v = M^T w / sqrt(lambda)`.
fn gram_spectrum(f: &DMatrix<f64>, sqrt_gamma: &DVector<f64>) -> Spectrum {
    let (m, d) = f.shape();
    let scaled = DMatrix::from_fn(m, d, |i, j| f[(i, j)] * sqrt_gamma[j]);
    let gram = &scaled * scaled.transpose();
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut values = Vec::with_capacity(m);
    let mut vectors = DMatrix::zeros(d, m);
    for (col, &i) in order.iter().enumerate() {
        let lambda = clamp(eig.eigenvalues[i]);
        values.push(lambda);
        if lambda > 0.0 {
            let v = scaled.tr_mul(&eig.eigenvectors.column(i)) / lambda.sqrt();
            vectors.set_column(col, &v);
        }
    }
    Spectrum { values, vectors }
}

fn clamp(x: f64) -> f64 {
    if x < EIGEN_CLAMP {
        0.0
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn hand_computed_two_by_two() {
        let r = SecondMoment::dense(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        let s = scaled_spectrum(&r, &DVector::from_element(2, 1.0), EigenRoute::Dense);
        assert_relative_eq!(s.values[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(s.values[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.vectors[(0, 0)].abs(), 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn gram_route_matches_dense() {
        let f = DMatrix::from_fn(3, 9, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.1 * j as f64);
        let r = SecondMoment::from_factor(f);
        let gamma = DVector::from_fn(9, |i, _| 0.5 + 0.1 * i as f64);
        let a = scaled_spectrum(&r, &gamma, EigenRoute::Dense);
        let b = scaled_spectrum(&r, &gamma, EigenRoute::Gram);
        for j in 0..3 {
            assert_relative_eq!(a.values[j], b.values[j], max_relative = 1e-10);
            let dot = a.vectors.column(j).dot(&b.vectors.column(j));
            assert_relative_eq!(dot.abs(), 1.0, epsilon = 1e-9);
        }
        assert!(a.values[3..].iter().all(|&v| v == 0.0));
        assert_eq!(b.value(5), 0.0);
    }
}

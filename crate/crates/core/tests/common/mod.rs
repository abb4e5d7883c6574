#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Reduced objective for a 2x2 moment with r = 1, written out by hand: the top
/// eigenvalue of [[a, b], [b, c]] is (a + c)/2 + sqrt(((a - c)/2)^2 + b^2).
pub fn objective_2x2(r: &DMatrix<f64>, g1: f64, g2: f64) -> f64 {
    let a = g1 * r[(0, 0)];
    let c = g2 * r[(1, 1)];
    let b2 = g1 * g2 * r[(0, 1)] * r[(0, 1)];
    let top = 0.5 * (a + c) + (0.25 * (a - c) * (a - c) + b2).sqrt();
    let m = top.max(1.0);
    -g1.ln() - g2.ln() + a + c + m.ln() - m + 1.0
}

/// Minimum of `objective_2x2` over the grid {0.001, 0.002, ..., 100}^2.
///
/// A full scan of 10^10 points is too slow, so the grid is searched coarse to
/// fine: every point at spacing 0.05, then the 1e-3 grid points within 0.1 of
/// the best coarse candidates.
pub fn grid_minimum(r: &DMatrix<f64>) -> (f64, f64, f64) {
    let f = |i: i64, j: i64| objective_2x2(r, i as f64 * 1e-3, j as f64 * 1e-3);
    let mut coarse: Vec<(f64, i64, i64)> = Vec::new();
    for i in (50..=100_000).step_by(50).chain([1, 10]) {
        for j in (50..=100_000).step_by(50).chain([1, 10]) {
            coarse.push((f(i, j), i, j));
        }
    }
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = (f64::INFINITY, 0, 0);
    for &(_, ci, cj) in coarse.iter().take(8) {
        for i in (ci - 100).max(1)..=(ci + 100).min(100_000) {
            for j in (cj - 100).max(1)..=(cj + 100).min(100_000) {
                let v = f(i, j);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
    }
    (best.0, best.1 as f64 * 1e-3, best.2 as f64 * 1e-3)
}

/// Random 2x2 positive-definite moment with diagonal spread over [0.02, 5].
pub fn random_pd_2x2<R: Rng + ?Sized>(rng: &mut R) -> DMatrix<f64> {
    let r11 = 10f64.powf(rng.random_range(-1.7..0.7));
    let r22 = 10f64.powf(rng.random_range(-1.7..0.7));
    let corr = rng.random_range(-0.95..0.95);
    let off = corr * (r11 * r22).sqrt();
    DMatrix::from_row_slice(2, 2, &[r11, off, off, r22])
}

/// `W W^T / k + diag(psi)` with `k` random factors and unique variances over two decades.
pub fn random_pd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<f64> {
    let k = rng.random_range(1..=4);
    let w = DMatrix::from_fn(d, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut r = &w * w.transpose() / k as f64;
    for i in 0..d {
        r[(i, i)] += 10f64.powf(rng.random_range(-2.5..0.0));
    }
    (&r + r.transpose()) * 0.5
}

pub fn random_gamma<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DVector<f64> {
    DVector::from_fn(d, |_, _| 10f64.powf(rng.random_range(-1.0..1.5)))
}

fn scaled_eigenvalues(r: &DMatrix<f64>, gamma: &DVector<f64>) -> Vec<f64> {
    let d = gamma.len();
    let s = DMatrix::from_fn(d, d, |i, j| (gamma[i] * gamma[j]).sqrt() * r[(i, j)]);
    let mut l: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    l
}

/// Spectral part `sum_{j<r} (m_j - 1 - ln m_j)`, `m_j = max(1, l_j)`, from a fresh eigensolve.
pub fn f2_oracle(r: &DMatrix<f64>, gamma: &DVector<f64>, rank: usize) -> f64 {
    scaled_eigenvalues(r, gamma)
        .iter()
        .take(rank)
        .map(|&l| {
            let m = l.max(1.0);
            m - 1.0 - m.ln()
        })
        .sum()
}

pub fn p2_oracle(r: &DMatrix<f64>, gamma: &DVector<f64>, rank: usize) -> f64 {
    let convex: f64 = (0..gamma.len()).map(|i| -gamma[i].ln() + r[(i, i)] * gamma[i]).sum();
    convex - f2_oracle(r, gamma, rank)
}

/// `log det Sigma + tr(Sigma^-1 R)` through LU.
pub fn p1_oracle(sigma: &DMatrix<f64>, r: &DMatrix<f64>) -> f64 {
    let lu = sigma.clone().lu();
    let det = lu.determinant();
    assert!(det > 0.0);
    det.ln() + (lu.try_inverse().unwrap() * r).trace()
}

/// True when the leading `rank + 1` eigenvalues are simple and at least `gap` from 1.
pub fn smooth_at(r: &DMatrix<f64>, gamma: &DVector<f64>, rank: usize, gap: f64) -> bool {
    let l = scaled_eigenvalues(r, gamma);
    (0..=rank).all(|i| (l[i] - 1.0).abs() > gap) && (0..rank).all(|i| l[i] - l[i + 1] > gap)
}

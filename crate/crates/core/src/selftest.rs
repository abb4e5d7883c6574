//! Numerical invariant suite behind `jsts selftest`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::fa::{
    dc_solve, f2_value, p1_objective, p2_objective, reconstruct_covariance, scaled_spectrum, sherman_woodbury_inverse,
    subgradient_f2, EigenRoute, FaProblem, SecondMoment,
};
use crate::rng::{substream, Stream};
use crate::Result;

/// Random positive-definite `W W^T + diag(psi)` with a few strong common factors
/// and unique variances spread over two decades, so that some coordinates of a
/// solution with floor `1e-2` saturate and others do not.
pub fn random_pd_instance<R: Rng + ?Sized>(rng: &mut R, d: usize) -> SecondMoment {
    let factors = rng.random_range(1..=3.min(d));
    let scale = 10f64.powf(rng.random_range(-0.5..0.5));
    let w = DMatrix::from_fn(d, factors, |_, _| rng.sample::<f64, _>(StandardNormal) * scale);
    let mut r = &w * w.transpose();
    for i in 0..d {
        r[(i, i)] += 10f64.powf(rng.random_range(-2.3..0.0));
    }
    // exact symmetry regardless of rounding in the product
    let r = (&r + r.transpose()) * 0.5;
    SecondMoment::dense(r).expect("symmetric by construction")
}

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    /// Largest violation or error observed.
    pub worst: f64,
}

pub fn descent_check<R: Rng + ?Sized>(rng: &mut R, instances: usize, max_dim: usize) -> Result<Check> {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..instances {
        let d = rng.random_range(2..=max_dim);
        let r = rng.random_range(1..d);
        let sol = dc_solve(&FaProblem::new(random_pd_instance(rng, d), r, 1e-2)?, None)?;
        for w in sol.objective_trace.windows(2) {
            worst = worst.max(w[1] - w[0]);
        }
    }
    Ok(Check { name: "monotone descent", passed: worst <= 1e-9, instances, worst })
}

pub fn bound_check<R: Rng + ?Sized>(rng: &mut R, instances: usize, max_dim: usize) -> Result<Check> {
    let mut worst = 0.0f64;
    let eps = 1e-2;
    for _ in 0..instances {
        let d = rng.random_range(2..=max_dim);
        let r = rng.random_range(1..d);
        let m = random_pd_instance(rng, d);
        let sol = dc_solve(&FaProblem::new(m.clone(), r, eps)?, None)?;
        for (i, g) in sol.gamma.iter().enumerate() {
            let p = 1.0 / g;
            let upper = m.matrix()[(i, i)].max(eps);
            worst = worst.max(eps - p).max(p - upper);
        }
    }
    Ok(Check { name: "solution bounds", passed: worst <= 1e-8, instances, worst })
}

pub fn identity_check<R: Rng + ?Sized>(rng: &mut R, instances: usize, max_dim: usize) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let d = rng.random_range(2..=max_dim);
        let r = rng.random_range(1..d);
        let m = random_pd_instance(rng, d);
        let gamma = DVector::from_fn(d, |_, _| 10f64.powf(rng.random_range(-1.0..1.5)));
        let rec = reconstruct_covariance(&gamma, &m, r)?;
        let gap = (p1_objective(&rec.sigma, m.matrix())? - p2_objective(&gamma, &m, r)?).abs();
        worst = worst.max(gap);
    }
    Ok(Check { name: "low-rank elimination identity", passed: worst <= 1e-8, instances, worst })
}

pub fn woodbury_check<R: Rng + ?Sized>(rng: &mut R, instances: usize, max_dim: usize) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let d = rng.random_range(2..=max_dim);
        let r = rng.random_range(1..d);
        let v = DMatrix::from_fn(d, r, |_, _| rng.sample::<f64, _>(StandardNormal));
        let p = DVector::from_fn(d, |_, _| rng.random_range(0.1..2.0));
        let sigma = &v * v.transpose() + DMatrix::from_diagonal(&p);
        let direct = sigma.try_inverse().expect("positive definite");
        worst = worst.max((sherman_woodbury_inverse(&v, &p)? - direct).amax());
    }
    Ok(Check { name: "Sherman-Woodbury inverse", passed: worst <= 1e-8, instances, worst })
}

/// Relative error between `subgradient_f2` and central differences of `f2`.
pub fn finite_difference_error(gamma: &DVector<f64>, m: &SecondMoment, r: usize, step: f64) -> Result<f64> {
    let f2 = |g: &DVector<f64>| f2_value(&scaled_spectrum(m, g, EigenRoute::Dense), r);
    let analytic = subgradient_f2(gamma, m, r)?;
    let numeric = DVector::from_fn(gamma.len(), |i, _| {
        let mut up = gamma.clone();
        let mut down = gamma.clone();
        up[i] += step;
        down[i] -= step;
        (f2(&up) - f2(&down)) / (2.0 * step)
    });
    Ok((&analytic - &numeric).norm() / analytic.norm().max(1e-12))
}

/// True when the leading `r + 1` eigenvalues are simple and away from 1, so `f2` is smooth.
pub fn smooth_point(gamma: &DVector<f64>, m: &SecondMoment, r: usize) -> bool {
    let s = scaled_spectrum(m, gamma, EigenRoute::Dense);
    let top = s.value(0).max(1.0);
    (0..=r).all(|i| (s.value(i) - 1.0).abs() > 1e-2) && (0..r).all(|i| s.value(i) - s.value(i + 1) > 1e-3 * top)
}

pub fn subgradient_check<R: Rng + ?Sized>(rng: &mut R, instances: usize, max_dim: usize) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < instances {
        let d = rng.random_range(2..=max_dim);
        let r = rng.random_range(1..d);
        let m = random_pd_instance(rng, d);
        let gamma = DVector::from_fn(d, |_, _| 10f64.powf(rng.random_range(0.0..1.0)));
        if !smooth_point(&gamma, &m, r) {
            continue;
        }
        worst = worst.max(finite_difference_error(&gamma, &m, r, 1e-6)?);
        done += 1;
    }
    Ok(Check { name: "subgradient vs finite differences", passed: worst < 1e-4, instances, worst })
}

/// Runs every check with instances drawn from `seed`.
pub fn run_selftest(seed: u64) -> Result<Vec<Check>> {
    let mut rng = substream(seed, 0, Stream::Instances);
    Ok(vec![
        descent_check(&mut rng, 100, 30)?,
        bound_check(&mut rng, 100, 30)?,
        identity_check(&mut rng, 50, 30)?,
        woodbury_check(&mut rng, 50, 30)?,
        subgradient_check(&mut rng, 20, 10)?,
    ])
}

use nalgebra::{Complex, DMatrix};

use super::config::DetectorConfig;
use crate::fa::{dc_solve, moment_matrix, FaProblem, FaSolution};
use crate::sim::FrameObservation;
use crate::{Error, Result};

/// `Ts x 2N` real matrix whose row `t` is `[Re y_t, Im y_t]`.
pub fn real_expand_matrix(y: &DMatrix<Complex<f64>>) -> Result<DMatrix<f64>> {
    if y.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Domain("frame has non-finite samples".into()));
    }
    let n = y.nrows();
    Ok(DMatrix::from_fn(y.ncols(), 2 * n, |t, i| {
        if i < n {
            y[(i, t)].re
        } else {
            y[(i - n, t)].im
        }
    }))
}

pub fn real_expand(frame: &FrameObservation) -> Result<DMatrix<f64>> {
    real_expand_matrix(&frame.y)
}

/// Solves the factor-analysis problem for one frame. The feature is `solution.tau`;
/// non-convergence is reported through `solution.converged`, not as an error.
pub fn extract_feature(frame: &FrameObservation, cfg: &DetectorConfig) -> Result<FaSolution> {
    cfg.validate()?;
    let moment = moment_matrix(&real_expand(frame)?, cfg.mode)?;
    let eps = cfg.floor.resolve(&moment);
    let problem = FaProblem::new(moment, cfg.rank, eps)?.with_stop(cfg.eps_stop, cfg.max_iter)?;
    dc_solve(&problem, None)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::sim::ActivityMatrix;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn frame(y: DMatrix<Complex<f64>>) -> FrameObservation {
        let ts = y.ncols();
        FrameObservation {
            y,
            truth_attacked: false,
            activity: ActivityMatrix::zeros(1, ts),
            frame_index: 0,
        }
    }

    #[test]
    fn real_and_imaginary_slots() {
        let y = DMatrix::from_row_slice(3, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 1.0), c(3.0, 0.0), c(0.0, 1.0)]);
        let o = real_expand_matrix(&y).unwrap();
        assert_eq!(o.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 2.0, 3.0, 0.0, 0.0, 0.0]);
        assert_eq!(o.row(1).iter().copied().collect::<Vec<_>>(), vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn real_expansion_commutes_with_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut z = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (n, k) = (4, 6);
        let s = DMatrix::from_fn(n, k, |_, _| z());
        let d = DMatrix::from_fn(k, 1, |_, _| z());
        // [Re S, -Im S; Im S, Re S]
        let sr = DMatrix::from_fn(2 * n, 2 * k, |i, j| {
            let v = s[(i % n, j % k)];
            match (i < n, j < k) {
                (true, true) | (false, false) => v.re,
                (true, false) => -v.im,
                (false, true) => v.im,
            }
        });
        let lhs = &sr * real_expand_matrix(&d).unwrap().transpose();
        let rhs = real_expand_matrix(&(&s * &d)).unwrap().transpose();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn expansion_preserves_slot_norms() {
        let y = DMatrix::from_fn(5, 3, |i, t| c(i as f64 - t as f64, 0.5 * (i * t) as f64));
        let o = real_expand_matrix(&y).unwrap();
        for t in 0..3 {
            assert_relative_eq!(o.row(t).norm(), y.column(t).norm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let y = DMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(real_expand_matrix(&y).is_err());
    }

    #[test]
    fn zero_frame_has_empty_support() {
        let f = frame(DMatrix::from_element(6, 3, c(0.0, 0.0)));
        let sol = extract_feature(&f, &DetectorConfig::default()).unwrap();
        assert_eq!(sol.tau, 0);
    }

    #[test]
    fn identical_frames_identical_features() {
        let y = DMatrix::from_fn(8, 4, |i, t| c(((i * 3 + t) % 5) as f64 - 2.0, ((i + 2 * t) % 3) as f64));
        let a = extract_feature(&frame(y.clone()), &DetectorConfig::default()).unwrap();
        let b = extract_feature(&frame(y), &DetectorConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}

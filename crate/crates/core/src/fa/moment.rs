use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::problem::SecondMoment;
use crate::{Error, Result};

/// How a real-expanded frame (`Ts x d`, one observation per row) is turned into a second moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMode {
    /// `R = (1/Ts) O^T O`, a `d x d` sample second moment over slots.
    #[default]
    SlotCovariance,
    /// The frame flattened into one vector `o` of length `d * Ts` (entry `i * Ts + t`), `R = o o^T`.
    Vectorized,
}

impl std::fmt::Display for MomentMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MomentMode::SlotCovariance => "slot-covariance",
            MomentMode::Vectorized => "vectorized",
        })
    }
}

impl std::str::FromStr for MomentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slot-covariance" => Ok(MomentMode::SlotCovariance),
            "vectorized" => Ok(MomentMode::Vectorized),
            other => Err(Error::range("mode", format!("unknown moment mode {other:?}"))),
        }
    }
}

pub fn moment_matrix(frame: &DMatrix<f64>, mode: MomentMode) -> Result<SecondMoment> {
    let (ts, d) = frame.shape();
    if ts == 0 || d == 0 {
        return Err(Error::Dimension {
            context: "real-expanded frame",
            expected: "at least one slot and one coordinate".into(),
            got: format!("{ts} x {d}"),
        });
    }
    if frame.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("frame has non-finite entries".into()));
    }
    Ok(match mode {
        MomentMode::SlotCovariance => SecondMoment::from_factor(frame / (ts as f64).sqrt()),
        MomentMode::Vectorized => {
            // column-major storage of the Ts x d frame is already index i * Ts + t
            SecondMoment::from_factor(DMatrix::from_row_slice(1, d * ts, frame.as_slice()))
        }
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn slot_covariance_averages_outer_products() {
        let o = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, -1.0, 0.0, 3.0]);
        let r = moment_matrix(&o, MomentMode::SlotCovariance).unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, -1.5, 1.0, 2.0, 0.0, -1.5, 0.0, 4.5]);
        assert_relative_eq!(r.matrix(), &expected, epsilon = 1e-14);
    }

    #[test]
    fn vectorized_ordering() {
        let o = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = moment_matrix(&o, MomentMode::Vectorized).unwrap();
        assert_eq!(r.dim(), 6);
        let v = [1.0, 4.0, 2.0, 5.0, 3.0, 6.0];
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(r.matrix()[(a, b)], v[a] * v[b]);
            }
        }
    }

    #[test]
    fn mode_parses() {
        for m in [MomentMode::SlotCovariance, MomentMode::Vectorized] {
            assert_eq!(m.to_string().parse::<MomentMode>().unwrap(), m);
        }
        assert!("covariance".parse::<MomentMode>().is_err());
    }

    #[test]
    fn rejects_empty_and_nan() {
        assert!(moment_matrix(&DMatrix::zeros(0, 3), MomentMode::SlotCovariance).is_err());
        let mut o = DMatrix::zeros(2, 2);
        o[(0, 1)] = f64::NAN;
        assert!(moment_matrix(&o, MomentMode::SlotCovariance).is_err());
    }
}

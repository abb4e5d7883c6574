use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(p_dbm: f64) -> f64 {
    10f64.powf((p_dbm - 30.0) / 10.0)
}

/// Large-scale gain `L_o * D^-alpha` with the shadowing constant given in dB.
pub fn path_loss(distance_m: f64, alpha: f64, l_o_db: f64) -> Result<f64> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::Domain(format!(
            "path loss needs a positive distance, got {distance_m}"
        )));
    }
    Ok(10f64.powf(l_o_db / 10.0) * distance_m.powf(-alpha))
}

/// One draw of `CN(0, variance)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex<f64> {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(s * re, s * im)
}

/// Uniform unit-energy QPSK symbol from `(+-1 +- i) / sqrt(2)`.
pub fn qpsk_symbol<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    let bits: u8 = rng.random_range(0..4);
    let re = if bits & 1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    let im = if bits & 2 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    Complex::new(re, im)
}

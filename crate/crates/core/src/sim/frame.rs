use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::activity::ActivityMatrix;
use super::channel::{complex_gaussian, dbm_to_watts, path_loss, qpsk_symbol};
use super::config::SystemConfig;
use super::spreading::SpreadingMatrix;
use crate::rng::{SimRng, TrialRngs};
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Received samples of one frame (`N x Ts`, column `t` is slot `t`) with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameObservation {
    pub y: DMatrix<C64>,
    pub truth_attacked: bool,
    pub activity: ActivityMatrix,
    pub frame_index: usize,
}

impl FrameObservation {
    pub fn chips(&self) -> usize {
        self.y.nrows()
    }

    pub fn slots(&self) -> usize {
        self.y.ncols()
    }

    /// Total received energy `sum_t ||o_t||^2`.
    pub fn energy(&self) -> f64 {
        self.y.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn slot_energy(&self, t: usize) -> f64 {
        self.y.column(t).iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Jammer parameters held fixed over a trial.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackerProfile {
    /// `J x K` allocation coefficients in `[0, 1]`.
    pub theta: DMatrix<f64>,
    /// Effective amplitude `sqrt(P_A,j * beta_A,j)` per attacker.
    pub amplitude: Vec<f64>,
    /// Forged sequences `s_A,j = sum_k theta_jk s_k`, one column per attacker.
    pub signatures: DMatrix<f64>,
}

impl AttackerProfile {
    pub fn new(spreading: &SpreadingMatrix, theta: DMatrix<f64>, amplitude: Vec<f64>) -> Result<Self> {
        if theta.ncols() != spreading.devices() || theta.nrows() != amplitude.len() {
            return Err(Error::Dimension {
                context: "attacker profile",
                expected: format!("{} x {}", amplitude.len(), spreading.devices()),
                got: format!("{} x {}", theta.nrows(), theta.ncols()),
            });
        }
        let signatures = &spreading.s * theta.transpose();
        Ok(Self {
            theta,
            amplitude,
            signatures,
        })
    }

    pub fn attackers(&self) -> usize {
        self.amplitude.len()
    }
}

/// Per-trial geometry: device path losses and the jammer profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    /// `sqrt(P_k * beta_k)` per device.
    pub device_amplitude: Vec<f64>,
    pub attackers: Option<AttackerProfile>,
}

impl Topology {
    /// Draws device and attacker distances uniformly on their intervals and
    /// allocation coefficients from U(0, 1).
    pub fn draw<R: Rng + ?Sized>(cfg: &SystemConfig, spreading: &SpreadingMatrix, rng: &mut R) -> Result<Self> {
        let p = dbm_to_watts(cfg.p_dbm);
        let device_amplitude = (0..cfg.k)
            .map(|_| {
                let d = uniform(rng, cfg.d_range);
                path_loss(d, cfg.alpha, cfg.l_o_db).map(|beta| (p * beta).sqrt())
            })
            .collect::<Result<Vec<_>>>()?;
        let attackers = if cfg.j > 0 {
            let pa = dbm_to_watts(cfg.p_uaj_dbm);
            let amplitude = (0..cfg.j)
                .map(|_| {
                    let d = uniform(rng, cfg.d_attacker_range);
                    path_loss(d, cfg.alpha, cfg.l_o_db).map(|beta| (pa * beta).sqrt())
                })
                .collect::<Result<Vec<_>>>()?;
            let theta = DMatrix::from_fn(cfg.j, cfg.k, |_, _| rng.random::<f64>());
            Some(AttackerProfile::new(spreading, theta, amplitude)?)
        } else {
            None
        };
        Ok(Self {
            device_amplitude,
            attackers,
        })
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// One slot of the normal model: `sum_k amp_k s_k h_k d_k + w` over the active devices.
///
/// `fading` and `symbols` are aligned with `active`.
pub fn normal_slot(
    spreading: &SpreadingMatrix,
    amplitude: &[f64],
    active: &[usize],
    fading: &[C64],
    symbols: &[C64],
    noise: &DVector<C64>,
) -> DVector<C64> {
    let mut y = noise.clone();
    for ((&k, h), d) in active.iter().zip(fading).zip(symbols) {
        let coeff = *h * *d * amplitude[k];
        for (yi, &s) in y.iter_mut().zip(spreading.s.column(k).iter()) {
            *yi += coeff * s;
        }
    }
    y
}

/// Jammer contribution in one slot: `sum_j Pbar_j s_A,j g_j u_j`.
pub fn attack_slot(profile: &AttackerProfile, gains: &[C64], symbols: &[C64]) -> DVector<C64> {
    let n = profile.signatures.nrows();
    let mut y = DVector::from_element(n, C64::new(0.0, 0.0));
    for j in 0..profile.attackers() {
        let coeff = gains[j] * symbols[j] * profile.amplitude[j];
        for (yi, &s) in y.iter_mut().zip(profile.signatures.column(j).iter()) {
            *yi += coeff * s;
        }
    }
    y
}

fn check_dims(cfg: &SystemConfig, spreading: &SpreadingMatrix, activity: &ActivityMatrix, topo: &Topology) -> Result<()> {
    if spreading.chips() != cfg.n || spreading.devices() != cfg.k {
        return Err(Error::Dimension {
            context: "spreading matrix",
            expected: format!("{} x {}", cfg.n, cfg.k),
            got: format!("{} x {}", spreading.chips(), spreading.devices()),
        });
    }
    if activity.devices() != cfg.k || activity.slots() != cfg.ts {
        return Err(Error::Dimension {
            context: "activity matrix",
            expected: format!("{} x {}", cfg.k, cfg.ts),
            got: format!("{} x {}", activity.devices(), activity.slots()),
        });
    }
    if topo.device_amplitude.len() != cfg.k {
        return Err(Error::Dimension {
            context: "topology",
            expected: cfg.k.to_string(),
            got: topo.device_amplitude.len().to_string(),
        });
    }
    Ok(())
}

/// Synthesizes an attack-free frame. Fading and symbols come from `rngs.channels`,
/// noise from `rngs.noise`.
pub fn synthesize_normal_frame(
    cfg: &SystemConfig,
    spreading: &SpreadingMatrix,
    activity: &ActivityMatrix,
    topo: &Topology,
    rngs: &mut TrialRngs,
    frame_index: usize,
) -> Result<FrameObservation> {
    check_dims(cfg, spreading, activity, topo)?;
    let sigma2 = cfg.noise_variance();
    let mut y = DMatrix::from_element(cfg.n, cfg.ts, C64::new(0.0, 0.0));
    for t in 0..cfg.ts {
        let active = activity.active_in_slot(t);
        let fading: Vec<C64> = active.iter().map(|_| complex_gaussian(&mut rngs.channels, 1.0)).collect();
        let symbols: Vec<C64> = active.iter().map(|_| qpsk_symbol(&mut rngs.channels)).collect();
        let noise = DVector::from_fn(cfg.n, |_, _| complex_gaussian(&mut rngs.noise, sigma2));
        y.set_column(t, &normal_slot(spreading, &topo.device_amplitude, &active, &fading, &symbols, &noise));
    }
    Ok(FrameObservation {
        y,
        truth_attacked: false,
        activity: activity.clone(),
        frame_index,
    })
}

/// Jammer signal for a whole frame (`N x Ts`); only the first `Nc` slots are non-zero.
pub fn attack_overlay(cfg: &SystemConfig, profile: &AttackerProfile, rng: &mut SimRng) -> DMatrix<C64> {
    let n = profile.signatures.nrows();
    let mut y = DMatrix::from_element(n, cfg.ts, C64::new(0.0, 0.0));
    for t in 0..cfg.nc.min(cfg.ts) {
        let gains: Vec<C64> = (0..profile.attackers()).map(|_| complex_gaussian(rng, 1.0)).collect();
        let symbols: Vec<C64> = (0..profile.attackers())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        y.set_column(t, &attack_slot(profile, &gains, &symbols));
    }
    y
}

/// Synthesizes a jammed frame: the normal frame drawn from the same streams plus
/// the jammer overlay from `rngs.attacker`.
pub fn synthesize_attacked_frame(
    cfg: &SystemConfig,
    spreading: &SpreadingMatrix,
    activity: &ActivityMatrix,
    topo: &Topology,
    rngs: &mut TrialRngs,
    frame_index: usize,
) -> Result<FrameObservation> {
    let profile = match (&topo.attackers, cfg.j) {
        (Some(p), j) if j > 0 => p,
        _ => {
            return Err(Error::Domain(
                "attacked synthesis needs J >= 1; use normal synthesis instead".into(),
            ))
        }
    };
    let mut frame = synthesize_normal_frame(cfg, spreading, activity, topo, rngs, frame_index)?;
    frame.y += attack_overlay(cfg, profile, &mut rngs.attacker);
    frame.truth_attacked = true;
    Ok(frame)
}

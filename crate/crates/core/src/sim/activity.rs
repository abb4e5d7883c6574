use rand::seq::index;
use rand::Rng;

use super::config::{ActivityModel, SystemConfig};

/// Binary `K x Ts` activity pattern; entry `(k, t)` is set when device `k` transmits in slot `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityMatrix {
    devices: usize,
    slots: usize,
    bits: Vec<bool>,
}

impl ActivityMatrix {
    pub fn zeros(devices: usize, slots: usize) -> Self {
        Self {
            devices,
            slots,
            bits: vec![false; devices * slots],
        }
    }

    pub fn devices(&self) -> usize {
        self.devices
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn get(&self, k: usize, t: usize) -> bool {
        self.bits[k * self.slots + t]
    }

    pub fn set(&mut self, k: usize, t: usize, active: bool) {
        self.bits[k * self.slots + t] = active;
    }

    /// Active set of slot `t`, in increasing device order.
    pub fn active_in_slot(&self, t: usize) -> Vec<usize> {
        (0..self.devices).filter(|&k| self.get(k, t)).collect()
    }

    pub fn column_count(&self, t: usize) -> usize {
        (0..self.devices).filter(|&k| self.get(k, t)).count()
    }

    pub fn total_active(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `(|Gamma(t-1) & Gamma(t)|, |Gamma(t)|)` for `t >= 1`.
    pub fn overlap_counts(&self, t: usize) -> (usize, usize) {
        assert!(t >= 1 && t < self.slots);
        let mut both = 0;
        let mut now = 0;
        for k in 0..self.devices {
            if self.get(k, t) {
                now += 1;
                if self.get(k, t - 1) {
                    both += 1;
                }
            }
        }
        (both, now)
    }

    /// Pooled adjacent-slot overlap ratio over the frame; `None` when no slot after the first is active.
    pub fn measured_overlap(&self) -> Option<f64> {
        let (both, now) = (1..self.slots)
            .map(|t| self.overlap_counts(t))
            .fold((0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
        (now > 0).then(|| both as f64 / now as f64)
    }
}

/// Draws one frame of device activity.
///
/// Markov mode starts from i.i.d. Bernoulli(mu) and uses `P(1->0) = rho(1-mu)`,
/// `P(0->1) = rho*mu`, which keeps `P(active) = mu` in every slot.
pub fn sample_activity<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ActivityMatrix {
    match cfg.activity_model {
        ActivityModel::Markov => markov(cfg, rng),
        ActivityModel::FixedOverlap => fixed_overlap(cfg, rng),
    }
}

fn markov<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ActivityMatrix {
    let mut a = ActivityMatrix::zeros(cfg.k, cfg.ts);
    let leave = cfg.rho * (1.0 - cfg.mu);
    let join = cfg.rho * cfg.mu;
    for k in 0..cfg.k {
        let mut on = rng.random::<f64>() < cfg.mu;
        a.set(k, 0, on);
        for t in 1..cfg.ts {
            let u = rng.random::<f64>();
            on = if on { u >= leave } else { u < join };
            a.set(k, t, on);
        }
    }
    a
}

fn fixed_overlap<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ActivityMatrix {
    let mut a = ActivityMatrix::zeros(cfg.k, cfg.ts);
    let m = ((cfg.mu * cfg.k as f64).round() as usize).min(cfg.k);
    let keep = ((cfg.eta * m as f64).round() as usize).min(m);
    let mut current: Vec<usize> = index::sample(rng, cfg.k, m).into_vec();
    for &k in &current {
        a.set(k, 0, true);
    }
    for t in 1..cfg.ts {
        let carried: Vec<usize> = index::sample(rng, current.len(), keep)
            .into_iter()
            .map(|i| current[i])
            .collect();
        let inactive: Vec<usize> = (0..cfg.k).filter(|&k| !a.get(k, t - 1)).collect();
        let fresh = (m - keep).min(inactive.len());
        let mut next = carried;
        next.extend(index::sample(rng, inactive.len(), fresh).into_iter().map(|i| inactive[i]));
        for &k in &next {
            a.set(k, t, true);
        }
        current = next;
    }
    a
}

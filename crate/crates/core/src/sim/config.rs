use serde::{Deserialize, Serialize};

use super::channel::dbm_to_watts;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActivityModel {
    /// Independent two-state Markov chain per device.
    Markov,
    /// Exactly `round(mu * K)` active devices per slot with a fixed carried-over fraction `eta`.
    FixedOverlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpreadingKind {
    Gaussian,
    Hadamard,
}

/// Scenario parameters. Defaults reproduce the reference cell: 2000 devices,
/// length-50 spreading, 7 slots per frame, 8 jammers at 20 dBm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Potential devices `K`.
    pub k: usize,
    /// Spreading length `N` (chips).
    pub n: usize,
    /// Slots per frame `Ts`.
    pub ts: usize,
    /// Frames per stream `L`.
    pub l: usize,
    /// Active-device ratio.
    pub mu: f64,
    /// Transition scale of the Markov activity chain.
    pub rho: f64,
    /// Target adjacent-slot overlap (fixed-overlap mode only).
    pub eta: f64,
    pub activity_model: ActivityModel,
    pub spreading: SpreadingKind,
    pub p_dbm: f64,
    pub p_uaj_dbm: f64,
    /// Number of attackers `J`.
    pub j: usize,
    /// Device distance interval in metres.
    pub d_range: (f64, f64),
    /// Attacker distance interval in metres; the upper end is `D_max`.
    pub d_attacker_range: (f64, f64),
    pub alpha: f64,
    pub l_o_db: f64,
    pub noise_floor_dbm: f64,
    /// Attacked slots per jammed frame (the first `nc` slots).
    pub nc: usize,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            k: 2000,
            n: 50,
            ts: 7,
            l: 10,
            mu: 0.05,
            rho: 0.4,
            eta: 0.3,
            activity_model: ActivityModel::Markov,
            spreading: SpreadingKind::Gaussian,
            p_dbm: 20.0,
            p_uaj_dbm: 20.0,
            j: 8,
            d_range: (40.0, 800.0),
            d_attacker_range: (60.0, 800.0),
            alpha: 4.0,
            l_o_db: -45.0,
            noise_floor_dbm: -101.0,
            nc: 7,
            seed: 1,
        }
    }
}

impl SystemConfig {
    pub fn noise_variance(&self) -> f64 {
        dbm_to_watts(self.noise_floor_dbm)
    }

    pub fn d_max(&self) -> f64 {
        self.d_attacker_range.1
    }

    /// Sets `Ts` and keeps every slot attacked when `Nc` tracked `Ts` before.
    pub fn with_slots(mut self, ts: usize) -> Self {
        let full = self.nc == self.ts;
        self.ts = ts;
        if full || self.nc > ts {
            self.nc = ts;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::range("K", "requires K >= 1"));
        }
        if self.n == 0 {
            return Err(Error::range("N", "requires N >= 1"));
        }
        if self.ts == 0 {
            return Err(Error::range("Ts", "requires Ts >= 1"));
        }
        if self.l == 0 {
            return Err(Error::range("L", "requires L >= 1"));
        }
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::range("mu", format!("requires 0 < mu < 1, got {}", self.mu)));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::range("rho", format!("requires 0 <= rho <= 1, got {}", self.rho)));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::range("eta", format!("requires 0 <= eta <= 1, got {}", self.eta)));
        }
        if self.nc < 1 || self.nc > self.ts {
            return Err(Error::range(
                "Nc",
                format!("requires 1 <= Nc <= Ts, got Nc={} Ts={}", self.nc, self.ts),
            ));
        }
        for (key, (lo, hi)) in [("D_range", self.d_range), ("D_attacker_range", self.d_attacker_range)] {
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(Error::range(
                    key,
                    format!("requires 0 < lower <= upper, got {lo},{hi}"),
                ));
            }
        }
        for (key, v) in [
            ("P_dbm", self.p_dbm),
            ("P_uaj_dbm", self.p_uaj_dbm),
            ("alpha", self.alpha),
            ("L_o_db", self.l_o_db),
            ("noise_floor_dbm", self.noise_floor_dbm),
        ] {
            if !v.is_finite() {
                return Err(Error::range(key, "must be finite"));
            }
        }
        Ok(())
    }
}

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{mean, median};
use super::streams::{for_each_frame_pair, simulate_streams, streams_for};
use crate::detector::{change_metric, extract_feature, DetectorConfig};
use crate::sim::SystemConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeatureChangeRow {
    pub nc: usize,
    /// Mean change metric of the judged frames against the preceding attack-free frame.
    pub mean_c: f64,
    pub mean_tau_normal: f64,
    pub mean_tau_attacked: f64,
    pub frames: usize,
}

/// Mean change metric of jammed frames for each number of attacked slots.
/// `Nc = 0` reports attack-free frames.
pub fn feature_change_study(
    sys: &SystemConfig,
    det: &DetectorConfig,
    nc_values: &[usize],
    n_frames: usize,
) -> Result<Vec<FeatureChangeRow>> {
    let count = streams_for(n_frames, sys.l)? as u64;
    nc_values
        .iter()
        .map(|&nc| {
            if nc > sys.ts {
                return Err(Error::range("Nc", format!("requires Nc <= Ts = {}, got {nc}", sys.ts)));
            }
            if nc > 0 && sys.j == 0 {
                return Err(Error::range("J", "feature-change study needs attackers (J >= 1)"));
            }
            let point = SystemConfig { nc: nc.max(1), j: if nc == 0 { 0 } else { sys.j }, ..sys.clone() };
            let streams = simulate_streams(&point, det, 0..count, point.l)?;
            let (mut cs, mut tn, mut ta) = (Vec::new(), Vec::new(), Vec::new());
            for s in &streams {
                let judged = s.attacked.as_ref().unwrap_or(&s.normal);
                for l in 1..s.normal.len() {
                    cs.push(change_metric(judged[l].tau, s.normal[l - 1].tau));
                    tn.push(s.normal[l].tau as f64);
                    ta.push(judged[l].tau as f64);
                }
            }
            Ok(FeatureChangeRow {
                nc,
                mean_c: mean(&cs).unwrap_or(f64::NAN),
                mean_tau_normal: mean(&tn).unwrap_or(f64::NAN),
                mean_tau_attacked: mean(&ta).unwrap_or(f64::NAN),
                frames: cs.len(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub instance: usize,
    pub attacked: bool,
    pub iterations: usize,
    pub converged: bool,
    /// Objective at the start point followed by one value per iteration.
    pub objective: Vec<f64>,
    pub step_norms: Vec<f64>,
}

impl ConvergenceTrace {
    /// True when no iteration increased the objective by more than `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.objective.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

/// Solver traces on simulated frames: instance `i` is the first frame of trial `i`,
/// jammed for odd `i` when attackers are configured.
pub fn convergence_study(sys: &SystemConfig, det: &DetectorConfig, n_instances: usize) -> Result<Vec<ConvergenceTrace>> {
    if n_instances == 0 {
        return Err(Error::range("instances", "requires at least one instance"));
    }
    sys.validate()?;
    det.validate()?;
    (0..n_instances)
        .into_par_iter()
        .map(|i| {
            let mut out = None;
            for_each_frame_pair(sys, i as u64, 1, |normal, attacked| {
                let (frame, is_attacked) = match attacked {
                    Some(a) if i % 2 == 1 => (a, true),
                    _ => (normal, false),
                };
                let sol = extract_feature(&frame, det)?;
                out = Some(ConvergenceTrace {
                    instance: i,
                    attacked: is_attacked,
                    iterations: sol.iterations,
                    converged: sol.converged,
                    objective: sol.objective_trace,
                    step_norms: sol.step_norms,
                });
                Ok(())
            })?;
            Ok(out.expect("one frame per instance"))
        })
        .collect()
}

pub fn median_iterations(traces: &[ConvergenceTrace]) -> Option<f64> {
    median(&traces.iter().map(|t| t.iterations as f64).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_check() {
        let t = ConvergenceTrace {
            instance: 0,
            attacked: false,
            iterations: 2,
            converged: true,
            objective: vec![3.0, 2.0, 2.0 + 1e-12],
            step_norms: vec![1.0, 0.0],
        };
        assert!(t.is_monotone(1e-9));
        assert!(!t.is_monotone(0.0));
    }

    #[test]
    fn nc_above_slots_rejected() {
        let sys = SystemConfig { k: 20, n: 4, ts: 3, nc: 3, l: 3, ..Default::default() };
        let err = feature_change_study(&sys, &DetectorConfig::default(), &[4], 10).unwrap_err();
        assert!(err.is_config_error());
    }
}

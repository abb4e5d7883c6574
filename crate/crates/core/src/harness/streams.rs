use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::stats::Proportion;
use crate::detector::{change_metric, extract_feature, Decision, DetectorConfig, DetectorState};
use crate::rng::TrialRngs;
use crate::sim::{
    attack_overlay, sample_activity, synthesize_normal_frame, FrameObservation, SpreadingMatrix, SystemConfig,
    Topology,
};
use crate::{Error, Result};

/// Trial indices at or above this value are reserved for calibration streams.
pub const CALIBRATION_TRIAL_OFFSET: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameFeature {
    pub tau: usize,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Feature extraction time; varies between runs.
    pub elapsed_ms: f64,
}

/// One trial: a stream of attack-free frames over a fixed topology, and for each
/// frame its jammed twin (the same frame plus the jammer overlay) when `J > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamOutcome {
    pub trial: u64,
    pub normal: Vec<FrameFeature>,
    pub attacked: Option<Vec<FrameFeature>>,
}

fn feature_of(frame: &FrameObservation, det: &DetectorConfig) -> Result<FrameFeature> {
    let start = Instant::now();
    let sol = extract_feature(frame, det)?;
    Ok(FrameFeature {
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        tau: sol.tau,
        energy: frame.energy(),
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

/// Frame pairs of one trial, synthesized lazily and handed to `visit`.
pub fn for_each_frame_pair(
    sys: &SystemConfig,
    trial: u64,
    frames: usize,
    mut visit: impl FnMut(FrameObservation, Option<FrameObservation>) -> Result<()>,
) -> Result<()> {
    let mut rngs = TrialRngs::new(sys.seed, trial);
    let spreading = SpreadingMatrix::generate(sys.n, sys.k, sys.spreading, &mut rngs.spreading);
    let topo = Topology::draw(sys, &spreading, &mut rngs.topology)?;
    for l in 0..frames {
        let activity = sample_activity(sys, &mut rngs.activity);
        let normal = synthesize_normal_frame(sys, &spreading, &activity, &topo, &mut rngs, l)?;
        let attacked = topo.attackers.as_ref().map(|profile| {
            let overlay = attack_overlay(sys, profile, &mut rngs.attacker);
            FrameObservation {
                y: &normal.y + overlay,
                truth_attacked: true,
                activity: normal.activity.clone(),
                frame_index: l,
            }
        });
        visit(normal, attacked)?;
    }
    Ok(())
}

pub fn simulate_stream(sys: &SystemConfig, det: &DetectorConfig, trial: u64, frames: usize) -> Result<StreamOutcome> {
    let mut normal = Vec::with_capacity(frames);
    let mut attacked = (sys.j > 0).then(|| Vec::with_capacity(frames));
    for_each_frame_pair(sys, trial, frames, |n, a| {
        normal.push(feature_of(&n, det)?);
        if let (Some(a), Some(out)) = (a, attacked.as_mut()) {
            out.push(feature_of(&a, det)?);
        }
        Ok(())
    })?;
    Ok(StreamOutcome { trial, normal, attacked })
}

/// Simulates the given trials in parallel; the result is ordered by trial.
pub fn simulate_streams(
    sys: &SystemConfig,
    det: &DetectorConfig,
    trials: impl IntoIterator<Item = u64>,
    frames: usize,
) -> Result<Vec<StreamOutcome>> {
    sys.validate()?;
    det.validate()?;
    let trials: Vec<u64> = trials.into_iter().collect();
    trials.par_iter().map(|&t| simulate_stream(sys, det, t, frames)).collect()
}

/// Number of streams of `frames_per_stream` frames needed for `judged` decisions
/// (the first frame of every stream only bootstraps the detector).
pub fn streams_for(judged: usize, frames_per_stream: usize) -> Result<usize> {
    if frames_per_stream < 2 {
        return Err(Error::range("L", "evaluation streams need L >= 2 frames"));
    }
    Ok(judged.div_ceil(frames_per_stream - 1).max(1))
}

/// Attack-free streams used for threshold calibration, disjoint from evaluation trials.
pub fn calibration_streams(sys: &SystemConfig, det: &DetectorConfig, frames: usize) -> Result<Vec<StreamOutcome>> {
    let per = sys.l.max(2);
    let count = frames.div_ceil(per).max(1) as u64;
    let normal_only = SystemConfig { j: 0, ..sys.clone() };
    simulate_streams(
        &normal_only,
        det,
        (0..count).map(|i| CALIBRATION_TRIAL_OFFSET + i),
        per,
    )
}

/// Pass-through change metrics (reference always advanced) of every stream.
pub fn pass_through_metrics(streams: &[StreamOutcome]) -> Vec<f64> {
    streams
        .iter()
        .flat_map(|s| s.normal.windows(2).map(|w| change_metric(w[1].tau, w[0].tau)))
        .collect()
}

/// Decisions of one replayed stream at threshold `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayedStream {
    /// Sequential decisions on the attack-free stream.
    pub normal: Vec<(Option<f64>, Decision)>,
    /// Decision each jammed twin would receive against the same reference.
    pub attacked: Option<Vec<(Option<f64>, Decision)>>,
}

pub fn replay_stream(stream: &StreamOutcome, delta: f64) -> ReplayedStream {
    let mut state = DetectorState::new();
    let mut normal = Vec::with_capacity(stream.normal.len());
    let mut attacked = stream.attacked.as_ref().map(|a| Vec::with_capacity(a.len()));
    for (l, f) in stream.normal.iter().enumerate() {
        if let (Some(out), Some(a)) = (attacked.as_mut(), stream.attacked.as_ref()) {
            out.push(state.judge(a[l].tau, delta));
        }
        let before = state.judge(f.tau, delta);
        state.step_with_tau(f.tau, delta, Some(false), f.iterations);
        normal.push(before);
    }
    ReplayedStream { normal, attacked }
}

/// Alarm counts over judged (non-bootstrap) frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct AlarmCounts {
    pub false_alarms: Proportion,
    pub detections: Proportion,
}

impl AlarmCounts {
    pub fn p_f(&self) -> Option<f64> {
        self.false_alarms.estimate()
    }

    pub fn p_d(&self) -> Option<f64> {
        self.detections.estimate()
    }
}

fn tally(decisions: &[(Option<f64>, Decision)], acc: &mut Proportion) {
    for (_, d) in decisions {
        if *d != Decision::Bootstrap {
            acc.trials += 1;
            acc.successes += d.is_alarm() as usize;
        }
    }
}

pub fn count_alarms(streams: &[StreamOutcome], delta: f64) -> AlarmCounts {
    let mut counts = AlarmCounts::default();
    for s in streams {
        let r = replay_stream(s, delta);
        tally(&r.normal, &mut counts.false_alarms);
        if let Some(a) = &r.attacked {
            tally(a, &mut counts.detections);
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feat(tau: usize) -> FrameFeature {
        FrameFeature { tau, energy: 0.0, iterations: 1, converged: true, elapsed_ms: 0.0 }
    }

    fn stream(normal: &[usize], attacked: &[usize]) -> StreamOutcome {
        StreamOutcome {
            trial: 0,
            normal: normal.iter().map(|&t| feat(t)).collect(),
            attacked: Some(attacked.iter().map(|&t| feat(t)).collect()),
        }
    }

    #[test]
    fn replay_judges_twins_against_normal_reference() {
        let s = stream(&[100, 100, 150, 100], &[80, 60, 100, 100]);
        let r = replay_stream(&s, 0.95);
        let decisions: Vec<_> = r.normal.iter().map(|x| x.1).collect();
        assert_eq!(decisions, [Decision::Bootstrap, Decision::Normal, Decision::Attacked, Decision::Normal]);
        let twins: Vec<_> = r.attacked.unwrap().iter().map(|x| x.1).collect();
        assert_eq!(twins, [Decision::Bootstrap, Decision::Attacked, Decision::Normal, Decision::Normal]);
        let counts = count_alarms(&[s], 0.95);
        assert_eq!(counts.false_alarms, Proportion::new(1, 3));
        assert_eq!(counts.detections, Proportion::new(1, 3));
    }

    #[test]
    fn delta_one_alarms_everything() {
        let s = stream(&[5, 5, 5], &[5, 5, 5]);
        let c = count_alarms(&[s], 1.0);
        assert_eq!(c.p_f(), Some(1.0));
        assert_eq!(c.p_d(), Some(1.0));
    }

    #[test]
    fn stream_counts() {
        assert_eq!(streams_for(500, 10).unwrap(), 56);
        assert_eq!(streams_for(9, 10).unwrap(), 1);
        assert!(streams_for(10, 1).is_err());
    }

    #[test]
    fn pass_through_windows() {
        let s = stream(&[100, 80, 80], &[0, 0, 0]);
        assert_eq!(pass_through_metrics(&[s]), vec![0.8, 1.0]);
    }
}

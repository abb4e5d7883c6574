use std::ops::Range;

use crate::detector::{DetectorConfig, DetectorState};
use crate::sim::SystemConfig;
use super::streams::for_each_frame_pair;
use crate::{Error, Result};

/// Frames carrying the jammer, written as comma-separated half-open ranges
/// (`10..20`) or single indices (`7`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AttackSchedule {
    ranges: Vec<Range<usize>>,
}

impl AttackSchedule {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn from_ranges(ranges: Vec<Range<usize>>) -> Self {
        Self { ranges }
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn is_attacked(&self, frame: usize) -> bool {
        self.ranges.iter().any(|r| r.contains(&frame))
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.iter().all(|r| r.is_empty())
    }
}

impl std::fmt::Display for AttackSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.ranges.iter().map(|r| format!("{}..{}", r.start, r.end)).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for AttackSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |part: &str| Error::range("attack_frames", format!("cannot parse {part:?}; expected e.g. 10..20"));
        let mut ranges = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let range = match part.split_once("..") {
                Some((a, b)) => {
                    let start: usize = a.trim().parse().map_err(|_| bad(part))?;
                    let end: usize = b.trim().parse().map_err(|_| bad(part))?;
                    if end < start {
                        return Err(bad(part));
                    }
                    start..end
                }
                None => {
                    let i: usize = part.parse().map_err(|_| bad(part))?;
                    i..i + 1
                }
            };
            ranges.push(range);
        }
        Ok(Self { ranges })
    }
}

/// Runs the sequential detector over `sys.l` frames of one trial. Scheduled
/// frames are jammed when `J > 0`; otherwise every frame is attack-free.
pub fn run_detection(
    sys: &SystemConfig,
    det: &DetectorConfig,
    schedule: &AttackSchedule,
    trial: u64,
) -> Result<DetectorState> {
    sys.validate()?;
    det.validate()?;
    let mut state = DetectorState::new();
    for_each_frame_pair(sys, trial, sys.l, |normal, attacked| {
        let frame = match attacked {
            Some(a) if schedule.is_attacked(normal.frame_index) => a,
            _ => normal,
        };
        state.step(&frame, det)?;
        Ok(())
    })?;
    Ok(state)
}

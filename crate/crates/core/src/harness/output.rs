use std::io::Write;

use serde::Serialize;

use super::calibration::CalibrationReport;
use super::ec::EcPoint;
use super::roc::RocPoint;
use super::stats::Proportion;
use super::streams::{replay_stream, StreamOutcome};
use super::studies::{ConvergenceTrace, FeatureChangeRow};
use super::sweep::SweepPoint;
use crate::detector::Decision;
use crate::Result;

/// Comment block written at the top of every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputHeader {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
}

impl OutputHeader {
    pub fn new(experiment: impl Into<String>, config_hash: impl Into<String>, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            config_hash: config_hash.into(),
            seed,
        }
    }

    pub fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# tool: jsts {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(w, "# experiment: {}", self.experiment)?;
        writeln!(w, "# config_hash: {}", self.config_hash)?;
        writeln!(w, "# seed: {}", self.seed)?;
        Ok(())
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), |v| v.to_string())
}

fn interval(p: Option<Proportion>) -> [String; 3] {
    let est = p.and_then(|p| p.estimate());
    let ci = p.and_then(|p| p.wilson());
    [opt(est), opt(ci.map(|c| c.0)), opt(ci.map(|c| c.1))]
}

fn write_rows<W: Write>(w: &mut W, header: &OutputHeader, columns: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    header.write(w)?;
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_roc_csv<W: Write>(w: &mut W, header: &OutputHeader, points: &[RocPoint]) -> Result<()> {
    let rows = points
        .iter()
        .map(|p| {
            let [_, flo, fhi] = interval(Some(p.false_alarms));
            let [_, dlo, dhi] = interval(Some(p.detections));
            vec![p.threshold.to_string(), p.p_f.to_string(), flo, fhi, p.p_d.to_string(), dlo, dhi, p.n_trials.to_string()]
        })
        .collect();
    write_rows(w, header, &["threshold", "p_f", "p_f_lo", "p_f_hi", "p_d", "p_d_lo", "p_d_hi", "n_trials"], rows)
}

pub fn write_ec_csv<W: Write>(w: &mut W, header: &OutputHeader, points: &[EcPoint]) -> Result<()> {
    let rows = points
        .iter()
        .map(|p| {
            let [pf, flo, fhi] = interval(Some(p.false_alarms));
            let [pd, dlo, dhi] = interval(Some(p.detections));
            vec![p.threshold.to_string(), pf, flo, fhi, pd, dlo, dhi, p.false_alarms.trials.to_string()]
        })
        .collect();
    write_rows(w, header, &["energy_threshold", "p_f", "p_f_lo", "p_f_hi", "p_d", "p_d_lo", "p_d_hi", "n_trials"], rows)
}

pub fn write_sweep_csv<W: Write>(w: &mut W, header: &OutputHeader, points: &[SweepPoint]) -> Result<()> {
    let rows = points
        .iter()
        .map(|p| {
            let [pf, flo, fhi] = interval(Some(p.false_alarms));
            let [pd, dlo, dhi] = interval(p.detections);
            vec![
                p.param.to_string(),
                p.value.to_string(),
                p.delta.to_string(),
                pf,
                flo,
                fhi,
                pd,
                dlo,
                dhi,
                p.false_alarms.trials.to_string(),
                p.detections.map_or(0, |d| d.trials).to_string(),
            ]
        })
        .collect();
    write_rows(
        w,
        header,
        &["param", "value", "delta", "p_f", "p_f_lo", "p_f_hi", "p_d", "p_d_lo", "p_d_hi", "n_normal", "n_attacked"],
        rows,
    )
}

pub fn write_calibration_csv<W: Write>(w: &mut W, header: &OutputHeader, report: &CalibrationReport) -> Result<()> {
    let rows = report.cdf().into_iter().map(|(c, p)| vec![c.to_string(), p.to_string()]).collect();
    write_rows(w, header, &["c", "cdf"], rows)
}

pub fn write_feature_change_csv<W: Write>(w: &mut W, header: &OutputHeader, rows: &[FeatureChangeRow]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.nc.to_string(),
                r.mean_c.to_string(),
                r.mean_tau_normal.to_string(),
                r.mean_tau_attacked.to_string(),
                r.frames.to_string(),
            ]
        })
        .collect();
    write_rows(w, header, &["nc", "mean_c", "mean_tau_normal", "mean_tau_attacked", "frames"], rows)
}

/// One row per solver iteration; iteration 0 is the starting point.
pub fn write_convergence_csv<W: Write>(w: &mut W, header: &OutputHeader, traces: &[ConvergenceTrace]) -> Result<()> {
    let mut rows = Vec::new();
    for t in traces {
        for (m, f) in t.objective.iter().enumerate() {
            let step = if m == 0 { String::new() } else { t.step_norms[m - 1].to_string() };
            rows.push(vec![t.instance.to_string(), t.attacked.to_string(), m.to_string(), f.to_string(), step]);
        }
    }
    write_rows(w, header, &["instance", "attacked", "iteration", "objective", "step_norm"], rows)
}

/// Per-frame result of a Monte Carlo trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub trial_id: u64,
    pub config_hash: String,
    pub frame_index: usize,
    pub truth: bool,
    pub decision: Decision,
    pub c: Option<f64>,
    pub tau: usize,
    /// Wall-clock time is left out unless requested so that outputs stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

/// Records of every normal frame and its jammed twin at threshold `delta`.
/// `elapsed_ms` is filled only when `timing` is set.
pub fn stream_records(streams: &[StreamOutcome], delta: f64, config_hash: &str, timing: bool) -> Vec<ExperimentRecord> {
    let mut out = Vec::new();
    for s in streams {
        let replay = replay_stream(s, delta);
        for (l, (f, (c, d))) in s.normal.iter().zip(&replay.normal).enumerate() {
            out.push(ExperimentRecord {
                trial_id: s.trial,
                config_hash: config_hash.to_string(),
                frame_index: l,
                truth: false,
                decision: *d,
                c: *c,
                tau: f.tau,
                elapsed_ms: timing.then_some(f.elapsed_ms),
            });
        }
        if let (Some(a), Some(decisions)) = (&s.attacked, &replay.attacked) {
            for (l, (f, (c, d))) in a.iter().zip(decisions).enumerate() {
                out.push(ExperimentRecord {
                    trial_id: s.trial,
                    config_hash: config_hash.to_string(),
                    frame_index: l,
                    truth: true,
                    decision: *d,
                    c: *c,
                    tau: f.tau,
                    elapsed_ms: timing.then_some(f.elapsed_ms),
                });
            }
        }
    }
    out
}

/// JSONL with the header as `#` comment lines.
pub fn write_jsonl<W: Write, T: Serialize>(w: &mut W, header: &OutputHeader, items: &[T]) -> Result<()> {
    header.write(w)?;
    for item in items {
        serde_json::to_writer(&mut *w, item)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_lines() {
        let mut out = Vec::new();
        OutputHeader::new("roc", "abc123", 9).write(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# tool: jsts "));
        assert!(text.contains("# config_hash: abc123\n"));
        assert!(text.ends_with("# seed: 9\n"));
    }

    #[test]
    fn sweep_without_attackers_prints_null() {
        let p = SweepPoint {
            param: super::super::sweep::SweepParam::J,
            value: 0.0,
            delta: 0.95,
            false_alarms: Proportion::new(3, 60),
            detections: None,
        };
        let mut out = Vec::new();
        write_sweep_csv(&mut out, &OutputHeader::new("sweep", "h", 1), &[p]).unwrap();
        let last = String::from_utf8(out).unwrap().lines().last().unwrap().to_string();
        assert!(last.starts_with("J,0,0.95,0.05,"));
        assert!(last.contains(",null,null,null,60,0"));
    }
}

//! Sequential detection over one stream with frames 12..16 jammed.
use jsts::detector::DetectorConfig;
use jsts::harness::{run_detection, AttackSchedule};
use jsts::sim::SystemConfig;

fn main() -> jsts::Result<()> {
    let sys = SystemConfig { l: 24, ..Default::default() };
    let det = DetectorConfig::default();
    let schedule: AttackSchedule = "12..16".parse()?;

    let state = run_detection(&sys, &det, &schedule, 0)?;
    for e in &state.log {
        let c = e.c.map_or("   -  ".to_string(), |c| format!("{c:.4}"));
        let truth = if e.truth == Some(true) { "jammed" } else { "" };
        println!("{:3}  tau {:3}  c {c}  {:9}  {truth}", e.frame_index, e.tau, e.decision.to_string());
    }
    state.write_jsonl(std::io::stdout().lock())?;
    Ok(())
}

//! Objective traces of the solver on simulated frames.
use jsts::detector::DetectorConfig;
use jsts::harness::{convergence_study, median_iterations};
use jsts::sim::SystemConfig;

fn main() -> jsts::Result<()> {
    let traces = convergence_study(&SystemConfig::default(), &DetectorConfig::default(), 10)?;
    for t in &traces {
        let first = t.objective[0];
        let last = *t.objective.last().unwrap();
        println!(
            "instance {} ({}): {} iterations, {first:.3} -> {last:.3}, monotone {}",
            t.instance,
            if t.attacked { "jammed" } else { "normal" },
            t.iterations,
            t.is_monotone(1e-9)
        );
    }
    println!("median iterations {}", median_iterations(&traces).unwrap());
    Ok(())
}

//! ROC of the sparsity detector next to the energy baseline.
use jsts::detector::DetectorConfig;
use jsts::harness::{best_at_false_alarm, default_delta_grid, ec_at_false_alarm, run_roc};
use jsts::sim::SystemConfig;

fn main() -> jsts::Result<()> {
    let sys = SystemConfig::default();
    let report = run_roc(&sys, &DetectorConfig::default(), 500, 200, &default_delta_grid())?;

    println!("delta    P_F    P_D");
    for p in report.points.iter().step_by(5) {
        println!("{:.2}  {:.3}  {:.3}", p.threshold, p.p_f, p.p_d);
    }
    println!("calibrated delta {:.4}", report.calibrated_delta);
    if let Some(p) = best_at_false_alarm(&report.points, 0.05) {
        println!("sparsity detector: P_D {:.3} at P_F {:.3}", p.p_d, p.p_f);
    }
    let ec = ec_at_false_alarm(&report.streams, 0.05)?;
    println!("energy detector:   P_D {:.3} at P_F {:.3}", ec.p_d(), ec.p_f());
    Ok(())
}

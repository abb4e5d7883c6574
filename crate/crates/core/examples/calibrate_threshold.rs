//! Pick the detection threshold from attack-free frames.
use jsts::detector::DetectorConfig;
use jsts::harness::calibrate;
use jsts::sim::SystemConfig;

fn main() -> jsts::Result<()> {
    let report = calibrate(&SystemConfig::default(), &DetectorConfig::default(), 200)?;
    println!("delta = {:.4} (lower {} quantile)", report.delta, report.quantile);
    println!("{:.1}% of change metrics are >= 0.95", 100.0 * report.fraction_at_least(0.95));
    println!("   c       cdf");
    for (c, p) in report.cdf() {
        println!("{c:.4}  {p:.3}");
    }
    Ok(())
}

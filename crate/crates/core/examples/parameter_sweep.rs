//! Detection rate against the number of jammers (or any sweep parameter).
//!
//!     cargo run --release --example parameter_sweep -- P_uaj_dbm 10 15 20 25
use jsts::detector::DetectorConfig;
use jsts::harness::{run_sweep, SweepParam, TrendTest};
use jsts::sim::SystemConfig;

fn main() -> jsts::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (param, values) = match args.split_first() {
        Some((p, vals)) => (p.parse::<SweepParam>()?, vals.iter().map(|v| v.parse().unwrap()).collect()),
        None => (SweepParam::J, vec![2.0, 4.0, 8.0, 16.0]),
    };

    let points = run_sweep(&SystemConfig::default(), &DetectorConfig::default(), param, &values, 300, 200)?;
    for p in &points {
        let pd = p.detections.and_then(|d| d.estimate()).map_or("-".to_string(), |x| format!("{x:.3}"));
        println!("{param} = {:<6} delta {:.3}  P_F {:.3}  P_D {pd}", p.value, p.delta, p.false_alarms.estimate().unwrap());
    }
    let detections: Vec<_> = points.iter().filter_map(|p| p.detections).collect();
    if detections.len() > 1 {
        let t = TrendTest::new(&detections);
        println!("trend z = {:.2} (p increasing {:.3}, p decreasing {:.3})", t.z, t.p_increasing, t.p_decreasing);
    }
    Ok(())
}

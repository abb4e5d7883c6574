//! How far the change metric drops as more slots of a frame are jammed.
use jsts::detector::DetectorConfig;
use jsts::harness::feature_change_study;
use jsts::sim::SystemConfig;

fn main() -> jsts::Result<()> {
    let rows = feature_change_study(&SystemConfig::default(), &DetectorConfig::default(), &[0, 1, 2, 3, 4, 5, 6, 7], 200)?;
    println!("Nc  mean c   tau normal  tau jammed");
    for r in rows {
        println!("{:2}  {:.4}   {:7.2}     {:7.2}", r.nc, r.mean_c, r.mean_tau_normal, r.mean_tau_attacked);
    }
    Ok(())
}

//! Synthesize one attack-free frame and its jammed twin, then dump both.
use jsts::harness::streams::for_each_frame_pair;
use jsts::sim::dump::{read_frame, write_frame};
use jsts::sim::SystemConfig;

fn main() -> jsts::Result<()> {
    let sys = SystemConfig::default();
    let dir = std::env::temp_dir().join("jsts-frames");
    std::fs::create_dir_all(&dir)?;

    for_each_frame_pair(&sys, 0, 3, |normal, attacked| {
        let attacked = attacked.expect("default config has jammers");
        println!(
            "frame {}: {} active device-slots, overlap {:.2}, energy {:.3e} normal / {:.3e} jammed",
            normal.frame_index,
            normal.activity.total_active(),
            normal.activity.measured_overlap().unwrap_or(f64::NAN),
            normal.energy(),
            attacked.energy(),
        );
        let path = dir.join(format!("jammed_{}.bin", normal.frame_index));
        write_frame(std::fs::File::create(&path)?, &attacked.y)?;
        let back = read_frame(std::fs::File::open(&path)?)?;
        assert_eq!(back, attacked.y);
        Ok(())
    })?;
    println!("dumps in {}", dir.display());
    Ok(())
}

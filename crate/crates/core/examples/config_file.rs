//! Parse a key=value config, show its canonical form and hash.
use jsts::cli::parse_config_str;

fn main() -> jsts::Result<()> {
    let text = "\
# smaller cell, jammers closer in
K = 500
N = 32
D_max = 300
attack_frames = 5..8
";
    let cfg = parse_config_str(text)?;
    print!("{}", cfg.to_canonical_string());
    println!("hash {}", cfg.config_hash());

    match parse_config_str("mu=1.5") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

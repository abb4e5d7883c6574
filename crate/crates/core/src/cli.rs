//! Configuration files and the `jsts` command line.
//!
//! Config files are flat `key=value` text. Blank lines and lines starting with
//! `#` are ignored, keys are case-insensitive, unknown keys are rejected and
//! missing keys keep their defaults.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::detector::{DetectorConfig, FloorRule};
use crate::fa::MomentMode;
use crate::harness::output::{
    write_calibration_csv, write_convergence_csv, write_ec_csv, write_jsonl, write_roc_csv, write_sweep_csv,
};
use crate::harness::{
    best_at_false_alarm, calibrate, convergence_study, default_delta_grid, ec_at_false_alarm, median_iterations,
    run_detection, run_roc, run_sweep, stream_records, AttackSchedule, OutputHeader, SweepParam,
};
use crate::harness::streams::for_each_frame_pair;
use crate::selftest::run_selftest;
use crate::sim::{dump::write_frame, ActivityModel, SpreadingKind, SystemConfig};
use crate::{Error, Result};

/// Everything a config file can set.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub detector: DetectorConfig,
    /// Jammed frames for `detect` and `simulate`.
    pub attack_frames: AttackSchedule,
    pub calibration_frames: usize,
    /// Judged frame pairs per evaluation point.
    pub eval_frames: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            system: SystemConfig::default(),
            detector: DetectorConfig::default(),
            attack_frames: AttackSchedule::none(),
            calibration_frames: 200,
            eval_frames: 500,
        }
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("cannot parse {value:?} as a number"))
}

fn parse_pair(value: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = value
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated numbers, got {value:?}"))?;
    Ok((parse_num(a.trim())?, parse_num(b.trim())?))
}

fn activity_name(m: ActivityModel) -> &'static str {
    match m {
        ActivityModel::Markov => "markov",
        ActivityModel::FixedOverlap => "fixed-overlap",
    }
}

fn spreading_name(s: SpreadingKind) -> &'static str {
    match s {
        SpreadingKind::Gaussian => "gaussian",
        SpreadingKind::Hadamard => "hadamard",
    }
}

impl RunConfig {
    /// Applies one `key=value` assignment. Returns whether the key was `Nc`.
    fn set(&mut self, key: &str, value: &str) -> std::result::Result<bool, String> {
        let sys = &mut self.system;
        let det = &mut self.detector;
        match key.to_ascii_lowercase().as_str() {
            "k" => sys.k = parse_num(value)?,
            "n" => sys.n = parse_num(value)?,
            "ts" => sys.ts = parse_num(value)?,
            "l" => sys.l = parse_num(value)?,
            "mu" => sys.mu = parse_num(value)?,
            "rho" => sys.rho = parse_num(value)?,
            "eta" => sys.eta = parse_num(value)?,
            "activity_model" => {
                sys.activity_model = match value {
                    "markov" => ActivityModel::Markov,
                    "fixed-overlap" => ActivityModel::FixedOverlap,
                    _ => return Err(format!("activity_model must be markov or fixed-overlap, got {value:?}")),
                }
            }
            "spreading" => {
                sys.spreading = match value {
                    "gaussian" => SpreadingKind::Gaussian,
                    "hadamard" => SpreadingKind::Hadamard,
                    _ => return Err(format!("spreading must be gaussian or hadamard, got {value:?}")),
                }
            }
            "p_dbm" => sys.p_dbm = parse_num(value)?,
            "p_uaj_dbm" => sys.p_uaj_dbm = parse_num(value)?,
            "j" => sys.j = parse_num(value)?,
            "d_range" => sys.d_range = parse_pair(value)?,
            "d_attacker_range" => sys.d_attacker_range = parse_pair(value)?,
            "d_max" => sys.d_attacker_range.1 = parse_num(value)?,
            "alpha" => sys.alpha = parse_num(value)?,
            "l_o_db" => sys.l_o_db = parse_num(value)?,
            "noise_floor_dbm" => sys.noise_floor_dbm = parse_num(value)?,
            "nc" => {
                sys.nc = parse_num(value)?;
                return Ok(true);
            }
            "seed" => sys.seed = parse_num(value)?,
            "mode" => det.mode = value.parse().map_err(|e: Error| e.to_string())?,
            "r" => det.rank = parse_num(value)?,
            "floor_ratio" => det.floor = FloorRule::MeanEnergy { ratio: parse_num(value)? },
            "eps_floor" => det.floor = FloorRule::Absolute(parse_num(value)?),
            "eps_stop" => det.eps_stop = parse_num(value)?,
            "max_iter" => det.max_iter = parse_num(value)?,
            "delta" => det.delta = parse_num(value)?,
            "calibration_quantile" => det.calibration_quantile = parse_num(value)?,
            "attack_frames" => self.attack_frames = value.parse().map_err(|e: Error| e.to_string())?,
            "calibration_frames" => self.calibration_frames = parse_num(value)?,
            "eval_frames" => self.eval_frames = parse_num(value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(false)
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.detector.validate()?;
        let d = self.detector.dim(self.system.n, self.system.ts);
        if self.detector.rank >= d {
            return Err(Error::range("r", format!("requires r < d = {d}, got {}", self.detector.rank)));
        }
        Ok(())
    }

    /// Canonical text: every key, fixed order, one per line.
    pub fn to_canonical_string(&self) -> String {
        let s = &self.system;
        let d = &self.detector;
        let floor = match d.floor {
            FloorRule::MeanEnergy { ratio } => format!("floor_ratio={ratio}"),
            FloorRule::Absolute(eps) => format!("eps_floor={eps}"),
        };
        let lines = [
            format!("K={}", s.k),
            format!("N={}", s.n),
            format!("Ts={}", s.ts),
            format!("L={}", s.l),
            format!("mu={}", s.mu),
            format!("rho={}", s.rho),
            format!("eta={}", s.eta),
            format!("activity_model={}", activity_name(s.activity_model)),
            format!("spreading={}", spreading_name(s.spreading)),
            format!("P_dbm={}", s.p_dbm),
            format!("P_uaj_dbm={}", s.p_uaj_dbm),
            format!("J={}", s.j),
            format!("D_range={},{}", s.d_range.0, s.d_range.1),
            format!("D_attacker_range={},{}", s.d_attacker_range.0, s.d_attacker_range.1),
            format!("alpha={}", s.alpha),
            format!("L_o_db={}", s.l_o_db),
            format!("noise_floor_dbm={}", s.noise_floor_dbm),
            format!("Nc={}", s.nc),
            format!("seed={}", s.seed),
            format!("mode={}", d.mode),
            format!("r={}", d.rank),
            floor,
            format!("eps_stop={}", d.eps_stop),
            format!("max_iter={}", d.max_iter),
            format!("delta={}", d.delta),
            format!("calibration_quantile={}", d.calibration_quantile),
            format!("attack_frames={}", self.attack_frames),
            format!("calibration_frames={}", self.calibration_frames),
            format!("eval_frames={}", self.eval_frames),
        ];
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical_string().as_bytes()))
    }
}

/// Parses config text. When `Nc` is not given it follows `Ts` (every slot jammed).
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut nc_set = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: i + 1,
            message: format!("expected key=value, got {line:?}"),
        })?;
        nc_set |= cfg
            .set(key.trim(), value.trim())
            .map_err(|message| Error::Config { line: i + 1, message })?;
    }
    if !nc_set {
        cfg.system.nc = cfg.system.ts;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::range("config", format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

/// What was run, where and when; written next to the outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub config_path: Option<PathBuf>,
    pub subcommand: String,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub config_hash: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Debug, Parser)]
#[command(name = "jsts", version, about = "Jamming detection for grant-free mMTC uplinks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// key=value config file; defaults are used when absent
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Master seed (overrides the config file)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for Monte Carlo runs
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// slot-covariance or vectorized
    #[arg(long, global = true)]
    pub mode: Option<MomentMode>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the frames of one stream as binary files
    Simulate {
        #[arg(long)]
        frames: Option<usize>,
    },
    /// Calibrate the threshold on attack-free frames
    Calibrate {
        #[arg(long)]
        frames: Option<usize>,
    },
    /// Run sequential detection over one stream with the configured attack schedule
    Detect {
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// ROC of the detector and the energy baseline
    Roc {
        #[arg(long)]
        frames: Option<usize>,
        /// Include feature extraction times in the per-frame records
        #[arg(long)]
        timing: bool,
    },
    /// Recalibrated detection rates over one parameter
    Sweep {
        /// mu, rho, J, D_max or P_uaj_dbm
        #[arg(long)]
        param: SweepParam,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long)]
        frames: Option<usize>,
    },
    /// Solver objective traces on simulated frames
    Convergence {
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
    /// Numerical invariant checks
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Calibrate { .. } => "calibrate",
            Command::Detect { .. } => "detect",
            Command::Roc { .. } => "roc",
            Command::Sweep { .. } => "sweep",
            Command::Convergence { .. } => "convergence",
            Command::Selftest => "selftest",
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.system.seed = seed;
    }
    if let Some(mode) = cli.mode {
        cfg.detector.mode = mode;
    }
    if cli.jobs == Some(0) {
        return Err(Error::range("jobs", "requires at least one worker"));
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one subcommand. Exit codes: 0 success, 1 runtime failure, 2 configuration error.
pub fn dispatch(cli: &Cli) -> i32 {
    let result = effective_config(cli).and_then(|cfg| match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(|| execute(cli, &cfg)),
        None => execute(cli, &cfg),
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                2
            } else {
                1
            }
        }
    }
}

/// Parses arguments and dispatches; used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}

/// Returns `Ok(false)` when the run completed but reported failures.
fn execute(cli: &Cli, cfg: &RunConfig) -> Result<bool> {
    let sys = &cfg.system;
    let det = &cfg.detector;
    let seed = sys.seed;
    let hash = cfg.config_hash();
    let header = |experiment: &str| OutputHeader::new(experiment, hash.clone(), seed);
    let out = &cli.out;
    if !matches!(cli.command, Command::Selftest) {
        fs::create_dir_all(out)?;
        let manifest = RunManifest {
            config_path: cli.config.clone(),
            subcommand: cli.command.name().to_string(),
            out_dir: out.clone(),
            seed,
            config_hash: hash.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        };
        let mut w = create(&out.join(format!("manifest_{}_seed{seed}.json", cli.command.name())))?;
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    match &cli.command {
        Command::Simulate { frames } => {
            let frames = frames.unwrap_or(sys.l);
            let dir = out.join(format!("frames_seed{seed}"));
            fs::create_dir_all(&dir)?;
            let mut index = create(&out.join(format!("simulate_seed{seed}.csv")))?;
            header("simulate").write(&mut index)?;
            writeln!(index, "frame_index,attacked,energy,active_slot_mean,measured_overlap,file")?;
            for_each_frame_pair(sys, 0, frames, |normal, attacked| {
                let l = normal.frame_index;
                let frame = match attacked {
                    Some(a) if cfg.attack_frames.is_attacked(l) => a,
                    _ => normal,
                };
                let name = format!("frame_{l:04}.bin");
                let mut w = create(&dir.join(&name))?;
                write_frame(&mut w, &frame.y)?;
                w.flush()?;
                let active = frame.activity.total_active() as f64 / sys.ts as f64;
                let overlap = frame.activity.measured_overlap().map_or("null".into(), |x| x.to_string());
                writeln!(index, "{l},{},{},{active},{overlap},{name}", frame.truth_attacked, frame.energy())?;
                Ok(())
            })?;
            index.flush()?;
            println!("wrote {frames} frames to {}", dir.display());
        }
        Command::Calibrate { frames } => {
            let report = calibrate(sys, det, frames.unwrap_or(cfg.calibration_frames))?;
            let mut w = create(&out.join(format!("calibration_seed{seed}.csv")))?;
            write_calibration_csv(&mut w, &header("calibrate"), &report)?;
            w.flush()?;
            println!("delta = {}", report.delta);
            println!(
                "{} change metrics, {:.3} of them >= 0.95",
                report.metrics.len(),
                report.fraction_at_least(0.95)
            );
        }
        Command::Detect { trial } => {
            let state = run_detection(sys, det, &cfg.attack_frames, *trial)?;
            let mut w = create(&out.join(format!("detect_seed{seed}.jsonl")))?;
            write_jsonl(&mut w, &header("detect"), &state.log)?;
            w.flush()?;
            let alarms = state.log.iter().filter(|e| e.decision.is_alarm()).count();
            println!("{} frames, {alarms} alarms", state.log.len());
        }
        Command::Roc { frames, timing } => {
            let report = run_roc(sys, det, frames.unwrap_or(cfg.eval_frames), cfg.calibration_frames, &default_delta_grid())?;
            let mut w = create(&out.join(format!("roc_seed{seed}.csv")))?;
            write_roc_csv(&mut w, &header("roc"), &report.points)?;
            w.flush()?;
            let ec = (1..=50)
                .map(|i| ec_at_false_alarm(&report.streams, i as f64 / 100.0))
                .collect::<Result<Vec<_>>>()?;
            let mut w = create(&out.join(format!("roc_ec_seed{seed}.csv")))?;
            write_ec_csv(&mut w, &header("roc-ec"), &ec)?;
            w.flush()?;
            let records = stream_records(&report.streams, report.calibrated_delta, &hash, *timing);
            let mut w = create(&out.join(format!("roc_records_seed{seed}.jsonl")))?;
            write_jsonl(&mut w, &header("roc-records"), &records)?;
            w.flush()?;
            println!("calibrated delta = {}", report.calibrated_delta);
            if let Some(p) = best_at_false_alarm(&report.points, 0.1) {
                println!("best P_D with P_F <= 0.1: {} (delta {}, P_F {})", p.p_d, p.threshold, p.p_f);
            }
            println!("energy baseline P_D at P_F 0.05: {}", ec[4].p_d());
        }
        Command::Sweep { param, values, frames } => {
            let points = run_sweep(sys, det, *param, values, frames.unwrap_or(cfg.eval_frames), cfg.calibration_frames)?;
            let mut w = create(&out.join(format!("sweep_{}_seed{seed}.csv", param.name())))?;
            write_sweep_csv(&mut w, &header(&format!("sweep {}", param.name())), &points)?;
            w.flush()?;
            for p in &points {
                let pd = p.detections.and_then(|d| d.estimate()).map_or("null".into(), |x| format!("{x:.3}"));
                println!("{}={}: delta {:.3} P_F {:.3} P_D {pd}", param, p.value, p.delta, p.false_alarms.estimate().unwrap_or(0.0));
            }
        }
        Command::Convergence { instances } => {
            let traces = convergence_study(sys, det, *instances)?;
            let mut w = create(&out.join(format!("convergence_seed{seed}.csv")))?;
            write_convergence_csv(&mut w, &header("convergence"), &traces)?;
            w.flush()?;
            let monotone = traces.iter().all(|t| t.is_monotone(1e-9));
            println!(
                "{} traces, median iterations {}, all monotone: {monotone}",
                traces.len(),
                median_iterations(&traces).unwrap_or(f64::NAN)
            );
            return Ok(monotone);
        }
        Command::Selftest => {
            let checks = run_selftest(seed)?;
            let mut ok = true;
            for c in &checks {
                println!(
                    "{} {} ({} instances, worst {:e})",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.instances,
                    c.worst
                );
                ok &= c.passed;
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

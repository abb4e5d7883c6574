use approx::assert_relative_eq;
use jsts::detector::{
    calibrate_threshold, change_metric, extract_feature, lower_quantile, real_expand_matrix, Decision, DetectorConfig,
    DetectorState, LogEntry,
};
use jsts::harness::simulate_streams;
use jsts::rng::TrialRngs;
use jsts::sim::{synthesize_normal_frame, ActivityMatrix, FrameObservation, SpreadingMatrix, SystemConfig, Topology};
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

fn frame(y: DMatrix<C>) -> FrameObservation {
    let ts = y.ncols();
    FrameObservation { y, truth_attacked: false, activity: ActivityMatrix::zeros(1, ts), frame_index: 0 }
}

fn random_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<C> {
    DMatrix::from_fn(rows, cols, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

#[test]
fn real_expand_of_real_and_imaginary_slots() {
    let x = [0.5, -1.0, 2.0];
    let real = DMatrix::from_fn(3, 1, |i, _| C::new(x[i], 0.0));
    assert_eq!(real_expand_matrix(&real).unwrap().as_slice(), &[0.5, -1.0, 2.0, 0.0, 0.0, 0.0]);
    let imag = DMatrix::from_element(3, 1, C::new(0.0, 1.0));
    assert_eq!(real_expand_matrix(&imag).unwrap().as_slice(), &[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
}

#[test]
fn real_expand_commutes_with_the_block_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let (m, n, ts) = (5, 4, 3);
        let s = random_complex(&mut rng, m, n);
        let d = random_complex(&mut rng, n, ts);
        let mut block = DMatrix::zeros(2 * m, 2 * n);
        for i in 0..m {
            for j in 0..n {
                let z = s[(i, j)];
                block[(i, j)] = z.re;
                block[(i, j + n)] = -z.im;
                block[(i + m, j)] = z.im;
                block[(i + m, j + n)] = z.re;
            }
        }
        let lhs = real_expand_matrix(&d).unwrap() * block.transpose();
        let rhs = real_expand_matrix(&(&s * &d)).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        let rows = real_expand_matrix(&d).unwrap();
        for t in 0..ts {
            assert_relative_eq!(rows.row(t).norm(), d.column(t).norm(), max_relative = 1e-12);
        }
    }
}

#[test]
fn non_finite_samples_are_rejected() {
    let mut y = DMatrix::from_element(2, 2, C::new(1.0, 0.0));
    y[(1, 1)] = C::new(f64::NAN, 0.0);
    assert!(real_expand_matrix(&y).is_err());
}

#[test]
fn zero_frame_has_empty_support() {
    let sol = extract_feature(&frame(DMatrix::zeros(50, 7)), &DetectorConfig::default()).unwrap();
    assert_eq!(sol.tau, 0);
    let eps = sol.eps_floor;
    assert!(sol.gamma.iter().all(|&g| g == 1.0 / eps));
}

#[test]
fn identical_frames_give_identical_features() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let y = random_complex(&mut rng, 50, 7);
    let cfg = DetectorConfig::default();
    let a = extract_feature(&frame(y.clone()), &cfg).unwrap();
    let b = extract_feature(&frame(y), &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn change_metric_examples() {
    assert_eq!(change_metric(50, 50), 1.0);
    assert_relative_eq!(change_metric(80, 100), 0.8, epsilon = 1e-15);
    assert_relative_eq!(change_metric(130, 100), 0.7, epsilon = 1e-15);
    assert_eq!(change_metric(40, 0), -39.0);
    for (a, b) in [(0, 0), (3, 7), (100, 1), (9, 9)] {
        let c = change_metric(a, b);
        assert!(c <= 1.0);
        assert_eq!(c == 1.0, a == b);
    }
}

#[test]
fn constant_stream_is_normal_after_bootstrap() {
    let mut s = DetectorState::new();
    let decisions: Vec<_> = (0..6).map(|_| s.step_with_tau(42, 0.95, None, 0)).collect();
    assert_eq!(decisions[0], Decision::Bootstrap);
    assert!(decisions[1..].iter().all(|&d| d == Decision::Normal));
}

#[test]
fn alarms_freeze_the_reference() {
    let mut s = DetectorState::new();
    s.step_with_tau(100, 0.95, None, 0);
    s.step_with_tau(100, 0.95, None, 0);
    assert_eq!(s.step_with_tau(150, 0.95, Some(true), 0), Decision::Attacked);
    assert_eq!(s.log[2].c, Some(0.5));
    assert_eq!(s.tau_prev, Some(100));
    for tau in [10, 300, 0, 170] {
        assert_eq!(s.step_with_tau(tau, 0.95, Some(true), 0), Decision::Attacked);
        assert_eq!(s.tau_prev, Some(100));
    }
    assert_eq!(s.step_with_tau(100, 0.95, Some(false), 0), Decision::Normal);
    assert_eq!(s.log.last().unwrap().c, Some(1.0));
}

#[test]
fn replaying_a_log_reproduces_decisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let taus: Vec<usize> = (0..200).map(|_| rng.random_range(80..120)).collect();
    let mut s = DetectorState::new();
    for &t in &taus {
        s.step_with_tau(t, 0.9, None, 0);
    }
    let mut reference = None;
    for entry in &s.log {
        let expected = match reference {
            None => Decision::Bootstrap,
            Some(prev) if 1.0 - (entry.tau as f64 - prev as f64).abs() / (prev as f64).max(1.0) > 0.9 => Decision::Normal,
            Some(_) => Decision::Attacked,
        };
        assert_eq!(entry.decision, expected);
        if expected != Decision::Attacked {
            reference = Some(entry.tau);
        }
    }
}

#[test]
fn decision_log_is_jsonl() {
    let mut s = DetectorState::new();
    s.step_with_tau(10, 0.95, Some(false), 3);
    s.step_with_tau(20, 0.95, None, 4);
    let mut buf = Vec::new();
    s.write_jsonl(&mut buf).unwrap();
    let lines: Vec<serde_json::Value> =
        String::from_utf8(buf).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["frame_index"], 0);
    assert_eq!(lines[0]["tau"], 10);
    assert!(lines[0]["c"].is_null());
    assert_eq!(lines[0]["decision"], "bootstrap");
    assert_eq!(lines[0]["truth"], false);
    assert_eq!(lines[0]["solver_iterations"], 3);
    assert_eq!(lines[1]["decision"], "attacked");
    assert_eq!(lines[1]["c"], 0.0);
    assert!(lines[1].get("truth").is_none());
    let back: LogEntry = serde_json::from_value(lines[1].clone()).unwrap();
    assert_eq!(back, s.log[1]);
}

#[test]
fn lower_quantile_examples() {
    assert_eq!(lower_quantile(&[1.0; 40], 0.05).unwrap(), 1.0);
    let c: Vec<f64> = (0..20).map(|i| 0.90 + 0.1 * i as f64 / 19.0).collect();
    assert_eq!(lower_quantile(&c, 0.05).unwrap(), 0.90);
    assert_eq!(lower_quantile(&c, 0.10).unwrap(), c[1]);
    assert!(lower_quantile(&[], 0.05).is_err());
}

#[test]
fn calibration_needs_enough_frames() {
    let frames: Vec<_> = (0..5).map(|_| frame(DMatrix::zeros(4, 2))).collect();
    assert!(calibrate_threshold(&frames, &DetectorConfig::default(), 0.05).is_err());
    let frames: Vec<_> = (0..25).map(|_| frame(DMatrix::zeros(4, 2))).collect();
    assert_eq!(calibrate_threshold(&frames, &DetectorConfig::default(), 0.05).unwrap(), 1.0);
}

#[test]
fn attacked_frames_shift_the_feature() {
    let sys = SystemConfig::default();
    let streams = simulate_streams(&sys, &DetectorConfig::default(), 0..20, sys.l).unwrap();
    let (mut normal, mut attacked) = (0.0, 0.0);
    let mut count = 0;
    for s in &streams {
        for (n, a) in s.normal.iter().zip(s.attacked.as_ref().unwrap()) {
            normal += n.tau as f64;
            attacked += a.tau as f64;
            count += 1;
        }
    }
    assert_eq!(count, 200);
    let gap = (normal - attacked).abs() / normal;
    assert!(gap >= 0.2, "relative feature gap {gap}");
}

#[test]
fn noise_only_frames_keep_the_feature_stable() {
    let sys = SystemConfig { j: 0, ..SystemConfig::default() };
    let cfg = DetectorConfig::default();
    let mut cs = Vec::new();
    for trial in 0..20 {
        let mut rngs = TrialRngs::new(7, trial);
        let spreading = SpreadingMatrix::generate(sys.n, sys.k, sys.spreading, &mut rngs.spreading);
        let topo = Topology::draw(&sys, &spreading, &mut rngs.topology).unwrap();
        let silent = ActivityMatrix::zeros(sys.k, sys.ts);
        let mut prev = None;
        for l in 0..sys.l {
            let f = synthesize_normal_frame(&sys, &spreading, &silent, &topo, &mut rngs, l).unwrap();
            let tau = extract_feature(&f, &cfg).unwrap().tau;
            if let Some(p) = prev {
                cs.push(change_metric(tau, p));
            }
            prev = Some(tau);
        }
    }
    let frac = cs.iter().filter(|&&c| c >= 0.95).count() as f64 / cs.len() as f64;
    assert!(frac >= 0.9, "only {frac} of noise-only frames have c >= 0.95");
}

//! Fit a low-rank-plus-diagonal covariance to a sample second moment.
use jsts::fa::{dc_solve, p1_objective, reconstruct_covariance, FaProblem, SecondMoment};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> jsts::Result<()> {
    // 40 samples of a 12-dimensional signal: one common factor on the first
    // eight coordinates plus independent noise, strong on the last four.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (samples, d) = (40, 12);
    let common: Vec<f64> = (0..samples).map(|_| StandardNormal.sample(&mut rng)).collect();
    let obs = DMatrix::from_fn(samples, d, |t, i| {
        let noise: f64 = StandardNormal.sample(&mut rng);
        if i < 8 {
            2.0 * common[t] + 0.1 * noise
        } else {
            noise
        }
    });

    let moment = SecondMoment::from_factor(obs / (samples as f64).sqrt());
    let problem = FaProblem::new(moment.clone(), 1, 0.05)?;
    let sol = dc_solve(&problem, None)?;

    println!("iterations {} converged {}", sol.iterations, sol.converged);
    println!("objective {:.4} -> {:.4}", sol.objective_trace[0], sol.objective_trace.last().unwrap());
    println!("unique variances: {:.3?}", sol.gamma.map(|g| 1.0 / g).as_slice());
    println!("tau = {} of {d} coordinates above the floor", sol.tau);

    let rec = reconstruct_covariance(&sol.gamma, &moment, 1)?;
    println!("objective at the reconstructed covariance {:.4}", p1_objective(&rec.sigma, moment.matrix())?);
    Ok(())
}

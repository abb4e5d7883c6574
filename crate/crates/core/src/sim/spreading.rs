use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::config::SpreadingKind;

/// Real `N x K` matrix whose column `k` is device `k`'s spreading sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingMatrix {
    pub s: DMatrix<f64>,
    pub generator: SpreadingKind,
}

impl SpreadingMatrix {
    pub fn generate<R: Rng + ?Sized>(n: usize, k: usize, kind: SpreadingKind, rng: &mut R) -> Self {
        let s = match kind {
            SpreadingKind::Gaussian => DMatrix::from_fn(n, k, |_, _| rng.sample::<f64, _>(StandardNormal)),
            SpreadingKind::Hadamard => {
                // Columns of the Sylvester Hadamard matrix of the next power-of-two order,
                // truncated to the first N rows.
                let order = n.next_power_of_two();
                let picks: Vec<usize> = (0..k).map(|_| rng.random_range(0..order)).collect();
                DMatrix::from_fn(n, k, |row, col| sylvester_entry(row, picks[col]))
            }
        };
        Self { s, generator: kind }
    }

    pub fn chips(&self) -> usize {
        self.s.nrows()
    }

    pub fn devices(&self) -> usize {
        self.s.ncols()
    }
}

fn sylvester_entry(row: usize, col: usize) -> f64 {
    if (row & col).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

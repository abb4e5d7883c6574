use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Symmetric positive semidefinite `d x d` matrix, optionally carried with a
/// factor `F` (`R = F^T F`) so that scaled spectra can be taken from the small
/// Gram matrix `F Gamma F^T` when `F` has few rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondMoment {
    matrix: DMatrix<f64>,
    factor: Option<DMatrix<f64>>,
}

impl SecondMoment {
    pub fn dense(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                context: "second-moment matrix",
                expected: "square".into(),
                got: format!("{} x {}", matrix.nrows(), matrix.ncols()),
            });
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("second-moment matrix has non-finite entries".into()));
        }
        let scale = matrix.amax();
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::Domain(format!(
                "second-moment matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(Self { matrix, factor: None })
    }

    /// `R = F^T F`.
    pub fn from_factor(factor: DMatrix<f64>) -> Self {
        let matrix = factor.tr_mul(&factor);
        Self {
            matrix,
            factor: Some(factor),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn factor(&self) -> Option<&DMatrix<f64>> {
        self.factor.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn diagonal(&self) -> DVector<f64> {
        self.matrix.diagonal()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

impl TryFrom<DMatrix<f64>> for SecondMoment {
    type Error = Error;

    fn try_from(m: DMatrix<f64>) -> Result<Self> {
        Self::dense(m)
    }
}

/// How the top eigenpairs of `Gamma^1/2 R Gamma^1/2` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenRoute {
    /// Gram route when a factor with fewer rows than `d` is available, dense otherwise.
    #[default]
    Auto,
    /// Full symmetric eigendecomposition of the `d x d` matrix.
    Dense,
    /// Eigendecomposition of the `m x m` Gram matrix of the scaled factor
    /// (equivalent to a thin SVD of `F Gamma^1/2`).
    Gram,
}

/// `max(1, round(d / 10))`.
pub fn default_rank(d: usize) -> usize {
    ((d as f64 / 10.0).round() as usize).max(1)
}

#[derive(Debug, Clone)]
pub struct FaProblem {
    pub moment: SecondMoment,
    /// Rank bound on the common part.
    pub rank: usize,
    /// Lower bound on each unique variance.
    pub eps_floor: f64,
    /// Relative stopping tolerance on `||gamma_next - gamma|| / ||gamma||`.
    pub eps_stop: f64,
    pub max_iter: usize,
    pub route: EigenRoute,
}

impl FaProblem {
    pub const DEFAULT_EPS_STOP: f64 = 1e-3;
    pub const DEFAULT_MAX_ITER: usize = 500;
    pub const DEFAULT_EPS_FLOOR: f64 = 1e-2;

    pub fn new(moment: SecondMoment, rank: usize, eps_floor: f64) -> Result<Self> {
        let p = Self {
            moment,
            rank,
            eps_floor,
            eps_stop: Self::DEFAULT_EPS_STOP,
            max_iter: Self::DEFAULT_MAX_ITER,
            route: EigenRoute::Auto,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_stop(mut self, eps_stop: f64, max_iter: usize) -> Result<Self> {
        self.eps_stop = eps_stop;
        self.max_iter = max_iter;
        self.validate()?;
        Ok(self)
    }

    pub fn with_route(mut self, route: EigenRoute) -> Self {
        self.route = route;
        self
    }

    pub fn dim(&self) -> usize {
        self.moment.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.moment.dim();
        if self.rank < 1 || self.rank >= d {
            return Err(Error::range("r", format!("requires 1 <= r < d, got r={} d={d}", self.rank)));
        }
        if !(self.eps_floor > 0.0 && self.eps_floor.is_finite()) {
            return Err(Error::range("eps_floor", format!("requires eps_floor > 0, got {}", self.eps_floor)));
        }
        if !(self.eps_stop > 0.0) {
            return Err(Error::range("eps_stop", format!("requires eps_stop > 0, got {}", self.eps_stop)));
        }
        if self.max_iter == 0 {
            return Err(Error::range("max_iter", "requires max_iter >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaSolution {
    /// Inverse unique variances, `0 < gamma_i <= 1 / eps_floor`.
    pub gamma: DVector<f64>,
    /// Coordinates whose unique variance stays strictly above the floor.
    pub tau: usize,
    /// Objective at the initial point followed by one value per iteration.
    pub objective_trace: Vec<f64>,
    /// `||gamma_(m+1) - gamma_m||_2` per iteration.
    pub step_norms: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Coordinate updates that hit a non-positive step denominator and were saturated.
    pub degenerate_updates: usize,
    pub eps_floor: f64,
}

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stochastic::path::{brownian_path, DyadicPath};

/// Sample statistics over Monte Carlo paths.
#[derive(Clone, Debug, PartialEq)]
pub struct PathStatistics {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (`M − 1` denominator); zero when `M = 1`.
    pub variance: f64,
    pub std_error: f64,
    /// Per-path values in path-id order, when retained.
    pub values: Option<Vec<f64>>,
}

impl PathStatistics {
    /// Statistics of `values`, accumulated in slice order.
    pub fn from_values(values: Vec<f64>, retain: bool) -> Result<Self> {
        let m = values.len();
        if m == 0 {
            return Err(Error::InvalidArgument("need at least one sample".into()));
        }
        let mean = values.iter().sum::<f64>() / m as f64;
        let variance = if m > 1 {
            values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64
        } else {
            0.0
        };
        Ok(PathStatistics {
            count: m,
            mean,
            variance,
            std_error: (variance / m as f64).sqrt(),
            values: retain.then_some(values),
        })
    }
}

/// Monte Carlo over Brownian paths `1..=paths`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarlo {
    pub paths: u64,
    pub horizon: f64,
    pub level: u32,
    pub master_seed: u64,
    pub retain_values: bool,
}

impl MonteCarlo {
    pub fn new(paths: u64, horizon: f64, level: u32, master_seed: u64) -> Self {
        MonteCarlo {
            paths,
            horizon,
            level,
            master_seed,
            retain_values: false,
        }
    }

    pub fn retaining_values(mut self, retain: bool) -> Self {
        self.retain_values = retain;
        self
    }

    /// Per-path estimator values in path-id order. Paths are generated and
    /// evaluated in parallel; if several fail, the lowest id is reported.
    pub fn values<E>(&self, estimator: E) -> Result<Vec<f64>>
    where
        E: Fn(&DyadicPath) -> Result<f64> + Sync,
    {
        self.map(estimator)
    }

    /// Like [`MonteCarlo::values`] for estimators returning any per-path value.
    pub fn map<T, E>(&self, estimator: E) -> Result<Vec<T>>
    where
        T: Send,
        E: Fn(&DyadicPath) -> Result<T> + Sync,
    {
        if self.paths == 0 {
            return Err(Error::InvalidArgument("need at least one path".into()));
        }
        let outcomes: Vec<Result<T>> = (1..=self.paths)
            .into_par_iter()
            .map(|id| {
                brownian_path(self.master_seed, id, self.horizon, self.level)
                    .and_then(|p| estimator(&p))
                    .map_err(|e| Error::PathFailed {
                        path_id: id,
                        source: Box::new(e),
                    })
            })
            .collect();
        outcomes.into_iter().collect()
    }

    pub fn run<E>(&self, estimator: E) -> Result<PathStatistics>
    where
        E: Fn(&DyadicPath) -> Result<f64> + Sync,
    {
        PathStatistics::from_values(self.values(estimator)?, self.retain_values)
    }
}

/// Applies `estimator` to Brownian paths `1..=paths` on `[0, t]` at `level`.
pub fn mc_run<E>(estimator: E, paths: u64, t: f64, level: u32, master_seed: u64) -> Result<PathStatistics>
where
    E: Fn(&DyadicPath) -> Result<f64> + Sync,
{
    MonteCarlo::new(paths, t, level, master_seed).run(estimator)
}

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::stochastic::rng::GaussianStream;

/// Finest level a path may reach (2³⁰ + 1 values).
pub const MAX_PATH_LEVEL: u32 = 30;

#[derive(Clone)]
pub enum PathSource {
    /// Brownian motion keyed by `(master seed, path id)`.
    Brownian { master_seed: u64, path_id: u64 },
    /// Samples of a deterministic function; refinement samples it again.
    Function {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for PathSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathSource::Brownian {
                master_seed,
                path_id,
            } => write!(f, "Brownian(seed={master_seed}, id={path_id})"),
            PathSource::Function { name, .. } => write!(f, "Function({name})"),
        }
    }
}

/// A sample path on the dyadic grid `j·t/2^L`, `j = 0..=2^L`.
#[derive(Clone, Debug)]
pub struct DyadicPath {
    horizon: f64,
    level: u32,
    values: Vec<f64>,
    source: PathSource,
}

fn check_shape(horizon: f64, level: u32) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    if level > MAX_PATH_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "level {level} exceeds {MAX_PATH_LEVEL}"
        )));
    }
    Ok(())
}

impl DyadicPath {
    /// Samples `f` on the level-`level` grid of `[0, horizon]`.
    pub fn from_fn(
        name: impl Into<String>,
        horizon: f64,
        level: u32,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_shape(horizon, level)?;
        let f: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(f);
        let n = 1usize << level;
        let values = (0..=n).map(|j| f(grid_time(horizon, level, j))).collect();
        Ok(DyadicPath {
            horizon,
            level,
            values,
            source: PathSource::Function {
                name: name.into(),
                f,
            },
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> &PathSource {
        &self.source
    }

    /// `x(0)`.
    pub fn origin(&self) -> f64 {
        self.values[0]
    }

    /// `x(t)`.
    pub fn end(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn time(&self, j: usize) -> f64 {
        grid_time(self.horizon, self.level, j)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Shifts the whole path so that `x(0) = origin`.
    pub fn with_origin(mut self, origin: f64) -> Self {
        let shift = origin - self.values[0];
        self.values.iter_mut().for_each(|x| *x += shift);
        self.values[0] = origin;
        self
    }

    /// Values on the coarser level-`level` grid.
    pub fn grid_values(&self, level: u32) -> Result<Vec<f64>> {
        let stride = self.stride(level)?;
        Ok(self.values.iter().step_by(stride).copied().collect())
    }

    /// The same path viewed at a coarser level.
    pub fn restrict(&self, level: u32) -> Result<DyadicPath> {
        Ok(DyadicPath {
            horizon: self.horizon,
            level,
            values: self.grid_values(level)?,
            source: self.source.clone(),
        })
    }

    pub(crate) fn stride(&self, level: u32) -> Result<usize> {
        if level > self.level {
            return Err(Error::InsufficientLevel {
                have: self.level,
                need: level,
            });
        }
        Ok(1usize << (self.level - level))
    }

    /// Piecewise-linear interpolation of the grid values at `s ∈ [0, t]`.
    pub fn value_at(&self, s: f64) -> f64 {
        let n = self.values.len() - 1;
        let pos = (s / self.horizon * n as f64).clamp(0.0, n as f64);
        let j = (pos.floor() as usize).min(n - 1);
        let frac = pos - j as f64;
        if frac == 0.0 {
            return self.values[j];
        }
        self.values[j] + frac * (self.values[j + 1] - self.values[j])
    }
}

fn grid_time(horizon: f64, level: u32, j: usize) -> f64 {
    horizon * j as f64 / (1u64 << level) as f64
}

/// Brownian path with `x(0) = 0` on the level-`level` grid of `[0, t]`.
///
/// Built top-down: `x(t) = √t·Z₀`, then every level fills cell midpoints by
/// the bridge rule of [`refine_path`]. Draw `k` of the path's stream is used
/// by node `k` in breadth-first order, so `brownian_path(.., L + 1)` equals
/// `refine_path(&brownian_path(.., L))` bit for bit.
pub fn brownian_path(master_seed: u64, path_id: u64, t: f64, level: u32) -> Result<DyadicPath> {
    check_shape(t, level)?;
    let mut stream = GaussianStream::new(master_seed, path_id);
    let mut values = vec![0.0, t.sqrt() * stream.next_standard()];
    for l in 0..level {
        values = bridge(&values, t, l, &mut stream);
    }
    Ok(DyadicPath {
        horizon: t,
        level,
        values,
        source: PathSource::Brownian {
            master_seed,
            path_id,
        },
    })
}

/// One level finer, keeping every existing value.
///
/// Brownian midpoints are `½(x(u) + x(v)) + ξ` with `ξ ~ N(0, (v − u)/4)`
/// from the path's own stream; function paths are sampled again.
pub fn refine_path(p: &DyadicPath) -> Result<DyadicPath> {
    check_shape(p.horizon, p.level + 1)?;
    let values = match &p.source {
        PathSource::Brownian {
            master_seed,
            path_id,
        } => {
            let mut stream = GaussianStream::new(*master_seed, *path_id);
            stream.seek(1u64 << p.level);
            bridge(&p.values, p.horizon, p.level, &mut stream)
        }
        PathSource::Function { f, .. } => {
            let n = 1usize << (p.level + 1);
            (0..=n)
                .map(|j| {
                    if j % 2 == 0 {
                        p.values[j / 2]
                    } else {
                        f(grid_time(p.horizon, p.level + 1, j))
                    }
                })
                .collect()
        }
    };
    Ok(DyadicPath {
        horizon: p.horizon,
        level: p.level + 1,
        values,
        source: p.source.clone(),
    })
}

fn bridge(values: &[f64], t: f64, level: u32, stream: &mut GaussianStream) -> Vec<f64> {
    let width = t / (1u64 << level) as f64;
    let sd = (width / 4.0).sqrt();
    let mut out = Vec::with_capacity(2 * values.len() - 1);
    out.push(values[0]);
    for w in values.windows(2) {
        out.push(0.5 * (w[0] + w[1]) + sd * stream.next_standard());
        out.push(w[1]);
    }
    out
}

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

impl MeanEstimate {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::Invalid("mean of an empty sample".into()));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            f64::NAN
        };
        Ok(Self { mean, std_error, count: n })
    }

    /// |mean - value| in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value).abs() / self.std_error
    }
}

/// Piecewise-linear CDF on an ascending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedCdf {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::Dimension(format!("cdf table with {} nodes and {} values", grid.len(), values.len())));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid("cdf grid must be strictly ascending".into()));
        }
        Ok(Self { grid, values })
    }

    /// Integrates `pdf` cell by cell with Gauss-Kronrod, starting from `start_value` at grid[0].
    pub fn from_pdf<F: FnMut(f64) -> Result<f64>>(
        mut pdf: F,
        grid: Vec<f64>,
        start_value: f64,
        spec: &super::QuadratureSpec,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        let mut acc = start_value;
        values.push(acc);
        for w in grid.windows(2) {
            let guard = Guard::default();
            let r = super::integrate_1d(|x| guard.eval(pdf(x)), w[0], w[1], spec);
            acc += guard.finish(r)?.value;
            values.push(acc);
        }
        Self::new(grid, values)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g[0] {
            return self.values[0];
        }
        if x >= g[g.len() - 1] {
            return self.values[g.len() - 1];
        }
        let i = g.partition_point(|&v| v <= x) - 1;
        let t = (x - g[i]) / (g[i + 1] - g[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

/// Collects the first error raised inside a quadrature integrand.
#[derive(Default)]
pub(crate) struct Guard {
    err: RefCell<Option<Error>>,
}

impl Guard {
    pub(crate) fn eval(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    pub(crate) fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.err.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

//! Nearest-neighbour spacings of unitary spectra and the laws they are compared against.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::numerics::{
    erfc, integrate_1d, integrate_1d_sqrt_start, integrate_semi_infinite, Guard, QuadratureSpec, TabulatedCdf,
};
use crate::rmt::MatrixElementLaw;
use crate::{Error, Result};

/// Circular spacings s = Δφ/D of one spectrum, D = 2π/N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingSample {
    pub spacings: Vec<f64>,
    pub mean_spacing: f64,
}

impl SpacingSample {
    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }
}

/// Consecutive gaps of sorted phases in [0, 2π), including the wrap-around gap.
pub fn spacings_from_phases(phases: &[f64]) -> Result<SpacingSample> {
    let n = phases.len();
    if n == 0 {
        return Err(Error::Invalid("empty spectrum".into()));
    }
    if phases.iter().any(|p| !(0.0..TAU).contains(p)) {
        return Err(Error::Invalid("phases must lie in [0, 2π)".into()));
    }
    if phases.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid("phases must be sorted".into()));
    }
    let d = TAU / n as f64;
    let mut spacings: Vec<f64> = phases.windows(2).map(|w| (w[1] - w[0]) / d).collect();
    spacings.push((TAU - phases[n - 1] + phases[0]) / d);
    Ok(SpacingSample { spacings, mean_spacing: d })
}

/// Concatenates spacings of several spectra in the given order.
pub fn pool_spacings(samples: &[SpacingSample]) -> Vec<f64> {
    samples.iter().flat_map(|s| s.spacings.iter().copied()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Probability density per bin, normalized over the in-range samples.
    pub density: Vec<f64>,
    /// Samples inside [edges[0], edges[last]].
    pub count: u64,
    /// Samples outside the binned range.
    pub outside: u64,
}

impl Histogram {
    fn from_counts(edges: Vec<f64>, counts: Vec<u64>, outside: u64) -> Self {
        let count: u64 = counts.iter().sum();
        let density = counts
            .iter()
            .zip(edges.windows(2))
            .map(|(&c, w)| if count == 0 { 0.0 } else { c as f64 / (count as f64 * (w[1] - w[0])) })
            .collect();
        Self { edges, counts, density, count, outside }
    }

    /// Adds the counts of another histogram with identical edges.
    pub fn merge(&self, other: &Histogram) -> Result<Histogram> {
        if self.edges != other.edges {
            return Err(Error::Invalid("histograms have different edges".into()));
        }
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        Ok(Self::from_counts(self.edges.clone(), counts, self.outside + other.outside))
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
    if bins == 0 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Invalid(format!("bad histogram range [{lo}, {hi}] with {bins} bins")));
    }
    let w = (hi - lo) / bins as f64;
    Ok((0..=bins).map(|i| if i == bins { hi } else { lo + i as f64 * w }).collect())
}

/// Bins are half-open [e_i, e_{i+1}) except the last, which includes its right edge.
pub fn histogram(sample: &[f64], edges: &[f64]) -> Result<Histogram> {
    if sample.is_empty() {
        return Err(Error::Invalid("histogram of an empty sample".into()));
    }
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("histogram edges must be strictly ascending".into()));
    }
    let last = edges[edges.len() - 1];
    let mut counts = vec![0u64; edges.len() - 1];
    let mut outside = 0;
    for &x in sample {
        if !(x >= edges[0] && x <= last) {
            outside += 1;
            continue;
        }
        let i = (edges.partition_point(|&e| e <= x) - 1).min(counts.len() - 1);
        counts[i] += 1;
    }
    Ok(Histogram::from_counts(edges.to_vec(), counts, outside))
}

/// Sup distance between the empirical CDF of `sample` and `cdf`.
pub fn ks_distance<F: FnMut(f64) -> f64>(sample: &[f64], mut cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Invalid("KS distance of an empty sample".into()));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Invalid("KS distance of an empty sample".into()));
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Reference spacing distributions at unit mean spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ReferenceLaw {
    Poisson,
    WignerCoe,
    /// Superposition of `n1` independent COE spectra.
    N1Coe {
        n1: u32,
    },
    /// Distance to the closer of the two neighbours of a Poisson level.
    CloserNeighbor,
}

impl ReferenceLaw {
    fn check(self, s: f64) -> Result<()> {
        if !(s >= 0.0) {
            return Err(Error::domain("reference_pdf", format!("requires s >= 0, got {s}")));
        }
        if let ReferenceLaw::N1Coe { n1: 0 } = self {
            return Err(Error::domain("reference_pdf", "n1 must be at least 1"));
        }
        Ok(())
    }

    pub fn pdf(self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(match self {
            Self::Poisson => (-s).exp(),
            Self::WignerCoe => 0.5 * PI * s * (-0.25 * PI * s * s).exp(),
            Self::CloserNeighbor => 2.0 * (-2.0 * s).exp(),
            Self::N1Coe { n1 } => {
                let n = n1 as f64;
                let t1 = erfc(PI.sqrt() * s / (2.0 * n));
                let t2 = (-PI * s * s / (4.0 * n * n)).exp();
                let head = if n1 == 1 { 0.0 } else { (n - 1.0) * t1.powi(n1 as i32 - 2) * t2 * t2 / n };
                head + t1.powi(n1 as i32 - 1) * t2 * PI * s / (2.0 * n * n)
            }
        })
    }

    pub fn cdf(self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(match self {
            Self::Poisson => -(-s).exp_m1(),
            Self::WignerCoe => -(-0.25 * PI * s * s).exp_m1(),
            Self::CloserNeighbor => -(-2.0 * s).exp_m1(),
            Self::N1Coe { n1 } => {
                let n = n1 as f64;
                let t1 = erfc(PI.sqrt() * s / (2.0 * n));
                let t2 = (-PI * s * s / (4.0 * n * n)).exp();
                1.0 - t1.powi(n1 as i32 - 1) * t2
            }
        })
    }
}

pub fn reference_pdf(law: ReferenceLaw, s: f64) -> Result<f64> {
    law.pdf(s)
}

pub fn reference_cdf(law: ReferenceLaw, s: f64) -> Result<f64> {
    law.cdf(s)
}

/// Regularized perturbative spacing law for weakly coupled Poisson spectra.
///
/// The unperturbed spacing s0 is exponential and the coupling shifts it to
/// sqrt(s0² + 4Λω) with ω drawn from `law`. The result is rescaled to unit mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeSpacing {
    lambda: f64,
    law: MatrixElementLaw,
    mean: f64,
    spec: QuadratureSpec,
}

impl PerturbativeSpacing {
    pub fn new(lambda: f64, law: MatrixElementLaw) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain("perturbative_spacing_pdf", format!("requires Λ > 0, got {lambda}")));
        }
        let spec = QuadratureSpec { relative_tolerance: 1e-10, absolute_tolerance: 1e-14, max_subdivisions: 4000 };
        let mut p = Self { lambda, law, mean: 1.0, spec };
        p.mean = p.raw_moment(1)?;
        Ok(p)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn law(&self) -> MatrixElementLaw {
        self.law
    }

    /// Mean of the unrescaled distribution.
    pub fn raw_mean(&self) -> f64 {
        self.mean
    }

    /// Density before rescaling.
    pub fn raw_pdf(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::domain("perturbative_spacing_pdf", format!("requires s >= 0, got {s}")));
        }
        if s == 0.0 || s.is_infinite() {
            return Ok(0.0);
        }
        let w_max = s * s / (4.0 * self.lambda);
        let pref = s * s / (2.0 * self.lambda);
        // w = 1 - s0/s runs over [0, 1]; ω = w_max·w(2 - w)
        let to_w = |omega: f64| {
            let r = (omega / w_max).min(1.0);
            r / (1.0 + (1.0 - r).sqrt())
        };
        let mut cuts = vec![0.0];
        cuts.extend([1.0, 10.0, 100.0, 1000.0].into_iter().filter(|&b| b < w_max).map(to_w));
        cuts.push(1.0);
        let guard = Guard::default();
        let mut f = |w: f64| {
            let omega = w_max * w * (2.0 - w);
            if omega <= 0.0 {
                return 0.0;
            }
            guard.eval(self.law.density(omega)) * (-s * (1.0 - w)).exp() * pref
        };
        let mut total = 0.0;
        for (i, c) in cuts.windows(2).enumerate() {
            let r = if i == 0 {
                integrate_1d_sqrt_start(&mut f, c[0], c[1], &self.spec)
            } else {
                integrate_1d(&mut f, c[0], c[1], &self.spec)
            };
            total += r?.value;
        }
        guard.finish(Ok(total))
    }

    fn raw_moment(&self, k: i32) -> Result<f64> {
        let guard = Guard::default();
        let mut f = |s: f64| guard.eval(self.raw_pdf(s)) * s.powi(k);
        let knee = 4.0 * self.lambda.sqrt();
        let mut total = 0.0;
        let mut start = 0.0;
        let outer = QuadratureSpec { relative_tolerance: 1e-9, ..self.spec };
        for stop in [knee, 1.0, 8.0] {
            if stop > start {
                total += integrate_1d(&mut f, start, stop, &outer)?.value;
                start = stop;
            }
        }
        total += integrate_semi_infinite(&mut f, start, &outer)?.value;
        guard.finish(Ok(total))
    }

    /// Norm of the rescaled density, computed by quadrature.
    pub fn norm(&self) -> Result<f64> {
        self.raw_moment(0)
    }

    /// Unit-mean density.
    pub fn pdf(&self, s: f64) -> Result<f64> {
        Ok(self.mean * self.raw_pdf(self.mean * s)?)
    }

    /// CDF of the unit-mean density tabulated on [0, s_max] with `cells` cells.
    pub fn cdf_table(&self, s_max: f64, cells: usize) -> Result<TabulatedCdf> {
        let grid: Vec<f64> = (0..=cells).map(|i| s_max * i as f64 / cells as f64).collect();
        let spec = QuadratureSpec { relative_tolerance: 1e-9, absolute_tolerance: 1e-13, ..self.spec };
        TabulatedCdf::from_pdf(|s| self.pdf(s), grid, 0.0, &spec)
    }
}

/// Unit-mean perturbative spacing density on a grid.
pub fn perturbative_spacing_pdf(lambda: f64, law: MatrixElementLaw, s_grid: &[f64]) -> Result<Vec<f64>> {
    let p = PerturbativeSpacing::new(lambda, law)?;
    s_grid.iter().map(|&s| p.pdf(s)).collect()
}

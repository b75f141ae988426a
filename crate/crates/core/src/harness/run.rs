use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{EnsembleSystem, ExperimentConfig, ExperimentKind, SystemConfig, TopsSystem};
use crate::coupled_tops::{
    epsilon_for_lambda, floquet_spectrum, lambda_for_spins, lambda_max_tops, realization_params, LambdaMethod,
};
use crate::entanglement::{
    eigenstate_averages, eigenstate_schmidt_spectra, marcenko_pastur_cdf, predicted_entropy, predicted_lambda12,
    rescaled_schmidt_values, saturation_entropy, EntropyRegime, SchmidtSpectrum,
};
use crate::linalg::SpectralDecomposition;
use crate::numerics::{MeanEstimate, RngStream};
use crate::rmt::{
    collect_omega_samples, coupling_diagonal, lambda_ensemble_closed_form, lambda_general, lambda_max,
    monte_carlo_lambda, MatrixElementLaw, PairSelection,
};
use crate::spectral_stats::{
    histogram, ks_distance, pool_spacings, spacings_from_phases, uniform_edges, Histogram, PerturbativeSpacing,
    ReferenceLaw,
};
use crate::{Error, Result, C64};

/// Largest Λ for which the perturbative spacing law is evaluated in spacing runs.
const PERTURBATIVE_SPACING_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub name: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub epsilon: f64,
    pub observables: Vec<Observable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
}

impl GridPoint {
    pub fn get(&self, name: &str) -> Option<&Observable> {
        self.observables.iter().find(|o| o.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub config: ExperimentConfig,
    pub points: Vec<GridPoint>,
    pub notes: Vec<String>,
    pub wall_time_seconds: f64,
    pub library_version: String,
    pub seed: u64,
}

struct Collector(Vec<Observable>);

impl Collector {
    fn push(&mut self, name: impl Into<String>, value: f64) {
        self.0.push(Observable { name: name.into(), value, std_error: None });
    }

    fn push_mean(&mut self, name: impl Into<String>, m: &MeanEstimate) {
        let se = m.std_error.is_finite().then_some(m.std_error);
        self.0.push(Observable { name: name.into(), value: m.mean, std_error: se });
    }
}

fn alpha_label(a: f64) -> String {
    if a.fract() == 0.0 {
        format!("{}", a as i64)
    } else {
        format!("{a}")
    }
}

/// Runs the configured pipeline over every grid point.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultRecord> {
    let config = config.resolved();
    config.validate()?;
    let start = Instant::now();
    let (grid, is_lambda) = config.grid()?;
    let mut notes = Vec::new();
    let mut points = Vec::with_capacity(grid.len());
    for (index, &g) in grid.iter().enumerate() {
        let params = format!("grid point {index} ({} = {g})", if is_lambda { "lambda" } else { "epsilon" });
        let point = match config.system {
            SystemConfig::Tops(t) => run_tops_point(&config, &t, index, g, is_lambda),
            SystemConfig::Ensemble(e) => run_ensemble_point(&config, &e, index, g),
        }
        .map_err(|e| match e {
            Error::Stage { .. } => e,
            other => other.in_stage("measure", params.clone()),
        })?;
        points.push(point);
    }
    if matches!(config.system, SystemConfig::Tops(_))
        && config.realizations > 1
        && config.kind != ExperimentKind::LambdaScan
    {
        notes.push(format!(
            "pooled {} spectra per grid point; realization r shifts alpha1 and alpha2 by 0.1*r",
            config.realizations
        ));
    }
    Ok(ResultRecord {
        seed: config.base_seed,
        config,
        points,
        notes,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        library_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn tops_spectra(config: &ExperimentConfig, t: &TopsSystem, epsilon: f64) -> Result<Vec<SpectralDecomposition>> {
    let base = t.params(epsilon)?;
    (0..config.realizations)
        .into_par_iter()
        .map(|r| {
            floquet_spectrum(&realization_params(&base, r))
                .map_err(|e| e.in_stage("diagonalize", format!("epsilon = {epsilon}, realization {r}")))
        })
        .collect()
}

fn bins(config: &ExperimentConfig) -> Result<Vec<f64>> {
    let b = config.bins.ok_or_else(|| Error::Config("bins required".into()))?;
    uniform_edges(b.lo, b.hi, b.count)
}

fn run_tops_point(
    config: &ExperimentConfig,
    t: &TopsSystem,
    index: usize,
    g: f64,
    is_lambda: bool,
) -> Result<GridPoint> {
    let (n1, n2) = t.dims();
    let (lambda, epsilon) = if is_lambda {
        let eps =
            epsilon_for_lambda(t.j1, t.j2, g).map_err(|e| e.in_stage("solve_epsilon", format!("lambda = {g}")))?;
        (g, eps)
    } else {
        (lambda_for_spins(t.j1, t.j2, g, LambdaMethod::ExactSum).lambda, g)
    };
    let mut obs = Collector(Vec::new());
    obs.push("lambda", lambda);
    let mut hist = None;
    let law = MatrixElementLaw::BesselCoe;
    match config.kind {
        ExperimentKind::LambdaScan => {
            obs.push("lambda_exact", lambda_for_spins(t.j1, t.j2, epsilon, LambdaMethod::ExactSum).lambda);
            obs.push("lambda_asymptotic", lambda_for_spins(t.j1, t.j2, epsilon, LambdaMethod::Asymptotic).lambda);
            obs.push("lambda_max", lambda_max_tops(t.j1, t.j2));
        }
        ExperimentKind::Spacing => {
            let spectra = tops_spectra(config, t, epsilon)?;
            let samples = spectra.iter().map(|d| spacings_from_phases(&d.phases)).collect::<Result<Vec<_>>>()?;
            let s = pool_spacings(&samples);
            obs.push("samples", s.len() as f64);
            obs.push("ks_poisson", ks_distance(&s, |x| ReferenceLaw::Poisson.cdf(x).unwrap_or(1.0))?);
            obs.push("ks_wigner", ks_distance(&s, |x| ReferenceLaw::WignerCoe.cdf(x).unwrap_or(1.0))?);
            let n1coe = ReferenceLaw::N1Coe { n1: n1.min(n2) as u32 };
            obs.push("ks_n1coe", ks_distance(&s, |x| n1coe.cdf(x).unwrap_or(1.0))?);
            if lambda > 0.0 && lambda <= PERTURBATIVE_SPACING_LIMIT {
                let p = PerturbativeSpacing::new(lambda, law)?;
                let table = p.cdf_table(20.0, 4000)?;
                obs.push("ks_perturbative", ks_distance(&s, |x| table.eval(x))?);
            }
            hist = Some(histogram(&s, &bins(config)?)?);
        }
        ExperimentKind::Entanglement => {
            let spectra = tops_spectra(config, t, epsilon)?;
            let sp = schmidt_all(&spectra, n1, n2)?;
            let avg = eigenstate_averages(&sp, &config.alphas, 4.min(n1.min(n2)))?;
            for (i, m) in avg.lambda.iter().enumerate() {
                obs.push_mean(format!("lambda_{}", i + 1), m);
            }
            let (p1, p2) = predicted_lambda12(lambda, law)?;
            obs.push("pred_lambda_1", p1);
            obs.push("pred_lambda_2", p2);
            for (a, m) in config.alphas.iter().zip(&avg.entropy) {
                let label = alpha_label(*a);
                obs.push_mean(format!("s_{label}"), m);
                if let Ok(s_inf) = saturation_entropy(*a, n1.min(n2), n1.max(n2)) {
                    obs.push(format!("s_{label}_inf"), s_inf);
                    obs.push(format!("s_{label}_ratio"), m.mean / s_inf);
                    let pred = predicted_entropy(*a, lambda, EntropyRegime::Recursive, n1.min(n2), n1.max(n2), law)?;
                    obs.push(format!("pred_s_{label}_recursive"), pred);
                }
            }
        }
        ExperimentKind::SchmidtDistribution => {
            let spectra = tops_spectra(config, t, epsilon)?;
            let sp = schmidt_all(&spectra, n1, n2)?;
            let small = n1.min(n2);
            let x = rescaled_schmidt_values(&sp, small);
            let q = n1.max(n2) as f64 / small as f64;
            obs.push("samples", x.len() as f64);
            obs.push("mean_x", x.iter().sum::<f64>() / x.len() as f64);
            obs.push("ks_marcenko_pastur", ks_distance(&x, |v| marcenko_pastur_cdf(q, v).unwrap_or(1.0))?);
            hist = Some(histogram(&x, &bins(config)?)?);
        }
        ExperimentKind::OmegaDistribution | ExperimentKind::RmtValidation => {
            return Err(Error::Config(format!("{:?} needs an ensemble system", config.kind)));
        }
    }
    Ok(GridPoint { index, lambda: Some(lambda), epsilon, observables: obs.0, histogram: hist })
}

fn schmidt_all(spectra: &[SpectralDecomposition], n1: usize, n2: usize) -> Result<Vec<SchmidtSpectrum>> {
    let mut out = Vec::new();
    for d in spectra {
        out.extend(eigenstate_schmidt_spectra(d, n1, n2).map_err(|e| e.in_stage("schmidt", format!("{n1}x{n2}")))?);
    }
    Ok(out)
}

fn run_ensemble_point(config: &ExperimentConfig, e: &EnsembleSystem, index: usize, epsilon: f64) -> Result<GridPoint> {
    let spec = e.spec(epsilon, config.realizations, config.base_seed);
    let mut obs = Collector(Vec::new());
    let mut hist = None;
    let closed = lambda_ensemble_closed_form(&spec)?;
    obs.push("lambda_closed_form", closed);
    match config.kind {
        ExperimentKind::LambdaScan => {
            obs.push("lambda_max", lambda_max(e.symmetry, e.n1, e.n2));
        }
        ExperimentKind::OmegaDistribution => {
            let w = collect_omega_samples(&spec, PairSelection::Random { count: config.omega_pairs })
                .map_err(|err| err.in_stage("omega_samples", format!("epsilon = {epsilon}")))?;
            let law = MatrixElementLaw::for_ensemble(e.symmetry, e.coupling);
            obs.push("samples", w.len() as f64);
            obs.push_mean("mean_omega", &MeanEstimate::from_samples(&w)?);
            obs.push("ks_law", ks_distance(&w, |x| law.cdf(x).unwrap_or(1.0))?);
            hist = Some(histogram(&w, &bins(config)?)?);
        }
        ExperimentKind::RmtValidation => {
            if config.realizations < 2 {
                return Err(Error::Config("rmt_validation needs at least two realizations".into()));
            }
            let v = coupling_diagonal(&spec, RngStream::new(config.base_seed, u64::MAX))?;
            let u12: Vec<C64> = v.iter().map(|&x| C64::from_polar(1.0, epsilon * x)).collect();
            let diag = crate::linalg::CMatrix::from_diagonal(&u12);
            let formula = lambda_general(e.symmetry, &diag, e.n1, e.n2)?;
            let mc = monte_carlo_lambda(e.symmetry, &u12, e.n1, e.n2, config.realizations, config.base_seed)
                .map_err(|err| err.in_stage("monte_carlo", format!("epsilon = {epsilon}")))?;
            obs.push("lambda_formula", formula);
            obs.0.push(Observable { name: "lambda_monte_carlo".into(), value: mc.mean, std_error: Some(mc.std_error) });
            obs.push("z_score", (mc.mean - formula).abs() / mc.std_error);
        }
        _ => return Err(Error::Config(format!("{:?} needs a kicked-top system", config.kind))),
    }
    Ok(GridPoint { index, lambda: None, epsilon, observables: obs.0, histogram: hist })
}

//! Schmidt spectra of bipartite states, HCT entropies and their random-matrix predictions.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{svd_values_and_squares, CMatrix, SpectralDecomposition};
use crate::numerics::{
    catalan, gamma, gauss_legendre, hyp2f1, incomplete_beta, integrate_1d, integrate_1d_sqrt_start, integrate_2d,
    integrate_semi_infinite, recip_gamma, Guard, MeanEstimate, QuadratureSpec, Rect, RngStream,
};
use crate::rmt::MatrixElementLaw;
use crate::spectral_stats::{histogram, Histogram};
use crate::{Error, Result, C64};

/// Squared Schmidt coefficients in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    values: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Validates non-negativity and unit sum (to 1e-10) and sorts descending.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Invalid("Schmidt values must be non-negative".into()));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::Invalid(format!("Schmidt values sum to {sum}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// μ_α = Σ λ^α, zero eigenvalues contributing nothing.
    pub fn moment(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.values.iter().filter(|&&l| l > 0.0).map(|l| l.powf(alpha)).sum())
    }

    /// HCT entropy (1 - μ_α)/(α - 1); von Neumann entropy at α = 1.
    pub fn entropy(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        if alpha == 1.0 {
            return Ok(-self.values.iter().filter(|&&l| l > 0.0).map(|l| l * l.ln()).sum::<f64>());
        }
        Ok((1.0 - self.moment(alpha)?) / (alpha - 1.0))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain("entropy", format!("requires finite α > 0, got {alpha}")));
    }
    Ok(())
}

/// Schmidt spectrum of a normalized state with composite index i1·n2 + i2.
pub fn schmidt_spectrum(state: &[C64], n1: usize, n2: usize) -> Result<SchmidtSpectrum> {
    if state.len() != n1 * n2 || n1 == 0 || n2 == 0 {
        return Err(Error::Dimension(format!("state of length {} is not {n1}x{n2}", state.len())));
    }
    let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if (norm.sqrt() - 1.0).abs() > 1e-10 {
        return Err(Error::Invalid(format!("state is not normalized: ‖ψ‖ = {}", norm.sqrt())));
    }
    let m = CMatrix::new(n1, n2, state.to_vec())?;
    let mut values = svd_values_and_squares(&m, false)?.squares;
    let sum: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= sum);
    SchmidtSpectrum::from_values(values)
}

/// Schmidt spectra of every eigenvector, in phase order.
pub fn eigenstate_schmidt_spectra(
    decomposition: &SpectralDecomposition,
    n1: usize,
    n2: usize,
) -> Result<Vec<SchmidtSpectrum>> {
    let v = decomposition.vectors.transpose();
    if v.cols() != n1 * n2 {
        return Err(Error::Dimension(format!("eigenvectors of length {} for {n1}x{n2}", v.cols())));
    }
    (0..v.rows()).into_par_iter().map(|k| schmidt_spectrum(v.row(k), n1, n2)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub alpha: f64,
    pub moment: f64,
    pub value: f64,
}

pub fn moments_and_entropies(sp: &SchmidtSpectrum, alphas: &[f64]) -> Result<Vec<EntropyReport>> {
    alphas
        .iter()
        .map(|&alpha| Ok(EntropyReport { alpha, moment: sp.moment(alpha)?, value: sp.entropy(alpha)? }))
        .collect()
}

/// Averages over a set of eigenstates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenstateAverages {
    pub states: usize,
    /// ⟨λ_i⟩ for the leading Schmidt values.
    pub lambda: Vec<MeanEstimate>,
    pub alphas: Vec<f64>,
    pub entropy: Vec<MeanEstimate>,
}

pub fn eigenstate_averages(spectra: &[SchmidtSpectrum], alphas: &[f64], leading: usize) -> Result<EigenstateAverages> {
    if spectra.is_empty() {
        return Err(Error::Invalid("no spectra to average".into()));
    }
    let lambda = (0..leading)
        .map(|i| {
            let xs: Vec<f64> = spectra.iter().map(|s| s.values().get(i).copied().unwrap_or(0.0)).collect();
            MeanEstimate::from_samples(&xs)
        })
        .collect::<Result<_>>()?;
    let entropy = alphas
        .iter()
        .map(|&a| {
            let xs = spectra.iter().map(|s| s.entropy(a)).collect::<Result<Vec<_>>>()?;
            MeanEstimate::from_samples(&xs)
        })
        .collect::<Result<_>>()?;
    Ok(EigenstateAverages { states: spectra.len(), lambda, alphas: alphas.to_vec(), entropy })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::domain("entanglement prediction", format!("requires finite Λ >= 0, got {lambda}")));
    }
    Ok(())
}

fn spec() -> QuadratureSpec {
    QuadratureSpec { relative_tolerance: 1e-10, absolute_tolerance: 1e-14, max_subdivisions: 4000 }
}

/// 1 - s/sqrt(s² + a²) without cancellation.
fn regularized_shift(s: f64, a2: f64) -> f64 {
    let r = (s * s + a2).sqrt();
    if r == 0.0 {
        return 0.0;
    }
    a2 / (r * (s + r))
}

/// Perturbative averages of the two largest Schmidt values.
///
/// λ̄1 = 1 - 2 E[√ω] √Λ; λ̄2 is the regularized double integral over the
/// closer-neighbour spacing and the coupling element.
pub fn predicted_lambda12(lambda: f64, law: MatrixElementLaw) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        return Ok((1.0, 0.0));
    }
    let l1 = 1.0 - 2.0 * law.mean_sqrt() * lambda.sqrt();
    let sq = lambda.sqrt();
    let guard = Guard::default();
    // inner integral over v = √ω
    let inner = |s: f64| -> Result<f64> {
        let g = Guard::default();
        let mut f = |v: f64| g.eval(law.sqrt_density(v)) * regularized_shift(s, 4.0 * lambda * v * v);
        let knee = (s / (2.0 * sq)).clamp(1e-3, 50.0);
        let a = integrate_1d(&mut f, 0.0, knee, &spec())?.value;
        let b = integrate_semi_infinite(&mut f, knee, &spec())?.value;
        g.finish(Ok(a + b))
    };
    let mut outer = |s: f64| (-2.0 * s).exp() * guard.eval(inner(s));
    let ospec = QuadratureSpec { relative_tolerance: 1e-9, ..spec() };
    let mut total = 0.0;
    let mut start = 0.0;
    for stop in [2.0 * sq, 20.0 * sq, 4.0] {
        if stop > start {
            total += integrate_1d(&mut outer, start, stop, &ospec)?.value;
            start = stop;
        }
    }
    total += integrate_semi_infinite(&mut outer, start, &ospec)?.value;
    let l2 = guard.finish(Ok(total))?;
    Ok((l1, l2))
}

/// Coefficients of the perturbative moments μ̄_α = 1 - C √Λ + C3 Λ, with C = C1 - C2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyCoefficients {
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Closed Γ-ratio form of C1 - C2.
    pub c: f64,
}

fn check_coefficient_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.5) || !alpha.is_finite() {
        return Err(Error::domain("entropy_coefficients", format!("requires α > 1/2, got {alpha}")));
    }
    Ok(())
}

/// (1 - t)^α - 1 without cancellation.
fn pow_m1(t: f64, alpha: f64) -> f64 {
    (alpha * (-t).ln_1p()).exp_m1()
}

/// C1 = k ∫_0^{1/2} (1 - (1-t)^α) / (t(1-t))^{3/2} dt with k = E[√ω].
pub fn c1_quadrature(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    let f = |t: f64| -pow_m1(t, alpha) / (t * (1.0 - t)).powf(1.5);
    Ok(law.mean_sqrt() * integrate_1d_sqrt_start(f, 0.0, 0.5, &spec())?.value)
}

pub fn c1_closed(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    Ok(2.0 * 2f64.sqrt() * law.mean_sqrt() * hyp2f1(-0.5, 1.5 - alpha, 0.5, 0.5)?)
}

/// C2 = k ∫_0^{1/2} t^{α-3/2} (1-t)^{-3/2} dt, integrated in u = t^{α-1/2}.
pub fn c2_quadrature(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    let p = alpha - 0.5;
    let f = |u: f64| (1.0 - u.powf(1.0 / p)).powf(-1.5);
    Ok(law.mean_sqrt() / p * integrate_1d(f, 0.0, 0.5f64.powf(p), &spec())?.value)
}

pub fn c2_closed(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    Ok(law.mean_sqrt() * incomplete_beta(0.5, alpha - 0.5, -0.5)?)
}

/// C(α) = 2√π k Γ(α - 1/2)/Γ(α - 1).
pub fn c_closed(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    Ok(2.0 * PI.sqrt() * law.mean_sqrt() * gamma(alpha - 0.5)? * recip_gamma(alpha - 1.0))
}

/// C(α)/(α - 1) = 2√π k Γ(α - 1/2)/Γ(α); equals 2πk at α = 1 (exactly 4 for the product law).
pub fn entropy_slope(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    if alpha == 1.0 {
        return Ok(match law {
            MatrixElementLaw::BesselCoe => 4.0,
            _ => 2.0 * PI * law.mean_sqrt(),
        });
    }
    Ok(2.0 * PI.sqrt() * law.mean_sqrt() * gamma(alpha - 0.5)? * recip_gamma(alpha))
}

/// ∫∫_{[0,1]²} h''(x t1 + y t2) dx dy with h(z) = (1-z)^α, divided by α - 1
/// when `over_am1` is set (the α = 1 limit is then taken analytically).
fn second_difference_ratio(alpha: f64, t1: f64, t2: f64, over_am1: bool, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
    let scale = if over_am1 { alpha } else { alpha * (alpha - 1.0) };
    if t1 + t2 > 0.8 {
        // both arguments are large; the direct difference is well conditioned
        let num = if over_am1 && alpha == 1.0 {
            let e = |x: f64| if x >= 1.0 { 0.0 } else { (1.0 - x) * (-x).ln_1p() };
            e(t1 + t2) - e(t1) - e(t2)
        } else {
            let h = |x: f64| (1.0 - x).max(0.0).powf(alpha);
            let n = 1.0 + h(t1 + t2) - h(t1) - h(t2);
            if over_am1 {
                n / (alpha - 1.0)
            } else {
                n
            }
        };
        return num / (t1 * t2);
    }
    let (x, w) = gl;
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        for (yj, wj) in x.iter().zip(w) {
            let z = 0.5 * (xi + 1.0) * t1 + 0.5 * (yj + 1.0) * t2;
            acc += wi * wj * (1.0 - z).powf(alpha - 2.0);
        }
    }
    0.25 * scale * acc
}

fn c3_integral(alpha: f64, law: MatrixElementLaw, over_am1: bool) -> Result<f64> {
    let gl = gauss_legendre(16);
    let root_half = 0.5f64.sqrt();
    let f = |u1: f64, u2: f64| {
        let (t1, t2) = (u1 * u1, u2 * u2);
        4.0 * second_difference_ratio(alpha, t1, t2, over_am1, &gl) / ((1.0 - t1) * (1.0 - t2)).powf(1.5)
    };
    let rect = Rect { x0: 0.0, x1: root_half, y0: 0.0, y1: root_half };
    let spec = QuadratureSpec { relative_tolerance: 1e-8, absolute_tolerance: 1e-12, max_subdivisions: 2000 };
    let k = law.mean_sqrt();
    Ok(0.5 * k * k * integrate_2d(f, rect, &spec)?.value)
}

/// C3 by two-dimensional quadrature.
pub fn c3_quadrature(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    c3_integral(alpha, law, false)
}

/// C3/(α - 1), finite at α = 1.
pub fn c3_slope(alpha: f64, law: MatrixElementLaw) -> Result<f64> {
    check_coefficient_alpha(alpha)?;
    c3_integral(alpha, law, true)
}

pub fn entropy_coefficients(alpha: f64, law: MatrixElementLaw) -> Result<EntropyCoefficients> {
    Ok(EntropyCoefficients {
        alpha,
        c1: c1_quadrature(alpha, law)?,
        c2: c2_quadrature(alpha, law)?,
        c3: c3_quadrature(alpha, law)?,
        c: c_closed(alpha, law)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyRegime {
    Perturbative,
    Recursive,
}

/// Random-matrix value of ⟨S_α⟩ at full coupling.
///
/// Supported: α = 1 and α > 1 for n1 = n2, and α = 2 for any dimensions.
pub fn saturation_entropy(alpha: f64, n1: usize, n2: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if n1 == 0 || n2 == 0 {
        return Err(Error::Invalid("dimensions must be positive".into()));
    }
    let (a, b) = (n1 as f64, n2 as f64);
    if alpha == 2.0 {
        return Ok(1.0 - (a + b) / (1.0 + a * b));
    }
    if n1 != n2 {
        return Err(Error::Unsupported(format!("saturation entropy for α = {alpha} with unequal dimensions")));
    }
    if alpha == 1.0 {
        return Ok(a.ln() - 0.5);
    }
    if alpha < 1.0 {
        return Err(Error::Unsupported(format!("saturation entropy for α = {alpha} < 1")));
    }
    Ok((1.0 - catalan(alpha)? * a.powf(1.0 - alpha)) / (alpha - 1.0))
}

/// Predicted ⟨S_α⟩ as a function of Λ.
pub fn predicted_entropy(
    alpha: f64,
    lambda: f64,
    regime: EntropyRegime,
    n1: usize,
    n2: usize,
    law: MatrixElementLaw,
) -> Result<f64> {
    check_lambda(lambda)?;
    check_alpha(alpha)?;
    match regime {
        EntropyRegime::Perturbative => {
            if lambda == 0.0 {
                return Ok(0.0);
            }
            let d3 =
                if alpha == 1.0 && law == MatrixElementLaw::BesselCoe { 4.0 / PI - 1.0 } else { c3_slope(alpha, law)? };
            Ok(entropy_slope(alpha, law)? * lambda.sqrt() - d3 * lambda)
        }
        EntropyRegime::Recursive => {
            if alpha < 1.0 {
                return Err(Error::Unsupported(format!("recursive prediction for α = {alpha} < 1")));
            }
            let s_inf = saturation_entropy(alpha, n1, n2)?;
            let slope = entropy_slope(alpha, law)?;
            Ok(-s_inf * (-slope * lambda.sqrt() / s_inf).exp_m1())
        }
    }
}

/// Haar averages (⟨S1⟩, ⟨S2⟩) for n1 ≤ n2.
pub fn haar_average_entropies(n1: usize, n2: usize) -> Result<(f64, f64)> {
    if n1 == 0 || n1 > n2 {
        return Err(Error::Invalid(format!("requires 1 <= n1 <= n2, got ({n1}, {n2})")));
    }
    let (a, b) = (n1 as f64, n2 as f64);
    Ok((a.ln() - a / (2.0 * b), 1.0 - (a + b) / (1.0 + a * b)))
}

/// Haar-random pure state of dimension n.
pub fn sample_haar_state(n: usize, stream: RngStream) -> Vec<C64> {
    let mut rng = stream.rng();
    let mut v: Vec<C64> = (0..n).map(|_| rng.complex_gaussian()).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

fn mp_support(q: f64) -> Result<(f64, f64)> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::domain("marcenko_pastur", format!("requires Q >= 1, got {q}")));
    }
    let r = 2.0 / q.sqrt();
    let c = 1.0 + 1.0 / q;
    Ok(((c - r).max(0.0), c + r))
}

/// Density of rescaled Schmidt values x = λ N1 for Q = N2/N1.
pub fn marcenko_pastur_pdf(q: f64, x: f64) -> Result<f64> {
    let (lo, hi) = mp_support(q)?;
    if !(x > lo && x < hi) {
        return Ok(0.0);
    }
    Ok(q / (2.0 * PI) * ((hi - x) * (x - lo)).sqrt() / x)
}

pub fn marcenko_pastur_cdf(q: f64, x: f64) -> Result<f64> {
    let (lo, hi) = mp_support(q)?;
    if x <= lo {
        return Ok(0.0);
    }
    if x >= hi {
        return Ok(1.0);
    }
    if q == 1.0 {
        let theta = (0.5 * x.sqrt()).asin();
        return Ok((2.0 * theta + 0.5 * (x * (4.0 - x)).sqrt()) / PI);
    }
    let f = |y: f64| marcenko_pastur_pdf(q, y).unwrap_or(0.0);
    Ok(integrate_1d_sqrt_start(f, lo, x, &spec())?.value.min(1.0))
}

/// Pooled rescaled Schmidt values x = λ·n1.
pub fn rescaled_schmidt_values(spectra: &[SchmidtSpectrum], n1: usize) -> Vec<f64> {
    spectra.iter().flat_map(|s| s.values().iter().map(move |l| l * n1 as f64)).collect()
}

pub fn rescaled_schmidt_distribution(spectra: &[SchmidtSpectrum], n1: usize, edges: &[f64]) -> Result<Histogram> {
    histogram(&rescaled_schmidt_values(spectra, n1), edges)
}

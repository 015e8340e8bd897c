//! Causal autoregressive models: fitting, order selection, residuals and
//! simulation.
//!
//! Models are written for the mean-removed series,
//! `X_t - mean = sum_k phi_k (X_{t-k} - mean) + Z_t`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dcov::sample_autocovariance;
use crate::error::{Error, Result};
use crate::noise::NoiseGen;

/// Roots of the AR polynomial must lie outside this radius.
const CAUSAL_RADIUS: f64 = 1.0 + 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FitMethod {
    LeastSquares,
    YuleWalker,
}

impl std::str::FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ls" | "least-squares" | "leastsquares" => Ok(FitMethod::LeastSquares),
            "yw" | "yule-walker" | "yulewalker" => Ok(FitMethod::YuleWalker),
            other => Err(Error::Config(format!("unknown fit method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    pub p: usize,
    pub phi: Vec<f64>,
    pub noise_variance: f64,
    /// Level subtracted from the series before applying the recursion.
    pub mean: f64,
    pub method: FitMethod,
    /// Residuals for `t = p+1..n`; length `n - p`.
    pub residuals: Vec<f64>,
}

impl ArModel {
    pub fn is_causal(&self) -> bool {
        is_causal(&self.phi)
    }
}

fn check_order(n: usize, p: usize) -> Result<()> {
    if p < 1 {
        return Err(Error::Order("AR order must be at least 1".into()));
    }
    if n < p + 2 {
        return Err(Error::Order(format!("AR({p}) needs at least {} observations, got {n}", p + 2)));
    }
    Ok(())
}

fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Io { line: None, message: format!("non-finite value at position {i}") }),
        None => Ok(()),
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// `Z_t = (X_t - mean) - sum_k phi_k (X_{t-k} - mean)`, `t = p..n` (0-based).
fn residuals_raw(phi: &[f64], level: f64, x: &[f64]) -> Vec<f64> {
    let p = phi.len();
    (p..x.len())
        .map(|t| {
            let pred: f64 = phi.iter().enumerate().map(|(k, f)| f * (x[t - k - 1] - level)).sum();
            (x[t] - level) - pred
        })
        .collect()
}

fn rss_variance(res: &[f64]) -> f64 {
    res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64
}

fn warn_if_not_causal(phi: &[f64]) {
    if !is_causal(phi) {
        log::warn!("fitted AR coefficients are not causal: {phi:?}");
    }
}

/// Least-squares fit of `X_t` on `(1, X_{t-1}, ..., X_{t-p})`, `t = p+1..n`.
///
/// The series is mean-removed first. The intercept absorbs the remaining
/// offset and is folded into [`ArModel::mean`], so the residuals of the fit
/// have mean zero.
pub fn fit_ar_ls(x: &[f64], p: usize) -> Result<ArModel> {
    let n = x.len();
    check_order(n, p)?;
    check_finite(x)?;
    let xbar = mean(x);
    let d: Vec<f64> = x.iter().map(|v| v - xbar).collect();
    let rows = n - p;
    let design = DMatrix::from_fn(rows, p + 1, |r, c| if c == 0 { 1.0 } else { d[r + p - c] });
    let target = DVector::from_iterator(rows, d[p..].iter().copied());

    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax.is_nan() || smax <= 0.0 || smin <= smax * 1e-12 {
        return Err(Error::SingularFit(format!("least-squares design for AR({p}) is rank deficient")));
    }
    let beta = svd.solve(&target, smax * 1e-14).map_err(|e| Error::SingularFit(e.to_string()))?;
    let intercept = beta[0];
    let phi: Vec<f64> = beta.iter().skip(1).copied().collect();

    let phi_sum: f64 = phi.iter().sum();
    let level = if (1.0 - phi_sum).abs() > 1e-8 { xbar + intercept / (1.0 - phi_sum) } else { xbar };
    warn_if_not_causal(&phi);
    let residuals = residuals_raw(&phi, level, x);
    Ok(ArModel {
        p,
        noise_variance: rss_variance(&residuals),
        phi,
        mean: level,
        method: FitMethod::LeastSquares,
        residuals,
    })
}

/// Durbin-Levinson solution of the Yule-Walker equations. Returns the
/// coefficients and the partial autocorrelations.
pub(crate) fn durbin_levinson(gamma: &[f64], p: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if gamma[0].is_nan() || gamma[0] <= 0.0 {
        return Err(Error::SingularFit("zero sample variance".into()));
    }
    let mut phi = vec![0.0; p];
    let mut pacf = Vec::with_capacity(p);
    let mut v = gamma[0];
    for k in 1..=p {
        let acc: f64 = (1..k).map(|j| phi[j - 1] * gamma[k - j]).sum();
        let kappa = (gamma[k] - acc) / v;
        let prev = phi.clone();
        phi[k - 1] = kappa;
        for j in 1..k {
            phi[j - 1] = prev[j - 1] - kappa * prev[k - j - 1];
        }
        v *= 1.0 - kappa * kappa;
        if v.is_nan() || v <= 0.0 {
            return Err(Error::SingularFit(format!("Yule-Walker recursion breaks down at order {k}")));
        }
        pacf.push(kappa);
    }
    Ok((phi, pacf))
}

/// Yule-Walker fit from sample autocovariances (denominator `n`).
pub fn fit_ar_yw(x: &[f64], p: usize) -> Result<ArModel> {
    let n = x.len();
    check_order(n, p)?;
    check_finite(x)?;
    let gamma = sample_autocovariance(x, p);
    let (phi, _) = durbin_levinson(&gamma, p)?;
    warn_if_not_causal(&phi);
    let level = mean(x);
    let residuals = residuals_raw(&phi, level, x);
    Ok(ArModel {
        p,
        noise_variance: rss_variance(&residuals),
        phi,
        mean: level,
        method: FitMethod::YuleWalker,
        residuals,
    })
}

pub fn fit_ar(x: &[f64], p: usize, method: FitMethod) -> Result<ArModel> {
    match method {
        FitMethod::LeastSquares => fit_ar_ls(x, p),
        FitMethod::YuleWalker => fit_ar_yw(x, p),
    }
}

/// Gaussian quasi-likelihood AICC of a model with `p` coefficients and
/// innovation variance estimate `sigma2` on `n` observations.
pub fn aicc(n: usize, p: usize, sigma2: f64) -> f64 {
    let nf = n as f64;
    nf * sigma2.ln() + 2.0 * (p as f64 + 1.0) * nf / (nf - p as f64 - 2.0)
}

/// Order in `0..=p_max` minimizing AICC over least-squares fits. Ties go to
/// the smaller order.
pub fn select_order_aicc(x: &[f64], p_max: usize) -> Result<usize> {
    let n = x.len();
    check_finite(x)?;
    if n < 4 {
        return Err(Error::TooFewObservations { needed: 4, got: n });
    }
    if p_max > n / 10 {
        return Err(Error::Order(format!("p_max must be at most n/10 = {}, got {p_max}", n / 10)));
    }
    let xbar = mean(x);
    let var0 = x.iter().map(|v| (v - xbar).powi(2)).sum::<f64>() / n as f64;
    let mut best: Option<(usize, f64)> = None;
    if var0 > 0.0 {
        best = Some((0, aicc(n, 0, var0)));
    }
    for p in 1..=p_max {
        let model = match fit_ar_ls(x, p) {
            Ok(m) => m,
            Err(Error::SingularFit(_)) => continue,
            Err(e) => return Err(e),
        };
        if model.noise_variance.is_nan() || model.noise_variance <= 0.0 {
            continue;
        }
        let score = aicc(n, p, model.noise_variance);
        if best.is_none_or(|(_, b)| score < b) {
            best = Some((p, score));
        }
    }
    best.map(|(p, _)| p).ok_or_else(|| Error::SingularFit("no AR order could be fitted".into()))
}

/// Residuals of `model` on `x`, for `t = p+1..n` (length `n - p`).
pub fn residuals(model: &ArModel, x: &[f64]) -> Result<Vec<f64>> {
    if model.phi.len() != model.p {
        return Err(Error::Shape(format!(
            "model of order {} carries {} coefficients",
            model.p,
            model.phi.len()
        )));
    }
    if x.len() <= model.p {
        return Err(Error::Shape(format!("series of length {} is too short for AR({})", x.len(), model.p)));
    }
    check_finite(x)?;
    Ok(residuals_raw(&model.phi, model.mean, x))
}

/// Causality test: all roots of `1 - phi_1 z - ... - phi_p z^p` lie outside
/// the closed unit disk (with a `1e-10` margin).
///
/// Uses the step-down (inverse Durbin-Levinson) recursion on the
/// radius-scaled coefficients; the polynomial is causal iff every reflection
/// coefficient has modulus below one.
pub fn is_causal(phi: &[f64]) -> bool {
    if phi.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let mut a: Vec<f64> = phi.iter().enumerate().map(|(k, v)| v * CAUSAL_RADIUS.powi(k as i32 + 1)).collect();
    while let Some(&kappa) = a.last() {
        if kappa.abs() >= 1.0 {
            return false;
        }
        let k = a.len();
        let denom = 1.0 - kappa * kappa;
        let next: Vec<f64> = (0..k - 1).map(|j| (a[j] + kappa * a[k - 2 - j]) / denom).collect();
        a = next;
    }
    true
}

/// Default burn-in for simulations: `10 p + 100`.
pub fn default_burn_in(p: usize) -> usize {
    10 * p + 100
}

/// Runs `X_t = sum_k phi_k X_{t-k} + Z_t` from zero initial conditions over
/// the supplied innovations and drops the first `burn_in` values.
pub fn simulate_ar_with_noise(phi: &[f64], noise: &[f64], burn_in: usize) -> Result<Vec<f64>> {
    if !is_causal(phi) {
        return Err(Error::NonCausal(format!("{phi:?}")));
    }
    if noise.len() <= burn_in {
        return Err(Error::Config(format!(
            "{} innovations do not cover a burn-in of {burn_in}",
            noise.len()
        )));
    }
    let p = phi.len();
    let mut x = Vec::with_capacity(noise.len());
    for (t, z) in noise.iter().enumerate() {
        let mut v = *z;
        for k in 0..p.min(t) {
            v += phi[k] * x[t - k - 1];
        }
        x.push(v);
    }
    Ok(x.split_off(burn_in))
}

/// Simulates `n` values of a causal AR process driven by `noise`;
/// deterministic given `seed`. `burn_in` defaults to [`default_burn_in`].
pub fn simulate_ar(
    phi: &[f64],
    noise: &NoiseGen,
    n: usize,
    burn_in: Option<usize>,
    seed: u64,
) -> Result<Vec<f64>> {
    if !is_causal(phi) {
        return Err(Error::NonCausal(format!("{phi:?}")));
    }
    if n < 1 {
        return Err(Error::Config("simulation length must be at least 1".into()));
    }
    let burn = burn_in.unwrap_or_else(|| default_burn_in(phi.len()));
    let z = noise.draw(n + burn, seed)?;
    simulate_ar_with_noise(phi, &z, burn)
}

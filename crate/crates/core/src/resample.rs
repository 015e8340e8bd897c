//! Resampling quantile envelopes for the scaled ADCF `n R_n(h)`.
//!
//! Every replicate `b` draws from its own ChaCha stream keyed by
//! `(seed, b)`, so envelopes are bit-identical for any thread count.
//! Quantiles use the order statistic at 1-based index `ceil(level * B)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ar::{default_burn_in, fit_ar, simulate_ar_with_noise, ArModel};
use crate::dcov::{kernel_matrix, scaled_adcf_indexed, scaled_adcf_kernel, Indexed, LagCurve, Statistic};
use crate::error::{Error, Result};
use crate::measures::WeightMeasure;
use crate::noise::NoiseGen;

/// Smallest accepted replicate count.
pub const MIN_REPLICATES: usize = 100;

/// Largest fraction of parametric-bootstrap replicates that may be dropped
/// because the refit failed.
pub const MAX_DISCARD_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResampleMethod {
    Permutation,
    IidBootstrap,
    ParametricBootstrap,
}

/// Innovations used to drive parametric-bootstrap replicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BootstrapNoise {
    /// iid draws from the centered fitted residuals.
    #[default]
    ResampleResiduals,
    /// `N(0, sigma^2)` with the fitted innovation variance.
    FittedGaussian,
}

impl std::str::FromStr for BootstrapNoise {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "resample" | "residuals" | "resample-residuals" => Ok(BootstrapNoise::ResampleResiduals),
            "gauss" | "gaussian" | "fitted-gaussian" => Ok(BootstrapNoise::FittedGaussian),
            other => Err(Error::Config(format!("unknown bootstrap noise '{other}'"))),
        }
    }
}

/// Per-lag empirical quantiles of a resampled statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lags: Vec<i64>,
    /// Quantile levels, ascending.
    pub levels: Vec<f64>,
    /// `quantiles[i][k]` is the `levels[i]` quantile at `lags[k]`.
    pub quantiles: Vec<Vec<f64>>,
    pub method: ResampleMethod,
    /// Requested replicate count.
    pub replicates: usize,
    /// Replicates dropped after a failed refit.
    pub discarded: usize,
    pub seed: u64,
    pub statistic: Statistic,
    pub warnings: Vec<String>,
}

impl Envelope {
    pub fn quantile(&self, level: f64) -> Option<&[f64]> {
        self.levels.iter().position(|l| (l - level).abs() < 1e-12).map(|i| self.quantiles[i].as_slice())
    }

    /// Lags at which `observed` is strictly above the `level` quantile.
    pub fn exceedances(&self, observed: &LagCurve, level: f64) -> Vec<i64> {
        let Some(q) = self.quantile(level) else {
            return Vec::new();
        };
        self.lags
            .iter()
            .zip(q)
            .filter_map(|(&h, &bound)| match observed.value_at(h) {
                Some(v) if v > bound => Some(h),
                _ => None,
            })
            .collect()
    }
}

/// Order statistic at 1-based index `ceil(level * len)` of sorted values.
pub fn empirical_quantile(sorted: &[f64], level: f64) -> f64 {
    let b = sorted.len();
    // guard against 0.95 * 1000 = 950.0000000000001
    let idx = (level * b as f64 - 1e-9).ceil().max(1.0) as usize;
    sorted[idx.min(b) - 1]
}

/// Validates and sorts quantile levels.
pub fn normalize_levels(levels: &[f64]) -> Result<Vec<f64>> {
    if levels.is_empty() {
        return Err(Error::Config("no quantile levels given".into()));
    }
    if let Some(l) = levels.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
        return Err(Error::Config(format!("quantile level {l} not in (0, 1)")));
    }
    let mut v = levels.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// Aggregates a complete replicate matrix (`replicates[b][lag index]`).
pub fn quantiles_from_replicates(replicates: &[Vec<f64>], n_lags: usize, levels: &[f64]) -> Vec<Vec<f64>> {
    let mut per_level = vec![Vec::with_capacity(n_lags); levels.len()];
    let mut column = Vec::with_capacity(replicates.len());
    for k in 0..n_lags {
        column.clear();
        column.extend(replicates.iter().map(|r| r[k]));
        column.sort_by(f64::total_cmp);
        for (i, &level) in levels.iter().enumerate() {
            per_level[i].push(empirical_quantile(&column, level));
        }
    }
    per_level
}

/// RNG for replicate `b`: the ChaCha stream `b` under key `seed`.
pub fn replicate_rng(seed: u64, b: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(b as u64);
    rng
}

fn check_request(n: usize, max_lag: usize, b: usize) -> Result<()> {
    if b < MIN_REPLICATES {
        return Err(Error::Config(format!("need at least {MIN_REPLICATES} replicates, got {b}")));
    }
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    if max_lag < 1 || max_lag > n - 2 {
        return Err(Error::Lag(format!("max_lag must lie in 1..={}, got {max_lag}", n - 2)));
    }
    Ok(())
}

fn finish(
    replicates: Vec<Vec<f64>>,
    max_lag: usize,
    levels: Vec<f64>,
    method: ResampleMethod,
    requested: usize,
    seed: u64,
    warnings: Vec<String>,
) -> Envelope {
    let discarded = requested - replicates.len();
    Envelope {
        lags: (1..=max_lag as i64).collect(),
        quantiles: quantiles_from_replicates(&replicates, max_lag, &levels),
        levels,
        method,
        replicates: requested,
        discarded,
        seed,
        statistic: Statistic::ScaledAdcf,
        warnings,
    }
}

/// Replicate matrix of the scaled ADCF over `b` random permutations of `x`.
pub fn permutation_replicates(
    x: &[f64],
    max_lag: usize,
    measure: &WeightMeasure,
    b: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    check_request(n, max_lag, b)?;
    // permuting the series permutes rows and columns of its kernel matrix
    let k = kernel_matrix(x, measure)?;
    (0..b)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            scaled_adcf_indexed(&k, n, max_lag, &Indexed(&idx))
        })
        .collect()
}

/// Quantile envelope of `n R_n(h)` for an iid series, from `b` random
/// permutations of `x`.
pub fn permutation_envelope(
    x: &[f64],
    max_lag: usize,
    measure: &WeightMeasure,
    b: usize,
    levels: &[f64],
    seed: u64,
) -> Result<Envelope> {
    let levels = normalize_levels(levels)?;
    let reps = permutation_replicates(x, max_lag, measure, b, seed)?;
    Ok(finish(reps, max_lag, levels, ResampleMethod::Permutation, b, seed, Vec::new()))
}

/// Quantile envelope from `b` iid resamples (with replacement) of `z`.
pub fn iid_bootstrap_envelope(
    z: &[f64],
    max_lag: usize,
    measure: &WeightMeasure,
    b: usize,
    levels: &[f64],
    seed: u64,
) -> Result<Envelope> {
    let levels = normalize_levels(levels)?;
    let n = z.len();
    check_request(n, max_lag, b)?;
    let k = kernel_matrix(z, measure)?;
    let reps = (0..b)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            scaled_adcf_indexed(&k, n, max_lag, &Indexed(&idx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(reps, max_lag, levels, ResampleMethod::IidBootstrap, b, seed, Vec::new()))
}

/// Warning text for measures outside the residual limit theory, if any.
pub fn admissibility_warning(measure: &WeightMeasure) -> Option<String> {
    if measure.admissibility().satisfies_int_res {
        None
    } else {
        Some(format!(
            "weight measure {measure} violates the integrability condition required for \
             residual ADCF limits of fitted AR models; the residual statistic may have no \
             finite limit and envelopes can be unreliable"
        ))
    }
}

/// Scaled residual ADCF of one series refitted at the model's order and method.
fn refit_statistic(
    series: &[f64],
    model: &ArModel,
    max_lag: usize,
    measure: &WeightMeasure,
) -> Result<Option<Vec<f64>>> {
    let resid = if model.p == 0 {
        let m = series.iter().sum::<f64>() / series.len() as f64;
        series.iter().map(|v| v - m).collect()
    } else {
        match fit_ar(series, model.p, model.method) {
            Ok(f) => f.residuals,
            Err(Error::SingularFit(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    };
    if max_lag + 2 > resid.len() {
        return Err(Error::Lag(format!("max_lag {max_lag} too large for {} residuals", resid.len())));
    }
    let k = kernel_matrix(&resid, measure)?;
    scaled_adcf_kernel(&k, max_lag).map(Some)
}

/// Parametric-bootstrap envelope for the scaled residual ADCF of a fitted AR
/// model.
///
/// Each replicate simulates `n` values from `model.phi` (after a burn-in of
/// `10 p + 100`), refits an AR model of the same order by the same method and
/// records the scaled ADCF of the new residuals. Replicates whose refit is
/// singular are discarded; more than 1% discarded is an error.
#[allow(clippy::too_many_arguments)]
pub fn parametric_bootstrap_envelope(
    model: &ArModel,
    n: usize,
    max_lag: usize,
    measure: &WeightMeasure,
    b: usize,
    levels: &[f64],
    seed: u64,
    noise_source: BootstrapNoise,
) -> Result<Envelope> {
    let levels = normalize_levels(levels)?;
    measure.validate()?;
    if !model.is_causal() {
        return Err(Error::NonCausal(format!("{:?}", model.phi)));
    }
    if b < MIN_REPLICATES {
        return Err(Error::Config(format!("need at least {MIN_REPLICATES} replicates, got {b}")));
    }
    if n < model.p + 2 || max_lag < 1 || max_lag + 2 > n - model.p {
        return Err(Error::Lag(format!("max_lag {max_lag} out of range for n = {n}, p = {}", model.p)));
    }
    let mut warnings = Vec::new();
    if let Some(w) = admissibility_warning(measure) {
        log::warn!("{w}");
        warnings.push(w);
    }

    let noise = match noise_source {
        BootstrapNoise::ResampleResiduals => {
            if model.residuals.is_empty() {
                return Err(Error::Config("model carries no residuals to resample".into()));
            }
            let m = model.residuals.iter().sum::<f64>() / model.residuals.len() as f64;
            Innovations::Empirical(model.residuals.iter().map(|r| r - m).collect())
        }
        BootstrapNoise::FittedGaussian => {
            Innovations::Parametric(NoiseGen::gaussian(model.noise_variance.sqrt())?)
        }
    };
    let burn = default_burn_in(model.p);

    let outcomes = (0..b)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let z = noise.draw(&mut rng, n + burn)?;
            let mut x = simulate_ar_with_noise(&model.phi, &z, burn)?;
            for v in &mut x {
                *v += model.mean;
            }
            refit_statistic(&x, model, max_lag, measure)
        })
        .collect::<Result<Vec<_>>>()?;
    let reps: Vec<Vec<f64>> = outcomes.into_iter().flatten().collect();
    let discarded = b - reps.len();
    if discarded as f64 > MAX_DISCARD_FRACTION * b as f64 {
        return Err(Error::SingularFit(format!("{discarded} of {b} bootstrap refits failed")));
    }
    if discarded > 0 {
        warnings.push(format!("{discarded} of {b} bootstrap refits were singular and dropped"));
    }
    Ok(finish(reps, max_lag, levels, ResampleMethod::ParametricBootstrap, b, seed, warnings))
}

enum Innovations {
    Empirical(Vec<f64>),
    Parametric(NoiseGen),
}

impl Innovations {
    fn draw(&self, rng: &mut ChaCha8Rng, len: usize) -> Result<Vec<f64>> {
        match self {
            Innovations::Empirical(pool) => {
                Ok((0..len).map(|_| pool[rng.random_range(0..pool.len())]).collect())
            }
            Innovations::Parametric(g) => {
                let mut out = vec![0.0; len];
                g.fill(rng, &mut out)?;
                Ok(out)
            }
        }
    }
}

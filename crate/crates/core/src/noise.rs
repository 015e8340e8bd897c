//! Seedable innovation generators and analytic oracles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Innovation distribution for AR simulations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NoiseGen {
    Gaussian {
        sigma: f64,
    },
    StudentT {
        df: f64,
    },
    /// `S * G` with `G ~ Gamma(shape = delta, rate = beta_rate)` and a
    /// uniform random sign `S`; density `0.5 b^d |z|^{d-1} e^{-b|z|} / Gamma(d)`.
    SymmetricGamma {
        delta: f64,
        beta_rate: f64,
    },
}

enum Sampler {
    Normal(Normal<f64>),
    StudentT(StudentT<f64>),
    SymGamma(Gamma<f64>),
}

impl Sampler {
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Normal(d) => d.sample(rng),
            Sampler::StudentT(d) => d.sample(rng),
            Sampler::SymGamma(d) => {
                let g = d.sample(rng);
                if rng.random::<bool>() {
                    g
                } else {
                    -g
                }
            }
        }
    }
}

impl NoiseGen {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let g = NoiseGen::Gaussian { sigma };
        g.validate()?;
        Ok(g)
    }

    pub fn student_t(df: f64) -> Result<Self> {
        let g = NoiseGen::StudentT { df };
        g.validate()?;
        Ok(g)
    }

    pub fn symmetric_gamma(delta: f64, beta_rate: f64) -> Result<Self> {
        let g = NoiseGen::SymmetricGamma { delta, beta_rate };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            NoiseGen::Gaussian { sigma } => sigma > 0.0 && sigma.is_finite(),
            NoiseGen::StudentT { df } => df > 0.0 && df.is_finite(),
            NoiseGen::SymmetricGamma { delta, beta_rate } => {
                delta > 0.0 && beta_rate > 0.0 && delta.is_finite() && beta_rate.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid noise parameters: {self:?}")))
        }
    }

    fn sampler(&self) -> Result<Sampler> {
        self.validate()?;
        let bad = |e: &dyn fmt::Display| Error::Config(format!("noise {self:?}: {e}"));
        Ok(match *self {
            NoiseGen::Gaussian { sigma } => Sampler::Normal(Normal::new(0.0, sigma).map_err(|e| bad(&e))?),
            NoiseGen::StudentT { df } => Sampler::StudentT(StudentT::new(df).map_err(|e| bad(&e))?),
            NoiseGen::SymmetricGamma { delta, beta_rate } => {
                Sampler::SymGamma(Gamma::new(delta, 1.0 / beta_rate).map_err(|e| bad(&e))?)
            }
        })
    }

    /// Fills `out` with iid draws from `rng`.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) -> Result<()> {
        let s = self.sampler()?;
        for v in out.iter_mut() {
            *v = s.sample(rng);
        }
        Ok(())
    }

    /// `n` iid draws; identical `(self, n, seed)` give identical output.
    pub fn draw(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n < 1 {
            return Err(Error::Config("need at least one draw".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = vec![0.0; n];
        self.fill(&mut rng, &mut out)?;
        Ok(out)
    }
}

pub fn draw(gen: &NoiseGen, n: usize, seed: u64) -> Result<Vec<f64>> {
    gen.draw(n, seed)
}

impl fmt::Display for NoiseGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseGen::Gaussian { sigma } => write!(f, "gauss:sigma={sigma}"),
            NoiseGen::StudentT { df } => write!(f, "t:df={df}"),
            NoiseGen::SymmetricGamma { delta, beta_rate } => {
                write!(f, "sgamma:delta={delta},rate={beta_rate}")
            }
        }
    }
}

/// Parses `gauss`, `gauss:sigma=2`, `t:df=1.5`, `sgamma:delta=0.2,rate=0.5`.
impl FromStr for NoiseGen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let mut params = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value in noise spec, got '{item}'")))?;
            let v: f64 =
                v.trim().parse().map_err(|_| Error::Config(format!("bad number '{v}' in noise spec")))?;
            params.push((k.trim().to_ascii_lowercase(), v));
        }
        let get = |keys: &[&str], default: Option<f64>| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| keys.contains(&k.as_str()))
                .map(|(_, v)| *v)
                .or(default)
                .ok_or_else(|| Error::Config(format!("noise '{name}' requires '{}'", keys[0])))
        };
        match name.to_ascii_lowercase().as_str() {
            "gauss" | "gaussian" | "normal" => NoiseGen::gaussian(get(&["sigma"], Some(1.0))?),
            "t" | "student" | "studentt" => NoiseGen::student_t(get(&["df"], None)?),
            "sgamma" | "symgamma" => {
                NoiseGen::symmetric_gamma(get(&["delta", "shape"], None)?, get(&["rate", "beta"], None)?)
            }
            other => Err(Error::Config(format!("unknown noise '{other}'"))),
        }
    }
}

/// Population ADCV `T(h)` of a stationary Gaussian series with variance
/// `sigma2` and autocovariance `gamma_h` at lag `h`, for the weight whose
/// kernel is `exp(-x^2)` (product of two `N(0, 2)` laws, i.e.
/// `WeightMeasure::GaussianCF { variance: 2.0 }`).
pub fn gaussian_adcv_closed_form(sigma2: f64, gamma_h: f64) -> Result<f64> {
    if sigma2.is_nan() || sigma2 <= 0.0 || !gamma_h.is_finite() {
        return Err(Error::Domain(format!("sigma2 = {sigma2}, gamma_h = {gamma_h}")));
    }
    if gamma_h.abs() > sigma2 {
        return Err(Error::Domain(format!("|gamma_h| = {} exceeds the variance {sigma2}", gamma_h.abs())));
    }
    let root = |a: f64, b: f64| ((1.0 + 4.0 * a) * (1.0 + 4.0 * b)).sqrt().recip();
    let joint = root(sigma2 - gamma_h, sigma2 + gamma_h);
    let marginal = 1.0 / (1.0 + 4.0 * sigma2);
    let mixed = root(sigma2 - gamma_h / 2.0, sigma2 + gamma_h / 2.0);
    Ok(joint + marginal - 2.0 * mixed)
}

/// Direct evaluation of `int |C_n(s,t)|^2 mu(ds,dt)` for the product of two
/// centered Gaussian weights with the given variance.
///
/// `C_n(s,t)` is the difference between the joint empirical characteristic
/// function and the product of the marginal ones. The integral is a
/// trapezoidal rule on a uniform `grid_points x grid_points` grid over
/// `[-grid_half_width, grid_half_width]^2` against the weight density. Meant
/// as an independent check of the kernel-based estimator, not for production.
pub fn ecf_quadrature_dcov(
    x: &[f64],
    y: &[f64],
    variance: f64,
    grid_half_width: f64,
    grid_points: usize,
) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Shape(format!("x has {} observations, y has {}", x.len(), y.len())));
    }
    if variance.is_nan() || variance <= 0.0 {
        return Err(Error::Config(format!("weight variance must be positive, got {variance}")));
    }
    if grid_points < 64 {
        return Err(Error::Config(format!("need at least 64 grid points, got {grid_points}")));
    }
    if grid_half_width.is_nan() || grid_half_width < 6.0 * variance.sqrt() {
        return Err(Error::Config(format!(
            "grid half-width {grid_half_width} covers less than 6 weight standard deviations"
        )));
    }
    let n = x.len();
    let nf = n as f64;
    let h = 2.0 * grid_half_width / (grid_points - 1) as f64;
    let nodes: Vec<f64> = (0..grid_points).map(|i| -grid_half_width + i as f64 * h).collect();
    let norm = (2.0 * PI * variance).sqrt();
    let weights: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let end = if i == 0 || i == grid_points - 1 { 0.5 } else { 1.0 };
            end * h * (-s * s / (2.0 * variance)).exp() / norm
        })
        .collect();

    // e^{i s x_j} tabulated per node
    let table = |v: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mut c = Vec::with_capacity(grid_points * n);
        let mut s = Vec::with_capacity(grid_points * n);
        for &u in &nodes {
            for &vj in v {
                let (sn, cs) = (u * vj).sin_cos();
                c.push(cs);
                s.push(sn);
            }
        }
        (c, s)
    };
    let (cx, sx) = table(x);
    let (cy, sy) = table(y);
    let marginal = |c: &[f64], s: &[f64], i: usize| -> (f64, f64) {
        let r = i * n..(i + 1) * n;
        (c[r.clone()].iter().sum::<f64>() / nf, s[r].iter().sum::<f64>() / nf)
    };
    let phi_x: Vec<(f64, f64)> = (0..grid_points).map(|i| marginal(&cx, &sx, i)).collect();
    let phi_y: Vec<(f64, f64)> = (0..grid_points).map(|i| marginal(&cy, &sy, i)).collect();

    let mut total = 0.0;
    for i in 0..grid_points {
        let (cxi, sxi) = (&cx[i * n..(i + 1) * n], &sx[i * n..(i + 1) * n]);
        let mut row = 0.0;
        for l in 0..grid_points {
            let (cyl, syl) = (&cy[l * n..(l + 1) * n], &sy[l * n..(l + 1) * n]);
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..n {
                re += cxi[j] * cyl[j] - sxi[j] * syl[j];
                im += cxi[j] * syl[j] + sxi[j] * cyl[j];
            }
            re /= nf;
            im /= nf;
            let (ax, bx) = phi_x[i];
            let (ay, by) = phi_y[l];
            let dre = re - (ax * ay - bx * by);
            let dim = im - (ax * by + bx * ay);
            row += weights[l] * (dre * dre + dim * dim);
        }
        total += weights[i] * row;
    }
    Ok(total)
}

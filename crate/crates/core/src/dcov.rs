//! Empirical distance covariance and correlation, and their lagged versions.
//!
//! For a sample of `m` pairs with kernel matrices `a_jk = k(x_j - x_k)` and
//! `b_jk = k(y_j - y_k)` the V-statistic is
//!
//! ```text
//! S1 = (1/m^2) sum_jk a_jk b_jk
//! S2 = (1/m^2) sum_jk a_jk * (1/m^2) sum_jk b_jk
//! S3 = (1/m^3) sum_j (sum_k a_jk) (sum_k b_jk)
//! T  = S1 + S2 - 2 S3
//! ```
//!
//! which is the weighted integral of the squared distance between the joint
//! empirical characteristic function and the product of the marginal ones.
//!
//! Lagged statistics at lag `h` are computed on the `m = n - h` pairs
//! `(x_j, x_{j+h})` and normalized by `m`. All lags of one series share a
//! single kernel matrix; the pairs at lag `h` read a shifted sub-block of it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::WeightMeasure;

/// Correlations in `[-CLAMP_SLACK, 0)` are clamped to zero.
pub const CLAMP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Statistic {
    Adcv,
    Adcf,
    Cdcv,
    Cdcf,
    ScaledAdcf,
    Acf,
}

/// Per-lag values of a dependence statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagCurve {
    pub lags: Vec<i64>,
    pub values: Vec<f64>,
    pub statistic: Statistic,
    /// `None` for the classical ACF.
    pub measure: Option<WeightMeasure>,
}

impl LagCurve {
    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    pub fn value_at(&self, lag: i64) -> Option<f64> {
        self.lags.iter().position(|&h| h == lag).map(|i| self.values[i])
    }
}

/// Dense symmetric matrix of pairwise kernel values with cached row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    m: usize,
    entries: Vec<f64>,
    row_sums: Vec<f64>,
    grand_sum: f64,
}

impl KernelMatrix {
    pub fn size(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.m + k]
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[f64] {
        &self.entries[j * self.m..(j + 1) * self.m]
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn grand_sum(&self) -> f64 {
        self.grand_sum
    }
}

/// Builds the `m x m` kernel matrix of `x`; rows are filled in parallel.
pub fn kernel_matrix(x: &[f64], measure: &WeightMeasure) -> Result<KernelMatrix> {
    measure.validate()?;
    let m = x.len();
    if m < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: m });
    }
    check_finite(x)?;
    let mut entries = vec![0.0; m * m];
    entries.par_chunks_mut(m).enumerate().for_each(|(j, row)| {
        let xj = x[j];
        for (e, &xk) in row.iter_mut().zip(x) {
            *e = measure.kernel(xj - xk);
        }
    });
    let row_sums: Vec<f64> = entries.chunks(m).map(|r| r.iter().sum()).collect();
    let grand_sum = compensated_sum(row_sums.iter().copied());
    Ok(KernelMatrix { m, entries, row_sums, grand_sum })
}

/// Neumaier-compensated summation.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Io { line: None, message: format!("non-finite value at position {i}") }),
        None => Ok(()),
    }
}

/// Row-level partial sums of one pass over a pair of kernel blocks.
#[derive(Clone, Copy, Default)]
struct RowSums {
    ab: f64,
    aa: f64,
    bb: f64,
    a: f64,
    b: f64,
}

/// Distance covariance of a pair sample together with both distance variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDcov {
    pub cross: f64,
    pub var_x: f64,
    pub var_y: f64,
    /// Magnitude of the largest term entering the variances; used to detect
    /// degenerate samples relative to rounding.
    scale: f64,
}

impl PairDcov {
    fn from_rows(rows: &[RowSums], m: usize) -> Self {
        let mf = m as f64;
        let m2 = mf * mf;
        let m3 = m2 * mf;
        let s_ab = compensated_sum(rows.iter().map(|r| r.ab)) / m2;
        let s_aa = compensated_sum(rows.iter().map(|r| r.aa)) / m2;
        let s_bb = compensated_sum(rows.iter().map(|r| r.bb)) / m2;
        let sum_a = compensated_sum(rows.iter().map(|r| r.a)) / m2;
        let sum_b = compensated_sum(rows.iter().map(|r| r.b)) / m2;
        let r_ab = compensated_sum(rows.iter().map(|r| r.a * r.b)) / m3;
        let r_aa = compensated_sum(rows.iter().map(|r| r.a * r.a)) / m3;
        let r_bb = compensated_sum(rows.iter().map(|r| r.b * r.b)) / m3;
        PairDcov {
            cross: s_ab + sum_a * sum_b - 2.0 * r_ab,
            var_x: s_aa + sum_a * sum_a - 2.0 * r_aa,
            var_y: s_bb + sum_b * sum_b - 2.0 * r_bb,
            scale: s_aa.abs().max(s_bb.abs()).max(sum_a * sum_a).max(sum_b * sum_b),
        }
    }

    /// Distance correlation `T / sqrt(T_x T_y)`, clamped to `[0, 1]`.
    pub fn correlation(&self) -> Result<f64> {
        let tol = 64.0 * f64::EPSILON * self.scale;
        if self.var_x <= tol || self.var_y <= tol {
            return Err(Error::DegenerateSeries("zero distance variance (constant sample)".into()));
        }
        let r = self.cross / (self.var_x * self.var_y).sqrt();
        clamp_correlation(r)
    }
}

fn clamp_correlation(r: f64) -> Result<f64> {
    if r.is_nan() || r < -CLAMP_SLACK {
        return Err(Error::Numerical(format!("distance correlation {r} is negative beyond rounding slack")));
    }
    Ok(r.clamp(0.0, 1.0))
}

/// Maps a logical observation index to a row of a kernel matrix.
pub(crate) trait IndexMap: Sync {
    fn at(&self, i: usize) -> usize;
}

/// Observation `i` of the resampled series is observation `idx[i]` of the
/// series the kernel matrix was built from.
pub(crate) struct Indexed<'a>(pub &'a [usize]);

impl IndexMap for Indexed<'_> {
    #[inline(always)]
    fn at(&self, i: usize) -> usize {
        self.0[i]
    }
}

/// One pass over the blocks `a_jk = kx[ix(ox+j), ix(ox+k)]` and
/// `b_jk = ky[iy(oy+j), iy(oy+k)]`, `j, k < m`.
pub(crate) fn pair_dcov<I: IndexMap>(
    kx: &KernelMatrix,
    ox: usize,
    ky: &KernelMatrix,
    oy: usize,
    m: usize,
    index: &I,
) -> PairDcov {
    let rows: Vec<RowSums> = (0..m)
        .map(|j| {
            let ra = kx.row(index.at(ox + j));
            let rb = ky.row(index.at(oy + j));
            let mut r = RowSums::default();
            for k in 0..m {
                let a = ra[index.at(ox + k)];
                let b = rb[index.at(oy + k)];
                r.ab += a * b;
                r.aa += a * a;
                r.bb += b * b;
                r.a += a;
                r.b += b;
            }
            r
        })
        .collect();
    PairDcov::from_rows(&rows, m)
}

/// Specialization of [`pair_dcov`] for contiguous, unpermuted blocks.
fn pair_dcov_contiguous(kx: &KernelMatrix, ox: usize, ky: &KernelMatrix, oy: usize, m: usize) -> PairDcov {
    let rows: Vec<RowSums> = (0..m)
        .map(|j| {
            let ra = &kx.row(ox + j)[ox..ox + m];
            let rb = &ky.row(oy + j)[oy..oy + m];
            let mut r = RowSums::default();
            for (&a, &b) in ra.iter().zip(rb) {
                r.ab += a * b;
                r.aa += a * a;
                r.bb += b * b;
                r.a += a;
                r.b += b;
            }
            r
        })
        .collect();
    PairDcov::from_rows(&rows, m)
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("x has {} observations, y has {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: x.len() });
    }
    check_finite(x)?;
    check_finite(y)
}

/// Streaming evaluation: kernel rows are generated on the fly, so memory
/// stays `O(m)` per worker. Rows are processed in parallel and reduced in
/// index order, which gives the same result as the kernel-matrix route.
fn pair_dcov_streaming(x: &[f64], y: &[f64], measure: &WeightMeasure) -> PairDcov {
    let m = x.len();
    let rows: Vec<RowSums> = (0..m)
        .into_par_iter()
        .map(|j| {
            let (xj, yj) = (x[j], y[j]);
            let mut r = RowSums::default();
            for (&xk, &yk) in x.iter().zip(y) {
                let a = measure.kernel(xj - xk);
                let b = measure.kernel(yj - yk);
                r.ab += a * b;
                r.aa += a * a;
                r.bb += b * b;
                r.a += a;
                r.b += b;
            }
            r
        })
        .collect();
    PairDcov::from_rows(&rows, m)
}

/// Empirical distance covariance (V-statistic) of the paired samples.
pub fn dcov_v(x: &[f64], y: &[f64], measure: &WeightMeasure) -> Result<f64> {
    measure.validate()?;
    check_pair(x, y)?;
    Ok(pair_dcov_streaming(x, y, measure).cross)
}

/// Distance covariance from two precomputed kernel matrices of equal size.
pub fn dcov_from_kernels(kx: &KernelMatrix, ky: &KernelMatrix) -> Result<f64> {
    if kx.size() != ky.size() {
        return Err(Error::Shape(format!("kernel matrices of size {} and {}", kx.size(), ky.size())));
    }
    Ok(pair_dcov_contiguous(kx, 0, ky, 0, kx.size()).cross)
}

/// Empirical distance correlation in `[0, 1]`.
pub fn dcor(x: &[f64], y: &[f64], measure: &WeightMeasure) -> Result<f64> {
    measure.validate()?;
    check_pair(x, y)?;
    pair_dcov_streaming(x, y, measure).correlation()
}

fn check_max_lag(n: usize, max_lag: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    if max_lag < 1 || max_lag > n - 2 {
        return Err(Error::Lag(format!("max_lag must lie in 1..={}, got {max_lag}", n - 2)));
    }
    Ok(())
}

/// Lagged pair statistics for `h = first..=max_lag` from a shared kernel matrix.
pub(crate) fn lagged_pairs<I: IndexMap>(
    k: &KernelMatrix,
    n: usize,
    first: usize,
    max_lag: usize,
    index: &I,
) -> Vec<PairDcov> {
    (first..=max_lag).map(|h| pair_dcov(k, 0, k, h, n - h, index)).collect()
}

/// Scaled ADCF `n R_n(h)`, `h = 1..=max_lag`, of the series whose
/// observation `i` is row `index.at(i)` of `k`; `n` is the series length.
pub(crate) fn scaled_adcf_indexed<I: IndexMap>(
    k: &KernelMatrix,
    n: usize,
    max_lag: usize,
    index: &I,
) -> Result<Vec<f64>> {
    lagged_pairs(k, n, 1, max_lag, index).iter().map(|p| p.correlation().map(|r| n as f64 * r)).collect()
}

pub(crate) fn scaled_adcf_kernel(k: &KernelMatrix, max_lag: usize) -> Result<Vec<f64>> {
    let n = k.size();
    (1..=max_lag)
        .map(|h| pair_dcov_contiguous(k, 0, k, h, n - h).correlation().map(|r| n as f64 * r))
        .collect()
}

/// Auto-distance covariance function `T_n(h)` for `h = 0..=max_lag`.
pub fn adcv(x: &[f64], max_lag: usize, measure: &WeightMeasure) -> Result<LagCurve> {
    check_max_lag(x.len(), max_lag)?;
    let k = kernel_matrix(x, measure)?;
    let n = x.len();
    let values = (0..=max_lag).map(|h| pair_dcov_contiguous(&k, 0, &k, h, n - h).cross).collect();
    Ok(LagCurve {
        lags: (0..=max_lag as i64).collect(),
        values,
        statistic: Statistic::Adcv,
        measure: Some(*measure),
    })
}

/// Auto-distance correlation function `R_n(h)` for `h = 1..=max_lag`.
///
/// With `scaled`, values are `n R_n(h)` with `n = x.len()`.
pub fn adcf(x: &[f64], max_lag: usize, measure: &WeightMeasure, scaled: bool) -> Result<LagCurve> {
    check_max_lag(x.len(), max_lag)?;
    let k = kernel_matrix(x, measure)?;
    let n = x.len();
    let values = if scaled {
        scaled_adcf_kernel(&k, max_lag)?
    } else {
        (1..=max_lag)
            .map(|h| pair_dcov_contiguous(&k, 0, &k, h, n - h).correlation())
            .collect::<Result<Vec<_>>>()?
    };
    Ok(LagCurve {
        lags: (1..=max_lag as i64).collect(),
        values,
        statistic: if scaled { Statistic::ScaledAdcf } else { Statistic::Adcf },
        measure: Some(*measure),
    })
}

fn cross_lagged(
    x: &[f64],
    y: &[f64],
    lags: &[i64],
    measure: &WeightMeasure,
    correlate: bool,
) -> Result<LagCurve> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("x has {} observations, y has {}", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    if let Some(h) = lags.iter().find(|h| h.unsigned_abs() as usize > n - 2) {
        return Err(Error::Lag(format!("|lag| must be at most {}, got {h}", n - 2)));
    }
    let kx = kernel_matrix(x, measure)?;
    let ky = kernel_matrix(y, measure)?;
    let values = lags
        .iter()
        .map(|&h| {
            let s = h.unsigned_abs() as usize;
            // h >= 0 pairs (x_j, y_{j+h}); h < 0 pairs (x_{j+|h|}, y_j)
            let (ox, oy) = if h >= 0 { (0, s) } else { (s, 0) };
            let p = pair_dcov_contiguous(&kx, ox, &ky, oy, n - s);
            if correlate {
                p.correlation()
            } else {
                Ok(p.cross)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LagCurve {
        lags: lags.to_vec(),
        values,
        statistic: if correlate { Statistic::Cdcf } else { Statistic::Cdcv },
        measure: Some(*measure),
    })
}

/// Cross-distance correlation function `R^{X,Y}_n(h)` at the given lags.
pub fn cdcf(x: &[f64], y: &[f64], lags: &[i64], measure: &WeightMeasure) -> Result<LagCurve> {
    cross_lagged(x, y, lags, measure, true)
}

/// Cross-distance covariance function `T^{X,Y}_n(h)` at the given lags.
pub fn cdcv(x: &[f64], y: &[f64], lags: &[i64], measure: &WeightMeasure) -> Result<LagCurve> {
    cross_lagged(x, y, lags, measure, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    #[default]
    Identity,
    Square,
    Abs,
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "id" | "none" => Ok(Transform::Identity),
            "square" | "sq" => Ok(Transform::Square),
            "abs" => Ok(Transform::Abs),
            other => Err(Error::Config(format!("unknown transform '{other}'"))),
        }
    }
}

/// Classical sample autocorrelation of the transformed series (mean
/// corrected, denominator `n`), `h = 1..=max_lag`.
pub fn acf(x: &[f64], max_lag: usize, transform: Transform) -> Result<LagCurve> {
    check_max_lag(x.len(), max_lag)?;
    check_finite(x)?;
    let y: Vec<f64> = match transform {
        Transform::Identity => x.to_vec(),
        Transform::Square => x.iter().map(|v| v * v).collect(),
        Transform::Abs => x.iter().map(|v| v.abs()).collect(),
    };
    let values = sample_acf(&y, max_lag)?;
    Ok(LagCurve { lags: (1..=max_lag as i64).collect(), values, statistic: Statistic::Acf, measure: None })
}

/// Sample autocovariances `gamma(0..=max_lag)` with denominator `n`.
pub(crate) fn sample_autocovariance(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = x.iter().map(|v| v - mean).collect();
    (0..=max_lag)
        .map(|h| d[..n - h].iter().zip(&d[h..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect()
}

pub(crate) fn sample_acf(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let g = sample_autocovariance(x, max_lag);
    let scale = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
    if g[0] <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateSeries("zero sample variance".into()));
    }
    Ok(g[1..].iter().map(|v| v / g[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gauss(v: f64) -> WeightMeasure {
        WeightMeasure::gaussian(v).unwrap()
    }

    fn sz(a: f64) -> WeightMeasure {
        WeightMeasure::szekely(a).unwrap()
    }

    /// Literal O(m^3) evaluation of the three expectations.
    fn triple_sum(x: &[f64], y: &[f64], m: &WeightMeasure) -> f64 {
        let n = x.len();
        let nf = n as f64;
        let (mut s1, mut sa, mut sb, mut s3) = (0.0, 0.0, 0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                let a = m.kernel(x[j] - x[k]);
                let b = m.kernel(y[j] - y[k]);
                s1 += a * b;
                sa += a;
                sb += b;
                for l in 0..n {
                    s3 += a * m.kernel(y[j] - y[l]);
                }
            }
        }
        s1 / (nf * nf) + (sa / (nf * nf)) * (sb / (nf * nf)) - 2.0 * s3 / (nf * nf * nf)
    }

    fn normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.sample(rand_distr::StandardNormal)).collect()
    }

    #[test]
    fn kernel_matrix_examples() {
        let k = kernel_matrix(&[0.0, 1.0], &sz(1.0)).unwrap();
        assert_eq!(k.row(0), &[0.0, 1.0]);
        assert_eq!(k.row(1), &[1.0, 0.0]);
        assert_eq!(k.grand_sum(), 2.0);

        let k = kernel_matrix(&[2.5; 4], &gauss(0.5)).unwrap();
        assert!(k.row(2).iter().all(|&v| v == 1.0));

        let k = kernel_matrix(&[0.0, 1.0, 3.0], &gauss(0.5)).unwrap();
        assert!((k.get(0, 1) - (-0.25f64).exp()).abs() < 1e-15);
        assert!((k.get(0, 2) - (-2.25f64).exp()).abs() < 1e-15);
        assert!((k.get(1, 2) - (-1.0f64).exp()).abs() < 1e-15);
        for j in 0..3 {
            assert_eq!(k.get(j, j), 1.0);
            for i in 0..3 {
                assert_eq!(k.get(i, j), k.get(j, i));
            }
        }
        let total: f64 = k.row_sums().iter().sum();
        assert!((total - k.grand_sum()).abs() < 1e-12 * total);

        assert!(matches!(kernel_matrix(&[1.0], &gauss(1.0)), Err(Error::TooFewObservations { .. })));
    }

    #[test]
    fn dcov_small_examples() {
        let v = dcov_v(&[0.0, 1.0], &[0.0, 1.0], &sz(1.0)).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        assert!((triple_sum(&[0.0, 1.0], &[0.0, 1.0], &sz(1.0)) - 0.25).abs() < 1e-15);
        assert_eq!(dcor(&[0.0, 1.0], &[0.0, 1.0], &sz(1.0)).unwrap(), 1.0);

        let x = normals(15, 3);
        for m in [sz(1.0), gauss(0.5), WeightMeasure::stable(1.5, 1.0).unwrap()] {
            let v = dcov_v(&x, &[4.0; 15], &m).unwrap();
            assert!(v.abs() < 1e-15, "{v}");
        }
        assert!(matches!(dcov_v(&[1.0, 2.0], &[1.0], &sz(1.0)), Err(Error::Shape(_))));
    }

    #[test]
    fn streaming_matches_kernel_route() {
        let x = normals(200, 1);
        let y: Vec<f64> = normals(200, 2).iter().zip(&x).map(|(e, x)| x * x + e).collect();
        for m in [sz(1.0), sz(0.5), gauss(0.5), gauss(2.0)] {
            let a = dcov_v(&x, &y, &m).unwrap();
            let kx = kernel_matrix(&x, &m).unwrap();
            let ky = kernel_matrix(&y, &m).unwrap();
            let b = dcov_from_kernels(&kx, &ky).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs(), "{a} vs {b}");
            let c = triple_sum(&x[..20], &y[..20], &m);
            let d = dcov_v(&x[..20], &y[..20], &m).unwrap();
            assert!((c - d).abs() <= 1e-12 * c.abs());
        }
    }

    #[test]
    fn dcor_sign_flip_is_one() {
        let x = normals(40, 9);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        for m in [sz(1.0), gauss(0.5)] {
            assert!((dcor(&x, &y, &m).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dcor_degenerate() {
        let x = normals(10, 1);
        assert!(matches!(dcor(&x, &[1.0; 10], &gauss(0.5)), Err(Error::DegenerateSeries(_))));
        assert!(matches!(dcor(&[3.0; 10], &x, &sz(1.0)), Err(Error::DegenerateSeries(_))));
    }

    #[test]
    fn clamp_rules() {
        assert_eq!(clamp_correlation(-5e-10).unwrap(), 0.0);
        assert_eq!(clamp_correlation(1.0 + 1e-15).unwrap(), 1.0);
        assert!(matches!(clamp_correlation(-1e-6), Err(Error::Numerical(_))));
    }

    #[test]
    fn adcf_periodic_series() {
        let x: Vec<f64> = (0..50).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        for m in [sz(1.0), gauss(0.5)] {
            let c = adcf(&x, 4, &m, false).unwrap();
            assert!((c.value_at(2).unwrap() - 1.0).abs() < 1e-12);
            assert!((c.value_at(4).unwrap() - 1.0).abs() < 1e-12);
            // lag-1 pairs are (1,-1) or (-1,1): y is a function of x
            assert!((c.value_at(1).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn adcf_scaled_and_lag_errors() {
        let x = normals(60, 4);
        let m = gauss(0.5);
        let r = adcf(&x, 5, &m, false).unwrap();
        let s = adcf(&x, 5, &m, true).unwrap();
        assert_eq!(s.statistic, Statistic::ScaledAdcf);
        for (a, b) in r.values.iter().zip(&s.values) {
            assert!((a * 60.0 - b).abs() < 1e-12 * b.max(1e-300));
        }
        // lag h uses the n - h pairs (x_j, x_{j+h})
        let direct = dcor(&x[..57], &x[3..], &m).unwrap();
        assert!((r.value_at(3).unwrap() - direct).abs() < 1e-13);
        assert!(matches!(adcf(&x, 0, &m, false), Err(Error::Lag(_))));
        assert!(matches!(adcf(&x, 59, &m, false), Err(Error::Lag(_))));
        assert!(adcf(&x, 58, &m, false).is_ok());
    }

    #[test]
    fn adcv_lag_zero_is_distance_variance() {
        let x = normals(80, 5);
        let m = gauss(2.0);
        let c = adcv(&x, 3, &m).unwrap();
        assert_eq!(c.lags, vec![0, 1, 2, 3]);
        let v = dcov_v(&x, &x, &m).unwrap();
        assert!((c.values[0] - v).abs() < 1e-13 * v);
    }

    #[test]
    fn cdcf_alignment() {
        let z = normals(103, 6);
        let x = z[3..].to_vec();
        // y_t = x_{t-3}
        let y = z[..100].to_vec();
        let m = sz(1.0);
        let c = cdcf(&x, &y, &[-3, 0, 3], &m).unwrap();
        assert!((c.value_at(3).unwrap() - 1.0).abs() < 1e-12);
        assert!(c.value_at(-3).unwrap() < 0.5);
        let d0 = dcor(&x, &y, &m).unwrap();
        assert!((c.value_at(0).unwrap() - d0).abs() < 1e-12);
        // a lead in y shows up at negative lags
        let c = cdcf(&y, &x, &[-3], &m).unwrap();
        assert!((c.values[0] - 1.0).abs() < 1e-12);
        assert!(matches!(cdcf(&x, &y, &[99], &m), Err(Error::Lag(_))));
    }

    #[test]
    fn acf_examples() {
        let trend: Vec<f64> = (0..200).map(|t| t as f64).collect();
        let a = acf(&trend, 1, Transform::Identity).unwrap();
        assert!(a.values[0] > 0.95);
        assert!(matches!(acf(&[2.0; 20], 3, Transform::Identity), Err(Error::DegenerateSeries(_))));
        let x = [1.0, -2.0, 3.0, -4.0];
        let sq = acf(&x, 1, Transform::Square).unwrap();
        let ab = acf(&x, 1, Transform::Abs).unwrap();
        let direct_sq = sample_acf(&[1.0, 4.0, 9.0, 16.0], 1).unwrap();
        let direct_ab = sample_acf(&[1.0, 2.0, 3.0, 4.0], 1).unwrap();
        assert_eq!(sq.values, direct_sq);
        assert_eq!(ab.values, direct_ab);
        // mean-corrected, denominator n: gamma(1)/gamma(0) for 1..4 = 1.25/5
        assert!((direct_ab[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn acf_white_noise_inside_bands() {
        let x = normals(2000, 8);
        let a = acf(&x, 20, Transform::Identity).unwrap();
        let band = 1.96 / (2000f64).sqrt();
        let outside = a.values.iter().filter(|v| v.abs() > band).count();
        assert!(outside <= 4, "{outside} of 20 lags outside the band");
    }

    #[test]
    fn compensated_sum_cancellation() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }
}

//! Weight measures for distance covariance and their scalar kernels.
//!
//! Every supported measure is a product `mu_1 x mu_1` of univariate
//! components. The distance covariance only ever needs the kernel of the
//! component evaluated at a difference of observations:
//!
//! * Székely power weight `|s|^{-alpha-1}`: kernel `|x|^alpha`. The
//!   normalizing constant of the density cancels and is never computed.
//! * Finite (probability) weights: kernel is the real characteristic
//!   function of the weight, `exp(-var x^2 / 2)` for a centered Gaussian and
//!   `exp(-(scale |x|)^beta)` for a symmetric stable law.
//!
//! Both families enter the V-statistic through the same three-term formula
//! (for the power weight each kernel factor carries a minus sign, and the
//! signs cancel in every product).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    SzekelyPower,
    GaussianCF,
    StableCF,
}

/// A product weight measure `mu = mu_1 x mu_1` on the plane.
///
/// Construct through [`WeightMeasure::szekely`], [`WeightMeasure::gaussian`]
/// or [`WeightMeasure::stable`], which validate parameters, or parse the
/// textual form (`szekely:alpha=1.0`, `gauss:var=0.5`,
/// `stable:beta=1.5,scale=1.0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WeightMeasure {
    SzekelyPower { alpha: f64 },
    GaussianCF { variance: f64 },
    StableCF { beta: f64, scale: f64 },
}

/// Existence and residual-theory classification of a weight measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// The distance covariance is finite once the data have `required_moment`
    /// finite absolute moments.
    pub satisfies_lemma1: bool,
    /// The integrability condition that makes the residual limit theory for
    /// fitted AR models valid.
    pub satisfies_int_res: bool,
    pub required_moment: f64,
}

impl WeightMeasure {
    pub fn szekely(alpha: f64) -> Result<Self> {
        let m = WeightMeasure::SzekelyPower { alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn gaussian(variance: f64) -> Result<Self> {
        let m = WeightMeasure::GaussianCF { variance };
        m.validate()?;
        Ok(m)
    }

    pub fn stable(beta: f64, scale: f64) -> Result<Self> {
        let m = WeightMeasure::StableCF { beta, scale };
        m.validate()?;
        Ok(m)
    }

    pub fn kind(&self) -> MeasureKind {
        match self {
            WeightMeasure::SzekelyPower { .. } => MeasureKind::SzekelyPower,
            WeightMeasure::GaussianCF { .. } => MeasureKind::GaussianCF,
            WeightMeasure::StableCF { .. } => MeasureKind::StableCF,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightMeasure::SzekelyPower { alpha } => {
                if !(alpha > 0.0 && alpha < 2.0) {
                    return Err(Error::config(format!("szekely weight needs 0 < alpha < 2, got {alpha}")));
                }
            }
            WeightMeasure::GaussianCF { variance } => {
                if !(variance > 0.0 && variance.is_finite()) {
                    return Err(Error::config(format!("gaussian weight needs variance > 0, got {variance}")));
                }
            }
            WeightMeasure::StableCF { beta, scale } => {
                if !(beta > 0.0 && beta <= 2.0) {
                    return Err(Error::config(format!("stable weight needs 0 < beta <= 2, got {beta}")));
                }
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::config(format!("stable weight needs scale > 0, got {scale}")));
                }
            }
        }
        Ok(())
    }

    /// Kernel of the component measure at `x`.
    #[inline]
    pub fn kernel(&self, x: f64) -> f64 {
        match *self {
            WeightMeasure::SzekelyPower { alpha } => {
                if alpha == 1.0 {
                    x.abs()
                } else {
                    x.abs().powf(alpha)
                }
            }
            WeightMeasure::GaussianCF { variance } => (-0.5 * variance * x * x).exp(),
            WeightMeasure::StableCF { beta, scale } => {
                let u = scale * x.abs();
                if beta == 2.0 {
                    (-u * u).exp()
                } else {
                    (-u.powf(beta)).exp()
                }
            }
        }
    }

    pub fn admissibility(&self) -> Admissibility {
        match *self {
            WeightMeasure::SzekelyPower { alpha } => {
                Admissibility { satisfies_lemma1: true, satisfies_int_res: false, required_moment: alpha }
            }
            WeightMeasure::GaussianCF { .. } | WeightMeasure::StableCF { .. } => {
                Admissibility { satisfies_lemma1: true, satisfies_int_res: true, required_moment: 0.0 }
            }
        }
    }

    /// Whether the kernel is a characteristic function (finite measure).
    pub fn is_finite_measure(&self) -> bool {
        !matches!(self, WeightMeasure::SzekelyPower { .. })
    }
}

/// Kernel of `measure` at `x`, after validating the measure.
pub fn kernel_eval(measure: &WeightMeasure, x: f64) -> Result<f64> {
    measure.validate()?;
    if !x.is_finite() {
        return Err(Error::config(format!("kernel argument must be finite, got {x}")));
    }
    Ok(measure.kernel(x))
}

pub fn admissibility(measure: &WeightMeasure) -> Admissibility {
    measure.admissibility()
}

impl fmt::Display for WeightMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightMeasure::SzekelyPower { alpha } => write!(f, "szekely:alpha={alpha}"),
            WeightMeasure::GaussianCF { variance } => write!(f, "gauss:var={variance}"),
            WeightMeasure::StableCF { beta, scale } => {
                write!(f, "stable:beta={beta},scale={scale}")
            }
        }
    }
}

impl FromStr for WeightMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::config(format!("expected key=value in measure spec, got '{item}'")))?;
            let v: f64 =
                v.trim().parse().map_err(|_| Error::config(format!("bad number '{v}' in measure spec")))?;
            params.push((k.trim().to_ascii_lowercase(), v));
        }
        let take = |key: &str, default: Option<f64>| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .or(default)
                .ok_or_else(|| Error::config(format!("measure '{name}' requires '{key}'")))
        };
        let allowed: &[&str] = match name.to_ascii_lowercase().as_str() {
            "szekely" => &["alpha"],
            "gauss" | "gaussian" => &["var"],
            "stable" => &["beta", "scale"],
            other => return Err(Error::config(format!("unknown measure '{other}'"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::config(format!("unknown parameter '{k}' for measure '{name}'")));
        }
        match name.to_ascii_lowercase().as_str() {
            "szekely" => WeightMeasure::szekely(take("alpha", Some(1.0))?),
            "stable" => WeightMeasure::stable(take("beta", None)?, take("scale", Some(1.0))?),
            _ => WeightMeasure::gaussian(take("var", None)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        let sz = WeightMeasure::szekely(1.0).unwrap();
        assert_eq!(kernel_eval(&sz, -3.0).unwrap(), 3.0);
        let g = WeightMeasure::gaussian(0.5).unwrap();
        assert_eq!(kernel_eval(&g, 0.0).unwrap(), 1.0);
        assert!((kernel_eval(&g, 2.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((kernel_eval(&g, 2.0).unwrap() - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn gaussian_and_stable_agree_at_beta_two() {
        // N(0, 0.5) weight equals the stable kernel with beta = 2, scale = 1/2
        let g = WeightMeasure::gaussian(0.5).unwrap();
        let s = WeightMeasure::stable(2.0, 0.5).unwrap();
        for x in [-3.0, -0.2, 0.0, 0.7, 5.0] {
            assert!((g.kernel(x) - s.kernel(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(WeightMeasure::szekely(0.0).is_err());
        assert!(WeightMeasure::szekely(2.0).is_err());
        assert!(WeightMeasure::gaussian(-1.0).is_err());
        assert!(WeightMeasure::stable(2.5, 1.0).is_err());
        assert!(WeightMeasure::stable(1.0, 0.0).is_err());
        let bad = WeightMeasure::GaussianCF { variance: 0.0 };
        assert!(matches!(kernel_eval(&bad, 1.0), Err(Error::Config(_))));
    }

    #[test]
    fn admissibility_examples() {
        let a = WeightMeasure::gaussian(0.5).unwrap().admissibility();
        assert!(a.satisfies_int_res);
        assert_eq!(a.required_moment, 0.0);
        let a = WeightMeasure::szekely(1.0).unwrap().admissibility();
        assert!(!a.satisfies_int_res);
        assert_eq!(a.required_moment, 1.0);
        let a = WeightMeasure::stable(2.0, 1.0).unwrap().admissibility();
        assert!(a.satisfies_int_res);
        assert_eq!(a.required_moment, 0.0);
    }

    #[test]
    fn parse_and_display() {
        let m: WeightMeasure = "szekely:alpha=1.0".parse().unwrap();
        assert_eq!(m, WeightMeasure::SzekelyPower { alpha: 1.0 });
        let m: WeightMeasure = "gauss:var=0.5".parse().unwrap();
        assert_eq!(m, WeightMeasure::GaussianCF { variance: 0.5 });
        let m: WeightMeasure = "stable:beta=1.5,scale=1.0".parse().unwrap();
        assert_eq!(m, WeightMeasure::StableCF { beta: 1.5, scale: 1.0 });
        assert_eq!(m.to_string().parse::<WeightMeasure>().unwrap(), m);
        assert!("gauss".parse::<WeightMeasure>().is_err());
        assert!("gauss:var=abc".parse::<WeightMeasure>().is_err());
        assert!("cauchy:x=1".parse::<WeightMeasure>().is_err());
        assert!("gauss:var=1,alpha=2".parse::<WeightMeasure>().is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn any_measure() -> impl Strategy<Value = WeightMeasure> {
            prop_oneof![
                (0.05f64..1.95).prop_map(|a| WeightMeasure::SzekelyPower { alpha: a }),
                (0.01f64..10.0).prop_map(|v| WeightMeasure::GaussianCF { variance: v }),
                (0.05f64..=2.0, 0.1f64..5.0).prop_map(|(b, s)| WeightMeasure::StableCF { beta: b, scale: s }),
            ]
        }

        proptest! {
            #[test]
            fn kernel_is_even(m in any_measure(), x in -50.0f64..50.0) {
                prop_assert_eq!(m.kernel(x), m.kernel(-x));
            }

            #[test]
            fn cf_kernels_bounded_and_monotone(m in any_measure(), x in 0.0f64..20.0, dx in 0.0f64..5.0) {
                prop_assume!(m.is_finite_measure());
                let k = m.kernel(x);
                prop_assert!(k <= 1.0);
                prop_assert!(m.kernel(x + dx) <= k);
                if x < 3.0 { prop_assert!(k > 0.0); }
            }

            #[test]
            fn power_kernel_homogeneous(alpha in 0.05f64..1.95, c in -20.0f64..20.0, x in -20.0f64..20.0) {
                let m = WeightMeasure::SzekelyPower { alpha };
                let lhs = m.kernel(c * x);
                let rhs = c.abs().powf(alpha) * m.kernel(x);
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
            }
        }
    }
}

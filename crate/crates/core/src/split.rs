//! Split functions: the rule that picks the point at which a cell is bisected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QuantError, Result};
use crate::measures::{conditional_mean_between, conditional_median_between, mass_between, Distribution, Point, MASS_TOL};
use crate::quad::{integrate_over, Tolerance};

/// Absolute tolerance on the conditional log-moment of the geometric-mean rule.
pub const GEOMEAN_LOG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitRule {
    Mean,
    Median,
    #[serde(rename = "geomean")]
    GeometricMean,
}

impl SplitRule {
    /// Command-line spelling.
    pub fn as_str(&self) -> &'static str {
        match self {
            SplitRule::Mean => "mean",
            SplitRule::Median => "median",
            SplitRule::GeometricMean => "geomean",
        }
    }

    /// The constant `c(f)` of the split-chain upper bound: 1/2 for the mean, 1 for the median, none for
    /// the geometric mean.
    pub fn c_factor(&self) -> Option<f64> {
        match self {
            SplitRule::Mean => Some(0.5),
            SplitRule::Median => Some(1.0),
            SplitRule::GeometricMean => None,
        }
    }

    /// Split point of the law `d` restricted to `(a, b]`.
    pub fn split<D: Distribution + ?Sized>(&self, d: &D, a: f64, b: f64) -> Result<f64> {
        self.split_between(d, &Point::eval(d, a), &Point::eval(d, b))
    }

    /// As [`split`](Self::split) with the endpoint CDF values already known.
    pub fn split_between<D: Distribution + ?Sized>(&self, d: &D, lo: &Point, hi: &Point) -> Result<f64> {
        match self {
            SplitRule::Mean => conditional_mean_between(d, lo, hi),
            SplitRule::Median => conditional_median_between(d, lo, hi),
            SplitRule::GeometricMean => geometric_mean_between(d, lo, hi),
        }
    }
}

impl fmt::Display for SplitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitRule {
    type Err = QuantError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(SplitRule::Mean),
            "median" => Ok(SplitRule::Median),
            "geomean" | "geometric-mean" | "geometric_mean" => Ok(SplitRule::GeometricMean),
            other => Err(QuantError::InvalidParameter(format!("unknown split rule `{other}`"))),
        }
    }
}

/// `exp(E[ln X | lo < X <= hi])`.
///
/// The log-moment is integrated relative to `ln c`, with `c` the conditional median, so the
/// quadrature sees a small integrand even for cells far out in a tail.
fn geometric_mean_between<D: Distribution + ?Sized>(d: &D, lo: &Point, hi: &Point) -> Result<f64> {
    let (slo, shi) = d.support();
    let a = lo.x.max(slo);
    let b = hi.x.min(shi);
    if a < 0.0 {
        return Err(QuantError::NegativeSupport { lo: a });
    }
    let m = mass_between(lo, hi);
    if m <= MASS_TOL {
        return Err(QuantError::ZeroMassCell { lo: lo.x, hi: hi.x });
    }
    let c = conditional_median_between(d, lo, hi)?;
    if c <= 0.0 {
        return Err(QuantError::NegativeSupport { lo: a });
    }
    let ln_c = c.ln();
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let p = d.pdf(t);
        if p == 0.0 {
            0.0
        } else {
            (t.ln() - ln_c) * p
        }
    };
    let scale = if b.is_finite() { b - a } else { d.scale().max(c - a) };
    let r = integrate_over(integrand, a, b, c, scale, Tolerance::absolute(GEOMEAN_LOG_TOL * m));
    if !r.converged || !r.value.is_finite() {
        return Err(QuantError::NonFiniteMean);
    }
    let g = (ln_c + r.value / m).exp();
    Ok(g.clamp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Exponential, Gaussian, Uniform};

    #[test]
    fn rule_spellings_round_trip() {
        for rule in [SplitRule::Mean, SplitRule::Median, SplitRule::GeometricMean] {
            assert_eq!(rule.as_str().parse::<SplitRule>().unwrap(), rule);
        }
        assert!("mode".parse::<SplitRule>().is_err());
    }

    #[test]
    fn mean_and_median_of_exponential() {
        let d = Exponential::new(1.0).unwrap();
        assert!((SplitRule::Mean.split(&d, 0.0, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        assert!((SplitRule::Mean.split(&d, 1.0, f64::INFINITY).unwrap() - 2.0).abs() < 1e-14);
        let e = std::f64::consts::E;
        let expected = (1.0 - 2.0 / e) / (1.0 - 1.0 / e);
        assert!((SplitRule::Mean.split(&d, 0.0, 1.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.418023).abs() < 1e-6);
        let med = SplitRule::Median.split(&d, 0.0, f64::INFINITY).unwrap();
        assert!((med - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn median_of_uniform_half_cell() {
        let u = Uniform::unit();
        assert!((SplitRule::Median.split(&u, 0.0, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((SplitRule::Median.split(&u, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn geometric_mean_of_uniform_one_e() {
        let e = std::f64::consts::E;
        let u = Uniform::new(1.0, e).unwrap();
        let g = SplitRule::GeometricMean.split(&u, 1.0, e).unwrap();
        assert!((g - (1.0 / (e - 1.0)).exp()).abs() < 1e-10, "{g}");
    }

    #[test]
    fn geometric_mean_of_exponential_matches_euler_gamma() {
        // E[ln X] = -gamma for Exp(1)
        let d = Exponential::new(1.0).unwrap();
        let g = SplitRule::GeometricMean.split(&d, 0.0, f64::INFINITY).unwrap();
        let euler_gamma = 0.577_215_664_901_532_9_f64;
        assert!((g - (-euler_gamma).exp()).abs() < 1e-9, "{g}");
    }

    #[test]
    fn geometric_mean_rejects_negative_cells() {
        let d = Gaussian::standard();
        assert!(matches!(
            SplitRule::GeometricMean.split(&d, f64::NEG_INFINITY, f64::INFINITY),
            Err(QuantError::NegativeSupport { .. })
        ));
    }

    #[test]
    fn symmetric_law_mean_equals_median() {
        let d = Gaussian::standard();
        let a = SplitRule::Mean.split(&d, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        let b = SplitRule::Median.split(&d, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!(a.abs() < 1e-10 && b.abs() < 1e-10);
        let a = SplitRule::Mean.split(&d, -1.5, 1.5).unwrap();
        let b = SplitRule::Median.split(&d, -1.5, 1.5).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn zero_mass_cell_is_an_error() {
        let d = Exponential::new(1.0).unwrap();
        assert!(matches!(SplitRule::Mean.split(&d, -2.0, -1.0), Err(QuantError::ZeroMassCell { .. })));
    }
}

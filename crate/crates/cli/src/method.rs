use std::fmt;
use std::str::FromStr;

use splitquant::arith::compress_asymptotic;
use splitquant::metrics::w1_continuous_discrete;
use splitquant::{
    asymptotically_optimal_quantizer, compress, optimal_quantizer, quantization_w1, quantize, DiscreteMeasure,
    Distribution, QuantError, SplitRule,
};

use crate::config::Size;

/// A way of building an `N`-atom representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Split(SplitRule),
    Optimal,
    Asympt,
}

impl Method {
    pub fn is_split(&self) -> bool {
        matches!(self, Method::Split(_))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Split(r) => r.as_str(),
            Method::Optimal => "optimal",
            Method::Asympt => "asympt",
        }
    }

    pub fn quantize(&self, d: &dyn Distribution, size: Size) -> splitquant::Result<DiscreteMeasure> {
        match self {
            Method::Split(rule) => quantize(d, *rule, split_depth(size)?),
            Method::Optimal => optimal_quantizer(d, size.atoms()),
            Method::Asympt => asymptotically_optimal_quantizer(d, size.atoms()),
        }
    }

    /// Builds the representation and its `W1` error, using per-cell closed forms when available.
    pub fn quantize_with_w1(&self, d: &dyn Distribution, size: Size) -> splitquant::Result<(DiscreteMeasure, f64)> {
        let m = self.quantize(d, size)?;
        let w1 = match self {
            Method::Split(rule) => quantization_w1(d, *rule, split_depth(size)?)?.value,
            _ => w1_continuous_discrete(d, &m)?,
        };
        Ok((m, w1))
    }

    /// Discrete compression back to `size` atoms.
    pub fn compress(&self, m: &DiscreteMeasure, size: Size) -> splitquant::Result<DiscreteMeasure> {
        match self {
            Method::Split(rule) => compress(m, *rule, split_depth(size)?),
            Method::Asympt => compress_asymptotic(m, size.atoms()),
            Method::Optimal => Err(QuantError::UnsupportedRule("optimal")),
        }
    }
}

fn split_depth(size: Size) -> splitquant::Result<u32> {
    size.depth().ok_or_else(|| {
        QuantError::InvalidParameter(format!("rep size {} is not a power of two", size.atoms()))
    })
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = QuantError;

    fn from_str(s: &str) -> splitquant::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "optimal" => Ok(Method::Optimal),
            "asympt" | "asymptotic" => Ok(Method::Asympt),
            other => other
                .parse::<SplitRule>()
                .map(Method::Split)
                .map_err(|_| QuantError::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("optimal".parse::<Method>().unwrap(), Method::Optimal);
        assert_eq!("Asymptotic".parse::<Method>().unwrap(), Method::Asympt);
        assert_eq!("median".parse::<Method>().unwrap(), Method::Split(SplitRule::Median));
        assert!("lloyd".parse::<Method>().is_err());
        for m in [Method::Optimal, Method::Asympt, Method::Split(SplitRule::Mean)] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }

    #[test]
    fn optimal_has_no_compression() {
        let m = splitquant::DiscreteMeasure::dirac(1.0);
        assert!(Method::Optimal.compress(&m, Size::Atoms(4)).is_err());
        assert_eq!(Method::Asympt.compress(&m, Size::Atoms(4)).unwrap(), m);
    }
}

//! Empirical-measure baseline: sampling, empirical `W1`, and the sample count at which Monte
//! Carlo matches a quantizer's error.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{ArithOp, Pushforward};
use crate::error::{QuantError, Result};
use crate::measures::{mc_sample_stream, DiscreteMeasure, Distribution};
use crate::metrics::{w1_continuous_discrete, w1_discrete};
use crate::quad::{integrate_over, Tolerance};
use crate::util::NeumaierSum;

/// Relative tolerance of the `int sqrt(F (1 - F))` quadrature.
pub const ASYMPTOTIC_CONSTANT_REL_TOL: f64 = 1e-9;

/// SplitMix64 finalizer. Bijective on `u64`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `index`: `seed ^ splitmix64(index)`. Independent of scheduling.
pub fn replicate_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

/// `W1` between `d` and the empirical measure of `samples`.
pub fn empirical_w1_from_samples<D: Distribution + ?Sized>(d: &D, samples: &[f64]) -> Result<f64> {
    let m = DiscreteMeasure::empirical(samples)?;
    w1_continuous_discrete(d, &m)
}

/// `W1` between `d` and the empirical measure of `n_samples` seeded draws.
pub fn empirical_w1<D: Distribution + ?Sized>(d: &D, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(QuantError::InvalidParameter("n_samples must be at least 1".into()));
    }
    empirical_w1_from_samples(d, &mc_sample_stream(d, n_samples, seed))
}

/// `sqrt(2 / pi) * int sqrt(F (1 - F))`, the limit of `sqrt(n) E[W1]` for empirical measures.
pub fn asymptotic_constant<D: Distribution + ?Sized>(d: &D) -> Result<f64> {
    let (lo, hi) = d.support();
    let integrand = |x: f64| {
        let f = d.cdf(x);
        let s = d.sf(x);
        (f * s).max(0.0).sqrt()
    };
    let c = d.median();
    let r = integrate_over(integrand, lo, hi, c, d.scale(), Tolerance::relative(ASYMPTOTIC_CONSTANT_REL_TOL));
    if !r.converged || !r.value.is_finite() {
        return Err(QuantError::DivergentIntegral);
    }
    Ok((2.0 / std::f64::consts::PI).sqrt() * r.value)
}

/// [`asymptotic_constant`] of a discrete measure; the integrand is a step function.
pub fn asymptotic_constant_discrete(m: &DiscreteMeasure) -> f64 {
    let mut cdf = 0.0;
    let mut acc = NeumaierSum::default();
    for pair in m.atoms().windows(2) {
        cdf += pair[0].weight;
        let s = (1.0 - cdf).max(0.0);
        acc.add((cdf * s).sqrt() * (pair[1].position - pair[0].position));
    }
    (2.0 / std::f64::consts::PI).sqrt() * acc.sum()
}

/// `count` draws of `op` folded over one independent draw of each operand.
/// Operand `j` uses the stream seeded with `replicate_seed(seed, j)`.
pub fn pushforward_sample_stream(operands: &[&dyn Distribution], op: ArithOp, count: usize, seed: u64) -> Vec<f64> {
    let mut out = match operands.first() {
        Some(d) => mc_sample_stream(*d, count, replicate_seed(seed, 0)),
        None => return Vec::new(),
    };
    for (j, d) in operands.iter().enumerate().skip(1) {
        let ys = mc_sample_stream(*d, count, replicate_seed(seed, j as u64));
        for (x, y) in out.iter_mut().zip(ys) {
            *x = op.apply(*x, y);
        }
    }
    out
}

/// `W1` between `reference` and the empirical measure of `n_samples` draws of the pushforward.
pub fn empirical_w1_pushforward(
    operands: &[&dyn Distribution],
    op: ArithOp,
    reference: &Pushforward,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    if n_samples == 0 || operands.is_empty() {
        return Err(QuantError::InvalidParameter("need at least one operand and one sample".into()));
    }
    let m = DiscreteMeasure::empirical(&pushforward_sample_stream(operands, op, n_samples, seed))?;
    match reference {
        Pushforward::Continuous(d, _) => w1_continuous_discrete(d.as_ref(), &m),
        Pushforward::Discrete(r, _) => Ok(w1_discrete(r, &m)),
    }
}

/// Smallest `n` with `constant / sqrt(n) <= target_w1`.
pub fn equivalent_count_from_constant(constant: f64, target_w1: f64) -> Result<u64> {
    if !(target_w1 > 0.0 && target_w1.is_finite()) {
        return Err(QuantError::InvalidParameter(format!("target W1 must be positive, got {target_w1}")));
    }
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(QuantError::DivergentIntegral);
    }
    let ratio = constant / target_w1;
    Ok((ratio * ratio).ceil().max(1.0) as u64)
}

/// Number of Monte Carlo samples whose expected empirical `W1` matches `target_w1`.
pub fn equivalent_mc_count<D: Distribution + ?Sized>(d: &D, target_w1: f64) -> Result<u64> {
    equivalent_count_from_constant(asymptotic_constant(d)?, target_w1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub n_samples: usize,
    pub replicates: usize,
    pub mean_w1: f64,
    /// Sample standard deviation over replicates; zero for a single replicate.
    pub std_w1: f64,
    /// Nearest-rank 95th percentile over replicates.
    pub p95_w1: f64,
    /// `None` when `int sqrt(F (1 - F))` diverges.
    pub asymptotic_constant: Option<f64>,
}

impl McReport {
    /// Draws `replicates` empirical measures of size `n_samples` and summarizes their `W1`.
    pub fn run<D: Distribution + ?Sized>(d: &D, n_samples: usize, replicates: usize, seed: u64) -> Result<Self> {
        let asymptotic_constant = match asymptotic_constant(d) {
            Ok(c) => Some(c),
            Err(QuantError::DivergentIntegral) => None,
            Err(e) => return Err(e),
        };
        Self::run_with(n_samples, replicates, seed, asymptotic_constant, |s| empirical_w1(d, n_samples, s))
    }

    /// As [`run`](Self::run) for the law of `op` folded over `operands`, measured against
    /// `reference`.
    pub fn run_pushforward(
        operands: &[&dyn Distribution],
        op: ArithOp,
        reference: &Pushforward,
        n_samples: usize,
        replicates: usize,
        seed: u64,
    ) -> Result<Self> {
        let constant = match reference {
            Pushforward::Continuous(d, _) => asymptotic_constant(d.as_ref()).ok(),
            Pushforward::Discrete(m, _) => Some(asymptotic_constant_discrete(m)),
        };
        Self::run_with(n_samples, replicates, seed, constant, |s| {
            empirical_w1_pushforward(operands, op, reference, n_samples, s)
        })
    }

    fn run_with<F>(n_samples: usize, replicates: usize, seed: u64, asymptotic_constant: Option<f64>, w1: F) -> Result<Self>
    where
        F: Fn(u64) -> Result<f64> + Sync,
    {
        if replicates == 0 {
            return Err(QuantError::InvalidParameter("replicates must be at least 1".into()));
        }
        let w1s: Vec<f64> = (0..replicates as u64)
            .into_par_iter()
            .map(|i| w1(replicate_seed(seed, i)))
            .collect::<Result<_>>()?;
        let r = replicates as f64;
        let mean = w1s.iter().copied().collect::<NeumaierSum>().sum() / r;
        let std_w1 = if replicates > 1 {
            let ss = w1s.iter().map(|w| (w - mean) * (w - mean)).collect::<NeumaierSum>().sum();
            (ss / (r - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = w1s;
        sorted.sort_by(f64::total_cmp);
        let rank = ((0.95 * r).ceil() as usize).clamp(1, replicates);
        Ok(McReport { n_samples, replicates, mean_w1: mean, std_w1, p95_w1: sorted[rank - 1], asymptotic_constant })
    }

    /// Sample count matching `target_w1`, or `None` without a finite constant.
    pub fn equivalent_count_for(&self, target_w1: f64) -> Option<u64> {
        self.asymptotic_constant.and_then(|c| equivalent_count_from_constant(c, target_w1).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Exponential, Gaussian, Pareto, Uniform};
    use std::f64::consts::PI;

    #[test]
    fn single_central_sample_of_uniform() {
        let w = empirical_w1_from_samples(&Uniform::unit(), &[0.5]).unwrap();
        assert!((w - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constants_of_known_laws() {
        let e = asymptotic_constant(&Exponential::new(1.0).unwrap()).unwrap();
        assert!((e - (PI / 2.0).sqrt()).abs() < 1e-9, "{e}");
        let u = asymptotic_constant(&Uniform::unit()).unwrap();
        assert!((u - (2.0 / PI).sqrt() * PI / 8.0).abs() < 1e-10, "{u}");
        assert!((u - 0.313329).abs() < 1e-6);
        let g = asymptotic_constant(&Gaussian::standard()).unwrap();
        assert!((g - 1.288_379_190_3).abs() < 1e-9, "{g}");
    }

    #[test]
    fn heavy_pareto_constant_diverges() {
        for alpha in [1.5, 2.0] {
            let d = Pareto::new(alpha, 1.0).unwrap();
            assert!(matches!(asymptotic_constant(&d), Err(QuantError::DivergentIntegral)));
        }
        assert!(asymptotic_constant(&Pareto::new(3.0, 1.0).unwrap()).is_ok());
    }

    #[test]
    fn equivalent_counts() {
        let d = Exponential::new(1.0).unwrap();
        let c = asymptotic_constant(&d).unwrap();
        assert_eq!(equivalent_mc_count(&d, c).unwrap(), 1);
        let a = equivalent_count_from_constant(1.0, 0.01).unwrap();
        let b = equivalent_count_from_constant(1.0, 0.005).unwrap();
        assert_eq!((a, b), (10_000, 40_000));
        assert!(equivalent_count_from_constant(1.0, 0.0).is_err());
    }

    #[test]
    fn seeding_is_reproducible() {
        let d = Exponential::new(1.0).unwrap();
        assert_eq!(empirical_w1(&d, 500, 7).unwrap(), empirical_w1(&d, 500, 7).unwrap());
        assert_ne!(empirical_w1(&d, 500, 7).unwrap(), empirical_w1(&d, 500, 8).unwrap());
        let a = McReport::run(&d, 200, 16, 3).unwrap();
        let b = McReport::run(&d, 200, 16, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.mean_w1 > 0.0 && a.p95_w1 >= a.mean_w1 - 3.0 * a.std_w1);
    }

    #[test]
    fn discrete_constant_matches_fine_grid() {
        let u = Uniform::unit();
        let m = crate::quantizer::quantize(&u, crate::split::SplitRule::Mean, 14).unwrap();
        let c = asymptotic_constant_discrete(&m);
        assert!((c - asymptotic_constant(&u).unwrap()).abs() < 1e-4, "{c}");
    }

    #[test]
    fn single_operand_pushforward_is_plain_sampling() {
        let d = Exponential::new(1.0).unwrap();
        let ops: [&dyn Distribution; 1] = [&d];
        let xs = pushforward_sample_stream(&ops, ArithOp::Add, 50, 9);
        assert_eq!(xs, mc_sample_stream(&d, 50, replicate_seed(9, 0)));
        let g = Gaussian::standard();
        let ops: [&dyn Distribution; 2] = [&g, &g];
        let sums = pushforward_sample_stream(&ops, ArithOp::Sub, 20_000, 1);
        let mean = sums.iter().sum::<f64>() / sums.len() as f64;
        let var = sums.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / sums.len() as f64;
        assert!(mean.abs() < 0.05 && (var - 2.0).abs() < 0.1, "{mean} {var}");
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the SplitMix64 generator seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0x9E37_79B9_7F4A_7C15), 0x6E78_9E6A_A1B9_65F4);
    }
}

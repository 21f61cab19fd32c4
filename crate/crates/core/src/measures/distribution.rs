use std::fmt;

use crate::error::{QuantError, Result};

/// Cells whose probability is at or below this value are treated as empty.
pub const MASS_TOL: f64 = 1e-15;

/// A continuous law on the real line with finite mean.
///
/// Interval endpoints may be `-inf`/`+inf`. Implementations provide both `cdf` and `sf` so that
/// upper-tail quantities keep their relative precision; the defaults fall back on `1 - cdf`.
pub trait Distribution: Send + Sync + fmt::Debug {
    /// `P(X <= x)`.
    fn cdf(&self, x: f64) -> f64;

    /// `P(X > x)`.
    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Generalized inverse of [`cdf`](Self::cdf).
    fn quantile(&self, p: f64) -> f64;

    /// Inverse of [`sf`](Self::sf): the `x` with `P(X > x) = q`.
    fn isf(&self, q: f64) -> f64 {
        self.quantile(1.0 - q)
    }

    fn pdf(&self, x: f64) -> f64;

    /// `int_a^b t dmu(t)`.
    fn partial_expectation(&self, a: f64, b: f64) -> f64;

    fn mean(&self) -> f64;

    /// `(inf supp, sup supp)`, possibly infinite.
    fn support(&self) -> (f64, f64);

    /// Inverse-CDF transform of a uniform variate in `(0, 1)`.
    fn sample(&self, u: f64) -> f64 {
        self.quantile(u)
    }

    fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Typical spread, used to size quadrature tail blocks.
    fn scale(&self) -> f64 {
        1.0
    }

    fn name(&self) -> String;
}

/// A point with its CDF and survival values cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub cdf: f64,
    pub sf: f64,
}

impl Point {
    pub fn eval<D: Distribution + ?Sized>(d: &D, x: f64) -> Self {
        if x == f64::NEG_INFINITY {
            Point { x, cdf: 0.0, sf: 1.0 }
        } else if x == f64::INFINITY {
            Point { x, cdf: 1.0, sf: 0.0 }
        } else {
            Point { x, cdf: d.cdf(x), sf: d.sf(x) }
        }
    }
}

/// Probability of `(lo.x, hi.x]`, read from whichever tail keeps precision.
pub fn mass_between(lo: &Point, hi: &Point) -> f64 {
    let m = if lo.cdf > 0.5 { lo.sf - hi.sf } else { hi.cdf - lo.cdf };
    m.max(0.0)
}

pub fn mass<D: Distribution + ?Sized>(d: &D, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    mass_between(&Point::eval(d, a), &Point::eval(d, b))
}

/// `E[X | a < X <= b]` from the partial expectation.
pub fn conditional_mean<D: Distribution + ?Sized>(d: &D, a: f64, b: f64) -> Result<f64> {
    conditional_mean_between(d, &Point::eval(d, a), &Point::eval(d, b))
}

pub fn conditional_mean_between<D: Distribution + ?Sized>(d: &D, lo: &Point, hi: &Point) -> Result<f64> {
    let m = mass_between(lo, hi);
    if m <= MASS_TOL {
        return Err(QuantError::ZeroMassCell { lo: lo.x, hi: hi.x });
    }
    let pe = d.partial_expectation(lo.x, hi.x);
    if !pe.is_finite() {
        return Err(QuantError::NonFiniteMean);
    }
    Ok(clamp_into(pe / m, lo.x, hi.x, d))
}

/// Median of the law conditioned on `(a, b]`.
pub fn conditional_median<D: Distribution + ?Sized>(d: &D, a: f64, b: f64) -> Result<f64> {
    conditional_median_between(d, &Point::eval(d, a), &Point::eval(d, b))
}

pub fn conditional_median_between<D: Distribution + ?Sized>(d: &D, lo: &Point, hi: &Point) -> Result<f64> {
    let m = mass_between(lo, hi);
    if m <= MASS_TOL {
        return Err(QuantError::ZeroMassCell { lo: lo.x, hi: hi.x });
    }
    let x = if lo.cdf > 0.5 {
        d.isf(0.5 * (lo.sf + hi.sf))
    } else {
        d.quantile(0.5 * (lo.cdf + hi.cdf))
    };
    Ok(clamp_into(x, lo.x, hi.x, d))
}

/// Clamps into `[a, b] ∩ supp`.
fn clamp_into<D: Distribution + ?Sized>(x: f64, a: f64, b: f64, d: &D) -> f64 {
    let (slo, shi) = d.support();
    x.clamp(a.max(slo), b.min(shi))
}

/// `int_{(a,b]} (b - t) dmu(t)`, i.e. `int_a^b (F(t) - F(a)) dt`, for finite `b`.
pub fn lower_excess<D: Distribution + ?Sized>(d: &D, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = mass(d, a, b);
    if m == 0.0 {
        return 0.0;
    }
    (b * m - d.partial_expectation(a, b)).max(0.0)
}

/// `int_{(a,b]} (t - a) dmu(t)`, i.e. `int_a^b (F(b) - F(t)) dt`, for finite `a`; `b` may be
/// `+inf`.
pub fn upper_excess<D: Distribution + ?Sized>(d: &D, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = mass(d, a, b);
    if m == 0.0 {
        return 0.0;
    }
    (d.partial_expectation(a, b) - a * m).max(0.0)
}

/// `int_{(a,b]} |t - x| dmu(t)` for `x` in `[a, b]`.
pub fn abs_deviation_on<D: Distribution + ?Sized>(d: &D, a: f64, b: f64, x: f64) -> f64 {
    lower_excess(d, a, x) + upper_excess(d, x, b)
}

/// `E|X - x| = W1(mu, delta_x)`.
pub fn w1_to_dirac<D: Distribution + ?Sized>(d: &D, x: f64) -> f64 {
    let (lo, hi) = d.support();
    lower_excess(d, lo, x) + upper_excess(d, x, hi)
}

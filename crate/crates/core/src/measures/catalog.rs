//! Concrete distributions: the five experiment laws plus `Uniform` and `Erlang`.
//!
//! Closed forms are used wherever they exist. The Gaussian, the bimodal mixture and the Erlang
//! quantiles are obtained by safeguarded Newton inversion of the CDF (lower half) or survival
//! function (upper half).

use std::f64::consts::{E, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use libm::erfc;

use super::distribution::Distribution;
use crate::error::{QuantError, Result};
use crate::roots::{lambert_w0, solve_increasing, XTol};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_868;

fn std_pdf(z: f64) -> f64 {
    if z.is_infinite() {
        0.0
    } else {
        INV_SQRT_2PI * (-0.5 * z * z).exp()
    }
}

fn std_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

fn std_sf(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

/// Inverse of the standard normal CDF.
pub fn std_normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p > 0.5 {
        return -std_normal_lower_quantile(1.0 - p);
    }
    std_normal_lower_quantile(p)
}

/// Solves `Phi(z) = p` for `p <= 1/2`.
fn std_normal_lower_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    // Abramowitz & Stegun 26.2.23 as a starting point (|error| < 4.5e-4)
    let t = (-2.0 * p.ln()).sqrt();
    let z0 = -(t - (2.515_517 + 0.802_853 * t + 0.010_328 * t * t)
        / (1.0 + 1.432_788 * t + 0.189_269 * t * t + 0.001_308 * t * t * t));
    solve_increasing(|z| (std_cdf(z), std_pdf(z)), p, f64::NEG_INFINITY, 0.0, z0, XTol::UNBOUNDED)
}

fn check(ok: bool, msg: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(QuantError::InvalidParameter(msg.into()))
    }
}

// ── Gaussian ─────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    mu: f64,
    sigma: f64,
}

impl Gaussian {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        check(mu.is_finite(), "gaussian mean must be finite")?;
        check(sigma > 0.0 && sigma.is_finite(), "gaussian sigma must be > 0")?;
        Ok(Self { mu, sigma })
    }

    pub fn standard() -> Self {
        Self { mu: 0.0, sigma: 1.0 }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn z(&self, x: f64) -> f64 {
        (x - self.mu) / self.sigma
    }
}

impl Distribution for Gaussian {
    fn cdf(&self, x: f64) -> f64 {
        std_cdf(self.z(x))
    }

    fn sf(&self, x: f64) -> f64 {
        std_sf(self.z(x))
    }

    fn quantile(&self, p: f64) -> f64 {
        self.mu + self.sigma * std_normal_quantile(p)
    }

    fn isf(&self, q: f64) -> f64 {
        self.mu - self.sigma * std_normal_quantile(q)
    }

    fn pdf(&self, x: f64) -> f64 {
        std_pdf(self.z(x)) / self.sigma
    }

    fn partial_expectation(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let (za, zb) = (self.z(a), self.z(b));
        let m = if za > 0.0 { std_sf(za) - std_sf(zb) } else { std_cdf(zb) - std_cdf(za) };
        self.mu * m + self.sigma * (std_pdf(za) - std_pdf(zb))
    }

    fn mean(&self) -> f64 {
        self.mu
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn median(&self) -> f64 {
        self.mu
    }

    fn scale(&self) -> f64 {
        self.sigma
    }

    fn name(&self) -> String {
        format!("gauss:{},{}", self.mu, self.sigma)
    }
}

// ── Exponential ──────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        check(rate > 0.0 && rate.is_finite(), "exponential rate must be > 0")?;
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `-(t + 1/rate) e^{-rate t}`, the antiderivative of `t f(t)`.
    fn antiderivative(&self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return 0.0;
        }
        let t = t.max(0.0);
        -(t + 1.0 / self.rate) * (-self.rate * t).exp()
    }
}

impl Distribution for Exponential {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-self.rate * x).exp_m1()
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            (-self.rate * x).exp()
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        -(-p).ln_1p() / self.rate
    }

    fn isf(&self, q: f64) -> f64 {
        if q >= 1.0 {
            return 0.0;
        }
        if q <= 0.0 {
            return f64::INFINITY;
        }
        -q.ln() / self.rate
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.rate * (-self.rate * x).exp()
        }
    }

    fn partial_expectation(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.antiderivative(b) - self.antiderivative(a)
    }

    fn mean(&self) -> f64 {
        1.0 / self.rate
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn median(&self) -> f64 {
        std::f64::consts::LN_2 / self.rate
    }

    fn scale(&self) -> f64 {
        1.0 / self.rate
    }

    fn name(&self) -> String {
        format!("exp:{}", self.rate)
    }
}

// ── Pareto ───────────────────────────────────────────────────────────────

/// `P(X >= x) = (x_m / x)^alpha` on `[x_m, inf)`, `alpha > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pareto {
    alpha: f64,
    xm: f64,
}

impl Pareto {
    pub fn new(alpha: f64, xm: f64) -> Result<Self> {
        check(alpha > 1.0 && alpha.is_finite(), "pareto alpha must be > 1 (finite mean)")?;
        check(xm > 0.0 && xm.is_finite(), "pareto x_m must be > 0")?;
        Ok(Self { alpha, xm })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn xm(&self) -> f64 {
        self.xm
    }

    /// `(x_m / t)^{alpha - 1}`, proportional to the upper partial expectation at `t`.
    fn tail_moment(&self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return 0.0;
        }
        (self.xm / t.max(self.xm)).powf(self.alpha - 1.0)
    }
}

impl Distribution for Pareto {
    fn cdf(&self, x: f64) -> f64 {
        if x <= self.xm {
            0.0
        } else {
            -(self.alpha * (self.xm / x).ln()).exp_m1()
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= self.xm {
            1.0
        } else {
            (self.xm / x).powf(self.alpha)
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.xm;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        self.xm * (-(-p).ln_1p() / self.alpha).exp()
    }

    fn isf(&self, q: f64) -> f64 {
        if q >= 1.0 {
            return self.xm;
        }
        if q <= 0.0 {
            return f64::INFINITY;
        }
        self.xm * q.powf(-1.0 / self.alpha)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < self.xm {
            0.0
        } else {
            self.alpha / self.xm * (self.xm / x).powf(self.alpha + 1.0)
        }
    }

    fn partial_expectation(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let c = self.alpha * self.xm / (self.alpha - 1.0);
        c * (self.tail_moment(a) - self.tail_moment(b))
    }

    fn mean(&self) -> f64 {
        self.alpha * self.xm / (self.alpha - 1.0)
    }

    fn support(&self) -> (f64, f64) {
        (self.xm, f64::INFINITY)
    }

    fn median(&self) -> f64 {
        self.xm * 2f64.powf(1.0 / self.alpha)
    }

    fn scale(&self) -> f64 {
        self.xm
    }

    fn name(&self) -> String {
        format!("pareto:{},{}", self.alpha, self.xm)
    }
}

// ── Heavy-tailed ─────────────────────────────────────────────────────────

/// `P(X >= x) = e / (x ln^2 x)` for `x >= e`: finite mean, no moment of order `1 + delta`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeavyTailed;

impl HeavyTailed {
    /// `1/ln t + 1/ln^2 t`; the partial expectation is `e (h(a) - h(b))`.
    fn h(t: f64) -> f64 {
        if t == f64::INFINITY {
            return 0.0;
        }
        let l = t.max(E).ln();
        1.0 / l + 1.0 / (l * l)
    }
}

impl Distribution for HeavyTailed {
    fn cdf(&self, x: f64) -> f64 {
        if x <= E {
            0.0
        } else {
            1.0 - self.sf(x)
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= E {
            1.0
        } else if x == f64::INFINITY {
            0.0
        } else {
            let l = x.ln();
            E / (x * l * l)
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        if p >= 1.0 {
            return f64::INFINITY;
        }
        self.isf(1.0 - p)
    }

    /// Solves `x ln^2 x = e / q` with `x = exp(2 W(sqrt(e/q) / 2))`.
    fn isf(&self, q: f64) -> f64 {
        if q >= 1.0 {
            return E;
        }
        if q <= 0.0 {
            return f64::INFINITY;
        }
        let z = 0.5 * (E / q).sqrt();
        (2.0 * lambert_w0(z)).exp().max(E)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < E || x.is_infinite() {
            return 0.0;
        }
        let l = x.ln();
        E * (l + 2.0) / (x * x * l * l * l)
    }

    fn partial_expectation(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        E * (Self::h(a) - Self::h(b))
    }

    fn mean(&self) -> f64 {
        2.0 * E
    }

    fn support(&self) -> (f64, f64) {
        (E, f64::INFINITY)
    }

    fn scale(&self) -> f64 {
        E
    }

    fn name(&self) -> String {
        "heavy".to_string()
    }
}

// ── Bimodal ──────────────────────────────────────────────────────────────

/// Density `(2 e^{-(x-2)^2} + e^{-(x+2)^2}) / (3 sqrt(pi))`, i.e. the mixture
/// `2/3 N(2, 1/2) + 1/3 N(-2, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bimodal {
    parts: [(f64, Gaussian); 2],
}

impl Default for Bimodal {
    fn default() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            parts: [
                (2.0 / 3.0, Gaussian { mu: 2.0, sigma: s }),
                (1.0 / 3.0, Gaussian { mu: -2.0, sigma: s }),
            ],
        }
    }
}

impl Bimodal {
    /// The density exactly as written, used to cross-check the mixture form.
    pub fn density_formula(x: f64) -> f64 {
        (2.0 * (-(x - 2.0) * (x - 2.0)).exp() + (-(x + 2.0) * (x + 2.0)).exp()) / (3.0 * PI.sqrt())
    }
}

impl Distribution for Bimodal {
    fn cdf(&self, x: f64) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.cdf(x)).sum()
    }

    fn sf(&self, x: f64) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.sf(x)).sum()
    }

    fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        if p > 0.5 {
            return self.isf(1.0 - p);
        }
        let x0 = -2.0 + std::f64::consts::FRAC_1_SQRT_2 * std_normal_quantile((3.0 * p).min(0.999));
        solve_increasing(|x| (self.cdf(x), self.pdf(x)), p, f64::NEG_INFINITY, f64::INFINITY, x0, XTol::UNBOUNDED)
    }

    fn isf(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return f64::INFINITY;
        }
        if q >= 1.0 {
            return f64::NEG_INFINITY;
        }
        let x0 = 2.0 - std::f64::consts::FRAC_1_SQRT_2 * std_normal_quantile((1.5 * q).min(0.999));
        solve_increasing(|x| (-self.sf(x), self.pdf(x)), -q, f64::NEG_INFINITY, f64::INFINITY, x0, XTol::UNBOUNDED)
    }

    fn pdf(&self, x: f64) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.pdf(x)).sum()
    }

    fn partial_expectation(&self, a: f64, b: f64) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.partial_expectation(a, b)).sum()
    }

    fn mean(&self) -> f64 {
        self.parts.iter().map(|(w, g)| w * g.mu).sum()
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn scale(&self) -> f64 {
        2.0
    }

    fn name(&self) -> String {
        "bimodal".to_string()
    }
}

// ── Uniform ──────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    a: f64,
    b: f64,
}

impl Uniform {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check(a.is_finite() && b.is_finite() && a < b, "uniform needs finite a < b")?;
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }
}

impl Distribution for Uniform {
    fn cdf(&self, x: f64) -> f64 {
        ((x - self.a) / (self.b - self.a)).clamp(0.0, 1.0)
    }

    fn sf(&self, x: f64) -> f64 {
        ((self.b - x) / (self.b - self.a)).clamp(0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        self.a + p * (self.b - self.a)
    }

    fn isf(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        self.b - q * (self.b - self.a)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < self.a || x > self.b {
            0.0
        } else {
            1.0 / (self.b - self.a)
        }
    }

    fn partial_expectation(&self, a: f64, b: f64) -> f64 {
        let lo = a.clamp(self.a, self.b);
        let hi = b.clamp(self.a, self.b);
        if hi <= lo {
            return 0.0;
        }
        (hi - lo) * (hi + lo) / (2.0 * (self.b - self.a))
    }

    fn mean(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn median(&self) -> f64 {
        self.mean()
    }

    fn scale(&self) -> f64 {
        self.b - self.a
    }

    fn name(&self) -> String {
        format!("uniform:{},{}", self.a, self.b)
    }
}

// ── Erlang ───────────────────────────────────────────────────────────────

/// Sum of `k` independent `Exp(rate)` variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Erlang {
    k: u32,
    rate: f64,
}

impl Erlang {
    pub fn new(k: u32, rate: f64) -> Result<Self> {
        check(k >= 1, "erlang shape must be >= 1")?;
        check(rate > 0.0 && rate.is_finite(), "erlang rate must be > 0")?;
        Ok(Self { k, rate })
    }

    pub fn shape(&self) -> u32 {
        self.k
    }

    /// `(P(k, y), Q(k, y))`, regularized incomplete gamma functions at integer shape.
    fn gamma_pq(k: u32, y: f64) -> (f64, f64) {
        if y <= 0.0 {
            return (0.0, 1.0);
        }
        if y == f64::INFINITY {
            return (1.0, 0.0);
        }
        let ln_pref = -y;
        if y < k as f64 {
            // P = e^{-y} sum_{j>=k} y^j / j!
            let mut term = (ln_pref + k as f64 * y.ln() - ln_factorial(k)).exp();
            let mut p = 0.0;
            let mut j = k as f64;
            while term > 1e-18 * p || p == 0.0 {
                p += term;
                j += 1.0;
                term *= y / j;
                if term == 0.0 {
                    break;
                }
            }
            (p, 1.0 - p)
        } else {
            // Q = e^{-y} sum_{j<k} y^j / j!
            let mut term = (-y).exp();
            let mut q = term;
            for j in 1..k {
                term *= y / j as f64;
                q += term;
            }
            if term == 0.0 || !q.is_finite() || q == 0.0 {
                // underflowed prefactor, sum in log space
                let lq: f64 = (0..k)
                    .map(|j| j as f64 * y.ln() - y - ln_factorial(j))
                    .fold(f64::NEG_INFINITY, |acc, v| {
                        let m = acc.max(v);
                        if m == f64::NEG_INFINITY {
                            m
                        } else {
                            m + ((acc - m).exp() + (v - m).exp()).ln()
                        }
                    });
                q = lq.exp();
            }
            (1.0 - q, q)
        }
    }
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

impl Distribution for Erlang {
    fn cdf(&self, x: f64) -> f64 {
        Self::gamma_pq(self.k, self.rate * x).0
    }

    fn sf(&self, x: f64) -> f64 {
        Self::gamma_pq(self.k, self.rate * x).1
    }

    fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        if p > 0.5 {
            return self.isf(1.0 - p);
        }
        solve_increasing(|x| (self.cdf(x), self.pdf(x)), p, 0.0, f64::INFINITY, self.mean(), XTol::UNBOUNDED)
    }

    fn isf(&self, q: f64) -> f64 {
        if q >= 1.0 {
            return 0.0;
        }
        if q <= 0.0 {
            return f64::INFINITY;
        }
        solve_increasing(|x| (-self.sf(x), self.pdf(x)), -q, 0.0, f64::INFINITY, self.mean(), XTol::UNBOUNDED)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x.is_infinite() {
            return 0.0;
        }
        let y = self.rate * x;
        self.rate * ((self.k as f64 - 1.0) * y.ln() - y - ln_factorial(self.k - 1)).exp()
    }

    /// `t f_k(t) = (k / rate) f_{k+1}(t)`, so the partial expectation is a mass of `Erlang(k+1)`.
    fn partial_expectation(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let (ya, yb) = (self.rate * a.max(0.0), self.rate * b.max(0.0));
        let (pa, qa) = Self::gamma_pq(self.k + 1, ya);
        let (pb, qb) = Self::gamma_pq(self.k + 1, yb);
        let m = if pa > 0.5 { qa - qb } else { pb - pa };
        self.k as f64 / self.rate * m
    }

    fn mean(&self) -> f64 {
        self.k as f64 / self.rate
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn scale(&self) -> f64 {
        (self.k as f64).sqrt() / self.rate
    }

    fn name(&self) -> String {
        format!("erlang:{},{}", self.k, self.rate)
    }
}

// ── Catalog specs ────────────────────────────────────────────────────────

/// A parsed catalog entry, written `name[:p1,p2]` on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec {
    Gaussian { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
    Pareto { alpha: f64, xm: f64 },
    HeavyTailed,
    Bimodal,
    Uniform { a: f64, b: f64 },
}

impl DistSpec {
    /// The five laws of the experiment table.
    pub fn table() -> Vec<DistSpec> {
        vec![
            DistSpec::Gaussian { mu: 0.0, sigma: 1.0 },
            DistSpec::Exponential { rate: 1.0 },
            DistSpec::Pareto { alpha: 2.0, xm: 1.0 },
            DistSpec::HeavyTailed,
            DistSpec::Bimodal,
        ]
    }

    /// The table plus `Uniform(0, 1)`.
    pub fn catalog() -> Vec<DistSpec> {
        let mut v = Self::table();
        v.push(DistSpec::Uniform { a: 0.0, b: 1.0 });
        v
    }

    pub fn build(&self) -> Result<Box<dyn Distribution>> {
        Ok(match *self {
            DistSpec::Gaussian { mu, sigma } => Box::new(Gaussian::new(mu, sigma)?),
            DistSpec::Exponential { rate } => Box::new(Exponential::new(rate)?),
            DistSpec::Pareto { alpha, xm } => Box::new(Pareto::new(alpha, xm)?),
            DistSpec::HeavyTailed => Box::new(HeavyTailed),
            DistSpec::Bimodal => Box::new(Bimodal::default()),
            DistSpec::Uniform { a, b } => Box::new(Uniform::new(a, b)?),
        })
    }

    /// Whether `int sqrt(f)` is finite and the asymptotically optimal quantizer applies.
    pub fn asymptotic_quantizer_applies(&self) -> bool {
        !matches!(self, DistSpec::HeavyTailed)
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Gaussian { mu, sigma } => write!(f, "gauss:{mu},{sigma}"),
            DistSpec::Exponential { rate } => write!(f, "exp:{rate}"),
            DistSpec::Pareto { alpha, xm } => write!(f, "pareto:{alpha},{xm}"),
            DistSpec::HeavyTailed => write!(f, "heavy"),
            DistSpec::Bimodal => write!(f, "bimodal"),
            DistSpec::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
        }
    }
}

impl FromStr for DistSpec {
    type Err = QuantError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), p.trim()),
            None => (s.trim(), ""),
        };
        let nums: Vec<f64> = if params.is_empty() {
            Vec::new()
        } else {
            params
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| QuantError::InvalidParameter(format!("`{s}`: {e}")))?
        };
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(QuantError::InvalidParameter(format!("`{s}`: expected {n} parameter(s), got {}", nums.len())))
            }
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "gauss" | "gaussian" | "normal" => {
                if nums.is_empty() {
                    DistSpec::Gaussian { mu: 0.0, sigma: 1.0 }
                } else {
                    arity(2)?;
                    DistSpec::Gaussian { mu: nums[0], sigma: nums[1] }
                }
            }
            "exp" | "exponential" => {
                if nums.is_empty() {
                    DistSpec::Exponential { rate: 1.0 }
                } else {
                    arity(1)?;
                    DistSpec::Exponential { rate: nums[0] }
                }
            }
            "pareto" => {
                arity(2)?;
                DistSpec::Pareto { alpha: nums[0], xm: nums[1] }
            }
            "heavy" | "heavytailed" | "heavy-tailed" => {
                arity(0)?;
                DistSpec::HeavyTailed
            }
            "bimodal" => {
                arity(0)?;
                DistSpec::Bimodal
            }
            "uniform" => {
                if nums.is_empty() {
                    DistSpec::Uniform { a: 0.0, b: 1.0 }
                } else {
                    arity(2)?;
                    DistSpec::Uniform { a: nums[0], b: nums[1] }
                }
            }
            other => return Err(QuantError::InvalidParameter(format!("unknown distribution `{other}`"))),
        };
        // validate parameters eagerly
        spec.build()?;
        Ok(spec)
    }
}

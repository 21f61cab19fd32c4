//! Baselines and envelopes for the split quantizer: the optimal and asymptotically optimal
//! `N`-atom quantizers, the Zador constant, the upper/lower bounds built from the iterated
//! upper split points, and empirical decay rates.

use serde::{Deserialize, Serialize};

use crate::error::{QuantError, Result};
use crate::measures::{abs_deviation_on, conditional_median_between, mass, mass_between, Atom, DiscreteMeasure, Distribution, Point};
use crate::metrics::quantization_w1;
use crate::quad::{integrate_over, Tolerance};
use crate::roots::{solve_increasing, XTol};
use crate::split::SplitRule;
use crate::util::{ols_slope, NeumaierSum};

/// Stationarity residual required of the optimal quantizer.
pub const OPTIMAL_RESIDUAL_TOL: f64 = 1e-10;
/// Fixed-point sweep budget of the optimal quantizer.
pub const OPTIMAL_MAX_SWEEPS: usize = 100_000;
/// Damping of the fixed-point update `x <- (1 - damping) x + damping * median(cell)`.
pub const OPTIMAL_DAMPING: f64 = 0.5;

const HALF_DENSITY_TOL: Tolerance = Tolerance::new(1e-11, 1e-10);
const NEWTON_EVERY: usize = 25;
const SCALED_RESIDUAL_TOL: f64 = 1e-9;
const NEWTON_ITERS: usize = 60;
/// A non-converged Newton polish is kept only if it shrinks the scaled merit by this factor.
const NEWTON_KEEP_RATIO: f64 = 0.5;

/// Result of the optimal-quantizer solve, including the residual reached.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSolution {
    pub measure: DiscreteMeasure,
    /// `max_i |2 F(x_i) - F(m_{i-1}) - F(m_i)|`, `m_i` the midpoints.
    pub residual: f64,
    pub sweeps: usize,
}

fn midpoint_points<D: Distribution + ?Sized>(d: &D, xs: &[f64]) -> Vec<Point> {
    let (lo, hi) = d.support();
    let mut ms = Vec::with_capacity(xs.len() + 1);
    ms.push(Point::eval(d, lo));
    for w in xs.windows(2) {
        ms.push(Point::eval(d, 0.5 * (w[0] + w[1])));
    }
    ms.push(Point::eval(d, hi));
    ms
}

/// Residuals `2 F(x_i) - F(m_{i-1}) - F(m_i)`, read through the survival function in the upper
/// half.
fn stationarity<D: Distribution + ?Sized>(d: &D, xs: &[f64], ms: &[Point]) -> Vec<f64> {
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let p = Point::eval(d, x);
            if p.cdf > 0.5 {
                ms[i].sf + ms[i + 1].sf - 2.0 * p.sf
            } else {
                2.0 * p.cdf - ms[i].cdf - ms[i + 1].cdf
            }
        })
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, r| m.max(r.abs()))
}

/// Residuals relative to the mass of each atom's midpoint cell. Far-tail atoms have tiny
/// absolute residuals wherever they sit, so convergence is judged on this scale.
fn max_scaled(g: &[f64], ms: &[Point]) -> f64 {
    g.iter()
        .zip(ms.windows(2))
        .fold(0.0, |m, (r, w)| m.max(r.abs() / mass_between(&w[0], &w[1]).max(f64::MIN_POSITIVE)))
}

fn converged(g: &[f64], ms: &[Point]) -> bool {
    max_abs(g) <= OPTIMAL_RESIDUAL_TOL && max_scaled(g, ms) <= SCALED_RESIDUAL_TOL
}

/// Stationarity residual of an arbitrary sorted position vector.
pub fn stationarity_residual<D: Distribution + ?Sized>(d: &D, positions: &[f64]) -> f64 {
    max_abs(&stationarity(d, positions, &midpoint_points(d, positions)))
}

fn midpoint_weights(ms: &[Point]) -> Vec<f64> {
    ms.windows(2).map(|w| mass_between(&w[0], &w[1])).collect()
}

fn measure_from(xs: &[f64], ms: &[Point]) -> Result<DiscreteMeasure> {
    let atoms = xs.iter().zip(midpoint_weights(ms)).map(|(&x, w)| Atom::new(x, w)).collect();
    DiscreteMeasure::from_unsorted(atoms)
}

/// Solves `J dx = -G` for the tridiagonal Jacobian of the stationarity system.
fn newton_step<D: Distribution + ?Sized>(d: &D, xs: &[f64], ms: &[Point], g: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // the outer ends are fixed, so only interior midpoints move with the atoms
    let fm: Vec<f64> = ms
        .iter()
        .enumerate()
        .map(|(i, p)| if i == 0 || i == n { 0.0 } else { d.pdf(p.x) })
        .collect();
    let mut diag: Vec<f64> = (0..n).map(|i| 2.0 * d.pdf(xs[i]) - 0.5 * (fm[i] + fm[i + 1])).collect();
    // off-diagonals: sub[i] couples x_i to x_{i-1}, sup[i] couples x_i to x_{i+1}
    let sub: Vec<f64> = (0..n).map(|i| -0.5 * fm[i]).collect();
    let sup: Vec<f64> = (0..n).map(|i| -0.5 * fm[i + 1]).collect();
    let mut rhs: Vec<f64> = g.iter().map(|v| -v).collect();
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut dx = vec![0.0; n];
    dx[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        dx[i] = (rhs[i] - sup[i] * dx[i + 1]) / diag[i];
    }
    dx
}

fn is_admissible(xs: &[f64], (lo, hi): (f64, f64)) -> bool {
    xs.iter().all(|x| x.is_finite() && *x > lo && *x < hi) && xs.windows(2).all(|w| w[0] < w[1])
}

/// Applies `t * dx` to the gaps `x_i - x_{i-1}` multiplicatively, so the step never reorders
/// atoms; to first order it is the additive step. The lowest gap is measured from `lo`, or
/// moved additively when the support is unbounded below.
fn gap_step(xs: &[f64], dx: &[f64], t: f64, lo: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len());
    let mut prev_old = lo;
    let mut prev_new = lo;
    for (i, (&x, &s)) in xs.iter().zip(dx).enumerate() {
        let next = if i == 0 && !lo.is_finite() {
            x + t * s
        } else {
            let gap = x - prev_old;
            let dgap = s - if i == 0 { 0.0 } else { dx[i - 1] };
            prev_new + gap * (t * dgap / gap).exp()
        };
        prev_old = x;
        prev_new = next;
        out.push(next);
    }
    out
}

/// `sum (g_i / w_i)^2` with `w_i` the current midpoint-cell masses. Scaling by live masses keeps
/// tail atoms from escaping to where every residual vanishes.
fn scaled_merit(g: &[f64], ms: &[Point]) -> f64 {
    g.iter()
        .zip(ms.windows(2))
        .map(|(r, w)| {
            let s = r / mass_between(&w[0], &w[1]).max(f64::MIN_POSITIVE);
            s * s
        })
        .sum()
}

/// Newton iterations with backtracking on [`scaled_merit`]. Returns whether the iterate
/// converged.
fn newton_polish<D: Distribution + ?Sized>(d: &D, xs: &mut Vec<f64>) -> bool {
    let support = d.support();
    let mut ms = midpoint_points(d, xs);
    let mut g = stationarity(d, xs, &ms);
    let mut merit = scaled_merit(&g, &ms);
    for _ in 0..NEWTON_ITERS {
        if converged(&g, &ms) {
            return true;
        }
        let dx = newton_step(d, xs, &ms, &g);
        if dx.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial = gap_step(xs, &dx, t, support.0);
            if is_admissible(&trial, support) {
                let tm = midpoint_points(d, &trial);
                let tg = stationarity(d, &trial, &tm);
                let tr = scaled_merit(&tg, &tm);
                if tr < merit {
                    *xs = trial;
                    ms = tm;
                    g = tg;
                    merit = tr;
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    converged(&g, &ms)
}

/// The optimal `n`-atom quantizer in `W1`, with its stationarity residual.
///
/// Every atom of an optimal quantizer is the median of its Voronoi cell. The solver runs the
/// damped fixed-point iteration `x_i <- median(m_{i-1}, m_i)` from the asymptotically optimal
/// positions (or an equal-mass grid when those are unavailable) and periodically polishes the
/// iterate with Newton steps on the stationarity system.
pub fn solve_optimal<D: Distribution + ?Sized>(d: &D, n: usize) -> Result<OptimalSolution> {
    if n == 0 {
        return Err(QuantError::InvalidParameter("atom count must be >= 1".into()));
    }
    if n == 1 {
        return Ok(OptimalSolution { measure: DiscreteMeasure::dirac(d.median()), residual: 0.0, sweeps: 0 });
    }
    let mut xs: Vec<f64> = match asymptotic_positions(d, n) {
        Ok(xs) => xs,
        Err(_) => (0..n).map(|i| d.quantile((2 * i + 1) as f64 / (2 * n) as f64)).collect(),
    };
    let mut ms = midpoint_points(d, &xs);
    let mut g = stationarity(d, &xs, &ms);
    let mut sweeps = 0;
    while !converged(&g, &ms) && sweeps < OPTIMAL_MAX_SWEEPS {
        for i in 0..n {
            let target = match conditional_median_between(d, &ms[i], &ms[i + 1]) {
                Ok(x) => x,
                // a far-tail cell whose mass underflowed stays put
                Err(QuantError::ZeroMassCell { .. }) => xs[i],
                Err(e) => return Err(e),
            };
            xs[i] = (1.0 - OPTIMAL_DAMPING) * xs[i] + OPTIMAL_DAMPING * target;
        }
        sweeps += 1;
        if sweeps % NEWTON_EVERY == 0 {
            // a polish that stalls near a singular Jacobian would undo the fixed-point progress
            let mut trial = xs.clone();
            let before = scaled_merit(&g, &ms);
            let done = newton_polish(d, &mut trial);
            let tm = midpoint_points(d, &trial);
            if done || scaled_merit(&stationarity(d, &trial, &tm), &tm) <= NEWTON_KEEP_RATIO * before {
                xs = trial;
            }
        }
        ms = midpoint_points(d, &xs);
        g = stationarity(d, &xs, &ms);
    }
    let residual = max_abs(&g);
    if !converged(&g, &ms) {
        return Err(QuantError::NoConvergence { residual, iterations: sweeps });
    }
    Ok(OptimalSolution { measure: measure_from(&xs, &ms)?, residual, sweeps })
}

/// The optimal `n`-atom quantizer (see [`solve_optimal`]).
pub fn optimal_quantizer<D: Distribution + ?Sized>(d: &D, n: usize) -> Result<DiscreteMeasure> {
    solve_optimal(d, n).map(|s| s.measure)
}

fn sqrt_pdf<D: Distribution + ?Sized>(d: &D) -> impl Fn(f64) -> f64 + '_ {
    move |x: f64| {
        let p = d.pdf(x);
        if p > 0.0 && p.is_finite() {
            p.sqrt()
        } else {
            0.0
        }
    }
}

/// `int_a^b sqrt(f)` with divergence reported as an error.
fn half_density_integral<D: Distribution + ?Sized>(d: &D, a: f64, b: f64) -> Result<f64> {
    let center = if a.is_finite() && b.is_finite() { 0.5 * (a + b) } else { d.median().clamp(a, b) };
    let center = if center.is_finite() && center > a && center < b { center } else if a.is_finite() { a + d.scale() } else { b - d.scale() };
    let r = integrate_over(sqrt_pdf(d), a, b, center, d.scale(), HALF_DENSITY_TOL);
    if !r.converged || !r.value.is_finite() {
        return Err(QuantError::DivergentHalfDensity);
    }
    Ok(r.value)
}

/// Quantiles `(2i - 1) / 2n` of the normalized half-density `sqrt(f) / int sqrt(f)`.
fn asymptotic_positions<D: Distribution + ?Sized>(d: &D, n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = d.support();
    let c = d.median();
    let below = half_density_integral(d, lo, c)?;
    let above = half_density_integral(d, c, hi)?;
    let total = below + above;
    let h = sqrt_pdf(d);
    let tol = if lo.is_finite() && hi.is_finite() { XTol::BOUNDED } else { XTol::UNBOUNDED };
    let targets: Vec<f64> = (0..n).map(|i| total * (2 * i + 1) as f64 / (2 * n) as f64).collect();
    let split = targets.partition_point(|&t| t <= below);
    let mut xs = vec![0.0; n];

    // lower half, left to right: int_lo^x sqrt(f) = t
    let (mut anchor, mut acc) = (lo, 0.0);
    for i in 0..split {
        let need = targets[i] - acc;
        let a = anchor;
        let eval = |x: f64| {
            let v = integrate_over(&h, a, x, if a.is_finite() { 0.5 * (a + x) } else { x - d.scale() }, d.scale(), HALF_DENSITY_TOL).value;
            (v, h(x))
        };
        let x0 = if a.is_finite() { a.max(c - d.scale()).min(c) } else { c - d.scale() };
        let x = solve_increasing(eval, need, a, c, x0, tol);
        xs[i] = x;
        acc = targets[i];
        anchor = x;
    }
    // upper half, right to left: int_x^hi sqrt(f) = total - t
    let (mut anchor, mut acc) = (hi, 0.0);
    for i in (split..n).rev() {
        let need = (total - targets[i]) - acc;
        let b = anchor;
        let eval = |x: f64| {
            let v = integrate_over(&h, x, b, if b.is_finite() { 0.5 * (x + b) } else { x + d.scale() }, d.scale(), HALF_DENSITY_TOL).value;
            (-v, h(x))
        };
        let x0 = if b.is_finite() { b.min(c + d.scale()).max(c) } else { c + d.scale() };
        let x = solve_increasing(eval, -need, c, b, x0, tol);
        xs[i] = x;
        acc = total - targets[i];
        anchor = x;
    }
    Ok(xs)
}

/// Atoms at the quantiles `(2i - 1) / 2n` of the normalized half-density, weighted by the mass
/// of their midpoint cells.
pub fn asymptotically_optimal_quantizer<D: Distribution + ?Sized>(d: &D, n: usize) -> Result<DiscreteMeasure> {
    if n == 0 {
        return Err(QuantError::InvalidParameter("atom count must be >= 1".into()));
    }
    let xs = asymptotic_positions(d, n)?;
    measure_from(&xs, &midpoint_points(d, &xs))
}

/// `(int sqrt(f))^2 / 4`: the optimal error behaves like this constant over the atom count.
pub fn zador_constant<D: Distribution + ?Sized>(d: &D) -> Result<f64> {
    let (lo, hi) = d.support();
    let c = d.median();
    let z = half_density_integral(d, lo, c)? + half_density_integral(d, c, hi)?;
    Ok(0.25 * z * z)
}

/// Envelopes for the depth-`n` quantization error of a law supported on `[a, inf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Zador constant over `2^n`; `None` when the half-density integral diverges.
    pub zador_lower: Option<f64>,
    pub thm48_upper: f64,
    pub tail_lower: f64,
    /// `omega[0]` is the lower end of the support, `omega[j + 1]` the split point of the law
    /// restricted to `[omega[j], inf)`.
    pub omega: Vec<f64>,
}

impl BoundReport {
    /// `tail_lower <= w1 <= thm48_upper` up to a relative slack `rel_tol`; at `n = 0` both
    /// bounds equal the error itself.
    pub fn contains(&self, w1: f64, rel_tol: f64) -> bool {
        let slack = rel_tol * w1.abs();
        self.tail_lower <= w1 + slack && w1 <= self.thm48_upper + slack
    }
}

/// Upper and lower bounds on `W1(d, T^f(d, n))` from the chain of upper split points.
///
/// With `w_{-1}` the lower end of the support and `w_j` the split point of the law restricted
/// to `[w_{j-1}, inf)`:
///
/// `upper = c(f) sum_{j<n} (w_j - w_{j-1}) P(w_{j-1} <= X <= w_j) / 2^{n-j-1} + tail`,
/// `tail = E[|X - w_n|; X >= w_{n-1}]`,
///
/// and the tail term alone is a lower bound. The bound is shift invariant, so any finite lower
/// end works.
pub fn split_chain_bound<D: Distribution + ?Sized>(d: &D, rule: SplitRule, n: u32) -> Result<BoundReport> {
    let c = rule.c_factor().ok_or(QuantError::UnsupportedRule("geomean"))?;
    let (lo, hi) = d.support();
    if !lo.is_finite() {
        return Err(QuantError::UnboundedBelow);
    }
    let mut omega = Vec::with_capacity(n as usize + 2);
    omega.push(lo);
    for _ in 0..=n {
        let prev = *omega.last().unwrap();
        omega.push(rule.split(d, prev, hi)?);
    }
    // omega[k] holds w_{k-1}
    let mut upper = NeumaierSum::default();
    for j in 0..n as usize {
        let (a, b) = (omega[j], omega[j + 1]);
        let scale = 0.5f64.powi(n as i32 - j as i32 - 1);
        upper.add(c * (b - a) * mass(d, a, b) * scale);
    }
    let tail = abs_deviation_on(d, omega[n as usize], hi, omega[n as usize + 1]);
    upper.add(tail);
    let zador_lower = zador_constant(d).ok().map(|z| z * 0.5f64.powi(n as i32));
    Ok(BoundReport { zador_lower, thm48_upper: upper.sum(), tail_lower: tail, omega })
}

/// Least-squares slope of `ln W1(d, T^f(d, n))` against `n` over `n_max - 5 ..= n_max`.
pub fn tail_rate_estimate<D: Distribution + ?Sized>(d: &D, rule: SplitRule, n_max: u32) -> Result<f64> {
    if n_max < 6 {
        return Err(QuantError::InvalidParameter(format!("tail rate needs n_max >= 6, got {n_max}")));
    }
    let ns: Vec<u32> = (n_max - 5..=n_max).collect();
    let logs = ns
        .iter()
        .map(|&n| quantization_w1(d, rule, n).map(|r| r.value.ln()))
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    Ok(ols_slope(&xs, &logs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Exponential, Gaussian, HeavyTailed, Pareto, Uniform};
    use crate::metrics::w1_continuous_discrete;

    #[test]
    fn optimal_uniform_two_atoms() {
        let m = optimal_quantizer(&Uniform::unit(), 2).unwrap();
        assert_eq!(m.len(), 2);
        assert!((m.atoms()[0].position - 0.25).abs() < 1e-10);
        assert!((m.atoms()[1].position - 0.75).abs() < 1e-10);
        assert!((m.atoms()[0].weight - 0.5).abs() < 1e-10);
    }

    #[test]
    fn single_atom_is_the_median() {
        let d = Exponential::new(1.0).unwrap();
        let m = optimal_quantizer(&d, 1).unwrap();
        assert_eq!(m.atoms()[0].position, std::f64::consts::LN_2);
    }

    #[test]
    fn optimal_beats_split_and_is_stationary() {
        let d = Exponential::new(1.0).unwrap();
        let s = solve_optimal(&d, 2).unwrap();
        assert!(s.residual <= OPTIMAL_RESIDUAL_TOL);
        let opt = w1_continuous_discrete(&d, &s.measure).unwrap();
        let split = crate::metrics::w1_via_cells(&d, SplitRule::Mean, 1).unwrap();
        assert!(opt < split);
        // each atom is the median of its midpoint cell
        let xs: Vec<f64> = s.measure.positions().collect();
        let ms = midpoint_points(&d, &xs);
        for i in 0..2 {
            let med = conditional_median_between(&d, &ms[i], &ms[i + 1]).unwrap();
            assert!((med - xs[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn asymptotic_positions_closed_forms() {
        let d = Exponential::new(1.0).unwrap();
        let m = asymptotically_optimal_quantizer(&d, 2).unwrap();
        let xs: Vec<f64> = m.positions().collect();
        assert!((xs[0] + 2.0 * 0.75f64.ln()).abs() < 1e-9, "{xs:?}");
        assert!((xs[1] + 2.0 * 0.25f64.ln()).abs() < 1e-9, "{xs:?}");

        let p = Pareto::new(2.0, 1.0).unwrap();
        let xs: Vec<f64> = asymptotically_optimal_quantizer(&p, 2).unwrap().positions().collect();
        assert!((xs[0] - 16.0 / 9.0).abs() < 1e-8, "{xs:?}");
        assert!((xs[1] - 16.0).abs() < 1e-7, "{xs:?}");

        // sqrt of the standard normal density is a N(0, 2) shape
        let g = Gaussian::standard();
        let xs: Vec<f64> = asymptotically_optimal_quantizer(&g, 5).unwrap().positions().collect();
        let wide = Gaussian::new(0.0, std::f64::consts::SQRT_2).unwrap();
        for (i, x) in xs.iter().enumerate() {
            let q = wide.quantile((2 * i + 1) as f64 / 10.0);
            assert!((x - q).abs() < 1e-9, "{i}: {x} vs {q}");
        }
    }

    #[test]
    fn zador_constants() {
        assert!((zador_constant(&Exponential::new(1.0).unwrap()).unwrap() - 1.0).abs() < 1e-9);
        let g = zador_constant(&Gaussian::standard()).unwrap();
        assert!((g - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-9, "{g}");
        assert!((zador_constant(&Uniform::unit()).unwrap() - 0.25).abs() < 1e-12);
        assert!(matches!(zador_constant(&HeavyTailed), Err(QuantError::DivergentHalfDensity)));
    }

    #[test]
    fn exponential_omega_sequences() {
        let d = Exponential::new(1.0).unwrap();
        let r = split_chain_bound(&d, SplitRule::Mean, 6).unwrap();
        for (k, w) in r.omega.iter().enumerate() {
            // omega[k] = w_{k-1} = k
            assert!((w - k as f64).abs() < 1e-12);
        }
        let r = split_chain_bound(&d, SplitRule::Median, 6).unwrap();
        for (k, w) in r.omega.iter().enumerate().skip(1) {
            assert!((w - k as f64 * std::f64::consts::LN_2).abs() < 1e-12);
        }
        let p = Pareto::new(3.0, 1.0).unwrap();
        let r = split_chain_bound(&p, SplitRule::Mean, 5).unwrap();
        for (k, w) in r.omega.iter().enumerate().skip(1) {
            assert!((w / 1.5f64.powi(k as i32) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exponential_closed_form_bound() {
        let e = std::f64::consts::E;
        let d = Exponential::new(1.0).unwrap();
        for n in 1..10 {
            let r = split_chain_bound(&d, SplitRule::Mean, n).unwrap();
            let sum = 0.5f64.powi(n as i32) * (e - 1.0) / (e - 2.0) * (1.0 - (2.0 / e).powi(n as i32));
            let tail = 2.0 * (-(n as f64 + 1.0)).exp();
            assert!((r.thm48_upper - (sum + tail)).abs() < 1e-13 * r.thm48_upper);
            assert!((r.tail_lower - tail).abs() < 1e-15);
        }
    }

    #[test]
    fn bound_preconditions() {
        assert!(matches!(split_chain_bound(&Gaussian::standard(), SplitRule::Mean, 3), Err(QuantError::UnboundedBelow)));
        let d = Exponential::new(1.0).unwrap();
        assert!(matches!(split_chain_bound(&d, SplitRule::GeometricMean, 3), Err(QuantError::UnsupportedRule(_))));
        assert!(tail_rate_estimate(&d, SplitRule::Mean, 5).is_err());
    }

    #[test]
    fn uniform_rate_is_exactly_one_half() {
        let s = tail_rate_estimate(&Uniform::unit(), SplitRule::Mean, 10).unwrap();
        assert!((s - 0.5f64.ln()).abs() < 1e-6);
    }
}

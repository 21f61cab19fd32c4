//! Safeguarded Newton inversion of monotone functions, plus the Lambert W function.

/// Absolute/relative stopping tolerance on the abscissa.
#[derive(Debug, Clone, Copy)]
pub struct XTol {
    pub abs: f64,
    pub rel: f64,
}

impl XTol {
    /// Bounded supports stop on an absolute step of `1e-12`.
    pub const BOUNDED: XTol = XTol { abs: 1e-12, rel: 0.0 };
    /// Unbounded supports stop on a relative step of `1e-12` (with a tiny absolute floor so
    /// roots at zero terminate).
    pub const UNBOUNDED: XTol = XTol { abs: 1e-300, rel: 1e-12 };

    fn at(&self, x: f64) -> f64 {
        self.abs.max(self.rel * x.abs())
    }
}

const MAX_ITER: usize = 300;

/// Solves `f(x) = target` for a nondecreasing `f` on `[lo, hi]` (either end may be infinite).
///
/// `f` returns the value and the derivative at `x`. The bracket is expanded geometrically from
/// `x0` when an end is infinite, then Newton steps are taken and replaced by bisection whenever
/// they leave the current bracket.
pub fn solve_increasing<F>(f: F, target: f64, lo: f64, hi: f64, x0: f64, tol: XTol) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let mut x = if x0.is_finite() && x0 >= lo && x0 <= hi {
        x0
    } else if lo.is_finite() && hi.is_finite() {
        0.5 * (lo + hi)
    } else if lo.is_finite() {
        lo + 1.0
    } else if hi.is_finite() {
        hi - 1.0
    } else {
        0.0
    };
    let (mut fx, mut dfx) = f(x);
    if fx == target {
        return x;
    }

    // establish a finite bracket [a, b] with f(a) <= target <= f(b)
    let (mut a, mut b) = (lo, hi);
    if fx < target {
        a = x;
        if !b.is_finite() {
            let mut step = x.abs().max(1.0);
            loop {
                let probe = x + step;
                if !probe.is_finite() {
                    b = f64::MAX;
                    break;
                }
                if f(probe).0 >= target {
                    b = probe;
                    break;
                }
                a = probe;
                step *= 2.0;
            }
        }
    } else {
        b = x;
        if !a.is_finite() {
            let mut step = x.abs().max(1.0);
            loop {
                let probe = x - step;
                if !probe.is_finite() {
                    a = f64::MIN;
                    break;
                }
                if f(probe).0 <= target {
                    a = probe;
                    break;
                }
                b = probe;
                step *= 2.0;
            }
        }
    }

    for _ in 0..MAX_ITER {
        if fx == target {
            return x;
        }
        if fx < target {
            a = x;
        } else {
            b = x;
        }
        let newton = x - (fx - target) / dfx;
        let next = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if step <= tol.at(x) || b - a <= tol.at(x) {
            return x;
        }
        (fx, dfx) = f(x);
    }
    x
}

/// Principal branch of the Lambert W function for `z >= -1/e`.
pub fn lambert_w0(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    if z.is_infinite() {
        return f64::INFINITY;
    }
    let mut w = if z > std::f64::consts::E {
        let l = z.ln();
        l - l.ln()
    } else if z > -0.25 {
        // w ~ z - z^2 near the origin, log1p keeps it sane up to e
        (1.0 + z).ln() * (1.0 - 0.2 * z.clamp(0.0, 1.0))
    } else {
        // branch point expansion
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0
    };
    for _ in 0..64 {
        let ew = w.exp();
        let fw = w * ew - z;
        let denom = ew * (w + 1.0) - (w + 2.0) * fw / (2.0 * w + 2.0);
        let next = w - fw / denom;
        if !next.is_finite() {
            break;
        }
        if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1e-300) {
            return next;
        }
        w = next;
    }
    w
}

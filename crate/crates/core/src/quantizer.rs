//! The divide-and-conquer quantizer `T^f(mu, n)` for continuous laws and its discrete analogue.
//!
//! A cell is bisected at its split point into `[lo, s]` and `(s, hi]` until the depth budget is
//! spent; each leaf contributes one atom at its split point weighted by its mass. If a child has
//! no mass the parent collapses into a single atom placed at the split point of the surviving
//! child, carrying the whole parent mass.

use rayon::prelude::*;

use crate::error::{QuantError, Result};
use crate::measures::{coincident_runs, merge_run, merge_sorted, Atom, DiscreteMeasure, Distribution, Point, MASS_TOL};
use crate::split::SplitRule;
use crate::util::NeumaierSum;

/// Largest accepted depth (`2^30` atoms).
pub const MAX_DEPTH: u32 = 30;

/// Depth from which the top-level subtrees are quantized in parallel.
const PARALLEL_MIN_DEPTH: u32 = 12;
/// Number of levels expanded sequentially before handing subtrees to the pool.
const PARALLEL_FANOUT_LEVELS: u32 = 6;

/// A sub-interval of the support with its endpoint CDF and survival values cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub lo: Point,
    pub hi: Point,
    pub depth_remaining: u32,
}

impl Cell {
    pub fn full<D: Distribution + ?Sized>(d: &D, depth: u32) -> Self {
        let (lo, hi) = d.support();
        Cell { lo: Point::eval(d, lo), hi: Point::eval(d, hi), depth_remaining: depth }
    }

    pub fn mass(&self) -> f64 {
        crate::measures::mass_between(&self.lo, &self.hi)
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo.x, self.hi.x)
    }
}

enum Item<T> {
    Leaf(T),
    Pending(Cell),
}

/// Receives the output of [`expand`] in left-to-right order.
trait Sink<T> {
    fn leaf(&mut self, t: T);
    fn pending(&mut self, cell: Cell);
}

impl<T> Sink<T> for Vec<Item<T>> {
    fn leaf(&mut self, t: T) {
        self.push(Item::Leaf(t));
    }

    fn pending(&mut self, cell: Cell) {
        self.push(Item::Pending(cell));
    }
}

/// Leaves only; `Item` is as large as a `Cell`, so subtrees write their leaves directly.
impl<T> Sink<T> for Vec<T> {
    fn leaf(&mut self, t: T) {
        self.push(t);
    }

    fn pending(&mut self, _: Cell) {
        unreachable!("pending cells only above the floor");
    }
}

/// Runs the recursion below `root`, emitting finished leaves in left-to-right order. Cells that
/// still have `floor > 0` levels left are emitted as pending instead of being expanded.
fn expand<D, T, F, S>(d: &D, rule: SplitRule, root: Cell, floor: u32, leaf: &F, out: &mut S) -> Result<()>
where
    D: Distribution + ?Sized,
    F: Fn(Atom, Cell) -> T,
    S: Sink<T>,
{
    let mut stack = vec![root];
    while let Some(cell) = stack.pop() {
        if floor > 0 && cell.depth_remaining == floor {
            out.pending(cell);
            continue;
        }
        let s = rule.split_between(d, &cell.lo, &cell.hi)?;
        if cell.depth_remaining == 0 {
            out.leaf(leaf(Atom::new(s, cell.mass()), cell));
            continue;
        }
        let mid = Point::eval(d, s);
        let left = Cell { lo: cell.lo, hi: mid, depth_remaining: cell.depth_remaining - 1 };
        let right = Cell { lo: mid, hi: cell.hi, depth_remaining: cell.depth_remaining - 1 };
        let left_empty = left.mass() <= MASS_TOL;
        let right_empty = right.mass() <= MASS_TOL;
        if left_empty || right_empty {
            let x = match (left_empty, right_empty) {
                (true, false) => rule.split_between(d, &right.lo, &right.hi)?,
                (false, true) => rule.split_between(d, &left.lo, &left.hi)?,
                _ => s,
            };
            out.leaf(leaf(Atom::new(x, cell.mass()), cell));
            continue;
        }
        stack.push(right);
        stack.push(left);
    }
    Ok(())
}

/// Leaves of the depth-`n` recursion in left-to-right order, each mapped through `leaf`.
fn leaves<D, T, F>(d: &D, rule: SplitRule, n: u32, leaf: F) -> Result<Vec<T>>
where
    D: Distribution + ?Sized,
    T: Send,
    F: Fn(Atom, Cell) -> T + Sync,
{
    if n > MAX_DEPTH {
        return Err(QuantError::DepthTooLarge(n));
    }
    if !d.mean().is_finite() {
        return Err(QuantError::NonFiniteMean);
    }
    let root = Cell::full(d, n);
    if n < PARALLEL_MIN_DEPTH {
        let mut out: Vec<T> = Vec::with_capacity(1 << n);
        expand(d, rule, root, 0, &leaf, &mut out)?;
        return Ok(out);
    }
    let mut items: Vec<Item<T>> = Vec::new();
    expand(d, rule, root, n - PARALLEL_FANOUT_LEVELS, &leaf, &mut items)?;
    let parts: Vec<Vec<T>> = items
        .into_par_iter()
        .map(|it| match it {
            Item::Leaf(t) => Ok(vec![t]),
            Item::Pending(cell) => {
                let mut sub: Vec<T> = Vec::with_capacity(1 << cell.depth_remaining);
                expand(d, rule, cell, 0, &leaf, &mut sub)?;
                Ok(sub)
            }
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(parts.iter().map(Vec::len).sum());
    for part in parts {
        out.extend(part);
    }
    Ok(out)
}

/// Merges coincident atoms and the cells behind them.
fn merge_leaves(leaves: Vec<(Atom, Cell)>) -> (Vec<Atom>, Vec<Cell>) {
    let positions: Vec<f64> = leaves.iter().map(|(a, _)| a.position).collect();
    let runs = coincident_runs(&positions);
    let mut atoms = Vec::with_capacity(runs.len());
    let mut cells = Vec::with_capacity(runs.len());
    for (s, e) in runs {
        if e - s == 1 {
            atoms.push(leaves[s].0);
            cells.push(leaves[s].1);
        } else {
            let run: Vec<Atom> = leaves[s..e].iter().map(|(a, _)| *a).collect();
            atoms.push(merge_run(&run));
            let first = leaves[s].1;
            let last = leaves[e - 1].1;
            cells.push(Cell { lo: first.lo, hi: last.hi, depth_remaining: first.depth_remaining });
        }
    }
    (atoms, cells)
}

/// `T^f(d, n)`: at most `2^n` atoms, sorted by position.
pub fn quantize<D: Distribution + ?Sized>(d: &D, rule: SplitRule, n: u32) -> Result<DiscreteMeasure> {
    let merged = merge_sorted(leaves(d, rule, n, |a, _| a)?);
    Ok(DiscreteMeasure::from_sorted_unchecked(merged))
}

/// As [`quantize`], also returning the leaf partition aligned index-by-index with the atoms.
pub fn quantize_with_cells<D: Distribution + ?Sized>(
    d: &D,
    rule: SplitRule,
    n: u32,
) -> Result<(DiscreteMeasure, Vec<Cell>)> {
    let (atoms, cells) = merge_leaves(leaves(d, rule, n, |a, c| (a, c))?);
    Ok((DiscreteMeasure::from_sorted_unchecked(atoms), cells))
}

/// Split point of the atoms `xs[..]` with weights `ws[..]` and total `total`.
fn discrete_split(rule: SplitRule, xs: &[f64], ws: &[f64], total: f64) -> Result<f64> {
    match rule {
        SplitRule::Mean => {
            let s: NeumaierSum = xs.iter().zip(ws).map(|(x, w)| x * w).collect();
            Ok((s.sum() / total).clamp(xs[0], xs[xs.len() - 1]))
        }
        SplitRule::Median => {
            // interpolated CDF with nodes (x_k, c_k), c_k the cumulative weight through atom k
            let half = 0.5 * total;
            let mut cum = ws[0];
            if cum >= half {
                return Ok(xs[0]);
            }
            for k in 1..xs.len() {
                let next = cum + ws[k];
                if next >= half {
                    let t = (half - cum) / ws[k];
                    return Ok(xs[k - 1] + t * (xs[k] - xs[k - 1]));
                }
                cum = next;
            }
            Ok(xs[xs.len() - 1])
        }
        SplitRule::GeometricMean => {
            if xs[0] <= 0.0 {
                return Err(QuantError::NegativeSupport { lo: xs[0] });
            }
            let s: NeumaierSum = xs.iter().zip(ws).map(|(x, w)| x.ln() * w).collect();
            Ok((s.sum() / total).exp().clamp(xs[0], xs[xs.len() - 1]))
        }
    }
}

/// Discrete analogue of [`quantize`] used for compression.
///
/// Cells are index ranges of the sorted atom array. A cell is split at its split point into the
/// atoms `<= s` and the atoms `> s`; a single-atom cell is returned unchanged. For the median
/// rule the split point is read off the piecewise-linear interpolation of the cell's CDF.
/// With the mean rule the output has exactly the mean of `m`.
pub fn quantize_discrete(m: &DiscreteMeasure, rule: SplitRule, n: u32) -> Result<DiscreteMeasure> {
    if n > MAX_DEPTH {
        return Err(QuantError::DepthTooLarge(n));
    }
    let xs: Vec<f64> = m.positions().collect();
    let ws: Vec<f64> = m.weights().collect();
    let mut out = Vec::with_capacity(m.len().min(1 << n.min(20)));
    let mut stack = vec![(0usize, xs.len(), n)];
    while let Some((s, e, depth)) = stack.pop() {
        if e - s == 1 {
            out.push(Atom::new(xs[s], ws[s]));
            continue;
        }
        let (cx, cw) = (&xs[s..e], &ws[s..e]);
        let total: f64 = cw.iter().copied().collect::<NeumaierSum>().sum();
        let split = discrete_split(rule, cx, cw, total)?;
        if depth == 0 {
            out.push(Atom::new(split, total));
            continue;
        }
        let k = s + cx.partition_point(|&x| x <= split);
        if k == s || k == e {
            out.push(Atom::new(split, total));
            continue;
        }
        stack.push((k, e, depth - 1));
        stack.push((s, k, depth - 1));
    }
    let positions: Vec<f64> = out.iter().map(|a| a.position).collect();
    let merged = coincident_runs(&positions).into_iter().map(|(s, e)| merge_run(&out[s..e])).collect();
    Ok(DiscreteMeasure::from_sorted_unchecked(merged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Exponential, Pareto, Uniform};

    fn assert_atoms(m: &DiscreteMeasure, expected: &[(f64, f64)], tol: f64) {
        assert_eq!(m.len(), expected.len(), "{m:?}");
        for (a, &(x, w)) in m.atoms().iter().zip(expected) {
            assert!((a.position - x).abs() <= tol && (a.weight - w).abs() <= tol, "{a:?} vs ({x}, {w})");
        }
    }

    #[test]
    fn uniform_mean_split_depth_one() {
        let m = quantize(&Uniform::unit(), SplitRule::Mean, 1).unwrap();
        assert_atoms(&m, &[(0.25, 0.5), (0.75, 0.5)], 1e-15);
    }

    #[test]
    fn uniform_positions_are_odd_dyadics() {
        for rule in [SplitRule::Mean, SplitRule::Median] {
            let n = 5;
            let m = quantize(&Uniform::unit(), rule, n).unwrap();
            let size = 1usize << n;
            assert_eq!(m.len(), size);
            for (i, a) in m.atoms().iter().enumerate() {
                let x = (2 * i + 1) as f64 / (2 * size) as f64;
                assert!((a.position - x).abs() < 1e-14);
                assert!((a.weight - 1.0 / size as f64).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exponential_small_depths() {
        let d = Exponential::new(1.0).unwrap();
        assert_atoms(&quantize(&d, SplitRule::Mean, 0).unwrap(), &[(1.0, 1.0)], 1e-15);
        let e = std::f64::consts::E;
        let m = quantize(&d, SplitRule::Mean, 1).unwrap();
        assert_atoms(&m, &[((1.0 - 2.0 / e) / (1.0 - 1.0 / e), 1.0 - 1.0 / e), (2.0, 1.0 / e)], 1e-15);
    }

    #[test]
    fn cells_partition_the_support() {
        let d = Exponential::new(1.0).unwrap();
        let (_, cells) = quantize_with_cells(&d, SplitRule::Mean, 1).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].bounds(), (0.0, 1.0));
        assert_eq!(cells[1].bounds(), (1.0, f64::INFINITY));
        let (_, cells) = quantize_with_cells(&Uniform::unit(), SplitRule::Median, 1).unwrap();
        assert_eq!(cells[0].bounds(), (0.0, 0.5));
        assert_eq!(cells[1].bounds(), (0.5, 1.0));
        let (_, cells) = quantize_with_cells(&d, SplitRule::Median, 0).unwrap();
        assert_eq!(cells[0].bounds(), (0.0, f64::INFINITY));
    }

    #[test]
    fn median_rule_leaves_have_equal_mass() {
        let d = Pareto::new(2.0, 1.0).unwrap();
        let m = quantize(&d, SplitRule::Median, 10).unwrap();
        assert_eq!(m.len(), 1024);
        for a in m.atoms() {
            assert!((a.weight - 1.0 / 1024.0).abs() < 1e-10);
        }
    }

    #[test]
    fn parallel_and_sequential_paths_agree() {
        let d = Exponential::new(1.0).unwrap();
        let root = Cell::full(&d, PARALLEL_MIN_DEPTH);
        let mut sequential: Vec<Atom> = Vec::new();
        expand(&d, SplitRule::Mean, root, 0, &|a, _| a, &mut sequential).unwrap();
        let parallel = quantize(&d, SplitRule::Mean, PARALLEL_MIN_DEPTH).unwrap();
        assert_eq!(parallel.atoms(), &sequential[..]);
    }

    #[test]
    fn depth_guard() {
        assert!(matches!(
            quantize(&Uniform::unit(), SplitRule::Mean, 31),
            Err(QuantError::DepthTooLarge(31))
        ));
    }

    #[test]
    fn discrete_examples() {
        let coin = DiscreteMeasure::from_pairs(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(quantize_discrete(&coin, SplitRule::Mean, 1).unwrap(), coin);
        assert_atoms(&quantize_discrete(&coin, SplitRule::Mean, 0).unwrap(), &[(0.5, 1.0)], 0.0);
        let four = DiscreteMeasure::from_pairs(&[(0.0, 0.25), (1.0, 0.25), (2.0, 0.25), (3.0, 0.25)]).unwrap();
        assert_atoms(&quantize_discrete(&four, SplitRule::Mean, 1).unwrap(), &[(0.5, 0.5), (2.5, 0.5)], 1e-15);
        let sum = DiscreteMeasure::from_pairs(&[(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)]).unwrap();
        assert_atoms(&quantize_discrete(&sum, SplitRule::Mean, 1).unwrap(), &[(2.0 / 3.0, 0.75), (2.0, 0.25)], 1e-15);
        assert_eq!(quantize_discrete(&sum, SplitRule::Mean, 2).unwrap(), sum);
    }

    #[test]
    fn discrete_median_interpolates() {
        let four = DiscreteMeasure::from_pairs(&[(0.0, 0.25), (1.0, 0.25), (2.0, 0.25), (3.0, 0.25)]).unwrap();
        // cumulative nodes (0, .25), (1, .5): the interpolated median is 1
        let m = quantize_discrete(&four, SplitRule::Median, 0).unwrap();
        assert_atoms(&m, &[(1.0, 1.0)], 1e-15);
        let m = quantize_discrete(&four, SplitRule::Median, 1).unwrap();
        // left {0, 1} splits at its first atom, right {2, 3} likewise
        assert_atoms(&m, &[(0.0, 0.5), (2.0, 0.5)], 1e-15);
    }

    #[test]
    fn discrete_geomean_needs_positive_atoms() {
        let m = DiscreteMeasure::from_pairs(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!(matches!(quantize_discrete(&m, SplitRule::GeometricMean, 1), Err(QuantError::NegativeSupport { .. })));
        let m = DiscreteMeasure::from_pairs(&[(1.0, 0.5), (4.0, 0.5)]).unwrap();
        assert_atoms(&quantize_discrete(&m, SplitRule::GeometricMean, 0).unwrap(), &[(2.0, 1.0)], 1e-15);
    }
}

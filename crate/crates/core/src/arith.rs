//! Arithmetic on independent discrete measures with fixed-size recompression.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QuantError, Result};
use crate::measures::{merge_sorted, Atom, DiscreteMeasure, DistSpec, Distribution, Erlang, Gaussian};
use crate::metrics::{w1_continuous_discrete, w1_discrete};
use crate::quantizer::{quantize, quantize_discrete};
use crate::split::SplitRule;

/// Largest intermediate atom count the uncompressed reference may build.
pub const REFERENCE_ATOM_LIMIT: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn apply(&self, x: f64, y: f64) -> f64 {
        match self {
            ArithOp::Add => x + y,
            ArithOp::Sub => x - y,
            ArithOp::Mul => x * y,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ArithOp::Add => "add",
            ArithOp::Sub => "sub",
            ArithOp::Mul => "mul",
        }
    }
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArithOp {
    type Err = QuantError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "add" | "+" => Ok(ArithOp::Add),
            "sub" | "-" => Ok(ArithOp::Sub),
            "mul" | "*" => Ok(ArithOp::Mul),
            other => Err(QuantError::InvalidParameter(format!("unknown operation `{other}`"))),
        }
    }
}

/// Law of `op(X, Y)` for independent `X ~ m1`, `Y ~ m2`: all `N1 * N2` pairs, sorted, with
/// coincident positions merged.
pub fn convolve(m1: &DiscreteMeasure, m2: &DiscreteMeasure, op: ArithOp) -> DiscreteMeasure {
    let rhs = m2.atoms();
    let mut atoms: Vec<Atom> = m1
        .atoms()
        .par_iter()
        .flat_map_iter(|a| {
            rhs.iter()
                .map(move |b| Atom::new(op.apply(a.position, b.position), a.weight * b.weight))
        })
        .filter(|a| a.weight > 0.0)
        .collect();
    atoms.par_sort_by(|a, b| a.position.total_cmp(&b.position));
    DiscreteMeasure::from_sorted_unchecked(merge_sorted(atoms))
}

/// Shrinks `m` to at most `2^n` atoms with the discrete split quantizer.
pub fn compress(m: &DiscreteMeasure, rule: SplitRule, n: u32) -> Result<DiscreteMeasure> {
    quantize_discrete(m, rule, n)
}

/// Asymptotically optimal `n_atoms`-point compression of a discrete measure.
///
/// The CDF of `m` is interpolated linearly between consecutive atoms, so the mass of atom `k`
/// is spread uniformly over `(x_{k-1}, x_k]` and the mass of the first atom stays a point mass.
/// Positions are the `(2i - 1) / 2N` quantiles of the normalized square root of that density;
/// each position collects the atoms of `m` closest to it. Measures with at most `n_atoms`
/// atoms are returned unchanged.
pub fn compress_asymptotic(m: &DiscreteMeasure, n_atoms: usize) -> Result<DiscreteMeasure> {
    if n_atoms == 0 {
        return Err(QuantError::InvalidParameter("atom count must be >= 1".into()));
    }
    if m.len() <= n_atoms {
        return Ok(m.clone());
    }
    let atoms = m.atoms();
    // half-density mass of segment k is sqrt(w_k (x_k - x_{k-1}))
    let mut cum = Vec::with_capacity(atoms.len());
    let mut acc = 0.0;
    cum.push(0.0);
    for pair in atoms.windows(2) {
        acc += (pair[1].weight * (pair[1].position - pair[0].position)).sqrt();
        cum.push(acc);
    }
    let total = acc;
    let mut positions = Vec::with_capacity(n_atoms);
    let mut k = 1;
    for i in 0..n_atoms {
        let t = total * (2 * i + 1) as f64 / (2 * n_atoms) as f64;
        while k + 1 < atoms.len() && cum[k] < t {
            k += 1;
        }
        let h = cum[k] - cum[k - 1];
        let frac = if h > 0.0 { ((t - cum[k - 1]) / h).clamp(0.0, 1.0) } else { 1.0 };
        let (a, b) = (atoms[k - 1].position, atoms[k].position);
        positions.push(a + frac * (b - a));
    }
    // nearest-position assignment; ties at a midpoint go left
    let mut out: Vec<Atom> = positions.iter().map(|&x| Atom::new(x, 0.0)).collect();
    let mut j = 0;
    for a in atoms {
        while j + 1 < positions.len() && a.position > 0.5 * (positions[j] + positions[j + 1]) {
            j += 1;
        }
        out[j].weight += a.weight;
    }
    out.retain(|a| a.weight > 0.0);
    Ok(DiscreteMeasure::from_sorted_unchecked(merge_sorted(out)))
}

/// Left fold `((m_0 op m_1) op m_2) ...`, compressing to depth `n` after every operation.
/// Compression does not commute with the operation, so the order of `ms` matters.
pub fn fold(ms: &[DiscreteMeasure], op: ArithOp, rule: SplitRule, n: u32) -> Result<DiscreteMeasure> {
    fold_with(ms, op, |m| compress(m, rule, n))
}

/// As [`fold`] with an arbitrary compression step.
pub fn fold_with<C>(ms: &[DiscreteMeasure], op: ArithOp, compress: C) -> Result<DiscreteMeasure>
where
    C: Fn(&DiscreteMeasure) -> Result<DiscreteMeasure>,
{
    if ms.len() < 2 {
        return Err(QuantError::InvalidParameter(format!("fold needs at least two operands, got {}", ms.len())));
    }
    let mut acc = compress(&convolve(&ms[0], &ms[1], op))?;
    for m in &ms[2..] {
        acc = compress(&convolve(&acc, m, op))?;
    }
    Ok(acc)
}

/// How a pushforward reference was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceKind {
    /// A single operand: the law itself.
    Exact,
    /// Closed-form Gaussian for sums and differences of Gaussians.
    ClosedGaussian,
    /// Closed-form Erlang law for sums of equal-rate exponentials.
    ClosedErlang,
    /// Uncompressed product of high-resolution quantizations.
    HiresProduct,
    /// High-resolution quantizations folded with a large compression depth.
    HiresCompressed,
}

impl ReferenceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReferenceKind::Exact => "exact",
            ReferenceKind::ClosedGaussian => "closed-gaussian",
            ReferenceKind::ClosedErlang => "closed-erlang",
            ReferenceKind::HiresProduct => "hires-product",
            ReferenceKind::HiresCompressed => "hires-compressed",
        }
    }
}

/// Ground truth for the law of `op` applied to independent operands.
#[derive(Debug)]
pub enum Pushforward {
    Continuous(Box<dyn Distribution>, ReferenceKind),
    Discrete(DiscreteMeasure, ReferenceKind),
}

impl Pushforward {
    pub fn kind(&self) -> ReferenceKind {
        match self {
            Pushforward::Continuous(_, k) | Pushforward::Discrete(_, k) => *k,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Pushforward::Continuous(d, _) => d.mean(),
            Pushforward::Discrete(m, _) => m.mean(),
        }
    }

    /// `W1` between the reference and `m`.
    pub fn w1_to(&self, m: &DiscreteMeasure) -> Result<f64> {
        match self {
            Pushforward::Continuous(d, _) => w1_continuous_discrete(d.as_ref(), m),
            Pushforward::Discrete(r, _) => Ok(w1_discrete(r, m)),
        }
    }
}

fn closed_form(ds: &[DistSpec], op: ArithOp) -> Result<Option<Pushforward>> {
    let gaussians: Option<Vec<(f64, f64)>> = ds
        .iter()
        .map(|d| match *d {
            DistSpec::Gaussian { mu, sigma } => Some((mu, sigma)),
            _ => None,
        })
        .collect();
    if let (Some(gs), ArithOp::Add | ArithOp::Sub) = (&gaussians, op) {
        let sign = |i: usize| if i == 0 || op == ArithOp::Add { 1.0 } else { -1.0 };
        let mu: f64 = gs.iter().enumerate().map(|(i, g)| sign(i) * g.0).sum();
        let var: f64 = gs.iter().map(|g| g.1 * g.1).sum();
        let law = Gaussian::new(mu, var.sqrt())?;
        return Ok(Some(Pushforward::Continuous(Box::new(law), ReferenceKind::ClosedGaussian)));
    }
    if op == ArithOp::Add {
        let rates: Option<Vec<f64>> = ds
            .iter()
            .map(|d| match *d {
                DistSpec::Exponential { rate } => Some(rate),
                _ => None,
            })
            .collect();
        if let Some(rates) = rates {
            if rates.iter().all(|&r| r == rates[0]) {
                let law = Erlang::new(rates.len() as u32, rates[0])?;
                return Ok(Some(Pushforward::Continuous(Box::new(law), ReferenceKind::ClosedErlang)));
            }
        }
    }
    Ok(None)
}

/// Reference law of `op` folded over independent operands `ds`.
///
/// Closed forms are used for sums/differences of Gaussians and sums of equal-rate
/// exponentials. Otherwise every operand is quantized at depth `grid_n` with the mean rule and
/// the exact product is built with merging only; [`QuantError::MemoryGuard`] is returned when
/// an intermediate would exceed [`REFERENCE_ATOM_LIMIT`] atoms.
pub fn reference_pushforward(ds: &[DistSpec], op: ArithOp, grid_n: u32) -> Result<Pushforward> {
    if ds.len() < 2 {
        return Err(QuantError::InvalidParameter(format!("need at least two operands, got {}", ds.len())));
    }
    if let Some(closed) = closed_form(ds, op)? {
        return Ok(closed);
    }
    let grids = hires_grids(ds, grid_n)?;
    let mut atoms = grids[0].len();
    for g in &grids[1..] {
        atoms = atoms.saturating_mul(g.len());
        if atoms > REFERENCE_ATOM_LIMIT {
            return Err(QuantError::MemoryGuard { atoms, limit: REFERENCE_ATOM_LIMIT });
        }
    }
    let mut acc = convolve(&grids[0], &grids[1], op);
    for g in &grids[2..] {
        acc = convolve(&acc, g, op);
    }
    Ok(Pushforward::Discrete(acc, ReferenceKind::HiresProduct))
}

/// As [`reference_pushforward`] for products too large to build exactly: the high-resolution
/// operands are folded with compression to depth `acc_n` after each step.
pub fn reference_pushforward_compressed(ds: &[DistSpec], op: ArithOp, grid_n: u32, acc_n: u32) -> Result<Pushforward> {
    if ds.len() < 2 {
        return Err(QuantError::InvalidParameter(format!("need at least two operands, got {}", ds.len())));
    }
    let grids = hires_grids(ds, grid_n)?;
    Ok(Pushforward::Discrete(fold(&grids, op, SplitRule::Mean, acc_n)?, ReferenceKind::HiresCompressed))
}

/// References for `op` folded over `1, 2, ..., k` independent copies of one law.
///
/// Step `k` reuses step `k - 1`: the previous discrete reference is convolved with a
/// depth-`grid_n` quantization of the law, exactly while the product stays under
/// [`REFERENCE_ATOM_LIMIT`] atoms and after mean-split compression to depth `acc_n` otherwise.
/// Closed forms take precedence whenever they apply.
#[derive(Debug)]
pub struct ReferenceChain {
    spec: DistSpec,
    op: ArithOp,
    grid_n: u32,
    acc_n: u32,
    k: usize,
    grid: Option<DiscreteMeasure>,
    prev: Option<DiscreteMeasure>,
    compressed: bool,
}

impl ReferenceChain {
    pub fn new(spec: DistSpec, op: ArithOp, grid_n: u32, acc_n: u32) -> Self {
        ReferenceChain { spec, op, grid_n, acc_n, k: 0, grid: None, prev: None, compressed: false }
    }

    /// Number of operands of the reference returned by the last call to [`advance`](Self::advance).
    pub fn operands(&self) -> usize {
        self.k
    }

    /// Reference for one more operand.
    pub fn advance(&mut self) -> Result<Pushforward> {
        self.k += 1;
        if self.k == 1 {
            return Ok(Pushforward::Continuous(self.spec.build()?, ReferenceKind::Exact));
        }
        if let Some(closed) = closed_form(&vec![self.spec; self.k], self.op)? {
            return Ok(closed);
        }
        if self.grid.is_none() {
            self.grid = Some(quantize(self.spec.build()?.as_ref(), SplitRule::Mean, self.grid_n)?);
        }
        let grid = self.grid.as_ref().expect("grid initialized above");
        let base = match self.prev.take() {
            None => grid.clone(),
            Some(p) if p.len().saturating_mul(grid.len()) > REFERENCE_ATOM_LIMIT => {
                self.compressed = true;
                compress(&p, SplitRule::Mean, self.acc_n)?
            }
            Some(p) => p,
        };
        if base.len().saturating_mul(grid.len()) > REFERENCE_ATOM_LIMIT {
            return Err(QuantError::MemoryGuard { atoms: base.len().saturating_mul(grid.len()), limit: REFERENCE_ATOM_LIMIT });
        }
        let product = convolve(&base, grid, self.op);
        self.prev = Some(product.clone());
        let kind = if self.compressed { ReferenceKind::HiresCompressed } else { ReferenceKind::HiresProduct };
        Ok(Pushforward::Discrete(product, kind))
    }
}

fn hires_grids(ds: &[DistSpec], grid_n: u32) -> Result<Vec<DiscreteMeasure>> {
    ds.par_iter()
        .map(|spec| quantize(spec.build()?.as_ref(), SplitRule::Mean, grid_n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Exponential;

    fn measure(pairs: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::from_pairs(pairs).unwrap()
    }

    #[test]
    fn convolution_examples() {
        let r = convolve(&DiscreteMeasure::dirac(1.5), &DiscreteMeasure::dirac(2.0), ArithOp::Add);
        assert_eq!(r, DiscreteMeasure::dirac(3.5));
        let coin = measure(&[(0.0, 0.5), (1.0, 0.5)]);
        assert_eq!(convolve(&coin, &coin, ArithOp::Add), measure(&[(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)]));
        let m = measure(&[(1.0, 0.5), (2.0, 0.5)]);
        assert_eq!(convolve(&m, &m, ArithOp::Mul), measure(&[(1.0, 0.25), (2.0, 0.5), (4.0, 0.25)]));
        assert_eq!(convolve(&m, &m, ArithOp::Sub), measure(&[(-1.0, 0.25), (0.0, 0.5), (1.0, 0.25)]));
    }

    #[test]
    fn compress_examples() {
        let three = measure(&[(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)]);
        assert_eq!(compress(&three, SplitRule::Mean, 2).unwrap(), three);
        let c = compress(&three, SplitRule::Mean, 1).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c.atoms()[0].position - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.atoms()[0].weight - 0.75).abs() < 1e-15);
        assert_eq!(c.atoms()[1], Atom::new(2.0, 0.25));
    }

    #[test]
    fn fold_of_diracs() {
        let ms = [DiscreteMeasure::dirac(1.0), DiscreteMeasure::dirac(2.0), DiscreteMeasure::dirac(3.0)];
        for n in [0, 3, 6] {
            assert_eq!(fold(&ms, ArithOp::Add, SplitRule::Mean, n).unwrap(), DiscreteMeasure::dirac(6.0));
        }
        assert!(fold(&ms[..1], ArithOp::Add, SplitRule::Mean, 3).is_err());
    }

    #[test]
    fn fold_preserves_means() {
        let g = quantize(&Gaussian::standard(), SplitRule::Mean, 6).unwrap();
        let r = fold(&[g.clone(), g], ArithOp::Add, SplitRule::Mean, 6).unwrap();
        assert!(r.mean().abs() < 1e-9);
        assert!(r.len() <= 64);
        let e = quantize(&Exponential::new(1.0).unwrap(), SplitRule::Mean, 6).unwrap();
        let r = fold(&vec![e; 4], ArithOp::Add, SplitRule::Mean, 6).unwrap();
        assert!((r.mean() - 4.0).abs() < 1e-8);
    }

    #[test]
    fn closed_form_references() {
        let g = DistSpec::Gaussian { mu: 0.0, sigma: 1.0 };
        let r = reference_pushforward(&[g, g], ArithOp::Add, 8).unwrap();
        assert_eq!(r.kind(), ReferenceKind::ClosedGaussian);
        let Pushforward::Continuous(d, _) = &r else { panic!() };
        assert!((d.scale() - std::f64::consts::SQRT_2).abs() < 1e-15);

        let e = DistSpec::Exponential { rate: 1.0 };
        let r = reference_pushforward(&[e, e], ArithOp::Add, 8).unwrap();
        assert_eq!(r.kind(), ReferenceKind::ClosedErlang);
        let Pushforward::Continuous(d, _) = &r else { panic!() };
        for x in [0.5f64, 1.0, 3.0] {
            let closed = 1.0 - (-x).exp() * (1.0 + x);
            assert!((d.cdf(x) - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn product_reference_and_guard() {
        let p = DistSpec::Pareto { alpha: 2.0, xm: 1.0 };
        let r = reference_pushforward(&[p, p], ArithOp::Mul, 6).unwrap();
        assert_eq!(r.kind(), ReferenceKind::HiresProduct);
        assert!((r.mean() - 4.0).abs() < 1e-12);
        assert!(matches!(
            reference_pushforward(&[p, p, p, p, p], ArithOp::Mul, 6),
            Err(QuantError::MemoryGuard { .. })
        ));
        let r = reference_pushforward_compressed(&[p, p, p], ArithOp::Mul, 6, 10).unwrap();
        assert_eq!(r.kind(), ReferenceKind::HiresCompressed);
        assert!((r.mean() - 8.0).abs() < 1e-10);
    }

    #[test]
    fn asymptotic_compression() {
        let three = measure(&[(0.0, 0.25), (1.0, 0.5), (2.0, 0.25)]);
        assert_eq!(compress_asymptotic(&three, 3).unwrap(), three);
        let one = compress_asymptotic(&three, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one.atoms()[0].weight - 1.0).abs() < 1e-15);
        // uniform grid: interpolated density is flat, so positions are the cell midpoints
        let grid: Vec<(f64, f64)> = (0..=1000).map(|i| (i as f64 / 1000.0, 1.0 / 1001.0)).collect();
        let c = compress_asymptotic(&measure(&grid), 4).unwrap();
        for (a, want) in c.atoms().iter().zip([0.125, 0.375, 0.625, 0.875]) {
            assert!((a.position - want).abs() < 1e-12, "{a:?}");
            assert!((a.weight - 0.25).abs() < 2e-3);
        }
    }

    #[test]
    fn reference_chain_matches_direct_references() {
        let p = DistSpec::Pareto { alpha: 3.0, xm: 1.0 };
        let mut chain = ReferenceChain::new(p, ArithOp::Mul, 5, 8);
        assert_eq!(chain.advance().unwrap().kind(), ReferenceKind::Exact);
        let two = chain.advance().unwrap();
        let Pushforward::Discrete(two, ReferenceKind::HiresProduct) = two else { panic!() };
        let Pushforward::Discrete(direct, _) = reference_pushforward(&[p, p], ArithOp::Mul, 5).unwrap() else {
            panic!()
        };
        assert_eq!(two, direct);
        let three = chain.advance().unwrap();
        assert!((three.mean() - 1.5f64.powi(3)).abs() < 1e-12);
        assert_eq!(chain.operands(), 3);

        let g = DistSpec::Gaussian { mu: 1.0, sigma: 2.0 };
        let mut chain = ReferenceChain::new(g, ArithOp::Sub, 5, 8);
        chain.advance().unwrap();
        let r = chain.advance().unwrap();
        assert_eq!(r.kind(), ReferenceKind::ClosedGaussian);
        assert!(r.mean().abs() < 1e-15);
    }

    #[test]
    fn op_spellings() {
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul] {
            assert_eq!(op.as_str().parse::<ArithOp>().unwrap(), op);
        }
        assert!("div".parse::<ArithOp>().is_err());
    }
}

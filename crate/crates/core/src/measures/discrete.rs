use serde::{Deserialize, Serialize};

use crate::error::{QuantError, Result};
use crate::util::NeumaierSum;

/// Tolerance on `|sum(weights) - 1|` accepted by [`DiscreteMeasure::new`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Relative tolerance under which two positions are treated as one atom.
pub const MERGE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

impl Atom {
    pub const fn new(position: f64, weight: f64) -> Self {
        Self { position, weight }
    }
}

/// A finitely supported probability measure `sum_i w_i delta_{x_i}`.
///
/// Positions are finite and strictly increasing, weights are positive and sum to one within
/// [`WEIGHT_SUM_TOL`]. The type is immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

pub(crate) fn coincide(a: f64, b: f64) -> bool {
    (a - b).abs() <= MERGE_REL_TOL * a.abs().max(b.abs())
}

/// Start/end indices of runs of sorted positions that coincide within [`MERGE_REL_TOL`] of the
/// first position in the run.
pub(crate) fn coincident_runs(positions: &[f64]) -> Vec<(usize, usize)> {
    let mut runs = Vec::with_capacity(positions.len());
    let mut start = 0;
    for i in 1..=positions.len() {
        if i == positions.len() || !coincide(positions[start], positions[i]) {
            runs.push((start, i));
            start = i;
        }
    }
    runs
}

/// Collapses coincident atoms of a sorted list into their weighted mean.
pub(crate) fn merge_sorted(atoms: Vec<Atom>) -> Vec<Atom> {
    // a run longer than one starts with a coincident adjacent pair
    if atoms.windows(2).all(|w| !coincide(w[0].position, w[1].position)) {
        return atoms;
    }
    let positions: Vec<f64> = atoms.iter().map(|a| a.position).collect();
    coincident_runs(&positions)
        .into_iter()
        .map(|(s, e)| merge_run(&atoms[s..e]))
        .collect()
}

pub(crate) fn merge_run(run: &[Atom]) -> Atom {
    if run.len() == 1 {
        return run[0];
    }
    let w: f64 = run.iter().map(|a| a.weight).sum();
    let wx: f64 = run.iter().map(|a| a.weight * a.position).sum();
    let mut x = wx / w;
    // rounding can push the average a hair outside the run
    x = x.clamp(run[0].position, run[run.len() - 1].position);
    Atom::new(x, w)
}

impl DiscreteMeasure {
    /// Validates and wraps an already sorted atom list.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(QuantError::InvalidMeasure("no atoms".into()));
        }
        let mut total = NeumaierSum::default();
        for (i, a) in atoms.iter().enumerate() {
            if !a.position.is_finite() {
                return Err(QuantError::InvalidMeasure(format!("atom {i} has non-finite position")));
            }
            if !a.weight.is_finite() || a.weight <= 0.0 {
                return Err(QuantError::InvalidMeasure(format!("atom {i} has weight {}", a.weight)));
            }
            if i > 0 && atoms[i - 1].position >= a.position {
                return Err(QuantError::InvalidMeasure(format!("positions not strictly increasing at atom {i}")));
            }
            total.add(a.weight);
        }
        let total = total.sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(QuantError::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(Self { atoms })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(x, w)| Atom::new(x, w)).collect())
    }

    /// Sorts, drops zero weights and merges coincident positions before validating.
    pub fn from_unsorted(mut atoms: Vec<Atom>) -> Result<Self> {
        atoms.retain(|a| a.weight > 0.0);
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        Self::new(merge_sorted(atoms))
    }

    pub fn dirac(x: f64) -> Self {
        assert!(x.is_finite(), "dirac position must be finite");
        Self { atoms: vec![Atom::new(x, 1.0)] }
    }

    /// Empirical measure of a sample: every value gets weight `1/n`, ties are merged.
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(QuantError::InvalidMeasure("empty sample".into()));
        }
        let w = 1.0 / samples.len() as f64;
        Self::from_unsorted(samples.iter().map(|&x| Atom::new(x, w)).collect())
    }

    pub(crate) fn from_sorted_unchecked(atoms: Vec<Atom>) -> Self {
        debug_assert!(atoms.windows(2).all(|w| w[0].position < w[1].position));
        Self { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn into_atoms(self) -> Vec<Atom> {
        self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.position)
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }

    pub fn total_weight(&self) -> f64 {
        let mut s = NeumaierSum::default();
        self.weights().for_each(|w| s.add(w));
        s.sum()
    }

    pub fn mean(&self) -> f64 {
        let mut s = NeumaierSum::default();
        self.atoms.iter().for_each(|a| s.add(a.weight * a.position));
        s.sum()
    }

    pub fn min(&self) -> f64 {
        self.atoms[0].position
    }

    pub fn max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].position
    }

    /// `max - min` of the support.
    pub fn span(&self) -> f64 {
        self.max() - self.min()
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.atoms.partition_point(|a| a.position <= x);
        self.atoms[..k].iter().map(|a| a.weight).sum()
    }

    /// Applies `f` to every position; the result is re-sorted and merged.
    pub fn map_positions(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_unsorted(self.atoms.iter().map(|a| Atom::new(f(a.position), a.weight)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_measures() {
        assert!(DiscreteMeasure::from_pairs(&[]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(1.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.0, 0.6), (1.0, 0.5)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.0, 1.0), (1.0, 0.0)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn unsorted_input_is_sorted_and_merged() {
        let m = DiscreteMeasure::from_unsorted(vec![
            Atom::new(2.0, 0.25),
            Atom::new(1.0, 0.25),
            Atom::new(2.0 * (1.0 + 1e-14), 0.25),
            Atom::new(0.0, 0.25),
        ])
        .unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.atoms()[2].weight, 0.5);
        assert!((m.atoms()[2].position - 2.0).abs() < 1e-13);
    }

    #[test]
    fn cdf_and_moments() {
        let m = DiscreteMeasure::from_pairs(&[(0.0, 0.25), (1.0, 0.5), (3.0, 0.25)]).unwrap();
        assert_eq!(m.cdf(-1.0), 0.0);
        assert_eq!(m.cdf(0.0), 0.25);
        assert_eq!(m.cdf(2.0), 0.75);
        assert_eq!(m.cdf(3.0), 1.0);
        assert_eq!(m.mean(), 1.25);
        assert_eq!(m.span(), 3.0);
    }

    #[test]
    fn empirical_merges_ties() {
        let m = DiscreteMeasure::empirical(&[0.5, 0.1, 0.5, 0.9]).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.atoms()[1], Atom::new(0.5, 0.5));
    }
}

//! Measure types: finitely supported discrete measures, the continuous [`Distribution`]
//! interface, and the catalog of concrete laws.

mod catalog;
mod discrete;
mod distribution;

pub use catalog::*;
pub use discrete::*;
pub use distribution::*;

pub(crate) use discrete::{coincident_runs, merge_run, merge_sorted};

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Draws `count` variates of `d` by inverse-CDF transform.
///
/// Uniforms come from ChaCha8 (a counter-based stream cipher) seeded with `seed`, drawn on the
/// open interval `(0, 1)`. The output depends only on `(d, count, seed)`.
pub fn mc_sample_stream<D: Distribution + ?Sized>(d: &D, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: f64 = rng.sample(Open01);
            d.sample(u)
        })
        .collect()
}

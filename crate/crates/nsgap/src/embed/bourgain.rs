//! Coordinate embeddings from distances to random subsets. With subsets of
//! sizes 1, 2, 4, …, O(log n) draws per size, and the right normalization,
//! the ℓ_p assembly has distortion O(1 + (log n)/p) for p ≥ 2.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::numeric::rng_for;

use super::partition::dist_to_set;
use super::{image_distance, EmbeddingWitness};

/// Bi-Lipschitz quality of a produced embedding. `expansion` is the largest
/// image/source ratio, `contraction` the largest source/image ratio, and
/// `distortion` their product; the embedding is `1/expansion`-scaled
/// isometric iff distortion is 1.
#[derive(Clone, Debug, Serialize)]
pub struct DistortionReport {
    pub witness: EmbeddingWitness,
    pub expansion: f64,
    pub contraction: f64,
    pub distortion: f64,
}

pub(crate) fn bi_lipschitz(
    x: &FiniteMetric,
    images: &[Vec<f64>],
    p: f64,
) -> (f64, f64) {
    let n = x.size();
    let mut expansion = 0.0f64;
    let mut contraction = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let ds = x.dist(i, j);
            if ds == 0.0 {
                continue;
            }
            let di = image_distance(&images[i], &images[j], p);
            expansion = expansion.max(di / ds);
            contraction = contraction.max(if di > 0.0 { ds / di } else { f64::INFINITY });
        }
    }
    if expansion == 0.0 {
        // no pair with positive source distance: a single point (or a
        // fully degenerate pseudometric) is isometric trivially
        (1.0, 1.0)
    } else {
        (expansion, contraction)
    }
}

/// Samples a uniformly random subset of the given size by a partial shuffle.
fn random_subset(n: usize, size: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(size);
    pool
}

/// Embeds a finite metric into ℓ_p^m, m = J·L, with coordinates
/// d(x, S)/(J·L)^{1/p} over L = ⌈8 ln n⌉ random subsets of each size
/// 2^{j-1}, j = 1..J = ⌈log₂ n⌉. Each coordinate is 1-Lipschitz, so the
/// normalization makes the whole map 1-Lipschitz into ℓ_p; the measured
/// contraction is what the report certifies.
pub fn bourgain_matousek_embed(
    x: &FiniteMetric,
    p: f64,
    seed: u64,
) -> Result<DistortionReport> {
    if !p.is_finite() || p < 2.0 {
        return Err(Error::BadExponent {
            p,
            reason: "this embedding needs finite p >= 2",
        });
    }
    let n = x.size();
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            what: "embedding input",
            got: n,
            min: 2,
            max: usize::MAX,
        });
    }
    let scales = (n as f64).log2().ceil() as usize;
    let per_scale = (8.0 * (n as f64).ln()).ceil() as usize;
    let m = scales * per_scale;
    let norm = (m as f64).powf(-1.0 / p);

    let mut images = vec![Vec::with_capacity(m); n];
    for j in 0..scales {
        let size = 1usize << j;
        for l in 0..per_scale {
            let mut rng = rng_for(seed, (j * per_scale + l) as u64);
            let subset = random_subset(n, size, &mut rng);
            for (i, row) in images.iter_mut().enumerate() {
                row.push(norm * dist_to_set(x, i, &subset));
            }
        }
    }

    let (expansion, contraction) = bi_lipschitz(x, &images, p);
    let witness = EmbeddingWitness::measured(x, images, p, "bourgain_matousek");
    Ok(DistortionReport {
        witness,
        expansion,
        contraction,
        distortion: expansion * contraction,
    })
}

//! Embedding any finite metric into the line with bounded average
//! distortion. The construction is a dichotomy around the point with the
//! smallest mean p-th-power distance: either truncated distance to that
//! point already spreads the space, or random zero sets at scale r/8 do.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::numeric::rng_for;

use super::partition::{ckr_partition, dist_to_set, zero_set_from_partition};
use super::{powp, EmbeddingWitness};

/// Which side of the dichotomy produced the map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum LineBranch {
    /// Few local pairs: f(x) = max{0, d(x, x_k) − 2r}.
    Truncation,
    /// Many local pairs: f(x) = d(x, Z) for the best sampled zero set.
    ZeroSet {
        /// nonconstant candidates evaluated (zero-set draws plus the
        /// always-included singleton {x_k})
        candidates: usize,
        /// size of the winning set
        winner_size: usize,
    },
}

/// A line embedding with its diagnostics. `center` is the argmin point
/// x_k, `radius` its mean p-th-power distance r.
#[derive(Clone, Debug, Serialize)]
pub struct LineEmbedding {
    pub witness: EmbeddingWitness,
    pub branch: LineBranch,
    pub center: usize,
    pub radius: f64,
}

/// Sum of |f_i − f_j|^p over ordered pairs, and the measured Lipschitz
/// constant. None when f is constant on the support of the metric.
fn spread(x: &FiniteMetric, f: &[f64], p: f64) -> Option<(f64, f64)> {
    let n = x.size();
    let mut sum = 0.0;
    let mut lip = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = (f[i] - f[j]).abs();
            sum += 2.0 * powp(diff, p);
            let d = x.dist(i, j);
            if d > 0.0 {
                lip = lip.max(diff / d);
            }
        }
    }
    if sum > 0.0 {
        Some((sum, lip))
    } else {
        None
    }
}

/// Embeds a finite metric space into ℝ with a 1-Lipschitz, nonconstant map
/// whose average distortion at exponent p is bounded by a universal
/// function of p. Let x_k minimize the mean p-th-power distance (ties to
/// the lowest index) and r be that mean's p-th root. With B the 4r-ball
/// around x_k and M the ordered pairs of B at distance at least r/8:
/// if |M| ≤ n²/2^{7p}, truncated distance to x_k is returned and satisfies
/// Σᵢⱼ|f_i−f_j|^p ≥ 2^{−5p} Σᵢⱼ d(x_i,x_k)^p; otherwise distance to the
/// best of `zero_set_trials` random zero sets at scale r/8 is returned,
/// with the singleton {x_k} always among the candidates.
pub fn line_embed(
    x: &FiniteMetric,
    p: f64,
    zero_set_trials: usize,
    seed: u64,
) -> Result<LineEmbedding> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent {
            p,
            reason: "line embedding needs finite p >= 1",
        });
    }
    if zero_set_trials == 0 {
        return Err(Error::BadParameter {
            name: "zero_set_trials",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let n = x.size();
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            what: "line embedding input",
            got: n,
            min: 2,
            max: usize::MAX,
        });
    }

    let mut center = 0usize;
    let mut best_mean = f64::INFINITY;
    for i in 0..n {
        let mean = (0..n).map(|j| powp(x.dist(i, j), p)).sum::<f64>() / n as f64;
        if mean < best_mean {
            best_mean = mean;
            center = i;
        }
    }
    let radius = best_mean.powf(1.0 / p);
    if radius == 0.0 {
        return Err(Error::Degenerate(
            "all points coincide; no nonconstant 1-Lipschitz map exists".into(),
        ));
    }

    let ball: Vec<usize> = (0..n).filter(|&i| x.dist(i, center) <= 4.0 * radius).collect();
    let mut local_pairs = 0usize;
    for &i in &ball {
        for &j in &ball {
            if i != j && x.dist(i, j) >= radius / 8.0 {
                local_pairs += 1;
            }
        }
    }
    let threshold = (n * n) as f64 / 2f64.powf(7.0 * p);

    let src_sum: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| powp(x.dist(i, j), p))
        .sum();

    if (local_pairs as f64) <= threshold {
        let f: Vec<f64> = (0..n)
            .map(|i| (x.dist(i, center) - 2.0 * radius).max(0.0))
            .collect();
        let images: Vec<Vec<f64>> = f.iter().map(|&v| vec![v]).collect();
        let witness = EmbeddingWitness::measured(x, images, p, "line_truncation");
        return Ok(LineEmbedding {
            witness,
            branch: LineBranch::Truncation,
            center,
            radius,
        });
    }

    let scale = radius / 8.0;
    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    let mut candidates = 0usize;
    let consider = |members: &[usize], best: &mut Option<(f64, Vec<f64>, usize)>| {
        if members.is_empty() {
            return false;
        }
        let f: Vec<f64> = (0..n).map(|i| dist_to_set(x, i, members)).collect();
        let Some((img_sum, lip)) = spread(x, &f, p) else {
            return false;
        };
        let distortion = lip * (src_sum / img_sum).powf(1.0 / p);
        if best.as_ref().is_none_or(|(b, _, _)| distortion < *b) {
            *best = Some((distortion, f, members.len()));
        }
        true
    };

    if consider(&[center], &mut best) {
        candidates += 1;
    }
    for trial in 0..zero_set_trials {
        let mut rng = rng_for(seed, trial as u64);
        let sample = ckr_partition(x, scale, &mut rng)?;
        let zero = zero_set_from_partition(&sample, &mut rng);
        if consider(&zero.members, &mut best) {
            candidates += 1;
        }
    }
    // the singleton candidate is nonconstant whenever radius > 0, so a
    // winner always exists here
    let (_, f, winner_size) = best.expect("singleton zero set must be nonconstant");
    let images: Vec<Vec<f64>> = f.iter().map(|&v| vec![v]).collect();
    let witness = EmbeddingWitness::measured(x, images, p, "line_zero_set");
    Ok(LineEmbedding {
        witness,
        branch: LineBranch::ZeroSet {
            candidates,
            winner_size,
        },
        center,
        radius,
    })
}

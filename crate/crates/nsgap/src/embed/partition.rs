//! Padded random partitions by ball carving, and random zero sets built
//! from them. Every cluster of a sample at scale Δ has diameter at most Δ;
//! the padding and separation probabilities are measured, not assumed.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::numeric::rng_for;

/// One draw of a ball-carving partition. `assignment[i]` is the cluster
/// index of point i; `clusters` lists members in carving order.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionSample {
    pub scale: f64,
    pub radius: f64,
    pub assignment: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
}

/// A random zero set: a union of clusters selected by fair coins.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub scale: f64,
    pub members: Vec<usize>,
}

/// Samples a partition at the given scale: a radius drawn uniformly from
/// [scale/4, scale/2) and a uniformly random carving order. Each point
/// joins the first center within the radius, so clusters are balls minus
/// earlier balls and have diameter at most 2·radius ≤ scale.
pub fn ckr_partition(
    x: &FiniteMetric,
    scale: f64,
    rng: &mut impl Rng,
) -> Result<PartitionSample> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::BadParameter {
            name: "scale",
            value: scale,
            reason: "must be positive and finite",
        });
    }
    let n = x.size();
    let radius = scale / 4.0 + rng.gen::<f64>() * (scale / 4.0);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut assignment = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &center in &order {
        if assignment[center] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        let mut members = Vec::new();
        for i in 0..n {
            if assignment[i] == usize::MAX && x.dist(center, i) <= radius {
                assignment[i] = id;
                members.push(i);
            }
        }
        clusters.push(members);
    }
    Ok(PartitionSample {
        scale,
        radius,
        assignment,
        clusters,
    })
}

/// Keeps each cluster independently with probability 1/2. The resulting
/// set may be empty; callers that need a nonempty set must check.
pub fn zero_set_from_partition(sample: &PartitionSample, rng: &mut impl Rng) -> ZeroSet {
    let mut members = Vec::new();
    for cluster in &sample.clusters {
        if rng.gen::<bool>() {
            members.extend_from_slice(cluster);
        }
    }
    members.sort_unstable();
    ZeroSet {
        scale: sample.scale,
        members,
    }
}

/// Distance from a point to a set, +∞ for the empty set.
pub(crate) fn dist_to_set(x: &FiniteMetric, i: usize, set: &[usize]) -> f64 {
    set.iter()
        .map(|&j| x.dist(i, j))
        .fold(f64::INFINITY, f64::min)
}

/// Monte Carlo estimate, per point, of the probability that the ball of
/// radius `pad_radius` around the point lies entirely inside the point's
/// own cluster when partitioning at `scale`.
pub fn measure_padding(
    x: &FiniteMetric,
    scale: f64,
    pad_radius: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::BadParameter {
            name: "trials",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    if !(pad_radius >= 0.0) || !pad_radius.is_finite() {
        return Err(Error::BadParameter {
            name: "pad_radius",
            value: pad_radius,
            reason: "must be nonnegative and finite",
        });
    }
    let n = x.size();
    let mut counts = vec![0usize; n];
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial as u64);
        let sample = ckr_partition(x, scale, &mut rng)?;
        for i in 0..n {
            let padded = (0..n)
                .filter(|&j| x.dist(i, j) <= pad_radius)
                .all(|j| sample.assignment[j] == sample.assignment[i]);
            if padded {
                counts[i] += 1;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / trials as f64)
        .collect())
}

/// Monte Carlo estimate of the worst-case separation probability δ at
/// spreading factor ζ: over ordered pairs (i, j) with d(i, j) ≥ scale, the
/// minimum frequency of the event that j falls in the zero set while i
/// stays at distance at least scale/ζ from it. Errors with `Degenerate`
/// when no pair is that far apart, since the question is then vacuous.
pub fn measure_zero_set_separation(
    x: &FiniteMetric,
    scale: f64,
    zeta: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::BadParameter {
            name: "trials",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    if !(zeta >= 1.0) || !zeta.is_finite() {
        return Err(Error::BadParameter {
            name: "zeta",
            value: zeta,
            reason: "spreading factor must be finite and at least 1",
        });
    }
    let separation = scale / zeta;
    let n = x.size();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && x.dist(i, j) >= scale)
        .collect();
    if pairs.is_empty() {
        return Err(Error::Degenerate(format!(
            "no pair at distance >= scale {scale}"
        )));
    }
    let mut counts = vec![0usize; pairs.len()];
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial as u64);
        let sample = ckr_partition(x, scale, &mut rng)?;
        let zero = zero_set_from_partition(&sample, &mut rng);
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            if zero.members.binary_search(&j).is_ok()
                && dist_to_set(x, i, &zero.members) >= separation
            {
                counts[idx] += 1;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / trials as f64)
        .fold(f64::INFINITY, f64::min))
}

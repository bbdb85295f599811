//! Gaussian dimension reduction for Euclidean point clouds, plus the
//! best-single-coordinate extraction: the coordinate of a projection that
//! carries at least its fair 1/k share of the total pairwise spread.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{lp_metric, PExponent, PointCloud};
use crate::numeric::rng_for;

use super::bourgain::bi_lipschitz;
use super::EmbeddingWitness;

/// Projection quality plus the pigeonhole coordinate: summing
/// |f_s(x_i) − f_s(x_j)|² over pairs, the reported coordinate satisfies
/// best_coordinate_sum ≥ total_sum / targetDim.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JlReport {
    pub witness: EmbeddingWitness,
    pub expansion: f64,
    pub contraction: f64,
    pub distortion: f64,
    pub best_coordinate: usize,
    pub best_coordinate_sum: f64,
    pub total_sum: f64,
}

/// Standard normal draws via the Box-Muller transform, one spare cached.
struct Gaussian {
    spare: Option<f64>,
}

impl Gaussian {
    fn new() -> Self {
        Gaussian { spare: None }
    }

    fn next(&mut self, rng: &mut impl Rng) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u keeps the logarithm away from zero
        let u: f64 = 1.0 - rng.gen::<f64>();
        let v: f64 = rng.gen();
        let r = (-2.0 * u.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * v;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Projects a Euclidean cloud to `target_dim` dimensions with a random
/// Gaussian matrix scaled by 1/√target_dim, reporting measured expansion,
/// contraction, and the best single coordinate's share of the spread.
pub fn jl_reduce(cloud: &PointCloud, target_dim: usize, seed: u64) -> Result<JlReport> {
    match cloud.p() {
        PExponent::Finite(p) if p == 2.0 => {}
        PExponent::Finite(p) => {
            return Err(Error::BadExponent {
                p,
                reason: "Gaussian projection needs a Euclidean cloud (p = 2)",
            })
        }
        PExponent::Infinity => {
            return Err(Error::BadExponent {
                p: f64::INFINITY,
                reason: "Gaussian projection needs a Euclidean cloud (p = 2)",
            })
        }
    }
    if target_dim == 0 {
        return Err(Error::BadParameter {
            name: "target_dim",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let n = cloud.len();
    let dim = cloud.dim();
    let mut rng = rng_for(seed, 0);
    let mut gauss = Gaussian::new();
    let scale = 1.0 / (target_dim as f64).sqrt();
    let projection: Vec<Vec<f64>> = (0..target_dim)
        .map(|_| (0..dim).map(|_| scale * gauss.next(&mut rng)).collect())
        .collect();

    let images: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let x = cloud.point(i);
            projection
                .iter()
                .map(|row| row.iter().zip(x).map(|(r, c)| r * c).sum())
                .collect()
        })
        .collect();

    let mut coordinate_sums = vec![0.0f64; target_dim];
    for i in 0..n {
        for j in (i + 1)..n {
            for s in 0..target_dim {
                let diff = images[i][s] - images[j][s];
                coordinate_sums[s] += diff * diff;
            }
        }
    }
    let total_sum: f64 = coordinate_sums.iter().sum();
    let best_coordinate = coordinate_sums
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(s, _)| s)
        .unwrap();

    let source = lp_metric(cloud);
    let (expansion, contraction) = bi_lipschitz(&source, &images, 2.0);
    let witness = EmbeddingWitness::measured(&source, images, 2.0, "jl_gaussian");
    Ok(JlReport {
        witness,
        expansion,
        contraction,
        distortion: expansion * contraction,
        best_coordinate,
        best_coordinate_sum: coordinate_sums[best_coordinate],
        total_sum,
    })
}

//! Constructive embeddings: padded random partitions and zero sets, the
//! dichotomy-based line embedding, Bourgain-style coordinate embeddings,
//! Gaussian dimension reduction, the spread-constant SDP, and the LP
//! duality certificate machinery.

mod bourgain;
mod duality;
mod jl;
mod line;
mod partition;
mod sdp;
mod simplex;

pub use bourgain::{bourgain_matousek_embed, DistortionReport};
pub use duality::{
    duality_certificate, duality_certificate_with_eps, DualityCertificate, MixtureEmbedding,
    SeparatingCertificate, DEFAULT_DUALITY_EPS, DUALITY_ENUM_BUDGET,
};
pub use jl::{jl_reduce, JlReport};
pub use line::{line_embed, LineBranch, LineEmbedding};
pub use partition::{
    ckr_partition, measure_padding, measure_zero_set_separation, zero_set_from_partition,
    PartitionSample, ZeroSet,
};
pub use sdp::{spread_sdp, GramState, SpreadReport};

use serde::Serialize;

use crate::metric::FiniteMetric;

/// A concrete embedding with its measured constants. `lipschitz` is the
/// exact maximum of image distance over source distance; the average
/// distortion is the D this map demands at matched exponents:
/// D = ‖f‖_Lip · (mean source^p)^{1/p} / (mean image^p)^{1/p} ≥ 1.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbeddingWitness {
    pub images: Vec<Vec<f64>>,
    pub lipschitz: f64,
    pub average_distortion: f64,
    pub method: String,
}

/// v^p with fast paths for the common exponents.
pub(crate) fn powp(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v
    } else if p == 2.0 {
        v * v
    } else {
        v.powf(p)
    }
}

/// ℓ_p distance between image rows at finite p.
fn image_distance(a: &[f64], b: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    } else if p == 1.0 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
    } else {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

impl EmbeddingWitness {
    /// Builds the witness from images, recomputing the Lipschitz constant
    /// and average distortion exactly. Zero-distance source pairs must map
    /// to equal images (all constructions here are functions of distances).
    pub(crate) fn measured(
        source: &FiniteMetric,
        images: Vec<Vec<f64>>,
        p: f64,
        method: &str,
    ) -> EmbeddingWitness {
        let n = source.size();
        let mut lip = 0.0f64;
        let mut src_sum = 0.0;
        let mut img_sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let ds = source.dist(i, j);
                let di = image_distance(&images[i], &images[j], p);
                src_sum += ds.powf(p);
                img_sum += di.powf(p);
                if ds > 0.0 {
                    lip = lip.max(di / ds);
                }
            }
        }
        let average_distortion = if img_sum > 0.0 {
            lip * (src_sum / img_sum).powf(1.0 / p)
        } else {
            // constant map carries no distortion information; callers avoid
            // this, but a single-point source lands here legitimately
            1.0
        };
        EmbeddingWitness {
            images,
            lipschitz: lip,
            average_distortion,
            method: method.to_string(),
        }
    }
}

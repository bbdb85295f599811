//! Duality between embeddability and gap comparison. A finite source X
//! embeds into mixtures of target configurations with controlled constants
//! iff no symmetric stochastic matrix separates the two Poincaré constants.
//! Both directions are made constructive here: a feasible mixture is
//! rationalized into a literal block map into ℓ_p^m(Y), and an infeasible
//! LP hands back a Farkas dual that gets smoothed into an all-positive
//! symmetric stochastic matrix whose gap violation is then verified by
//! exact enumeration.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gamma::{gamma_exact, DEFAULT_BUDGET};
use crate::metric::FiniteMetric;
use crate::spectral::StochasticMatrix;
use crate::Value;

use super::powp;
use super::simplex::solve_feasibility;

/// Default gap for the mixture threshold K + 2ε.
pub const DEFAULT_DUALITY_EPS: f64 = 1e-3;

/// Largest |Y|^|X| the enumeration will attempt.
pub const DUALITY_ENUM_BUDGET: u64 = 100_000;

/// Largest denominator the rationalization accepts.
const DENOMINATOR_CAP: u64 = 1_000_000;

/// Largest materialized block-map width Σ q_k.
const WIDTH_CAP: u64 = 2_000_000;

/// A feasible mixture, rationalized into a concrete map. Point i of X maps
/// to the concatenation, over support configurations k, of q_k copies of
/// configs[k][i]; distances in the image are ℓ_p sums over the blocks.
#[derive(Clone, Debug)]
pub struct MixtureEmbedding {
    pub configs: Vec<Vec<usize>>,
    pub weights: Vec<f64>,
    pub numerators: Vec<u64>,
    pub denominator: u64,
    pub images: Vec<Vec<usize>>,
    pub lipschitz: f64,
    /// Σ_ij d(f_i, f_j)^p over ordered pairs
    pub spread_lhs: f64,
    /// (lipschitz^p / D)·Σ_ij d_X^p with D = (1+ε)(K+2ε)
    pub spread_rhs: f64,
    pub p: f64,
    pub k: f64,
    pub eps: f64,
}

/// An infeasibility witness: pair weights h and level λ separating the
/// target from every configuration column, plus the smoothed all-positive
/// symmetric stochastic matrix and its exactly enumerated gaps.
#[derive(Clone, Debug)]
pub struct SeparatingCertificate {
    pub h: Vec<Vec<f64>>,
    pub lambda: f64,
    pub delta: f64,
    pub matrix: StochasticMatrix,
    pub gamma_x: Value,
    pub gamma_y: Value,
    pub p: f64,
    pub k: f64,
    pub eps: f64,
}

#[derive(Clone, Debug)]
pub enum DualityCertificate {
    Feasible(Box<MixtureEmbedding>),
    Infeasible(Box<SeparatingCertificate>),
}

/// `duality_certificate` with the default ε.
pub fn duality_certificate(
    x: &FiniteMetric,
    y: &FiniteMetric,
    p: f64,
    k: f64,
) -> Result<DualityCertificate> {
    duality_certificate_with_eps(x, y, p, k, DEFAULT_DUALITY_EPS)
}

/// Decides whether (K+2ε)·d_X^p dominates a convex mixture of normalized
/// Y-configuration profiles, constructively in both directions. Feasible:
/// returns the mixture with rational weights q_k/Q and the induced block
/// map, which is (Q(K+2ε))^{1/p}-Lipschitz and spreads at least
/// ‖f‖^p_Lip/D of the source's pairwise mass, D = (1+ε)(K+2ε).
/// Infeasible: returns the separating dual and a positive symmetric
/// stochastic matrix A with γ(A, d_X^p) > K·γ(A, d_Y^p), both sides
/// recomputed by exact enumeration before returning.
pub fn duality_certificate_with_eps(
    x: &FiniteMetric,
    y: &FiniteMetric,
    p: f64,
    k: f64,
    eps: f64,
) -> Result<DualityCertificate> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent {
            p,
            reason: "mixture profiles need finite p >= 1",
        });
    }
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::BadParameter {
            name: "k",
            value: k,
            reason: "comparison threshold must be positive and finite",
        });
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::BadParameter {
            name: "eps",
            value: eps,
            reason: "must be positive and finite",
        });
    }
    let n = x.size();
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            what: "source space",
            got: n,
            min: 2,
            max: usize::MAX,
        });
    }
    let ny = y.size();
    if ny < 2 {
        return Err(Error::SizeOutOfRange {
            what: "target space",
            got: ny,
            min: 2,
            max: usize::MAX,
        });
    }

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let dx_p: Vec<f64> = pairs.iter().map(|&(i, j)| powp(x.dist(i, j), p)).collect();
    let sx: f64 = 2.0 * dx_p.iter().sum::<f64>();
    if sx == 0.0 {
        return Err(Error::Degenerate(
            "source space has no positive distances".into(),
        ));
    }
    if !(0..ny).any(|i| (0..ny).any(|j| y.dist(i, j) > 0.0)) {
        return Err(Error::Degenerate(
            "target space has no positive distances".into(),
        ));
    }
    let needed = (ny as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if needed > DUALITY_ENUM_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: DUALITY_ENUM_BUDGET,
        });
    }

    // enumerate nonconstant configuration profiles, deduplicated exactly
    let mut configs: Vec<Vec<usize>> = Vec::new();
    let mut config_sy: Vec<f64> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut digits = vec![0usize; n];
    loop {
        let sy: f64 = 2.0
            * pairs
                .iter()
                .map(|&(i, j)| powp(y.dist(digits[i], digits[j]), p))
                .sum::<f64>();
        if sy > 0.0 {
            let column: Vec<f64> = pairs
                .iter()
                .map(|&(i, j)| (sx / sy) * powp(y.dist(digits[i], digits[j]), p))
                .collect();
            let key: Vec<u64> = column.iter().map(|v| v.to_bits()).collect();
            if !seen.contains_key(&key) {
                seen.insert(key, columns.len());
                configs.push(digits.clone());
                config_sy.push(sy);
                columns.push(column);
            }
        }
        // advance the base-|Y| odometer
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < ny {
                break;
            }
            digits[pos] = 0;
        }
        if pos == 0 && digits[0] == 0 {
            break;
        }
    }

    let targets: Vec<f64> = dx_p.iter().map(|&v| (k + 2.0 * eps) * v).collect();
    let lp = solve_feasibility(&columns, &targets);

    if lp.feasible {
        feasible_certificate(
            x, y, p, k, eps, &pairs, &dx_p, sx, configs, config_sy, columns, lp.weights,
        )
    } else {
        infeasible_certificate(
            x,
            y,
            p,
            k,
            eps,
            &pairs,
            &dx_p,
            sx,
            &columns,
            &targets,
            &lp.dual_pairs,
            lp.dual_convexity,
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn feasible_certificate(
    x: &FiniteMetric,
    y: &FiniteMetric,
    p: f64,
    k: f64,
    eps: f64,
    pairs: &[(usize, usize)],
    dx_p: &[f64],
    sx: f64,
    configs: Vec<Vec<usize>>,
    config_sy: Vec<f64>,
    columns: Vec<Vec<f64>>,
    weights: Vec<f64>,
) -> Result<DualityCertificate> {
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-7 {
        return Err(Error::Degenerate(format!(
            "mixture weights sum to {total}, expected 1"
        )));
    }
    for (r, &(i, j)) in pairs.iter().enumerate() {
        let mixed: f64 = weights
            .iter()
            .zip(&columns)
            .map(|(&w, col)| w * col[r])
            .sum();
        let bound = (k + 2.0 * eps) * dx_p[r];
        if mixed > bound + 1e-7 * (1.0 + bound) {
            return Err(Error::Degenerate(format!(
                "mixture violates pair ({i},{j}): {mixed} > {bound}"
            )));
        }
    }

    let support: Vec<usize> = (0..weights.len())
        .filter(|&idx| weights[idx] > 1e-9)
        .collect();
    let w: Vec<f64> = support
        .iter()
        .map(|&idx| weights[idx] * sx / config_sy[idx])
        .collect();
    let q_real = w
        .iter()
        .map(|&wk| ((1.0 + eps) / (wk * eps)).ceil())
        .fold(0.0f64, f64::max);
    if !(q_real <= DENOMINATOR_CAP as f64) {
        return Err(Error::DenominatorCap {
            needed: q_real,
            cap: DENOMINATOR_CAP,
        });
    }
    let denominator = q_real as u64;
    let numerators: Vec<u64> = w
        .iter()
        .map(|&wk| (wk * denominator as f64).floor() as u64)
        .collect();
    debug_assert!(numerators.iter().all(|&q| q >= 1));
    let width: u64 = numerators.iter().sum();
    if width > WIDTH_CAP {
        return Err(Error::DenominatorCap {
            needed: width as f64,
            cap: WIDTH_CAP,
        });
    }

    let n = x.size();
    let images: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(width as usize);
            for (sk, &idx) in support.iter().enumerate() {
                for _ in 0..numerators[sk] {
                    row.push(configs[idx][i]);
                }
            }
            row
        })
        .collect();

    let mut lipschitz = 0.0f64;
    let mut spread_lhs = 0.0f64;
    for (r, &(i, j)) in pairs.iter().enumerate() {
        let block: f64 = support
            .iter()
            .enumerate()
            .map(|(sk, &idx)| {
                numerators[sk] as f64 * powp(y.dist(configs[idx][i], configs[idx][j]), p)
            })
            .sum();
        spread_lhs += 2.0 * block;
        if dx_p[r] > 0.0 {
            lipschitz = lipschitz.max((block / dx_p[r]).powf(1.0 / p));
        }
    }
    let d = (1.0 + eps) * (k + 2.0 * eps);
    let spread_rhs = powp(lipschitz, p) / d * sx;
    if spread_lhs + 1e-9 * (1.0 + spread_rhs) < spread_rhs {
        return Err(Error::Degenerate(format!(
            "rationalized map spreads {spread_lhs}, below the certified floor {spread_rhs}"
        )));
    }

    Ok(DualityCertificate::Feasible(Box::new(MixtureEmbedding {
        configs: support.iter().map(|&idx| configs[idx].clone()).collect(),
        weights: support.iter().map(|&idx| weights[idx]).collect(),
        numerators,
        denominator,
        images,
        lipschitz,
        spread_lhs,
        spread_rhs,
        p,
        k,
        eps,
    })))
}

#[allow(clippy::too_many_arguments)]
fn infeasible_certificate(
    x: &FiniteMetric,
    y: &FiniteMetric,
    p: f64,
    k: f64,
    eps: f64,
    pairs: &[(usize, usize)],
    dx_p: &[f64],
    sx: f64,
    columns: &[Vec<f64>],
    targets: &[f64],
    dual_pairs: &[f64],
    dual_convexity: f64,
) -> Result<DualityCertificate> {
    let mut h: Vec<f64> = dual_pairs.iter().map(|&v| (-v).max(0.0)).collect();
    let mut lambda = dual_convexity;
    let peak = h.iter().copied().fold(0.0f64, f64::max);
    if peak > 0.0 {
        for v in &mut h {
            *v /= peak;
        }
        lambda /= peak;
    }

    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(u, v)| u * v).sum() };
    for col in columns {
        if dot(&h, col) < lambda - 1e-7 * (1.0 + lambda.abs()) {
            return Err(Error::Degenerate(
                "separating dual fails a column margin".into(),
            ));
        }
    }
    if dot(&h, targets) >= lambda {
        return Err(Error::Degenerate(
            "separating dual does not clear the target".into(),
        ));
    }

    let n = x.size();
    let hd: f64 = 2.0 * pairs.iter().enumerate().map(|(r, _)| h[r] * dx_p[r]).sum::<f64>();
    let excess = (k + eps - 1.0).max(0.0);
    let mut delta = if excess > 0.0 && hd > 0.0 {
        (0.9 * eps * hd / (excess * sx)).min(0.5)
    } else {
        0.5
    };

    for _ in 0..60 {
        let mut rows = vec![vec![0.0f64; n]; n];
        for (r, &(i, j)) in pairs.iter().enumerate() {
            rows[i][j] = h[r] + delta;
            rows[j][i] = h[r] + delta;
        }
        let sigma = (0..n)
            .map(|i| rows[i].iter().sum::<f64>())
            .fold(0.0f64, f64::max);
        for i in 0..n {
            let off: f64 = rows[i].iter().sum::<f64>() / (2.0 * sigma);
            for entry in rows[i].iter_mut() {
                *entry /= 2.0 * sigma;
            }
            rows[i][i] = 1.0 - off;
        }
        let matrix = StochasticMatrix::new(&rows)?;
        let gamma_x = gamma_exact(&matrix, x, p, DEFAULT_BUDGET)?.value;
        let gamma_y = gamma_exact(&matrix, y, p, DEFAULT_BUDGET)?.value;
        if gamma_x.gt(gamma_y.scale(k)) {
            let mut h_matrix = vec![vec![0.0; n]; n];
            for (r, &(i, j)) in pairs.iter().enumerate() {
                h_matrix[i][j] = h[r];
                h_matrix[j][i] = h[r];
            }
            return Ok(DualityCertificate::Infeasible(Box::new(
                SeparatingCertificate {
                    h: h_matrix,
                    lambda,
                    delta,
                    matrix,
                    gamma_x,
                    gamma_y,
                    p,
                    k,
                    eps,
                },
            )));
        }
        delta /= 2.0;
    }
    Err(Error::Degenerate(
        "separating matrix failed gap verification at every smoothing level".into(),
    ))
}

//! The spread constant of a finite metric as a semidefinite program:
//! maximize Σᵢⱼ (G_ii + G_jj − 2G_ij) over PSD Gram matrices whose induced
//! squared distances stay below d². Solved first-order: gradient ascent on
//! the linear objective, halfspace clipping per violated pair constraint,
//! PSD projection by eigenvalue clipping, best-feasible tracking.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::spectral::symmetric_eigen;
use crate::TOL;

use super::EmbeddingWitness;

/// A Gram iterate and its certificates. Feasible states have
/// max_violation ≤ 1e−7 and min_eigenvalue ≥ −1e−7.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GramState {
    pub matrix: Vec<Vec<f64>>,
    pub objective: f64,
    pub max_violation: f64,
    pub min_eigenvalue: f64,
}

/// Solver output: the best feasible Gram state, the spread-based estimate
/// of the Euclidean average distortion √(Σd²/objective), and a point
/// realization of the Gram matrix.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpreadReport {
    pub gram: GramState,
    pub av_estimate: f64,
    pub witness: EmbeddingWitness,
    pub converged: bool,
    pub iterations_used: usize,
}

#[inline]
fn value(g: &[f64], n: usize, i: usize, j: usize) -> f64 {
    g[i * n + i] + g[j * n + j] - 2.0 * g[i * n + j]
}

fn objective(g: &[f64], n: usize) -> f64 {
    let trace: f64 = (0..n).map(|i| g[i * n + i]).sum();
    let total: f64 = g.iter().sum();
    2.0 * (n as f64) * trace - 2.0 * total
}

fn max_violation(g: &[f64], n: usize, d2: &[f64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max(value(g, n, i, j) - d2[i * n + j]);
        }
    }
    worst
}

/// Projects onto the PSD cone by clipping negative eigenvalues; returns the
/// smallest eigenvalue seen before clipping.
fn psd_clip(g: &mut Vec<f64>, n: usize) -> f64 {
    let (values, vecs) = symmetric_eigen(n, g);
    let min_eig = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig >= 0.0 {
        return min_eig;
    }
    let mut out = vec![0.0; n * n];
    for (k, &lambda) in values.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let v = &vecs[k * n..(k + 1) * n];
        for i in 0..n {
            let li = lambda * v[i];
            for j in 0..n {
                out[i * n + j] += li * v[j];
            }
        }
    }
    // exact symmetry keeps later eigendecompositions honest
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (out[i * n + j] + out[j * n + i]);
            out[i * n + j] = m;
            out[j * n + i] = m;
        }
    }
    *g = out;
    min_eig
}

/// One pass of halfspace projections over the violated pair constraints.
/// ⟨D_ij, G⟩ = value(i,j) with ‖D_ij‖² = 4, so the step is violation/4.
fn clip_pairs(g: &mut [f64], n: usize, d2: &[f64]) {
    for i in 0..n {
        for j in (i + 1)..n {
            let v = value(g, n, i, j) - d2[i * n + j];
            if v > 0.0 {
                let step = v / 4.0;
                g[i * n + i] -= step;
                g[j * n + j] -= step;
                g[i * n + j] += step;
                g[j * n + i] += step;
            }
        }
    }
}

/// Repeated pair sweeps and PSD projections until both residuals settle.
fn restore_feasibility(g: &mut Vec<f64>, n: usize, d2: &[f64]) -> f64 {
    let mut min_eig = 0.0;
    for _ in 0..4 {
        for _ in 0..12 {
            if max_violation(g, n, d2) <= TOL.sdp_constraint / 2.0 {
                break;
            }
            clip_pairs(g, n, d2);
        }
        min_eig = psd_clip(g, n);
        if max_violation(g, n, d2) <= TOL.sdp_constraint && min_eig >= -TOL.psd_floor {
            break;
        }
    }
    min_eig
}

fn gram_rows(g: &[f64], n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| g[i * n..(i + 1) * n].to_vec()).collect()
}

/// Point realization of a PSD matrix: rows of V·√Λ over the positive part
/// of the spectrum.
fn factorize(g: &[f64], n: usize) -> Vec<Vec<f64>> {
    let (values, vecs) = symmetric_eigen(n, g);
    let lead = values.iter().copied().fold(0.0f64, f64::max);
    let kept: Vec<usize> = (0..n)
        .filter(|&k| values[k] > lead * 1e-12 && values[k] > 0.0)
        .collect();
    (0..n)
        .map(|i| {
            kept.iter()
                .map(|&k| values[k].sqrt() * vecs[k * n + i])
                .collect()
        })
        .collect()
}

/// Maximizes the spread Σᵢⱼ(G_ii + G_jj − 2G_ij) subject to the pair
/// constraints and G ⪰ 0, warm-started from the classically scaled
/// double-centering Gram matrix. Returns the best feasible iterate; if the
/// objective still improved near the iteration cap the report is flagged
/// as unconverged.
pub fn spread_sdp(x: &FiniteMetric, iterations: usize, tolerance: f64) -> Result<SpreadReport> {
    let n = x.size();
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            what: "spread program input",
            got: n,
            min: 2,
            max: usize::MAX,
        });
    }
    if iterations == 0 {
        return Err(Error::BadParameter {
            name: "iterations",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::BadParameter {
            name: "tolerance",
            value: tolerance,
            reason: "must be positive and finite",
        });
    }

    let mut d2 = vec![0.0; n * n];
    let mut src2_sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = x.dist(i, j);
            d2[i * n + j] = v * v;
            src2_sum += v * v;
        }
    }
    if src2_sum == 0.0 {
        return Err(Error::Degenerate(
            "all points coincide; the spread program is identically zero".into(),
        ));
    }

    // warm start: double centering realizes Euclidean metrics exactly, and
    // clip + rescale makes any start feasible
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| d2[i * n + j]).sum::<f64>() / nf)
        .collect();
    let total_mean = row_means.iter().sum::<f64>() / nf;
    let mut g: Vec<f64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            -0.5 * (d2[idx] - row_means[i] - row_means[j] + total_mean)
        })
        .collect();
    psd_clip(&mut g, n);
    let mut rho = 1.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            if d2[i * n + j] > 0.0 {
                rho = rho.max(value(&g, n, i, j) / d2[i * n + j]);
            }
        }
    }
    if rho > 1.0 {
        for entry in &mut g {
            *entry /= rho;
        }
    }
    let mut min_eig = restore_feasibility(&mut g, n, &d2);

    let mut best_g = g.clone();
    let mut best_obj = objective(&g, n);
    let mut best_violation = max_violation(&g, n, &d2);
    let mut best_min_eig = min_eig;

    let mean_d2 = src2_sum / (nf * nf);
    let eta0 = 0.1 * mean_d2.max(f64::MIN_POSITIVE) / (4.0 * nf);
    let mut stall = 0usize;
    let mut converged = false;
    let mut iterations_used = 0usize;

    for t in 0..iterations {
        iterations_used = t + 1;
        let eta = eta0 / (1.0 + t as f64);
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] += if i == j {
                    eta * (2.0 * nf - 2.0)
                } else {
                    -2.0 * eta
                };
            }
        }
        min_eig = restore_feasibility(&mut g, n, &d2);
        let violation = max_violation(&g, n, &d2);
        let obj = objective(&g, n);
        let feasible = violation <= TOL.sdp_constraint && min_eig >= -TOL.psd_floor;
        if feasible && obj > best_obj + tolerance * best_obj.abs().max(1.0) {
            best_obj = obj;
            best_g.copy_from_slice(&g);
            best_violation = violation;
            best_min_eig = min_eig;
            stall = 0;
        } else {
            stall += 1;
        }
        if stall >= 100 {
            converged = true;
            break;
        }
    }

    let images = factorize(&best_g, n);
    let witness = EmbeddingWitness::measured(x, images, 2.0, "spread_sdp");
    Ok(SpreadReport {
        av_estimate: (src2_sum / best_obj).sqrt(),
        gram: GramState {
            matrix: gram_rows(&best_g, n),
            objective: best_obj,
            max_violation: best_violation,
            min_eigenvalue: best_min_eig,
        },
        witness,
        converged,
        iterations_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{graph_metric, lp_metric, PExponent, PointCloud};
    use crate::numeric::rng_for;
    use rand::Rng;

    #[test]
    fn collinear_points_realize_their_own_spread() {
        let x = lp_metric(
            &PointCloud::new(
                vec![vec![0.0], vec![1.0], vec![2.0]],
                PExponent::Finite(2.0),
            )
            .unwrap(),
        );
        let r = spread_sdp(&x, 1000, 1e-6).unwrap();
        assert!((r.gram.objective - 12.0).abs() < 1e-6, "obj {}", r.gram.objective);
        assert!((r.av_estimate - 1.0).abs() < 1e-6, "av {}", r.av_estimate);
        assert!(r.converged);
    }

    #[test]
    fn four_cycle_spread_is_the_unit_square() {
        let x = graph_metric(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = spread_sdp(&x, 2000, 1e-6).unwrap();
        assert!((r.gram.objective - 16.0).abs() < 1e-4, "obj {}", r.gram.objective);
        assert!(
            (r.av_estimate - 1.5f64.sqrt()).abs() < 1e-3,
            "av {}",
            r.av_estimate
        );
        assert!(r.gram.max_violation <= TOL.sdp_constraint);
        assert!(r.gram.min_eigenvalue >= -TOL.psd_floor);
    }

    #[test]
    fn two_points_are_exactly_realizable() {
        let x = FiniteMetric::new(&[vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap();
        let r = spread_sdp(&x, 500, 1e-6).unwrap();
        assert!((r.gram.objective - 18.0).abs() < 1e-6);
        assert!((r.av_estimate - 1.0).abs() < 1e-6);
        assert!((r.witness.average_distortion - 1.0).abs() < 1e-3);
    }

    #[test]
    fn objective_never_beats_the_constraint_sum() {
        for seed in 0..5u64 {
            let mut rng = rng_for(50, seed);
            let points: Vec<Vec<f64>> = (0..7)
                .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let x = lp_metric(&PointCloud::new(points, PExponent::Finite(2.0)).unwrap());
            let r = spread_sdp(&x, 400, 1e-6).unwrap();
            let src2: f64 = (0..7)
                .flat_map(|i| (0..7).map(move |j| (i, j)))
                .map(|(i, j)| x.dist(i, j) * x.dist(i, j))
                .sum();
            assert!(r.gram.objective <= src2 + 49.0 * TOL.sdp_constraint);
            assert!(r.av_estimate >= 1.0 - 1e-6);
            assert!((r.av_estimate - 1.0).abs() < 1e-3, "cloud metrics are realizable");
        }
    }

    #[test]
    fn degenerate_and_bad_parameters_are_rejected() {
        let zero = FiniteMetric::new(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            spread_sdp(&zero, 10, 1e-6),
            Err(Error::Degenerate(_))
        ));
        let x = FiniteMetric::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            spread_sdp(&x, 0, 1e-6),
            Err(Error::BadParameter { .. })
        ));
        assert!(matches!(
            spread_sdp(&x, 10, 0.0),
            Err(Error::BadParameter { .. })
        ));
        let single = FiniteMetric::new(&[vec![0.0]]).unwrap();
        assert!(matches!(
            spread_sdp(&single, 10, 1e-6),
            Err(Error::SizeOutOfRange { .. })
        ));
    }

    #[test]
    fn witness_squared_distances_match_the_gram_matrix() {
        let x = graph_metric(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let r = spread_sdp(&x, 800, 1e-6).unwrap();
        let n = 5;
        for i in 0..n {
            for j in 0..n {
                let img: f64 = r.witness.images[i]
                    .iter()
                    .zip(&r.witness.images[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                let gram = r.gram.matrix[i][i] + r.gram.matrix[j][j] - 2.0 * r.gram.matrix[i][j];
                assert!((img - gram).abs() < 1e-8, "pair ({i},{j}): {img} vs {gram}");
            }
        }
    }
}

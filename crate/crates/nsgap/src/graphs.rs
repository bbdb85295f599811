//! Regular-graph generators and the spectral lower bound on embedding
//! distortion. Offers the pairing-model sampler for random d-regular
//! graphs, random circulant (cyclic Cayley) graphs with exact cosine
//! spectra, and the bound √(1−λ^{2/p})/√p · rms together with the derived
//! p-index proxy obtained by bisecting it against a threshold.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{graph_metric, FiniteMetric};
use crate::numeric::rng_for;
use crate::spectral::symmetric_eigen;
use rand::Rng;

/// Pairing-model attempts before giving up.
pub const RETRY_CAP: usize = 10_000;

/// Largest vertex count solved by the dense eigensolver; above this the
/// spectrum comes from deflated power iteration.
pub const DENSE_SPECTRUM_LIMIT: usize = 384;

/// A simple d-regular graph. `connected` is a recorded fact, not a
/// promise; `validate` recomputes it along with degrees and simplicity.
#[derive(Clone, Debug, Serialize)]
pub struct RegularGraph {
    pub n: usize,
    pub d: usize,
    /// canonical edge list: u < v, sorted, duplicate-free
    pub edges: Vec<(usize, usize)>,
    pub provenance: String,
    pub connected: bool,
}

impl RegularGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::with_capacity(self.d); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Shortest-path metric. Fails on disconnected graphs.
    pub fn metric(&self) -> Result<FiniteMetric> {
        graph_metric(self.n, &self.edges)
    }

    /// Recheck every recorded invariant: vertex indices in range, edges
    /// canonical and duplicate-free, no loops, every degree exactly d,
    /// and the connectivity flag truthful.
    pub fn validate(&self) -> Result<()> {
        let mut degree = vec![0usize; self.n];
        let mut prev: Option<(usize, usize)> = None;
        for &(u, v) in &self.edges {
            if u >= self.n || v >= self.n {
                return Err(Error::Degenerate(format!(
                    "edge ({u},{v}) outside 0..{}",
                    self.n
                )));
            }
            if u == v {
                return Err(Error::Degenerate(format!("edge ({u},{v}) is a loop")));
            }
            if u > v {
                return Err(Error::Degenerate(format!(
                    "edge ({u},{v}) is not in canonical u < v order"
                )));
            }
            if prev == Some((u, v)) {
                return Err(Error::Degenerate(format!("duplicate edge ({u},{v})")));
            }
            if let Some(p) = prev {
                if p > (u, v) {
                    return Err(Error::Degenerate(format!(
                        "edge list not sorted at ({u},{v})"
                    )));
                }
            }
            prev = Some((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }
        for (v, &deg) in degree.iter().enumerate() {
            if deg != self.d {
                return Err(Error::Degenerate(format!(
                    "vertex {v} has degree {deg}, expected {}",
                    self.d
                )));
            }
        }
        let actual = connected_edges(self.n, &self.edges);
        if actual != self.connected {
            return Err(Error::Degenerate(format!(
                "connectivity flag says {} but traversal finds {}",
                self.connected, actual
            )));
        }
        Ok(())
    }
}

fn connected_edges(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}

/// Samples a connected simple d-regular graph by the pairing model:
/// shuffle n·d half-edges, pair them consecutively, reject outcomes with
/// loops, repeated edges, or more than one component. Approximates the
/// uniform distribution over connected simple d-regular graphs; rejection
/// skews it slightly, which is acceptable for trend measurements.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<RegularGraph> {
    if n == 0 {
        return Err(Error::SizeOutOfRange {
            what: "graph",
            got: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    if d >= n {
        return Err(Error::BadParameter {
            name: "d",
            value: d as f64,
            reason: "degree must be below the vertex count",
        });
    }
    if (n * d) % 2 != 0 {
        return Err(Error::BadParameter {
            name: "n*d",
            value: (n * d) as f64,
            reason: "the half-edge count must be even",
        });
    }
    let mut rng = rng_for(seed, 0);
    let mut points: Vec<usize> = (0..n * d).collect();
    for _ in 0..RETRY_CAP {
        for i in (1..points.len()).rev() {
            let j = rng.gen_range(0..=i);
            points.swap(i, j);
        }
        let mut seen = HashSet::with_capacity(n * d / 2);
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut simple = true;
        for pair in points.chunks_exact(2) {
            let u = pair[0] / d.max(1);
            let v = pair[1] / d.max(1);
            if u == v {
                simple = false;
                break;
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                simple = false;
                break;
            }
            edges.push(e);
        }
        if !simple || !connected_edges(n, &edges) {
            continue;
        }
        edges.sort_unstable();
        return Ok(RegularGraph {
            n,
            d,
            edges,
            provenance: format!("pairing(n={n}, d={d}, seed={seed})"),
            connected: true,
        });
    }
    Err(Error::GenerationFailed {
        attempts: RETRY_CAP,
        reason: format!(
            "pairing model produced no connected simple {d}-regular graph on {n} vertices"
        ),
    })
}

/// A random circulant together with its exact spectrum. The transition
/// matrix of a cyclic Cayley graph with symmetric offset set S has
/// eigenvalues λ_j = (1/|S|)·Σ_{s∈S} cos(2πjs/n), computed here in closed
/// form rather than by an eigensolver.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CayleyReport {
    pub graph: RegularGraph,
    /// the drawn generator multiset, repeats preserved
    pub generators: Vec<usize>,
    /// collapsed symmetric offset set {g, n−g}, sorted
    pub offsets: Vec<usize>,
    /// λ_j for j = 0..n; λ_0 = 1
    pub spectrum: Vec<f64>,
    /// max_{j≥1} |λ_j|
    pub lambda: f64,
    pub epsilon: f64,
    pub meets_epsilon: bool,
    pub requested_generators: usize,
}

/// Draws k = ⌈(3/ε²)·ln n⌉ generators uniformly from ℤ_n \ {0} with
/// repeats, closes them under negation, and builds the circulant on the
/// collapsed offset set. Degree is the realized |S|, not 2k. Disconnected
/// outcomes (all offsets sharing a divisor with n) are flagged, not
/// rejected.
pub fn abelian_cayley(n: usize, epsilon: f64, seed: u64) -> Result<CayleyReport> {
    if n < 3 {
        return Err(Error::SizeOutOfRange {
            what: "cyclic group",
            got: n,
            min: 3,
            max: usize::MAX,
        });
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::BadParameter {
            name: "epsilon",
            value: epsilon,
            reason: "spectral target must be positive and finite",
        });
    }
    let k = ((3.0 / (epsilon * epsilon)) * (n as f64).ln()).ceil().max(1.0) as usize;
    let mut rng = rng_for(seed, 1);
    let generators: Vec<usize> = (0..k).map(|_| rng.gen_range(1..n)).collect();
    let mut offsets: Vec<usize> = generators.iter().flat_map(|&g| [g, n - g]).collect();
    offsets.sort_unstable();
    offsets.dedup();
    let r = offsets.len();

    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * r / 2 + n);
    for &s in &offsets {
        if 2 * s > n {
            continue;
        }
        for v in 0..n {
            let w = (v + s) % n;
            edges.push((v.min(w), v.max(w)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let connected = connected_edges(n, &edges);

    let spectrum: Vec<f64> = (0..n)
        .map(|j| {
            offsets
                .iter()
                .map(|&s| (std::f64::consts::TAU * ((j * s) % n) as f64 / n as f64).cos())
                .sum::<f64>()
                / r as f64
        })
        .collect();
    let lambda = spectrum
        .iter()
        .skip(1)
        .fold(0.0f64, |m, &v| m.max(v.abs()));

    Ok(CayleyReport {
        graph: RegularGraph {
            n,
            d: r,
            edges,
            provenance: format!("cayley(n={n}, eps={epsilon}, seed={seed})"),
            connected,
        },
        generators,
        offsets,
        spectrum,
        lambda,
        epsilon,
        meets_epsilon: lambda <= epsilon,
        requested_generators: k,
    })
}

/// Everything the distortion bound needs, computed once per graph:
/// the signed second eigenvalue and the largest nontrivial absolute
/// eigenvalue of the 1/d transition matrix, plus the root-mean-square
/// and maximum of the shortest-path metric.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LowerBoundContext {
    pub n: usize,
    pub d: usize,
    pub lambda2: f64,
    pub lambda_abs: f64,
    pub rms: f64,
    pub diameter: f64,
    /// true when the spectrum came from the dense eigensolver rather
    /// than power iteration
    pub exact_spectrum: bool,
}

/// The p-index proxy: where the lower bound crosses the threshold.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PIndexEstimate {
    pub proxy: f64,
    /// the bound was already at or below the threshold at p = 2
    pub at_floor: bool,
    pub threshold: f64,
}

pub fn lower_bound_context(g: &RegularGraph) -> Result<LowerBoundContext> {
    if g.n < 2 {
        return Err(Error::SizeOutOfRange {
            what: "graph for distortion bounds",
            got: g.n,
            min: 2,
            max: usize::MAX,
        });
    }
    if g.d == 0 {
        return Err(Error::BadParameter {
            name: "d",
            value: 0.0,
            reason: "transition matrix needs positive degree",
        });
    }
    let metric = g.metric()?;
    let n = g.n;
    let mut sq = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let d = metric.dist(i, j);
            sq += d * d;
        }
    }
    let rms = (sq / (n * n) as f64).sqrt();
    let adj = g.adjacency();
    let (lambda2, lambda_abs) = if n <= DENSE_SPECTRUM_LIMIT {
        spectrum_dense(n, &adj, g.d)
    } else {
        spectrum_power(n, &adj, g.d)
    };
    Ok(LowerBoundContext {
        n,
        d: g.d,
        lambda2: lambda2.clamp(-1.0, 1.0),
        lambda_abs: lambda_abs.clamp(0.0, 1.0),
        rms,
        diameter: metric.diameter(),
        exact_spectrum: n <= DENSE_SPECTRUM_LIMIT,
    })
}

impl LowerBoundContext {
    /// √(1−λ^{2/p})/√p · rms. Defined for p ∈ [2, ∞]; at p = ∞ (and at
    /// λ = 1) the value is 0. The universal constant in front is omitted,
    /// so this is a shape, exact only up to that constant.
    pub fn bound(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 2.0 {
            return Err(Error::BadExponent {
                p,
                reason: "distortion lower bound needs p in [2, inf]",
            });
        }
        if p.is_infinite() {
            return Ok(0.0);
        }
        let shrink = (1.0 - self.lambda_abs.powf(2.0 / p)).max(0.0);
        Ok(shrink.sqrt() / p.sqrt() * self.rms)
    }

    /// Bisection of `bound` against the threshold. The bound strictly
    /// decreases in p and vanishes in the limit, so the crossing is
    /// unique whenever the value at p = 2 exceeds the threshold; below
    /// it there is nothing to cross and the floor p = 2 is returned
    /// flagged. A lower-bound proxy for the index inf{p : c_p below
    /// threshold}; the true index would need matching upper bounds.
    pub fn p_index(&self, threshold: f64) -> Result<PIndexEstimate> {
        if !threshold.is_finite() || threshold <= 0.0 {
            return Err(Error::BadParameter {
                name: "threshold",
                value: threshold,
                reason: "must be positive and finite",
            });
        }
        if self.bound(2.0)? <= threshold {
            return Ok(PIndexEstimate {
                proxy: 2.0,
                at_floor: true,
                threshold,
            });
        }
        let mut lo = 2.0f64;
        let mut hi = 4.0f64;
        while self.bound(hi)? > threshold {
            lo = hi;
            hi *= 2.0;
            if hi > 1e60 {
                return Err(Error::Degenerate(format!(
                    "lower bound never crossed threshold {threshold}"
                )));
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.bound(mid)? > threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(PIndexEstimate {
            proxy: 0.5 * (lo + hi),
            at_floor: false,
            threshold,
        })
    }
}

/// One-shot form of `LowerBoundContext::bound`.
pub fn distortion_lower_bound(g: &RegularGraph, p: f64) -> Result<f64> {
    lower_bound_context(g)?.bound(p)
}

/// One-shot form of `LowerBoundContext::p_index`.
pub fn p_index_estimate(g: &RegularGraph, threshold: f64) -> Result<PIndexEstimate> {
    lower_bound_context(g)?.p_index(threshold)
}

fn spectrum_dense(n: usize, adj: &[Vec<usize>], d: usize) -> (f64, f64) {
    let inv = 1.0 / d as f64;
    let mut flat = vec![0.0f64; n * n];
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            flat[u * n + v] = inv;
        }
    }
    let (mut values, _) = symmetric_eigen(n, &flat);
    values.sort_by(|a, b| b.total_cmp(a));
    let lambda2 = values[1];
    let lambda_abs = lambda2.abs().max(values[n - 1].abs());
    (lambda2, lambda_abs)
}

fn spectrum_power(n: usize, adj: &[Vec<usize>], d: usize) -> (f64, f64) {
    let inv = 1.0 / d as f64;
    let tv = |v: &[f64], out: &mut [f64]| {
        for (i, nbrs) in adj.iter().enumerate() {
            out[i] = nbrs.iter().map(|&j| v[j]).sum::<f64>() * inv;
        }
    };
    let mut rng = rng_for(7, n as u64);
    let start: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();

    // lazy walk (T+I)/2 has nontrivial spectrum in [0,1] topped by
    // (λ₂+1)/2, so its Rayleigh limit recovers the signed λ₂
    let mut tmp = vec![0.0f64; n];
    let rho_lazy = power_rayleigh(n, start.clone(), |v, out| {
        tv(v, out);
        for (o, &vi) in out.iter_mut().zip(v) {
            *o = 0.5 * (*o + vi);
        }
    });
    let lambda2 = 2.0 * rho_lazy - 1.0;

    // T² tops out at λ_abs² on the complement of the constants
    let rho_sq = power_rayleigh(n, start, |v, out| {
        tv(v, &mut tmp);
        deflate(&mut tmp);
        tv(&tmp, out);
    });
    let lambda_abs = rho_sq.max(0.0).sqrt();
    (lambda2, lambda_abs)
}

fn deflate(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

fn power_rayleigh<F: FnMut(&[f64], &mut [f64])>(n: usize, start: Vec<f64>, mut apply: F) -> f64 {
    let mut v = start;
    deflate(&mut v);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    let mut w = vec![0.0f64; n];
    let mut prev = f64::NAN;
    let mut streak = 0;
    for _ in 0..60_000 {
        apply(&v, &mut w);
        deflate(&mut w);
        let rho: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return rho;
        }
        for (vi, &wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
        if (rho - prev).abs() <= 1e-14 * (1.0 + rho.abs()) {
            streak += 1;
            if streak >= 4 {
                return rho;
            }
        } else {
            streak = 0;
        }
        prev = rho;
    }
    prev
}

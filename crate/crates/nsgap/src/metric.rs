//! Finite metric spaces: validated distance matrices, graph shortest-path
//! metrics, ℓ_p point clouds, Hamming cubes, and p-power kernels.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::TOL;

/// Largest supported cube dimension; 2¹⁴ × 2¹⁴ dense matrices are the ceiling
/// for sub-minute cube experiments.
pub const MAX_CUBE_DIM: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    d: Vec<f64>,
}

/// The exponent of an ℓ_p space. Infinity is representable for point clouds
/// but kernels reject it. Serializes as a bare number, or the string "inf".
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl serde::Serialize for PExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PExponent::Finite(v) => s.serialize_f64(*v),
            PExponent::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub p: PExponent,
}

/// Table of d(i,j)^p values, the object Poincaré ratios are evaluated on.
#[derive(Clone, Debug)]
pub struct Kernel {
    n: usize,
    values: Vec<f64>,
    pub p: f64,
}

impl FiniteMetric {
    /// Full validation: symmetry, zero diagonal, nonnegativity, and the
    /// triangle inequality over all triples (O(n³)). Errors name the first
    /// offending pair or triple.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if n == 0 || row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    bad_row: i,
                    bad_len: row.len(),
                });
            }
        }
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j, value: v });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { i, j, value: v });
                }
                d[i * n + j] = v;
            }
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    i,
                    value: d[i * n + i],
                });
            }
            for j in (i + 1)..n {
                let delta = (d[i * n + j] - d[j * n + i]).abs();
                if delta > TOL.asymmetry {
                    return Err(Error::Asymmetric { i, j, delta });
                }
                let m = 0.5 * (d[i * n + j] + d[j * n + i]);
                d[i * n + j] = m;
                d[j * n + i] = m;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let via = d[i * n + k] + d[k * n + j];
                    if d[i * n + j] > via + TOL.triangle {
                        return Err(Error::TriangleViolation {
                            i,
                            j,
                            k,
                            dij: d[i * n + j],
                            via,
                        });
                    }
                }
            }
        }
        Ok(FiniteMetric { n, d })
    }

    /// For internally constructed matrices that are metrics by construction
    /// (BFS distances, ℓ_p norms). Skips the O(n³) triangle scan; debug
    /// builds still verify small instances.
    pub(crate) fn trusted(n: usize, d: Vec<f64>) -> Self {
        debug_assert_eq!(d.len(), n * n);
        #[cfg(debug_assertions)]
        if n <= 64 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        debug_assert!(
                            d[i * n + j] <= d[i * n + k] + d[k * n + j] + TOL.triangle
                        );
                    }
                }
            }
        }
        FiniteMetric { n, d }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.d[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// max over pairs.
    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}

/// Shortest-path metric of an undirected unit-weight graph. `edges` hold
/// 0-based endpoints; `n` is the vertex count. Disconnected input errors
/// with a witness pair.
pub fn graph_metric(n: usize, edges: &[(usize, usize)]) -> Result<FiniteMetric> {
    if n == 0 {
        return Err(Error::SizeOutOfRange {
            what: "graph",
            got: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::Parse(format!(
                "edge ({u},{v}) references a vertex outside 0..{n}"
            )));
        }
        if u == v {
            continue;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let rows: Vec<Vec<i64>> = (0..n).into_par_iter().map(|s| bfs(&adj, s)).collect();
    for (s, row) in rows.iter().enumerate() {
        if let Some(t) = row.iter().position(|&d| d < 0) {
            return Err(Error::Disconnected { u: s, v: t });
        }
    }
    let mut d = vec![0.0; n * n];
    for (s, row) in rows.iter().enumerate() {
        for (t, &h) in row.iter().enumerate() {
            d[s * n + t] = h as f64;
        }
    }
    Ok(FiniteMetric::trusted(n, d))
}

fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<i64> {
    let mut dist = vec![-1i64; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] < 0 {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>, p: PExponent) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::SizeOutOfRange {
                what: "point cloud",
                got: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        if let PExponent::Finite(p) = p {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(Error::BadExponent {
                    p,
                    reason: "point clouds need p >= 1",
                });
            }
        }
        let dim = points[0].len();
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != dim {
                return Err(Error::RaggedPoints {
                    i,
                    got: pt.len(),
                    expected: dim,
                });
            }
            for (j, &c) in pt.iter().enumerate() {
                if !c.is_finite() {
                    return Err(Error::NonFinite { i, j, value: c });
                }
            }
        }
        Ok(PointCloud { points, p })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        lp_distance(&self.points[i], &self.points[j], self.p)
    }
}

pub fn lp_distance(x: &[f64], y: &[f64], p: PExponent) -> f64 {
    match p {
        PExponent::Infinity => x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
        PExponent::Finite(p) => {
            if p == 1.0 {
                x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
            } else if p == 2.0 {
                x.iter()
                    .zip(y)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            } else {
                x.iter()
                    .zip(y)
                    .map(|(a, b)| (a - b).abs().powf(p))
                    .sum::<f64>()
                    .powf(1.0 / p)
            }
        }
    }
}

/// Pairwise distance matrix of a cloud.
pub fn lp_metric(cloud: &PointCloud) -> FiniteMetric {
    let n = cloud.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = cloud.distance(i, j);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    FiniteMetric::trusted(n, d)
}

/// The discrete cube {0,1}ⁿ: its points, its ℓ₁ (= shortest path) metric,
/// and the normalized adjacency matrix H_n with entries 1/n between
/// neighbors. λ₂(H_n) = 1 − 2/n.
pub fn hamming_cube(n: usize) -> Result<(PointCloud, FiniteMetric, crate::spectral::StochasticMatrix)> {
    if n < 1 || n > MAX_CUBE_DIM {
        return Err(Error::SizeOutOfRange {
            what: "cube dimension",
            got: n,
            min: 1,
            max: MAX_CUBE_DIM,
        });
    }
    let size = 1usize << n;
    let points: Vec<Vec<f64>> = (0..size)
        .map(|x| (0..n).map(|b| ((x >> b) & 1) as f64).collect())
        .collect();
    let cloud = PointCloud::new(points, PExponent::Finite(1.0))?;
    let mut d = vec![0.0; size * size];
    for x in 0..size {
        for y in 0..size {
            d[x * size + y] = (x ^ y).count_ones() as f64;
        }
    }
    let metric = FiniteMetric::trusted(size, d);
    let mut h = vec![0.0; size * size];
    let w = 1.0 / n as f64;
    for x in 0..size {
        for b in 0..n {
            h[x * size + (x ^ (1 << b))] = w;
        }
    }
    let matrix = crate::spectral::StochasticMatrix::from_flat(size, h)?;
    Ok((cloud, metric, matrix))
}

impl Kernel {
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Entrywise d^p. Rejects p < 1 and the ∞ marker.
pub fn power_kernel(metric: &FiniteMetric, p: f64) -> Result<Kernel> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent {
            p,
            reason: "kernels need finite p >= 1",
        });
    }
    let n = metric.size();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = metric.dist(i, j);
            values[i * n + j] = if p == 1.0 { d } else { d.powf(p) };
        }
    }
    Ok(Kernel { n, values, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_metric_validates() {
        let m = FiniteMetric::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(m.dist(0, 1), 1.0);
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let err = FiniteMetric::new(&[
            vec![0.0, 3.0, 1.0],
            vec![3.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap_err();
        match err {
            Error::TriangleViolation { i: 0, j: 1, k: 2, dij, via } => {
                assert_eq!(dij, 3.0);
                assert_eq!(via, 2.0);
            }
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn nonzero_diagonal_rejected() {
        let err = FiniteMetric::new(&[vec![0.5]]).unwrap_err();
        assert!(matches!(err, Error::NonzeroDiagonal { i: 0, .. }));
    }

    #[test]
    fn path_graph_distances() {
        let m = graph_metric(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(m.dist(0, 2), 2.0);
        assert_eq!(m.dist(2, 0), 2.0);
    }

    #[test]
    fn disconnected_graph_names_witnesses() {
        let err = graph_metric(4, &[(0, 1), (2, 3)]).unwrap_err();
        match err {
            Error::Disconnected { u: 0, v: 2 } => {}
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn l4_corner_distance() {
        let cloud = PointCloud::new(
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            PExponent::Finite(4.0),
        )
        .unwrap();
        let m = lp_metric(&cloud);
        assert!((m.dist(0, 1) - 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn cube_l1_equals_graph_metric_exactly() {
        let (_, metric, _) = hamming_cube(4).unwrap();
        let size = 1usize << 4;
        let mut edges = Vec::new();
        for x in 0..size {
            for b in 0..4 {
                let y = x ^ (1 << b);
                if x < y {
                    edges.push((x, y));
                }
            }
        }
        let sp = graph_metric(size, &edges).unwrap();
        for i in 0..size {
            for j in 0..size {
                assert_eq!(metric.dist(i, j), sp.dist(i, j));
            }
        }
    }

    #[test]
    fn cube_gap_identity() {
        for n in 1..=3usize {
            let (_, _, h) = hamming_cube(n).unwrap();
            let s = h.eigen().unwrap();
            let expected = 1.0 - 2.0 / n as f64;
            assert!(
                (s.lambda2 - expected).abs() < 1e-12,
                "dim {n}: lambda2 = {}, want {expected}",
                s.lambda2
            );
        }
    }

    #[test]
    fn kernel_rejects_sub_one_exponent() {
        let m = FiniteMetric::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(power_kernel(&m, 0.5).is_err());
    }

    #[test]
    fn kernel_p_one_is_distance() {
        let m = graph_metric(3, &[(0, 1), (1, 2)]).unwrap();
        let k = power_kernel(&m, 1.0).unwrap();
        assert_eq!(k.get(0, 2), 2.0);
    }
}

//! Shared generators for the randomized integration suites.

#![allow(dead_code)]

use nsgap::metric::{lp_metric, FiniteMetric, PExponent, PointCloud};
use nsgap::spectral::StochasticMatrix;
use nsgap::Value;
use proptest::prelude::*;

/// Symmetric stochastic matrix from free off-diagonal weights in [0,1]:
/// scale by the largest off-diagonal row sum, the diagonal absorbs the
/// slack. All-zero weights fall back to the identity.
pub fn stochastic_from_weights(n: usize, w: &[f64]) -> StochasticMatrix {
    assert_eq!(w.len(), n * (n - 1) / 2);
    let mut rows = vec![vec![0.0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            rows[i][j] = w[k];
            rows[j][i] = w[k];
            k += 1;
        }
    }
    let s = rows
        .iter()
        .map(|r| r.iter().sum::<f64>())
        .fold(0.0, f64::max);
    if s == 0.0 {
        return StochasticMatrix::identity(n);
    }
    for (i, row) in rows.iter_mut().enumerate() {
        for v in row.iter_mut() {
            *v /= s;
        }
        let off: f64 = row.iter().sum();
        row[i] = (1.0 - off).max(0.0);
    }
    StochasticMatrix::new(&rows).expect("normalized weights form a stochastic matrix")
}

pub fn stochastic(n: usize) -> impl Strategy<Value = StochasticMatrix> {
    prop::collection::vec(0.0f64..=1.0, n * (n - 1) / 2)
        .prop_map(move |w| stochastic_from_weights(n, &w))
}

/// Random matrix with 2 to 4 rows.
pub fn small_stochastic() -> impl Strategy<Value = StochasticMatrix> {
    (2usize..=4).prop_flat_map(stochastic)
}

/// Euclidean metric of a random planar cloud with at least two distinct
/// points (constant clouds make every configuration degenerate).
pub fn cloud_metric(m: usize) -> impl Strategy<Value = FiniteMetric> {
    prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), m)
        .prop_filter_map("needs two distinct points", |coords| {
            let points: Vec<Vec<f64>> = coords.into_iter().map(|(x, y)| vec![x, y]).collect();
            let metric = lp_metric(&PointCloud::new(points, PExponent::Finite(2.0)).ok()?);
            (metric.diameter() > 1e-6).then_some(metric)
        })
}

pub fn small_cloud_metric() -> impl Strategy<Value = FiniteMetric> {
    (2usize..=3).prop_flat_map(cloud_metric)
}

/// Metric of distinct points on a line.
pub fn line_metric(xs: &[f64]) -> FiniteMetric {
    let points = xs.iter().map(|&x| vec![x]).collect();
    lp_metric(&PointCloud::new(points, PExponent::Finite(1.0)).unwrap())
}

pub fn two_point_metric() -> FiniteMetric {
    FiniteMetric::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
}

/// a ≤ b with relative slack for enumeration round-off; infinities compare
/// the obvious way.
pub fn le_with_slack(a: Value, b: Value) -> bool {
    match (a, b) {
        (_, Value::Infinite) => true,
        (Value::Infinite, Value::Finite(_)) => false,
        (Value::Finite(a), Value::Finite(b)) => a <= b * (1.0 + 1e-9) + 1e-12,
    }
}

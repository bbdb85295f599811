//! Symmetric stochastic matrices and their spectra.
//!
//! The spectrum is computed with cyclic Jacobi rotations over the upper
//! triangle, threshold-gated in the early sweeps. Deterministic sweep order,
//! so repeated runs agree bit for bit on one platform. Dense O(n³); fine for
//! the desk-scale matrices this crate targets (n up to a few thousand).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::TOL;

/// Symmetric stochastic matrix. Stored exactly symmetric: ingest averages
/// (A+Aᵀ)/2 after rejecting asymmetry beyond `TOL.asymmetry`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    n: usize,
    a: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralSummary {
    /// Sorted descending; leading value is 1 up to `TOL.spectral_unit`.
    pub eigenvalues: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `eigenvalues[k]`.
    pub vectors: Vec<Vec<f64>>,
    pub lambda2: f64,
    /// λ(A) = max{λ₂, −λ_n}: the absolute spectral bound away from the
    /// constant vector.
    pub lambda_abs: f64,
}

impl StochasticMatrix {
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
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_flat(n, flat)
    }

    /// `a` is row-major with length n².
    pub fn from_flat(n: usize, a: Vec<f64>) -> Result<Self> {
        if n == 0 || a.len() != n * n {
            return Err(Error::NotSquare {
                rows: n,
                bad_row: 0,
                bad_len: a.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = a[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { i, j, value: v });
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry { i, j, value: v });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let delta = (a[i * n + j] - a[j * n + i]).abs();
                if delta > TOL.asymmetry {
                    return Err(Error::Asymmetric { i, j, delta });
                }
            }
        }
        let mut sym = a;
        for i in 0..n {
            for j in (i + 1)..n {
                let m = 0.5 * (sym[i * n + j] + sym[j * n + i]);
                sym[i * n + j] = m;
                sym[j * n + i] = m;
            }
        }
        for i in 0..n {
            let sum: f64 = sym[i * n..(i + 1) * n].iter().sum();
            if (sum - 1.0).abs() > TOL.row_sum {
                return Err(Error::RowSum { i, sum });
            }
        }
        Ok(StochasticMatrix { n, a: sym })
    }

    pub fn identity(n: usize) -> Self {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        StochasticMatrix { n, a }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// (I + A)/2. Spectrum shifts to (1+λ)/2, hence nonnegative.
    pub fn lazy(&self) -> Self {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = 0.5 * self.a[i * n + j];
            }
            a[i * n + i] += 0.5;
        }
        StochasticMatrix { n, a }
    }

    /// Aᵐ by repeated squaring. m = 0 gives the identity.
    pub fn power(&self, m: u32) -> Self {
        let n = self.n;
        let mut result = Self::identity(n);
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        // Round-off from the products can push row sums a hair off 1 and the
        // two triangles apart; restore exact symmetry.
        let mut a = result.a;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (a[i * n + j] + a[j * n + i]);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        StochasticMatrix { n, a }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            let arow = &self.a[i * n..(i + 1) * n];
            let crow = &mut c[i * n..(i + 1) * n];
            for (k, &aik) in arow.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let brow = &other.a[k * n..(k + 1) * n];
                for j in 0..n {
                    crow[j] += aik * brow[j];
                }
            }
        }
        StochasticMatrix { n, a: c }
    }

    /// [[0, A], [A, 0]]: spectrum is {±λ} over the spectrum of A.
    pub fn block_antidiagonal(&self) -> Self {
        let n = self.n;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                a[i * m + (n + j)] = self.a[i * n + j];
                a[(n + i) * m + j] = self.a[i * n + j];
            }
        }
        StochasticMatrix { n: m, a }
    }

    /// Full spectrum with eigenvectors, sorted descending.
    pub fn eigen(&self) -> Result<SpectralSummary> {
        if self.n < 2 {
            return Err(Error::SingletonSpectrum);
        }
        let n = self.n;
        let mut work = self.a.clone();
        let mut vecs = vec![0.0; n * n];
        for i in 0..n {
            vecs[i * n + i] = 1.0;
        }
        let mut eig = jacobi(n, &mut work, Some(&mut vecs));

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig[j].partial_cmp(&eig[i]).unwrap());
        eig = order.iter().map(|&i| eig[i]).collect();
        let vectors: Vec<Vec<f64>> = order
            .iter()
            .map(|&k| (0..n).map(|i| vecs[k * n + i]).collect())
            .collect();

        let tol = TOL.spectral_unit;
        if (eig[0] - 1.0).abs() > tol || eig[n - 1] < -1.0 - tol || eig[0] > 1.0 + tol {
            return Err(Error::SpectrumOutOfRange { lambda1: eig[0] });
        }
        let lambda2 = eig[1];
        let lambda_abs = lambda2.max(-eig[n - 1]);
        Ok(SpectralSummary {
            eigenvalues: eig,
            vectors,
            lambda2,
            lambda_abs,
        })
    }

    /// Eigenvalues only (descending). Same rotations as `eigen`, no vector
    /// accumulation; roughly halves the work for large n.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut work = self.a.clone();
        let mut eig = jacobi(self.n, &mut work, None);
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        eig
    }
}

/// Full eigendecomposition of an arbitrary symmetric matrix (row-major
/// flat storage). Returns (values, vectors) with row k of `vectors` the
/// eigenvector for `values[k]`; no ordering is imposed.
pub(crate) fn symmetric_eigen(n: usize, matrix: &[f64]) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(matrix.len(), n * n);
    let mut work = matrix.to_vec();
    let mut vecs = vec![0.0; n * n];
    for i in 0..n {
        vecs[i * n + i] = 1.0;
    }
    let values = jacobi(n, &mut work, Some(&mut vecs));
    (values, vecs)
}

/// Cyclic Jacobi with threshold gating. `a` is row-major n×n and is
/// destroyed; only its upper triangle is referenced or updated. When `vecs`
/// is given it must hold the identity; on return row k of `vecs` is the
/// eigenvector for the k-th returned eigenvalue (pre-sorting).
fn jacobi(n: usize, a: &mut [f64], mut vecs: Option<&mut [f64]>) -> Vec<f64> {
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..64 {
        let mut sm = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                sm += a[p * n + q].abs();
            }
        }
        if sm == 0.0 {
            break;
        }
        let thresh = if sweep < 3 {
            0.2 * sm / (n * n) as f64
        } else {
            0.0
        };

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                // Late sweeps: a pivot that no longer perturbs either
                // diagonal in f64 is dead; zero it instead of rotating.
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= thresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;

                let rot = |x: f64, y: f64| (x - s * (y + x * tau), y + s * (x - y * tau));
                for j in 0..p {
                    let (x, y) = rot(a[j * n + p], a[j * n + q]);
                    a[j * n + p] = x;
                    a[j * n + q] = y;
                }
                for j in (p + 1)..q {
                    let (x, y) = rot(a[p * n + j], a[j * n + q]);
                    a[p * n + j] = x;
                    a[j * n + q] = y;
                }
                for j in (q + 1)..n {
                    let (x, y) = rot(a[p * n + j], a[q * n + j]);
                    a[p * n + j] = x;
                    a[q * n + j] = y;
                }
                if let Some(v) = vecs.as_deref_mut() {
                    let (vp, vq) = v.split_at_mut(q * n);
                    let vp = &mut vp[p * n..p * n + n];
                    let vq = &mut vq[..n];
                    for j in 0..n {
                        let (x, y) = rot(vp[j], vq[j]);
                        vp[j] = x;
                        vq[j] = y;
                    }
                }
            }
        }

        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> StochasticMatrix {
        StochasticMatrix::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn swap_spectrum() {
        let s = swap().eigen().unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-12);
        assert_eq!(s.lambda2, s.eigenvalues[1]);
        assert!((s.lambda_abs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_spectrum_is_flat() {
        let s = StochasticMatrix::identity(3).eigen().unwrap();
        for &l in &s.eigenvalues {
            assert!((l - 1.0).abs() < 1e-12);
        }
        assert!((s.lambda2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetry_beyond_tolerance() {
        let err = StochasticMatrix::new(&[vec![0.0, 1.0], vec![0.5, 0.5]]).unwrap_err();
        match err {
            Error::Asymmetric { i: 0, j: 1, .. } => {}
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn rejects_bad_row_sum() {
        let err = StochasticMatrix::new(&[vec![0.2, 0.2], vec![0.2, 0.2]]).unwrap_err();
        match err {
            Error::RowSum { i: 0, sum } => assert!((sum - 0.4).abs() < 1e-12),
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn symmetrizes_small_asymmetry() {
        let eps = 5e-9;
        let m =
            StochasticMatrix::new(&[vec![0.0, 1.0 + eps / 2.0], vec![1.0 - eps / 2.0, 0.0]]);
        let m = m.unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn swap_squared_is_identity() {
        let p = swap().power(2);
        assert_eq!(p, StochasticMatrix::identity(2));
    }

    #[test]
    fn power_one_is_identity_map() {
        let a = StochasticMatrix::new(&[
            vec![0.5, 0.25, 0.25],
            vec![0.25, 0.5, 0.25],
            vec![0.25, 0.25, 0.5],
        ])
        .unwrap();
        assert_eq!(a.power(1), a);
    }

    #[test]
    fn eigenvectors_reproduce_matrix_action() {
        let a = StochasticMatrix::new(&[
            vec![0.1, 0.6, 0.3],
            vec![0.6, 0.2, 0.2],
            vec![0.3, 0.2, 0.5],
        ])
        .unwrap();
        let s = a.eigen().unwrap();
        for (k, v) in s.vectors.iter().enumerate() {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a.get(i, j) * v[j]).sum();
                assert!(
                    (av - s.eigenvalues[k] * v[i]).abs() < 1e-10,
                    "eigenpair {k} fails at row {i}"
                );
            }
        }
    }
}

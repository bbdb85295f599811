//! Hamming-cube functionals: k-edge averages E_k^{(q)}, their subadditivity
//! and lifting identities, the factorial symmetrization into an ℓ₂-power
//! space, and the quarter-root average-distortion witness.
//!
//! Vertices of 𝔽₂ⁿ are integer bitmasks; direction sets I are bitmasks too.
//! All sums are exact nested loops; nothing here samples.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetric, PExponent, PointCloud, MAX_CUBE_DIM};
use crate::numeric::{binomial, pairwise_sum};
use crate::Value;

/// Hard cap for the exact k-edge sums.
pub const MAX_EK_DIM: usize = 12;
/// Hard cap for the factorial symmetrization (2ⁿ·n! coordinates).
pub const MAX_MP_DIM: usize = 4;

#[derive(Clone, Debug)]
pub enum CubeImages {
    /// vertex ↦ point of ℝ^dim under the ℓ_p distance
    Points(PointCloud),
    /// vertex ↦ index into a finite (pseudo)metric space
    Metric {
        space: FiniteMetric,
        assignment: Vec<usize>,
    },
    /// vertex ↦ tuple of indices; coordinate distances combine in ℓ₂
    /// (the ℓ₂-power of the underlying space)
    MetricPower {
        space: FiniteMetric,
        assignment: Vec<Vec<usize>>,
    },
}

/// A map from all 2ⁿ cube vertices into a metric target.
#[derive(Clone, Debug)]
pub struct CubeFunction {
    n: usize,
    images: CubeImages,
}

fn check_dim(n: usize, cap: usize) -> Result<()> {
    if n < 1 || n > cap {
        return Err(Error::SizeOutOfRange {
            what: "cube dimension",
            got: n,
            min: 1,
            max: cap,
        });
    }
    Ok(())
}

impl CubeFunction {
    pub fn from_points(n: usize, points: Vec<Vec<f64>>, p: PExponent) -> Result<CubeFunction> {
        check_dim(n, MAX_CUBE_DIM)?;
        if points.len() != 1 << n {
            return Err(Error::SizeMismatch {
                left_what: "values",
                left: points.len(),
                right_what: "cube vertices",
                right: 1 << n,
            });
        }
        let cloud = PointCloud::new(points, p)?;
        Ok(CubeFunction {
            n,
            images: CubeImages::Points(cloud),
        })
    }

    pub fn into_metric(
        n: usize,
        space: FiniteMetric,
        assignment: Vec<usize>,
    ) -> Result<CubeFunction> {
        check_dim(n, MAX_CUBE_DIM)?;
        if assignment.len() != 1 << n {
            return Err(Error::SizeMismatch {
                left_what: "assignment",
                left: assignment.len(),
                right_what: "cube vertices",
                right: 1 << n,
            });
        }
        if let Some(&bad) = assignment.iter().find(|&&i| i >= space.size()) {
            return Err(Error::SizeOutOfRange {
                what: "assignment index",
                got: bad,
                min: 0,
                max: space.size() - 1,
            });
        }
        Ok(CubeFunction {
            n,
            images: CubeImages::Metric { space, assignment },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> usize {
        1 << self.n
    }

    pub fn images(&self) -> &CubeImages {
        &self.images
    }

    /// Distance between the images of two vertices.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        match &self.images {
            CubeImages::Points(cloud) => cloud.distance(x, y),
            CubeImages::Metric { space, assignment } => {
                space.dist(assignment[x], assignment[y])
            }
            CubeImages::MetricPower { space, assignment } => {
                let (u, v) = (&assignment[x], &assignment[y]);
                u.iter()
                    .zip(v)
                    .map(|(&a, &b)| {
                        let d = space.dist(a, b);
                        d * d
                    })
                    .sum::<f64>()
                    .sqrt()
            }
        }
    }

    /// The natural extension to a larger cube: f^{↑n}(z) = f(z₁,…,z_m),
    /// read off the low m bits.
    pub fn lift(&self, n_target: usize) -> Result<CubeFunction> {
        check_dim(n_target, MAX_CUBE_DIM)?;
        if n_target < self.n {
            return Err(Error::SizeOutOfRange {
                what: "lift target dimension",
                got: n_target,
                min: self.n,
                max: MAX_CUBE_DIM,
            });
        }
        let mask = (1usize << self.n) - 1;
        let verts = 1usize << n_target;
        let images = match &self.images {
            CubeImages::Points(cloud) => {
                let pts: Vec<Vec<f64>> =
                    (0..verts).map(|z| cloud.point(z & mask).to_vec()).collect();
                CubeImages::Points(PointCloud::new(pts, cloud.p())?)
            }
            CubeImages::Metric { space, assignment } => CubeImages::Metric {
                space: space.clone(),
                assignment: (0..verts).map(|z| assignment[z & mask]).collect(),
            },
            CubeImages::MetricPower { space, assignment } => CubeImages::MetricPower {
                space: space.clone(),
                assignment: (0..verts).map(|z| assignment[z & mask].clone()).collect(),
            },
        };
        Ok(CubeFunction {
            n: n_target,
            images,
        })
    }
}

fn check_q(q: f64) -> Result<()> {
    if !q.is_finite() || q < 1.0 {
        return Err(Error::BadExponent {
            p: q,
            reason: "edge averages need finite q >= 1",
        });
    }
    Ok(())
}

/// All size-k subsets of {0,…,n−1} as bitmasks, ascending.
fn size_k_masks(n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let top = 1usize << n;
    let mut mask = (1usize << k) - 1;
    while mask < top {
        out.push(mask);
        // Gosper: next mask with the same popcount
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        if c == 0 || r >= top {
            break;
        }
        mask = r | (((mask ^ r) / c) >> 2);
    }
    out
}

/// The k-edge average
/// E_k^{(q)}(f) = ( (1/(2ⁿ·C(n,k))) Σ_{|I|=k} Σ_z d(f(z⊕e_I), f(z))^q )^{1/q}.
pub fn ek(f: &CubeFunction, k: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    let n = f.n();
    if n > MAX_EK_DIM {
        return Err(Error::SizeOutOfRange {
            what: "edge-average cube dimension",
            got: n,
            min: 1,
            max: MAX_EK_DIM,
        });
    }
    if k < 1 || k > n {
        return Err(Error::SizeOutOfRange {
            what: "k",
            got: k,
            min: 1,
            max: n,
        });
    }
    let verts = f.vertices();
    let masks = size_k_masks(n, k);
    // one partial sum per direction set, reduced in enumeration order
    let partials: Vec<f64> = masks
        .par_iter()
        .map(|&m| {
            let terms: Vec<f64> = (0..verts)
                .map(|z| {
                    let d = f.distance(z, z ^ m);
                    if q == 2.0 {
                        d * d
                    } else {
                        d.powf(q)
                    }
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    let total = pairwise_sum(&partials);
    let count = verts as f64 * binomial(n, k);
    Ok((total / count).powf(1.0 / q))
}

/// E_k of the lift via the binomial mixing formula:
/// E_k^{(q)}(f^{↑n})^q = (1/C(n,k)) Σ_j C(m,j)·C(n−m,k−j)·E_j^{(q)}(f)^q.
pub fn lifted_ek_formula(f: &CubeFunction, n_target: usize, k: usize, q: f64) -> Result<f64> {
    check_q(q)?;
    let m = f.n();
    if n_target < m || k < 1 || k > n_target {
        return Err(Error::SizeOutOfRange {
            what: "lifted index",
            got: k,
            min: 1,
            max: n_target,
        });
    }
    let mut acc = 0.0;
    let j_lo = k.saturating_sub(n_target - m).max(1);
    let j_hi = k.min(m);
    for j in j_lo..=j_hi {
        let e = ek(f, j, q)?;
        acc += binomial(m, j) * binomial(n_target - m, k - j) * e.powf(q);
    }
    Ok((acc / binomial(n_target, k)).powf(1.0 / q))
}

/// E_n(f) / (n^{1/p}·E₁(f)) at q = 2: the smallest constant this single f
/// demands of the diagonal-versus-edge inequality at exponent p.
pub fn bmw_ratio(f: &CubeFunction, p: f64) -> Result<Value> {
    if !p.is_finite() || p <= 0.0 || p > 2.0 {
        return Err(Error::BadExponent {
            p,
            reason: "the ratio is defined for p in (0, 2]",
        });
    }
    let n = f.n();
    let e1 = ek(f, 1, 2.0)?;
    let en = ek(f, n, 2.0)?;
    if e1 == 0.0 {
        return if en == 0.0 {
            Err(Error::Degenerate(
                "constant function has no edge-average ratio".into(),
            ))
        } else {
            Ok(Value::Infinite)
        };
    }
    Ok(Value::Finite(en / ((n as f64).powf(1.0 / p) * e1)))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // lexicographic order, starting from the identity
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![perm.clone()];
    loop {
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
        out.push(perm.clone());
    }
    out
}

fn permute_bits(perm: &[usize], x: usize) -> usize {
    let mut y = 0usize;
    for (i, &src) in perm.iter().enumerate() {
        y |= ((x >> src) & 1) << i;
    }
    y
}

/// Factorial symmetrization F(x)_{(z,π)} = f(π(x)⊕z) into the ℓ₂-power of
/// the image (pseudo)metric. Pairwise distances depend only on the Hamming
/// level: d(F(x),F(y)) = √(2ⁿ·n!)·E_{‖x⊕y‖₁}^{(2)}(f).
pub fn mp_lift_construction(f: &CubeFunction) -> Result<CubeFunction> {
    let n = f.n();
    if n > MAX_MP_DIM {
        return Err(Error::SizeOutOfRange {
            what: "factorial construction dimension",
            got: n,
            min: 1,
            max: MAX_MP_DIM,
        });
    }
    let verts = f.vertices();
    // induced distance matrix of the images; a pseudometric is fine here
    let rows: Vec<Vec<f64>> = (0..verts)
        .map(|x| (0..verts).map(|y| f.distance(x, y)).collect())
        .collect();
    let space = FiniteMetric::new(&rows)?;
    let perms = permutations(n);
    let assignment: Vec<Vec<usize>> = (0..verts)
        .map(|x| {
            let mut coords = Vec::with_capacity(verts * perms.len());
            for z in 0..verts {
                for perm in &perms {
                    coords.push(permute_bits(perm, x) ^ z);
                }
            }
            coords
        })
        .collect();
    Ok(CubeFunction {
        n,
        images: CubeImages::MetricPower { space, assignment },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarterRootWitness {
    /// φ value per Hamming level 0..=n.
    pub levels: Vec<f64>,
    /// ((1/4ⁿ) Σ_{x,y} |φ(x)−φ(y)|²)^{1/2}
    pub ratio: f64,
    #[serde(skip)]
    pub function: CubeFunction,
}

/// The level function φ(x) = √(max{‖x‖₁ − n/2, 0}): 1-Lipschitz into ℝ
/// against the ℓ₂ cube distance, with root-mean-square spread ≍ n^{1/4}.
pub fn quarter_root_witness(n: usize) -> Result<QuarterRootWitness> {
    check_dim(n, MAX_CUBE_DIM)?;
    if n % 2 != 0 {
        return Err(Error::BadParameter {
            name: "n",
            value: n as f64,
            reason: "the witness is stated for even dimensions",
        });
    }
    let levels: Vec<f64> = (0..=n)
        .map(|k| (k as f64 - n as f64 / 2.0).max(0.0).sqrt())
        .collect();
    // Exact Lipschitz check: weights k < l admit pairs at Hamming distance
    // exactly l−k, and no closer, so the level gap decides the constant.
    for k in 0..=n {
        for l in (k + 1)..=n {
            let gap = (levels[l] - levels[k]).abs();
            if gap > ((l - k) as f64).sqrt() + 1e-12 {
                return Err(Error::Degenerate(format!(
                    "level gap {gap} exceeds sqrt({}) between weights {k} and {l}",
                    l - k
                )));
            }
        }
    }
    // Mean squared difference via level counts.
    let mut acc = 0.0;
    for k in 0..=n {
        for l in 0..=n {
            let diff = levels[k] - levels[l];
            acc += binomial(n, k) * binomial(n, l) * diff * diff;
        }
    }
    let total = (1u64 << n) as f64;
    let ratio = (acc / (total * total)).sqrt();
    let points: Vec<Vec<f64>> = (0..1usize << n)
        .map(|x| vec![levels[x.count_ones() as usize]])
        .collect();
    let function = CubeFunction::from_points(n, points, PExponent::Finite(2.0))?;
    Ok(QuarterRootWitness {
        levels,
        ratio,
        function,
    })
}

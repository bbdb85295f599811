//! Poincaré ratios and the nonlinear gaps γ(A,d_X^p), γ₊(A,d_X^p).
//!
//! γ is the least constant closing
//!   (1/n²) Σᵢⱼ K(xᵢ,xⱼ) ≤ (γ/n) Σᵢⱼ aᵢⱼ K(xᵢ,xⱼ)
//! over all configurations x ∈ Xⁿ, with K = d^p. γ₊ ranges over pairs of
//! configurations with K evaluated across them. On finite X both are exact
//! maxima over a finite enumeration; a configuration with zero denominator
//! and positive numerator forces the +∞ marker, and 0/0 configurations
//! impose no constraint and are skipped.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{power_kernel, FiniteMetric, Kernel};
use crate::numeric::rng_for;
use crate::spectral::StochasticMatrix;
use crate::Value;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Configuration(pub Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Sampled,
    Eigen,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Witness {
    /// A single configuration (γ).
    Assignment { indices: Vec<usize> },
    /// Two configurations (γ₊).
    Pair {
        x: Vec<usize>,
        y: Vec<usize>,
    },
    /// A real-line configuration (eigen method).
    Real { values: Vec<f64> },
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaEstimate {
    pub value: Value,
    pub witness: Witness,
    pub method: Method,
    /// Kernel evaluations spent.
    pub evaluations: u64,
}

/// Outcome of one configuration's ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Ratio {
    /// Numerator and denominator both vanish; imposes nothing.
    Degenerate,
    Finite(f64),
    Infinite,
}

fn ratio_from_sums(num: f64, den: f64) -> Ratio {
    if den == 0.0 {
        if num == 0.0 {
            Ratio::Degenerate
        } else {
            Ratio::Infinite
        }
    } else {
        Ratio::Finite(num / den)
    }
}

/// Raw sums for a single-configuration ratio: Σ K(cᵢ,cⱼ) and Σ aᵢⱼ K(cᵢ,cⱼ).
fn gamma_sums(a: &StochasticMatrix, k: &Kernel, c: &[usize]) -> (f64, f64) {
    let n = c.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let arow = a.row(i);
        for j in (i + 1)..n {
            let kij = k.get(c[i], c[j]);
            num += 2.0 * kij;
            den += 2.0 * arow[j] * kij;
        }
        // diagonal kernel terms vanish on a metric's diagonal but keep the
        // formula literal: K(c_i,c_i) can be nonzero only for a non-metric
        // kernel, which this crate never constructs.
        den += arow[i] * k.get(c[i], c[i]);
    }
    (num, den)
}

/// Sums for a pair ratio: Σᵢⱼ K(xᵢ,yⱼ) and Σᵢⱼ aᵢⱼ K(xᵢ,yⱼ).
fn gamma_plus_sums(a: &StochasticMatrix, k: &Kernel, x: &[usize], y: &[usize]) -> (f64, f64) {
    let n = x.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let arow = a.row(i);
        for j in 0..n {
            let kij = k.get(x[i], y[j]);
            num += kij;
            den += arow[j] * kij;
        }
    }
    (num, den)
}

fn check_dims(a: &StochasticMatrix, k: &Kernel, c: &[usize]) -> Result<()> {
    if c.len() != a.n() {
        return Err(Error::SizeMismatch {
            left_what: "configuration",
            left: c.len(),
            right_what: "matrix",
            right: a.n(),
        });
    }
    if let Some(&bad) = c.iter().find(|&&i| i >= k.size()) {
        return Err(Error::SizeOutOfRange {
            what: "configuration index",
            got: bad,
            min: 0,
            max: k.size() - 1,
        });
    }
    Ok(())
}

/// The γ demanded by one configuration. The normalizations (1/n²) and (1/n)
/// are applied here; a constant (0/0) configuration is an error.
pub fn poincare_ratio(a: &StochasticMatrix, k: &Kernel, c: &Configuration) -> Result<Value> {
    check_dims(a, k, &c.0)?;
    let n = a.n() as f64;
    let (num, den) = gamma_sums(a, k, &c.0);
    match ratio_from_sums(num / (n * n), den / n) {
        Ratio::Degenerate => Err(Error::Degenerate(
            "configuration is constant in the kernel (0/0 ratio)".into(),
        )),
        Ratio::Finite(v) => Ok(Value::Finite(v)),
        Ratio::Infinite => Ok(Value::Infinite),
    }
}

/// Same ratio for a real-line configuration with kernel |xᵢ−xⱼ|^p. At p = 2
/// the supremum of this quantity over x is exactly 1/(1−λ₂(A)).
pub fn poincare_ratio_real(a: &StochasticMatrix, xs: &[f64], p: f64) -> Result<Value> {
    if xs.len() != a.n() {
        return Err(Error::SizeMismatch {
            left_what: "configuration",
            left: xs.len(),
            right_what: "matrix",
            right: a.n(),
        });
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent {
            p,
            reason: "ratios need finite p >= 1",
        });
    }
    let n = xs.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let arow = a.row(i);
        for j in (i + 1)..n {
            let k = if p == 2.0 {
                (xs[i] - xs[j]) * (xs[i] - xs[j])
            } else {
                (xs[i] - xs[j]).abs().powf(p)
            };
            num += 2.0 * k;
            den += 2.0 * arow[j] * k;
        }
    }
    let nf = n as f64;
    match ratio_from_sums(num / (nf * nf), den / nf) {
        Ratio::Degenerate => Err(Error::Degenerate(
            "configuration is constant (0/0 ratio)".into(),
        )),
        Ratio::Finite(v) => Ok(Value::Finite(v)),
        Ratio::Infinite => Ok(Value::Infinite),
    }
}

/// Best (ratio, odometer index) seen while walking a digit block. `Infinite`
/// wins over everything; ties keep the first index.
struct Best {
    ratio: Ratio,
    index: u128,
    digits: Vec<usize>,
}

impl Best {
    fn none() -> Self {
        Best {
            ratio: Ratio::Degenerate,
            index: 0,
            digits: Vec::new(),
        }
    }

    fn offer(&mut self, ratio: Ratio, index: u128, digits: &[usize]) {
        let better = match (self.ratio, ratio) {
            (_, Ratio::Degenerate) => false,
            (Ratio::Degenerate, _) => true,
            (Ratio::Infinite, _) => false,
            (_, Ratio::Infinite) => true,
            (Ratio::Finite(old), Ratio::Finite(new)) => new > old,
        };
        if better {
            self.ratio = ratio;
            self.index = index;
            self.digits = digits.to_vec();
        }
    }

    fn merge(self, other: Best) -> Best {
        // `other` always carries higher odometer indices; strict improvement
        // only, so the lowest index wins ties.
        let mut keep = self;
        let take = match (keep.ratio, other.ratio) {
            (_, Ratio::Degenerate) => false,
            (Ratio::Degenerate, _) => true,
            (Ratio::Infinite, _) => false,
            (_, Ratio::Infinite) => true,
            (Ratio::Finite(a), Ratio::Finite(b)) => b > a,
        };
        if take {
            keep = other;
        }
        keep
    }
}

/// Walk all `base^len` digit strings (last digit fastest), partitioned by the
/// leading digit, and keep the best ratio. Deterministic: partitions are
/// merged in leading-digit order whatever the thread schedule.
fn enumerate_best<F>(base: usize, len: usize, eval: F) -> Best
where
    F: Fn(&[usize]) -> Ratio + Sync,
{
    let suffix_count = (base as u128).pow(len as u32 - 1);
    let parts: Vec<Best> = (0..base)
        .into_par_iter()
        .map(|lead| {
            let mut digits = vec![0usize; len];
            digits[0] = lead;
            let mut best = Best::none();
            let base_index = lead as u128 * suffix_count;
            for s in 0..suffix_count {
                best.offer(eval(&digits), base_index + s, &digits);
                // odometer over digits[1..], last digit fastest
                for d in (1..len).rev() {
                    digits[d] += 1;
                    if digits[d] < base {
                        break;
                    }
                    digits[d] = 0;
                }
            }
            best
        })
        .collect();
    parts.into_iter().fold(Best::none(), Best::merge)
}

fn budget_check(base: usize, len: usize, per_config: u64, budget: u64) -> Result<u64> {
    let needed = (base as u128)
        .checked_pow(len as u32)
        .and_then(|c| c.checked_mul(per_config as u128))
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed as u64)
}

/// Exact γ(A, d_X^p) by full enumeration of Xⁿ, with a first-seen argmax
/// witness.
pub fn gamma_exact(
    a: &StochasticMatrix,
    x: &FiniteMetric,
    p: f64,
    budget: u64,
) -> Result<GammaEstimate> {
    let k = power_kernel(x, p)?;
    let n = a.n();
    let evaluations = budget_check(x.size(), n, (n * n) as u64, budget)?;
    let best = enumerate_best(x.size(), n, |c| {
        let (num, den) = gamma_sums(a, &k, c);
        ratio_from_sums(num / (n * n) as f64, den / n as f64)
    });
    finish_estimate(best, Method::Exact, evaluations, false)
}

/// Exact γ₊(A, d_X^p): enumeration over pairs (x, y) ∈ Xⁿ × Xⁿ encoded as a
/// single 2n-digit odometer (x digits leading).
pub fn gamma_plus_exact(
    a: &StochasticMatrix,
    x: &FiniteMetric,
    p: f64,
    budget: u64,
) -> Result<GammaEstimate> {
    let k = power_kernel(x, p)?;
    let n = a.n();
    let evaluations = budget_check(x.size(), 2 * n, (n * n) as u64, budget)?;
    let best = enumerate_best(x.size(), 2 * n, |c| {
        let (num, den) = gamma_plus_sums(a, &k, &c[..n], &c[n..]);
        ratio_from_sums(num / (n * n) as f64, den / n as f64)
    });
    finish_estimate(best, Method::Exact, evaluations, true)
}

fn finish_estimate(
    best: Best,
    method: Method,
    evaluations: u64,
    pair: bool,
) -> Result<GammaEstimate> {
    let value = match best.ratio {
        Ratio::Degenerate => {
            return Err(Error::Degenerate(
                "every configuration is constant in the kernel".into(),
            ))
        }
        Ratio::Finite(v) => Value::Finite(v),
        Ratio::Infinite => Value::Infinite,
    };
    let witness = if pair {
        let n = best.digits.len() / 2;
        Witness::Pair {
            x: best.digits[..n].to_vec(),
            y: best.digits[n..].to_vec(),
        }
    } else {
        Witness::Assignment {
            indices: best.digits,
        }
    };
    Ok(GammaEstimate {
        value,
        witness,
        method,
        evaluations,
    })
}

/// Randomized lower bound: `trials` random starts, each greedily improved by
/// the best single-coordinate move until a local maximum. Every reported
/// value is a genuine demand on γ, hence a certified lower bound.
pub fn gamma_sampled(
    a: &StochasticMatrix,
    x: &FiniteMetric,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<GammaEstimate> {
    sampled_impl(a, x, p, trials, seed, false)
}

/// Sampled lower bound for γ₊ over configuration pairs.
pub fn gamma_plus_sampled(
    a: &StochasticMatrix,
    x: &FiniteMetric,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<GammaEstimate> {
    sampled_impl(a, x, p, trials, seed, true)
}

fn sampled_impl(
    a: &StochasticMatrix,
    x: &FiniteMetric,
    p: f64,
    trials: u64,
    seed: u64,
    pair: bool,
) -> Result<GammaEstimate> {
    use rand::Rng;
    if trials == 0 {
        return Err(Error::BadParameter {
            name: "trials",
            value: 0.0,
            reason: "need at least one trial",
        });
    }
    let k = power_kernel(x, p)?;
    let n = a.n();
    let len = if pair { 2 * n } else { n };
    let base = x.size();
    let mut best = Best::none();
    let mut evaluations = 0u64;

    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let mut c: Vec<usize> = (0..len).map(|_| rng.gen_range(0..base)).collect();
        let eval = |c: &[usize]| -> Ratio {
            let (num, den) = if pair {
                gamma_plus_sums(a, &k, &c[..n], &c[n..])
            } else {
                gamma_sums(a, &k, c)
            };
            ratio_from_sums(num / (n * n) as f64, den / n as f64)
        };
        let mut current = eval(&c);
        evaluations += (n * n) as u64;
        // Greedy ascent on single coordinates. Infinite is a global max.
        loop {
            if current == Ratio::Infinite {
                break;
            }
            let mut improved = false;
            let mut move_to: (usize, usize) = (0, 0);
            let mut best_here = current;
            for pos in 0..len {
                let old = c[pos];
                for v in 0..base {
                    if v == old {
                        continue;
                    }
                    c[pos] = v;
                    let r = eval(&c);
                    evaluations += (n * n) as u64;
                    let better = match (best_here, r) {
                        (_, Ratio::Degenerate) => false,
                        (Ratio::Degenerate, _) => true,
                        (Ratio::Infinite, _) => false,
                        (_, Ratio::Infinite) => true,
                        (Ratio::Finite(bh), Ratio::Finite(new)) => new > bh,
                    };
                    if better {
                        best_here = r;
                        move_to = (pos, v);
                        improved = true;
                    }
                }
                c[pos] = old;
            }
            if !improved {
                break;
            }
            c[move_to.0] = move_to.1;
            current = best_here;
        }
        best.offer(current, trial as u128, &c);
    }
    finish_estimate(best, Method::Sampled, evaluations, pair)
}

/// The real-line value at p = 2: γ = 1/(1−λ₂), witnessed by a λ₂
/// eigenvector configuration.
pub fn gamma_eigen(a: &StochasticMatrix) -> Result<GammaEstimate> {
    let s = a.eigen()?;
    let value = if s.lambda2 >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite(1.0 / (1.0 - s.lambda2))
    };
    Ok(GammaEstimate {
        value,
        witness: Witness::Real {
            values: s.vectors[1].clone(),
        },
        method: Method::Eigen,
        evaluations: 0,
    })
}

/// γ₊ on the real line at p = 2: 1/(1−λ(A)), witnessed by the eigenvector
/// achieving λ(A) = max{λ₂, −λ_n}.
pub fn gamma_plus_eigen(a: &StochasticMatrix) -> Result<GammaEstimate> {
    let s = a.eigen()?;
    let n = a.n();
    let witness_vec = if s.lambda2 >= -s.eigenvalues[n - 1] {
        s.vectors[1].clone()
    } else {
        s.vectors[n - 1].clone()
    };
    let value = if s.lambda_abs >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite(1.0 / (1.0 - s.lambda_abs))
    };
    Ok(GammaEstimate {
        value,
        witness: Witness::Real {
            values: witness_vec,
        },
        method: Method::Eigen,
        evaluations: 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CutReport {
    pub value: Value,
    /// The maximizing subset S (vertex indices).
    pub subset: Vec<usize>,
    /// True when all subsets were enumerated; false for the eigenvector
    /// prefix-sweep heuristic used beyond n = 24.
    pub exact: bool,
}

const CUT_EXACT_LIMIT: usize = 24;

/// max over nonempty proper S of |S|(n−|S|) / (n Σ_{(i,j)∈S×Sᶜ} aᵢⱼ).
/// A certified lower bound for γ(A, d_X^p) for every X with two points.
/// Zero cut (disconnected support) gives the +∞ marker.
pub fn cut_bound(a: &StochasticMatrix) -> Result<CutReport> {
    let n = a.n();
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            what: "cut bound matrix",
            got: n,
            min: 2,
            max: usize::MAX,
        });
    }
    if n <= CUT_EXACT_LIMIT {
        Ok(cut_exact(a))
    } else {
        cut_prefix_sweep(a)
    }
}

fn cut_value(n: usize, size_s: usize, cut: f64) -> Ratio {
    // tiny negative dust can accumulate in the incremental cut sum
    let cut = cut.max(0.0);
    if cut == 0.0 {
        Ratio::Infinite
    } else {
        Ratio::Finite((size_s * (n - size_s)) as f64 / (n as f64 * cut))
    }
}

fn cut_exact(a: &StochasticMatrix) -> CutReport {
    let n = a.n();
    // Complement symmetry: scan subsets S with vertex 0 outside, via a Gray
    // walk over vertices 1..n so the cut updates in O(n) per step.
    let mut in_s = vec![false; n];
    let mut cut = 0.0f64;
    let mut size_s = 0usize;
    let mut best = Best::none();
    let total: u64 = 1 << (n - 1);
    let mut prev_gray: u64 = 0;
    for g in 1..total {
        let gray = g ^ (g >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize + 1;
        prev_gray = gray;
        let entering = !in_s[flipped];
        let mut delta = 0.0;
        for j in 0..n {
            if j == flipped {
                continue;
            }
            if in_s[j] {
                delta -= a.get(flipped, j);
            } else {
                delta += a.get(flipped, j);
            }
        }
        if entering {
            cut += delta;
            size_s += 1;
        } else {
            cut -= delta;
            size_s -= 1;
        }
        in_s[flipped] = entering;
        if size_s > 0 {
            let digits: Vec<usize> = (0..n).filter(|&i| in_s[i]).collect();
            best.offer(cut_value(n, size_s, cut), g as u128, &digits);
        }
    }
    let value = match best.ratio {
        Ratio::Infinite => Value::Infinite,
        Ratio::Finite(v) => Value::Finite(v),
        Ratio::Degenerate => unreachable!("some nonempty proper subset always scores"),
    };
    CutReport {
        value,
        subset: best.digits,
        exact: true,
    }
}

fn cut_prefix_sweep(a: &StochasticMatrix) -> Result<CutReport> {
    let n = a.n();
    let s = a.eigen()?;
    let mut order: Vec<usize> = (0..n).collect();
    let v2 = &s.vectors[1];
    order.sort_by(|&i, &j| v2[i].partial_cmp(&v2[j]).unwrap());
    let mut in_s = vec![false; n];
    let mut cut = 0.0f64;
    let mut best = Best::none();
    for (k, &v) in order.iter().take(n - 1).enumerate() {
        for j in 0..n {
            if j == v {
                continue;
            }
            if in_s[j] {
                cut -= a.get(v, j);
            } else {
                cut += a.get(v, j);
            }
        }
        in_s[v] = true;
        let digits: Vec<usize> = (0..n).filter(|&i| in_s[i]).collect();
        best.offer(cut_value(n, k + 1, cut), k as u128, &digits);
    }
    let value = match best.ratio {
        Ratio::Infinite => Value::Infinite,
        Ratio::Finite(v) => Value::Finite(v),
        Ratio::Degenerate => unreachable!(),
    };
    Ok(CutReport {
        value,
        subset: best.digits,
        exact: false,
    })
}

//! Closed-form bound calculators for the displayed inequalities: Cheeger
//! reference, extrapolation to p ≥ 2, the ℓ_p gap bounds, the
//! uniform-homeomorphism transfer bound, interpolation, refined Markov-type
//! sums, and smoothness-based interpolation.
//!
//! Implicit "up to a universal constant" factors surface as a single
//! `universal_c` knob with default 1; no certified constants are claimed
//! beyond what the formulas state.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::spectral::StochasticMatrix;
use crate::Value;

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundParams {
    /// Convexity-side exponent, ≥ 1.
    pub p: f64,
    /// Smoothness exponent, in [1, 2].
    pub q: f64,
    /// Interpolation parameter, in [0, 1].
    pub theta: f64,
    /// q-smoothness constant S_q of the target space, ≥ 1.
    pub smoothness_const: f64,
    /// p-convexity constant K_p, ≥ 1.
    pub convexity_const: f64,
    /// Stand-in for unspecified universal constants, > 0.
    pub universal_c: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            p: 2.0,
            q: 2.0,
            theta: 1.0,
            smoothness_const: 1.0,
            convexity_const: 1.0,
            universal_c: 1.0,
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool); 6] = [
            ("p", self.p, self.p.is_finite() && self.p >= 1.0),
            (
                "q",
                self.q,
                self.q.is_finite() && (1.0..=2.0).contains(&self.q),
            ),
            (
                "theta",
                self.theta,
                self.theta.is_finite() && (0.0..=1.0).contains(&self.theta),
            ),
            (
                "smoothness_const",
                self.smoothness_const,
                self.smoothness_const.is_finite() && self.smoothness_const >= 1.0,
            ),
            (
                "convexity_const",
                self.convexity_const,
                self.convexity_const.is_finite() && self.convexity_const >= 1.0,
            ),
            (
                "universal_c",
                self.universal_c,
                self.universal_c.is_finite() && self.universal_c > 0.0,
            ),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(Error::BadParameter {
                    name,
                    value,
                    reason: "outside the documented range",
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub value: Value,
    /// True only for bounds backed by an exact certificate (the cut bound);
    /// formula bounds with unspecified constants stay uncertified.
    pub certified: bool,
    pub inputs: serde_json::Value,
}

/// A positive nondecreasing function handle on (0, ∞), used for the moduli
/// α (lower) and β (upper) of a uniform homeomorphism.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Modulus {
    Identity,
    /// t ↦ coeff · t^exponent with coeff > 0, exponent > 0.
    Power { coeff: f64, exponent: f64 },
    /// Piecewise-linear through strictly increasing samples; extended
    /// linearly beyond the sampled range using the end segments.
    Table { points: Vec<(f64, f64)> },
}

impl Modulus {
    pub fn power(coeff: f64, exponent: f64) -> Result<Modulus> {
        if !(coeff.is_finite() && coeff > 0.0) {
            return Err(Error::BadParameter {
                name: "coeff",
                value: coeff,
                reason: "power modulus needs a positive finite coefficient",
            });
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::BadParameter {
                name: "exponent",
                value: exponent,
                reason: "power modulus needs a positive finite exponent",
            });
        }
        Ok(Modulus::Power { coeff, exponent })
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Modulus> {
        if points.len() < 2 {
            return Err(Error::BadParameter {
                name: "points",
                value: points.len() as f64,
                reason: "tabulated modulus needs at least two samples",
            });
        }
        for w in points.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            let finite = t0.is_finite() && v0.is_finite() && t1.is_finite() && v1.is_finite();
            if !finite || t1 <= t0 || v1 <= v0 || t0 < 0.0 || v0 < 0.0 {
                return Err(Error::BadParameter {
                    name: "points",
                    value: t1,
                    reason: "samples must be finite, nonnegative, strictly increasing",
                });
            }
        }
        Ok(Modulus::Table { points })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Modulus::Identity => t,
            Modulus::Power { coeff, exponent } => coeff * t.powf(*exponent),
            Modulus::Table { points } => {
                let seg = points
                    .windows(2)
                    .find(|w| t <= w[1].0)
                    .unwrap_or_else(|| &points[points.len() - 2..]);
                let ((t0, v0), (t1, v1)) = (seg[0], seg[1]);
                let lam = (t - t0) / (t1 - t0);
                (v0 + lam * (v1 - v0)).max(0.0)
            }
        }
    }

    /// Closed-form inverse for identity and power handles; a table inverts
    /// by swapping coordinates (valid since samples increase strictly).
    pub fn inverse(&self) -> Result<Modulus> {
        match self {
            Modulus::Identity => Ok(Modulus::Identity),
            Modulus::Power { coeff, exponent } => Modulus::power(
                (1.0 / coeff).powf(1.0 / exponent),
                1.0 / exponent,
            ),
            Modulus::Table { points } => {
                Modulus::table(points.iter().map(|&(t, v)| (v, t)).collect())
            }
        }
    }

    /// Lower modulus of the squared-distance inequality for the real line
    /// composed into ℓ_p: α(t) = 2(t/2)^{p/2} for p ≥ 2, α(t) = t/3 for
    /// p ∈ [1, 2].
    pub fn lp_smoothness_alpha(p: f64) -> Result<Modulus> {
        check_modulus_exponent(p)?;
        if p >= 2.0 {
            Modulus::power(2.0f64.powf(1.0 - p / 2.0), p / 2.0)
        } else {
            Modulus::power(1.0 / 3.0, 1.0)
        }
    }

    /// Matching upper modulus: β(t) = p·t for p ≥ 2, β(t) = 2t^{p/2} for
    /// p ∈ [1, 2].
    pub fn lp_smoothness_beta(p: f64) -> Result<Modulus> {
        check_modulus_exponent(p)?;
        if p >= 2.0 {
            Modulus::power(p, 1.0)
        } else {
            Modulus::power(2.0, p / 2.0)
        }
    }
}

fn check_modulus_exponent(p: f64) -> Result<()> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::BadExponent {
            p,
            reason: "moduli are defined for finite p >= 1",
        });
    }
    Ok(())
}

fn require_p_at_least_two(p: f64) -> Result<()> {
    if !p.is_finite() || p < 2.0 {
        return Err(Error::BadExponent {
            p,
            reason: "this bound needs finite p >= 2",
        });
    }
    Ok(())
}

/// 1/√(1−λ₂): the Hilbertian reference scale below every γ(A, d_X²) for
/// X embeddable in Hilbert space, up to an unspecified constant.
pub fn cheeger_reference(a: &StochasticMatrix) -> Result<BoundReport> {
    let s = a.eigen()?;
    let value = if s.lambda2 >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite(1.0 / (1.0 - s.lambda2).sqrt())
    };
    Ok(BoundReport {
        name: "cheeger-reference".into(),
        value,
        certified: false,
        inputs: json!({ "lambda2": s.lambda2 }),
    })
}

/// Extrapolated p-th power bound (C·p)^p / (1−λ₂)^{p/2}, p ≥ 2.
pub fn matousek_bound(a: &StochasticMatrix, p: f64, params: &BoundParams) -> Result<BoundReport> {
    require_p_at_least_two(p)?;
    params.validate()?;
    let s = a.eigen()?;
    let c = params.universal_c;
    let value = if s.lambda2 >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite((c * p).powf(p) / (1.0 - s.lambda2).powf(p / 2.0))
    };
    Ok(BoundReport {
        name: "matousek-extrapolation".into(),
        value,
        certified: false,
        inputs: json!({ "p": p, "lambda2": s.lambda2, "universalC": c }),
    })
}

/// γ(A, d_{ℓ_p}^p) bound: min of C·p²/(1−λ₂) and C·p/(1−λ(A)^{2/p}).
pub fn lp_gamma_bound(a: &StochasticMatrix, p: f64, params: &BoundParams) -> Result<BoundReport> {
    require_p_at_least_two(p)?;
    params.validate()?;
    let s = a.eigen()?;
    let c = params.universal_c;
    let first = if s.lambda2 >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite(c * p * p / (1.0 - s.lambda2))
    };
    // λ(A) ∈ [0,1] by definition of max{λ₂, −λ_n} on a stochastic spectrum
    // whenever λ₂ ≥ 0; a negative λ₂ with small |λ_n| can make it negative,
    // and the power of a negative base is avoided by clamping at 0.
    let lam = s.lambda_abs.max(0.0);
    let second = if lam >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite(c * p / (1.0 - lam.powf(2.0 / p)))
    };
    let value = first.min(second);
    Ok(BoundReport {
        name: "lp-gamma".into(),
        value,
        certified: false,
        inputs: json!({
            "p": p,
            "lambda2": s.lambda2,
            "lambdaAbs": s.lambda_abs,
            "universalC": c,
        }),
    })
}

/// Transfer of a spectral gap through a uniform homeomorphism of balls with
/// moduli α (lower) and β (upper):
/// 8^{q+1}·γ_Y + 8^q / β⁻¹( α(1/4) / (8·γ_Y^{1/q}) )^q.
pub fn ozawa_bound(
    gamma_y: f64,
    q: f64,
    alpha: &Modulus,
    beta_inverse: &Modulus,
) -> Result<BoundReport> {
    if !gamma_y.is_finite() || gamma_y < 1.0 {
        return Err(Error::BadParameter {
            name: "gamma_y",
            value: gamma_y,
            reason: "gap arguments are >= 1",
        });
    }
    if !q.is_finite() || q < 1.0 {
        return Err(Error::BadExponent {
            p: q,
            reason: "transfer bound needs finite q >= 1",
        });
    }
    let arg = alpha.eval(0.25) / (8.0 * gamma_y.powf(1.0 / q));
    let inv = beta_inverse.eval(arg);
    let value = if inv <= 0.0 {
        Value::Infinite
    } else {
        Value::Finite(8.0f64.powf(q + 1.0) * gamma_y + 8.0f64.powf(q) / inv.powf(q))
    };
    Ok(BoundReport {
        name: "uniform-homeomorphism-transfer".into(),
        value,
        certified: false,
        inputs: json!({ "gammaY": gamma_y, "q": q, "alphaQuarter": alpha.eval(0.25) }),
    })
}

/// Interpolation-space bound: with 1/s = θ/p + (1−θ)/q,
/// c^s (s^{s/r} + S_r^s) · ( min{ (9K_p)^p γ_X/θ, (9K_q)^q γ_Y/(1−θ) } )^{s/r}.
/// An endpoint θ ∈ {0,1} keeps only the surviving branch.
pub fn interpolation_bound(
    gamma_x: Value,
    gamma_y: Value,
    params: &BoundParams,
    p_exp: f64,
    q_exp: f64,
    r_exp: f64,
) -> Result<BoundReport> {
    params.validate()?;
    for v in [p_exp, q_exp, r_exp] {
        if !v.is_finite() || v < 1.0 {
            return Err(Error::BadExponent {
                p: v,
                reason: "interpolation exponents are finite and >= 1",
            });
        }
    }
    if r_exp > 2.0 {
        return Err(Error::BadExponent {
            p: r_exp,
            reason: "the smoothness exponent r lies in [1, 2]",
        });
    }
    for (name, g) in [("gamma_x", gamma_x), ("gamma_y", gamma_y)] {
        if let Value::Finite(v) = g {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::BadParameter {
                    name,
                    value: v,
                    reason: "gap arguments are nonnegative",
                });
            }
        }
    }
    let theta = params.theta;
    let s = 1.0 / (theta / p_exp + (1.0 - theta) / q_exp);
    let kp = params.convexity_const;
    let sq = params.smoothness_const;
    let c = params.universal_c;

    let branch_x = match gamma_x {
        Value::Infinite => Value::Infinite,
        Value::Finite(g) => {
            if theta == 0.0 {
                Value::Infinite
            } else {
                Value::Finite((9.0 * kp).powf(p_exp) * g / theta)
            }
        }
    };
    let branch_y = match gamma_y {
        Value::Infinite => Value::Infinite,
        Value::Finite(g) => {
            if theta == 1.0 {
                Value::Infinite
            } else {
                Value::Finite((9.0 * kp).powf(q_exp) * g / (1.0 - theta))
            }
        }
    };
    let inner = branch_x.min(branch_y);
    let value = match inner {
        Value::Infinite => Value::Infinite,
        Value::Finite(m) => Value::Finite(
            c.powf(s) * (s.powf(s / r_exp) + sq.powf(s)) * m.powf(s / r_exp),
        ),
    };
    Ok(BoundReport {
        name: "interpolation".into(),
        value,
        certified: false,
        inputs: json!({
            "gammaX": gamma_x, "gammaY": gamma_y, "theta": theta,
            "p": p_exp, "q": q_exp, "r": r_exp, "s": s,
            "convexityConst": kp, "smoothnessConst": sq, "universalC": c,
        }),
    })
}

/// Refined Markov-type sum C·p·Σ_{t<m} base^t with
/// base = 1 − (2/p)(1−λ₂) clamped to [0, 1].
pub fn refined_markov_bound(
    a: &StochasticMatrix,
    p: f64,
    m: u32,
    params: &BoundParams,
) -> Result<BoundReport> {
    require_p_at_least_two(p)?;
    params.validate()?;
    if m == 0 {
        return Err(Error::BadParameter {
            name: "m",
            value: 0.0,
            reason: "the time horizon is at least 1",
        });
    }
    let s = a.eigen()?;
    let base = (1.0 - (2.0 / p) * (1.0 - s.lambda2)).clamp(0.0, 1.0);
    let mut sum = 0.0;
    let mut pow = 1.0;
    for _ in 0..m {
        sum += pow;
        pow *= base;
    }
    let value = Value::Finite(params.universal_c * p * sum);
    Ok(BoundReport {
        name: "refined-markov".into(),
        value,
        certified: false,
        inputs: json!({ "p": p, "m": m, "lambda2": s.lambda2, "base": base }),
    })
}

/// Both smoothness-interpolation forms, in order:
/// S_q²/(1−λ(A)^θ)^{2/q} and (S_q²/θ^{2/q})·(1−λ₂)^{−2/q}, each times C.
pub fn smoothness_interp_bound(
    a: &StochasticMatrix,
    params: &BoundParams,
) -> Result<Vec<BoundReport>> {
    params.validate()?;
    if params.theta == 0.0 {
        return Err(Error::BadParameter {
            name: "theta",
            value: 0.0,
            reason: "smoothness interpolation needs theta in (0, 1]",
        });
    }
    let s = a.eigen()?;
    let q = params.q;
    let theta = params.theta;
    let sq2 = params.smoothness_const * params.smoothness_const;
    let c = params.universal_c;
    let lam = s.lambda_abs.max(0.0);
    let first = if lam >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite(c * sq2 / (1.0 - lam.powf(theta)).powf(2.0 / q))
    };
    let second = if s.lambda2 >= 1.0 {
        Value::Infinite
    } else {
        Value::Finite(
            c * (sq2 / theta.powf(2.0 / q)) / (1.0 - s.lambda2).powf(2.0 / q),
        )
    };
    let inputs = json!({
        "q": q, "theta": theta, "smoothnessConst": params.smoothness_const,
        "lambda2": s.lambda2, "lambdaAbs": s.lambda_abs, "universalC": c,
    });
    Ok(vec![
        BoundReport {
            name: "smoothness-interp-lambda-abs".into(),
            value: first,
            certified: false,
            inputs: inputs.clone(),
        },
        BoundReport {
            name: "smoothness-interp-lambda2".into(),
            value: second,
            certified: false,
            inputs,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> StochasticMatrix {
        StochasticMatrix::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    fn flat2() -> StochasticMatrix {
        // spectrum {1, 0}
        StochasticMatrix::new(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap()
    }

    #[test]
    fn cheeger_examples() {
        let r = cheeger_reference(&swap()).unwrap();
        assert!((r.value.finite().unwrap() - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        let r = cheeger_reference(&flat2()).unwrap();
        assert_eq!(r.value, Value::Finite(1.0));
        let (_, _, h3) = crate::metric::hamming_cube(3).unwrap();
        let r = cheeger_reference(&h3).unwrap();
        assert!((r.value.finite().unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn matousek_examples() {
        let params = BoundParams::default();
        let r = matousek_bound(&flat2(), 2.0, &params).unwrap();
        assert_eq!(r.value, Value::Finite(4.0));
        // λ₂ = 1/2 via (I + flat2)/2 spectrum {1, 1/2}
        let half = flat2().lazy();
        let r = matousek_bound(&half, 4.0, &params).unwrap();
        assert!((r.value.finite().unwrap() - 1024.0).abs() < 1e-9);
        let r = matousek_bound(&StochasticMatrix::identity(2), 2.0, &params).unwrap();
        assert_eq!(r.value, Value::Infinite);
        assert!(matousek_bound(&flat2(), 1.5, &params).is_err());
    }

    #[test]
    fn matousek_at_two_is_squared_cheeger_form() {
        let mut params = BoundParams::default();
        params.universal_c = 1.7;
        let a = flat2().lazy();
        let s = a.eigen().unwrap();
        let r = matousek_bound(&a, 2.0, &params).unwrap();
        let expect = (2.0 * 1.7) * (2.0 * 1.7) / (1.0 - s.lambda2);
        assert!((r.value.finite().unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn lp_gamma_examples() {
        let params = BoundParams::default();
        let r = lp_gamma_bound(&flat2(), 2.0, &params).unwrap();
        assert_eq!(r.value, Value::Finite(2.0));
        // spectrum {1, 1/2, -1/2, -1}: anti-diagonal blocks of spectrum {1, 1/2}
        let b = flat2().lazy();
        let anti = b.block_antidiagonal();
        let s = anti.eigen().unwrap();
        assert!((s.lambda2 - 0.5).abs() < 1e-12 && (s.lambda_abs - 1.0).abs() < 1e-12);
        let r = lp_gamma_bound(&anti, 4.0, &params).unwrap();
        assert!((r.value.finite().unwrap() - 32.0).abs() < 1e-9);
    }

    #[test]
    fn ozawa_frozen_values() {
        // q=1, identity moduli: 64 + 8/(1/32) = 320
        let r = ozawa_bound(1.0, 1.0, &Modulus::Identity, &Modulus::Identity).unwrap();
        assert!((r.value.finite().unwrap() - 320.0).abs() < 1e-9);
        // q=2 with the p=1 moduli α(t)=t/3, β(t)=2√t:
        // α(1/4)/8 = 1/96, β⁻¹(1/96) = (1/192)², so the second term is
        // 64·(192²)² and the total is 512 + 64·192⁴ = 86 973 088 256.
        let alpha = Modulus::lp_smoothness_alpha(1.0).unwrap();
        let beta_inv = Modulus::lp_smoothness_beta(1.0).unwrap().inverse().unwrap();
        let r = ozawa_bound(1.0, 2.0, &alpha, &beta_inv).unwrap();
        assert!((r.value.finite().unwrap() - 86_973_088_256.0).abs() < 1.0);
    }

    #[test]
    fn ozawa_zero_inverse_is_infinite() {
        let beta_inv = Modulus::table(vec![(1.0, 0.0), (2.0, 1.0)]).unwrap();
        // below the table the linear extension clamps at 0
        let r = ozawa_bound(1.0, 2.0, &Modulus::Identity, &beta_inv).unwrap();
        assert_eq!(r.value, Value::Infinite);
    }

    #[test]
    fn interpolation_frozen_value() {
        let params = BoundParams {
            theta: 0.5,
            ..BoundParams::default()
        };
        let r = interpolation_bound(
            Value::Finite(1.0),
            Value::Finite(1.0),
            &params,
            2.0,
            2.0,
            2.0,
        )
        .unwrap();
        assert!((r.value.finite().unwrap() - 486.0).abs() < 1e-9);
    }

    #[test]
    fn interpolation_endpoints_and_infinities() {
        let params = BoundParams {
            theta: 1.0,
            ..BoundParams::default()
        };
        // θ=1: s=p=2, only the X branch: (2+1)·(81·γ_X)^1
        let r = interpolation_bound(
            Value::Finite(2.0),
            Value::Infinite,
            &params,
            2.0,
            2.0,
            2.0,
        )
        .unwrap();
        assert!((r.value.finite().unwrap() - 3.0 * 162.0).abs() < 1e-9);
        // infinite γ_X forces the Y branch
        let params = BoundParams {
            theta: 0.5,
            ..BoundParams::default()
        };
        let r = interpolation_bound(
            Value::Infinite,
            Value::Finite(1.0),
            &params,
            2.0,
            2.0,
            2.0,
        )
        .unwrap();
        assert!((r.value.finite().unwrap() - 486.0).abs() < 1e-9);
    }

    #[test]
    fn refined_markov_examples() {
        let params = BoundParams::default();
        // λ₂ = 1: sum of m ones
        let r = refined_markov_bound(&StochasticMatrix::identity(2), 4.0, 7, &params).unwrap();
        assert_eq!(r.value, Value::Finite(4.0 * 7.0));
        // p=2, λ₂=0: base clamps to 0, single term
        let r = refined_markov_bound(&flat2(), 2.0, 5, &params).unwrap();
        assert_eq!(r.value, Value::Finite(2.0));
        let r = refined_markov_bound(&flat2().lazy(), 3.0, 1, &params).unwrap();
        assert_eq!(r.value, Value::Finite(3.0));
        assert!(refined_markov_bound(&flat2(), 2.0, 0, &params).is_err());
    }

    #[test]
    fn smoothness_interp_examples() {
        // λ(A) = 1/2, θ=1, q=2, S=1: first form 1/(1−1/2) = 2
        let half = flat2().lazy();
        let params = BoundParams::default();
        let reports = smoothness_interp_bound(&half, &params).unwrap();
        assert!((reports[0].value.finite().unwrap() - 2.0).abs() < 1e-12);
        // λ₂ = 0: second form is S²
        let reports = smoothness_interp_bound(&flat2(), &params).unwrap();
        assert_eq!(reports[1].value, Value::Finite(1.0));
    }

    #[test]
    fn power_modulus_inverse_roundtrip() {
        let m = Modulus::power(2.0, 0.5).unwrap();
        let inv = m.inverse().unwrap();
        for t in [0.01, 0.5, 1.0, 7.0] {
            assert!((inv.eval(m.eval(t)) - t).abs() < 1e-12);
        }
        let table = Modulus::table(vec![(0.0, 0.0), (1.0, 3.0), (2.0, 10.0)]).unwrap();
        let tinv = table.inverse().unwrap();
        assert!((tinv.eval(3.0) - 1.0).abs() < 1e-12);
        assert!((table.eval(1.5) - 6.5).abs() < 1e-12);
    }
}

//! Coordinatewise power maps M_{p,q}(f) = |f|^{p/q} sign(f) between unit
//! balls of finite-dimensional sequence spaces, with the two-sided modulus
//!   ‖f−g‖_p^{p/q} / 2^{(p−q)/q}  ≤  ‖M f − M g‖_q  ≤  2^{1/q−1/p}(p/q)‖f−g‖_p
//! for p ≥ q. Norms use the normalized counting measure: the 1/dimension
//! weight is folded into every norm here.

use serde::Serialize;

use crate::bounds::Modulus;
use crate::error::{Error, Result};

fn check_exponent(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 1.0 {
        return Err(Error::BadParameter {
            name,
            value: v,
            reason: "power-map exponents are finite and >= 1",
        });
    }
    Ok(())
}

/// ‖f‖_p under the normalized counting measure: ((1/d) Σ|fᵢ|^p)^{1/p}.
pub fn normalized_lp_norm(f: &[f64], p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    if f.is_empty() {
        return Err(Error::Degenerate("empty sequence has no norm".into()));
    }
    let d = f.len() as f64;
    let sum: f64 = f.iter().map(|x| x.abs().powf(p)).sum();
    Ok((sum / d).powf(1.0 / p))
}

/// |fᵢ|^{p/q}·sign(fᵢ) coordinatewise, with sign(0) = 0. Inverse is the
/// map with exponents swapped.
pub fn mazur_map(f: &[f64], p: f64, q: f64) -> Result<Vec<f64>> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let e = p / q;
    Ok(f.iter()
        .map(|&x| {
            if x == 0.0 {
                0.0
            } else {
                x.abs().powf(e) * x.signum()
            }
        })
        .collect())
}

/// The two modulus functions of M_{p,q} for p ≥ q, as closed forms.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MazurModuli {
    pub p: f64,
    pub q: f64,
}

impl MazurModuli {
    pub fn new(p: f64, q: f64) -> Result<MazurModuli> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        if p < q {
            return Err(Error::BadParameter {
                name: "q",
                value: q,
                reason: "moduli are stated for p >= q",
            });
        }
        Ok(MazurModuli { p, q })
    }

    /// Lower modulus t ↦ t^{p/q} / 2^{(p−q)/q}.
    pub fn alpha_lower(&self, t: f64) -> f64 {
        t.powf(self.p / self.q) / 2.0f64.powf((self.p - self.q) / self.q)
    }

    /// Upper modulus t ↦ 2^{1/q−1/p}(p/q)·t.
    pub fn beta_upper(&self, t: f64) -> f64 {
        2.0f64.powf(1.0 / self.q - 1.0 / self.p) * (self.p / self.q) * t
    }

    /// The lower modulus as a reusable function handle.
    pub fn alpha_handle(&self) -> Result<Modulus> {
        Modulus::power(
            2.0f64.powf(-(self.p - self.q) / self.q),
            self.p / self.q,
        )
    }

    /// The upper modulus as a reusable function handle.
    pub fn beta_handle(&self) -> Result<Modulus> {
        Modulus::power(
            2.0f64.powf(1.0 / self.q - 1.0 / self.p) * self.p / self.q,
            1.0,
        )
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModulusCheck {
    /// α(‖f−g‖_p): the lower estimate.
    pub lower: f64,
    /// ‖Mf − Mg‖_q: the middle quantity.
    pub middle: f64,
    /// β(‖f−g‖_p): the upper estimate.
    pub upper: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// middle − lower and upper − middle; nonnegative when the sides hold.
    pub lower_margin: f64,
    pub upper_margin: f64,
}

const MODULUS_SLACK: f64 = 1e-9;

/// Checks both sides of the modulus inequality for a pair in the unit ball
/// of the normalized-measure ℓ_p space.
pub fn modulus_check(f: &[f64], g: &[f64], p: f64, q: f64) -> Result<ModulusCheck> {
    let moduli = MazurModuli::new(p, q)?;
    if f.len() != g.len() {
        return Err(Error::SizeMismatch {
            left_what: "f",
            left: f.len(),
            right_what: "g",
            right: g.len(),
        });
    }
    for (name, v) in [("f", f), ("g", g)] {
        let norm = normalized_lp_norm(v, p)?;
        if norm > 1.0 + 1e-12 {
            return Err(Error::BadParameter {
                name,
                value: norm,
                reason: "modulus check needs points of the unit ball",
            });
        }
    }
    let diff: Vec<f64> = f.iter().zip(g).map(|(a, b)| a - b).collect();
    let dist_p = normalized_lp_norm(&diff, p)?;
    let mf = mazur_map(f, p, q)?;
    let mg = mazur_map(g, p, q)?;
    let mdiff: Vec<f64> = mf.iter().zip(&mg).map(|(a, b)| a - b).collect();
    let middle = normalized_lp_norm(&mdiff, q)?;
    let lower = moduli.alpha_lower(dist_p);
    let upper = moduli.beta_upper(dist_p);
    Ok(ModulusCheck {
        lower,
        middle,
        upper,
        lower_ok: lower <= middle + MODULUS_SLACK,
        upper_ok: middle <= upper + MODULUS_SLACK,
        lower_margin: middle - lower,
        upper_margin: upper - middle,
    })
}

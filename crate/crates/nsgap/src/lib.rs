//! Nonlinear spectral gaps of symmetric stochastic matrices.
//!
//! A symmetric stochastic matrix A and a finite metric space (X,d) define the
//! Poincaré constant γ(A,dᵖ): the least γ such that for every x₁,…,x_n ∈ X
//!
//! ```text
//!   (1/n²) Σᵢⱼ d(xᵢ,xⱼ)ᵖ  ≤  (γ/n) Σᵢⱼ aᵢⱼ d(xᵢ,xⱼ)ᵖ.
//! ```
//!
//! For the real line with p = 2 this collapses to the linear gap 1/(1−λ₂(A));
//! for general targets it is a genuinely nonlinear quantity. This crate
//! computes γ and its two-configuration variant γ₊ exactly on finite spaces,
//! evaluates the closed-form upper and lower bounds that relate them to the
//! linear spectrum (Cheeger, extrapolation, ℓ_p estimates, interpolation,
//! Markov-type sums), and constructs the average-distortion embeddings that
//! witness the comparison theorems: line embeddings from random zero sets,
//! Bourgain-style coordinate embeddings, spread-constant SDP relaxations, and
//! LP duality certificates.
//!
//! Everything is deterministic given explicit seeds; randomized paths use a
//! counter-based splittable generator so sweep cells reproduce independently.

pub mod bounds;
pub mod cube;
pub mod embed;
pub mod error;
pub mod gamma;
pub mod graphs;
pub mod io;
pub mod markov;
pub mod mazur;
pub mod metric;
pub mod numeric;
pub mod spectral;

pub use error::{Error, Result};

/// Every fixed tolerance in one place. These are contract constants, not
/// per-call knobs; code refers to `TOL.field` so the values stay consistent
/// between validation, tests, and reports.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Largest accepted |a_ij - a_ji| before symmetrization on ingest.
    pub asymmetry: f64,
    /// Row sums of a stochastic matrix vs 1.
    pub row_sum: f64,
    /// Triangle inequality slack for metric validation.
    pub triangle: f64,
    /// Slack on |λ₁ - 1| and on the [-1,1] range of a stochastic spectrum.
    pub spectral_unit: f64,
    /// Floor on Gram-matrix eigenvalues accepted as PSD.
    pub psd_floor: f64,
    /// Slack on SDP pair constraints.
    pub sdp_constraint: f64,
}

pub const TOL: Tolerances = Tolerances {
    asymmetry: 1e-8,
    row_sum: 1e-10,
    triangle: 1e-9,
    spectral_unit: 1e-9,
    psd_floor: 1e-7,
    sdp_constraint: 1e-7,
};

/// A nonnegative extended real. Infinities are explicit, never encoded as
/// float sentinels; arithmetic that could overflow to f64::INFINITY must
/// convert deliberately. Serializes as a bare number, or the string "inf".
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Finite(f64),
    Infinite,
}

impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Finite(v) => s.serialize_f64(*v),
            Value::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Value, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) if v.is_finite() => Ok(Value::Finite(v)),
            Raw::Number(_) => Err(serde::de::Error::custom(
                "non-finite numbers are spelled \"inf\"",
            )),
            Raw::Name(s) if s.eq_ignore_ascii_case("inf") => Ok(Value::Infinite),
            Raw::Name(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

impl Value {
    pub fn is_finite(self) -> bool {
        matches!(self, Value::Finite(_))
    }

    /// Finite payload, or None.
    pub fn finite(self) -> Option<f64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    /// Order with Infinite greater than every finite value.
    pub fn ge(self, other: Value) -> bool {
        match (self, other) {
            (Value::Infinite, _) => true,
            (_, Value::Infinite) => false,
            (Value::Finite(a), Value::Finite(b)) => a >= b,
        }
    }

    pub fn gt(self, other: Value) -> bool {
        self.ge(other) && self != other
    }

    pub fn scale(self, c: f64) -> Value {
        match self {
            Value::Finite(v) => Value::Finite(c * v),
            Value::Infinite => Value::Infinite,
        }
    }

    pub fn min(self, other: Value) -> Value {
        if self.ge(other) {
            other
        } else {
            self
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

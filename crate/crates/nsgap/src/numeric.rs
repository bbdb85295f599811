//! Small numeric helpers shared across modules: deterministic pairwise
//! summation, exact binomial coefficients, and the seed-splitting rule for
//! the crate's counter-based RNG.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pairwise (tree) summation. Deterministic for a fixed slice, and the
/// reduction order is independent of thread count because callers always
/// materialize terms in index order first.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Binomial coefficient as f64; exact for every (n,k) this crate touches
/// (n ≤ 64 keeps intermediate products well inside 2^53 after each division).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// The crate's RNG: ChaCha8 keyed by the user seed, with the stream index
/// acting as a counter. Distinct cells of one experiment get distinct
/// streams, so any cell reproduces in isolation regardless of scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// max |xs[i] - ys[i]|, assuming equal lengths.
pub fn max_abs_diff(xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_smooth_data() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(14, 7), 3432.0);
        assert_eq!(binomial(5, 9), 0.0);
        // above 2^53 the value is approximate; one ulp of drift is fine
        let big = binomial(64, 32);
        assert!((big / 1832624140942590534.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rng_streams_are_independent_of_call_order() {
        use rand::RngCore;
        let mut a = rng_for(7, 3);
        let first = a.next_u64();
        let mut b = rng_for(7, 2);
        let _ = b.next_u64();
        let mut c = rng_for(7, 3);
        assert_eq!(first, c.next_u64());
    }
}

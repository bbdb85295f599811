//! Phase-one simplex for the mixture feasibility problem: find μ ≥ 0 with
//! Σ_k μ_k c^k ≤ t componentwise and Σ_k μ_k = 1. Slacks start basic on the
//! inequality rows, one artificial variable covers the convexity row, and
//! Bland's rule keeps the walk finite. Infeasibility hands back the Farkas
//! dual read off the final reduced costs.

const EPS: f64 = 1e-11;

/// Outcome of the feasibility solve. When `feasible`, `weights` is a basic
/// solution; otherwise the duals satisfy, with h_r = −dual_pairs[r] ≥ 0 and
/// λ = dual_convexity: hᵀc^k ≥ λ for every column and hᵀt < λ.
pub(crate) struct PhaseOne {
    pub feasible: bool,
    /// phase-I optimum; zero (within tolerance) exactly when feasible
    #[allow(dead_code)]
    pub infeasibility: f64,
    pub weights: Vec<f64>,
    pub dual_pairs: Vec<f64>,
    pub dual_convexity: f64,
}

pub(crate) fn solve_feasibility(columns: &[Vec<f64>], targets: &[f64]) -> PhaseOne {
    let rows = targets.len();
    let k = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    debug_assert!(targets.iter().all(|&t| t >= 0.0));
    let slack0 = k;
    let artificial = k + rows;
    let width = k + rows + 1;

    // tableau[r] has `width` structural coefficients plus the rhs
    let mut tableau: Vec<Vec<f64>> = Vec::with_capacity(rows + 1);
    for r in 0..rows {
        let mut row = vec![0.0; width + 1];
        for (j, col) in columns.iter().enumerate() {
            row[j] = col[r];
        }
        row[slack0 + r] = 1.0;
        row[width] = targets[r];
        tableau.push(row);
    }
    let mut convexity = vec![0.0; width + 1];
    for j in 0..k {
        convexity[j] = 1.0;
    }
    convexity[artificial] = 1.0;
    convexity[width] = 1.0;
    tableau.push(convexity);

    let mut basis: Vec<usize> = (0..rows).map(|r| slack0 + r).collect();
    basis.push(artificial);

    // reduced costs for minimizing the artificial variable: z = c − y·A
    // with the artificial basic, i.e. the cost row minus the convexity row
    let mut reduced = vec![0.0; width];
    for (j, z) in reduced.iter_mut().enumerate() {
        let cost = if j == artificial { 1.0 } else { 0.0 };
        *z = cost - tableau[rows][j];
    }

    loop {
        let Some(entering) = (0..width).find(|&j| reduced[j] < -EPS) else {
            break;
        };
        let mut leaving: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for (r, row) in tableau.iter().enumerate() {
            if row[entering] > EPS {
                let ratio = row[width] / row[entering];
                let better = match leaving {
                    None => true,
                    Some(prev) => {
                        ratio < best_ratio - EPS
                            || (ratio < best_ratio + EPS && basis[r] < basis[prev])
                    }
                };
                if better {
                    best_ratio = ratio;
                    leaving = Some(r);
                }
            }
        }
        let leaving = leaving.expect("phase one is bounded: some coefficient must be positive");
        let pivot = tableau[leaving][entering];
        for entry in tableau[leaving].iter_mut() {
            *entry /= pivot;
        }
        let pivot_row = tableau[leaving].clone();
        for (r, row) in tableau.iter_mut().enumerate() {
            if r == leaving {
                continue;
            }
            let factor = row[entering];
            if factor != 0.0 {
                for (entry, &p) in row.iter_mut().zip(&pivot_row) {
                    *entry -= factor * p;
                }
            }
        }
        let factor = reduced[entering];
        for (z, &p) in reduced.iter_mut().zip(&pivot_row) {
            *z -= factor * p;
        }
        basis[leaving] = entering;
    }

    let mut infeasibility = 0.0;
    let mut weights = vec![0.0; k];
    for (r, &b) in basis.iter().enumerate() {
        let v = tableau[r][width].max(0.0);
        if b == artificial {
            infeasibility = v;
        } else if b < k {
            weights[b] = v;
        }
    }
    let feasible = infeasibility <= 1e-9;
    let dual_pairs: Vec<f64> = (0..rows).map(|r| -reduced[slack0 + r]).collect();
    let dual_convexity = 1.0 - reduced[artificial];
    PhaseOne {
        feasible,
        infeasibility,
        weights,
        dual_pairs,
        dual_convexity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splittable_demand_is_feasible() {
        let columns = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let targets = vec![0.6, 0.6];
        let out = solve_feasibility(&columns, &targets);
        assert!(out.feasible);
        let total: f64 = out.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        for r in 0..2 {
            let mix: f64 = (0..2).map(|j| out.weights[j] * columns[j][r]).sum();
            assert!(mix <= targets[r] + 1e-9);
        }
    }

    #[test]
    fn oversized_single_column_yields_a_farkas_dual() {
        let columns = vec![vec![2.0]];
        let targets = vec![1.0];
        let out = solve_feasibility(&columns, &targets);
        assert!(!out.feasible);
        assert!(out.infeasibility > 0.1);
        let h = -out.dual_pairs[0];
        let lambda = out.dual_convexity;
        assert!(h >= -1e-12);
        assert!(h * 2.0 >= lambda - 1e-9, "h {h}, lambda {lambda}");
        assert!(h * 1.0 < lambda, "h {h}, lambda {lambda}");
    }

    #[test]
    fn no_columns_is_infeasible_with_trivial_dual() {
        let out = solve_feasibility(&[], &[1.0, 2.0]);
        assert!(!out.feasible);
        assert!((out.infeasibility - 1.0).abs() < 1e-12);
        assert!(out.dual_pairs.iter().all(|&y| y.abs() < 1e-12));
        assert!((out.dual_convexity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tight_equality_mixture_is_found() {
        // only the even mixture of the two columns fits under the target
        let columns = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let targets = vec![0.5, 0.5];
        let out = solve_feasibility(&columns, &targets);
        assert!(out.feasible);
        assert!((out.weights[0] - 0.5).abs() < 1e-9);
        assert!((out.weights[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_targets_force_zero_columns() {
        // any column with mass on a zero row is unusable; the only unit
        // mixture is the third column
        let columns = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]];
        let targets = vec![0.0, 0.0];
        let out = solve_feasibility(&columns, &targets);
        assert!(out.feasible);
        assert!((out.weights[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_duals_separate_every_column() {
        let columns = vec![vec![3.0, 1.0], vec![1.0, 3.0], vec![2.0, 2.0]];
        let targets = vec![0.5, 0.5];
        let out = solve_feasibility(&columns, &targets);
        assert!(!out.feasible);
        let h: Vec<f64> = out.dual_pairs.iter().map(|&y| -y).collect();
        let lambda = out.dual_convexity;
        assert!(h.iter().all(|&v| v >= -1e-12));
        for col in &columns {
            let dot: f64 = h.iter().zip(col).map(|(a, b)| a * b).sum();
            assert!(dot >= lambda - 1e-9, "column {col:?}: {dot} < {lambda}");
        }
        let dot_t: f64 = h.iter().zip(&targets).map(|(a, b)| a * b).sum();
        assert!(dot_t < lambda);
    }
}

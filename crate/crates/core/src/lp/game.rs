use super::{solve_lp, LinearProgram, LpStatus, Relation, Sense};

/// Optimal mixed strategies and value of a finite zero-sum game.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGameSolution {
    /// Distribution over rows (the minimizing player).
    pub row_mix: Vec<f64>,
    /// Distribution over columns (the maximizing player).
    pub col_mix: Vec<f64>,
    pub value: f64,
}

impl MatrixGameSolution {
    /// `max_j Σ_i y_i A(i,j)`: what the row mix concedes against the best column.
    pub fn row_guarantee(&self, payoff: &[Vec<f64>]) -> f64 {
        let cols = payoff[0].len();
        (0..cols)
            .map(|j| {
                payoff
                    .iter()
                    .zip(&self.row_mix)
                    .map(|(row, y)| y * row[j])
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_i Σ_j w_j A(i,j)`: what the column mix secures against the best row.
    pub fn col_guarantee(&self, payoff: &[Vec<f64>]) -> f64 {
        payoff
            .iter()
            .map(|row| row.iter().zip(&self.col_mix).map(|(a, w)| a * w).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Solves `min_y max_w yᵀ A w` where the row player minimizes.
///
/// With `A' = A + κ ≥ 1`, the substitution `x = y / v'` turns the row player's
/// problem into `max Σ x  s.t.  Σ_i x_i A'(i,j) ≤ 1  ∀j,  x ≥ 0`, whose slack basis
/// is feasible. Then `v' = 1 / Σ x`, the value is `v' - κ`, and the column mix is
/// the normalized dual vector.
///
/// Panics on an empty or ragged matrix, or on non-finite payoffs.
pub fn solve_matrix_game(payoff: &[Vec<f64>]) -> MatrixGameSolution {
    let rows = payoff.len();
    assert!(rows > 0, "payoff matrix has no rows");
    let cols = payoff[0].len();
    assert!(cols > 0, "payoff matrix has no columns");
    assert!(payoff.iter().all(|r| r.len() == cols), "ragged payoff matrix");
    let lowest = payoff.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    assert!(lowest.is_finite(), "payoff entries must be finite");
    let kappa = 1.0 - lowest;

    let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0; rows]);
    for j in 0..cols {
        let coeffs: Vec<f64> = payoff.iter().map(|r| r[j] + kappa).collect();
        lp.add_constraint(coeffs, Relation::LessEq, 1.0);
    }
    let sol = solve_lp(&lp).expect("payoff entries must be finite");
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "a finite matrix game always has a value"
    );
    let row_mix = to_distribution(sol.primal.iter().copied());
    let col_mix = to_distribution(sol.dual.iter().copied());
    // report the guarantee of the recovered mix rather than 1/Σx - κ
    let shifted = MatrixGameSolution {
        row_mix,
        col_mix,
        value: 0.0,
    };
    let value = shifted.row_guarantee(payoff);
    MatrixGameSolution { value, ..shifted }
}

fn to_distribution(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut w: Vec<f64> = weights.map(|x| x.max(0.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x, y, epsilon = tol);
        }
    }

    #[test]
    fn matching_pennies() {
        let g = solve_matrix_game(&[vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert_abs_diff_eq!(g.value, 0.0, epsilon = 1e-12);
        close(&g.row_mix, &[0.5, 0.5], 1e-12);
        close(&g.col_mix, &[0.5, 0.5], 1e-12);
    }

    #[test]
    fn one_by_one() {
        let g = solve_matrix_game(&[vec![5.0]]);
        assert_abs_diff_eq!(g.value, 5.0, epsilon = 1e-12);
        assert_eq!(g.row_mix, vec![1.0]);
        assert_eq!(g.col_mix, vec![1.0]);
    }

    #[test]
    fn two_by_two_equalization() {
        // rows equalize columns: 3 y2 = 2 y1 + y2 → y = (1/2, 1/2), v = 3/2;
        // columns equalize rows: 2 w2 = 3 w1 + w2 → w = (1/4, 3/4)
        let a = [vec![0.0, 2.0], vec![3.0, 1.0]];
        let g = solve_matrix_game(&a);
        assert_abs_diff_eq!(g.value, 1.5, epsilon = 1e-12);
        close(&g.row_mix, &[0.5, 0.5], 1e-12);
        close(&g.col_mix, &[0.25, 0.75], 1e-12);
    }

    #[test]
    fn dominated_strategies_get_no_weight() {
        // row 1 is worse than row 0 everywhere for the minimizer
        let a = [vec![1.0, 2.0], vec![3.0, 4.0]];
        let g = solve_matrix_game(&a);
        assert_abs_diff_eq!(g.value, 2.0, epsilon = 1e-12);
        close(&g.row_mix, &[1.0, 0.0], 1e-12);
        close(&g.col_mix, &[0.0, 1.0], 1e-12);
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-10.0f64..10.0, c), r)
        })
    }

    proptest! {
        #[test]
        fn mixes_certify_the_value(a in arb_matrix()) {
            let g = solve_matrix_game(&a);
            prop_assert!((g.row_guarantee(&a) - g.value).abs() <= 1e-9);
            prop_assert!((g.col_guarantee(&a) - g.value).abs() <= 1e-9);
        }

        #[test]
        fn negated_transpose_negates_value(a in arb_matrix()) {
            let t: Vec<Vec<f64>> = (0..a[0].len())
                .map(|j| a.iter().map(|row| -row[j]).collect())
                .collect();
            let v = solve_matrix_game(&a).value;
            let vt = solve_matrix_game(&t).value;
            prop_assert!((v + vt).abs() <= 1e-9, "{} vs {}", v, vt);
        }

        #[test]
        fn constant_shift_shifts_value(a in arb_matrix(), kappa in -20.0f64..20.0) {
            let shifted: Vec<Vec<f64>> =
                a.iter().map(|r| r.iter().map(|x| x + kappa).collect()).collect();
            let v = solve_matrix_game(&a).value;
            let vs = solve_matrix_game(&shifted).value;
            prop_assert!((vs - v - kappa).abs() <= 1e-9);
        }
    }
}

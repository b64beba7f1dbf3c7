//! Dense linear programming with primal and dual solutions, and a matrix-game
//! solver built on top of it.
//!
//! Problems here are small: restricted games with tens of strategies and
//! row-generation master problems with tens of cuts. A dense two-phase tableau
//! with Bland's rule is plenty, and it yields exact row duals from the final
//! basis.

mod game;
mod simplex;

pub use game::{solve_matrix_game, MatrixGameSolution};

use thiserror::Error;

/// Pivot elements smaller than this are never used.
pub const PIVOT_TOLERANCE: f64 = 1e-9;

/// Reduced costs above `-OPTIMALITY_TOLERANCE` count as nonnegative.
pub const OPTIMALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Equal,
    GreaterEq,
}

/// Variable bounds; `None` means unbounded in that direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarBounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl VarBounds {
    pub const NONNEGATIVE: VarBounds = VarBounds {
        lower: Some(0.0),
        upper: None,
    };
    pub const FREE: VarBounds = VarBounds {
        lower: None,
        upper: None,
    };

    pub fn between(lower: f64, upper: f64) -> Self {
        VarBounds {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `min/max c·x  s.t.  A x (≤|=|≥) b,  l ≤ x ≤ u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("bounds given for {found} variables, expected {expected}")]
    BoundsMismatch { expected: usize, found: usize },
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
}

impl LinearProgram {
    /// A problem over `objective.len()` nonnegative variables with no constraints yet.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let bounds = vec![VarBounds::NONNEGATIVE; objective.len()];
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> usize {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, bounds: VarBounds) {
        self.bounds[var] = bounds;
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(LpError::BoundsMismatch {
                expected: n,
                found: self.bounds.len(),
            });
        }
        if !self.objective.iter().all(|c| c.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        for (row, con) in self.constraints.iter().enumerate() {
            if con.coeffs.len() != n {
                return Err(LpError::DimensionMismatch {
                    row,
                    expected: n,
                    found: con.coeffs.len(),
                });
            }
            if !con.rhs.is_finite() || !con.coeffs.iter().all(|a| a.is_finite()) {
                return Err(LpError::NonFinite("constraint"));
            }
        }
        for b in &self.bounds {
            if b.lower.is_some_and(|l| !l.is_finite()) || b.upper.is_some_and(|u| !u.is_finite())
            {
                return Err(LpError::NonFinite("bounds"));
            }
        }
        Ok(())
    }

    fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.constraints[row]
            .coeffs
            .iter()
            .zip(x)
            .map(|(a, x)| a * x)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The pivot budget of `10·(rows+cols)²` ran out.
    IterationLimit,
}

/// Result of [`solve_lp`].
///
/// `dual[i]` is the sensitivity of the optimal objective to `rhs[i]`: for a
/// minimization, `≥` rows have nonnegative duals and `≤` rows nonpositive ones;
/// the signs flip for a maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// Optimality certificate measured against the original problem data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// Largest `|dual_i · slack_i|`.
    pub complementarity: f64,
}

impl Certificate {
    pub fn duality_gap(&self) -> f64 {
        (self.primal_objective - self.dual_objective).abs()
    }
}

impl LpSolution {
    /// Recomputes primal feasibility, dual feasibility and both objective values.
    pub fn certificate(&self, lp: &LinearProgram) -> Certificate {
        let x = &self.primal;
        let mut primal_inf: f64 = 0.0;
        let mut complementarity: f64 = 0.0;
        for (i, con) in lp.constraints.iter().enumerate() {
            let act = lp.row_activity(i, x);
            let violation = match con.relation {
                Relation::LessEq => act - con.rhs,
                Relation::GreaterEq => con.rhs - act,
                Relation::Equal => (act - con.rhs).abs(),
            };
            primal_inf = primal_inf.max(violation);
            complementarity = complementarity.max((self.dual[i] * (act - con.rhs)).abs());
        }
        for (j, b) in lp.bounds.iter().enumerate() {
            if let Some(l) = b.lower {
                primal_inf = primal_inf.max(l - x[j]);
            }
            if let Some(u) = b.upper {
                primal_inf = primal_inf.max(x[j] - u);
            }
        }

        // work in minimization form
        let flip = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
        let y: Vec<f64> = self.dual.iter().map(|d| flip * d).collect();
        let mut dual_inf: f64 = 0.0;
        let mut dual_obj = 0.0;
        for (i, con) in lp.constraints.iter().enumerate() {
            dual_obj += con.rhs * y[i];
            let wrong_sign = match con.relation {
                Relation::GreaterEq => (-y[i]).max(0.0),
                Relation::LessEq => y[i].max(0.0),
                Relation::Equal => 0.0,
            };
            dual_inf = dual_inf.max(wrong_sign);
        }
        for (j, b) in lp.bounds.iter().enumerate() {
            let reduced = flip * lp.objective[j]
                - lp.constraints
                    .iter()
                    .zip(&y)
                    .map(|(con, yi)| con.coeffs[j] * yi)
                    .sum::<f64>();
            if reduced > 0.0 {
                match b.lower {
                    Some(l) => dual_obj += reduced * l,
                    None => dual_inf = dual_inf.max(reduced),
                }
            } else if reduced < 0.0 {
                match b.upper {
                    Some(u) => dual_obj += reduced * u,
                    None => dual_inf = dual_inf.max(-reduced),
                }
            }
        }
        let primal_obj: f64 = lp.objective.iter().zip(x).map(|(c, x)| c * x).sum();
        Certificate {
            primal_infeasibility: primal_inf.max(0.0),
            dual_infeasibility: dual_inf,
            primal_objective: primal_obj,
            dual_objective: flip * dual_obj,
            complementarity,
        }
    }
}

/// Two-phase primal simplex on a dense tableau with Bland's rule throughout.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    Ok(simplex::solve(lp))
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    fn assert_certified(lp: &LinearProgram, sol: &LpSolution) {
        assert_eq!(sol.status, LpStatus::Optimal);
        let cert = sol.certificate(lp);
        assert!(cert.primal_infeasibility <= 1e-7, "{cert:?}");
        assert!(cert.dual_infeasibility <= 1e-7, "{cert:?}");
        assert!(cert.duality_gap() <= 1e-6, "{cert:?}");
        assert!(cert.complementarity <= 1e-6, "{cert:?}");
        assert_abs_diff_eq!(cert.primal_objective, sol.objective, epsilon = 1e-9);
    }

    #[test]
    fn single_lower_bound_row() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add_constraint(vec![1.0], Relation::GreaterEq, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_certified(&lp, &sol);
        assert_abs_diff_eq!(sol.primal[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.dual[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unbounded_maximization() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add_constraint(vec![1.0], Relation::GreaterEq, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn two_by_two_with_equality() {
        // x1 + x2 >= 2, x1 - x2 = 0: x=(1,1). Complementary slackness with both
        // x_j basic gives y1 + y2 = 1 and y1 - y2 = 1, so y = (1, 0).
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::GreaterEq, 2.0);
        lp.add_constraint(vec![1.0, -1.0], Relation::Equal, 0.0);
        let sol = solve_lp(&lp).unwrap();
        assert_certified(&lp, &sol);
        assert_abs_diff_eq!(sol.primal[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.primal[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.objective, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.dual[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.dual[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_rows() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::LessEq, 1.0);
        lp.add_constraint(vec![1.0, 1.0], Relation::GreaterEq, 2.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn crossed_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.set_bounds(0, VarBounds::between(2.0, 1.0));
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn free_and_boxed_variables() {
        // max x + y, x free, -1 <= y <= 3, x + y <= 5, x - y <= 1: optimal face x + y = 5
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.set_bounds(0, VarBounds::FREE);
        lp.set_bounds(1, VarBounds::between(-1.0, 3.0));
        lp.add_constraint(vec![1.0, 1.0], Relation::LessEq, 5.0);
        lp.add_constraint(vec![1.0, -1.0], Relation::LessEq, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_certified(&lp, &sol);
        assert_abs_diff_eq!(sol.objective, 5.0, epsilon = 1e-9);
    }

    #[test]
    fn upper_bound_only_variable() {
        // min -x with x <= 4 and no lower bound: x = 4
        let mut lp = LinearProgram::new(Sense::Minimize, vec![-1.0]);
        lp.set_bounds(
            0,
            VarBounds {
                lower: None,
                upper: Some(4.0),
            },
        );
        let sol = solve_lp(&lp).unwrap();
        assert_certified(&lp, &sol);
        assert_abs_diff_eq!(sol.primal[0], 4.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_redundant_equalities() {
        // the same equality twice leaves an artificial in a zero row
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 2.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Equal, 1.0);
        lp.add_constraint(vec![2.0, 2.0], Relation::Equal, 2.0);
        let sol = solve_lp(&lp).unwrap();
        assert_certified(&lp, &sol);
        assert_abs_diff_eq!(sol.objective, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn negative_rhs_rows_flip_correctly() {
        // min x s.t. -x <= -3  (x >= 3), dual of the <= row is -1
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.add_constraint(vec![-1.0], Relation::LessEq, -3.0);
        let sol = solve_lp(&lp).unwrap();
        assert_certified(&lp, &sol);
        assert_abs_diff_eq!(sol.primal[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.dual[0], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_malformed_problems() {
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0], Relation::LessEq, 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::DimensionMismatch { .. })));
        let lp = LinearProgram::new(Sense::Minimize, vec![f64::NAN]);
        assert_eq!(solve_lp(&lp), Err(LpError::NonFinite("objective")));
    }

    fn arb_lp() -> impl Strategy<Value = LinearProgram> {
        (1usize..5, 1usize..6).prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(-5i32..=5, n),
                prop::collection::vec((prop::collection::vec(-4i32..=4, n), 0u8..3, -6i32..=6), m),
                prop::collection::vec(0u8..3, n),
            )
                .prop_map(move |(c, rows, bounds)| {
                    let mut lp =
                        LinearProgram::new(Sense::Minimize, c.iter().map(|&v| v as f64).collect());
                    for (coeffs, rel, rhs) in rows {
                        let relation = [Relation::LessEq, Relation::Equal, Relation::GreaterEq]
                            [rel as usize];
                        lp.add_constraint(
                            coeffs.iter().map(|&v| v as f64).collect(),
                            relation,
                            rhs as f64,
                        );
                    }
                    for (j, b) in bounds.iter().enumerate() {
                        let vb = match b {
                            0 => VarBounds::NONNEGATIVE,
                            1 => VarBounds::between(-2.0, 3.0),
                            _ => VarBounds::FREE,
                        };
                        lp.set_bounds(j, vb);
                    }
                    lp
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn optimal_solves_carry_certificates(lp in arb_lp()) {
            let sol = solve_lp(&lp).unwrap();
            prop_assert_ne!(sol.status, LpStatus::IterationLimit);
            if sol.status == LpStatus::Optimal {
                let cert = sol.certificate(&lp);
                prop_assert!(cert.primal_infeasibility <= 1e-7, "{:?}", cert);
                prop_assert!(cert.dual_infeasibility <= 1e-7, "{:?}", cert);
                prop_assert!(cert.duality_gap() <= 1e-6, "{:?}", cert);
                prop_assert!(cert.complementarity <= 1e-6, "{:?}", cert);
            }
        }

        #[test]
        fn every_variable_boxed_is_never_unbounded(lp in arb_lp()) {
            let mut boxed = lp.clone();
            for j in 0..boxed.num_vars() {
                boxed.set_bounds(j, VarBounds::between(-3.0, 3.0));
            }
            let sol = solve_lp(&boxed).unwrap();
            prop_assert_ne!(sol.status, LpStatus::Unbounded);
        }

        #[test]
        fn maximize_is_negated_minimize(lp in arb_lp()) {
            let mut max = lp.clone();
            max.sense = Sense::Maximize;
            max.objective = lp.objective.iter().map(|c| -c).collect();
            let a = solve_lp(&lp).unwrap();
            let b = solve_lp(&max).unwrap();
            prop_assert_eq!(a.status, b.status);
            if a.status == LpStatus::Optimal {
                prop_assert!((a.objective + b.objective).abs() <= 1e-9);
            }
        }
    }
}

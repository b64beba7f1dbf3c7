//! Recovering a mixed strategy from its marginal vector.
//!
//! Row generation on `max w - p·u  s.t.  w - Σ_{e∈T} u_e ≤ 0  ∀T ∈ F`. The separation
//! problem is the nominal problem at costs `u` and the duals of the generated rows
//! are the probabilities. The variables `u` are boxed to `[-1, 1]`, which keeps the
//! first restricted LPs bounded; the optimum is zero exactly when `p ∈ CH(X)`.

use thiserror::Error;

use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation, Sense, VarBounds};
use crate::model::{
    marginal_of_strategy, CostVector, FeasibleSet, MarginalVector,
    PlayerMixedStrategy,
};
use crate::nominal::NominalOracle;

pub const DEFAULT_TOLERANCE: f64 = 1e-7;
pub const MAX_CUTS: usize = 10_000;

/// Separating hyperplane: `Σ_{e∈T} u_e ≥ w` for every feasible `T`, yet `p·u < w`.
#[derive(Debug, Clone, PartialEq)]
pub struct HullCertificate {
    pub u: Vec<f64>,
    /// `min_T Σ_{e∈T} u_e`, taken from the nominal oracle.
    pub w: f64,
    /// `w - p·u`.
    pub violation: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecomposeError {
    #[error("marginal has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("marginal entry {item} is not finite")]
    NonFinite { item: usize },
    #[error("marginal is outside the convex hull (violation {})", .0.violation)]
    NotInHull(Box<HullCertificate>),
    #[error("row generation stopped after {cuts} cuts")]
    MaxCuts { cuts: usize },
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub strategy: PlayerMixedStrategy,
    /// `‖marginal(strategy) - p‖_∞`.
    pub error: f64,
    /// Number of generated rows.
    pub cuts: usize,
}

#[derive(Debug, Clone)]
pub enum HullVerdict {
    Inside(Decomposition),
    Outside(HullCertificate),
}

impl HullVerdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullVerdict::Inside(_))
    }
}

fn check_input<O: NominalOracle + ?Sized>(p: &MarginalVector, oracle: &O) -> Result<(), DecomposeError> {
    if p.len() != oracle.n() {
        return Err(DecomposeError::LengthMismatch {
            expected: oracle.n(),
            found: p.len(),
        });
    }
    match p.0.iter().position(|x| !x.is_finite()) {
        Some(item) => Err(DecomposeError::NonFinite { item }),
        None => Ok(()),
    }
}

/// Writes `p` as a distribution over feasible sets, or returns a separating certificate.
pub fn decompose_marginal<O: NominalOracle + ?Sized>(
    p: &MarginalVector,
    oracle: &O,
    tol: f64,
) -> Result<Decomposition, DecomposeError> {
    check_input(p, oracle)?;
    let n = p.len();
    let neg_p = CostVector(p.0.iter().map(|x| -x).collect());
    let mut rows: Vec<FeasibleSet> = vec![oracle.solve(&neg_p).0];

    loop {
        // variables: u_0..u_{n-1}, w
        let mut objective: Vec<f64> = p.0.iter().map(|x| -x).collect();
        objective.push(1.0);
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        for e in 0..n {
            lp.set_bounds(e, VarBounds::between(-1.0, 1.0));
        }
        lp.set_bounds(n, VarBounds::FREE);
        for t in &rows {
            let mut coeffs: Vec<f64> = t.indicator().iter().map(|&x| if x { -1.0 } else { 0.0 }).collect();
            coeffs.push(1.0);
            lp.add_constraint(coeffs, Relation::LessEq, 0.0);
        }
        let sol = solve_lp(&lp).expect("finite marginal");
        assert_eq!(sol.status, LpStatus::Optimal, "boxed dual is bounded and feasible");

        let u = CostVector(sol.primal[..n].to_vec());
        let w = sol.primal[n];
        let (separator, min_cost) = oracle.solve(&u);
        if w - min_cost > tol / 10.0 {
            if rows.contains(&separator) || rows.len() >= MAX_CUTS {
                return Err(DecomposeError::MaxCuts { cuts: rows.len() });
            }
            rows.push(separator);
            continue;
        }

        let pu: f64 = p.0.iter().zip(&u.0).map(|(a, b)| a * b).sum();
        if min_cost - pu > tol {
            return Err(DecomposeError::NotInHull(Box::new(HullCertificate {
                u: u.0,
                w: min_cost,
                violation: min_cost - pu,
            })));
        }

        let weights: Vec<(FeasibleSet, f64)> = rows
            .iter()
            .cloned()
            .zip(sol.dual.iter().map(|d| d.max(0.0)))
            .filter(|(_, y)| *y > 0.0)
            .collect();
        let weights = if weights.len() > n + 1 {
            reduce_support(weights)
        } else {
            weights
        };
        let strategy = PlayerMixedStrategy::from_weights(weights);
        let error = marginal_of_strategy(&strategy).max_abs_diff(p);
        return Ok(Decomposition {
            strategy,
            error,
            cuts: rows.len(),
        });
    }
}

/// Membership test packaged as a verdict; only structural errors propagate.
pub fn certify_in_hull<O: NominalOracle + ?Sized>(
    p: &MarginalVector,
    oracle: &O,
    tol: f64,
) -> Result<HullVerdict, DecomposeError> {
    match decompose_marginal(p, oracle, tol) {
        Ok(d) => Ok(HullVerdict::Inside(d)),
        Err(DecomposeError::NotInHull(cert)) => Ok(HullVerdict::Outside(*cert)),
        Err(e) => Err(e),
    }
}

/// Re-checks a certificate against the oracle: `(w - p·u, min_T u(T) - w)`.
pub fn certificate_slacks<O: NominalOracle + ?Sized>(
    cert: &HullCertificate,
    p: &MarginalVector,
    oracle: &O,
) -> (f64, f64) {
    let u = CostVector(cert.u.clone());
    let (_, min_cost) = oracle.solve(&u);
    let pu: f64 = p.0.iter().zip(&cert.u).map(|(a, b)| a * b).sum();
    (cert.w - pu, min_cost - cert.w)
}

/// Carathéodory reduction: shrinks the support until the vectors `(x_T, 1)` are
/// linearly independent, keeping the marginal and the total weight.
fn reduce_support(mut weights: Vec<(FeasibleSet, f64)>) -> Vec<(FeasibleSet, f64)> {
    while let Some(lambda) = dependency(&weights) {
        let Some(theta) = weights
            .iter()
            .zip(&lambda)
            .filter(|(_, l)| **l > 1e-12)
            .map(|((_, y), l)| y / l)
            .min_by(f64::total_cmp)
        else {
            break;
        };
        for ((_, y), l) in weights.iter_mut().zip(&lambda) {
            *y -= theta * l;
        }
        let drop = weights
            .iter()
            .zip(&lambda)
            .enumerate()
            .filter(|(_, (_, l))| **l > 1e-12)
            .min_by(|a, b| a.1 .0 .1.total_cmp(&b.1 .0 .1))
            .map(|(i, _)| i)
            .expect("a positive coefficient exists");
        weights.remove(drop);
        weights.retain(|(_, y)| *y > 1e-15);
        for (_, y) in weights.iter_mut() {
            *y = y.max(0.0);
        }
    }
    weights
}

/// A nonzero `λ` with `Σ_T λ_T (x_T, 1) = 0`, if the support is dependent.
fn dependency(weights: &[(FeasibleSet, f64)]) -> Option<Vec<f64>> {
    let m = weights.len();
    let n = weights.first()?.0.n();
    // rows = coordinates (items plus a ones row), columns = support sets
    let mut a: Vec<Vec<f64>> = (0..=n)
        .map(|e| {
            weights
                .iter()
                .map(|(t, _)| if e == n || t.contains(e) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if r > n {
            break;
        }
        let Some(pr) = (r..=n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else {
            break;
        };
        if a[pr][c].abs() < 1e-9 {
            continue;
        }
        a.swap(r, pr);
        let inv = 1.0 / a[r][c];
        for v in a[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..=n {
            if i != r && a[i][c] != 0.0 {
                let f = a[i][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free = (0..m).find(|c| !pivot_cols.contains(c))?;
    let mut lambda = vec![0.0; m];
    lambda[free] = 1.0;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        lambda[pc] = -a[row][free];
    }
    Some(lambda)
}

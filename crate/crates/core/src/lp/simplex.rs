use super::{
    LinearProgram, LpSolution, LpStatus, Relation, Sense, OPTIMALITY_TOLERANCE, PIVOT_TOLERANCE,
};

/// How an original variable is expressed through nonnegative tableau columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = lower + x'
    Shifted { col: usize, lower: f64 },
    /// x = upper - x'
    Mirrored { col: usize, upper: f64 },
    /// x = x⁺ - x⁻
    Split { pos: usize, neg: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Optimal,
    Unbounded,
    Limit,
}

/// Pivots between rebuilds of the tableau from the original rows.
const REFRESH_INTERVAL: usize = 50;

struct Tableau {
    /// Row-major `rows × (cols + 1)`; the last entry of each row is the rhs.
    data: Vec<f64>,
    /// The initial tableau, kept for refactorization.
    original: Vec<f64>,
    /// Cost vector of the current phase.
    cost: Vec<f64>,
    since_refresh: usize,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    /// Reduced costs for the current phase; `reduced[cols]` is minus the objective.
    reduced: Vec<f64>,
    pivots: usize,
    pivot_limit: usize,
}

impl Tableau {
    fn stride(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.stride() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn price(&mut self, cost: &[f64]) {
        self.cost = cost.to_vec();
        let stride = self.stride();
        let mut reduced = cost.to_vec();
        reduced.push(0.0);
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * stride..(r + 1) * stride];
                for (d, a) in reduced.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let stride = self.stride();
        let inv = 1.0 / self.at(pr, pc);
        let (before, rest) = self.data.split_at_mut(pr * stride);
        let (pivot_row, after) = rest.split_at_mut(stride);
        for v in pivot_row.iter_mut() {
            *v *= inv;
        }
        pivot_row[pc] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let factor = row[pc];
            if factor != 0.0 {
                for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= factor * p;
                }
                row[pc] = 0.0;
            }
        };
        before.chunks_mut(stride).for_each(eliminate);
        after.chunks_mut(stride).for_each(eliminate);
        eliminate(&mut self.reduced);
        self.basis[pr] = pc;
        self.pivots += 1;
        self.since_refresh += 1;
    }

    /// Recomputes `B⁻¹ [A | b]` for the current basis by Gauss-Jordan elimination
    /// on the original rows, then reprices. Returns false (leaving the tableau
    /// untouched) if the basis matrix is numerically singular.
    fn refresh(&mut self) -> bool {
        let stride = self.stride();
        let mut m = self.original.clone();
        let mut assigned = vec![false; self.rows];
        let mut new_basis = vec![usize::MAX; self.rows];
        for &bc in &self.basis {
            let Some(pr) = (0..self.rows)
                .filter(|&i| !assigned[i])
                .max_by(|&i, &j| m[i * stride + bc].abs().total_cmp(&m[j * stride + bc].abs()))
            else {
                return false;
            };
            let a = m[pr * stride + bc];
            if a.abs() < 1e-11 {
                return false;
            }
            let inv = 1.0 / a;
            for v in &mut m[pr * stride..(pr + 1) * stride] {
                *v *= inv;
            }
            m[pr * stride + bc] = 1.0;
            let pivot_row: Vec<f64> = m[pr * stride..(pr + 1) * stride].to_vec();
            for i in 0..self.rows {
                if i == pr {
                    continue;
                }
                let f = m[i * stride + bc];
                if f != 0.0 {
                    for (v, p) in m[i * stride..(i + 1) * stride].iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                    m[i * stride + bc] = 0.0;
                }
            }
            assigned[pr] = true;
            new_basis[pr] = bc;
        }
        self.data = m;
        self.basis = new_basis;
        let cost = std::mem::take(&mut self.cost);
        self.price(&cost);
        self.since_refresh = 0;
        true
    }

    /// Primal simplex on the current reduced costs; `allowed` gates entering columns.
    fn run(&mut self, allowed: &[bool]) -> Outcome {
        loop {
            if self.pivots >= self.pivot_limit {
                return Outcome::Limit;
            }
            if self.since_refresh >= REFRESH_INTERVAL {
                self.refresh();
            }
            // Bland: lowest-index improving column
            let Some(enter) =
                (0..self.cols).find(|&j| allowed[j] && self.reduced[j] < -OPTIMALITY_TOLERANCE)
            else {
                if self.since_refresh > 0 && self.refresh() {
                    continue;
                }
                return Outcome::Optimal;
            };
            // ratio test, ties to the lowest basic variable index
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, enter);
                if a > PIVOT_TOLERANCE {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((br, best)) => {
                            let slack = 1e-12 * best.abs().max(1.0);
                            if ratio < best - slack
                                || (ratio <= best + slack && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, best))
                            }
                        }
                    };
                }
            }
            match leave {
                None => {
                    if self.since_refresh > 0 && self.refresh() {
                        continue;
                    }
                    return Outcome::Unbounded;
                }
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

pub(super) fn solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_vars();
    let m = lp.num_constraints();
    let flip_obj = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };

    let infeasible = |pivots| LpSolution {
        status: LpStatus::Infeasible,
        primal: vec![f64::NAN; n],
        dual: vec![f64::NAN; m],
        objective: f64::NAN,
        pivots,
    };

    // structural columns
    let mut maps = Vec::with_capacity(n);
    let mut struct_cols = 0;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for b in &lp.bounds {
        let map = match (b.lower, b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    if l > u {
                        return infeasible(0);
                    }
                    bound_rows.push((struct_cols, u - l));
                }
                VarMap::Shifted {
                    col: struct_cols,
                    lower: l,
                }
            }
            (None, Some(u)) => VarMap::Mirrored {
                col: struct_cols,
                upper: u,
            },
            (None, None) => {
                struct_cols += 1;
                VarMap::Split {
                    pos: struct_cols - 1,
                    neg: struct_cols,
                }
            }
        };
        struct_cols += 1;
        maps.push(map);
    }

    // standardized rows over structural columns: (coeffs, relation, rhs)
    let total_rows = m + bound_rows.len();
    let mut std_rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(total_rows);
    for con in &lp.constraints {
        let mut coeffs = vec![0.0; struct_cols];
        let mut rhs = con.rhs;
        for (j, &a) in con.coeffs.iter().enumerate() {
            match maps[j] {
                VarMap::Shifted { col, lower } => {
                    coeffs[col] += a;
                    rhs -= a * lower;
                }
                VarMap::Mirrored { col, upper } => {
                    coeffs[col] -= a;
                    rhs -= a * upper;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] += a;
                    coeffs[neg] -= a;
                }
            }
        }
        std_rows.push((coeffs, con.relation, rhs));
    }
    for &(col, width) in &bound_rows {
        let mut coeffs = vec![0.0; struct_cols];
        coeffs[col] = 1.0;
        std_rows.push((coeffs, Relation::LessEq, width));
    }

    let mut std_cost = vec![0.0; struct_cols];
    for (j, &c) in lp.objective.iter().enumerate() {
        let c = flip_obj * c;
        match maps[j] {
            VarMap::Shifted { col, .. } => std_cost[col] += c,
            VarMap::Mirrored { col, .. } => std_cost[col] -= c,
            VarMap::Split { pos, neg } => {
                std_cost[pos] += c;
                std_cost[neg] -= c;
            }
        }
    }

    // make every rhs nonnegative, remembering which rows were negated
    let mut row_sign = vec![1.0; total_rows];
    for (i, (coeffs, rel, rhs)) in std_rows.iter_mut().enumerate() {
        if *rhs < 0.0 {
            row_sign[i] = -1.0;
            coeffs.iter_mut().for_each(|a| *a = -*a);
            *rhs = -*rhs;
            *rel = match *rel {
                Relation::LessEq => Relation::GreaterEq,
                Relation::GreaterEq => Relation::LessEq,
                Relation::Equal => Relation::Equal,
            };
        }
    }

    // column layout: structural | slack/surplus | artificial
    let slack_count = std_rows
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Equal)
        .count();
    let art_count = std_rows
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::LessEq)
        .count();
    let cols = struct_cols + slack_count + art_count;
    let stride = cols + 1;
    let mut data = vec![0.0; total_rows * stride];
    let mut basis = vec![0; total_rows];
    let mut unit_col = vec![0; total_rows];
    let mut is_artificial = vec![false; cols];
    let mut next_slack = struct_cols;
    let mut next_art = struct_cols + slack_count;
    for (i, (coeffs, rel, rhs)) in std_rows.iter().enumerate() {
        let row = &mut data[i * stride..(i + 1) * stride];
        row[..struct_cols].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match rel {
            Relation::LessEq => {
                row[next_slack] = 1.0;
                basis[i] = next_slack;
                unit_col[i] = next_slack;
                next_slack += 1;
            }
            Relation::GreaterEq | Relation::Equal => {
                if *rel == Relation::GreaterEq {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                }
                row[next_art] = 1.0;
                is_artificial[next_art] = true;
                basis[i] = next_art;
                unit_col[i] = next_art;
                next_art += 1;
            }
        }
    }

    let size = total_rows + cols;
    let mut tab = Tableau {
        original: data.clone(),
        cost: Vec::new(),
        since_refresh: 0,
        data,
        rows: total_rows,
        cols,
        basis,
        reduced: Vec::new(),
        pivots: 0,
        pivot_limit: 10 * size * size,
    };
    let not_artificial: Vec<bool> = is_artificial.iter().map(|a| !a).collect();

    let limit = |pivots| LpSolution {
        status: LpStatus::IterationLimit,
        primal: vec![f64::NAN; n],
        dual: vec![f64::NAN; m],
        objective: f64::NAN,
        pivots,
    };

    // phase 1: minimize the sum of artificials
    if art_count > 0 {
        let phase1: Vec<f64> = is_artificial
            .iter()
            .map(|&a| if a { 1.0 } else { 0.0 })
            .collect();
        tab.price(&phase1);
        if tab.run(&not_artificial) == Outcome::Limit {
            return limit(tab.pivots);
        }
        let rhs_scale = std_rows.iter().map(|r| r.2).fold(1.0, f64::max);
        let residual = -tab.reduced[cols];
        if residual > 1e-9 * rhs_scale {
            return infeasible(tab.pivots);
        }
        // pivot remaining zero-level artificials out where possible
        for r in 0..tab.rows {
            if is_artificial[tab.basis[r]] {
                let best = (0..cols)
                    .filter(|&j| !is_artificial[j])
                    .map(|j| (j, tab.at(r, j).abs()))
                    .filter(|&(_, a)| a > PIVOT_TOLERANCE)
                    .max_by(|a, b| a.1.total_cmp(&b.1));
                if let Some((j, _)) = best {
                    tab.pivot(r, j);
                }
            }
        }
        for r in 0..tab.rows {
            let idx = r * stride + cols;
            if tab.data[idx] < 0.0 {
                tab.data[idx] = 0.0;
            }
        }
    }

    // phase 2
    let mut phase2 = std_cost.clone();
    phase2.resize(cols, 0.0);
    tab.price(&phase2);
    match tab.run(&not_artificial) {
        Outcome::Limit => return limit(tab.pivots),
        Outcome::Unbounded => {
            return LpSolution {
                status: LpStatus::Unbounded,
                primal: vec![f64::NAN; n],
                dual: vec![f64::NAN; m],
                objective: match lp.sense {
                    Sense::Minimize => f64::NEG_INFINITY,
                    Sense::Maximize => f64::INFINITY,
                },
                pivots: tab.pivots,
            }
        }
        Outcome::Optimal => {}
    }

    let mut std_x = vec![0.0; cols];
    for r in 0..tab.rows {
        std_x[tab.basis[r]] = tab.rhs(r);
    }
    let primal: Vec<f64> = maps
        .iter()
        .map(|map| match *map {
            VarMap::Shifted { col, lower } => lower + std_x[col],
            VarMap::Mirrored { col, upper } => upper - std_x[col],
            VarMap::Split { pos, neg } => std_x[pos] - std_x[neg],
        })
        .collect();
    // unit column j of row i has cost 0, so its reduced cost is -y_i
    let dual: Vec<f64> = (0..m)
        .map(|i| {
            let y = -tab.reduced[unit_col[i]] * row_sign[i];
            let y = flip_obj * y;
            if y == 0.0 {
                0.0
            } else {
                y
            }
        })
        .collect();
    let objective = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
    LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual,
        objective,
        pivots: tab.pivots,
    }
}

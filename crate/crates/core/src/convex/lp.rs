//! Dense two-phase simplex for the small linear programs used throughout the
//! crate (support values, chord lengths, level-set feasibility, centers).
//!
//! Rows are normalized to unit max-abs coefficient before solving, so the
//! feasibility tolerance is an absolute slack on normalized rows. Entering
//! columns follow Dantzig's rule with lowest-index tie breaking; after a run
//! of degenerate pivots the solver falls back to Bland's rule to avoid cycling.

use thiserror::Error;

/// Absolute slack allowed on normalized rows.
pub const FEASIBILITY_TOL: f64 = 1e-9;

const OPTIMALITY_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-9;
const RESIDUAL_LIMIT: f64 = 1e-6;
const DEGENERATE_STREAK: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program has non-finite coefficients")]
    NonFinite,
    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("linear program is ill-conditioned (constraint residual {residual:e})")]
    IllConditioned { residual: f64 },
    #[error("simplex exceeded {0} iterations")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// A linear program over variables that are either free or nonnegative.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    sense: Sense,
    free: Vec<bool>,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            free: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn add_var(&mut self, free: bool) -> usize {
        self.free.push(free);
        self.objective.push(0.0);
        self.free.len() - 1
    }

    pub fn add_vars(&mut self, n: usize, free: bool) -> Vec<usize> {
        (0..n).map(|_| self.add_var(free)).collect()
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn add_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] += coeff;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        let n = self.num_vars();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite);
        }
        for c in &self.constraints {
            if !c.rhs.is_finite() {
                return Err(LpError::NonFinite);
            }
            for &(j, a) in &c.coeffs {
                if j >= n {
                    return Err(LpError::VariableOutOfRange {
                        index: j,
                        num_vars: n,
                    });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite);
                }
            }
        }
        let outcome = Tableau::build(self).and_then(|t| t.run())?;
        if let LpOutcome::Optimal(sol) = &outcome {
            let residual = self.max_residual(&sol.x);
            if residual > RESIDUAL_LIMIT {
                return Err(LpError::IllConditioned { residual });
            }
        }
        Ok(outcome)
    }

    /// Largest constraint violation of `x`, measured on normalized rows.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (j, &v) in x.iter().enumerate() {
            if !self.free[j] && v < 0.0 {
                worst = worst.max(-v);
            }
        }
        for c in &self.constraints {
            let scale = c.coeffs.iter().fold(0.0f64, |m, &(_, a)| m.max(a.abs()));
            if scale == 0.0 {
                continue;
            }
            let lhs: f64 = c.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let gap = (lhs - c.rhs) / scale;
            let viol = match c.relation {
                Relation::Le => gap.max(0.0),
                Relation::Ge => (-gap).max(0.0),
                Relation::Eq => gap.abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }
}

/// Solve `max/min cᵀx` subject to `A x ≤ b` with all variables free.
pub fn lp_solve(
    objective: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
    sense: Sense,
) -> Result<LpOutcome, LpError> {
    let n = objective.len();
    let mut lp = LinearProgram::new(sense);
    lp.add_vars(n, true);
    for (j, &c) in objective.iter().enumerate() {
        lp.set_objective(j, c);
    }
    for (row, &b) in rows.iter().zip(rhs) {
        if row.len() != n {
            return Err(LpError::VariableOutOfRange {
                index: row.len().max(n),
                num_vars: n,
            });
        }
        let coeffs = row.iter().copied().enumerate().filter(|(_, a)| *a != 0.0).collect();
        lp.add_constraint(coeffs, Relation::Le, b);
    }
    lp.solve()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    m: usize,
    n: usize,
    // (m rows) x (n + 1) with the right-hand side in the last column.
    t: Vec<f64>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    // (column of x_j⁺, column of x_j⁻ if free)
    var_cols: Vec<(usize, Option<usize>)>,
    cost: Vec<f64>,
    maximize: bool,
    num_vars: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Self, LpError> {
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut ncols = 0usize;
        for &free in &lp.free {
            let plus = ncols;
            ncols += 1;
            let minus = if free {
                ncols += 1;
                Some(ncols - 1)
            } else {
                None
            };
            var_cols.push((plus, minus));
        }
        let n_struct = ncols;

        // Normalize rows, drop empty ones, make the right-hand sides nonnegative.
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
        for c in &lp.constraints {
            let mut dense = vec![0.0; n_struct];
            for &(j, a) in &c.coeffs {
                let (p, m) = var_cols[j];
                dense[p] += a;
                if let Some(m) = m {
                    dense[m] -= a;
                }
            }
            let scale = dense.iter().fold(0.0f64, |s, a| s.max(a.abs()));
            let mut rel = c.relation;
            let mut rhs = c.rhs;
            if scale == 0.0 {
                let ok = match rel {
                    Relation::Le => rhs >= -FEASIBILITY_TOL,
                    Relation::Ge => rhs <= FEASIBILITY_TOL,
                    Relation::Eq => rhs.abs() <= FEASIBILITY_TOL,
                };
                if !ok {
                    return Ok(Tableau::infeasible_marker(lp));
                }
                continue;
            }
            for a in dense.iter_mut() {
                *a /= scale;
            }
            rhs /= scale;
            if rhs < 0.0 {
                for a in dense.iter_mut() {
                    *a = -*a;
                }
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push((dense, rel, rhs));
        }

        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let n = n_struct + n_slack + n_art;
        let mut kinds = vec![ColKind::Structural; n_struct];
        kinds.extend(std::iter::repeat_n(ColKind::Slack, n_slack));
        kinds.extend(std::iter::repeat_n(ColKind::Artificial, n_art));

        let w = n + 1;
        let mut t = vec![0.0; m * w];
        let mut basis = vec![0usize; m];
        let mut next_slack = n_struct;
        let mut next_art = n_struct + n_slack;
        for (i, (dense, rel, rhs)) in rows.into_iter().enumerate() {
            let row = &mut t[i * w..(i + 1) * w];
            row[..n_struct].copy_from_slice(&dense);
            row[n] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }

        let maximize = lp.sense == Sense::Maximize;
        let mut cost = vec![0.0; n];
        for (j, &c) in lp.objective.iter().enumerate() {
            let c = if maximize { c } else { -c };
            let (p, mneg) = var_cols[j];
            cost[p] = c;
            if let Some(mneg) = mneg {
                cost[mneg] = -c;
            }
        }

        Ok(Tableau {
            m,
            n,
            t,
            basis,
            kinds,
            var_cols,
            cost,
            maximize,
            num_vars: lp.num_vars(),
        })
    }

    // A tableau whose single row 0·x = 1 is trivially infeasible.
    fn infeasible_marker(lp: &LinearProgram) -> Tableau {
        Tableau {
            m: 1,
            n: 1,
            t: vec![1.0, 1.0],
            basis: vec![0],
            kinds: vec![ColKind::Artificial],
            var_cols: lp.free.iter().map(|_| (0, None)).collect(),
            cost: vec![0.0],
            maximize: true,
            num_vars: lp.num_vars(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.n + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.t[i * (self.n + 1) + self.n]
    }

    fn pivot(&mut self, r: usize, q: usize, d: &mut [f64]) {
        let w = self.n + 1;
        let p = self.t[r * w + q];
        {
            let row = &mut self.t[r * w..(r + 1) * w];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[q] = 1.0;
        }
        let pivot_row: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[i * w..(i + 1) * w];
            for (v, pr) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            row[q] = 0.0;
        }
        let f = d[q];
        if f != 0.0 {
            for (v, pr) in d.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            d[q] = 0.0;
        }
        self.basis[r] = q;
    }

    /// Reduced costs for the given column costs, with `-objective` in the last slot.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        d.push(0.0);
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..=self.n {
                d[j] -= cb * self.at(i, j);
            }
        }
        d
    }

    // Returns false when unbounded.
    fn iterate(&mut self, d: &mut [f64], allow: impl Fn(ColKind) -> bool) -> Result<bool, LpError> {
        let limit = 20_000 + 50 * (self.m + self.n);
        let mut degenerate = 0usize;
        for _ in 0..limit {
            let bland = degenerate > DEGENERATE_STREAK;
            let mut entering: Option<usize> = None;
            let mut best = OPTIMALITY_TOL;
            for j in 0..self.n {
                if !allow(self.kinds[j]) || self.basis.contains(&j) {
                    continue;
                }
                if d[j] > best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d[j];
                }
            }
            let Some(q) = entering else {
                return Ok(true);
            };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, q);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                        if ratio < lr && !tie || tie && self.basis[i] < self.basis[li] {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(false);
            };
            if ratio <= 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q, d);
        }
        Err(LpError::IterationLimit(limit))
    }

    fn run(mut self) -> Result<LpOutcome, LpError> {
        let has_art = self.kinds.iter().any(|k| *k == ColKind::Artificial);
        if has_art {
            let phase1: Vec<f64> = self
                .kinds
                .iter()
                .map(|k| if *k == ColKind::Artificial { -1.0 } else { 0.0 })
                .collect();
            let mut d = self.reduced_costs(&phase1);
            self.iterate(&mut d, |_| true)?;
            // d[n] = -(phase-one objective) = sum of artificials.
            if d[self.n] > FEASIBILITY_TOL * (1.0 + self.m as f64).sqrt() {
                return Ok(LpOutcome::Infeasible);
            }
            self.drive_out_artificials(&mut d);
        }
        let cost = self.cost.clone();
        let mut d = self.reduced_costs(&cost);
        if !self.iterate(&mut d, |k| k != ColKind::Artificial)? {
            return Ok(LpOutcome::Unbounded);
        }

        let mut cols = vec![0.0; self.n];
        for i in 0..self.m {
            cols[self.basis[i]] = self.rhs(i).max(0.0);
        }
        let x: Vec<f64> = self
            .var_cols
            .iter()
            .take(self.num_vars)
            .map(|&(p, mneg)| cols[p] - mneg.map_or(0.0, |c| cols[c]))
            .collect();
        let value = -d[self.n];
        let value = if self.maximize { value } else { -value };
        Ok(LpOutcome::Optimal(LpSolution { value, x }))
    }

    fn drive_out_artificials(&mut self, d: &mut [f64]) {
        let mut dead = Vec::new();
        for i in 0..self.m {
            if self.kinds[self.basis[i]] != ColKind::Artificial {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if self.kinds[j] == ColKind::Artificial || self.basis.contains(&j) {
                    continue;
                }
                let a = self.at(i, j).abs();
                if a > 1e-9 && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((j, _)) => self.pivot(i, j, d),
                None => dead.push(i),
            }
        }
        if dead.is_empty() {
            return;
        }
        // Redundant rows: keep them but zero them out so they never constrain.
        let w = self.n + 1;
        for i in dead {
            for v in &mut self.t[i * w..(i + 1) * w] {
                *v = 0.0;
            }
            let b = self.basis[i];
            self.t[i * w + b] = 1.0;
        }
    }
}

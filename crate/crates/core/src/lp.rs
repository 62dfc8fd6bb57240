//! Exact rational linear programming.
//!
//! A dense two-phase primal simplex over [`Rational`] with Bland's rule, so
//! it always terminates and every reported point satisfies its constraints
//! exactly.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Rational>,
    relation: Relation,
    rhs: Rational,
}

/// `maximize c·x` subject to linear rows, with each variable either `≥ 0`
/// or free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    free: Vec<bool>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible)
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded)
    }

    pub fn optimal(&self) -> Option<(&Rational, &[Rational])> {
        match self {
            LpOutcome::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// A program over `num_vars` non-negative variables with a zero objective.
    pub fn new(num_vars: usize) -> LinearProgram {
        LinearProgram {
            objective: vec![Rational::zero(); num_vars],
            free: vec![false; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.num_vars());
        self.objective = objective;
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(
            coeffs.len(),
            self.num_vars(),
            "row width must match the variable count"
        );
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Adds a row given as `(variable, coefficient)` pairs.
    pub fn add_sparse_row(
        &mut self,
        terms: &[(usize, Rational)],
        relation: Relation,
        rhs: Rational,
    ) {
        let mut coeffs = vec![Rational::zero(); self.num_vars()];
        for (var, c) in terms {
            coeffs[*var] += c;
        }
        self.add_row(coeffs, relation, rhs);
    }

    /// Checks a candidate point against every row and sign restriction.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars() {
            return false;
        }
        let signs_ok = point
            .iter()
            .zip(&self.free)
            .all(|(v, &free)| free || !v.is_negative());
        signs_ok
            && self.rows.iter().all(|row| {
                let lhs: Rational = row.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
                match row.relation {
                    Relation::Le => lhs <= row.rhs,
                    Relation::Eq => lhs == row.rhs,
                    Relation::Ge => lhs >= row.rhs,
                }
            })
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

/// Column layout: structural columns (a free variable owns two adjacent
/// columns, `x⁺` then `x⁻`), then one slack or surplus per inequality row,
/// then one artificial per row that needs it.
struct Tableau {
    // m rows of width `cols`, plus the right-hand side.
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
    first_artificial: usize,
    // structural column of each variable; free variables also own `col + 1`.
    var_col: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_col = Vec::with_capacity(lp.num_vars());
        let mut structural = 0;
        for &free in &lp.free {
            var_col.push(structural);
            structural += if free { 2 } else { 1 };
        }
        let slacks = lp
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        // After sign normalisation a row keeps its slack as basis only if it
        // ends up as `≤` with a non-negative right-hand side.
        let normalised: Vec<(Relation, bool)> = lp
            .rows
            .iter()
            .map(|r| {
                let flip = r.rhs.is_negative();
                let rel = match (r.relation, flip) {
                    (Relation::Le, true) => Relation::Ge,
                    (Relation::Ge, true) => Relation::Le,
                    (rel, _) => rel,
                };
                (rel, flip)
            })
            .collect();
        let artificials = normalised
            .iter()
            .filter(|(rel, _)| *rel != Relation::Le)
            .count();
        let first_artificial = structural + slacks;
        let cols = first_artificial + artificials;

        let mut a = Vec::with_capacity(lp.rows.len());
        let mut b = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let mut slack = structural;
        let mut artificial = first_artificial;
        for (row, &(rel, flip)) in lp.rows.iter().zip(&normalised) {
            let mut line = vec![Rational::zero(); cols];
            for (var, coeff) in row.coeffs.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let c = if flip { -coeff } else { coeff.clone() };
                let col = var_col[var];
                if lp.free[var] {
                    line[col + 1] = -c.clone();
                }
                line[col] = c;
            }
            let rhs = if flip { -&row.rhs } else { row.rhs.clone() };
            match rel {
                Relation::Le => {
                    line[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    line[slack] = -Rational::one();
                    slack += 1;
                    line[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    line[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            a.push(line);
            b.push(rhs);
        }
        Tableau {
            a,
            b,
            basis,
            cols,
            first_artificial,
            var_col,
        }
    }

    fn pivot(&mut self, row: usize, col: usize, d: &mut [Rational], z: &mut Rational) {
        let inv = Rational::one() / &self.a[row][col];
        if !inv.is_one() {
            for v in self.a[row].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.b[row] *= &inv;
        }
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.b[row].clone();
        let nonzero: Vec<usize> = (0..self.cols)
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let factor = self.a[i][col].clone();
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.a[i][j] -= delta;
            }
            self.b[i] -= &factor * &pivot_rhs;
        }
        if !d[col].is_zero() {
            let factor = d[col].clone();
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                d[j] -= delta;
            }
            *z += &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Reduced costs `d_j = c_j − c_B·B⁻¹A_j` and the current objective value,
    /// for a cost vector over all columns.
    fn reduced_costs(&self, cost: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut d = cost.to_vec();
        let mut z = Rational::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if !self.a[i][j].is_zero() {
                    d[j] -= cb * &self.a[i][j];
                }
            }
            z += cb * &self.b[i];
        }
        (d, z)
    }

    /// Runs the simplex on columns `< limit` to optimality. Returns `false`
    /// when the objective is unbounded.
    fn optimise(&mut self, d: &mut [Rational], z: &mut Rational, limit: usize) -> bool {
        loop {
            // Bland: lowest-index improving column.
            let Some(col) = (0..limit).find(|&j| d[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][col];
                if !aij.is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / aij;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((row, _)) => self.pivot(row, col, d, z),
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        if self.first_artificial < self.cols {
            let mut cost = vec![Rational::zero(); self.cols];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            let (mut d, mut z) = self.reduced_costs(&cost);
            let bounded = self.optimise(&mut d, &mut z, self.cols);
            debug_assert!(bounded, "phase one is bounded by zero");
            if z.is_negative() {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials(&mut d, &mut z);
        }

        let mut cost = vec![Rational::zero(); self.cols];
        for (var, c) in lp.objective.iter().enumerate() {
            let col = self.var_col[var];
            cost[col] = c.clone();
            if lp.free[var] {
                cost[col + 1] = -c;
            }
        }
        let (mut d, mut z) = self.reduced_costs(&cost);
        if !self.optimise(&mut d, &mut z, self.first_artificial) {
            return LpOutcome::Unbounded;
        }

        let mut values = vec![Rational::zero(); self.cols];
        for (i, &bv) in self.basis.iter().enumerate() {
            values[bv] = self.b[i].clone();
        }
        let point: Vec<Rational> = (0..lp.num_vars())
            .map(|var| {
                let col = self.var_col[var];
                if lp.free[var] {
                    &values[col] - &values[col + 1]
                } else {
                    values[col].clone()
                }
            })
            .collect();
        debug_assert!(lp.is_feasible(&point));
        LpOutcome::Optimal { value: z, point }
    }

    /// After a successful phase one every artificial in the basis sits at
    /// zero. Pivot each out on a non-artificial column, or drop its row when
    /// the row is a linear combination of the others.
    fn drive_out_artificials(&mut self, d: &mut [Rational], z: &mut Rational) {
        let mut row = 0;
        while row < self.a.len() {
            if self.basis[row] < self.first_artificial {
                row += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.a[row][j].is_zero()) {
                Some(col) => {
                    self.pivot(row, col, d, z);
                    row += 1;
                }
                None => {
                    self.a.remove(row);
                    self.b.remove(row);
                    self.basis.remove(row);
                }
            }
        }
    }
}

//! A dense two-phase simplex over exact rationals.
//!
//! Sized for the linear programs this crate produces: a handful of
//! variables (one per winner) and at most a few dozen rows. Bland's
//! smallest-index rule is used for both the entering and the leaving
//! choice, which rules out cycling, so termination needs no perturbation
//! tricks. Everything is exact; there are no tolerances anywhere.

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

/// `sense` of `objective . x` subject to the rows and to per-variable
/// lower bounds (no upper bounds; rows express those when needed).
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub sense: Sense,
    pub objective: Vec<Rat>,
    pub rows: Vec<LpRow>,
    pub lower_bounds: Vec<Rat>,
}

impl LinearProgram {
    pub fn new(num_vars: usize, sense: Sense, objective: Vec<Rat>) -> LinearProgram {
        LinearProgram {
            num_vars,
            sense,
            objective,
            rows: Vec::new(),
            lower_bounds: vec![Rat::zero(); num_vars],
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    fn check(&self) -> Result<()> {
        if self.objective.len() != self.num_vars || self.lower_bounds.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "objective/bounds length vs {} variables",
                self.num_vars
            )));
        }
        if let Some(row) = self.rows.iter().find(|r| r.coeffs.len() != self.num_vars) {
            return Err(Error::DimensionMismatch(format!(
                "row with {} coefficients vs {} variables",
                row.coeffs.len(),
                self.num_vars
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

/// The working tableau: `rows` are equality rows over the current column
/// set with nonnegative rhs in the last position; `basis[i]` names the
/// basic column of row i.
struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    width: usize, // columns excluding the rhs
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone().recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                *x = &*x - &(&factor * p);
            }
        }
        self.basis[r] = c;
    }

    /// Reduced cost of column `c` under `costs`: c_j minus the
    /// basis-weighted column.
    fn reduced_cost(&self, costs: &[Rat], c: usize) -> Rat {
        let mut r = costs[c].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if !cb.is_zero() && !row[c].is_zero() {
                r -= cb * &row[c];
            }
        }
        r
    }

    /// One run of the (minimizing) simplex under `costs`, Bland's rule
    /// throughout. Returns false when an improving column has no blocking
    /// row, i.e. the program is unbounded below.
    fn run(&mut self, costs: &[Rat]) -> bool {
        loop {
            let entering = (0..self.width)
                .find(|&c| !self.basis.contains(&c) && self.reduced_cost(costs, c).is_negative());
            let Some(c) = entering else { return true };
            let mut leaving: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_zero() && !a.is_negative() {
                    let ratio = self.rhs(i) / a;
                    let better = match &leaving {
                        None => true,
                        Some((j, best)) => {
                            &ratio < best || (&ratio == best && self.basis[i] < self.basis[*j])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else { return false };
            self.pivot(r, c);
        }
    }

    fn value(&self, costs: &[Rat]) -> Rat {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, _)| &costs[self.basis[i]] * self.rhs(i))
            .sum()
    }
}

/// Solves the program exactly. The returned point is a vertex of the
/// feasible region (after the lower-bound shift), so optima are
/// reproducible: with Bland's deterministic pivoting the same program
/// always yields the same point.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpResult> {
    lp.check()?;
    let n = lp.num_vars;

    // Internally always minimize over shifted variables y = x - lb >= 0.
    let mut objective: Vec<Rat> = lp.objective.clone();
    if lp.sense == Sense::Maximize {
        for c in objective.iter_mut() {
            *c = -&*c;
        }
    }

    // Build equality rows: structural columns, then one slack per
    // inequality row; normalize rhs to be nonnegative.
    let num_slacks = lp.rows.iter().filter(|r| r.rel != Relation::Eq).count();
    let width = n + num_slacks;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(lp.rows.len());
    let mut slack_col: Vec<Option<usize>> = Vec::with_capacity(lp.rows.len());
    let mut next_slack = n;
    for row in &lp.rows {
        let mut r: Vec<Rat> = Vec::with_capacity(width + 1);
        r.extend(row.coeffs.iter().cloned());
        r.resize(width, Rat::zero());
        let shifted_rhs = &row.rhs
            - &row
                .coeffs
                .iter()
                .zip(lp.lower_bounds.iter())
                .map(|(a, l)| a * l)
                .sum::<Rat>();
        r.push(shifted_rhs);
        match row.rel {
            Relation::Le => {
                r[next_slack] = Rat::one();
                slack_col.push(Some(next_slack));
                next_slack += 1;
            }
            Relation::Ge => {
                r[next_slack] = -Rat::one();
                slack_col.push(Some(next_slack));
                next_slack += 1;
            }
            Relation::Eq => slack_col.push(None),
        }
        if r[width].is_negative() {
            for x in r.iter_mut() {
                *x = -&*x;
            }
        }
        rows.push(r);
    }

    // Phase 1: rows whose slack survived the sign normalization with a +1
    // start basic on it; the rest get an artificial column.
    let mut basis: Vec<usize> = Vec::with_capacity(rows.len());
    let mut artificials: Vec<usize> = Vec::new();
    let mut full_width = width;
    for (i, row) in rows.iter_mut().enumerate() {
        match slack_col[i] {
            Some(s) if row[s] == Rat::one() => basis.push(s),
            _ => {
                let rhs = row.pop().unwrap();
                row.resize(full_width, Rat::zero());
                row.push(Rat::one());
                row.push(rhs);
                artificials.push(full_width);
                basis.push(full_width);
                full_width += 1;
            }
        }
    }
    // Pad earlier rows to the final width.
    for row in rows.iter_mut() {
        let rhs = row.pop().unwrap();
        row.resize(full_width, Rat::zero());
        row.push(rhs);
    }
    let mut tab = Tableau { rows, basis, width: full_width };

    if !artificials.is_empty() {
        let mut phase1 = vec![Rat::zero(); full_width];
        for &a in &artificials {
            phase1[a] = Rat::one();
        }
        let bounded = tab.run(&phase1);
        debug_assert!(bounded, "phase 1 objective is bounded below by zero");
        if !tab.value(&phase1).is_zero() {
            return Ok(LpResult::Infeasible);
        }
        // Drive artificials out of the basis; an all-zero row signals a
        // redundant constraint and is removed outright, which keeps later
        // pivots from ever re-entering an artificial column.
        let is_artificial = |c: usize| c >= width;
        let mut i = 0;
        while i < tab.rows.len() {
            if is_artificial(tab.basis[i]) {
                match (0..width).find(|&c| !tab.rows[i][c].is_zero()) {
                    Some(c) => tab.pivot(i, c),
                    None => {
                        debug_assert!(tab.rhs(i).is_zero());
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        // Truncate the artificial columns away.
        for row in tab.rows.iter_mut() {
            let rhs = row.pop().unwrap();
            row.truncate(width);
            row.push(rhs);
        }
        tab.width = width;
    }

    // Phase 2 over the real objective (slacks cost nothing).
    let mut phase2 = objective.clone();
    phase2.resize(width, Rat::zero());
    if !tab.run(&phase2) {
        return Ok(LpResult::Unbounded);
    }

    // Read the point back in original coordinates and evaluate the
    // original objective on it.
    let mut point = lp.lower_bounds.clone();
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = &point[b] + tab.rhs(i);
        }
    }
    let value: Rat = lp
        .objective
        .iter()
        .zip(point.iter())
        .map(|(c, x)| c * x)
        .sum();
    Ok(LpResult::Optimal { value, point })
}

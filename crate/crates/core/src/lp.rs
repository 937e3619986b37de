//! Dense two-phase simplex over exact rationals with Bland's pivoting rule.
//!
//! Problems are small (tens of rows), so a full tableau is fine. Bland's rule
//! guarantees termination on degenerate problems, which the subspace-indexed
//! programs produce routinely.

use num_traits::{Signed, Zero};

use crate::error::{HblError, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A linear program over `n` variables. Variables are nonnegative unless
/// flagged free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self { sense, objective, constraints: Vec::new(), free: vec![false; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn solve(&self) -> Result<LpSolution> {
        // Column layout: one column per nonnegative variable, two (x+, x-) per
        // free variable, then one slack per inequality.
        let n = self.num_vars();
        let mut col_of = Vec::with_capacity(n);
        let mut width = 0;
        for &f in &self.free {
            col_of.push(width);
            width += if f { 2 } else { 1 };
        }
        let structural = width;
        let slack_count =
            self.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let total = structural + slack_count;

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(self.constraints.len());
        let mut rhs: Vec<Rational> = Vec::with_capacity(self.constraints.len());
        let mut slack = structural;
        for c in &self.constraints {
            let mut row = vec![Rational::zero(); total];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[col_of[j]] = a.clone();
                if self.free[j] {
                    row[col_of[j] + 1] = -a.clone();
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            rows.push(row);
            rhs.push(b);
        }

        let mut cost = vec![Rational::zero(); total];
        for (j, c) in self.objective.iter().enumerate() {
            let c = match self.sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => -c.clone(),
            };
            if self.free[j] {
                cost[col_of[j] + 1] = -c.clone();
            }
            cost[col_of[j]] = c;
        }

        let mut tab = Tableau::phase_one(rows, rhs, total);
        let mut pivots = tab.run()?;
        if !tab.objective_value().is_zero() {
            return Err(HblError::Infeasible);
        }
        tab.drop_artificials(total);
        tab.set_cost(&cost);
        pivots += tab.run()?;

        let z = tab.primal(total);
        let x = (0..n)
            .map(|j| {
                if self.free[j] {
                    &z[col_of[j]] - &z[col_of[j] + 1]
                } else {
                    z[col_of[j]].clone()
                }
            })
            .collect::<Vec<_>>();
        let value: Rational = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution { value, x, pivots })
    }
}

/// Standard-form tableau for `min c·z, A z = b, z >= 0, b >= 0`.
struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    /// Reduced costs, last entry holds the negated objective value.
    reduced: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn phase_one(rows: Vec<Vec<Rational>>, b: Vec<Rational>, structural: usize) -> Self {
        let m = rows.len();
        let cols = structural + m;
        let mut a = Vec::with_capacity(m);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.resize(cols, Rational::zero());
            row[structural + i] = Rational::from_integer(1.into());
            a.push(row);
        }
        let mut t = Self {
            a,
            b,
            reduced: vec![Rational::zero(); cols + 1],
            basis: (structural..cols).collect(),
            cols,
        };
        let mut cost = vec![Rational::zero(); cols];
        for c in cost.iter_mut().skip(structural) {
            *c = Rational::from_integer(1.into());
        }
        t.set_cost(&cost);
        t
    }

    fn set_cost(&mut self, cost: &[Rational]) {
        let mut reduced: Vec<Rational> = (0..self.cols)
            .map(|j| cost.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let mut obj = Rational::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost.get(bv).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (r, aij) in reduced.iter_mut().zip(&self.a[i]) {
                *r -= &cb * aij;
            }
            obj -= &cb * &self.b[i];
        }
        reduced.push(obj);
        self.reduced = reduced;
    }

    fn objective_value(&self) -> Rational {
        -self.reduced[self.cols].clone()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip();
        for x in self.a[row].iter_mut() {
            *x *= &inv;
        }
        self.b[row] *= &inv;
        let prow = self.a[row].clone();
        let pb = self.b[row].clone();
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for (x, p) in self.a[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.b[i] -= &f * &pb;
        }
        if !self.reduced[col].is_zero() {
            let f = self.reduced[col].clone();
            for (x, p) in self.reduced.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.reduced[self.cols] -= &f * &pb;
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule to optimality; returns the pivot count.
    fn run(&mut self) -> Result<usize> {
        let mut pivots = 0;
        loop {
            let Some(enter) = (0..self.cols).find(|&j| self.reduced[j].is_negative()) else {
                return Ok(pivots);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let aij = &self.a[i][enter];
                if !aij.is_positive() {
                    continue;
                }
                let r = &self.b[i] / aij;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => r < *lr || (r == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, r));
                }
            }
            let Some((row, _)) = leave else {
                return Err(HblError::Unbounded);
            };
            self.pivot(row, enter);
            pivots += 1;
        }
    }

    /// After phase one: pivot artificials out of the basis (or drop redundant
    /// rows), then forget the artificial columns.
    fn drop_artificials(&mut self, structural: usize) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= structural {
                match (0..structural).find(|&j| !self.a[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.b.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in self.a.iter_mut() {
            row.truncate(structural);
        }
        self.cols = structural;
    }

    fn primal(&self, structural: usize) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); structural];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < structural {
                z[bv] = self.b[i].clone();
            }
        }
        z
    }
}

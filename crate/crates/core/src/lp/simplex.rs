//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Problems are in equality form: maximize `c·x` subject to `A x = b`,
//! `x >= 0`. Phase one gives every row an artificial variable; those columns
//! stay in the tableau for the whole solve, so they always hold `B^{-1}` and
//! dual values can be read off the objective row.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    /// Constraint rows, each of length `num_vars`.
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Outcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        /// Optimal dual solution `y` with `A^T y >= c`, `b·y = value`.
        duals: Vec<Rational>,
    },
    /// `w` with `A^T w <= 0` and `b·w > 0`.
    Infeasible {
        farkas: Vec<Rational>,
    },
    Unbounded,
}

struct Tableau {
    num_vars: usize,
    /// `m` rows of `num_vars + m` coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Objective row: reduced costs `c_B B^{-1} A_j - c_j`, then the value.
    z: Vec<Rational>,
    basis: Vec<usize>,
    /// Rows multiplied by -1 to make the right-hand side nonnegative.
    flipped: Vec<bool>,
    pivots: usize,
}

impl Tableau {
    fn new(p: &Problem) -> Self {
        let m = p.a.len();
        let n = p.c.len();
        let width = n + m + 1;
        let mut flipped = vec![false; m];
        let rows = (0..m)
            .map(|i| {
                let flip = p.b[i].is_negative();
                flipped[i] = flip;
                let mut row = Vec::with_capacity(width);
                row.extend(p.a[i].iter().map(|x| if flip { -x } else { x.clone() }));
                row.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
                row.push(if flip { -&p.b[i] } else { p.b[i].clone() });
                row
            })
            .collect();
        Tableau {
            num_vars: n,
            rows,
            z: vec![Rational::zero(); width],
            basis: (n..n + m).collect(),
            flipped,
            pivots: 0,
        }
    }

    fn width(&self) -> usize {
        self.num_vars + self.rows.len() + 1
    }

    /// Recomputes the objective row for costs `cost` (one per column).
    fn set_objective(&mut self, cost: &[Rational]) {
        let width = self.width();
        let mut z: Vec<Rational> = (0..width)
            .map(|j| if j + 1 < width { -&cost[j] } else { Rational::zero() })
            .collect();
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[bv];
            if cb.is_zero() {
                continue;
            }
            for (zj, tij) in z.iter_mut().zip(row) {
                if !tij.is_zero() {
                    *zj += cb * tij;
                }
            }
        }
        self.z = z;
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let factor = row[col].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.z);
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Runs Bland's rule with entering columns restricted to `0..allowed`.
    /// Returns false when the objective is unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let rhs = self.width() - 1;
        loop {
            let Some(col) = (0..allowed).find(|&j| self.z[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }

    /// Dual values `c_B B^{-1}` in the caller's row orientation.
    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        let n = self.num_vars;
        (0..self.rows.len())
            .map(|i| {
                let y = &self.z[n + i] + &cost[n + i];
                if self.flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    fn primal(&self) -> Vec<Rational> {
        let rhs = self.width() - 1;
        let mut x = vec![Rational::zero(); self.num_vars];
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            if bv < self.num_vars {
                x[bv] = row[rhs].clone();
            }
        }
        x
    }

    fn value(&self) -> Rational {
        self.z[self.width() - 1].clone()
    }

    /// Pivots zero-level artificials out of the basis where possible.
    fn evict_artificials(&mut self) {
        for r in 0..self.rows.len() {
            if self.basis[r] < self.num_vars {
                continue;
            }
            if let Some(col) = (0..self.num_vars).find(|&j| !self.rows[r][j].is_zero()) {
                self.pivot(r, col);
            }
        }
    }
}

/// Phase one only: `Ok(x)` with `A x = b, x >= 0`, or a Farkas witness.
pub(crate) fn feasible_point(
    a: &[Vec<Rational>],
    b: &[Rational],
    num_vars: usize,
) -> Result<Vec<Rational>, Vec<Rational>> {
    let p = Problem {
        a: a.to_vec(),
        b: b.to_vec(),
        c: vec![Rational::zero(); num_vars],
    };
    let mut t = Tableau::new(&p);
    match phase_one(&mut t) {
        Ok(()) => Ok(t.primal()),
        Err(w) => Err(w),
    }
}

fn phase_one(t: &mut Tableau) -> Result<(), Vec<Rational>> {
    let n = t.num_vars;
    let m = t.rows.len();
    let cost: Vec<Rational> = (0..n + m)
        .map(|j| if j < n { Rational::zero() } else { -Rational::one() })
        .collect();
    t.set_objective(&cost);
    let bounded = t.optimize(n + m);
    debug_assert!(bounded, "phase one is bounded by zero");
    if t.value().is_negative() {
        // Dual of phase one: y with A^T y >= 0 and b·y = value < 0.
        let farkas = t.duals(&cost).into_iter().map(|y| -y).collect();
        return Err(farkas);
    }
    t.evict_artificials();
    Ok(())
}

pub(crate) fn solve(p: &Problem) -> Outcome {
    let n = p.c.len();
    let m = p.a.len();
    debug_assert!(p.a.iter().all(|row| row.len() == n));
    let mut t = Tableau::new(p);
    if let Err(farkas) = phase_one(&mut t) {
        return Outcome::Infeasible { farkas };
    }
    let cost: Vec<Rational> = (0..n + m)
        .map(|j| if j < n { p.c[j].clone() } else { Rational::zero() })
        .collect();
    t.set_objective(&cost);
    if !t.optimize(n) {
        return Outcome::Unbounded;
    }
    Outcome::Optimal {
        x: t.primal(),
        value: t.value(),
        duals: t.duals(&cost),
    }
}

//! Phase-one simplex over exact rationals.
//!
//! Finds a point of `{z >= 0 : A z <= b}` or proves the set empty. Pivots
//! follow Bland's smallest-index rule, which rules out cycling.

use num_traits::{One, Signed, Zero};

use crate::number::Rational;

/// The system `rows[k].0 . z <= rows[k].1`, `z >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    vars: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem { vars, rows: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Adds `sum coeff * z[var] <= rhs` from sparse terms.
    pub fn add_le(&mut self, terms: &[(usize, Rational)], rhs: Rational) {
        let mut row = vec![Rational::zero(); self.vars];
        for (k, c) in terms {
            row[*k] += c;
        }
        self.rows.push((row, rhs));
    }

    pub fn is_satisfied_by(&self, z: &[Rational]) -> bool {
        z.len() == self.vars
            && z.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|(a, b)| {
                let lhs = a.iter().zip(z).fold(Rational::zero(), |acc, (c, v)| acc + c * v);
                &lhs <= b
            })
    }

    /// A feasible point, or `None` when the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Rational>> {
        Tableau::build(self).run()
    }
}

struct Tableau {
    n: usize,
    /// Total columns excluding the right-hand side.
    cols: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the phase-one objective `sum artificials`.
    cost: Vec<Rational>,
    objective: Rational,
}

impl Tableau {
    fn build(sys: &LinearSystem) -> Self {
        let n = sys.vars;
        let m = sys.rows.len();
        let negative: Vec<usize> = (0..m).filter(|&r| sys.rows[r].1.is_negative()).collect();
        let first_artificial = n + m;
        let cols = first_artificial + negative.len();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (r, (a, b)) in sys.rows.iter().enumerate() {
            let mut row = vec![Rational::zero(); cols];
            let flip = b.is_negative();
            for (k, c) in a.iter().enumerate() {
                row[k] = if flip { -c } else { c.clone() };
            }
            row[n + r] = if flip { -Rational::one() } else { Rational::one() };
            if flip {
                let art = first_artificial + negative.iter().position(|&x| x == r).unwrap();
                row[art] = Rational::one();
                basis.push(art);
                rhs.push(-b);
            } else {
                basis.push(n + r);
                rhs.push(b.clone());
            }
            rows.push(row);
        }
        let mut cost = vec![Rational::zero(); cols];
        let mut objective = Rational::zero();
        for &r in &negative {
            for (k, v) in rows[r].iter().enumerate() {
                if k < first_artificial {
                    cost[k] -= v;
                }
            }
            objective += &rhs[r];
        }
        Tableau { n, cols, rows, rhs, basis, cost, objective }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[row] *= &inv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        let nonzero: Vec<usize> = (0..self.cols).filter(|&k| !pivot_row[k].is_zero()).collect();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for &k in &nonzero {
                let delta = &factor * &pivot_row[k];
                self.rows[r][k] -= delta;
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for &k in &nonzero {
                let delta = &factor * &pivot_row[k];
                self.cost[k] -= delta;
            }
            self.objective += &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn run(mut self) -> Option<Vec<Rational>> {
        // Bland: lowest-index improving column.
        while let Some(col) = (0..self.cols).find(|&k| self.cost[k].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            // Phase one is bounded below by zero, so a leaving row exists.
            let (row, _) = leave.expect("phase-one objective is bounded");
            self.pivot(row, col);
        }
        if self.objective.is_positive() {
            return None;
        }
        let mut z = vec![Rational::zero(); self.n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                z[b] = self.rhs[r].clone();
            }
        }
        Some(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, ratio};

    #[test]
    fn finds_point_in_box_with_lower_bounds() {
        // z0 + z1 >= 1, z0 <= 1/2, z1 <= 3/4
        let mut sys = LinearSystem::new(2);
        sys.add_le(&[(0, int(-1)), (1, int(-1))], int(-1));
        sys.add_le(&[(0, int(1))], ratio(1, 2));
        sys.add_le(&[(1, int(1))], ratio(3, 4));
        let z = sys.solve().unwrap();
        assert!(sys.is_satisfied_by(&z));
    }

    #[test]
    fn detects_infeasibility() {
        // z0 >= 1 and z0 <= 1/2
        let mut sys = LinearSystem::new(1);
        sys.add_le(&[(0, int(-1))], int(-1));
        sys.add_le(&[(0, int(1))], ratio(1, 2));
        assert!(sys.solve().is_none());
    }

    #[test]
    fn degenerate_system_terminates() {
        // Many redundant constraints through the origin.
        let mut sys = LinearSystem::new(3);
        for k in 0..3 {
            sys.add_le(&[(k, int(1)), ((k + 1) % 3, int(-1))], int(0));
            sys.add_le(&[(k, int(-1)), ((k + 2) % 3, int(1))], int(0));
        }
        sys.add_le(&[(0, int(-1)), (1, int(-1)), (2, int(-1))], int(-3));
        sys.add_le(&[(0, int(1))], int(1));
        let z = sys.solve().unwrap();
        assert!(sys.is_satisfied_by(&z));
        assert_eq!(z, vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn empty_system_is_feasible() {
        assert_eq!(LinearSystem::new(2).solve(), Some(vec![int(0), int(0)]));
    }
}

use num_traits::{Signed, Zero};

use super::{LinProgram, LpError, LpOutcome, Relation, Sense};
use crate::ext::Rational;

/// Dense tableau: `rows[i]` has one entry per column plus the right-hand side last.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
}

enum PivotResult {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, j: usize, z: &mut [Rational]) {
        let inv = Rational::from_integer(1.into()) / &self.rows[r][j];
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !z[j].is_zero() {
            let f = z[j].clone();
            for (v, p) in z.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = j;
    }

    /// Reduced-cost row for costs `c` (length `cols`); last entry is `-value`.
    fn objective_row(&self, c: &[Rational]) -> Vec<Rational> {
        let mut z: Vec<Rational> = c.iter().cloned().chain(std::iter::once(Rational::zero())).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (v, a) in z.iter_mut().zip(row) {
                *v -= cb * a;
            }
        }
        z
    }

    /// Bland's rule: lowest-index improving column, ratio ties broken by the
    /// lowest basic variable index.
    fn run(&mut self, z: &mut [Rational]) -> PivotResult {
        loop {
            let entering = (0..self.cols).find(|&j| self.allowed[j] && z[j].is_negative());
            let Some(j) = entering else {
                return PivotResult::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j, z),
                None => return PivotResult::Unbounded,
            }
        }
    }
}

/// Solves `p` exactly with the two-phase simplex method.
pub fn solve(p: &LinProgram) -> Result<LpOutcome, LpError> {
    p.validate()?;
    let n = p.num_vars();

    let mut norm = Vec::with_capacity(p.constraints().len());
    for c in p.constraints() {
        let mut a = p.dense_row(&c.coeffs);
        let mut b = c.rhs.clone();
        let mut rel = c.rel;
        if b.is_negative() {
            a.iter_mut().for_each(|v| *v = -v.clone());
            b = -b;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        norm.push((a, rel, b));
    }

    let m = norm.len();
    let slacks = norm.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let artificials = norm.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let cols = n + slacks + artificials;
    let first_art = n + slacks;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut t) = (n, first_art);
    for (a, rel, b) in norm {
        let mut row = a;
        row.resize(cols + 1, Rational::zero());
        match rel {
            Relation::Le => {
                row[s] = Rational::from_integer(1.into());
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = Rational::from_integer((-1).into());
                s += 1;
                row[t] = Rational::from_integer(1.into());
                basis.push(t);
                t += 1;
            }
            Relation::Eq => {
                row[t] = Rational::from_integer(1.into());
                basis.push(t);
                t += 1;
            }
        }
        row[cols] = b;
        rows.push(row);
    }

    let mut tab = Tableau { rows, basis, cols, allowed: vec![true; cols] };

    if artificials > 0 {
        let c1: Vec<Rational> = (0..cols)
            .map(|j| if j >= first_art { Rational::from_integer(1.into()) } else { Rational::zero() })
            .collect();
        let mut z = tab.objective_row(&c1);
        // Phase one is bounded below by zero.
        let _ = tab.run(&mut z);
        if !z[cols].is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining (zero-valued) artificials out, dropping redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_art {
                match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => {
                        let mut dummy = vec![Rational::zero(); cols + 1];
                        tab.pivot(i, j, &mut dummy);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for j in first_art..cols {
            tab.allowed[j] = false;
        }
    }

    let sign = match p.sense() {
        Sense::Minimize => Rational::from_integer(1.into()),
        Sense::Maximize => Rational::from_integer((-1).into()),
    };
    let mut c2 = vec![Rational::zero(); cols];
    for (v, coef) in p.objective() {
        c2[*v] += coef * &sign;
    }
    let mut z = tab.objective_row(&c2);
    match tab.run(&mut z) {
        PivotResult::Unbounded => Ok(LpOutcome::Unbounded),
        PivotResult::Optimal => {
            let mut point = vec![Rational::zero(); n];
            for (i, &b) in tab.basis.iter().enumerate() {
                if b < n {
                    point[b] = tab.rhs(i).clone();
                }
            }
            let value = p.objective_value(&point);
            Ok(LpOutcome::Optimal { value, point })
        }
    }
}

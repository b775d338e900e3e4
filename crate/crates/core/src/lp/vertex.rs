use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use super::{LinProgram, LpError, Relation, Sense};
use crate::ext::Rational;

/// Largest number of structural variables the vertex oracle accepts.
pub const MAX_ORACLE_VARS: usize = 8;

const MAX_BASES: usize = 500_000;

/// Every basic feasible solution of `p`, projected to the structural
/// variables, sorted and without duplicates.
pub fn vertices(p: &LinProgram) -> Result<Vec<Vec<Rational>>, LpError> {
    p.validate()?;
    let n = p.num_vars();
    if n > MAX_ORACLE_VARS {
        return Err(LpError::OutOfScope(format!("{n} variables, oracle limit is {MAX_ORACLE_VARS}")));
    }
    let (a, b) = standard_form(p);
    let cols = a.first().map_or(n, Vec::len);

    let (rank, consistent) = rank_of(&a, &b, cols);
    if !consistent {
        return Ok(Vec::new());
    }
    let combos = binomial(cols, rank);
    if combos > MAX_BASES {
        return Err(LpError::OutOfScope(format!("{combos} candidate bases")));
    }

    let mut found = BTreeSet::new();
    for subset in (0..cols).combinations(rank) {
        if let Some(x) = basic_solution(&a, &b, &subset, cols) {
            if x.iter().all(|v| !v.is_negative()) {
                let point: Vec<Rational> = x[..n].to_vec();
                if p.is_feasible_point(&point) {
                    found.insert(point);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Optimal objective value over the vertices, or `None` when `p` is infeasible.
/// Only meaningful when the program is bounded; see [`has_improving_ray`].
pub fn vertex_extremum(p: &LinProgram) -> Result<Option<Rational>, LpError> {
    let values = vertices(p)?.into_iter().map(|v| p.objective_value(&v));
    Ok(match p.sense() {
        Sense::Minimize => values.min(),
        Sense::Maximize => values.max(),
    })
}

/// Whether the recession cone of `p` holds a direction that improves the
/// objective, found among the vertices of the normalized cone.
pub fn has_improving_ray(p: &LinProgram) -> Result<bool, LpError> {
    let n = p.num_vars();
    let mut cone = LinProgram::new(n);
    for c in p.constraints() {
        cone.constrain(c.coeffs.clone(), c.rel, Rational::zero());
    }
    cone.constrain((0..n).map(|v| (v, Rational::one())).collect(), Relation::Eq, Rational::one());
    let improving = |d: &Vec<Rational>| {
        let v = p.objective_value(d);
        match p.sense() {
            Sense::Minimize => v.is_negative(),
            Sense::Maximize => v.is_positive(),
        }
    };
    Ok(vertices(&cone)?.iter().any(improving))
}

fn standard_form(p: &LinProgram) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = p.num_vars();
    let slacks = p.constraints().iter().filter(|c| c.rel != Relation::Eq).count();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut s = n;
    for c in p.constraints() {
        let mut row = p.dense_row(&c.coeffs);
        row.resize(n + slacks, Rational::zero());
        match c.rel {
            Relation::Eq => {}
            Relation::Le => {
                row[s] = Rational::one();
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Rational::one();
                s += 1;
            }
        }
        a.push(row);
        b.push(c.rhs.clone());
    }
    (a, b)
}

/// Row-reduces `[a | b]`; returns the rank of `a` and whether the system is consistent.
fn rank_of(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> (usize, bool) {
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect())
        .collect();
    let mut rank = 0;
    for j in 0..cols {
        let Some(r) = (rank..m.len()).find(|&r| !m[r][j].is_zero()) else {
            continue;
        };
        m.swap(rank, r);
        eliminate(&mut m, rank, j);
        rank += 1;
    }
    let consistent = m[rank..].iter().all(|row| row[cols].is_zero());
    (rank, consistent)
}

fn eliminate(m: &mut [Vec<Rational>], r: usize, j: usize) {
    let inv = Rational::one() / &m[r][j];
    m[r].iter_mut().for_each(|v| *v *= &inv);
    let pivot = m[r].clone();
    for (i, row) in m.iter_mut().enumerate() {
        if i != r && !row[j].is_zero() {
            let f = row[j].clone();
            row.iter_mut().zip(&pivot).for_each(|(v, p)| *v -= &f * p);
        }
    }
}

/// Solves for the basic variables in `subset` with every other column at zero.
/// `None` when those columns are not independent or leave the system unsolved.
fn basic_solution(
    a: &[Vec<Rational>],
    b: &[Rational],
    subset: &[usize],
    cols: usize,
) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| subset.iter().map(|&j| row[j].clone()).chain(std::iter::once(rhs.clone())).collect())
        .collect();
    let k = subset.len();
    for j in 0..k {
        let r = (j..m.len()).find(|&r| !m[r][j].is_zero())?;
        m.swap(j, r);
        eliminate(&mut m, j, j);
    }
    if m[k..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (j, &col) in subset.iter().enumerate() {
        x[col] = m[j][k].clone();
    }
    Some(x)
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

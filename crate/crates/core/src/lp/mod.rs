//! Exact rational linear programming.
//!
//! Programs have nonnegative variables, `=`/`≤`/`≥` rows and a linear
//! objective. [`solve`] runs a two-phase dense simplex with Bland's rule;
//! [`vertices`] enumerates basic feasible solutions and exists only as an
//! independent oracle for small programs.

mod simplex;
mod vertex;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::ext::Rational;

pub use simplex::solve;
pub use vertex::{has_improving_ray, vertex_extremum, vertices, MAX_ORACLE_VARS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("program outside oracle scope: {0}")]
    OutOfScope(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Sparse affine expression `Σ coef·var + constant`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinExpr {
    terms: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinExpr {
    pub fn zero() -> LinExpr {
        LinExpr::default()
    }

    pub fn var(v: usize) -> LinExpr {
        LinExpr::zero().plus_term(v, Rational::from_integer(1.into()))
    }

    pub fn constant(c: Rational) -> LinExpr {
        LinExpr { terms: BTreeMap::new(), constant: c }
    }

    pub fn plus_term(mut self, v: usize, coef: Rational) -> LinExpr {
        self.add_term(v, coef);
        self
    }

    pub fn add_term(&mut self, v: usize, coef: Rational) {
        let entry = self.terms.entry(v).or_insert_with(Rational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn add_expr(&mut self, other: &LinExpr, scale: &Rational) {
        for (v, c) in &other.terms {
            self.add_term(*v, c * scale);
        }
        self.constant += &other.constant * scale;
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(v, c)| (*v, c))
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (v, c)| acc + c * &point[*v])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinProgram {
    num_vars: usize,
    constraints: Vec<Constraint>,
    objective: Vec<(usize, Rational)>,
    sense: Sense,
}

impl LinProgram {
    /// A feasibility program (objective 0) over `num_vars` nonnegative variables.
    pub fn new(num_vars: usize) -> LinProgram {
        LinProgram { num_vars, constraints: Vec::new(), objective: Vec::new(), sense: Sense::Minimize }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn add_var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    pub fn constrain(&mut self, coeffs: Vec<(usize, Rational)>, rel: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Adds `expr rel rhs`, moving the constant of `expr` to the right side.
    pub fn constrain_expr(&mut self, expr: &LinExpr, rel: Relation, rhs: &Rational) {
        let coeffs = expr.terms().map(|(v, c)| (v, c.clone())).collect();
        self.constrain(coeffs, rel, rhs - &expr.constant);
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<(usize, Rational)>) {
        self.sense = sense;
        self.objective = coeffs;
    }

    /// Sets the objective to the variable part of `expr`; the constant is
    /// the caller's to add back.
    pub fn set_objective_expr(&mut self, sense: Sense, expr: &LinExpr) {
        self.set_objective(sense, expr.terms().map(|(v, c)| (v, c.clone())).collect());
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let check = |coeffs: &[(usize, Rational)], what: &str| {
            coeffs.iter().try_for_each(|(v, _)| {
                if *v >= self.num_vars {
                    Err(LpError::Malformed(format!(
                        "{what} references variable {v} but the program has {}",
                        self.num_vars
                    )))
                } else {
                    Ok(())
                }
            })
        };
        for (i, c) in self.constraints.iter().enumerate() {
            check(&c.coeffs, &format!("row {i}"))?;
        }
        check(&self.objective, "objective")
    }

    pub(crate) fn dense_row(&self, coeffs: &[(usize, Rational)]) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.num_vars];
        for (v, c) in coeffs {
            row[*v] += c;
        }
        row
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective.iter().fold(Rational::zero(), |acc, (v, c)| acc + c * &point[*v])
    }

    /// Whether `point` satisfies every row and nonnegativity.
    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars
            && point.iter().all(|x| *x >= Rational::zero())
            && self.constraints.iter().all(|c| {
                let lhs = c.coeffs.iter().fold(Rational::zero(), |acc, (v, a)| acc + a * &point[*v]);
                match c.rel {
                    Relation::Eq => lhs == c.rhs,
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// Anything able to solve a [`LinProgram`] exactly. The dual and refinement
/// routines are generic over this so a test harness can observe every program.
pub trait LpSolver {
    fn solve(&self, program: &LinProgram) -> Result<LpOutcome, LpError>;
}

/// The default exact simplex solver.
#[derive(Clone, Copy, Debug, Default)]
pub struct Simplex;

impl LpSolver for Simplex {
    fn solve(&self, program: &LinProgram) -> Result<LpOutcome, LpError> {
        solve(program)
    }
}

impl<S: LpSolver + ?Sized> LpSolver for &S {
    fn solve(&self, program: &LinProgram) -> Result<LpOutcome, LpError> {
        (**self).solve(program)
    }
}

//! Functionals S → [0, ∞]: additive, order-preserving, sup-preserving maps.
//!
//! Table models store a functional extensionally. Pointwise models use
//! weights, `λ_c(x) = Σ c_p · x(p)` with `0 · ∞ = 0`. On an Lsc model a
//! weight below a point of infinite weight is irrelevant, so weights are
//! kept canonical: the infinite part is a down-set. Canonical weights are
//! unique and closed under addition.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::ext::{int, rat, ExtNat, ExtValue, Rational};
use crate::ideals::{all_ideals, Ideal, IdealSet};
use crate::lp::{LinProgram, LpOutcome, LpSolver, Relation, Sense, Simplex};
use crate::model::{CuModel, Element, IncreasingChain, TableModel};
use crate::report::{CheckReport, Scope, Tuple};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Functional {
    /// One value per element of a table model.
    Table(Vec<ExtValue>),
    /// One weight per coordinate of a pointwise model.
    Weights(Vec<ExtValue>),
}

/// `c · v` with `0 · ∞ = 0`, the only place this convention is used.
fn weight_times(c: &ExtValue, v: ExtNat) -> ExtValue {
    match (c, v) {
        _ if c.is_zero() || v.is_zero() => ExtValue::zero(),
        (ExtValue::Inf, _) | (_, ExtNat::Inf) => ExtValue::Inf,
        (ExtValue::Fin(q), ExtNat::Fin(n)) => ExtValue::Fin(q * int(n as i64)),
    }
}

impl Functional {
    pub fn zero(m: &CuModel) -> Functional {
        match m {
            CuModel::Table(t) => Functional::Table(vec![ExtValue::zero(); t.len()]),
            _ => Functional::Weights(vec![ExtValue::zero(); m.dim().unwrap()]),
        }
    }

    /// Weight functional, canonicalized on Lsc models.
    pub fn weights(m: &CuModel, c: Vec<ExtValue>) -> Result<Functional> {
        let Some(p) = m.poset() else {
            return Err(Error::Domain("weight functionals need a pointwise model".into()));
        };
        if c.len() != p.len() {
            return Err(Error::Domain(format!("{} weights for {} coordinates", c.len(), p.len())));
        }
        let canon = (0..p.len())
            .map(|a| {
                if (0..p.len()).any(|b| p.leq(a, b) && c[b].is_inf()) {
                    ExtValue::Inf
                } else {
                    c[a].clone()
                }
            })
            .collect();
        Ok(Functional::Weights(canon))
    }

    pub fn table(m: &CuModel, values: Vec<ExtValue>) -> Result<Functional> {
        match m {
            CuModel::Table(t) if values.len() == t.len() => Ok(Functional::Table(values)),
            _ => Err(Error::Domain("table functional does not match the model".into())),
        }
    }

    pub fn check(&self, m: &CuModel) -> Result<()> {
        match (m, self) {
            (CuModel::Table(t), Functional::Table(v)) if v.len() == t.len() => Ok(()),
            (CuModel::Vector(p) | CuModel::Lsc(p), Functional::Weights(c)) if c.len() == p.len() => Ok(()),
            _ => Err(Error::Domain(format!("functional does not belong to the {} model", m.kind()))),
        }
    }

    pub fn values(&self) -> &[ExtValue] {
        match self {
            Functional::Table(v) | Functional::Weights(v) => v,
        }
    }

    pub fn eval(&self, m: &CuModel, x: &Element) -> Result<ExtValue> {
        self.check(m)?;
        m.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Element) -> ExtValue {
        match (self, x) {
            (Functional::Table(v), Element::Table(i)) => v[*i].clone(),
            (Functional::Weights(c), _) => {
                c.iter().zip(x.coords().unwrap()).map(|(c, v)| weight_times(c, *v)).sum()
            }
            _ => panic!("functional and element come from different models"),
        }
    }

    pub fn add(&self, other: &Functional) -> Functional {
        let sum = self.values().iter().zip(other.values()).map(|(a, b)| a + b).collect();
        match self {
            Functional::Table(_) => Functional::Table(sum),
            Functional::Weights(_) => Functional::Weights(sum),
        }
    }

    /// `t · λ` for `t > 0`.
    pub fn scale(&self, t: &Rational) -> Option<Functional> {
        let v = self.values().iter().map(|a| a.scale(t)).collect::<Option<Vec<_>>>()?;
        Some(match self {
            Functional::Table(_) => Functional::Table(v),
            Functional::Weights(_) => Functional::Weights(v),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values().iter().all(ExtValue::is_zero)
    }

    pub fn is_finite_valued(&self) -> bool {
        self.values().iter().all(ExtValue::is_finite)
    }

    /// `λ ≤ μ` at every element. Weight functionals are compared on the
    /// indicators of all up-sets, which generate every element under
    /// addition and suprema.
    pub fn leq(&self, m: &CuModel, other: &Functional) -> Result<bool> {
        self.check(m)?;
        other.check(m)?;
        Ok(match m {
            CuModel::Table(_) => self.values().iter().zip(other.values()).all(|(a, b)| a <= b),
            _ => m.poset().unwrap().up_sets().iter().all(|u| {
                let x = m.point_unchecked(u.iter().map(|&b| ExtNat::Fin(b as u64)).collect());
                self.eval_unchecked(&x) <= other.eval_unchecked(&x)
            }),
        })
    }

    pub fn to_json(&self, m: &CuModel) -> Value {
        match (self, m) {
            (Functional::Table(v), CuModel::Table(t)) => {
                let map: Map<String, Value> =
                    v.iter().enumerate().map(|(i, a)| (t.name(i).to_string(), Value::String(a.to_string()))).collect();
                json!({ "table": map })
            }
            _ => json!({ "weights": self.values().iter().map(|a| a.to_string()).collect::<Vec<_>>() }),
        }
    }

    pub fn from_json(m: &CuModel, v: &Value) -> Result<Functional> {
        if let Some(w) = v.get("weights") {
            let c: Vec<ExtValue> = serde_json::from_value(w.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            return Functional::weights(m, c);
        }
        if let Some(table) = v.get("table").and_then(Value::as_object) {
            let t = m.table().ok_or_else(|| Error::Domain("table functional on a pointwise model".into()))?;
            let mut values = vec![None; t.len()];
            for (name, val) in table {
                let i = t.index_of(name).ok_or_else(|| Error::Domain(format!("unknown element {name:?}")))?;
                let a: ExtValue = serde_json::from_value(val.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                values[i] = Some(a);
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(i, a)| a.ok_or_else(|| Error::Parse(format!("no value for element {:?}", t.name(i)))))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Functional::Table(values));
        }
        Err(Error::Parse(format!("functional literal needs \"weights\" or \"table\": {v}")))
    }
}

/// The linear constraints cutting out F(S) for a table model.
#[derive(Clone, Debug)]
pub struct FunctionalCone {
    zero: usize,
    /// `(a, b, a + b)` for every unordered pair.
    additivity: Vec<(usize, usize, usize)>,
    /// `(a, b)` with `a ≤ b`, `a ≠ b`.
    order: Vec<(usize, usize)>,
}

impl FunctionalCone {
    pub fn new(t: &TableModel) -> FunctionalCone {
        let n = t.len();
        let mut additivity = Vec::new();
        let mut order = Vec::new();
        for a in 0..n {
            for b in a..n {
                additivity.push((a, b, t.add(a, b)));
            }
            for b in 0..n {
                if a != b && t.leq(a, b) {
                    order.push((a, b));
                }
            }
        }
        FunctionalCone { zero: t.zero(), additivity, order }
    }

    /// First violated constraint, as `(law, elements)`.
    pub fn violation(&self, v: &[ExtValue]) -> Option<(&'static str, Vec<usize>)> {
        if !v[self.zero].is_zero() {
            return Some(("zero", vec![self.zero]));
        }
        for &(a, b, s) in &self.additivity {
            if &v[a] + &v[b] != v[s] {
                return Some(("additive", vec![a, b]));
            }
        }
        for &(a, b) in &self.order {
            if v[a] > v[b] {
                return Some(("monotone", vec![a, b]));
            }
        }
        None
    }

    /// Adds the cone constraints restricted to the ideal `members`, with
    /// `var[x]` the LP variable holding the value at `x ∈ members`. Values
    /// outside the ideal are ∞ and satisfy every constraint automatically.
    pub fn constrain(&self, lp: &mut LinProgram, members: &[bool], var: &[Option<usize>]) {
        let one = Rational::one();
        lp.constrain(vec![(var[self.zero].expect("zero is in every ideal"), one.clone())], Relation::Eq, Rational::zero());
        for &(a, b, s) in &self.additivity {
            if members[a] && members[b] {
                let mut row = vec![(var[a].unwrap(), one.clone()), (var[b].unwrap(), one.clone())];
                row.push((var[s].unwrap(), -one.clone()));
                lp.constrain(row, Relation::Eq, Rational::zero());
            }
        }
        for &(a, b) in &self.order {
            if members[a] && members[b] {
                lp.constrain(vec![(var[a].unwrap(), one.clone()), (var[b].unwrap(), -one.clone())], Relation::Le, Rational::zero());
            }
        }
    }
}

/// Checks the functional axioms: exhaustively on table models, and on the
/// box with coordinates in {0, 1, 2, ∞} plus ramp chains for weights.
pub fn validate(m: &CuModel, f: &Functional) -> Result<CheckReport> {
    f.check(m)?;
    match (m, f) {
        (CuModel::Table(t), Functional::Table(v)) => {
            let mut report = CheckReport::new("functional", Scope::new(m, None, t.len()));
            let cone = FunctionalCone::new(t);
            report.tuples_checked = (1 + cone.additivity.len() + cone.order.len()) as u64;
            if let Some((law, idx)) = cone.violation(v) {
                let names = ["x", "y"];
                let tuple = Tuple(
                    idx.iter()
                        .zip(names)
                        .map(|(&i, n)| (n.to_string(), m.element_to_json(&Element::Table(i))))
                        .collect(),
                );
                report.fail(tuple.with("law", law.into()));
            }
            report.note("chains in a finite model are eventually constant");
            Ok(report.finish())
        }
        _ => {
            let cap = 2;
            let scope = m.scope(Some(cap))?;
            let mut report = CheckReport::new("functional", Scope::new(m, Some(cap), scope.len()));
            let zero = m.zero();
            if !f.eval_unchecked(&zero).is_zero() {
                report.fail(Tuple::elements(m, &[("x", &zero)]).with("law", "zero".into()));
            }
            let p = m.poset().unwrap();
            let ramps: Vec<Element> = (0..p.len())
                .map(|a| m.point_unchecked((0..p.len()).map(|b| ExtNat::Fin(p.leq(a, b) as u64)).collect()))
                .collect();
            for x in &scope {
                let fx = f.eval_unchecked(x);
                for y in &scope {
                    report.tuples_checked += 1;
                    let fy = f.eval_unchecked(y);
                    if f.eval_unchecked(&m.add_unchecked(x, y)) != &fx + &fy {
                        report.fail(Tuple::elements(m, &[("x", x), ("y", y)]).with("law", "additive".into()));
                    }
                    if m.leq_unchecked(x, y) && fx > fy {
                        report.fail(Tuple::elements(m, &[("x", x), ("y", y)]).with("law", "monotone".into()));
                    }
                }
                for step in &ramps {
                    report.tuples_checked += 1;
                    let sup = m.sup_chain(&IncreasingChain::linear(x.clone(), step.clone()))?;
                    let limit = if f.eval_unchecked(step).is_zero() { fx.clone() } else { ExtValue::Inf };
                    if f.eval_unchecked(&sup) != limit {
                        report.fail(Tuple::elements(m, &[("x", x), ("step", step)]).with("law", "supremum".into()));
                    }
                }
            }
            Ok(report.finish())
        }
    }
}

/// The functional that is 0 on `J` and ∞ elsewhere.
pub fn lambda_j(m: &CuModel, j: &Ideal) -> Functional {
    let indicator = |inside: bool| if inside { ExtValue::zero() } else { ExtValue::Inf };
    match j.set() {
        IdealSet::Members(b) => Functional::Table(b.iter().map(|&x| indicator(x)).collect()),
        IdealSet::Support(u) => {
            Functional::weights(m, u.iter().map(|&x| indicator(x)).collect()).expect("pointwise model")
        }
    }
}

/// `{x : λ(x') < ∞ for all x' ≪ x}`.
pub fn support_ideal(m: &CuModel, f: &Functional) -> Result<Ideal> {
    f.check(m)?;
    match f {
        // Every element of a table model is compact.
        Functional::Table(v) => Ideal::from_set(m, IdealSet::Members(v.iter().map(ExtValue::is_finite).collect())),
        Functional::Weights(c) => Ideal::support(m, c.iter().map(ExtValue::is_finite).collect()),
    }
}

/// ε(λ) = lim (1/n)·λ, which is `λ_J` for the support ideal `J` of λ.
pub fn epsilon(m: &CuModel, f: &Functional) -> Result<Functional> {
    Ok(lambda_j(m, &support_ideal(m, f)?))
}

/// `Some(δ)` with `λ + δ = μ`, or `None` when no functional δ exists
/// (with weights: no weight functional).
pub fn algebraic_order_witness(m: &CuModel, lambda: &Functional, mu: &Functional) -> Result<Option<Functional>> {
    algebraic_order_witness_with(&Simplex, m, lambda, mu)
}

pub fn algebraic_order_witness_with<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    lambda: &Functional,
    mu: &Functional,
) -> Result<Option<Functional>> {
    if !lambda.leq(m, mu)? {
        return Err(Error::Precondition("λ is not below μ".into()));
    }
    match m {
        CuModel::Table(t) => {
            let cone = FunctionalCone::new(t);
            let (lv, mv) = (lambda.values(), mu.values());
            let j_mu: Vec<bool> = mv.iter().map(ExtValue::is_finite).collect();
            for k in all_ideals(m) {
                let IdealSet::Members(kset) = k.set() else { unreachable!() };
                let compatible = (0..t.len()).all(|x| (kset[x] && lv[x].is_finite()) == j_mu[x]);
                if !compatible {
                    continue;
                }
                let mut lp = LinProgram::new(0);
                let var: Vec<Option<usize>> =
                    kset.iter().map(|&inside| inside.then(|| lp.add_var())).collect();
                cone.constrain(&mut lp, kset, &var);
                for x in (0..t.len()).filter(|&x| j_mu[x]) {
                    let d = mv[x].as_finite().unwrap() - lv[x].as_finite().unwrap();
                    lp.constrain(vec![(var[x].unwrap(), Rational::one())], Relation::Eq, d);
                }
                if let LpOutcome::Optimal { point, .. } = solver.solve(&lp)? {
                    let delta = var
                        .iter()
                        .map(|v| v.map_or(ExtValue::Inf, |i| ExtValue::Fin(point[i].clone())))
                        .collect();
                    return Ok(Some(Functional::Table(delta)));
                }
            }
            Ok(None)
        }
        _ => {
            let mut delta = Vec::new();
            for (l, u) in lambda.values().iter().zip(mu.values()) {
                delta.push(match (l, u) {
                    (ExtValue::Inf, _) => ExtValue::zero(),
                    (ExtValue::Fin(_), ExtValue::Inf) => ExtValue::Inf,
                    (ExtValue::Fin(a), ExtValue::Fin(b)) => {
                        if b < a {
                            return Ok(None);
                        }
                        ExtValue::Fin(b - a)
                    }
                });
            }
            let delta = Functional::weights(m, delta)?;
            Ok((lambda.add(&delta) == *mu).then_some(delta))
        }
    }
}

/// A 2×2 matrix of functionals with row sums λᵢ and column sums μⱼ.
pub type Refinement = [[Functional; 2]; 2];

pub fn refine(m: &CuModel, l1: &Functional, l2: &Functional, m1: &Functional, m2: &Functional) -> Result<Option<Refinement>> {
    refine_with(&Simplex, m, l1, l2, m1, m2)
}

pub fn refine_with<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    l1: &Functional,
    l2: &Functional,
    m1: &Functional,
    m2: &Functional,
) -> Result<Option<Refinement>> {
    for f in [l1, l2, m1, m2] {
        f.check(m)?;
    }
    if l1.add(l2) != m1.add(m2) {
        return Err(Error::Precondition("λ₁ + λ₂ differs from μ₁ + μ₂".into()));
    }
    let rows = [l1.values(), l2.values()];
    let cols = [m1.values(), m2.values()];
    match m {
        CuModel::Table(t) => refine_table(solver, m, t, rows, cols),
        _ => {
            let k = m.dim().unwrap();
            let mut x: [[Vec<ExtValue>; 2]; 2] = Default::default();
            for p in 0..k {
                let a = [rows[0][p].clone(), rows[1][p].clone()];
                let b = [cols[0][p].clone(), cols[1][p].clone()];
                let Some(cell) = refine_coordinate(solver, &a, &b)? else {
                    return Ok(None);
                };
                for (i, row) in cell.into_iter().enumerate() {
                    for (j, v) in row.into_iter().enumerate() {
                        x[i][j].push(v);
                    }
                }
            }
            let [[x11, x12], [x21, x22]] = x;
            Ok(Some([
                [Functional::weights(m, x11)?, Functional::weights(m, x12)?],
                [Functional::weights(m, x21)?, Functional::weights(m, x22)?],
            ]))
        }
    }
}

/// Refines `a₁ + a₂ = b₁ + b₂` in [0, ∞]. Finite sums go through a 4-variable
/// LP; with an infinite sum a cell with an infinite row and column sum takes ∞
/// and the opposite cell takes the minimum of its margins.
fn refine_coordinate<S: LpSolver>(solver: &S, a: &[ExtValue; 2], b: &[ExtValue; 2]) -> Result<Option<[[ExtValue; 2]; 2]>> {
    if a.iter().all(ExtValue::is_finite) && b.iter().all(ExtValue::is_finite) {
        let one = Rational::one();
        let mut lp = LinProgram::new(4);
        for i in 0..2 {
            lp.constrain(vec![(2 * i, one.clone()), (2 * i + 1, one.clone())], Relation::Eq, a[i].as_finite().unwrap().clone());
            lp.constrain(vec![(i, one.clone()), (2 + i, one.clone())], Relation::Eq, b[i].as_finite().unwrap().clone());
        }
        return Ok(match solver.solve(&lp)? {
            LpOutcome::Optimal { point, .. } => {
                let v = |i: usize| ExtValue::Fin(point[i].clone());
                Some([[v(0), v(1)], [v(2), v(3)]])
            }
            _ => None,
        });
    }
    let (Some(i), Some(j)) = (a.iter().position(ExtValue::is_inf), b.iter().position(ExtValue::is_inf)) else {
        return Ok(None);
    };
    let (i2, j2) = (1 - i, 1 - j);
    let mut x: [[ExtValue; 2]; 2] = Default::default();
    x[i][j] = ExtValue::Inf;
    x[i2][j2] = a[i2].clone().min(b[j2].clone());
    x[i2][j] = a[i2].monus(&x[i2][j2]);
    x[i][j2] = b[j2].monus(&x[i2][j2]);
    Ok(Some(x))
}

fn refine_table<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    t: &TableModel,
    rows: [&[ExtValue]; 2],
    cols: [&[ExtValue]; 2],
) -> Result<Option<Refinement>> {
    let n = t.len();
    let cone = FunctionalCone::new(t);
    let ideals: Vec<Vec<bool>> = all_ideals(m)
        .into_iter()
        .map(|j| match j.set() {
            IdealSet::Members(b) => b.clone(),
            IdealSet::Support(_) => unreachable!(),
        })
        .collect();
    let finite = |v: &[ExtValue]| v.iter().map(ExtValue::is_finite).collect::<Vec<bool>>();
    let (jr, jc) = ([finite(rows[0]), finite(rows[1])], [finite(cols[0]), finite(cols[1])]);
    let meet = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(&x, &y)| x && y).collect::<Vec<bool>>();

    for k11 in &ideals {
        for k12 in &ideals {
            if meet(k11, k12) != jr[0] {
                continue;
            }
            for k21 in &ideals {
                if meet(k11, k21) != jc[0] {
                    continue;
                }
                for k22 in &ideals {
                    if meet(k21, k22) != jr[1] || meet(k12, k22) != jc[1] {
                        continue;
                    }
                    let ks = [[k11, k12], [k21, k22]];
                    let mut lp = LinProgram::new(0);
                    let mut var: [[Vec<Option<usize>>; 2]; 2] = Default::default();
                    for i in 0..2 {
                        for j in 0..2 {
                            var[i][j] = ks[i][j].iter().map(|&inside| inside.then(|| lp.add_var())).collect();
                            cone.constrain(&mut lp, ks[i][j], &var[i][j]);
                        }
                    }
                    let one = Rational::one();
                    for x in 0..n {
                        for i in 0..2 {
                            if jr[i][x] {
                                let row = vec![(var[i][0][x].unwrap(), one.clone()), (var[i][1][x].unwrap(), one.clone())];
                                lp.constrain(row, Relation::Eq, rows[i][x].as_finite().unwrap().clone());
                            }
                            if jc[i][x] {
                                let col = vec![(var[0][i][x].unwrap(), one.clone()), (var[1][i][x].unwrap(), one.clone())];
                                lp.constrain(col, Relation::Eq, cols[i][x].as_finite().unwrap().clone());
                            }
                        }
                    }
                    if let LpOutcome::Optimal { point, .. } = solver.solve(&lp)? {
                        let cell = |i: usize, j: usize| {
                            Functional::Table(
                                var[i][j].iter().map(|v| v.map_or(ExtValue::Inf, |k| ExtValue::Fin(point[k].clone()))).collect(),
                            )
                        };
                        return Ok(Some([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Whether `λa + λc ≤ λb + λc` implies `λa + ε(λc) ≤ λb + ε(λc)` here.
pub fn check_pseudo_cancellation(m: &CuModel, a: &Functional, b: &Functional, c: &Functional) -> Result<bool> {
    if !a.add(c).leq(m, &b.add(c))? {
        return Err(Error::Precondition("λa + λc is not below λb + λc".into()));
    }
    let e = epsilon(m, c)?;
    a.add(&e).leq(m, &b.add(&e))
}

/// Seeded sample of valid functionals: the zero functional, then `λ_J` for
/// every ideal, then random weights (pointwise) or random vertices of the
/// functional cone on a random ideal (tables), then positive combinations.
pub fn sample_functionals(m: &CuModel, n: usize, seed: u64) -> Vec<Functional> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Functional::zero(m)];
    for j in all_ideals(m) {
        let f = lambda_j(m, &j);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    let ideals = all_ideals(m);
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        let f = if attempts % 4 == 0 && out.len() >= 2 {
            let a = out[rng.gen_range(0..out.len())].clone();
            let b = out[rng.gen_range(0..out.len())].clone();
            let s = rat(rng.gen_range(1..=4), rng.gen_range(1..=3));
            a.scale(&s).unwrap().add(&b)
        } else {
            match m {
                CuModel::Table(t) => random_table_functional(t, &ideals[rng.gen_range(0..ideals.len())], &mut rng)
                    .unwrap_or_else(|| lambda_j(m, &ideals[rng.gen_range(0..ideals.len())])),
                _ => {
                    let c = (0..m.dim().unwrap()).map(|_| random_weight(&mut rng)).collect();
                    Functional::weights(m, c).expect("pointwise")
                }
            }
        };
        out.push(f);
    }
    out.truncate(n);
    out
}

pub(crate) fn random_weight(rng: &mut ChaCha8Rng) -> ExtValue {
    match rng.gen_range(0..8) {
        0 => ExtValue::Inf,
        1 | 2 => ExtValue::zero(),
        _ => ExtValue::Fin(rat(rng.gen_range(1..=6), rng.gen_range(1..=3))),
    }
}

/// Whether the rows of `r` sum to `λ₁, λ₂` and its columns to `μ₁, μ₂`.
pub fn is_refinement(r: &Refinement, l1: &Functional, l2: &Functional, m1: &Functional, m2: &Functional) -> bool {
    r[0][0].add(&r[0][1]) == *l1 && r[1][0].add(&r[1][1]) == *l2 && r[0][0].add(&r[1][0]) == *m1 && r[0][1].add(&r[1][1]) == *m2
}

/// Seeded quadruples `[λ₁, λ₂, μ₁, μ₂]` with `λ₁ + λ₂ = μ₁ + μ₂`. Even draws
/// are row and column sums of a random 2×2 matrix; odd draws pick λ₁, λ₂, μ₁
/// and complete μ₂ through the algebraic order when `μ₁ ≤ λ₁ + λ₂`.
pub fn sample_equal_sums(m: &CuModel, n: usize, seed: u64) -> Result<Vec<[Functional; 4]>> {
    let pool = sample_functionals(m, 48, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = Vec::with_capacity(n);
    let mut draw = 0usize;
    while out.len() < n {
        draw += 1;
        let mut pick = || pool[rng.gen_range(0..pool.len())].clone();
        if draw % 2 == 1 {
            let (l1, l2, m1) = (pick(), pick(), pick());
            let total = l1.add(&l2);
            if m1.leq(m, &total)? {
                if let Some(m2) = algebraic_order_witness(m, &m1, &total)? {
                    out.push([l1, l2, m1, m2]);
                    continue;
                }
            }
        }
        let x = [pick(), pick(), pick(), pick()];
        out.push([x[0].add(&x[1]), x[2].add(&x[3]), x[0].add(&x[2]), x[1].add(&x[3])]);
    }
    Ok(out)
}

/// A vertex of `{λ ∈ F(S) : λ < ∞ exactly on K, Σ_K λ = 1}` for a random
/// objective, or `None` if that slice is empty.
fn random_table_functional(t: &TableModel, k: &Ideal, rng: &mut ChaCha8Rng) -> Option<Functional> {
    let IdealSet::Members(kset) = k.set() else { unreachable!() };
    let cone = FunctionalCone::new(t);
    let mut lp = LinProgram::new(0);
    let var: Vec<Option<usize>> = kset.iter().map(|&inside| inside.then(|| lp.add_var())).collect();
    cone.constrain(&mut lp, kset, &var);
    let all: Vec<(usize, Rational)> = var.iter().flatten().map(|&v| (v, Rational::one())).collect();
    lp.constrain(all.clone(), Relation::Eq, Rational::one());
    let objective = all.iter().map(|(v, _)| (*v, int(rng.gen_range(-3..=3)))).collect();
    lp.set_objective(Sense::Maximize, objective);
    let LpOutcome::Optimal { point, .. } = crate::lp::solve(&lp).ok()? else {
        return None;
    };
    let scale = rat(rng.gen_range(1..=5), 1);
    debug_assert!(scale.is_positive());
    Some(Functional::Table(
        var.iter().map(|v| v.map_or(ExtValue::Inf, |i| ExtValue::Fin(&point[i] * &scale))).collect(),
    ))
}

//! Elements of the dual of F(S) generated by `x̂` and `h_J`, with
//! Riesz–Kantorovich meets and joins evaluated at a functional.
//!
//! A decomposition `λ = λ₁ + λ₂` is searched frame by frame. A frame fixes
//! where each part is infinite: for weights, which infinite coordinates of
//! λ each part carries; for tables, the support ideals `K₁, K₂` with
//! `K₁ ∩ K₂ = {λ < ∞}`. Inside a frame the finite values form a polyhedron
//! and both sides of the formula are linear in them, so every LP is finite.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ext::{int, parse_rational, rat, ExtNat, ExtValue, Rational};
use crate::functional::{lambda_j, sample_functionals, Functional, FunctionalCone};
use crate::ideals::{all_ideals, inf_with_idempotent, largest_element, Ideal, IdealSet};
use crate::lp::{LinExpr, LinProgram, LpOutcome, LpSolver, Relation, Sense, Simplex};
use crate::model::{CuModel, Element};
use crate::report::{CheckReport, Scope, Tuple};

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Hat(Element),
    Ideal(Ideal),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: Rational,
    pub gen: Generator,
}

/// A nonnegative combination `Σ cᵢ·gᵢ` of generators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DualElement {
    pub terms: Vec<Term>,
}

impl DualElement {
    pub fn zero() -> DualElement {
        DualElement::default()
    }

    pub fn hat(x: Element) -> DualElement {
        DualElement { terms: vec![Term { coef: Rational::one(), gen: Generator::Hat(x) }] }
    }

    pub fn ideal(j: Ideal) -> DualElement {
        DualElement { terms: vec![Term { coef: Rational::one(), gen: Generator::Ideal(j) }] }
    }

    pub fn plus(&self, other: &DualElement) -> DualElement {
        DualElement { terms: self.terms.iter().chain(&other.terms).cloned().collect() }
    }

    /// `t · f` for `t > 0`.
    pub fn scaled(&self, t: &Rational) -> Result<DualElement> {
        if !t.is_positive() {
            return Err(Error::Domain(format!("dual coefficients must be positive, got {t}")));
        }
        Ok(DualElement { terms: self.terms.iter().map(|s| Term { coef: &s.coef * t, gen: s.gen.clone() }).collect() })
    }

    pub fn check(&self, m: &CuModel) -> Result<()> {
        for t in &self.terms {
            if !t.coef.is_positive() {
                return Err(Error::Domain(format!("dual coefficients must be positive, got {}", t.coef)));
            }
            match &t.gen {
                Generator::Hat(x) => m.check(x)?,
                Generator::Ideal(j) => {
                    let ok = matches!(
                        (m, j.set()),
                        (CuModel::Table(_), IdealSet::Members(_)) | (CuModel::Vector(_) | CuModel::Lsc(_), IdealSet::Support(_))
                    );
                    if !ok {
                        return Err(Error::Domain("ideal generator from a different model".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, m: &CuModel) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                let gen = match &t.gen {
                    Generator::Hat(x) => json!({ "hat": m.element_to_json(x) }),
                    Generator::Ideal(j) => json!({ "ideal": j.to_json(m) }),
                };
                json!({ "coef": t.coef.to_string(), "gen": gen })
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(m: &CuModel, v: &Value) -> Result<DualElement> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("dual element needs a \"terms\" array: {v}")))?;
        let mut out = Vec::new();
        for t in terms {
            let coef = match t.get("coef") {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(n)) => n
                    .as_i64()
                    .map(int)
                    .ok_or_else(|| Error::Parse(format!("coefficient {n} is not an integer or \"p/q\"")))?,
                _ => return Err(Error::Parse(format!("term needs a \"coef\": {t}"))),
            };
            let gen = t.get("gen").ok_or_else(|| Error::Parse(format!("term needs a \"gen\": {t}")))?;
            let gen = if let Some(x) = gen.get("hat") {
                Generator::Hat(m.parse_element(x)?)
            } else if let Some(j) = gen.get("ideal") {
                Generator::Ideal(Ideal::from_json(m, j)?)
            } else {
                return Err(Error::Parse(format!("generator must be \"hat\" or \"ideal\": {gen}")));
            };
            out.push(Term { coef, gen });
        }
        let f = DualElement { terms: out };
        f.check(m)?;
        Ok(f)
    }
}

/// `f(λ)`, with `x̂(λ) = λ(x)` and `h_J(λ) = 0` if `λ ≤ λ_J`, else ∞.
pub fn eval(m: &CuModel, f: &DualElement, lambda: &Functional) -> Result<ExtValue> {
    f.check(m)?;
    lambda.check(m)?;
    let mut total = ExtValue::zero();
    for t in &f.terms {
        let v = match &t.gen {
            Generator::Hat(x) => lambda.eval_unchecked(x),
            Generator::Ideal(j) => {
                if lambda.leq(m, &lambda_j(m, j))? {
                    ExtValue::zero()
                } else {
                    ExtValue::Inf
                }
            }
        };
        total = total + v.scale(&t.coef).expect("positive coefficient");
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Slot {
    Inf,
    Var(usize),
}

/// One side of the formula inside a frame: ∞ outright, or `expr` as long as
/// every `forced` variable is zero and ∞ otherwise.
struct Side {
    infinite: bool,
    expr: LinExpr,
    forced: Vec<usize>,
}

struct Frame {
    lp: LinProgram,
    slots: [Vec<Slot>; 2],
}

fn frames(m: &CuModel, lambda: &Functional) -> Vec<Frame> {
    match (m, lambda) {
        (CuModel::Table(t), Functional::Table(lv)) => {
            let cone = FunctionalCone::new(t);
            let finite: Vec<bool> = lv.iter().map(ExtValue::is_finite).collect();
            let ideals: Vec<Vec<bool>> = all_ideals(m)
                .into_iter()
                .map(|j| match j.set() {
                    IdealSet::Members(b) => b.clone(),
                    IdealSet::Support(_) => unreachable!(),
                })
                .collect();
            let mut out = Vec::new();
            for k1 in &ideals {
                for k2 in &ideals {
                    if k1.iter().zip(k2).map(|(&a, &b)| a && b).ne(finite.iter().copied()) {
                        continue;
                    }
                    let mut lp = LinProgram::new(0);
                    let mut slots: [Vec<Slot>; 2] = Default::default();
                    for (side, k) in [k1, k2].into_iter().enumerate() {
                        let var: Vec<Option<usize>> = k.iter().map(|&inside| inside.then(|| lp.add_var())).collect();
                        cone.constrain(&mut lp, k, &var);
                        slots[side] = var.iter().map(|v| v.map_or(Slot::Inf, Slot::Var)).collect();
                    }
                    for (x, v) in lv.iter().enumerate() {
                        if let (ExtValue::Fin(q), Slot::Var(a), Slot::Var(b)) = (v, slots[0][x], slots[1][x]) {
                            lp.constrain(vec![(a, Rational::one()), (b, Rational::one())], Relation::Eq, q.clone());
                        }
                    }
                    out.push(Frame { lp, slots });
                }
            }
            out
        }
        (_, Functional::Weights(c)) => {
            let inf: Vec<usize> = (0..c.len()).filter(|&p| c[p].is_inf()).collect();
            let d = inf.len();
            let mut out = Vec::new();
            // Each infinite coordinate goes to part 1, part 2, or both.
            for code in 0..3usize.pow(d as u32) {
                let mut lp = LinProgram::new(0);
                let mut slots: [Vec<Slot>; 2] = [vec![Slot::Inf; c.len()], vec![Slot::Inf; c.len()]];
                let mut rest = code;
                let mut choice = vec![0; c.len()];
                for &p in &inf {
                    choice[p] = rest % 3;
                    rest /= 3;
                }
                for p in 0..c.len() {
                    match &c[p] {
                        ExtValue::Fin(q) => {
                            let (a, b) = (lp.add_var(), lp.add_var());
                            slots[0][p] = Slot::Var(a);
                            slots[1][p] = Slot::Var(b);
                            lp.constrain(vec![(a, Rational::one()), (b, Rational::one())], Relation::Eq, q.clone());
                        }
                        ExtValue::Inf => match choice[p] {
                            0 => slots[1][p] = Slot::Var(lp.add_var()),
                            1 => slots[0][p] = Slot::Var(lp.add_var()),
                            _ => {}
                        },
                    }
                }
                out.push(Frame { lp, slots });
            }
            out
        }
        _ => Vec::new(),
    }
}

fn side(m: &CuModel, f: &DualElement, slots: &[Slot]) -> Side {
    let mut s = Side { infinite: false, expr: LinExpr::zero(), forced: Vec::new() };
    for t in &f.terms {
        match (&t.gen, m) {
            (Generator::Hat(Element::Table(x)), _) => match slots[*x] {
                Slot::Inf => s.infinite = true,
                Slot::Var(v) => s.expr.add_term(v, t.coef.clone()),
            },
            (Generator::Hat(x), _) => {
                for (p, value) in x.coords().unwrap().iter().enumerate() {
                    match (value, slots[p]) {
                        (ExtNat::Fin(0), _) => {}
                        (_, Slot::Inf) => s.infinite = true,
                        (ExtNat::Inf, Slot::Var(v)) => s.forced.push(v),
                        (ExtNat::Fin(n), Slot::Var(v)) => s.expr.add_term(v, &t.coef * int(*n as i64)),
                    }
                }
            }
            (Generator::Ideal(j), _) => {
                let inside = match j.set() {
                    IdealSet::Members(b) | IdealSet::Support(b) => b,
                };
                for (x, &member) in inside.iter().enumerate() {
                    if member {
                        match slots[x] {
                            Slot::Inf => s.infinite = true,
                            Slot::Var(v) => s.forced.push(v),
                        }
                    }
                }
            }
        }
    }
    s
}

fn decomposition(m: &CuModel, frame: &Frame, point: &[Rational]) -> (Functional, Functional) {
    let build = |slots: &[Slot]| {
        let v: Vec<ExtValue> = slots
            .iter()
            .map(|s| match s {
                Slot::Inf => ExtValue::Inf,
                Slot::Var(i) => ExtValue::Fin(point[*i].clone()),
            })
            .collect();
        match m {
            CuModel::Table(_) => Functional::Table(v),
            _ => Functional::weights(m, v).expect("pointwise"),
        }
    };
    (build(&frame.slots[0]), build(&frame.slots[1]))
}

fn feasible<S: LpSolver>(solver: &S, lp: &LinProgram) -> Result<bool> {
    Ok(!matches!(solver.solve(lp)?, LpOutcome::Infeasible))
}

/// Value of the meet and a decomposition attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct Meet {
    pub value: ExtValue,
    pub decomposition: (Functional, Functional),
}

/// `(f ∧ g)(λ) = min { f(λ₁) + g(λ₂) : λ = λ₁ + λ₂ }`, with a minimizer.
pub fn meet_eval(m: &CuModel, f: &DualElement, g: &DualElement, lambda: &Functional) -> Result<Meet> {
    meet_eval_with(&Simplex, m, f, g, lambda)
}

pub fn meet_eval_with<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    f: &DualElement,
    g: &DualElement,
    lambda: &Functional,
) -> Result<Meet> {
    f.check(m)?;
    g.check(m)?;
    lambda.check(m)?;
    let mut best: Option<Meet> = None;
    for frame in frames(m, lambda) {
        let (a, b) = (side(m, f, &frame.slots[0]), side(m, g, &frame.slots[1]));
        if a.infinite || b.infinite {
            continue;
        }
        let mut lp = frame.lp.clone();
        for &v in a.forced.iter().chain(&b.forced) {
            lp.constrain(vec![(v, Rational::one())], Relation::Eq, Rational::zero());
        }
        let mut objective = a.expr.clone();
        objective.add_expr(&b.expr, &Rational::one());
        lp.set_objective_expr(Sense::Minimize, &objective);
        if let LpOutcome::Optimal { value, point } = solver.solve(&lp)? {
            let value = ExtValue::Fin(value + objective.constant_term());
            if best.as_ref().is_none_or(|m| value < m.value) {
                best = Some(Meet { value, decomposition: decomposition(m, &frame, &point) });
            }
        }
    }
    Ok(best.unwrap_or_else(|| Meet {
        // Every decomposition gives ∞, the trivial one included.
        value: ExtValue::Inf,
        decomposition: (lambda.clone(), Functional::zero(m)),
    }))
}

/// `(f ∨ g)(λ) = sup { f(λ₁) + g(λ₂) : λ = λ₁ + λ₂ }`.
pub fn join_eval(m: &CuModel, f: &DualElement, g: &DualElement, lambda: &Functional) -> Result<ExtValue> {
    join_eval_with(&Simplex, m, f, g, lambda)
}

pub fn join_eval_with<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    f: &DualElement,
    g: &DualElement,
    lambda: &Functional,
) -> Result<ExtValue> {
    f.check(m)?;
    g.check(m)?;
    lambda.check(m)?;
    let mut best = ExtValue::zero();
    for frame in frames(m, lambda) {
        if !feasible(solver, &frame.lp)? {
            continue;
        }
        let (a, b) = (side(m, f, &frame.slots[0]), side(m, g, &frame.slots[1]));
        if a.infinite || b.infinite {
            return Ok(ExtValue::Inf);
        }
        let forced: Vec<(usize, Rational)> = a.forced.iter().chain(&b.forced).map(|&v| (v, Rational::one())).collect();
        if !forced.is_empty() {
            let mut lp = frame.lp.clone();
            lp.set_objective(Sense::Maximize, forced);
            match solver.solve(&lp)? {
                LpOutcome::Optimal { value, .. } if value.is_zero() => {}
                _ => return Ok(ExtValue::Inf),
            }
        }
        let mut objective = a.expr.clone();
        objective.add_expr(&b.expr, &Rational::one());
        let mut lp = frame.lp.clone();
        lp.set_objective_expr(Sense::Maximize, &objective);
        match solver.solve(&lp)? {
            LpOutcome::Optimal { value, .. } => {
                let value = ExtValue::Fin(value + objective.constant_term());
                best = best.max(value);
            }
            LpOutcome::Unbounded => return Ok(ExtValue::Inf),
            LpOutcome::Infeasible => {}
        }
    }
    Ok(best)
}

/// `((x̂ ∧ h_J)(λ), sup { λ(z) : z ∈ J, z ≤ x })` and the maximizing `z`.
pub fn hat_wedge_ideal(m: &CuModel, x: &Element, j: &Ideal, lambda: &Functional) -> Result<(ExtValue, ExtValue, Element)> {
    hat_wedge_ideal_with(&Simplex, m, x, j, lambda)
}

pub fn hat_wedge_ideal_with<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    x: &Element,
    j: &Ideal,
    lambda: &Functional,
) -> Result<(ExtValue, ExtValue, Element)> {
    let meet = meet_eval_with(solver, m, &DualElement::hat(x.clone()), &DualElement::ideal(j.clone()), lambda)?;
    let z = match m {
        CuModel::Table(t) => {
            let candidates = (0..t.len()).map(Element::Table).filter(|z| {
                j.contains(m, z).unwrap_or(false) && m.leq_unchecked(z, x)
            });
            let mut best: Option<(ExtValue, Element)> = None;
            for z in candidates {
                let v = lambda.eval_unchecked(&z);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, z));
                }
            }
            best.expect("zero is a candidate").1
        }
        _ => inf_with_idempotent(m, x, &largest_element(m, j))?,
    };
    Ok((meet.value, lambda.eval(m, &z)?, z))
}

/// Random dual element with one or two terms, mostly hats of scope elements.
pub fn random_dual(m: &CuModel, scope: &[Element], ideals: &[Ideal], rng: &mut ChaCha8Rng) -> DualElement {
    let terms = (0..rng.gen_range(1..=2))
        .map(|_| {
            let coef = rat(rng.gen_range(1..=4), rng.gen_range(1..=2));
            let gen = if rng.gen_range(0..4) == 0 {
                Generator::Ideal(ideals[rng.gen_range(0..ideals.len())].clone())
            } else {
                Generator::Hat(scope[rng.gen_range(0..scope.len())].clone())
            };
            Term { coef, gen }
        })
        .collect();
    let f = DualElement { terms };
    debug_assert!(f.check(m).is_ok());
    f
}

/// Sampled checks of `f + (g ∧ h) = (f + g) ∧ (f + h)`, of
/// `f ∧ sup_j g_j = sup_j (f ∧ g_j)` for finite increasing families, and of
/// `h_J = ŵ_J` (alone and under a meet with a hat).
pub fn check_dual_lattice_identities(m: &CuModel, cap: u64, samples: usize, seed: u64) -> Result<CheckReport> {
    check_dual_lattice_identities_with(&Simplex, m, cap, samples, seed)
}

pub fn check_dual_lattice_identities_with<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    cap: u64,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let scope = m.scope(Some(cap))?;
    let ideals = all_ideals(m);
    let lambdas = sample_functionals(m, samples.max(1), seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut report = CheckReport::new("dual-lattice", Scope::new(m, Some(cap), scope.len()));
    report.note("directed suprema are checked on finite increasing families");
    let js = |f: &DualElement| f.to_json(m);
    for i in 0..samples {
        let lambda = &lambdas[i % lambdas.len()];
        let (f, g, h) = (
            random_dual(m, &scope, &ideals, &mut rng),
            random_dual(m, &scope, &ideals, &mut rng),
            random_dual(m, &scope, &ideals, &mut rng),
        );
        let record = |report: &mut CheckReport, identity: &str, extra: Tuple| {
            let mut t = Tuple::new().with("identity", identity.into()).with("lambda", lambda.to_json(m));
            t.0.extend(extra.0);
            report.fail(t);
        };

        report.tuples_checked += 1;
        let lhs = eval(m, &f, lambda)? + meet_eval_with(solver, m, &g, &h, lambda)?.value;
        let rhs = meet_eval_with(solver, m, &f.plus(&g), &f.plus(&h), lambda)?.value;
        if lhs != rhs {
            record(&mut report, "distributive", Tuple::new().with("f", js(&f)).with("g", js(&g)).with("h", js(&h)));
        }

        report.tuples_checked += 1;
        let steps = rng.gen_range(1..=3);
        let mut family = vec![g.clone()];
        for _ in 1..steps {
            let next = family.last().unwrap().plus(&random_dual(m, &scope, &ideals, &mut rng));
            family.push(next);
        }
        let sup_of_meets = family
            .iter()
            .map(|gj| meet_eval_with(solver, m, &f, gj, lambda).map(|r| r.value))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap();
        let meet_of_sup = meet_eval_with(solver, m, &f, family.last().unwrap(), lambda)?.value;
        if sup_of_meets != meet_of_sup {
            let fam: Vec<Value> = family.iter().map(js).collect();
            record(&mut report, "directed", Tuple::new().with("f", js(&f)).with("family", Value::Array(fam)));
        }

        report.tuples_checked += 1;
        let j = &ideals[rng.gen_range(0..ideals.len())];
        let hj = DualElement::ideal(j.clone());
        let wj = DualElement::hat(largest_element(m, j));
        let x = DualElement::hat(scope[rng.gen_range(0..scope.len())].clone());
        let plain = eval(m, &hj, lambda)? == eval(m, &wj, lambda)?;
        let under_meet = meet_eval_with(solver, m, &x, &hj, lambda)?.value == meet_eval_with(solver, m, &x, &wj, lambda)?.value;
        if !plain || !under_meet {
            record(&mut report, "h_J = hat(w_J)", Tuple::new().with("ideal", j.to_json(m)).with("x", js(&x)));
        }
    }
    Ok(report.finish())
}

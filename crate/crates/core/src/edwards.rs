//! Edwards' condition `(x̂ ∧ ŷ)(λ) = sup { λ(z) : z ≤ x, y }`, its witnesses,
//! the dual condition and the reduction of ∞-valued functionals to the
//! finite-valued case.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::dual::{join_eval_with, meet_eval_with, DualElement};
use crate::error::{Error, Result};
use crate::ext::{ExtNat, ExtValue, Rational};
use crate::functional::{sample_functionals, support_ideal, Functional};
use crate::ideals::{generate_ideal, inf_with_idempotent, largest_element};
use crate::lp::{LpSolver, Simplex};
use crate::model::{CuModel, Element};

#[derive(Clone, Debug, PartialEq)]
pub struct EdwardsInstance {
    pub x: Element,
    pub y: Element,
    pub lambda: Functional,
}

impl EdwardsInstance {
    pub fn new(m: &CuModel, x: Element, y: Element, lambda: Functional) -> Result<EdwardsInstance> {
        m.check(&x)?;
        m.check(&y)?;
        lambda.check(m)?;
        Ok(EdwardsInstance { x, y, lambda })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdwardsReport {
    pub instance: EdwardsInstance,
    pub lhs: ExtValue,
    pub rhs: ExtValue,
    pub witness_z: Element,
    pub decomposition: (Functional, Functional),
    pub trace: Vec<Value>,
    pub pass: bool,
}

impl EdwardsReport {
    pub fn to_json(&self, m: &CuModel) -> Value {
        json!({
            "x": m.element_to_json(&self.instance.x),
            "y": m.element_to_json(&self.instance.y),
            "lambda": self.instance.lambda.to_json(m),
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "witness_z": m.element_to_json(&self.witness_z),
            "decomposition": [self.decomposition.0.to_json(m), self.decomposition.1.to_json(m)],
            "trace": self.trace,
            "pass": self.pass,
        })
    }
}

/// `inf { λ₁(x) + λ₂(y) : λ = λ₁ + λ₂ }` with a minimizing decomposition.
pub fn edwards_lhs(m: &CuModel, inst: &EdwardsInstance) -> Result<(ExtValue, (Functional, Functional))> {
    edwards_lhs_with(&Simplex, m, inst)
}

pub fn edwards_lhs_with<S: LpSolver>(
    solver: &S,
    m: &CuModel,
    inst: &EdwardsInstance,
) -> Result<(ExtValue, (Functional, Functional))> {
    let r = meet_eval_with(solver, m, &DualElement::hat(inst.x.clone()), &DualElement::hat(inst.y.clone()), &inst.lambda)?;
    Ok((r.value, r.decomposition))
}

/// `sup { λ(z) : z ≤ x, y }` with a maximizing `z`.
pub fn edwards_rhs(m: &CuModel, inst: &EdwardsInstance) -> Result<(ExtValue, Element)> {
    inst.lambda.check(m)?;
    let z = match m {
        CuModel::Table(t) => {
            let mut best: Option<(ExtValue, Element)> = None;
            for z in (0..t.len()).map(Element::Table) {
                if m.leq(&z, &inst.x)? && m.leq(&z, &inst.y)? {
                    let v = inst.lambda.eval(m, &z)?;
                    if best.as_ref().is_none_or(|(b, _)| v > *b) {
                        best = Some((v, z));
                    }
                }
            }
            best.expect("zero is a lower bound").1
        }
        _ => m.pointwise_min(&inst.x, &inst.y).expect("pointwise model"),
    };
    Ok((inst.lambda.eval(m, &z)?, z))
}

fn witness_identity(m: &CuModel, inst: &EdwardsInstance, d: &(Functional, Functional), z: &Element) -> Result<bool> {
    Ok(d.0.eval(m, &inst.x)? + d.1.eval(m, &inst.y)? == inst.lambda.eval(m, z)?)
}

/// Both sides computed independently; passes when they agree and the
/// decomposition and `z` satisfy `λ₁(x) + λ₂(y) = λ(z)`.
pub fn check_one<S: LpSolver>(solver: &S, m: &CuModel, inst: &EdwardsInstance) -> Result<EdwardsReport> {
    let (lhs, decomposition) = edwards_lhs_with(solver, m, inst)?;
    let (rhs, witness_z) = edwards_rhs(m, inst)?;
    let pass = lhs == rhs && rhs <= lhs && witness_identity(m, inst, &decomposition, &witness_z)?;
    Ok(EdwardsReport { instance: inst.clone(), lhs, rhs, witness_z, decomposition, trace: Vec::new(), pass })
}

pub fn check_edwards(m: &CuModel, instances: &[EdwardsInstance]) -> Result<Vec<EdwardsReport>> {
    instances.iter().map(|i| check_one(&Simplex, m, i)).collect()
}

/// All `z ≤ b`; pointwise coordinates that are ∞ in `b` range over `0..=cap` and ∞.
pub fn lower_bounds(m: &CuModel, b: &Element, cap: u64) -> Result<Vec<Element>> {
    m.check(b)?;
    Ok(match m {
        CuModel::Table(t) => (0..t.len()).map(Element::Table).filter(|z| m.leq_unchecked(z, b)).collect(),
        _ => b
            .coords()
            .unwrap()
            .iter()
            .map(|c| match c {
                ExtNat::Fin(n) => (0..=*n).map(ExtNat::Fin).collect::<Vec<_>>(),
                ExtNat::Inf => (0..=cap).map(ExtNat::Fin).chain([ExtNat::Inf]).collect(),
            })
            .multi_cartesian_product()
            .filter_map(|c| m.point(c).ok())
            .collect(),
    })
}

/// Some `z̃` with `z' ≪ z̃ ≤ x, y` and `λ(z̃) > t`: `z` itself when it
/// already works, otherwise the search candidate of least λ above `t`.
/// `Ok(None)` means the search failed.
pub fn improve_witness(
    m: &CuModel,
    inst: &EdwardsInstance,
    zp: &Element,
    z: &Element,
    t: &Rational,
    cap: u64,
) -> Result<Option<Element>> {
    if !(m.waybelow(zp, z)? && m.leq(z, &inst.x)? && m.leq(z, &inst.y)?) {
        return Err(Error::Precondition("improve_witness needs z' ≪ z ≤ x, y".into()));
    }
    let t_ext = ExtValue::Fin(t.clone());
    if edwards_lhs(m, inst)?.0 <= t_ext {
        return Err(Error::Precondition(format!("t = {t} is not below the decomposition infimum")));
    }
    if inst.lambda.eval(m, z)? > t_ext {
        return Ok(Some(z.clone()));
    }
    let bound = edwards_rhs(m, inst)?.1;
    let mut best: Option<(ExtValue, Element)> = None;
    for c in lower_bounds(m, &bound, cap)? {
        if !(m.leq(&c, &inst.x)? && m.leq(&c, &inst.y)? && m.waybelow(zp, &c)?) {
            continue;
        }
        let v = inst.lambda.eval(m, &c)?;
        if v > t_ext && best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, c));
        }
    }
    Ok(best.map(|(_, c)| c))
}

/// A maximizer of λ over `{z ≤ x, y}` among those with `z₀' ≪ z`.
pub fn attain_above(m: &CuModel, inst: &EdwardsInstance, z0p: &Element, z0: &Element, cap: u64) -> Result<Option<Element>> {
    if !(m.waybelow(z0p, z0)? && m.leq(z0, &inst.x)? && m.leq(z0, &inst.y)?) {
        return Err(Error::Precondition("attainment needs z₀' ≪ z₀ ≤ x, y".into()));
    }
    let (sup, bound) = edwards_rhs(m, inst)?;
    for c in lower_bounds(m, &bound, cap)? {
        if m.leq(&c, &inst.x)? && m.leq(&c, &inst.y)? && m.waybelow(z0p, &c)? && inst.lambda.eval(m, &c)? == sup {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `(sup { λ₁(x) + λ₂(y) : λ = λ₁ + λ₂ }, inf { λ(a) : x, y ≤ a })`.
pub fn dual_edwards_check(m: &CuModel, inst: &EdwardsInstance) -> Result<(ExtValue, ExtValue)> {
    dual_edwards_check_with(&Simplex, m, inst)
}

pub fn dual_edwards_check_with<S: LpSolver>(solver: &S, m: &CuModel, inst: &EdwardsInstance) -> Result<(ExtValue, ExtValue)> {
    let left = join_eval_with(solver, m, &DualElement::hat(inst.x.clone()), &DualElement::hat(inst.y.clone()), &inst.lambda)?;
    let right = match m {
        CuModel::Table(t) => {
            let mut best = ExtValue::Inf;
            for a in (0..t.len()).map(Element::Table) {
                if m.leq(&inst.x, &a)? && m.leq(&inst.y, &a)? {
                    best = best.min(inst.lambda.eval(m, &a)?);
                }
            }
            best
        }
        _ => inst.lambda.eval(m, &m.pointwise_max(&inst.x, &inst.y).expect("pointwise model"))?,
    };
    Ok((left, right))
}

fn truncation_level(xs: &[&Element]) -> u64 {
    xs.iter()
        .filter_map(|x| x.coords())
        .flatten()
        .filter_map(|c| c.finite())
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Edwards' condition through the ∞-elimination pipeline: the support
/// ideal J of λ, the short circuit when some `z ≤ x, y` has `λ(z) = ∞`,
/// restriction to `r = x ∧ w_K`, `s = y ∧ w_K` with `K = ⟨x⟩ ∩ ⟨y⟩`, and
/// a finite-valued check on truncations of `r, s`.
pub fn reduce_and_check(m: &CuModel, inst: &EdwardsInstance) -> Result<EdwardsReport> {
    reduce_and_check_with(&Simplex, m, inst)
}

pub fn reduce_and_check_with<S: LpSolver>(solver: &S, m: &CuModel, inst: &EdwardsInstance) -> Result<EdwardsReport> {
    let mut report = check_one(solver, m, inst)?;
    if inst.lambda.is_finite_valued() {
        report.trace.push(json!({ "step": "finite-valued" }));
        return Ok(report);
    }
    let j = support_ideal(m, &inst.lambda)?;
    report.trace.push(json!({ "step": "support-ideal", "ideal": j.to_json(m) }));
    if report.rhs.is_inf() {
        report.trace.push(json!({ "step": "infinite-lower-bound", "z": m.element_to_json(&report.witness_z) }));
        return Ok(report);
    }

    let k = generate_ideal(m, std::slice::from_ref(&inst.x))?.intersect(m, &generate_ideal(m, std::slice::from_ref(&inst.y))?)?;
    let contained = k.is_subset(&j);
    let wk = largest_element(m, &k);
    let r = inf_with_idempotent(m, &inst.x, &wk)?;
    let s = inf_with_idempotent(m, &inst.y, &wk)?;
    let restricted = EdwardsInstance { x: r.clone(), y: s.clone(), lambda: inst.lambda.clone() };
    let restricted_meet = edwards_lhs_with(solver, m, &restricted)?.0;
    let preserved = restricted_meet == report.lhs;
    report.trace.push(json!({
        "step": "restrict",
        "ideal": k.to_json(m),
        "within_support": contained,
        "r": m.element_to_json(&r),
        "s": m.element_to_json(&s),
        "meet": restricted_meet.to_string(),
        "preserved": preserved,
    }));

    let level = truncation_level(&[&r, &s]);
    let truncate = |e: &Element| match e.coords() {
        Some(c) => m.point(c.iter().map(|v| v.truncate(level)).collect()),
        None => Ok(e.clone()),
    };
    let finite = EdwardsInstance { x: truncate(&r)?, y: truncate(&s)?, lambda: inst.lambda.clone() };
    let (lhs_f, d_f) = edwards_lhs_with(solver, m, &finite)?;
    let (rhs_f, z_f) = edwards_rhs(m, &finite)?;
    let finite_ok = inst.lambda.eval(m, &finite.x)?.is_finite()
        && inst.lambda.eval(m, &finite.y)?.is_finite()
        && lhs_f == rhs_f
        && lhs_f == report.lhs
        && witness_identity(m, &finite, &d_f, &z_f)?;
    report.trace.push(json!({
        "step": "finite-check",
        "level": level,
        "r": m.element_to_json(&finite.x),
        "s": m.element_to_json(&finite.y),
        "lhs": lhs_f.to_string(),
        "rhs": rhs_f.to_string(),
        "z": m.element_to_json(&z_f),
        "pass": finite_ok,
    }));
    report.pass = report.pass && contained && preserved && finite_ok;
    Ok(report)
}

/// Seeded instances: `x, y` from the scope at `cap`, λ from `sample_functionals`.
pub fn sample_instances(m: &CuModel, cap: u64, n: usize, seed: u64) -> Result<Vec<EdwardsInstance>> {
    let scope = m.scope(Some(cap))?;
    let lambdas = sample_functionals(m, n.clamp(1, 64), seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    Ok((0..n)
        .map(|_| EdwardsInstance {
            x: scope[rng.gen_range(0..scope.len())].clone(),
            y: scope[rng.gen_range(0..scope.len())].clone(),
            lambda: lambdas[rng.gen_range(0..lambdas.len())].clone(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::ExtNat::{Fin, Inf};
    use crate::ext::int;
    use crate::model::Poset;

    fn inst(m: &CuModel, x: &[ExtNat], y: &[ExtNat], w: &[&str]) -> EdwardsInstance {
        let lambda = Functional::weights(m, w.iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        EdwardsInstance::new(m, m.point(x.to_vec()).unwrap(), m.point(y.to_vec()).unwrap(), lambda).unwrap()
    }

    fn weights(m: &CuModel, w: &[&str]) -> Functional {
        Functional::weights(m, w.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn both_sides_on_split_coordinates() {
        let m = CuModel::vector(2);
        let i = inst(&m, &[Fin(2), Fin(0)], &[Fin(0), Fin(3)], &["1", "1"]);
        let (lhs, d) = edwards_lhs(&m, &i).unwrap();
        assert_eq!(lhs, ExtValue::zero());
        assert_eq!(d, (weights(&m, &["0", "1"]), weights(&m, &["1", "0"])));
        let (rhs, z) = edwards_rhs(&m, &i).unwrap();
        assert_eq!((rhs, z), (ExtValue::zero(), m.zero()));
        assert!(check_one(&Simplex, &m, &i).unwrap().pass);
        assert_eq!(dual_edwards_check(&m, &i).unwrap(), (ExtValue::from_int(5), ExtValue::from_int(5)));
    }

    #[test]
    fn trivial_cases() {
        let m = CuModel::vector(2);
        let i = inst(&m, &[Fin(2), Fin(1)], &[Fin(2), Fin(1)], &["1", "3"]);
        assert_eq!(edwards_lhs(&m, &i).unwrap().0, ExtValue::from_int(5));
        assert_eq!(dual_edwards_check(&m, &i).unwrap(), (ExtValue::from_int(5), ExtValue::from_int(5)));
        let i = inst(&m, &[Fin(2), Fin(1)], &[Fin(4), Fin(3)], &["0", "0"]);
        assert_eq!(edwards_lhs(&m, &i).unwrap(), (ExtValue::zero(), (Functional::zero(&m), Functional::zero(&m))));
        let i = inst(&m, &[Fin(1), Fin(1)], &[Fin(4), Fin(3)], &["2", "1"]);
        assert_eq!(edwards_rhs(&m, &i).unwrap(), (ExtValue::from_int(3), i.x.clone()));
        let l = CuModel::vector(1);
        let i = inst(&l, &[Fin(2)], &[Fin(3)], &["1"]);
        assert_eq!(dual_edwards_check(&l, &i).unwrap(), (ExtValue::from_int(3), ExtValue::from_int(3)));
    }

    #[test]
    fn improvement_examples() {
        let m = CuModel::vector(1);
        let i = inst(&m, &[Fin(4)], &[Fin(5)], &["1"]);
        let one = m.point(vec![Fin(1)]).unwrap();
        let z = improve_witness(&m, &i, &one, &one, &int(3), 3).unwrap();
        assert_eq!(z, Some(m.point(vec![Fin(4)]).unwrap()));
        assert_eq!(improve_witness(&m, &i, &one, &one, &int(0), 3).unwrap(), Some(one.clone()));
        assert!(improve_witness(&m, &i, &one, &one, &int(4), 3).is_err());

        let m = CuModel::vector(2);
        let i = inst(&m, &[Fin(2), Fin(2)], &[Fin(2), Fin(3)], &["1", "1"]);
        let z = m.point(vec![Fin(1), Fin(1)]).unwrap();
        let got = improve_witness(&m, &i, &z, &z, &int(3), 3).unwrap();
        assert_eq!(got, Some(m.point(vec![Fin(2), Fin(2)]).unwrap()));
    }

    #[test]
    fn reduction_examples() {
        let m = CuModel::vector(2);
        let i = inst(&m, &[Inf, Fin(1)], &[Inf, Fin(2)], &["inf", "1"]);
        let r = reduce_and_check(&m, &i).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, ExtValue::Inf);
        assert_eq!(r.trace[1]["step"], "infinite-lower-bound");

        let i = inst(&m, &[Inf, Fin(1)], &[Fin(0), Fin(2)], &["inf", "1"]);
        let r = reduce_and_check(&m, &i).unwrap();
        assert!(r.pass, "{}", r.to_json(&m));
        assert_eq!(r.lhs, ExtValue::from_int(1));
        assert_eq!(r.trace[1]["r"], json!([0, 1]));
        assert_eq!(r.trace[1]["s"], json!([0, 2]));
        assert_eq!(r.trace[1]["meet"], "1");

        let i = inst(&m, &[Fin(2), Fin(1)], &[Fin(1), Fin(2)], &["1", "2"]);
        let r = reduce_and_check(&m, &i).unwrap();
        assert_eq!(r.trace, vec![json!({"step": "finite-valued"})]);
    }

    #[test]
    fn truncation_handles_infinite_restrictions() {
        let m = CuModel::vector(1);
        let i = inst(&m, &[Inf], &[Fin(3)], &["1"]);
        assert!(reduce_and_check(&m, &i).unwrap().pass);
        let m = CuModel::lsc(Poset::chain(2));
        let i = inst(&m, &[Inf, Inf], &[Fin(1), Fin(2)], &["inf", "1"]);
        let r = reduce_and_check(&m, &i).unwrap();
        assert!(r.pass, "{}", r.to_json(&m));
    }

    #[test]
    fn sampled_instances_pass_on_small_models() {
        for m in [CuModel::vector(2), CuModel::lsc(Poset::chain(2))] {
            for i in sample_instances(&m, 3, 150, 5).unwrap() {
                let r = reduce_and_check(&m, &i).unwrap();
                assert!(r.pass, "{}", r.to_json(&m));
                let (a, b) = dual_edwards_check(&m, &i).unwrap();
                assert_eq!(a, b, "{}", r.to_json(&m));
            }
        }
    }
}

//! Ideals, idempotents, infima with idempotents and the maps ρ_w = (· ∧ w).

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ext::ExtNat;
use crate::model::{CuModel, Element, IncreasingChain};
use crate::report::{CheckReport, Scope, Tuple};

/// The member set of an ideal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdealSet {
    /// Explicit membership over the elements of a table model.
    Members(Vec<bool>),
    /// Pointwise ideal `{x : supp x ⊆ U}` for an up-set `U` of points.
    Support(Vec<bool>),
}

/// A downward hereditary, additively closed and sup-closed subset. Two
/// ideals are equal when their member sets are; generators are informative.
#[derive(Clone, Debug)]
pub struct Ideal {
    set: IdealSet,
    gens: Vec<Element>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Ideal) -> bool {
        self.set == other.set
    }
}

impl Eq for Ideal {}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = match &self.set {
            IdealSet::Members(b) | IdealSet::Support(b) => b,
        };
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        match self.set {
            IdealSet::Members(_) => write!(f, "members[{s}]"),
            IdealSet::Support(_) => write!(f, "support[{s}]"),
        }
    }
}

impl Ideal {
    pub fn set(&self) -> &IdealSet {
        &self.set
    }

    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    /// The ideal with member set `set`, generated by its largest element.
    pub fn from_set(m: &CuModel, set: IdealSet) -> Result<Ideal> {
        let ok = match (m, &set) {
            (CuModel::Table(t), IdealSet::Members(b)) => b.len() == t.len(),
            (CuModel::Vector(p) | CuModel::Lsc(p), IdealSet::Support(u)) => u.len() == p.len() && p.is_up_set(u),
            _ => false,
        };
        if !ok {
            return Err(Error::Domain(format!("{set:?} is not an ideal shape for the {} model", m.kind())));
        }
        let mut j = Ideal { set, gens: Vec::new() };
        if let IdealSet::Members(b) = &j.set {
            let t = m.table().unwrap();
            let closed = (0..t.len()).all(|a| {
                !b[a] || (0..t.len()).all(|c| (!t.leq(c, a) || b[c]) && (!b[c] || b[t.add(a, c)]))
            });
            if !closed || !b[t.zero()] {
                return Err(Error::Domain("member set is not an ideal".into()));
            }
        }
        j.gens = vec![largest_element(m, &j)];
        Ok(j)
    }

    /// Support ideal `{x : supp x ⊆ U}` of a pointwise model.
    pub fn support(m: &CuModel, up_set: Vec<bool>) -> Result<Ideal> {
        Ideal::from_set(m, IdealSet::Support(up_set))
    }

    pub fn contains(&self, m: &CuModel, x: &Element) -> Result<bool> {
        m.check(x)?;
        Ok(match (&self.set, x) {
            (IdealSet::Members(b), Element::Table(i)) => b[*i],
            (IdealSet::Support(u), _) => x.coords().unwrap().iter().zip(u).all(|(v, &inside)| inside || v.is_zero()),
            _ => return Err(Error::Domain("ideal and element come from different models".into())),
        })
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        match (&self.set, &other.set) {
            (IdealSet::Members(a), IdealSet::Members(b)) | (IdealSet::Support(a), IdealSet::Support(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| !x || y)
            }
            _ => false,
        }
    }

    pub fn intersect(&self, m: &CuModel, other: &Ideal) -> Result<Ideal> {
        let set = match (&self.set, &other.set) {
            (IdealSet::Members(a), IdealSet::Members(b)) => {
                IdealSet::Members(a.iter().zip(b).map(|(&x, &y)| x && y).collect())
            }
            (IdealSet::Support(a), IdealSet::Support(b)) => {
                IdealSet::Support(a.iter().zip(b).map(|(&x, &y)| x && y).collect())
            }
            _ => return Err(Error::Domain("ideals come from different models".into())),
        };
        Ideal::from_set(m, set)
    }

    pub fn is_zero_ideal(&self, m: &CuModel) -> bool {
        match &self.set {
            IdealSet::Members(b) => b.iter().enumerate().all(|(i, &x)| !x || Some(i) == m.table().map(|t| t.zero())),
            IdealSet::Support(u) => u.iter().all(|&x| !x),
        }
    }

    pub fn is_everything(&self) -> bool {
        match &self.set {
            IdealSet::Members(b) | IdealSet::Support(b) => b.iter().all(|&x| x),
        }
    }

    pub fn to_json(&self, m: &CuModel) -> Value {
        json!({ "gens": self.gens.iter().map(|g| m.element_to_json(g)).collect::<Vec<_>>() })
    }

    pub fn from_json(m: &CuModel, v: &Value) -> Result<Ideal> {
        let gens = v
            .get("gens")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("ideal literal needs a \"gens\" array: {v}")))?;
        let gens = gens.iter().map(|g| m.parse_element(g)).collect::<Result<Vec<_>>>()?;
        generate_ideal(m, &gens)
    }
}

/// Smallest ideal containing `gens`.
pub fn generate_ideal(m: &CuModel, gens: &[Element]) -> Result<Ideal> {
    for g in gens {
        m.check(g)?;
    }
    let set = match m {
        CuModel::Table(t) => {
            let n = t.len();
            let mut member = vec![false; n];
            member[t.zero()] = true;
            for g in gens {
                member[g.index().unwrap()] = true;
            }
            loop {
                let mut next = member.clone();
                for a in (0..n).filter(|&a| member[a]) {
                    for b in 0..n {
                        if t.leq(b, a) {
                            next[b] = true;
                        }
                        if member[b] {
                            next[t.add(a, b)] = true;
                        }
                    }
                }
                if next == member {
                    break IdealSet::Members(member);
                }
                member = next;
            }
        }
        CuModel::Vector(p) | CuModel::Lsc(p) => {
            let mut u = vec![false; p.len()];
            for g in gens {
                for (slot, v) in u.iter_mut().zip(g.coords().unwrap()) {
                    *slot |= !v.is_zero();
                }
            }
            IdealSet::Support(u)
        }
    };
    Ok(Ideal { set, gens: gens.to_vec() })
}

/// Every ideal of the model. Table ideals are the principal ideals of the
/// idempotents; pointwise ideals are indexed by up-sets.
pub fn all_ideals(m: &CuModel) -> Vec<Ideal> {
    match m {
        CuModel::Table(t) => (0..t.len())
            .filter(|&w| t.add(w, w) == w)
            .map(|w| generate_ideal(m, &[Element::Table(w)]).expect("in model"))
            .collect(),
        CuModel::Vector(p) | CuModel::Lsc(p) => {
            p.up_sets().into_iter().map(|u| Ideal::support(m, u).expect("up-set")).collect()
        }
    }
}

pub fn is_idempotent(m: &CuModel, w: &Element) -> Result<bool> {
    Ok(m.add(w, w)? == *w)
}

/// Every idempotent element, in the order of [`all_ideals`].
pub fn idempotents(m: &CuModel) -> Vec<Element> {
    all_ideals(m).iter().map(|j| largest_element(m, j)).collect()
}

/// The largest element `w_J = sup J`.
pub fn largest_element(m: &CuModel, j: &Ideal) -> Element {
    match (&j.set, m) {
        (IdealSet::Members(b), CuModel::Table(t)) => Element::Table(
            (0..t.len()).filter(|&i| b[i]).fold(t.zero(), |acc, i| t.add(acc, i)),
        ),
        (IdealSet::Support(u), _) => m.infinite_on(u).expect("pointwise model"),
        _ => panic!("ideal does not match model"),
    }
}

/// The infimum `x ∧ w` of an element with an idempotent.
pub fn inf_with_idempotent(m: &CuModel, x: &Element, w: &Element) -> Result<Element> {
    if !is_idempotent(m, w)? {
        return Err(Error::Precondition(format!("{w} is not idempotent")));
    }
    m.check(x)?;
    match m {
        CuModel::Table(t) => {
            let (a, b) = (x.index().unwrap(), w.index().unwrap());
            let lower: Vec<usize> = (0..t.len()).filter(|&z| t.leq(z, a) && t.leq(z, b)).collect();
            lower
                .iter()
                .copied()
                .find(|&g| lower.iter().all(|&z| t.leq(z, g)))
                .map(Element::Table)
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "{} and {} have no infimum; the lower bounds are not directed",
                        t.name(a),
                        t.name(b)
                    ))
                })
        }
        _ => {
            let coords = x
                .coords()
                .unwrap()
                .iter()
                .zip(w.coords().unwrap())
                .map(|(v, c)| if c.is_finite() { ExtNat::ZERO } else { *v })
                .collect();
            Ok(m.point_unchecked(coords))
        }
    }
}

/// Greatest lower bound of `x` and `w` found by search over a scope, or
/// `None` if the lower bounds in scope have no largest member.
pub fn inf_by_search(m: &CuModel, scope: &[Element], x: &Element, w: &Element) -> Result<Option<Element>> {
    let mut lower = Vec::new();
    for z in scope {
        if m.leq(z, x)? && m.leq(z, w)? {
            lower.push(z);
        }
    }
    Ok(lower.iter().find(|g| lower.iter().all(|z| m.leq_unchecked(z, g))).map(|g| (*g).clone()))
}

/// Whether the ideal generated by the common lower bounds of `x` and `y`
/// is `⟨x⟩ ∩ ⟨y⟩`.
pub fn check_ideal_intersection(m: &CuModel, x: &Element, y: &Element) -> Result<bool> {
    let meet = generate_ideal(m, &[x.clone()])?.intersect(m, &generate_ideal(m, &[y.clone()])?)?;
    let lower = common_lower_bounds(m, x, y)?;
    Ok(generate_ideal(m, &lower)? == meet)
}

/// All `z ≤ x, y`. On pointwise models the lower bounds are enumerated in
/// the box capped by the largest finite coordinate of `x` and `y`, which
/// contains the pointwise minimum and hence every support that occurs.
pub fn common_lower_bounds(m: &CuModel, x: &Element, y: &Element) -> Result<Vec<Element>> {
    m.check(x)?;
    m.check(y)?;
    let cap = match m {
        CuModel::Table(_) => None,
        _ => Some(
            x.coords()
                .unwrap()
                .iter()
                .chain(y.coords().unwrap())
                .filter_map(|v| v.finite())
                .max()
                .unwrap_or(0),
        ),
    };
    Ok(m.scope(cap)?
        .into_iter()
        .filter(|z| m.leq_unchecked(z, x) && m.leq_unchecked(z, y))
        .collect())
}

/// `inf_with_idempotent` against a search for the greatest lower bound in
/// scope, for every element and idempotent.
pub fn check_infima(m: &CuModel, cap: Option<u64>) -> Result<CheckReport> {
    let scope = m.scope(cap)?;
    let mut report = CheckReport::new("infima", Scope::new(m, cap, scope.len()));
    for w in idempotents(m) {
        for x in &scope {
            report.tuples_checked += 1;
            let closed = match inf_with_idempotent(m, x, &w) {
                Ok(g) => Some(g),
                Err(Error::Precondition(_)) => None,
                Err(e) => return Err(e),
            };
            let searched = inf_by_search(m, &scope, x, &w)?;
            if closed.is_none() || closed != searched {
                report.fail(Tuple::elements(m, &[("x", x), ("w", &w)]));
            }
        }
    }
    Ok(report.finish())
}

/// [`check_ideal_intersection`] over all pairs in scope.
pub fn check_ideal_intersections(m: &CuModel, cap: Option<u64>) -> Result<CheckReport> {
    let scope = m.scope(cap)?;
    let mut report = CheckReport::new("ideal-intersection", Scope::new(m, cap, scope.len()));
    for (i, x) in scope.iter().enumerate() {
        for y in &scope[i..] {
            report.tuples_checked += 1;
            if !check_ideal_intersection(m, x, y)? {
                report.fail(Tuple::elements(m, &[("x", x), ("y", y)]));
            }
        }
    }
    Ok(report.finish())
}

/// Exhaustive check of the ρ_w identities over a scope and every idempotent:
/// (i) ρ_w is additive, monotone and preserves suprema of linear chains,
/// (ii) x ≤ y + w ⟺ x + (y∧w) ≤ y + (x∧w),
/// (iii) x∧w₁ + x∧w₂ = x∧(w₁∧w₂) + x∧(w₁+w₂).
pub fn check_rho_identities(m: &CuModel, cap: Option<u64>) -> Result<CheckReport> {
    let scope = m.scope(cap)?;
    let idem = idempotents(m);
    let mut report = CheckReport::new("rho", Scope::new(m, cap, scope.len()));
    report.note(format!("{} idempotents", idem.len()));

    let fail = |report: &mut CheckReport, identity: &str, named: &[(&str, &Element)]| {
        report.fail(Tuple::elements(m, named).with("identity", identity.into()));
    };
    // Infima are tabulated once; a missing infimum is itself a failure.
    let mut rho = Vec::with_capacity(idem.len());
    for w in &idem {
        let mut row = Vec::with_capacity(scope.len());
        for x in &scope {
            match inf_with_idempotent(m, x, w) {
                Ok(v) => row.push(Some(v)),
                Err(Error::Precondition(_)) => {
                    fail(&mut report, "infimum exists", &[("x", x), ("w", w)]);
                    row.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        rho.push(row);
    }

    for (wi, w) in idem.iter().enumerate() {
        for (xi, x) in scope.iter().enumerate() {
            let Some(rx) = &rho[wi][xi] else { continue };
            for (yi, y) in scope.iter().enumerate() {
                let Some(ry) = &rho[wi][yi] else { continue };
                report.tuples_checked += 1;
                let xy = m.add(x, y)?;
                let rxy = inf_with_idempotent(m, &xy, w);
                match rxy {
                    Ok(v) if v == m.add(rx, ry)? => {}
                    _ => fail(&mut report, "additive", &[("x", x), ("y", y), ("w", w)]),
                }
                if m.leq(x, y)? && !m.leq(rx, ry)? {
                    fail(&mut report, "monotone", &[("x", x), ("y", y), ("w", w)]);
                }
                let sup = m.sup_chain(&IncreasingChain::linear(x.clone(), y.clone()))?;
                let image = m.sup_chain(&IncreasingChain::linear(rx.clone(), ry.clone()))?;
                match inf_with_idempotent(m, &sup, w) {
                    Ok(v) if v == image => {}
                    _ => fail(&mut report, "chain supremum", &[("x", x), ("step", y), ("w", w)]),
                }
                let lhs = m.leq(x, &m.add(y, w)?)?;
                let rhs = m.leq(&m.add(x, ry)?, &m.add(y, rx)?)?;
                if lhs != rhs {
                    fail(&mut report, "order criterion", &[("x", x), ("y", y), ("w", w)]);
                }
            }
        }
    }

    for (i1, w1) in idem.iter().enumerate() {
        for (i2, w2) in idem.iter().enumerate() {
            let (meet, join) = (inf_with_idempotent(m, w1, w2), m.add(w1, w2)?);
            for (xi, x) in scope.iter().enumerate() {
                report.tuples_checked += 1;
                let (Some(a), Some(b)) = (&rho[i1][xi], &rho[i2][xi]) else { continue };
                let lhs = m.add(a, b)?;
                let rhs = match &meet {
                    Ok(w12) => inf_with_idempotent(m, x, w12)
                        .and_then(|c| Ok(m.add(&c, &inf_with_idempotent(m, x, &join)?)?)),
                    Err(e) => Err(Error::Precondition(e.to_string())),
                };
                if rhs.ok().as_ref() != Some(&lhs) {
                    fail(&mut report, "meet-join split", &[("x", x), ("w1", w1), ("w2", w2)]);
                }
            }
        }
    }
    Ok(report.finish())
}

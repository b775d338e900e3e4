//! Exhaustive checkers for the axioms O5, O6 and O7 and for the monoid
//! structure itself, over a finite scope of a model.
//!
//! Every relation needed by the quantifiers is tabulated once as bitsets
//! over the scope, so each check is a loop over hypothesis tuples with
//! set-inclusion tests instead of nested witness searches.

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::model::{CuModel, Element};
use crate::report::{CheckReport, Example, Scope, Tuple};

const EXAMPLES: usize = 3;

/// Order, way-below and sum relations tabulated over a scope.
pub struct Relations<'m> {
    model: &'m CuModel,
    cap: Option<u64>,
    elems: Vec<Element>,
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    /// `wb_down[x]` = {x' : x' ≪ x}.
    wb_down: Vec<FixedBitSet>,
    /// `le_after[a·n + y]` = {z : a + z ≤ y}.
    le_after: Vec<FixedBitSet>,
    /// `ge_after[a·n + y]` = {z : y ≤ a + z}.
    ge_after: Vec<FixedBitSet>,
    /// `below_sum[a·n + b]` = {y : y ≤ a + b}.
    below_sum: Vec<FixedBitSet>,
    /// Greatest common lower bound of two elements when it exists in scope.
    glb: Vec<Option<usize>>,
}

impl<'m> Relations<'m> {
    pub fn new(model: &'m CuModel, cap: Option<u64>) -> Result<Relations<'m>> {
        let elems = model.scope(cap)?;
        let n = elems.len();
        let empty = FixedBitSet::with_capacity(n);
        let mut down = vec![empty.clone(); n];
        let mut up = vec![empty.clone(); n];
        let mut wb_down = vec![empty.clone(); n];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                if model.leq_unchecked(x, y) {
                    down[j].insert(i);
                    up[i].insert(j);
                    if model.waybelow_unchecked(x, y) {
                        wb_down[j].insert(i);
                    }
                }
            }
        }
        let mut le_after = vec![empty.clone(); n * n];
        let mut ge_after = vec![empty.clone(); n * n];
        let mut below_sum = vec![empty.clone(); n * n];
        for (a, x) in elems.iter().enumerate() {
            for (z, w) in elems.iter().enumerate() {
                let s = model.add_unchecked(x, w);
                for (y, e) in elems.iter().enumerate() {
                    if model.leq_unchecked(&s, e) {
                        le_after[a * n + y].insert(z);
                    }
                    if model.leq_unchecked(e, &s) {
                        ge_after[a * n + y].insert(z);
                        below_sum[a * n + z].insert(y);
                    }
                }
            }
        }
        let mut rel = Relations {
            model,
            cap,
            elems,
            down,
            up,
            wb_down,
            le_after,
            ge_after,
            below_sum,
            glb: Vec::new(),
        };
        rel.glb = (0..n * n)
            .map(|k| {
                let mut s = rel.down[k / n].clone();
                s.intersect_with(&rel.down[k % n]);
                rel.greatest(&s)
            })
            .collect();
        Ok(rel)
    }

    pub fn model(&self) -> &CuModel {
        self.model
    }

    pub fn elements(&self) -> &[Element] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.elems.iter().position(|e| e == x)
    }

    pub fn scope(&self) -> Scope {
        Scope::new(self.model, self.cap, self.len())
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn waybelow(&self, a: usize, b: usize) -> bool {
        self.wb_down[b].contains(a)
    }

    /// Whether `y ≤ a + b`.
    pub fn below_sum(&self, y: usize, a: usize, b: usize) -> bool {
        self.below_sum[a * self.len() + b].contains(y)
    }

    /// Whether `a + b ≤ y`.
    pub fn sum_below(&self, a: usize, b: usize, y: usize) -> bool {
        self.le_after[a * self.len() + y].contains(b)
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn glb(&self, a: usize, b: usize) -> Option<usize> {
        self.glb[a * self.len() + b]
    }

    /// Greatest element of `s`, if it has one. The scope order is a linear
    /// extension, so only the last member can be greatest.
    pub fn greatest(&self, s: &FixedBitSet) -> Option<usize> {
        let g = s.maximum()?;
        s.is_subset(&self.down[g]).then_some(g)
    }

    fn el(&self, i: usize) -> &Element {
        &self.elems[i]
    }

    fn tuple(&self, names: &[&str], idx: &[usize]) -> Tuple {
        Tuple(names.iter().zip(idx).map(|(n, &i)| (n.to_string(), self.model.element_to_json(self.el(i)))).collect())
    }

    /// First `z` in enumeration order with `x'+z ≤ y ≤ x+z` and `w' ≪ z`.
    pub fn o5_witness(&self, xp: usize, x: usize, y: usize, wp: usize) -> Option<usize> {
        let n = self.len();
        let mut zs = self.le_after[xp * n + y].clone();
        zs.intersect_with(&self.ge_after[x * n + y]);
        zs.ones().find(|&z| self.wb_down[z].contains(wp))
    }

    /// First `(y', z')` in enumeration order with `x' ≤ y'+z'`, `y' ≤ x,y` and `z' ≤ x,z`.
    pub fn o6_witness(&self, xp: usize, x: usize, y: usize, z: usize) -> Option<(usize, usize)> {
        let mut ys = self.down[x].clone();
        ys.intersect_with(&self.down[y]);
        let mut zs = self.down[x].clone();
        zs.intersect_with(&self.down[z]);
        ys.ones().find_map(|yp| zs.ones().find(|&zp| self.below_sum(xp, yp, zp)).map(|zp| (yp, zp)))
    }

    /// First `x` in enumeration order with `x1', x2' ≪ x ≤ w` and `x ≤ x1 + x2`.
    pub fn o7_witness(&self, x1p: usize, x1: usize, x2p: usize, x2: usize, w: usize) -> Option<usize> {
        let mut xs = self.down[w].clone();
        xs.intersect_with(&self.below_sum[x1 * self.len() + x2]);
        xs.ones().find(|&x| self.wb_down[x].contains(x1p) && self.wb_down[x].contains(x2p))
    }

    /// O5: x' ≪ x ≤ y, w' ≪ w, x + w ≤ y ⟹ ∃z: x'+z ≤ y ≤ x+z, w' ≪ z.
    pub fn check_o5(&self) -> CheckReport {
        const NAMES: [&str; 5] = ["x'", "x", "y", "w'", "w"];
        let n = self.len();
        let mut report = CheckReport::new("O5", self.scope());
        let mut failures = Vec::new();
        for x in 0..n {
            for y in self.up[x].ones() {
                let ws = &self.le_after[x * n + y];
                let mut needed = FixedBitSet::with_capacity(n);
                let mut per_w = 0u64;
                for w in ws.ones() {
                    needed.union_with(&self.wb_down[w]);
                    per_w += self.wb_down[w].count_ones(..) as u64;
                }
                for xp in self.wb_down[x].ones() {
                    report.tuples_checked += per_w;
                    if report.examples.len() < EXAMPLES {
                        let w = ws.maximum().unwrap();
                        let wp = self.wb_down[w].minimum().unwrap();
                        let tuple = self.tuple(&NAMES, &[xp, x, y, wp, w]);
                        let witness = self.o5_witness(xp, x, y, wp).map(|z| self.tuple(&["z"], &[z]));
                        report.examples.push(Example { tuple, witness });
                    }
                    let mut zs = self.le_after[xp * n + y].clone();
                    zs.intersect_with(&self.ge_after[x * n + y]);
                    let mut covered = FixedBitSet::with_capacity(n);
                    let mut done = needed.is_clear();
                    for z in zs.ones().collect::<Vec<_>>().into_iter().rev() {
                        covered.union_with(&self.wb_down[z]);
                        if needed.is_subset(&covered) {
                            done = true;
                            break;
                        }
                    }
                    if done {
                        continue;
                    }
                    for w in ws.ones() {
                        for wp in self.wb_down[w].difference(&covered) {
                            failures.push([xp, x, y, wp, w]);
                        }
                    }
                }
            }
        }
        failures.sort();
        for f in failures {
            report.fail(self.tuple(&NAMES, &f));
        }
        report.finish()
    }

    /// O6: x' ≪ x ≤ y + z ⟹ ∃y', z': x' ≤ y'+z', y' ≤ x,y, z' ≤ x,z.
    pub fn check_o6(&self) -> CheckReport {
        const NAMES: [&str; 4] = ["x'", "x", "y", "z"];
        let n = self.len();
        let mut report = CheckReport::new("O6", self.scope());
        let mut failures = Vec::new();
        for x in 0..n {
            let needed = &self.wb_down[x];
            let count = needed.count_ones(..) as u64;
            for y in 0..n {
                for z in 0..n {
                    if !self.below_sum(x, y, z) {
                        continue;
                    }
                    report.tuples_checked += count;
                    if report.examples.len() < EXAMPLES {
                        let xp = needed.maximum().unwrap();
                        let tuple = self.tuple(&NAMES, &[xp, x, y, z]);
                        let witness = self.o6_witness(xp, x, y, z).map(|(a, b)| self.tuple(&["y'", "z'"], &[a, b]));
                        report.examples.push(Example { tuple, witness });
                    }
                    let covered = match (self.glb(x, y), self.glb(x, z)) {
                        (Some(gy), Some(gz)) => self.below_sum[gy * n + gz].clone(),
                        _ => {
                            let mut ys = self.down[x].clone();
                            ys.intersect_with(&self.down[y]);
                            let mut zs = self.down[x].clone();
                            zs.intersect_with(&self.down[z]);
                            let mut c = FixedBitSet::with_capacity(n);
                            for yp in ys.ones() {
                                for zp in zs.ones() {
                                    c.union_with(&self.below_sum[yp * n + zp]);
                                }
                            }
                            c
                        }
                    };
                    for xp in needed.difference(&covered) {
                        failures.push([xp, x, y, z]);
                    }
                }
            }
        }
        failures.sort();
        for f in failures {
            report.fail(self.tuple(&NAMES, &f));
        }
        report.finish()
    }

    /// O7: x1' ≪ x1 ≤ w, x2' ≪ x2 ≤ w ⟹ ∃x: x1', x2' ≪ x ≤ w, x1 + x2.
    pub fn check_o7(&self) -> CheckReport {
        const NAMES: [&str; 5] = ["x1'", "x1", "x2'", "x2", "w"];
        let n = self.len();
        let mut report = CheckReport::new("O7", self.scope());
        let mut failures = Vec::new();
        for w in 0..n {
            for x1 in self.down[w].ones() {
                for x2 in self.down[w].ones() {
                    let (a, b) = (&self.wb_down[x1], &self.wb_down[x2]);
                    report.tuples_checked += (a.count_ones(..) * b.count_ones(..)) as u64;
                    if report.examples.len() < EXAMPLES {
                        let (x1p, x2p) = (a.maximum().unwrap(), b.maximum().unwrap());
                        let tuple = self.tuple(&NAMES, &[x1p, x1, x2p, x2, w]);
                        let witness = self.o7_witness(x1p, x1, x2p, x2, w).map(|x| self.tuple(&["x"], &[x]));
                        report.examples.push(Example { tuple, witness });
                    }
                    let mut xs = self.down[w].clone();
                    xs.intersect_with(&self.below_sum[x1 * n + x2]);
                    if let Some(g) = self.greatest(&xs) {
                        let top = &self.wb_down[g];
                        if a.is_subset(top) && b.is_subset(top) {
                            continue;
                        }
                        for x1p in a.ones() {
                            for x2p in b.ones() {
                                if !top.contains(x1p) || !top.contains(x2p) {
                                    failures.push([x1p, x1, x2p, x2, w]);
                                }
                            }
                        }
                    } else {
                        for x1p in a.ones() {
                            let mut reach = FixedBitSet::with_capacity(n);
                            for x in xs.ones().filter(|&x| self.wb_down[x].contains(x1p)) {
                                reach.union_with(&self.wb_down[x]);
                            }
                            for x2p in b.difference(&reach) {
                                failures.push([x1p, x1, x2p, x2, w]);
                            }
                        }
                    }
                }
            }
        }
        failures.sort();
        for f in failures {
            report.fail(self.tuple(&NAMES, &f));
        }
        report.finish()
    }

    /// Monoid and order sanity on the scope: commutativity, neutral zero,
    /// zero least, monotonicity, and ≪ ⊆ ≤. Associativity and triple
    /// monotonicity are checked for tables; pointwise backends satisfy them
    /// coordinatewise.
    pub fn check_monoid(&self) -> CheckReport {
        let m = self.model;
        let n = self.len();
        let mut report = CheckReport::new("monoid", self.scope());
        let zero = m.zero();
        for (i, x) in self.elems.iter().enumerate() {
            report.tuples_checked += 1;
            if m.add_unchecked(x, &zero) != *x || !m.leq_unchecked(&zero, x) {
                report.fail(self.tuple(&["x"], &[i]).with("law", "zero".into()));
            }
            for j in 0..n {
                let y = &self.elems[j];
                report.tuples_checked += 1;
                if m.add_unchecked(x, y) != m.add_unchecked(y, x) {
                    report.fail(self.tuple(&["x", "y"], &[i, j]).with("law", "commutative".into()));
                }
                if self.waybelow(i, j) && !self.leq(i, j) {
                    report.fail(self.tuple(&["x", "y"], &[i, j]).with("law", "waybelow-implies-leq".into()));
                }
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    report.fail(self.tuple(&["x", "y"], &[i, j]).with("law", "antisymmetric".into()));
                }
            }
        }
        if let CuModel::Table(t) = m {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        report.tuples_checked += 1;
                        if t.add(t.add(a, b), c) != t.add(a, t.add(b, c)) {
                            report.fail(self.tuple(&["x", "y", "z"], &[a, b, c]).with("law", "associative".into()));
                        }
                        if t.leq(a, b) && !t.leq(t.add(a, c), t.add(b, c)) {
                            report.fail(self.tuple(&["x", "y", "z"], &[a, b, c]).with("law", "monotone".into()));
                        }
                    }
                }
            }
        } else {
            report.note("associativity and monotonicity hold coordinatewise");
        }
        report.finish()
    }
}

pub fn check_o5(m: &CuModel, cap: Option<u64>) -> Result<CheckReport> {
    Ok(Relations::new(m, cap)?.check_o5())
}

pub fn check_o6(m: &CuModel, cap: Option<u64>) -> Result<CheckReport> {
    Ok(Relations::new(m, cap)?.check_o6())
}

pub fn check_o7(m: &CuModel, cap: Option<u64>) -> Result<CheckReport> {
    Ok(Relations::new(m, cap)?.check_o7())
}

pub fn check_monoid(m: &CuModel, cap: Option<u64>) -> Result<CheckReport> {
    Ok(Relations::new(m, cap)?.check_monoid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::ExtNat::{self, Fin, Inf};
    use crate::model::Poset;

    fn idx(rel: &Relations, c: &[ExtNat]) -> usize {
        rel.index_of(&rel.model().point(c.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn o7_witness_on_the_line() {
        let m = CuModel::vector(1);
        let rel = Relations::new(&m, Some(5)).unwrap();
        let i = |v| idx(&rel, &[Fin(v)]);
        let x = rel.o7_witness(i(1), i(2), i(2), i(3), i(5)).unwrap();
        // Lexicographic-first witness is the smallest admissible x.
        assert_eq!(rel.elements()[x], m.point(vec![Fin(2)]).unwrap());
        let three = i(3);
        assert!(rel.waybelow(i(1), three) && rel.waybelow(i(2), three) && rel.below_sum(three, i(2), i(3)));
        let z = idx(&rel, &[Fin(0)]);
        assert_eq!(rel.o7_witness(z, z, z, z, z), Some(z));
    }

    #[test]
    fn o6_trivial_for_zero_approximant() {
        let m = CuModel::vector(2);
        let rel = Relations::new(&m, Some(3)).unwrap();
        let z = idx(&rel, &[Fin(0), Fin(0)]);
        let x = idx(&rel, &[Fin(2), Inf]);
        let y = idx(&rel, &[Fin(3), Fin(1)]);
        let w = idx(&rel, &[Fin(0), Inf]);
        assert_eq!(rel.o6_witness(z, x, y, w), Some((z, z)));
    }

    #[test]
    fn axioms_hold_on_small_vectors() {
        let m = CuModel::vector(1);
        let rel = Relations::new(&m, Some(4)).unwrap();
        for r in [rel.check_o5(), rel.check_o6(), rel.check_o7(), rel.check_monoid()] {
            assert!(r.pass, "{} failed: {:?}", r.check, r.failures.first());
            assert!(r.tuples_checked > 0);
        }
        let m2 = CuModel::vector(2);
        assert!(check_o6(&m2, Some(3)).unwrap().pass);
        assert!(check_o6(&CuModel::lsc(Poset::antichain(2)), Some(2)).unwrap().pass);
    }

    #[test]
    fn o5_fails_on_the_two_point_chain() {
        let m = CuModel::lsc(Poset::chain(2));
        let r = check_o5(&m, Some(1)).unwrap();
        assert!(!r.pass);
        let expected = Tuple::elements(
            &m,
            &[
                ("x'", &m.point(vec![Fin(0), Fin(1)]).unwrap()),
                ("x", &m.point(vec![Fin(0), Fin(1)]).unwrap()),
                ("y", &m.point(vec![Fin(1), Fin(1)]).unwrap()),
                ("w'", &m.zero()),
                ("w", &m.zero()),
            ],
        );
        assert!(r.failures.contains(&expected));
    }

    #[test]
    fn missing_cap_is_a_configuration_error() {
        assert!(matches!(check_o5(&CuModel::vector(2), None), Err(crate::Error::Config(_))));
    }
}

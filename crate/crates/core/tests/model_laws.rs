use cu_kit_core::model::{IncreasingChain, Poset};
use cu_kit_core::{CuModel, Element};
use proptest::prelude::*;

fn pointwise_models() -> Vec<CuModel> {
    let mut out: Vec<CuModel> = (1..=3).map(CuModel::vector).collect();
    for n in 2..=3 {
        out.extend(Poset::all_up_to_iso(n).into_iter().filter(|p| !p.is_antichain()).map(CuModel::lsc));
    }
    out
}

fn pick(m: &CuModel, cap: u64, i: usize) -> Element {
    let s = m.scope(Some(cap)).unwrap();
    s[i % s.len()].clone()
}

fn largest_finite(xs: &[&Element]) -> u64 {
    xs.iter().flat_map(|x| x.coords().unwrap()).filter_map(|c| c.finite()).max().unwrap_or(0)
}

/// x ≪ y iff x lies below some term of the truncation chain of y.
fn waybelow_oracle(m: &CuModel, x: &Element, y: &Element) -> bool {
    let n = largest_finite(&[x, y]) + 1;
    let t = m.point(y.coords().unwrap().iter().map(|c| c.truncate(n)).collect()).unwrap();
    m.leq(x, &t).unwrap()
}

#[test]
fn waybelow_matches_truncation_oracle_exhaustively() {
    for m in pointwise_models() {
        let cap = if m.dim().unwrap() == 3 { 2 } else { 3 };
        let s = m.scope(Some(cap)).unwrap();
        for x in &s {
            for y in &s {
                let wb = m.waybelow(x, y).unwrap();
                assert_eq!(wb, waybelow_oracle(&m, x, y), "{} {x} {y}", m.describe());
                assert!(!wb || m.leq(x, y).unwrap());
            }
        }
    }
}

#[test]
fn scope_sizes() {
    assert_eq!(CuModel::vector(3).scope(Some(4)).unwrap().len(), 216);
    assert_eq!(CuModel::lsc(Poset::chain(2)).scope(Some(1)).unwrap().len(), 6);
    assert!(CuModel::vector(1).scope(None).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn monoid_laws(mi in 0usize..8, a in 0usize..1000, b in 0usize..1000, c in 0usize..1000) {
        let models = pointwise_models();
        let m = &models[mi % models.len()];
        let (x, y, z) = (pick(m, 3, a), pick(m, 3, b), pick(m, 3, c));
        let xy = m.add(&x, &y).unwrap();
        prop_assert_eq!(&xy, &m.add(&y, &x).unwrap());
        prop_assert_eq!(m.add(&xy, &z).unwrap(), m.add(&x, &m.add(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(m.add(&x, &m.zero()).unwrap(), x.clone());
        if m.leq(&x, &y).unwrap() {
            prop_assert!(m.leq(&m.add(&x, &z).unwrap(), &m.add(&y, &z).unwrap()).unwrap());
        }
        prop_assert!(m.leq(&m.zero(), &x).unwrap());
    }

    #[test]
    fn auxiliary_relation_laws(mi in 0usize..8, idx in proptest::collection::vec(0usize..1000, 4)) {
        let models = pointwise_models();
        let m = &models[mi % models.len()];
        let [xp, x, y, yp] = [0, 1, 2, 3].map(|i| pick(m, 2, idx[i]));
        if m.leq(&xp, &x).unwrap() && m.waybelow(&x, &y).unwrap() && m.leq(&y, &yp).unwrap() {
            prop_assert!(m.waybelow(&xp, &yp).unwrap());
        }
        if m.waybelow(&xp, &x).unwrap() && m.waybelow(&y, &yp).unwrap() {
            prop_assert!(m.waybelow(&m.add(&xp, &y).unwrap(), &m.add(&x, &yp).unwrap()).unwrap());
        }
    }

    #[test]
    fn suprema_of_sums(mi in 0usize..8, a in 0usize..1000, b in 0usize..1000, c in 0usize..1000, d in 0usize..1000) {
        let models = pointwise_models();
        let m = &models[mi % models.len()];
        let (x0, dx, y0, dy) = (pick(m, 2, a), pick(m, 2, b), pick(m, 2, c), pick(m, 2, d));
        let xs = IncreasingChain::linear(x0.clone(), dx.clone());
        let ys = IncreasingChain::linear(y0.clone(), dy.clone());
        let sums = IncreasingChain::linear(m.add(&x0, &y0).unwrap(), m.add(&dx, &dy).unwrap());
        let lhs = m.sup_chain(&sums).unwrap();
        let rhs = m.add(&m.sup_chain(&xs).unwrap(), &m.sup_chain(&ys).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        for n in 0..4 {
            prop_assert!(m.leq(&xs.term(m, n).unwrap(), &m.sup_chain(&xs).unwrap()).unwrap());
        }
    }

    #[test]
    fn lsc_points_are_order_preserving(n in 2usize..=3, seed in 0usize..1000) {
        let posets = Poset::all_up_to_iso(n);
        let p = posets[seed % posets.len()].clone();
        let m = CuModel::lsc(p.clone());
        let x = pick(&m, 2, seed / 7);
        let c = x.coords().unwrap();
        for (a, b) in p.strict_pairs() {
            prop_assert!(c[a] <= c[b]);
        }
    }
}

use std::path::PathBuf;

use cu_kit_core::axioms::{check_o5, check_o6, check_o7};
use cu_kit_core::ideals::{
    all_ideals, check_ideal_intersection, check_rho_identities, generate_ideal, idempotents, inf_by_search,
    inf_with_idempotent, is_idempotent, largest_element, Ideal, IdealSet,
};
use cu_kit_core::model::load_model;
use cu_kit_core::{CuModel, Element, Poset};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn fixture_meta(name: &str) -> Value {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    v["meta"].clone()
}

fn tables() -> Vec<(&'static str, CuModel)> {
    ["chain3", "product", "no-o5", "no-o7"].map(|n| (n, load_model(fixture(n)).unwrap())).into()
}

fn small_pointwise() -> Vec<(CuModel, u64)> {
    vec![
        (CuModel::vector(1), 4),
        (CuModel::vector(2), 3),
        (CuModel::lsc(Poset::chain(2)), 2),
        (CuModel::lsc(load_diamond()), 1),
    ]
}

fn load_diamond() -> Poset {
    load_model(fixture("poset-diamond")).unwrap().poset().unwrap().clone()
}

/// Ideals of a finite table found by brute force over all subsets.
fn ideals_by_subsets(m: &CuModel) -> Vec<Vec<bool>> {
    let t = m.table().unwrap();
    let n = t.len();
    (0u32..1 << n)
        .map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|s| {
            s[t.zero()]
                && (0..n).all(|a| !s[a] || (0..n).all(|b| !t.leq(b, a) || s[b]))
                && (0..n).all(|a| (0..n).all(|b| !(s[a] && s[b]) || s[t.add(a, b)]))
        })
        .collect()
}

#[test]
fn table_ideals_match_subset_enumeration() {
    for (name, m) in tables() {
        let mut from_idempotents: Vec<Vec<bool>> = all_ideals(&m)
            .iter()
            .map(|j| match j.set() {
                IdealSet::Members(b) => b.clone(),
                IdealSet::Support(_) => unreachable!(),
            })
            .collect();
        let mut brute = ideals_by_subsets(&m);
        from_idempotents.sort();
        brute.sort();
        assert_eq!(from_idempotents, brute, "{name}");
        for (j, w) in all_ideals(&m).iter().zip(idempotents(&m)) {
            assert!(is_idempotent(&m, &w).unwrap());
            assert_eq!(largest_element(&m, j), w);
            assert_eq!(&generate_ideal(&m, &[w]).unwrap(), j);
        }
    }
}

#[test]
fn chain3_answers() {
    let m = load_model(fixture("chain3")).unwrap();
    let t = m.table().unwrap();
    let (a, b) = (t.index_of("a").unwrap(), t.index_of("b").unwrap());
    assert_eq!(t.add(a, b), b);
    let everything = all_ideals(&m).into_iter().find(|j| j.is_everything()).unwrap();
    assert_eq!(largest_element(&m, &everything), Element::Table(b));
}

#[test]
fn infima_with_idempotents_are_greatest_lower_bounds() {
    let mut cases: Vec<(CuModel, Option<u64>)> = small_pointwise().into_iter().map(|(m, c)| (m, Some(c))).collect();
    cases.extend(tables().into_iter().filter(|(n, _)| *n != "no-o7").map(|(_, m)| (m, None)));
    for (m, cap) in cases {
        let scope = m.scope(cap).unwrap();
        for w in idempotents(&m) {
            for x in &scope {
                let g = inf_with_idempotent(&m, x, &w).unwrap();
                assert!(m.leq(&g, x).unwrap() && m.leq(&g, &w).unwrap());
                for z in &scope {
                    if m.leq(z, x).unwrap() && m.leq(z, &w).unwrap() {
                        assert!(m.leq(z, &g).unwrap(), "{} {x} {w} {z}", m.describe());
                    }
                }
                if scope.contains(&w) {
                    assert_eq!(inf_by_search(&m, &scope, x, &w).unwrap(), Some(g));
                }
            }
        }
    }
}

#[test]
fn missing_infimum_without_o7() {
    let m = load_model(fixture("no-o7")).unwrap();
    let t = m.table().unwrap();
    let (w, s) = (Element::Table(t.index_of("w").unwrap()), Element::Table(t.index_of("s").unwrap()));
    assert!(inf_with_idempotent(&m, &w, &s).is_err());
}

#[test]
fn lower_sets_of_ideals_are_directed() {
    let mut cases: Vec<(CuModel, Option<u64>)> = small_pointwise().into_iter().map(|(m, c)| (m, Some(c))).collect();
    cases.extend(tables().into_iter().filter(|(n, _)| *n != "no-o7").map(|(_, m)| (m, None)));
    for (m, cap) in cases {
        let scope = m.scope(cap).unwrap();
        for j in all_ideals(&m) {
            for x in &scope {
                let below: Vec<&Element> = scope.iter().filter(|z| j.contains(&m, z).unwrap() && m.leq(z, x).unwrap()).collect();
                for a in &below {
                    for b in &below {
                        assert!(
                            below.iter().any(|c| m.leq(a, c).unwrap() && m.leq(b, c).unwrap()),
                            "{} {j} {x}",
                            m.describe()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn ideal_intersections_are_generated_by_lower_bounds() {
    let mut cases: Vec<(CuModel, Option<u64>)> = small_pointwise().into_iter().map(|(m, c)| (m, Some(c))).collect();
    cases.extend(tables().into_iter().map(|(_, m)| (m, None)));
    for (m, cap) in cases {
        let scope = m.scope(cap).unwrap();
        for x in &scope {
            for y in &scope {
                assert!(check_ideal_intersection(&m, x, y).unwrap(), "{} {x} {y}", m.describe());
            }
        }
    }
}

#[test]
fn pointwise_ideals_are_up_sets() {
    let m = CuModel::lsc(load_diamond());
    assert_eq!(all_ideals(&m).len(), 6);
    for j in all_ideals(&m) {
        let IdealSet::Support(u) = j.set() else { unreachable!() };
        assert!(m.poset().unwrap().is_up_set(u));
        assert_eq!(Ideal::support(&m, u.clone()).unwrap(), j);
    }
}

#[test]
fn rho_identities_on_valid_tables() {
    for name in ["chain3", "product", "no-o5"] {
        let r = check_rho_identities(&load_model(fixture(name)).unwrap(), None).unwrap();
        assert!(r.pass, "{name}: {:?}", r.failures.first());
    }
    let r = check_rho_identities(&load_model(fixture("no-o7")).unwrap(), None).unwrap();
    assert!(!r.pass);
}

#[test]
fn axioms_on_valid_tables() {
    for name in ["chain3", "product"] {
        let m = load_model(fixture(name)).unwrap();
        for r in [check_o5(&m, None), check_o6(&m, None), check_o7(&m, None)] {
            assert!(r.unwrap().pass, "{name}");
        }
    }
}

fn first_failure(r: &cu_kit_core::report::CheckReport) -> Value {
    serde_json::to_value(&r.failures[0]).unwrap()
}

#[test]
fn counterexample_fixtures_fail_with_recorded_witnesses() {
    let m = load_model(fixture("no-o5")).unwrap();
    let r = check_o5(&m, None).unwrap();
    assert!(!r.pass);
    assert_eq!(first_failure(&r), fixture_meta("no-o5")["witness"]);
    assert!(check_o6(&m, None).unwrap().pass && check_o7(&m, None).unwrap().pass);

    let m = load_model(fixture("no-o7")).unwrap();
    let r = check_o7(&m, None).unwrap();
    assert!(!r.pass);
    assert_eq!(first_failure(&r), fixture_meta("no-o7")["witness"]);
    assert!(!check_o5(&m, None).unwrap().pass);
    assert!(check_o6(&m, None).unwrap().pass);
}

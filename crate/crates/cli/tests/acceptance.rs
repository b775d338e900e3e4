//! Acceptance suite: one line per criterion, exact equality throughout.

use std::cell::RefCell;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use cu_kit_core::axioms::Relations;
use cu_kit_core::dual::{check_dual_lattice_identities_with, join_eval_with, meet_eval_with, DualElement};
use cu_kit_core::edwards::{dual_edwards_check_with, reduce_and_check_with, sample_instances};
use cu_kit_core::functional::{
    check_pseudo_cancellation, epsilon, is_refinement, lambda_j, refine_with, sample_equal_sums, sample_functionals,
    support_ideal,
};
use cu_kit_core::ideals::check_rho_identities;
use cu_kit_core::lp::{has_improving_ray, vertex_extremum, LinProgram, LpError, LpOutcome, LpSolver, Simplex, MAX_ORACLE_VARS};
use cu_kit_core::model::load_model;
use cu_kit_core::{CuModel, ExtNat, ExtValue, Poset, Rational};
use itertools::Itertools;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn fixture(name: &str) -> CuModel {
    load_model(root().join("fixtures").join(format!("{name}.json"))).unwrap()
}

fn fixture_meta(name: &str) -> Value {
    let path = root().join("fixtures").join(format!("{name}.json"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["meta"].clone()
}

fn vectors() -> Vec<CuModel> {
    (1..=3).map(CuModel::vector).collect()
}

fn lsc_models() -> Vec<CuModel> {
    (1..=3).flat_map(Poset::all_up_to_iso).map(CuModel::lsc).collect()
}

fn pointwise() -> Vec<CuModel> {
    vectors().into_iter().chain(lsc_models()).collect()
}

/// Solves with the simplex and keeps every distinct program in oracle scope.
#[derive(Default)]
struct Recorder {
    programs: RefCell<HashMap<String, (LinProgram, LpOutcome)>>,
    solved: RefCell<u64>,
}

impl LpSolver for Recorder {
    fn solve(&self, p: &LinProgram) -> Result<LpOutcome, LpError> {
        let out = Simplex.solve(p)?;
        *self.solved.borrow_mut() += 1;
        if p.num_vars() <= MAX_ORACLE_VARS {
            self.programs.borrow_mut().entry(format!("{p:?}")).or_insert_with(|| (p.clone(), out.clone()));
        }
        Ok(out)
    }
}

struct Line {
    id: &'static str,
    pass: bool,
    /// Failure analysed as unattainable; the line still reports FAIL.
    unattainable: bool,
    detail: String,
}

fn line(id: &'static str, pass: bool, detail: String) -> Line {
    Line { id, pass, unattainable: false, detail }
}

fn within(t: Instant, secs: u64) -> (bool, String) {
    let e = t.elapsed();
    (e.as_secs() < secs, format!("{:.2}s", e.as_secs_f64()))
}

fn criterion_1() -> Vec<Line> {
    let mut out = Vec::new();
    let mut ok = true;
    let mut details = Vec::new();
    for m in vectors() {
        let t = Instant::now();
        let rel = Relations::new(&m, Some(4)).unwrap();
        let pass = [rel.check_monoid(), rel.check_o5(), rel.check_o6(), rel.check_o7()].iter().all(|r| r.pass);
        let (fast, time) = within(t, 60);
        ok &= pass && fast;
        details.push(format!("{} cap 4 {} in {time}", m.describe(), if pass { "pass" } else { "FAIL" }));
    }
    for (name, check) in [("no-o5", "O5"), ("no-o7", "O7")] {
        let m = fixture(name);
        let rel = Relations::new(&m, None).unwrap();
        let r = if check == "O5" { rel.check_o5() } else { rel.check_o7() };
        let recorded = serde_json::to_value(&r.failures.first()).unwrap() == fixture_meta(name)["witness"];
        ok &= !r.pass && recorded;
        details.push(format!("{name} fails {check} with recorded witness: {}", !r.pass && recorded));
    }
    out.push(line("1a", ok, format!("axioms on N^k, k<=3, and counterexample fixtures: {}", details.join("; "))));

    let (mut o67, mut o5, mut fast) = (true, true, true);
    let mut failing = Vec::new();
    let t_all = Instant::now();
    for m in lsc_models() {
        let t = Instant::now();
        let rel = Relations::new(&m, Some(3)).unwrap();
        let r5 = rel.check_o5();
        o67 &= rel.check_o6().pass && rel.check_o7().pass && rel.check_monoid().pass;
        fast &= t.elapsed().as_secs() < 60;
        if !r5.pass {
            o5 = false;
            failing.push(format!("{}: {}", m.describe(), serde_json::to_string(&r5.failures[0]).unwrap()));
        }
    }
    let (_, time) = within(t_all, 600);
    out.push(Line {
        id: "1b",
        pass: o5 && o67 && fast,
        unattainable: !o5 && o67 && fast,
        detail: format!(
            "axioms on Lsc(X) for all posets |X|<=3, cap 3 (O6, O7, monoid {}; each suite under 60s: {fast}; {time} total); O5 fails on {} posets with a comparable pair, first falsifier {}",
            if o67 { "pass" } else { "FAIL" },
            failing.len(),
            failing.first().map(String::as_str).unwrap_or("none"),
        ),
    });
    out
}

struct EdwardsTally {
    instances: usize,
    passed: usize,
    dual_equal: usize,
    infinite: usize,
}

fn criteria_2_and_9(rec: &Recorder) -> Vec<Line> {
    let t = Instant::now();
    let mut per_backend = Vec::new();
    let mut ok2 = true;
    let mut ok9 = true;
    for (i, m) in pointwise().iter().enumerate() {
        let cap = 3;
        let mut tally = EdwardsTally { instances: 0, passed: 0, dual_equal: 0, infinite: 0 };
        for inst in sample_instances(m, cap, 1000, 100 + i as u64).unwrap() {
            let r = reduce_and_check_with(rec, m, &inst).unwrap();
            tally.instances += 1;
            tally.passed += r.pass as usize;
            tally.infinite += !inst.lambda.is_finite_valued() as usize;
            let (a, b) = dual_edwards_check_with(rec, m, &inst).unwrap();
            tally.dual_equal += (a == b) as usize;
        }
        ok2 &= tally.passed == tally.instances && tally.instances >= 1000;
        ok9 &= tally.dual_equal == tally.instances;
        per_backend.push(tally);
    }
    let (fast, time) = within(t, 300);
    let n: usize = per_backend.iter().map(|t| t.instances).sum();
    let passed: usize = per_backend.iter().map(|t| t.passed).sum();
    let inf: usize = per_backend.iter().map(|t| t.infinite).sum();
    let dual: usize = per_backend.iter().map(|t| t.dual_equal).sum();
    vec![
        line(
            "2",
            ok2 && fast,
            format!(
                "Edwards' condition with witness identity: {passed}/{n} instances over {} backends (1000 each, {inf} with infinite-valued weights) in {time}",
                per_backend.len()
            ),
        ),
        line("9", ok9, format!("dual Edwards equal pairs: {dual}/{n} on the same instances")),
    ]
}

fn weighted(c: &[ExtValue], v: &[ExtNat]) -> ExtValue {
    c.iter()
        .zip(v)
        .map(|(c, v)| match (c, v) {
            (_, ExtNat::Fin(0)) => ExtValue::zero(),
            (ExtValue::Fin(q), _) if q == &Rational::from_integer(0.into()) => ExtValue::zero(),
            (ExtValue::Inf, _) | (_, ExtNat::Inf) => ExtValue::Inf,
            (ExtValue::Fin(q), ExtNat::Fin(n)) => ExtValue::Fin(q * Rational::from_integer((*n).into())),
        })
        .sum()
}

fn criterion_3(rec: &Recorder) -> Line {
    let mut checked = 0;
    let mut ok = true;
    for m in vectors() {
        let scope = m.scope(Some(3)).unwrap();
        let lambdas = sample_functionals(&m, 40, 3);
        for (i, (x, y)) in scope.iter().cartesian_product(&scope).enumerate() {
            let lambda = &lambdas[i % lambdas.len()];
            let (cx, cy) = (x.coords().unwrap(), y.coords().unwrap());
            let mins: Vec<ExtNat> = cx.iter().zip(cy).map(|(a, b)| (*a).min(*b)).collect();
            let maxs: Vec<ExtNat> = cx.iter().zip(cy).map(|(a, b)| (*a).max(*b)).collect();
            let (hx, hy) = (DualElement::hat(x.clone()), DualElement::hat(y.clone()));
            let meet = meet_eval_with(rec, &m, &hx, &hy, lambda).unwrap().value;
            let join = join_eval_with(rec, &m, &hx, &hy, lambda).unwrap();
            ok &= meet == weighted(lambda.values(), &mins) && join == weighted(lambda.values(), &maxs);
            checked += 1;
        }
    }
    line("3", ok, format!("LP meet = sum c_i min(x_i, y_i) and LP join = sum c_i max(x_i, y_i) on {checked} instances over N^1..N^3"))
}

fn refinement_backends() -> Vec<CuModel> {
    let mut out = pointwise();
    out.push(fixture("chain3"));
    out.push(fixture("product"));
    out
}

fn criterion_4(rec: &Recorder) -> Line {
    let mut ok = true;
    let mut total = 0;
    let mut refined = 0;
    let backends = refinement_backends();
    for (i, m) in backends.iter().enumerate() {
        for [l1, l2, m1, m2] in sample_equal_sums(m, 500, 40 + i as u64).unwrap() {
            total += 1;
            let r = refine_with(rec, m, &l1, &l2, &m1, &m2).unwrap();
            if r.as_ref().is_some_and(|r| is_refinement(r, &l1, &l2, &m1, &m2)) {
                refined += 1;
            } else {
                ok = false;
            }
        }
    }
    line(
        "4",
        ok,
        format!(
            "Riesz refinement of F(S): {refined}/{total} equal-sum quadruples refined and verified (500 per backend, {} backends incl. tables chain3, product)",
            backends.len()
        ),
    )
}

fn criterion_5() -> Vec<Line> {
    let mut ok = true;
    let mut parts = Vec::new();
    let r = check_rho_identities(&CuModel::vector(2), Some(3)).unwrap();
    ok &= r.pass;
    parts.push(format!("N^2 cap 3: {} ({} tuples)", if r.pass { "pass" } else { "FAIL" }, r.tuples_checked));
    for name in ["chain3", "product", "no-o5"] {
        let r = check_rho_identities(&fixture(name), None).unwrap();
        ok &= r.pass;
        parts.push(format!("{name}: {} ({} tuples)", if r.pass { "pass" } else { "FAIL" }, r.tuples_checked));
    }
    let r = check_rho_identities(&fixture("no-o7"), None).unwrap();
    let missing: Vec<String> = r
        .failures
        .iter()
        .map(|t| serde_json::to_value(t).unwrap())
        .filter(|t| t["identity"] == "infimum exists")
        .map(|t| format!("{} and {}", t["x"].as_str().unwrap_or("?"), t["w"].as_str().unwrap_or("?")))
        .collect();
    vec![
        line("5a", ok, format!("rho_w identities (i)-(iii): {}", parts.join("; "))),
        Line {
            id: "5b",
            pass: r.pass,
            unattainable: !r.pass && !missing.is_empty(),
            detail: format!(
                "rho_w identities on table fixture no-o7, which violates O7: {} failing tuples, infimum missing for {}",
                r.failures.len(),
                missing.join(", ")
            ),
        },
    ]
}

fn criterion_6(rec: &Recorder) -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, m) in refinement_backends().iter().enumerate() {
        let r = check_dual_lattice_identities_with(rec, m, 2, 70, 60 + i as u64).unwrap();
        ok &= r.pass && r.tuples_checked >= 200;
        parts.push(format!("{} {}", r.tuples_checked, if r.pass { "ok" } else { "FAIL" }));
    }
    line(
        "6",
        ok,
        format!("distributivity, finite increasing families, h_J = hat(w_J): checks per backend [{}]", parts.join(", ")),
    )
}

fn criterion_7(rec: &Recorder) -> Line {
    let programs = rec.programs.borrow();
    let (mut agreed, mut out_of_scope) = (0, 0);
    let mut disagreements = Vec::new();
    for (key, (p, outcome)) in programs.iter() {
        let verdict = match outcome {
            LpOutcome::Optimal { value, .. } => vertex_extremum(p).map(|v| v.as_ref() == Some(value)).and_then(|ok| {
                has_improving_ray(p).map(|ray| ok && !ray)
            }),
            LpOutcome::Infeasible => vertex_extremum(p).map(|v| v.is_none()),
            LpOutcome::Unbounded => has_improving_ray(p),
        };
        match verdict {
            Ok(true) => agreed += 1,
            Ok(false) => disagreements.push(key.clone()),
            Err(LpError::OutOfScope(_)) => out_of_scope += 1,
            Err(e) => disagreements.push(format!("{key}: {e}")),
        }
    }
    line(
        "7",
        disagreements.is_empty(),
        format!(
            "simplex vs vertex enumeration: {agreed} distinct programs agree, {} disagree, {out_of_scope} beyond the enumeration limit ({} LPs solved in criteria 2-6)",
            disagreements.len(),
            rec.solved.borrow()
        ),
    )
}

fn criterion_8() -> Line {
    let mut ok = true;
    let (mut eps, mut triples) = (0, 0);
    for m in refinement_backends() {
        let fs = sample_functionals(&m, 40, 8);
        for f in &fs {
            let e = epsilon(&m, f).unwrap();
            ok &= e == lambda_j(&m, &support_ideal(&m, f).unwrap()) && e.add(f) == *f;
            eps += 1;
        }
        for a in fs.iter().take(12) {
            for b in fs.iter().take(12) {
                for c in fs.iter().take(12) {
                    if a.add(c).leq(&m, &b.add(c)).unwrap() {
                        ok &= check_pseudo_cancellation(&m, a, b, c).unwrap();
                        triples += 1;
                    }
                }
            }
        }
    }
    line("8", ok, format!("epsilon(lambda) = lambda_J on {eps} functionals; pseudo-cancellation on {triples} admissible triples"))
}

fn run_cli(args: &[&str], threads: Option<&str>, out: Option<&Path>) -> (Option<i32>, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cu-kit"));
    cmd.args(args).current_dir(root());
    if let Some(t) = threads {
        cmd.env("CU_KIT_THREADS", t);
    }
    if let Some(p) = out {
        cmd.arg("--out").arg(p);
    }
    let o = cmd.output().unwrap();
    let bytes = match out {
        Some(p) => std::fs::read(p).unwrap_or_default(),
        None => o.stdout,
    };
    (o.status.code(), bytes)
}

fn criterion_10() -> Line {
    let commands: [&[&str]; 9] = [
        &["axioms", "--model", "vector:2", "--cap", "3"],
        &["axioms", "--model", "fixtures/no-o7.json"],
        &["edwards", "--model", "vector:3", "--cap", "3", "--samples", "200", "--seed", "1"],
        &["edwards", "--model", "lsc:fixtures/poset-diamond.json", "--cap", "2", "--samples", "100", "--seed", "1"],
        &["edwards", "--model", "vector:2", "--samples", "0"],
        &["refine", "--model", "vector:2", "--samples", "100", "--seed", "4"],
        &["inf", "--model", "fixtures/chain3.json"],
        &["dual", "--model", "vector:2", "--samples", "50", "--seed", "9"],
        &["axioms", "--model", "vector:2"],
    ];
    let expected_codes = [0, 1, 0, 0, 0, 0, 0, 0, 2];
    let dir = std::env::temp_dir().join(format!("cu-kit-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut ok = true;
    let mut bad = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let first = run_cli(args, None, None);
        let second = run_cli(args, Some("1"), None);
        let file = dir.join(format!("{i}.json"));
        let third = run_cli(args, Some("3"), Some(&file));
        let same = first == second && (expected_codes[i] == 2 || first.1 == third.1);
        let code = first.0 == Some(expected_codes[i]);
        if !(same && code) {
            ok = false;
            bad.push(args.join(" "));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    line(
        "10",
        ok,
        format!(
            "{} CLI commands re-run with 1, 3 and default threads give byte-identical reports and the expected exit codes{}",
            commands.len(),
            if bad.is_empty() { String::new() } else { format!("; mismatches: {}", bad.join(" | ")) }
        ),
    )
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filter.is_empty() && !filter.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }
    let rec = Recorder::default();
    let mut lines = criterion_1();
    lines.extend(criteria_2_and_9(&rec));
    lines.push(criterion_3(&rec));
    lines.push(criterion_4(&rec));
    lines.extend(criterion_5());
    lines.push(criterion_6(&rec));
    lines.push(criterion_7(&rec));
    lines.push(criterion_8());
    lines.push(criterion_10());
    lines.sort_by_key(|l| {
        let digits: String = l.id.chars().take_while(char::is_ascii_digit).collect();
        (digits.parse::<u32>().unwrap(), l.id.to_string())
    });

    let mut unexpected = 0;
    for l in &lines {
        let status = if l.pass { "PASS" } else { "FAIL" };
        let note = if l.unattainable { " [unattainable, see notes]" } else { "" };
        println!("criterion {:<3} {status}{note}  {}", l.id, l.detail);
        if !l.pass && !l.unattainable {
            unexpected += 1;
        }
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected failures", lines.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}

use cu_kit_core::axioms::Relations;
use cu_kit_core::dual::check_dual_lattice_identities;
use cu_kit_core::edwards::{dual_edwards_check, reduce_and_check, sample_instances, EdwardsInstance};
use cu_kit_core::functional::{self, is_refinement, sample_equal_sums, Functional};
use cu_kit_core::ideals::{check_ideal_intersections, check_infima, check_rho_identities};
use cu_kit_core::model::model_from_spec;
use cu_kit_core::report::CheckReport;
use cu_kit_core::{CuModel, Error, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{Common, EdwardsArgs};

pub struct Outcome {
    pub report: Value,
    pub pass: bool,
    pub summary: String,
}

const DEFAULT_SAMPLED_CAP: u64 = 3;

fn header(command: &str, m: &CuModel, cap: Option<u64>, c: &Common, sampled: bool) -> Value {
    let mut h = json!({
        "command": command,
        "model": m.describe(),
        "cap": if m.is_pointwise() { cap } else { None },
    });
    if sampled {
        h["samples"] = json!(c.samples);
        h["seed"] = json!(c.seed);
    }
    h
}

fn exhaustive_cap(m: &CuModel, c: &Common) -> Result<Option<u64>> {
    if m.is_pointwise() && c.cap.is_none() {
        return Err(Error::Config(format!("--cap is required to quantify over {}", m.describe())));
    }
    Ok(c.cap)
}

fn summarize(command: &str, m: &CuModel, reports: &[CheckReport]) -> String {
    let parts: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {} ({} tuples)", r.check, if r.pass { "pass" } else { "FAIL" }, r.tuples_checked))
        .collect();
    let mut out = format!("{command} {}: {}", m.describe(), parts.join(", "));
    for r in reports.iter().filter(|r| !r.pass) {
        let first = serde_json::to_string(&r.failures[0]).expect("tuple serializes");
        out.push_str(&format!("\n  {} falsifier: {first}", r.check));
    }
    out
}

fn check_reports(command: &str, m: &CuModel, cap: Option<u64>, c: &Common, sampled: bool, reports: Vec<CheckReport>) -> Outcome {
    let pass = reports.iter().all(|r| r.pass);
    let summary = summarize(command, m, &reports);
    let mut report = header(command, m, cap, c, sampled);
    report["reports"] = serde_json::to_value(&reports).expect("reports serialize");
    report["pass"] = json!(pass);
    Outcome { report, pass, summary }
}

pub fn axioms(c: &Common) -> Result<Outcome> {
    let m = model_from_spec(&c.model)?;
    let cap = exhaustive_cap(&m, c)?;
    let rel = Relations::new(&m, cap)?;
    let reports = [0, 1, 2, 3]
        .into_par_iter()
        .map(|i| match i {
            0 => rel.check_monoid(),
            1 => rel.check_o5(),
            2 => rel.check_o6(),
            _ => rel.check_o7(),
        })
        .collect();
    Ok(check_reports("axioms", &m, cap, c, false, reports))
}

pub fn inf(c: &Common) -> Result<Outcome> {
    let m = model_from_spec(&c.model)?;
    let cap = exhaustive_cap(&m, c)?;
    let reports = vec![check_infima(&m, cap)?, check_rho_identities(&m, cap)?, check_ideal_intersections(&m, cap)?];
    Ok(check_reports("inf", &m, cap, c, false, reports))
}

pub fn dual(c: &Common) -> Result<Outcome> {
    let m = model_from_spec(&c.model)?;
    let cap = c.cap.unwrap_or(DEFAULT_SAMPLED_CAP);
    let reports = vec![check_dual_lattice_identities(&m, cap, c.samples, c.seed)?];
    Ok(check_reports("dual", &m, Some(cap), c, true, reports))
}

fn load_instances(m: &CuModel, path: &std::path::Path) -> Result<Vec<EdwardsInstance>> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("{}: expected a JSON array", path.display())))?;
    items
        .iter()
        .map(|item| {
            let field = |k: &str| item.get(k).ok_or_else(|| Error::Parse(format!("instance needs {k:?}: {item}")));
            EdwardsInstance::new(
                m,
                m.parse_element(field("x")?)?,
                m.parse_element(field("y")?)?,
                Functional::from_json(m, field("lambda")?)?,
            )
        })
        .collect()
}

pub fn edwards(a: &EdwardsArgs) -> Result<Outcome> {
    let c = &a.common;
    let m = model_from_spec(&c.model)?;
    let cap = c.cap.unwrap_or(DEFAULT_SAMPLED_CAP);
    let mut instances = sample_instances(&m, cap, c.samples, c.seed)?;
    if let Some(path) = &a.pairs {
        instances.extend(load_instances(&m, path)?);
    }
    let results = instances
        .par_iter()
        .map(|inst| {
            let r = reduce_and_check(&m, inst)?;
            let (left, right) = dual_edwards_check(&m, inst)?;
            let dual_pass = left == right;
            let mut v = r.to_json(&m);
            v["dual"] = json!({ "left": left.to_string(), "right": right.to_string(), "pass": dual_pass });
            if !(r.pass && dual_pass) {
                eprintln!("falsifier: {v}");
            }
            Ok((v, r.pass, dual_pass))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = results.iter().filter(|(_, p, _)| *p).count();
    let dual_passed = results.iter().filter(|(_, _, d)| *d).count();
    let pass = passed == results.len() && dual_passed == results.len();
    let mut report = header("edwards", &m, Some(cap), c, true);
    report["instances"] = Value::Array(results.into_iter().map(|(v, _, _)| v).collect());
    report["passed"] = json!(passed);
    report["dual_passed"] = json!(dual_passed);
    report["pass"] = json!(pass);
    let n = instances.len();
    let summary = format!("edwards {}: {passed}/{n} instances pass, dual {dual_passed}/{n}", m.describe());
    Ok(Outcome { report, pass, summary })
}

fn refine_one(m: &CuModel, q: &[Functional; 4]) -> Result<(Value, bool)> {
    let [l1, l2, m1, m2] = q;
    let r = functional::refine(m, l1, l2, m1, m2)?;
    let pass = r.as_ref().is_some_and(|r| is_refinement(r, l1, l2, m1, m2));
    let cells = r.map(|r| json!(r.map(|row| row.map(|f| f.to_json(m)))));
    Ok((
        json!({
            "lambda": [l1.to_json(m), l2.to_json(m)],
            "mu": [m1.to_json(m), m2.to_json(m)],
            "refinement": cells,
            "pass": pass,
        }),
        pass,
    ))
}

pub fn refine(c: &Common) -> Result<Outcome> {
    let m = model_from_spec(&c.model)?;
    let quads = sample_equal_sums(&m, c.samples, c.seed)?;
    let results = quads.par_iter().map(|q| refine_one(&m, q)).collect::<Result<Vec<_>>>()?;
    let passed = results.iter().filter(|(_, p)| *p).count();
    let pass = passed == results.len();
    let mut report = header("refine", &m, c.cap, c, true);
    report["quadruples"] = Value::Array(results.into_iter().map(|(v, _)| v).collect());
    report["passed"] = json!(passed);
    report["pass"] = json!(pass);
    let summary = format!("refine {}: {passed}/{} quadruples refined", m.describe(), quads.len());
    Ok(Outcome { report, pass, summary })
}

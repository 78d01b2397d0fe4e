//! Mode execution: pick the scalar kernel, build the model/field pair, run
//! the requested computation, and assemble the report plus verdict.
//!
//! Kernel choice: exact whenever every model parameter is an integer or
//! `p/q` ratio and the field is an axis or a triple whose norm is rational;
//! anything else (float literals, unnormalizable components, the
//! hyperbolic-torus rate) runs float.

use std::collections::BTreeMap;

use triflow_core::linalg::{dot, t3, v3, M3, V3};
use triflow_core::{
    analyze, classify, conformal_rescale, cross_validate, default_grid, find_all, flat_torus,
    hopf, hyperbolic_space, hyperbolic_torus, normalized, unimodular_entry, verify_entry,
    CatalogEntry, ClassificationCase, FieldAnalysis, FrameModel, Orientation, Rational, Scalar,
    StructureConstants, Tol, UnitField,
};

use crate::config::{parse_axis_name, FieldSpec, Mode, ModelSpec, Num, RunConfig};
use crate::report::{self, NamedValue, Report};
use crate::sweep;

/// Configuration and usage failures; exit code 2.  Anything downstream of a
/// valid configuration is recorded in the report instead of raised.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for UsageError {
    fn from(s: String) -> Self {
        UsageError(s)
    }
}

pub fn run(config: &RunConfig) -> Result<Report, UsageError> {
    let tol = Tol::new(config.tolerances.algebraic);
    match config.mode {
        Mode::Analyze => run_single(config, &tol, false),
        Mode::Classify => run_single(config, &tol, true),
        Mode::Find => run_find(config, &tol),
        Mode::ChartVerify => run_chart(config, &tol),
        Mode::Catalog => run_catalog(config, &tol),
        Mode::Sweep => run_sweep_mode(config, &tol),
    }
}

// ---------------------------------------------------------------------------
// model and field resolution

enum Pair {
    Exact(FrameModel<Rational>, UnitField<Rational>),
    Float(FrameModel<f64>, UnitField<f64>),
}

impl Pair {
    fn kernel(&self) -> &'static str {
        match self {
            Pair::Exact(..) => "exact",
            Pair::Float(..) => "float",
        }
    }

    fn float_model(&self) -> FrameModel<f64> {
        match self {
            Pair::Exact(m, _) => m.to_f64(),
            Pair::Float(m, _) => m.clone(),
        }
    }
}

struct BuiltPair {
    kind: String,
    params: Vec<NamedValue>,
    pair: Pair,
}

enum FieldPlan {
    /// Frame axis, optionally negated; representable in both kernels.
    Axis(usize, bool),
    /// Components scaled by an exact square-root norm.
    ExactComponents(V3<Rational>),
    /// Components normalized numerically; forces the float kernel.
    FloatComponents(V3<f64>),
}

fn plan_field(spec: &FieldSpec) -> Result<FieldPlan, UsageError> {
    match spec {
        FieldSpec::Name(n) => {
            let (axis, negated) = parse_axis_name(n)?;
            Ok(FieldPlan::Axis(axis, negated))
        }
        FieldSpec::Components(nums) => {
            let exact: Option<Vec<Rational>> = nums.iter().map(Num::as_rational).collect();
            if let Some(c) = exact {
                let c = v3(|i| c[i].clone());
                let n2 = dot(&c, &c);
                if n2 == Rational::from_int(0) {
                    return Err(UsageError("field components are all zero".into()));
                }
                if let Some(n) = n2.sqrt_exact() {
                    return Ok(FieldPlan::ExactComponents(v3(|i| c[i].clone() / n.clone())));
                }
                return Ok(FieldPlan::FloatComponents(v3(|i| c[i].to_f64())));
            }
            let mut f = [0.0; 3];
            for (i, n) in nums.iter().enumerate() {
                f[i] = n.as_f64().map_err(|e| UsageError(format!("field[{i}]: {e}")))?;
            }
            if dot(&f, &f) == 0.0 {
                return Err(UsageError("field components are all zero".into()));
            }
            Ok(FieldPlan::FloatComponents(f))
        }
    }
}

fn exact_axis(plan: &FieldPlan) -> Option<UnitField<Rational>> {
    match plan {
        FieldPlan::Axis(k, negated) => {
            let f = UnitField::axis(*k);
            Some(if *negated { f.flipped() } else { f })
        }
        FieldPlan::ExactComponents(c) => {
            Some(UnitField::new(c.clone()).expect("normalized exactly"))
        }
        FieldPlan::FloatComponents(_) => None,
    }
}

fn float_field(plan: &FieldPlan) -> UnitField<f64> {
    match plan {
        FieldPlan::Axis(k, negated) => {
            let f = UnitField::<f64>::axis(*k);
            if *negated {
                f.flipped()
            } else {
                f
            }
        }
        FieldPlan::ExactComponents(c) => {
            UnitField::new(v3(|i| c[i].to_f64())).expect("unit within float tolerance")
        }
        FieldPlan::FloatComponents(f) => {
            normalized(*f).expect("nonzero checked in plan_field")
        }
    }
}

fn num_echo(name: &str, n: &Num) -> NamedValue {
    let value = match n.as_rational() {
        Some(r) => r.to_string(),
        None => n.as_f64().map_or_else(|_| "?".into(), report::float_str),
    };
    NamedValue { name: name.into(), value }
}

fn build_pair(config: &RunConfig) -> Result<BuiltPair, UsageError> {
    let spec = config
        .model
        .as_ref()
        .ok_or_else(|| UsageError("this mode needs a model: pass --model or a config file".into()))?;
    let default_plan = FieldPlan::Axis(2, false);
    match spec {
        ModelSpec::Unimodular { alpha, beta, gamma } => {
            let params = vec![
                num_echo("alpha", alpha),
                num_echo("beta", beta),
                num_echo("gamma", gamma),
            ];
            let plan = match &config.field {
                Some(f) => plan_field(f)?,
                None => default_plan,
            };
            let exact =
                (|| Some((alpha.as_rational()?, beta.as_rational()?, gamma.as_rational()?)))();
            let pair = match (exact, exact_axis(&plan)) {
                (Some((a, b, g)), Some(field)) => {
                    Pair::Exact(FrameModel::unimodular(a, b, g), field)
                }
                _ => {
                    let a = alpha.as_f64().map_err(|e| UsageError(format!("alpha: {e}")))?;
                    let b = beta.as_f64().map_err(|e| UsageError(format!("beta: {e}")))?;
                    let g = gamma.as_f64().map_err(|e| UsageError(format!("gamma: {e}")))?;
                    Pair::Float(FrameModel::unimodular(a, b, g), float_field(&plan))
                }
            };
            Ok(BuiltPair { kind: "unimodular".into(), params, pair })
        }
        ModelSpec::Frame { c } => {
            if c.len() != 3 || c.iter().any(|p| p.len() != 3 || p.iter().any(|r| r.len() != 3)) {
                return Err(UsageError("frame table must be 3x3x3".into()));
            }
            let plan = match &config.field {
                Some(f) => plan_field(f)?,
                None => default_plan,
            };
            let exact: Option<Vec<Rational>> =
                c.iter().flatten().flatten().map(Num::as_rational).collect();
            let pair = match (exact, exact_axis(&plan)) {
                (Some(vals), Some(field)) => {
                    let table = t3(|i, j, k| vals[9 * i + 3 * j + k].clone());
                    let sc = StructureConstants::new(table)
                        .map_err(|e| UsageError(format!("frame table: {e}")))?;
                    Pair::Exact(FrameModel::new(sc), field)
                }
                _ => {
                    let mut vals = Vec::with_capacity(27);
                    for n in c.iter().flatten().flatten() {
                        vals.push(n.as_f64().map_err(|e| UsageError(format!("frame table: {e}")))?);
                    }
                    let sc = StructureConstants::new(t3(|i, j, k| vals[9 * i + 3 * j + k]))
                        .map_err(|e| UsageError(format!("frame table: {e}")))?;
                    Pair::Float(FrameModel::new(sc), float_field(&plan))
                }
            };
            Ok(BuiltPair { kind: "frame".into(), params: Vec::new(), pair })
        }
        ModelSpec::Catalog { name, params } => {
            let entry = build_entry(name, params)?;
            let plan = config.field.as_ref().map(plan_field).transpose()?;
            let params = entry_params(name, params)?;
            let pair = match entry {
                BuiltEntry::Exact(e) => match plan {
                    None => Pair::Exact(e.model, e.field),
                    Some(p) => match exact_axis(&p) {
                        Some(field) => Pair::Exact(e.model, field),
                        None => Pair::Float(e.model.to_f64(), float_field(&p)),
                    },
                },
                BuiltEntry::Float(e) => {
                    let field = match plan {
                        None => e.field,
                        Some(p) => float_field(&p),
                    };
                    Pair::Float(e.model, field)
                }
            };
            Ok(BuiltPair { kind: format!("catalog:{name}"), params, pair })
        }
        ModelSpec::Chart { .. } => Err(UsageError(
            "chart models only support chart-verify; use a catalog or unimodular model here"
                .into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// catalog entries

enum BuiltEntry {
    Exact(CatalogEntry<Rational>),
    Float(CatalogEntry<f64>),
}

fn known_params(
    name: &str,
    params: &BTreeMap<String, Num>,
    allowed: &[&str],
) -> Result<(), UsageError> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(UsageError(format!(
                "{name}: unknown parameter {key:?} (allowed: {allowed:?})"
            )));
        }
    }
    Ok(())
}

fn parse_matrix(params: &BTreeMap<String, Num>) -> Result<[[i64; 2]; 2], UsageError> {
    let text = match params.get("matrix") {
        None => return Ok([[2, 1], [1, 1]]),
        Some(Num::Text(t)) => t.clone(),
        Some(Num::Int(_) | Num::Float(_)) => {
            return Err(UsageError("matrix takes four integers: matrix=2,1,1,1".into()));
        }
    };
    let vals: Result<Vec<i64>, _> = text.split(',').map(|t| t.trim().parse::<i64>()).collect();
    match vals {
        Ok(v) if v.len() == 4 => Ok([[v[0], v[1]], [v[2], v[3]]]),
        _ => Err(UsageError(format!("matrix takes four integers, got {text:?}"))),
    }
}

fn build_entry(name: &str, params: &BTreeMap<String, Num>) -> Result<BuiltEntry, UsageError> {
    match name {
        "hopf" => {
            known_params(name, params, &[])?;
            Ok(BuiltEntry::Exact(hopf()))
        }
        "unimodular" => {
            known_params(name, params, &["alpha", "beta", "gamma"])?;
            let defaults = [("alpha", 1), ("beta", 2), ("gamma", 3)];
            let mut exact = Vec::new();
            let mut float = Vec::new();
            let mut all_exact = true;
            for (key, dflt) in defaults {
                let num = params.get(key).cloned().unwrap_or(Num::Int(dflt));
                match num.as_rational() {
                    Some(r) => exact.push(r),
                    None => all_exact = false,
                }
                float.push(num.as_f64().map_err(|e| UsageError(format!("{key}: {e}")))?);
            }
            if all_exact {
                Ok(BuiltEntry::Exact(unimodular_entry(
                    exact[0].clone(),
                    exact[1].clone(),
                    exact[2].clone(),
                )))
            } else {
                Ok(BuiltEntry::Float(unimodular_entry(float[0], float[1], float[2])))
            }
        }
        "flat-torus" => {
            known_params(name, params, &["a"])?;
            let num = params.get("a").cloned().unwrap_or(Num::Int(2));
            match num.as_rational() {
                Some(a) => flat_torus(a)
                    .map(BuiltEntry::Exact)
                    .map_err(|e| UsageError(format!("flat-torus: {e}"))),
                None => {
                    let a = num.as_f64().map_err(|e| UsageError(format!("a: {e}")))?;
                    flat_torus(a)
                        .map(BuiltEntry::Float)
                        .map_err(|e| UsageError(format!("flat-torus: {e}")))
                }
            }
        }
        "hyperbolic-space" => {
            known_params(name, params, &[])?;
            Ok(BuiltEntry::Exact(hyperbolic_space()))
        }
        "hyperbolic-torus" => {
            known_params(name, params, &["matrix"])?;
            let m = parse_matrix(params)?;
            hyperbolic_torus(m)
                .map(BuiltEntry::Float)
                .map_err(|e| UsageError(format!("hyperbolic-torus: {e}")))
        }
        other => {
            let names: Vec<&str> = triflow_core::catalog::entries().iter().map(|e| e.0).collect();
            Err(UsageError(format!("unknown catalog entry {other:?} (available: {names:?})")))
        }
    }
}

/// Echo the parameters a catalog entry actually ran with, defaults included.
fn entry_params(
    name: &str,
    params: &BTreeMap<String, Num>,
) -> Result<Vec<NamedValue>, UsageError> {
    let mut out = vec![NamedValue { name: "name".into(), value: name.into() }];
    match name {
        "unimodular" => {
            for (key, dflt) in [("alpha", 1), ("beta", 2), ("gamma", 3)] {
                let num = params.get(key).cloned().unwrap_or(Num::Int(dflt));
                out.push(num_echo(key, &num));
            }
        }
        "flat-torus" => {
            let num = params.get("a").cloned().unwrap_or(Num::Int(2));
            out.push(num_echo("a", &num));
        }
        "hyperbolic-torus" => {
            let m = parse_matrix(params)?;
            out.push(NamedValue {
                name: "matrix".into(),
                value: format!("{},{},{},{}", m[0][0], m[0][1], m[1][0], m[1][1]),
            });
        }
        _ => {}
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// analyze / classify

fn fill_single<S: Scalar>(
    report: &mut Report,
    model: &FrameModel<S>,
    field: UnitField<S>,
    kind: &str,
    params: Vec<NamedValue>,
    tol: &Tol,
    with_classification: bool,
) {
    let analysis = analyze(model, field, Orientation::Positive, tol);
    report.model = Some(report::model_echo(kind, params, model, tol));
    report.field =
        Some(std::array::from_fn(|i| report::scalar_str(&analysis.field.components()[i])));
    report.analysis = Some(report::analysis_report(model, &analysis, tol));
    for e in &analysis.residuals {
        if e.asserted && !e.holds(tol) {
            report.fail(format!(
                "identity {} = {} exceeds tolerance",
                e.name,
                report::scalar_str(&e.value)
            ));
        }
    }
    if with_classification {
        fill_classification(report, model, &analysis, tol);
    }
}

fn fill_classification<S: Scalar>(
    report: &mut Report,
    model: &FrameModel<S>,
    analysis: &FieldAnalysis<S>,
    tol: &Tol,
) {
    let c = classify(model, analysis, tol);
    let rescaled = match (&c.case, &c.b) {
        (ClassificationCase::KillingSasakianRescale, Some(b)) => {
            match conformal_rescale(model, &analysis.field, b, tol) {
                Ok(r) => {
                    if !r.sasakian_residual.is_negligible(tol) {
                        report.fail(format!(
                            "rescaled structure is not Sasakian: residual {}",
                            report::scalar_str(&r.sasakian_residual)
                        ));
                    }
                    Some(r)
                }
                Err(e) => {
                    report.fail(format!("conformal rescale failed: {e}"));
                    None
                }
            }
        }
        _ => None,
    };
    if let Some(em) = &c.emitted {
        if !em.roundtrip_residual.is_negligible(tol) {
            report.fail(format!(
                "normal-form roundtrip residual {} exceeds tolerance",
                report::scalar_str(&em.roundtrip_residual)
            ));
        }
    }
    if let Some(fc) = &c.frame_checks {
        for (label, value) in [
            ("phi_form", &fc.phi_form_residual),
            ("ric12", &fc.ric12_residual),
            ("scalb", &fc.scalb_residual),
        ] {
            if !value.is_negligible(tol) {
                report.fail(format!(
                    "eigenframe check {label} residual {} exceeds tolerance",
                    report::scalar_str(value)
                ));
            }
        }
    }
    report.warnings.extend(c.warnings.iter().cloned());
    report.classification = Some(report::classification_report(&c, rescaled.as_ref()));
}

fn run_single(config: &RunConfig, tol: &Tol, with_classification: bool) -> Result<Report, UsageError> {
    let built = build_pair(config)?;
    let mut report = Report::new(config.mode.label(), built.pair.kernel(), &config.tolerances);
    match built.pair {
        Pair::Exact(model, field) => fill_single(
            &mut report,
            &model,
            field,
            &built.kind,
            built.params,
            tol,
            with_classification,
        ),
        Pair::Float(model, field) => fill_single(
            &mut report,
            &model,
            field,
            &built.kind,
            built.params,
            tol,
            with_classification,
        ),
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// finder

fn run_find(config: &RunConfig, tol: &Tol) -> Result<Report, UsageError> {
    let built = build_pair(config)?;
    let model = built.pair.float_model();
    let mut report = Report::new(config.mode.label(), "float", &config.tolerances);
    report.model = Some(report::model_echo(&built.kind, built.params, &model, tol));
    let cfg = config.finder.to_config();
    let finder = find_all(&model, &cfg);
    // soundness gate: every reported root re-verifies through the analysis
    // path within an order of magnitude of the acceptance residual
    let budget = 10.0 * cfg.converge_tol;
    for d in &finder.directions {
        let field = UnitField::new(d.direction).expect("finder output is unit");
        let check = analyze(&model, field, Orientation::Positive, tol);
        if check.harmonic.unit_harmonic > budget {
            report.fail(format!(
                "direction [{}, {}, {}] fails re-verification: residual {}",
                report::float_str(d.direction[0]),
                report::float_str(d.direction[1]),
                report::float_str(d.direction[2]),
                report::float_str(check.harmonic.unit_harmonic)
            ));
        }
    }
    report.finder = Some(report::finder_out(&finder, cfg.n_starts));
    Ok(report)
}

// ---------------------------------------------------------------------------
// chart cross-validation

fn run_chart(config: &RunConfig, tol: &Tol) -> Result<Report, UsageError> {
    let spec = config
        .model
        .as_ref()
        .ok_or_else(|| UsageError("chart-verify needs a model: catalog:NAME or chart:NAME".into()))?;
    let (entry_name, params) = match spec {
        ModelSpec::Catalog { name, params } => (name.clone(), params.clone()),
        ModelSpec::Chart { name, params } => {
            // each chart pairs with the catalog entry built around it
            let twin = match name.as_str() {
                "mapping-torus" => "hyperbolic-torus",
                "twisted-flat" => "flat-torus",
                "round-sphere" => "hopf",
                other => {
                    return Err(UsageError(format!(
                        "unknown chart {other:?} (available: mapping-torus, twisted-flat, \
                         round-sphere)"
                    )));
                }
            };
            let params = match (name.as_str(), params.get("a"), params.get("matrix")) {
                ("twisted-flat", Some(a), _) => BTreeMap::from([("a".to_string(), a.clone())]),
                ("mapping-torus", _, Some(m)) => {
                    BTreeMap::from([("matrix".to_string(), m.clone())])
                }
                _ => BTreeMap::new(),
            };
            (twin.to_string(), params)
        }
        _ => {
            return Err(UsageError(
                "chart-verify needs a catalog or chart model (those carry coordinate data)"
                    .into(),
            ));
        }
    };
    let (model, field, chart) = match build_entry(&entry_name, &params)? {
        BuiltEntry::Exact(e) => {
            let chart = e.chart.ok_or_else(|| {
                UsageError(format!("catalog entry {entry_name:?} has no chart"))
            })?;
            (e.model.to_f64(), e.field.to_f64(), chart())
        }
        BuiltEntry::Float(e) => {
            let chart = e.chart.ok_or_else(|| {
                UsageError(format!("catalog entry {entry_name:?} has no chart"))
            })?;
            (e.model, e.field, chart())
        }
    };
    let mut report = Report::new(config.mode.label(), "float", &config.tolerances);
    report.model =
        Some(report::model_echo(&format!("catalog:{entry_name}"), entry_params(&entry_name, &params)?, &model, tol));
    let phi: Option<M3<f64>> = if chart.lie_frame {
        Some(analyze(&model, field, Orientation::Positive, tol).shape.phi)
    } else {
        None
    };
    match cross_validate(&chart, &model, phi.as_ref(), &default_grid(), config.tolerances.fd_step)
    {
        Ok(cv) => {
            let budget = config.tolerances.fd;
            if cv.ricci_residual > budget {
                report.fail(format!(
                    "chart Ricci deviates from the frame model by {} (budget {})",
                    report::float_str(cv.ricci_residual),
                    report::float_str(budget)
                ));
            }
            for (label, value) in [
                ("structure", cv.structure_residual),
                ("phi", cv.phi_residual),
            ] {
                if let Some(v) = value {
                    if v > budget {
                        report.fail(format!(
                            "chart {label} residual {} exceeds budget {}",
                            report::float_str(v),
                            report::float_str(budget)
                        ));
                    }
                }
            }
            report.chart = Some(report::chart_out(&chart.name, &cv, config.tolerances.fd_step));
        }
        Err(e) => report.fail(format!("chart validation failed: {e}")),
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// catalog sweep-through

fn run_catalog(config: &RunConfig, tol: &Tol) -> Result<Report, UsageError> {
    let selected: Vec<(String, BTreeMap<String, Num>)> = match &config.model {
        None => triflow_core::catalog::entries()
            .iter()
            .map(|(name, _)| (name.to_string(), BTreeMap::new()))
            .collect(),
        Some(ModelSpec::Catalog { name, params }) => vec![(name.clone(), params.clone())],
        Some(_) => {
            return Err(UsageError(
                "catalog mode takes a catalog model (or none, to verify every entry)".into(),
            ));
        }
    };
    let mut report = Report::new(config.mode.label(), "mixed", &config.tolerances);
    let mut entries = Vec::new();
    for (name, params) in &selected {
        let (out, passed) = match build_entry(name, params)? {
            BuiltEntry::Exact(e) => catalog_entry_out(&e, "exact", tol),
            BuiltEntry::Float(e) => catalog_entry_out(&e, "float", tol),
        };
        if !passed {
            let failed: Vec<&str> = out
                .facts
                .iter()
                .filter(|f| !f.passed)
                .map(|f| f.name.as_str())
                .collect();
            report.fail(format!("catalog entry {name} failed: {failed:?}"));
        }
        entries.push(out);
    }
    report.catalog = Some(report::CatalogOut { entries });
    Ok(report)
}

fn catalog_entry_out<S: Scalar>(
    entry: &CatalogEntry<S>,
    kernel: &str,
    tol: &Tol,
) -> (report::CatalogEntryOut, bool) {
    let v = verify_entry(entry, tol);
    let out = report::CatalogEntryOut {
        name: entry.name.clone(),
        summary: entry.summary.clone(),
        kernel: kernel.to_string(),
        case: v.classification.case.label(),
        passed: v.passed,
        facts: v.outcomes.iter().map(report::fact_out).collect(),
    };
    (out, v.passed)
}

// ---------------------------------------------------------------------------
// sweep

fn run_sweep_mode(config: &RunConfig, tol: &Tol) -> Result<Report, UsageError> {
    if config.sweep.count == 0 {
        return Err(UsageError("sweep count must be positive".into()));
    }
    if config.sweep.workers == 0 {
        return Err(UsageError("sweep workers must be positive".into()));
    }
    let mut report = Report::new(config.mode.label(), "exact", &config.tolerances);
    let outcome = sweep::run_sweep(&config.sweep, tol);
    for f in outcome.failures {
        report.fail(f);
    }
    report.sweep = Some(outcome.out);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_model_arg, RunConfig};

    fn config(mode: Mode, model: &str, field: Option<&str>) -> RunConfig {
        let mut cfg = RunConfig::new(mode);
        cfg.model = Some(parse_model_arg(model).unwrap());
        cfg.field = field.map(|f| crate::config::parse_field_arg(f).unwrap());
        cfg
    }

    #[test]
    fn analyze_axis_runs_exact_and_passes() {
        let report = run(&config(Mode::Analyze, "unimodular:1,2,3", Some("e3"))).unwrap();
        assert!(report.verdict.pass);
        assert_eq!(report.kernel, "exact");
        let a = report.analysis.as_ref().unwrap();
        assert_eq!(a.lambda, "-12");
        assert_eq!(a.norm2_phi, "13");
        assert_eq!(a.unit_harmonic_residual, "0");
        assert!(a.flags.harmonic);
        assert_eq!(report.field.as_ref().unwrap()[2], "1");
    }

    #[test]
    fn analyze_generic_field_is_informational_not_failing() {
        let report =
            run(&config(Mode::Analyze, "unimodular:1,2,3", Some("1,1,1"))).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
        assert_eq!(report.kernel, "float");
        let a = report.analysis.as_ref().unwrap();
        assert!(!a.flags.harmonic);
        let residual: f64 = a.unit_harmonic_residual.parse().unwrap();
        assert!(residual > 0.1, "generic direction is far from harmonic");
    }

    #[test]
    fn exactly_normalizable_components_stay_exact() {
        let report =
            run(&config(Mode::Analyze, "unimodular:1,2,3", Some("3/5,0,4/5"))).unwrap();
        assert_eq!(report.kernel, "exact");
        let f = report.field.as_ref().unwrap();
        assert_eq!(f[0], "3/5");
        assert_eq!(f[2], "4/5");
    }

    #[test]
    fn classify_normal_form_round_trip() {
        let report = run(&config(Mode::Classify, "unimodular:1,2,3", None)).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
        let c = report.classification.as_ref().unwrap();
        assert_eq!(c.case, "non_killing_b_nonzero");
        assert_eq!(c.lambda1.as_deref(), Some("5"));
        assert_eq!(c.b.as_deref(), Some("1/2"));
        let em = c.emitted.as_ref().unwrap();
        assert_eq!(em.brackets, ["2".to_string(), "3".to_string(), "-1".to_string()]);
        assert_eq!(em.milnor, "sl2r");
        assert_eq!(c.input_milnor, "sl2r");
        assert_eq!(em.roundtrip_residual, "0");
    }

    #[test]
    fn classify_hopf_rescales_to_sasakian() {
        let report = run(&config(Mode::Classify, "catalog:hopf", None)).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
        let c = report.classification.as_ref().unwrap();
        assert_eq!(c.case, "killing_sasakian_rescale");
        assert_eq!(c.b.as_deref(), Some("1"));
        let r = c.rescaled.as_ref().unwrap();
        assert_eq!(r.sasakian_residual, "0");
    }

    #[test]
    fn classify_hyperbolic_space_reports_obstruction_without_failing() {
        let report = run(&config(Mode::Classify, "catalog:hyperbolic-space", None)).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
        let c = report.classification.as_ref().unwrap();
        assert_eq!(c.case, "hypothesis_failed(not_divergence_free)");
        assert!(c.compact_obstruction);
    }

    #[test]
    fn find_recovers_the_axes() {
        let report = run(&config(Mode::Find, "unimodular:1,2,3", None)).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
        let f = report.finder.as_ref().unwrap();
        assert_eq!(f.directions.len(), 3);
        let mut axes: Vec<Option<usize>> =
            f.directions.iter().map(|d| d.matches_axis).collect();
        axes.sort();
        assert_eq!(axes, vec![Some(1), Some(2), Some(3)]);
        assert!(!f.continuous_family);
    }

    #[test]
    fn chart_verify_mapping_torus_within_budget() {
        let report =
            run(&config(Mode::ChartVerify, "chart:mapping-torus:matrix=2,1,1,1", None)).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
        let c = report.chart.as_ref().unwrap();
        assert_eq!(c.grid_points, 27);
        let ricci: f64 = c.ricci_residual.parse().unwrap();
        assert!(ricci < 1e-5, "ricci residual {ricci}");
        assert!(c.structure_residual.is_some());
        assert!(c.phi_residual.is_some());
    }

    #[test]
    fn catalog_mode_verifies_every_entry() {
        let report = run(&RunConfig::new(Mode::Catalog)).unwrap();
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
        let entries = &report.catalog.as_ref().unwrap().entries;
        assert_eq!(entries.len(), 5);
        assert!(entries.iter().all(|e| e.passed));
        let hopf = entries.iter().find(|e| e.name == "hopf").unwrap();
        assert_eq!(hopf.kernel, "exact");
        assert!(hopf.facts.iter().any(|f| f.provenance == "quoted"));
    }

    #[test]
    fn usage_errors_for_bad_specs() {
        // non-hyperbolic gluing matrix
        let err = run(&config(
            Mode::Classify,
            "catalog:hyperbolic-torus:matrix=1,0,0,1",
            None,
        ))
        .unwrap_err();
        assert!(err.0.contains("hyperbolic-torus"), "{err}");
        // flat torus with zero rate degenerates to the parallel case
        assert!(run(&config(Mode::Classify, "catalog:flat-torus:a=0", None)).is_err());
        // zero field vector
        assert!(run(&config(Mode::Analyze, "unimodular:1,2,3", Some("0,0,0"))).is_err());
        // chart models are chart-verify only
        assert!(run(&config(Mode::Analyze, "chart:round-sphere", None)).is_err());
        // missing model
        assert!(run(&RunConfig::new(Mode::Analyze)).is_err());
    }

    #[test]
    fn float_parameters_force_the_float_kernel() {
        let mut cfg = RunConfig::new(Mode::Classify);
        cfg.model = Some(parse_model_arg("unimodular:1.5,2,3").unwrap());
        let report = run(&cfg).unwrap();
        assert_eq!(report.kernel, "float");
        assert!(report.verdict.pass, "{:?}", report.verdict.failures);
    }
}

//! Run configuration: the TOML schema plus the compact `--model` / `--field`
//! strings accepted on the command line.
//!
//! Numeric parameters keep their written form ([`Num`]) until a kernel is
//! chosen: integers and `p/q` strings can run exact, a float literal anywhere
//! forces the float kernel.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use triflow_core::scalar::ratio_from_str;
use triflow_core::{FinderConfig, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Analyze,
    Classify,
    Find,
    ChartVerify,
    Sweep,
    Catalog,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Analyze => "analyze",
            Mode::Classify => "classify",
            Mode::Find => "find",
            Mode::ChartVerify => "chart-verify",
            Mode::Sweep => "sweep",
            Mode::Catalog => "catalog",
        }
    }
}

/// A number as written: TOML integers stay integers, `"p/q"` strings stay
/// exact, float literals are floats.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    /// Exact value when one exists; `None` marks a float literal (or an
    /// unparseable string, which surfaces later through [`Num::as_f64`]).
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Num::Int(n) => Some(Rational::from_int(*n)),
            Num::Float(_) => None,
            Num::Text(t) => ratio_from_str::<Rational>(t),
        }
    }

    pub fn as_f64(&self) -> Result<f64, String> {
        match self {
            Num::Int(n) => Ok(*n as f64),
            Num::Float(v) => Ok(*v),
            Num::Text(t) => ratio_from_str::<f64>(t)
                .ok_or_else(|| format!("expected an integer or p/q ratio, got {t:?}")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Diagonal brackets [e1,e2] = alpha e3, [e1,e3] = beta e2,
    /// [e2,e3] = gamma e1.
    Unimodular { alpha: Num, beta: Num, gamma: Num },
    /// Full bracket table c[i][j][k], 3x3x3, antisymmetric in (i,j).
    Frame { c: Vec<Vec<Vec<Num>>> },
    /// Built-in model by name, with per-entry parameters.
    Catalog {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, Num>,
    },
    /// Coordinate chart by name; resolves to the paired catalog entry for
    /// cross-validation.
    Chart {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, Num>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    /// "e1".."e3", optionally negated: "-e2".
    Name(String),
    /// Raw components, normalized on load.
    Components([Num; 3]),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Algebraic residuals and case dispatch (float kernel).
    pub algebraic: f64,
    /// Budget for chart-versus-frame deviations.
    pub fd: f64,
    /// Finite-difference step for chart curvature.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { algebraic: 1e-10, fd: 1e-5, fd_step: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FinderSettings {
    pub n_starts: usize,
    pub max_iters: usize,
    pub converge_tol: f64,
    pub dedupe_tol: f64,
    pub newton_polish: bool,
}

impl Default for FinderSettings {
    fn default() -> Self {
        let d = FinderConfig::default();
        FinderSettings {
            n_starts: d.n_starts,
            max_iters: d.max_iters,
            converge_tol: d.converge_tol,
            dedupe_tol: d.dedupe_tol,
            newton_polish: d.newton_polish,
        }
    }
}

impl FinderSettings {
    pub fn to_config(self) -> FinderConfig {
        FinderConfig {
            n_starts: self.n_starts,
            max_iters: self.max_iters,
            converge_tol: self.converge_tol,
            dedupe_tol: self.dedupe_tol,
            newton_polish: self.newton_polish,
            ..FinderConfig::default()
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub json_path: Option<PathBuf>,
    pub markdown_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    /// Random models drawn per sweep.
    pub count: usize,
    pub seed: u64,
    /// Worker threads; the output order is fixed by draw order either way.
    pub workers: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec { count: 20, seed: 0, workers: 1 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub field: Option<FieldSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub finder: FinderSettings,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        RunConfig {
            mode,
            model: None,
            field: None,
            tolerances: Tolerances::default(),
            finder: FinderSettings::default(),
            output: OutputSpec::default(),
            sweep: SweepSpec::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config: {e}"))
    }
}

fn parse_num(token: &str) -> Result<Num, String> {
    let t = token.trim();
    if t.contains('/') {
        return Ok(Num::Text(t.to_string()));
    }
    if let Ok(n) = t.parse::<i64>() {
        return Ok(Num::Int(n));
    }
    if let Ok(v) = t.parse::<f64>() {
        return Ok(Num::Float(v));
    }
    Err(format!("not a number: {t:?}"))
}

/// `key=a,b,...` lists after the entry name; values containing commas (the
/// gluing matrix) stay attached to their key.
fn parse_params(text: &str) -> Result<BTreeMap<String, Num>, String> {
    let mut params = BTreeMap::new();
    let mut current: Option<(String, Vec<String>)> = None;
    for token in text.split(',') {
        if let Some((key, value)) = token.split_once('=') {
            if let Some((k, vs)) = current.take() {
                params.insert(k, list_num(&vs)?);
            }
            current = Some((key.trim().to_string(), vec![value.trim().to_string()]));
        } else if let Some((_, vs)) = current.as_mut() {
            vs.push(token.trim().to_string());
        } else {
            return Err(format!("parameter without key=value form: {token:?}"));
        }
    }
    if let Some((k, vs)) = current.take() {
        params.insert(k, list_num(&vs)?);
    }
    Ok(params)
}

fn list_num(values: &[String]) -> Result<Num, String> {
    if values.len() == 1 {
        parse_num(&values[0])
    } else {
        // multi-valued parameters round-trip as comma text
        Ok(Num::Text(values.join(",")))
    }
}

/// `unimodular:1,2,3` | `catalog:hopf` | `catalog:flat-torus:a=2` |
/// `chart:mapping-torus:matrix=2,1,1,1`.
pub fn parse_model_arg(text: &str) -> Result<ModelSpec, String> {
    let (kind, rest) = match text.split_once(':') {
        Some(pair) => pair,
        None => (text, ""),
    };
    match kind {
        "unimodular" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("unimodular takes alpha,beta,gamma; got {rest:?}"));
            }
            Ok(ModelSpec::Unimodular {
                alpha: parse_num(parts[0])?,
                beta: parse_num(parts[1])?,
                gamma: parse_num(parts[2])?,
            })
        }
        "catalog" | "chart" => {
            let (name, params) = match rest.split_once(':') {
                Some((n, p)) => (n, parse_params(p)?),
                None if rest.is_empty() => {
                    return Err(format!("{kind} needs a name, e.g. {kind}:hopf"));
                }
                None => (rest, BTreeMap::new()),
            };
            let name = name.to_string();
            if kind == "catalog" {
                Ok(ModelSpec::Catalog { name, params })
            } else {
                Ok(ModelSpec::Chart { name, params })
            }
        }
        other => Err(format!(
            "unknown model kind {other:?} (expected unimodular, catalog, or chart; \
             frame tables are config-file only)"
        )),
    }
}

/// `e1`..`e3`, `-e2`, or three comma-separated components.
pub fn parse_field_arg(text: &str) -> Result<FieldSpec, String> {
    let t = text.trim();
    let bare = t.strip_prefix('-').unwrap_or(t);
    if matches!(bare, "e1" | "e2" | "e3") {
        return Ok(FieldSpec::Name(t.to_string()));
    }
    let parts: Vec<&str> = t.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("field must be e1..e3 (optionally -e1) or x,y,z; got {t:?}"));
    }
    Ok(FieldSpec::Components([
        parse_num(parts[0])?,
        parse_num(parts[1])?,
        parse_num(parts[2])?,
    ]))
}

/// Axis index and sign for a named field.
pub fn parse_axis_name(name: &str) -> Result<(usize, bool), String> {
    let (bare, negated) = match name.strip_prefix('-') {
        Some(b) => (b, true),
        None => (name, false),
    };
    match bare {
        "e1" => Ok((0, negated)),
        "e2" => Ok((1, negated)),
        "e3" => Ok((2, negated)),
        other => Err(format!("unknown field name {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_covers_the_schema() {
        let cfg = RunConfig::from_toml(
            r#"
            mode = "classify"
            [model]
            type = "unimodular"
            alpha = 1
            beta = "3/2"
            gamma = -2.5
            [tolerances]
            algebraic = 1e-9
            [finder]
            n_starts = 32
            [output]
            json_path = "out.json"
            [sweep]
            count = 5
            seed = 42
            "#,
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Classify);
        match cfg.model.unwrap() {
            ModelSpec::Unimodular { alpha, beta, gamma } => {
                assert_eq!(alpha.as_rational(), Some(Rational::from_integer(1.into())));
                assert_eq!(beta.as_rational(), Some(Rational::new(3.into(), 2.into())));
                assert!(gamma.as_rational().is_none());
                assert_eq!(gamma.as_f64().unwrap(), -2.5);
            }
            other => panic!("wrong spec: {other:?}"),
        }
        assert_eq!(cfg.tolerances.algebraic, 1e-9);
        assert_eq!(cfg.tolerances.fd, 1e-5);
        assert_eq!(cfg.finder.n_starts, 32);
        assert_eq!(cfg.finder.max_iters, FinderConfig::default().max_iters);
        assert_eq!(cfg.output.json_path.unwrap().to_str(), Some("out.json"));
        assert_eq!(cfg.sweep.count, 5);
        assert_eq!(cfg.sweep.seed, 42);
        assert_eq!(cfg.sweep.workers, 1);
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let err = RunConfig::from_toml("mode = \"analyze\"\nbogus = 1\n").unwrap_err();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn compact_model_strings() {
        match parse_model_arg("unimodular:1/2,-3,5").unwrap() {
            ModelSpec::Unimodular { alpha, beta, gamma } => {
                assert_eq!(alpha.as_rational(), Some(Rational::new(1.into(), 2.into())));
                assert_eq!(beta.as_rational(), Some(Rational::from_integer((-3).into())));
                assert_eq!(gamma.as_rational(), Some(Rational::from_integer(5.into())));
            }
            other => panic!("wrong spec: {other:?}"),
        }
        match parse_model_arg("catalog:hyperbolic-torus:matrix=2,1,1,1").unwrap() {
            ModelSpec::Catalog { name, params } => {
                assert_eq!(name, "hyperbolic-torus");
                match &params["matrix"] {
                    Num::Text(t) => assert_eq!(t, "2,1,1,1"),
                    other => panic!("matrix kept as {other:?}"),
                }
            }
            other => panic!("wrong spec: {other:?}"),
        }
        match parse_model_arg("chart:round-sphere").unwrap() {
            ModelSpec::Chart { name, params } => {
                assert_eq!(name, "round-sphere");
                assert!(params.is_empty());
            }
            other => panic!("wrong spec: {other:?}"),
        }
        assert!(parse_model_arg("frame:whatever").is_err());
        assert!(parse_model_arg("unimodular:1,2").is_err());
    }

    #[test]
    fn field_strings() {
        assert!(matches!(parse_field_arg("e3").unwrap(), FieldSpec::Name(n) if n == "e3"));
        assert!(matches!(parse_field_arg("-e1").unwrap(), FieldSpec::Name(n) if n == "-e1"));
        assert_eq!(parse_axis_name("-e1").unwrap(), (0, true));
        assert_eq!(parse_axis_name("e2").unwrap(), (1, false));
        match parse_field_arg("3/5,4/5,0").unwrap() {
            FieldSpec::Components(c) => {
                assert_eq!(c[0].as_rational(), Some(Rational::new(3.into(), 5.into())));
            }
            other => panic!("wrong spec: {other:?}"),
        }
        assert!(parse_field_arg("e4").is_err());
        assert!(parse_field_arg("1,2").is_err());
    }
}

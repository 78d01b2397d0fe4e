//! Report tree serialized to JSON under the `triflow/report/v1` schema.
//!
//! Every number is a string: floats in scientific notation with 17
//! significant digits, exact values in reduced integer or `p/q` form.  With
//! struct-order serialization and no maps, the same run always produces the
//! same bytes.  Indices are printed 1-based (e1, e2, e3).

use serde::Serialize;
use triflow_core::linalg::{M3, T3};
use triflow_core::{
    ClassificationResult, ContactCheck, CriticalDirection, CrossValidation, FactOutcome,
    FieldAnalysis, FieldFlags, FinderReport, FrameModel, Orientation, Provenance, RescaledModel,
    Scalar, Tol,
};

pub const SCHEMA: &str = "triflow/report/v1";

/// 17 significant digits round-trip any f64; exact values print exactly.
pub fn scalar_str<S: Scalar>(x: &S) -> String {
    if S::EXACT {
        x.to_string()
    } else {
        format!("{:.16e}", x.to_f64())
    }
}

pub fn float_str(x: f64) -> String {
    format!("{x:.16e}")
}

fn matrix_str<S: Scalar>(m: &M3<S>) -> [[String; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| scalar_str(&m[i][j])))
}

/// Nonzero entries of a rank-3 table, 1-based.
fn table_entries<S: Scalar>(t: &T3<S>) -> Vec<IndexedValue> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if t[i][j][k] != S::zero() {
                    out.push(IndexedValue {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        value: scalar_str(&t[i][j][k]),
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexedValue {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelEcho {
    pub kind: String,
    pub params: Vec<NamedValue>,
    /// Nonzero brackets c[i][j][k], 1-based.
    pub brackets: Vec<IndexedValue>,
    pub milnor: String,
    pub jacobi_ok: bool,
}

pub fn model_echo<S: Scalar>(
    kind: &str,
    params: Vec<NamedValue>,
    model: &FrameModel<S>,
    tol: &Tol,
) -> ModelEcho {
    ModelEcho {
        kind: kind.to_string(),
        params,
        brackets: table_entries(&model.constants.c),
        milnor: triflow_core::milnor_type(&model.constants, tol).label().to_string(),
        jacobi_ok: model.constants.jacobi_residual().is_negligible(tol),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceEcho {
    pub algebraic: String,
    pub fd: String,
    pub fd_step: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagsReport {
    pub harmonic: bool,
    pub totally_geodesic: bool,
    pub divergence_free: bool,
    pub killing: bool,
    pub ricci_aligned: bool,
    pub jacobi_ok: bool,
}

impl From<FieldFlags> for FlagsReport {
    fn from(f: FieldFlags) -> Self {
        FlagsReport {
            harmonic: f.harmonic,
            totally_geodesic: f.totally_geodesic,
            divergence_free: f.divergence_free,
            killing: f.killing,
            ricci_aligned: f.ricci_aligned,
            jacobi_ok: f.jacobi_ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactReport {
    pub trace_phi_j: String,
    pub wedge_value: String,
    pub route_gap: String,
    pub is_contact: bool,
}

fn contact_report<S: Scalar>(c: &ContactCheck<S>) -> ContactReport {
    ContactReport {
        trace_phi_j: scalar_str(&c.trace_phi_j),
        wedge_value: scalar_str(&c.wedge_value),
        route_gap: scalar_str(&c.route_gap),
        is_contact: c.is_contact,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub value: String,
    /// Hypotheses hold, so the value is required to vanish; informational
    /// otherwise.
    pub asserted: bool,
    pub holds: bool,
    pub statement: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    /// Nonzero <nabla_{e_i} e_j, e_k>, 1-based.
    pub connection: Vec<IndexedValue>,
    pub ricci: [[String; 3]; 3],
    pub scal: String,
    pub phi: [[String; 3]; 3],
    pub trace_phi: String,
    pub norm2_phi: String,
    pub det_horizontal: String,
    /// Ric(zeta, zeta).
    pub lambda: String,
    pub lambda1: Option<String>,
    pub trace_phi_j: String,
    pub energy_density: String,
    pub geodesic_defect: String,
    pub unit_harmonic_residual: String,
    pub harmonic_map_residual: String,
    pub killing_residual: String,
    pub kostant_residual: String,
    pub aligned_gap: Option<String>,
    pub sasakian_residual: String,
    pub flags: FlagsReport,
    pub contact: ContactReport,
    pub residuals: Vec<ResidualReport>,
}

pub fn analysis_report<S: Scalar>(
    model: &FrameModel<S>,
    a: &FieldAnalysis<S>,
    tol: &Tol,
) -> AnalysisReport {
    AnalysisReport {
        connection: table_entries(&model.connection.gamma),
        ricci: matrix_str(&model.curvature.ricci),
        scal: scalar_str(&model.curvature.scal),
        phi: matrix_str(&a.shape.phi),
        trace_phi: scalar_str(&a.invariants.trace_phi),
        norm2_phi: scalar_str(&a.invariants.norm2_phi),
        det_horizontal: scalar_str(&a.invariants.det_horizontal),
        lambda: scalar_str(&a.lambda),
        lambda1: a.invariants.lambda1.as_ref().map(scalar_str),
        trace_phi_j: scalar_str(&a.invariants.trace_phi_j),
        energy_density: scalar_str(&a.invariants.energy_density),
        geodesic_defect: scalar_str(&a.shape.geodesic_defect),
        unit_harmonic_residual: scalar_str(&a.harmonic.unit_harmonic),
        harmonic_map_residual: scalar_str(&a.harmonic.harmonic_map),
        killing_residual: scalar_str(&a.killing.killing_residual),
        kostant_residual: scalar_str(&a.killing.kostant_residual),
        aligned_gap: a.killing.aligned_gap.as_ref().map(scalar_str),
        sasakian_residual: scalar_str(&a.sasakian_residual),
        flags: a.flags.into(),
        contact: contact_report(&a.contact),
        residuals: a
            .residuals
            .iter()
            .map(|e| ResidualReport {
                name: e.name.to_string(),
                value: scalar_str(&e.value),
                asserted: e.asserted,
                holds: e.holds(tol),
                statement: e.statement.to_string(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EmittedReport {
    /// (a1, a2, a3) with the classified field on the first axis.
    pub brackets: [String; 3],
    pub milnor: String,
    /// Diagonal of the recomputed Ricci; off-diagonal defects land in the
    /// roundtrip residual.
    pub reconstructed_ricci: [String; 3],
    pub expected_ricci: [String; 3],
    pub roundtrip_residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameChecksReport {
    pub phi_form_residual: String,
    pub ric12_residual: String,
    pub scalb_residual: String,
    pub orientation: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RescaleReport {
    pub b: String,
    pub brackets: Vec<IndexedValue>,
    pub sasakian_residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub case: String,
    pub family: String,
    pub lambda: String,
    pub norm2_phi: String,
    pub scal: String,
    pub lambda1: Option<String>,
    pub b: Option<String>,
    pub emitted: Option<EmittedReport>,
    pub frame_checks: Option<FrameChecksReport>,
    pub scal_lambda_residual: Option<String>,
    pub input_milnor: String,
    pub compact_obstruction: bool,
    pub rescaled: Option<RescaleReport>,
    pub warnings: Vec<String>,
}

fn orientation_str(o: Orientation) -> String {
    match o {
        Orientation::Positive => "positive".into(),
        Orientation::Negative => "negative".into(),
    }
}

pub fn classification_report<S: Scalar>(
    c: &ClassificationResult<S>,
    rescaled: Option<&RescaledModel<S>>,
) -> ClassificationReport {
    ClassificationReport {
        case: c.case.label(),
        family: c.theorem_family.clone(),
        lambda: scalar_str(&c.lambda),
        norm2_phi: scalar_str(&c.norm2_phi),
        scal: scalar_str(&c.scal),
        lambda1: c.lambda1.as_ref().map(scalar_str),
        b: c.b.as_ref().map(scalar_str),
        emitted: c.emitted.as_ref().map(|e| EmittedReport {
            brackets: std::array::from_fn(|i| scalar_str(&e.brackets[i])),
            milnor: e.milnor.label().to_string(),
            reconstructed_ricci: std::array::from_fn(|i| scalar_str(&e.reconstructed_ricci[i][i])),
            expected_ricci: std::array::from_fn(|i| scalar_str(&e.expected_ricci[i])),
            roundtrip_residual: scalar_str(&e.roundtrip_residual),
        }),
        frame_checks: c.frame_checks.as_ref().map(|f| FrameChecksReport {
            phi_form_residual: scalar_str(&f.phi_form_residual),
            ric12_residual: scalar_str(&f.ric12_residual),
            scalb_residual: scalar_str(&f.scalb_residual),
            orientation: orientation_str(f.orientation),
        }),
        scal_lambda_residual: c.scal_lambda_residual.as_ref().map(scalar_str),
        input_milnor: c.input_milnor.label().to_string(),
        compact_obstruction: c.compact_obstruction,
        rescaled: rescaled.map(|r| RescaleReport {
            b: scalar_str(&r.b),
            brackets: table_entries(&r.model.constants.c),
            sasakian_residual: scalar_str(&r.sasakian_residual),
        }),
        warnings: c.warnings.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionReport {
    pub direction: [String; 3],
    pub residual: String,
    pub basin_count: usize,
    /// 1-based frame axis this direction coincides with, if any.
    pub matches_axis: Option<usize>,
    pub harmonic: bool,
    pub totally_geodesic: bool,
    pub killing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FinderOut {
    pub seeds: usize,
    pub converged: usize,
    pub dropped: usize,
    pub continuous_family: bool,
    pub directions: Vec<DirectionReport>,
}

pub fn finder_out(r: &FinderReport, seeds: usize) -> FinderOut {
    let direction_report = |d: &CriticalDirection| DirectionReport {
        direction: std::array::from_fn(|i| float_str(d.direction[i])),
        residual: float_str(d.residual),
        basin_count: d.basin_count,
        matches_axis: d.matches_axis.map(|k| k + 1),
        harmonic: d.flags.harmonic,
        totally_geodesic: d.flags.totally_geodesic,
        killing: d.flags.killing,
    };
    FinderOut {
        seeds,
        converged: r.converged,
        dropped: r.dropped,
        continuous_family: r.continuous_family,
        directions: r.directions.iter().map(direction_report).collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartOut {
    pub chart: String,
    pub grid_points: usize,
    pub curvature_step: String,
    pub ricci_residual: String,
    pub structure_residual: Option<String>,
    pub phi_residual: Option<String>,
}

pub fn chart_out(name: &str, cv: &CrossValidation, step: f64) -> ChartOut {
    ChartOut {
        chart: name.to_string(),
        grid_points: cv.grid_points,
        curvature_step: float_str(step),
        ricci_residual: float_str(cv.ricci_residual),
        structure_residual: cv.structure_residual.map(float_str),
        phi_residual: cv.phi_residual.map(float_str),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactOut {
    pub name: String,
    pub provenance: String,
    pub passed: bool,
    pub detail: String,
}

pub fn fact_out(o: &FactOutcome) -> FactOut {
    FactOut {
        name: o.name.clone(),
        provenance: provenance_str(o.provenance),
        passed: o.passed,
        detail: o.detail.clone(),
    }
}

fn provenance_str(p: Provenance) -> String {
    p.label().to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntryOut {
    pub name: String,
    pub summary: String,
    pub kernel: String,
    pub case: String,
    pub passed: bool,
    pub facts: Vec<FactOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogOut {
    pub entries: Vec<CatalogEntryOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub case: String,
    pub milnor: String,
    pub lambda: String,
    pub b: Option<String>,
    pub harmonic: bool,
    pub identities: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOut {
    pub count: usize,
    pub seed: u64,
    pub workers: usize,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub mode: String,
    pub kernel: String,
    pub tolerances: ToleranceEcho,
    pub model: Option<ModelEcho>,
    /// Field components actually analyzed (post-normalization).
    pub field: Option<[String; 3]>,
    pub analysis: Option<AnalysisReport>,
    pub classification: Option<ClassificationReport>,
    pub finder: Option<FinderOut>,
    pub chart: Option<ChartOut>,
    pub catalog: Option<CatalogOut>,
    pub sweep: Option<SweepOut>,
    pub warnings: Vec<String>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(mode: &str, kernel: &str, tol: &crate::config::Tolerances) -> Self {
        Report {
            schema: SCHEMA,
            mode: mode.to_string(),
            kernel: kernel.to_string(),
            tolerances: ToleranceEcho {
                algebraic: float_str(tol.algebraic),
                fd: float_str(tol.fd),
                fd_step: float_str(tol.fd_step),
            },
            model: None,
            field: None,
            analysis: None,
            classification: None,
            finder: None,
            chart: None,
            catalog: None,
            sweep: None,
            warnings: Vec::new(),
            verdict: Verdict { pass: true, failures: Vec::new() },
        }
    }

    pub fn fail(&mut self, reason: impl Into<String>) {
        self.verdict.pass = false;
        self.verdict.failures.push(reason.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

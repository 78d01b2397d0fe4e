//! Built-in models with their expected facts.
//!
//! Each catalog entry packages a frame model, a distinguished field, a list
//! of facts the analysis must reproduce, and (where one exists) an
//! independent coordinate chart for cross-validation.  Facts carry a
//! provenance tag saying how the expected value was obtained:
//!
//! * `Quoted`: a value stated by the reference treatment of the example.
//! * `Derived`: recomputed by hand from the model data.
//! * `Immediate`: a direct consequence of definitions (sign conventions,
//!   zero traces, and the like).
//!
//! Verification compares against the engine output under the active kernel,
//! so rational entries are checked exactly.

use crate::chart::{mapping_torus_chart, round_sphere_chart, twisted_flat_chart, ChartModel};
use crate::classify::{classify, ClassificationResult, MilnorType};
use crate::error::GeomError;
use crate::field::{analyze, FieldAnalysis, Orientation, UnitField};
use crate::frame::{killing_form, FrameModel, StructureConstants};
use crate::linalg::{m3, t3, M3};
use crate::scalar::{Scalar, Tol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Quoted,
    Derived,
    Immediate,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Quoted => "quoted",
            Provenance::Derived => "derived",
            Provenance::Immediate => "immediate",
        }
    }
}

/// One checkable statement about a model/field pair.
#[derive(Clone, Debug)]
pub enum FactCheck<S> {
    /// Ricci is diagonal with these entries (off-diagonals zero).
    RicciDiagonal([S; 3]),
    /// The listed connection coefficients <nabla_{e_i} e_j, e_k>, all
    /// unlisted entries zero.
    ConnectionEntries(Vec<(usize, usize, usize, S)>),
    KillingFormDiagonal([S; 3]),
    Norm2Phi(S),
    PhiMatrix(M3<S>),
    TracePhi(S),
    /// Ric(zeta, zeta).
    Lambda(S),
    Scal(S),
    Lambda1(S),
    BValue(S),
    EnergyDensity(S),
    TracePhiJ(S),
    EmittedBrackets([S; 3]),
    MilnorIs(MilnorType),
    /// Classification case label, e.g. "non_killing_b_zero".
    CaseIs(&'static str),
    CompactObstruction(bool),
    KillingResidual(S),
    Harmonic(bool),
    TotallyGeodesic(bool),
    Killing(bool),
    Sasakian(bool),
    Contact(bool),
}

#[derive(Clone, Debug)]
pub struct ExpectedFact<S> {
    pub name: String,
    pub provenance: Provenance,
    pub check: FactCheck<S>,
}

impl<S> ExpectedFact<S> {
    fn new(name: &str, provenance: Provenance, check: FactCheck<S>) -> Self {
        ExpectedFact { name: name.into(), provenance, check }
    }
}

/// Result of checking one fact.
#[derive(Clone, Debug)]
pub struct FactOutcome {
    pub name: String,
    pub provenance: Provenance,
    pub passed: bool,
    pub detail: String,
}

/// A model, its distinguished field, and everything known about the pair.
pub struct CatalogEntry<S: Scalar> {
    pub name: String,
    pub summary: String,
    pub model: FrameModel<S>,
    pub field: UnitField<S>,
    pub orientation: Orientation,
    pub facts: Vec<ExpectedFact<S>>,
    /// Independent coordinate representation, when one is built in.
    pub chart: Option<Box<dyn Fn() -> ChartModel>>,
}

/// Names accepted by [`entry`]-style constructors, with one-line summaries.
pub fn entries() -> Vec<(&'static str, &'static str)> {
    vec![
        ("hopf", "round sphere with the fiber field of its standard fibration"),
        ("unimodular", "diagonal bracket model (alpha, beta, gamma), vertical axis field"),
        ("flat-torus", "flat metric whose field rotates at rate a along a closed geodesic"),
        ("hyperbolic-space", "curvature -1 space with the normal of a horosphere foliation"),
        ("hyperbolic-torus", "mapping torus of a gluing matrix, suspension direction field"),
    ]
}

fn scalar_eq<S: Scalar>(actual: &S, expected: &S, tol: &Tol) -> bool {
    (actual.clone() - expected.clone()).is_negligible(tol)
}

fn scalar_outcome<S: Scalar>(
    name: &str,
    provenance: Provenance,
    actual: &S,
    expected: &S,
    tol: &Tol,
) -> FactOutcome {
    FactOutcome {
        name: name.into(),
        provenance,
        passed: scalar_eq(actual, expected, tol),
        detail: format!("expected {expected}, got {actual}"),
    }
}

fn bool_outcome(name: &str, provenance: Provenance, actual: bool, expected: bool) -> FactOutcome {
    FactOutcome {
        name: name.into(),
        provenance,
        passed: actual == expected,
        detail: format!("expected {expected}, got {actual}"),
    }
}

fn matrix_eq<S: Scalar>(actual: &M3<S>, expected: &M3<S>, tol: &Tol) -> (bool, String) {
    for i in 0..3 {
        for j in 0..3 {
            if !scalar_eq(&actual[i][j], &expected[i][j], tol) {
                return (
                    false,
                    format!(
                        "entry [{i}][{j}]: expected {}, got {}",
                        expected[i][j], actual[i][j]
                    ),
                );
            }
        }
    }
    (true, "all entries match".into())
}

pub fn verify_fact<S: Scalar>(
    fact: &ExpectedFact<S>,
    model: &FrameModel<S>,
    analysis: &FieldAnalysis<S>,
    classification: &ClassificationResult<S>,
    tol: &Tol,
) -> FactOutcome {
    let name = fact.name.as_str();
    let p = fact.provenance;
    match &fact.check {
        FactCheck::RicciDiagonal(d) => {
            let expected = m3(|i, j| if i == j { d[i].clone() } else { S::zero() });
            let (passed, detail) = matrix_eq(&model.curvature.ricci, &expected, tol);
            FactOutcome { name: name.into(), provenance: p, passed, detail }
        }
        FactCheck::ConnectionEntries(entries) => {
            let mut table = t3(|_, _, _| S::zero());
            for (i, j, k, v) in entries {
                table[*i][*j][*k] = v.clone();
            }
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        if !scalar_eq(&model.connection.gamma[i][j][k], &table[i][j][k], tol) {
                            return FactOutcome {
                                name: name.into(),
                                provenance: p,
                                passed: false,
                                detail: format!(
                                    "gamma[{i}][{j}][{k}]: expected {}, got {}",
                                    table[i][j][k], model.connection.gamma[i][j][k]
                                ),
                            };
                        }
                    }
                }
            }
            FactOutcome {
                name: name.into(),
                provenance: p,
                passed: true,
                detail: "all 27 coefficients match".into(),
            }
        }
        FactCheck::KillingFormDiagonal(d) => {
            let expected = m3(|i, j| if i == j { d[i].clone() } else { S::zero() });
            let actual = killing_form(&model.constants);
            let (passed, detail) = matrix_eq(&actual, &expected, tol);
            FactOutcome { name: name.into(), provenance: p, passed, detail }
        }
        FactCheck::Norm2Phi(v) => scalar_outcome(name, p, &analysis.invariants.norm2_phi, v, tol),
        FactCheck::PhiMatrix(expected) => {
            let (passed, detail) = matrix_eq(&analysis.shape.phi, expected, tol);
            FactOutcome { name: name.into(), provenance: p, passed, detail }
        }
        FactCheck::TracePhi(v) => scalar_outcome(name, p, &analysis.invariants.trace_phi, v, tol),
        FactCheck::Lambda(v) => scalar_outcome(name, p, &analysis.lambda, v, tol),
        FactCheck::Scal(v) => scalar_outcome(name, p, &model.curvature.scal, v, tol),
        FactCheck::Lambda1(v) => match &classification.lambda1 {
            Some(actual) => scalar_outcome(name, p, actual, v, tol),
            None => FactOutcome {
                name: name.into(),
                provenance: p,
                passed: false,
                detail: format!("expected {v}, but lambda1 was not determined"),
            },
        },
        FactCheck::BValue(v) => match &classification.b {
            Some(actual) => scalar_outcome(name, p, actual, v, tol),
            None => FactOutcome {
                name: name.into(),
                provenance: p,
                passed: false,
                detail: format!("expected {v}, but b was not determined"),
            },
        },
        FactCheck::EnergyDensity(v) => {
            scalar_outcome(name, p, &analysis.invariants.energy_density, v, tol)
        }
        FactCheck::TracePhiJ(v) => {
            scalar_outcome(name, p, &analysis.invariants.trace_phi_j, v, tol)
        }
        FactCheck::EmittedBrackets(expected) => match &classification.emitted {
            Some(e) => {
                for k in 0..3 {
                    if !scalar_eq(&e.brackets[k], &expected[k], tol) {
                        return FactOutcome {
                            name: name.into(),
                            provenance: p,
                            passed: false,
                            detail: format!(
                                "bracket {k}: expected {}, got {}",
                                expected[k], e.brackets[k]
                            ),
                        };
                    }
                }
                FactOutcome {
                    name: name.into(),
                    provenance: p,
                    passed: true,
                    detail: "all three brackets match".into(),
                }
            }
            None => FactOutcome {
                name: name.into(),
                provenance: p,
                passed: false,
                detail: "no normal form was emitted".into(),
            },
        },
        FactCheck::MilnorIs(expected) => FactOutcome {
            name: name.into(),
            provenance: p,
            passed: classification.input_milnor == *expected,
            detail: format!("expected {expected}, got {}", classification.input_milnor),
        },
        FactCheck::CaseIs(expected) => {
            let actual = classification.case.label();
            FactOutcome {
                name: name.into(),
                provenance: p,
                passed: actual == *expected,
                detail: format!("expected {expected}, got {actual}"),
            }
        }
        FactCheck::CompactObstruction(expected) => bool_outcome(
            name,
            p,
            classification.compact_obstruction,
            *expected,
        ),
        FactCheck::KillingResidual(v) => {
            scalar_outcome(name, p, &analysis.killing.killing_residual, v, tol)
        }
        FactCheck::Harmonic(expected) => {
            bool_outcome(name, p, analysis.flags.harmonic, *expected)
        }
        FactCheck::TotallyGeodesic(expected) => {
            bool_outcome(name, p, analysis.flags.totally_geodesic, *expected)
        }
        FactCheck::Killing(expected) => bool_outcome(name, p, analysis.flags.killing, *expected),
        FactCheck::Sasakian(expected) => {
            let is_sasakian = analysis.sasakian_residual.is_negligible(tol);
            bool_outcome(name, p, is_sasakian, *expected)
        }
        FactCheck::Contact(expected) => {
            bool_outcome(name, p, analysis.contact.is_contact, *expected)
        }
    }
}

/// Full verification of an entry: analysis, classification, one outcome per
/// fact.
pub struct VerifiedEntry<S: Scalar> {
    pub analysis: FieldAnalysis<S>,
    pub classification: ClassificationResult<S>,
    pub outcomes: Vec<FactOutcome>,
    pub passed: bool,
}

pub fn verify_entry<S: Scalar>(entry: &CatalogEntry<S>, tol: &Tol) -> VerifiedEntry<S> {
    let analysis = analyze(&entry.model, entry.field.clone(), entry.orientation, tol);
    let classification = classify(&entry.model, &analysis, tol);
    let outcomes: Vec<FactOutcome> = entry
        .facts
        .iter()
        .map(|f| verify_fact(f, &entry.model, &analysis, &classification, tol))
        .collect();
    let passed = outcomes.iter().all(|o| o.passed) && analysis.identities_hold(tol);
    VerifiedEntry { analysis, classification, outcomes, passed }
}

/// Round model of curvature one with the field tangent to its standard
/// fibration: the benchmark Killing/Sasakian example.
pub fn hopf<S: Scalar>() -> CatalogEntry<S> {
    let two = S::from_int(2);
    let one = S::one();
    let model = FrameModel::unimodular(two.clone(), -two.clone(), two.clone());
    use FactCheck::*;
    use Provenance::*;
    let facts = vec![
        ExpectedFact::new("ricci", Quoted, RicciDiagonal([two.clone(), two.clone(), two.clone()])),
        ExpectedFact::new(
            "connection",
            Derived,
            ConnectionEntries(vec![
                (0, 1, 2, one.clone()),
                (0, 2, 1, -one.clone()),
                (1, 2, 0, one.clone()),
                (1, 0, 2, -one.clone()),
                (2, 0, 1, one.clone()),
                (2, 1, 0, -one.clone()),
            ]),
        ),
        ExpectedFact::new(
            "killing-form",
            Derived,
            KillingFormDiagonal([S::from_int(-8), S::from_int(-8), S::from_int(-8)]),
        ),
        ExpectedFact::new("norm2-phi", Derived, Norm2Phi(two.clone())),
        ExpectedFact::new("lambda", Derived, Lambda(two.clone())),
        ExpectedFact::new("b", Quoted, BValue(one.clone())),
        ExpectedFact::new("case", Quoted, CaseIs("killing_sasakian_rescale")),
        ExpectedFact::new("energy", Quoted, EnergyDensity(S::from_ratio(5, 2))),
        ExpectedFact::new("trace-phi-j", Derived, TracePhiJ(-two.clone())),
        ExpectedFact::new("milnor", Quoted, MilnorIs(MilnorType::Su2)),
        ExpectedFact::new("harmonic", Quoted, Harmonic(true)),
        ExpectedFact::new("totally-geodesic", Quoted, TotallyGeodesic(true)),
        ExpectedFact::new("killing", Quoted, Killing(true)),
        ExpectedFact::new("sasakian", Quoted, Sasakian(true)),
        ExpectedFact::new("contact", Quoted, Contact(true)),
        ExpectedFact::new("compact-obstruction", Immediate, CompactObstruction(false)),
    ];
    CatalogEntry {
        name: "hopf".into(),
        summary: "round sphere with the fiber field of its standard fibration".into(),
        model,
        field: UnitField::axis(2),
        orientation: Orientation::Positive,
        facts,
        chart: Some(Box::new(round_sphere_chart)),
    }
}

/// Diagonal bracket model with the vertical axis field and no preloaded
/// facts beyond what holds for every such axis.
pub fn unimodular_entry<S: Scalar>(alpha: S, beta: S, gamma: S) -> CatalogEntry<S> {
    use FactCheck::*;
    use Provenance::*;
    let facts = vec![
        ExpectedFact::new("harmonic", Derived, Harmonic(true)),
        ExpectedFact::new("totally-geodesic", Derived, TotallyGeodesic(true)),
        ExpectedFact::new("trace-phi", Immediate, TracePhi(S::zero())),
        ExpectedFact::new("compact-obstruction", Immediate, CompactObstruction(false)),
    ];
    CatalogEntry {
        name: "unimodular".into(),
        summary: "diagonal bracket model, vertical axis field".into(),
        model: FrameModel::unimodular(alpha, beta, gamma),
        field: UnitField::axis(2),
        orientation: Orientation::Positive,
        facts,
        chart: None,
    }
}

/// Flat metric whose unit field rotates at constant rate `a` along a closed
/// geodesic: the minimal-energy non-parallel example on the flat torus.
pub fn flat_torus<S: Scalar>(a: S) -> Result<CatalogEntry<S>, GeomError> {
    if a.is_negligible(&Tol::default()) {
        return Err(GeomError::InvalidParameter(
            "rotation rate must be nonzero (zero gives the parallel case)".into(),
        ));
    }
    let abs_a = a.abs();
    let half_a = abs_a.half();
    use FactCheck::*;
    use Provenance::*;
    let facts = vec![
        ExpectedFact::new("ricci", Quoted, RicciDiagonal([S::zero(), S::zero(), S::zero()])),
        ExpectedFact::new("lambda", Derived, Lambda(S::zero())),
        ExpectedFact::new("lambda1", Derived, Lambda1(abs_a.clone())),
        ExpectedFact::new("b", Quoted, BValue(-half_a.clone())),
        ExpectedFact::new("case", Quoted, CaseIs("non_killing_b_nonzero")),
        ExpectedFact::new(
            "emitted-brackets",
            Derived,
            EmittedBrackets([abs_a.clone(), S::zero(), abs_a.clone()]),
        ),
        ExpectedFact::new("milnor", Quoted, MilnorIs(MilnorType::E2)),
        ExpectedFact::new("trace-phi-j", Derived, TracePhiJ(-a.clone())),
        ExpectedFact::new("contact", Quoted, Contact(true)),
        ExpectedFact::new("harmonic", Derived, Harmonic(true)),
        ExpectedFact::new("totally-geodesic", Derived, TotallyGeodesic(true)),
        ExpectedFact::new("killing", Immediate, Killing(false)),
        ExpectedFact::new("energy", Derived, EnergyDensity(
            (S::from_int(3) + abs_a.clone() * abs_a.clone()).half(),
        )),
    ];
    let a_f64 = a.to_f64();
    Ok(CatalogEntry {
        name: "flat-torus".into(),
        summary: "flat metric, field rotating at a constant rate along a geodesic".into(),
        model: FrameModel::unimodular(a.clone(), -a, S::zero()),
        field: UnitField::axis(2),
        orientation: Orientation::Positive,
        facts,
        chart: Some(Box::new(move || twisted_flat_chart(a_f64))),
    })
}

/// Curvature -1 space with the unit normal of a horosphere foliation:
/// harmonic and totally geodesic but with nonzero divergence, so it
/// fails the compact-quotient hypotheses.
pub fn hyperbolic_space<S: Scalar>() -> CatalogEntry<S> {
    let one = S::one();
    let mut sc = StructureConstants::zero();
    sc.set_bracket(0, 2, 0, one.clone());
    sc.set_bracket(1, 2, 1, one.clone());
    let model = FrameModel::new(sc);
    let minus_two = S::from_int(-2);
    use FactCheck::*;
    use Provenance::*;
    let facts = vec![
        ExpectedFact::new(
            "ricci",
            Quoted,
            RicciDiagonal([minus_two.clone(), minus_two.clone(), minus_two.clone()]),
        ),
        ExpectedFact::new("trace-phi", Quoted, TracePhi(minus_two.clone())),
        ExpectedFact::new(
            "phi",
            Derived,
            PhiMatrix(m3(|i, j| {
                if i == j && i < 2 {
                    -S::one()
                } else {
                    S::zero()
                }
            })),
        ),
        ExpectedFact::new("norm2-phi", Derived, Norm2Phi(S::from_int(2))),
        ExpectedFact::new("harmonic", Quoted, Harmonic(true)),
        ExpectedFact::new("totally-geodesic", Derived, TotallyGeodesic(true)),
        ExpectedFact::new("killing", Immediate, Killing(false)),
        ExpectedFact::new("case", Derived, CaseIs("hypothesis_failed(not_divergence_free)")),
        ExpectedFact::new("compact-obstruction", Quoted, CompactObstruction(true)),
        ExpectedFact::new("milnor", Immediate, MilnorIs(MilnorType::NotLie)),
    ];
    CatalogEntry {
        name: "hyperbolic-space".into(),
        summary: "curvature -1 space, horosphere normal field".into(),
        model,
        field: UnitField::axis(2),
        orientation: Orientation::Positive,
        facts,
        chart: None,
    }
}

/// Mapping torus of the 2-torus under `matrix`, suspension direction field.
/// The expansion rate is computed from the matrix at run time; float kernel
/// only, since the rate is irrational.
pub fn hyperbolic_torus(matrix: [[i64; 2]; 2]) -> Result<CatalogEntry<f64>, GeomError> {
    let beta = crate::chart::expanding_eigenvalue(matrix)?;
    let l = beta.ln();
    let mut sc = StructureConstants::<f64>::zero();
    sc.set_bracket(0, 2, 0, l);
    sc.set_bracket(1, 2, 1, -l);
    let model = FrameModel::new(sc);
    use FactCheck::*;
    use Provenance::*;
    let facts = vec![
        ExpectedFact::new("ricci", Derived, RicciDiagonal([0.0, 0.0, -2.0 * l * l])),
        ExpectedFact::new(
            "phi",
            Quoted,
            PhiMatrix(m3(|i, j| match (i, j) {
                (0, 0) => -l,
                (1, 1) => l,
                _ => 0.0,
            })),
        ),
        ExpectedFact::new("trace-phi", Derived, TracePhi(0.0)),
        ExpectedFact::new("norm2-phi", Derived, Norm2Phi(2.0 * l * l)),
        ExpectedFact::new("lambda", Derived, Lambda(-2.0 * l * l)),
        ExpectedFact::new("scal", Derived, Scal(-2.0 * l * l)),
        ExpectedFact::new("lambda1", Derived, Lambda1(2.0 * l)),
        ExpectedFact::new("b", Derived, BValue(0.0)),
        ExpectedFact::new("case", Quoted, CaseIs("non_killing_b_zero")),
        ExpectedFact::new("killing-residual", Derived, KillingResidual(2.0 * l)),
        ExpectedFact::new("harmonic", Quoted, Harmonic(true)),
        ExpectedFact::new("totally-geodesic", Derived, TotallyGeodesic(true)),
        ExpectedFact::new("killing", Immediate, Killing(false)),
        ExpectedFact::new("contact", Derived, Contact(false)),
        ExpectedFact::new("compact-obstruction", Derived, CompactObstruction(false)),
        ExpectedFact::new("milnor", Immediate, MilnorIs(MilnorType::NotLie)),
    ];
    Ok(CatalogEntry {
        name: "hyperbolic-torus".into(),
        summary: "mapping torus of a hyperbolic gluing, suspension field".into(),
        model,
        field: UnitField::axis(2),
        orientation: Orientation::Positive,
        facts,
        chart: Some(Box::new(move || {
            mapping_torus_chart(matrix).expect("matrix validated at construction")
        })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{cross_validate, default_grid, DEFAULT_CURVATURE_STEP};
    use crate::scalar::Rational;

    #[test]
    fn hopf_facts_hold_exactly() {
        let entry = hopf::<Rational>();
        let v = verify_entry(&entry, &Tol::default());
        for o in &v.outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
        assert!(v.passed);
    }

    #[test]
    fn flat_torus_facts_hold_exactly() {
        let entry = flat_torus(Rational::from_int(2)).unwrap();
        let v = verify_entry(&entry, &Tol::default());
        for o in &v.outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
        assert!(v.passed);
    }

    #[test]
    fn flat_torus_rejects_zero_rate() {
        assert!(matches!(
            flat_torus(Rational::from_int(0)),
            Err(GeomError::InvalidParameter(_))
        ));
    }

    #[test]
    fn hyperbolic_space_facts_hold_exactly() {
        let entry = hyperbolic_space::<Rational>();
        let v = verify_entry(&entry, &Tol::default());
        for o in &v.outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
        assert!(v.passed);
    }

    #[test]
    fn hyperbolic_torus_facts_hold_in_floats() {
        let entry = hyperbolic_torus([[2, 1], [1, 1]]).unwrap();
        let v = verify_entry(&entry, &Tol::default());
        for o in &v.outcomes {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
        assert!(v.passed);
    }

    #[test]
    fn hyperbolic_torus_rejects_non_expanding_matrices() {
        assert!(hyperbolic_torus([[1, 1], [0, 1]]).is_err());
        assert!(hyperbolic_torus([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn unimodular_entry_axis_facts() {
        let entry = unimodular_entry(
            Rational::from_int(1),
            Rational::from_int(2),
            Rational::from_int(3),
        );
        let v = verify_entry(&entry, &Tol::default());
        assert!(v.passed);
        assert_eq!(v.classification.case.label(), "non_killing_b_nonzero");
    }

    #[test]
    fn catalog_charts_cross_validate() {
        let tol = Tol::default();
        for entry in [
            hyperbolic_torus([[2, 1], [1, 1]]).unwrap(),
            flat_torus(2.0).unwrap(),
            hopf::<f64>(),
        ] {
            let chart = match &entry.chart {
                Some(build) => build(),
                None => continue,
            };
            let analysis =
                analyze(&entry.model, entry.field.clone(), entry.orientation, &tol);
            let phi = if chart.lie_frame { Some(&analysis.shape.phi) } else { None };
            let cv = cross_validate(
                &chart,
                &entry.model,
                phi,
                &default_grid(),
                DEFAULT_CURVATURE_STEP,
            )
            .unwrap();
            assert!(
                cv.ricci_residual < 1e-5,
                "{}: ricci residual {}",
                entry.name,
                cv.ricci_residual
            );
            if let Some(sf) = cv.structure_residual {
                assert!(sf < 1e-8, "{}: structure {sf}", entry.name);
            }
            if let Some(pr) = cv.phi_residual {
                assert!(pr < 1e-5, "{}: phi {pr}", entry.name);
            }
        }
    }

    #[test]
    fn entry_listing_is_stable() {
        let names: Vec<&str> = entries().iter().map(|(n, _)| *n).collect();
        assert_eq!(
            names,
            vec!["hopf", "unimodular", "flat-torus", "hyperbolic-space", "hyperbolic-torus"]
        );
    }
}

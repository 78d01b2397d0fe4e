//! Case analysis for harmonic, totally geodesic, divergence-free unit fields
//! with Ric(zeta) parallel to zeta, plus algebra-type detection and the
//! conformal rescaling map.
//!
//! The dispatch invariants are
//!   lambda    = Ric(zeta, zeta)
//!   lambda1^2 = |phi|^2 - lambda      (largest eigenvalue of S|_H, squared)
//!   b^2       = (|phi|^2 + lambda)/4  (twist of the antisymmetric part)
//! and the four cases are lambda1 = 0 / lambda1 != 0 crossed with b = 0 /
//! b != 0 (lambda1 = 0 forces b^2 = lambda/2, splitting on lambda instead).
//!
//! In the b != 0 case the field determines an eigenframe (E1, E2) of
//! S = phi + phi^T on the horizontal plane, and in that frame the model is
//! isometric to a unimodular Lie group whose bracket coefficients are emitted
//! in closed form; the result carries both the emitted constants and the
//! Ricci matrix they must reproduce, compared entry by entry.
//!
//! All frame quantities are computed on unnormalized eigenvectors and divided
//! by their squared length, so rational inputs classify with exact
//! arithmetic: b is always rational; only lambda1 can need a square root.

use crate::error::GeomError;
use crate::field::{
    analyze, sasakian_residual, rescale_constants, FieldAnalysis, Orientation, UnitField,
};
use crate::frame::{FrameModel, StructureConstants};
use crate::linalg::{
    cross, dot, epsilon, frob, m3, mat_vec, max_abs_m3, max_scalar, sum3, v3, M3, V3,
};
use crate::scalar::{Scalar, Tol};

/// Signature classes of diagonal bracket triples, named by the simply
/// connected groups they integrate to, plus the catch-all for constants that
/// are not in diagonal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MilnorType {
    Su2,
    Sl2R,
    E2,
    Sol,
    Nil,
    Abelian,
    NotLie,
}

impl MilnorType {
    pub fn label(self) -> &'static str {
        match self {
            MilnorType::Su2 => "su2",
            MilnorType::Sl2R => "sl2r",
            MilnorType::E2 => "e2",
            MilnorType::Sol => "sol",
            MilnorType::Nil => "nil",
            MilnorType::Abelian => "abelian",
            MilnorType::NotLie => "not-diagonal",
        }
    }
}

impl std::fmt::Display for MilnorType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Signature type of a diagonal model.  The variables are read off in the
/// convention [e_1,e_2] = l1 e_0-cyclic order (l1 = c[1][2][0],
/// l2 = c[2][0][1], l3 = c[0][1][2]); permutations and a global sign flip
/// are the symmetries, so only the sign multiset up to flip matters.
pub fn milnor_type<S: Scalar>(sc: &StructureConstants<S>, tol: &Tol) -> MilnorType {
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let diagonal_slot = i != j && j != k && i != k;
                if !diagonal_slot && !sc.c[i][j][k].is_negligible(tol) {
                    return MilnorType::NotLie;
                }
            }
        }
    }
    let vars = [
        sc.c[1][2][0].clone(),
        sc.c[2][0][1].clone(),
        sc.c[0][1][2].clone(),
    ];
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for v in &vars {
        if v.is_negligible(tol) {
            zero += 1;
        } else if *v > S::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    let (p, n) = if neg > pos { (neg, pos) } else { (pos, neg) };
    match (p, n, zero) {
        (3, 0, 0) => MilnorType::Su2,
        (2, 1, 0) => MilnorType::Sl2R,
        (2, 0, 1) => MilnorType::E2,
        (1, 1, 1) => MilnorType::Sol,
        (1, 0, 2) => MilnorType::Nil,
        (0, 0, 3) => MilnorType::Abelian,
        _ => unreachable!("sign counts always total three"),
    }
}

/// Why classification declined to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisFailure {
    NotLieAlgebra,
    NotHarmonic,
    NotTotallyGeodesic,
    NotDivergenceFree,
    RicciNotAligned,
}

impl HypothesisFailure {
    pub fn label(self) -> &'static str {
        match self {
            HypothesisFailure::NotLieAlgebra => "not_lie_algebra",
            HypothesisFailure::NotHarmonic => "not_harmonic",
            HypothesisFailure::NotTotallyGeodesic => "not_totally_geodesic",
            HypothesisFailure::NotDivergenceFree => "not_divergence_free",
            HypothesisFailure::RicciNotAligned => "ricci_not_aligned",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassificationCase {
    /// phi = 0: the field is parallel.
    Parallel,
    /// lambda1 = 0, lambda > 0: Killing field, Sasakian after rescaling by b.
    KillingSasakianRescale,
    /// lambda1 != 0, b = 0: untwisted eigenframe, forces Scal = lambda.
    NonKillingBZero,
    /// lambda1 != 0, b != 0: eigenframe twists, unimodular normal form.
    NonKillingBNonzero,
    HypothesisFailed(HypothesisFailure),
}

impl ClassificationCase {
    pub fn label(self) -> String {
        match self {
            ClassificationCase::Parallel => "parallel".into(),
            ClassificationCase::KillingSasakianRescale => "killing_sasakian_rescale".into(),
            ClassificationCase::NonKillingBZero => "non_killing_b_zero".into(),
            ClassificationCase::NonKillingBNonzero => "non_killing_b_nonzero".into(),
            ClassificationCase::HypothesisFailed(why) => {
                format!("hypothesis_failed({})", why.label())
            }
        }
    }
}

/// Normal-form bracket coefficients for the b != 0 case.  The emitted model
/// is `unimodular(a[0], a[1], a[2])` and the classified field is its first
/// axis e_0.
pub fn normal_form_brackets<S: Scalar>(scal: &S, lambda: &S, lambda1: &S, b: &S) -> [S; 3] {
    let twist = (scal.clone() - lambda.clone()) / (S::from_int(4) * b.clone());
    let half_l1 = lambda1.half();
    [
        -twist.clone() + half_l1.clone() - b.clone(),
        twist + half_l1 + b.clone(),
        -(b.clone() + b.clone()),
    ]
}

/// Ricci diagonal the emitted model must reproduce, in its own frame order
/// (field axis first).
pub fn normal_form_ricci<S: Scalar>(scal: &S, lambda: &S, lambda1: &S, b: &S) -> [S; 3] {
    let half_excess = (scal.clone() - lambda.clone()).half();
    let ratio = lambda1.clone() / (b.clone() + b.clone());
    [
        lambda.clone(),
        half_excess.clone() * (S::one() + ratio.clone()),
        half_excess * (S::one() - ratio),
    ]
}

/// The unimodular model determined by the eigenframe, with its verification
/// data.
#[derive(Clone, Debug)]
pub struct EmittedAlgebra<S> {
    /// Bracket coefficients (alpha, beta, gamma) of the emitted model; the
    /// classified field is its e_0 axis.
    pub brackets: [S; 3],
    /// Ricci matrix of the emitted model, recomputed from its constants.
    pub reconstructed_ricci: M3<S>,
    /// Ricci diagonal predicted by the classification invariants.
    pub expected_ricci: [S; 3],
    /// max |reconstructed - diag(expected)|.
    pub roundtrip_residual: S,
    pub milnor: MilnorType,
}

/// Residuals of the eigenframe construction in the b != 0 case.
#[derive(Clone, Debug)]
pub struct FrameChecks<S> {
    /// Defect of phi against [[lambda1/2, b], [-b, -lambda1/2]] in the
    /// eigenframe.
    pub phi_form_residual: S,
    /// |Ric(E1, E2) - lambda1 <nabla_zeta E1, E2>|.
    pub ric12_residual: S,
    /// |2 b <nabla_zeta E1, E2> + (Scal - lambda)/2|.
    pub scalb_residual: S,
    /// Orientation of E2 = +-(zeta x E1) chosen to realize the canonical b.
    pub orientation: Orientation,
}

#[derive(Clone, Debug)]
pub struct ClassificationResult<S> {
    pub case: ClassificationCase,
    pub lambda: S,
    pub norm2_phi: S,
    pub scal: S,
    pub lambda1: Option<S>,
    pub b: Option<S>,
    pub emitted: Option<EmittedAlgebra<S>>,
    pub frame_checks: Option<FrameChecks<S>>,
    /// |Scal - lambda| when the case forces that equality (b = 0), else None.
    pub scal_lambda_residual: Option<S>,
    /// Algebra type of the input constants (diagonal convention).
    pub input_milnor: MilnorType,
    /// Nonzero divergence obstructs compact quotients with invariant volume.
    pub compact_obstruction: bool,
    pub theorem_family: String,
    pub warnings: Vec<String>,
}

/// Dead band for deciding lambda1 = 0 in the float kernel; values of
/// lambda1^2 between the working tolerance and this band are treated as zero
/// with a warning.
const LAMBDA1_DEAD_BAND: f64 = 1e-8;

pub fn classify<S: Scalar>(
    model: &FrameModel<S>,
    analysis: &FieldAnalysis<S>,
    tol: &Tol,
) -> ClassificationResult<S> {
    let lambda = analysis.lambda.clone();
    let norm2_phi = analysis.invariants.norm2_phi.clone();
    let scal = model.curvature.scal.clone();
    let input_milnor = milnor_type(&model.constants, tol);
    let compact_obstruction = !analysis.flags.divergence_free;
    let mut warnings = Vec::new();

    let failure = if !analysis.flags.jacobi_ok {
        Some(HypothesisFailure::NotLieAlgebra)
    } else if !analysis.flags.harmonic {
        Some(HypothesisFailure::NotHarmonic)
    } else if !analysis.flags.totally_geodesic {
        Some(HypothesisFailure::NotTotallyGeodesic)
    } else if !analysis.flags.divergence_free {
        Some(HypothesisFailure::NotDivergenceFree)
    } else if !analysis.flags.ricci_aligned {
        Some(HypothesisFailure::RicciNotAligned)
    } else {
        None
    };
    if let Some(why) = failure {
        return ClassificationResult {
            case: ClassificationCase::HypothesisFailed(why),
            lambda,
            norm2_phi,
            scal,
            lambda1: None,
            b: None,
            emitted: None,
            frame_checks: None,
            scal_lambda_residual: None,
            input_milnor,
            compact_obstruction,
            theorem_family: "hypotheses not satisfied".into(),
            warnings,
        };
    }

    // scale-aware zero tests for the float kernel; exact kernel compares
    // literally through is_negligible
    let scale = 1.0 + norm2_phi.to_f64().abs() + lambda.to_f64().abs();
    let negligible = |x: &S| -> bool {
        if S::EXACT {
            x.is_negligible(tol)
        } else {
            x.to_f64().abs() <= tol.algebraic * scale
        }
    };

    let lambda1_sq = norm2_phi.clone() - lambda.clone();
    let b_sq = (norm2_phi.clone() + lambda.clone()) / S::from_int(4);

    let mut lambda1_is_zero = negligible(&lambda1_sq);
    if !S::EXACT && !lambda1_is_zero {
        let v = lambda1_sq.to_f64();
        if v.abs() <= LAMBDA1_DEAD_BAND * scale {
            lambda1_is_zero = true;
            warnings.push(format!(
                "lambda1^2 = {v:.3e} is inside the dead band; treated as zero"
            ));
        }
    }
    if lambda1_sq.to_f64() < 0.0 && !lambda1_is_zero {
        warnings.push(format!(
            "lambda1^2 = {} is negative beyond tolerance; clamped to zero",
            lambda1_sq.to_f64()
        ));
        lambda1_is_zero = true;
    }

    if lambda1_is_zero {
        // Killing regime: S vanishes on H, phi is pure rotation.
        if negligible(&lambda) {
            return ClassificationResult {
                case: ClassificationCase::Parallel,
                lambda,
                norm2_phi,
                scal,
                lambda1: Some(S::zero()),
                b: Some(S::zero()),
                emitted: None,
                frame_checks: None,
                scal_lambda_residual: None,
                input_milnor,
                compact_obstruction,
                theorem_family: "Killing family: parallel field, local Riemannian product".into(),
                warnings,
            };
        }
        if lambda < S::zero() {
            warnings.push(
                "lambda < 0 with lambda1 = 0 contradicts lambda = |phi|^2; data inconsistent"
                    .into(),
            );
        }
        // b is rational even when sqrt(lambda/2) is not: read the twist off
        // the antisymmetric part of phi directly.
        let b = twist_coefficient(analysis).abs();
        return ClassificationResult {
            case: ClassificationCase::KillingSasakianRescale,
            lambda,
            norm2_phi,
            scal,
            lambda1: Some(S::zero()),
            b: Some(b),
            emitted: None,
            frame_checks: None,
            scal_lambda_residual: None,
            input_milnor,
            compact_obstruction,
            theorem_family: "Killing family: Sasakian structure after homothety by b".into(),
            warnings,
        };
    }

    let lambda1 = match lambda1_sq.sqrt_exact() {
        Some(root) => root,
        None => {
            warnings.push(format!(
                "lambda1^2 = {lambda1_sq} has no exact square root; eigenframe data omitted"
            ));
            let case = if negligible(&b_sq) {
                ClassificationCase::NonKillingBZero
            } else {
                ClassificationCase::NonKillingBNonzero
            };
            let scal_lambda_residual = match case {
                ClassificationCase::NonKillingBZero => {
                    Some((scal.clone() - lambda.clone()).abs())
                }
                _ => None,
            };
            return ClassificationResult {
                case,
                lambda,
                norm2_phi,
                scal,
                lambda1: None,
                b: None,
                emitted: None,
                frame_checks: None,
                scal_lambda_residual,
                input_milnor,
                compact_obstruction,
                theorem_family: "non-Killing family (exact form unavailable)".into(),
                warnings,
            };
        }
    };

    if negligible(&b_sq) {
        let residual = (scal.clone() - lambda.clone()).abs();
        if !residual.is_negligible(tol) {
            warnings.push(format!(
                "b = 0 should force Scal = lambda but the residual is {residual}"
            ));
        }
        let family = if lambda < S::zero() {
            "non-Killing, untwisted eigenframe: Scal = Ric(zeta,zeta), negative vertical Ricci"
        } else {
            "non-Killing, untwisted eigenframe: Scal = Ric(zeta,zeta)"
        };
        return ClassificationResult {
            case: ClassificationCase::NonKillingBZero,
            lambda,
            norm2_phi,
            scal,
            lambda1: Some(lambda1),
            b: Some(S::zero()),
            emitted: None,
            frame_checks: None,
            scal_lambda_residual: Some(residual),
            input_milnor,
            compact_obstruction,
            theorem_family: family.into(),
            warnings,
        };
    }

    // b != 0: build the S-eigenframe without normalizing.  (S|_H + lambda1)
    // maps H onto the +lambda1 eigenline, so applying it to either adapted
    // basis vector gives an eigenvector; take the longer image.
    let zeta = analysis.field.components();
    let sym = &analysis.invariants.sym;
    let candidate = |v: &V3<S>| -> V3<S> {
        v3(|i| {
            sum3(|j| sym[i][j].clone() * v[j].clone()) + lambda1.clone() * v[i].clone()
        })
    };
    let w1 = candidate(&analysis.frame.u1);
    let w2 = candidate(&analysis.frame.u2);
    let (w, n_w) = {
        let n1 = dot(&w1, &w1);
        let n2 = dot(&w2, &w2);
        if n2 > n1 {
            (w2, n2)
        } else {
            (w1, n1)
        }
    };
    debug_assert!(n_w > S::zero());

    let phi = &analysis.shape.phi;
    let flat_case = negligible(&lambda);
    // twist of phi in the (w, zeta x w) frame; orientation +1 first
    let jw_pos = cross(zeta, &w);
    let b_pos = dot(&mat_vec(phi, &jw_pos), &w) / n_w.clone();
    let target_negative = flat_case; // canonical b: -lambda1/2 when lambda = 0, positive otherwise
    let take_positive_orientation = (b_pos < S::zero()) == target_negative;
    let (orientation, e2, b) = if take_positive_orientation {
        (Orientation::Positive, jw_pos, b_pos)
    } else {
        (Orientation::Negative, v3(|i| -jw_pos[i].clone()), -b_pos)
    };

    if b.is_negligible(tol) {
        warnings.push(
            "twist read from the eigenframe vanishes although b^2 > 0; data inconsistent".into(),
        );
    }

    // phi against [[lambda1/2, b], [-b, -lambda1/2]] in (E1, E2)
    let phi_w = mat_vec(phi, &w);
    let phi_e2 = mat_vec(phi, &e2);
    let half_l1 = lambda1.half();
    let phi_form_residual = {
        let r11 = (dot(&phi_w, &w) / n_w.clone() - half_l1.clone()).abs();
        let r12 = (dot(&phi_e2, &w) / n_w.clone() - b.clone()).abs();
        let r21 = (dot(&phi_w, &e2) / n_w.clone() + b.clone()).abs();
        let r22 = (dot(&phi_e2, &e2) / n_w.clone() + half_l1.clone()).abs();
        max_scalar(max_scalar(r11, r12), max_scalar(r21, r22))
    };

    // <nabla_zeta E1, E2> and the curvature checks
    let nabla_zeta_w = model.connection.derivative_along(zeta, &w);
    let twist_conn = dot(&nabla_zeta_w, &e2) / n_w.clone();
    let ric12 = dot(&mat_vec(&model.curvature.ricci, &e2), &w) / n_w.clone();
    let ric12_residual = (ric12 - lambda1.clone() * twist_conn.clone()).abs();
    let scalb_residual = ((b.clone() + b.clone()) * twist_conn
        + (scal.clone() - lambda.clone()).half())
    .abs();

    let brackets = normal_form_brackets(&scal, &lambda, &lambda1, &b);
    let expected_ricci = normal_form_ricci(&scal, &lambda, &lambda1, &b);
    let emitted_model = FrameModel::unimodular(
        brackets[0].clone(),
        brackets[1].clone(),
        brackets[2].clone(),
    );
    let reconstructed_ricci = emitted_model.curvature.ricci.clone();
    let roundtrip_residual = max_abs_m3(&m3(|i, j| {
        let target = if i == j { expected_ricci[i].clone() } else { S::zero() };
        reconstructed_ricci[i][j].clone() - target
    }));
    let milnor = milnor_type(&emitted_model.constants, tol);
    let family = if lambda >= S::zero() {
        "non-Killing family: unimodular Lie group in normal form"
    } else {
        "non-Killing family: negative vertical Ricci, outside the nonnegative classification"
    };

    ClassificationResult {
        case: ClassificationCase::NonKillingBNonzero,
        lambda,
        norm2_phi,
        scal,
        lambda1: Some(lambda1),
        b: Some(b),
        emitted: Some(EmittedAlgebra {
            brackets,
            reconstructed_ricci,
            expected_ricci,
            roundtrip_residual,
            milnor,
        }),
        frame_checks: Some(FrameChecks {
            phi_form_residual,
            ric12_residual,
            scalb_residual,
            orientation,
        }),
        scal_lambda_residual: None,
        input_milnor,
        compact_obstruction,
        theorem_family: family.into(),
        warnings,
    }
}

/// Coefficient kappa of the antisymmetric part phi - phi^T = kappa [zeta]_x;
/// b = |kappa| / 2.  Exact whenever the inputs are.
fn twist_coefficient<S: Scalar>(analysis: &FieldAnalysis<S>) -> S {
    let phi = &analysis.shape.phi;
    let z = analysis.field.components();
    let zx = m3(|i, l| sum3(|k| S::from_int(epsilon(i, k, l)) * z[k].clone()));
    let anti = m3(|i, j| phi[i][j].clone() - phi[j][i].clone());
    frob(&anti, &zx) / S::from_int(4) // |[zeta]_x|^2 = 2, and kappa = <A, Zx>/2
}

/// Result of dividing the metric by b^2 (frame-side: constants divided by b).
#[derive(Clone, Debug)]
pub struct RescaledModel<S> {
    pub model: FrameModel<S>,
    pub field: UnitField<S>,
    pub b: S,
    /// Sasakian defect of the rescaled pair; zero for the Killing case.
    pub sasakian_residual: S,
}

pub fn conformal_rescale<S: Scalar>(
    model: &FrameModel<S>,
    zeta: &UnitField<S>,
    b: &S,
    tol: &Tol,
) -> Result<RescaledModel<S>, GeomError> {
    let rescaled = rescale_constants(model, b)?;
    let analysis = analyze(&rescaled, zeta.clone(), Orientation::Positive, tol);
    let sas = sasakian_residual(&rescaled, zeta, &analysis.shape);
    Ok(RescaledModel { model: rescaled, field: zeta.clone(), b: b.clone(), sasakian_residual: sas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::analyze;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn qr(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn classify_unimodular(a: i64, b: i64, g: i64) -> ClassificationResult<Rational> {
        let model = FrameModel::unimodular(q(a), q(b), q(g));
        let analysis = analyze(&model, UnitField::axis(2), Orientation::Positive, &Tol::default());
        classify(&model, &analysis, &Tol::default())
    }

    #[test]
    fn milnor_types_of_reference_models() {
        let tol = Tol::default();
        let t = |a: i64, b: i64, g: i64| {
            milnor_type(&StructureConstants::unimodular(q(a), q(b), q(g)), &tol)
        };
        assert_eq!(t(2, -2, 2), MilnorType::Su2);
        assert_eq!(t(1, 2, 3), MilnorType::Sl2R);
        assert_eq!(t(2, -2, 0), MilnorType::E2);
        assert_eq!(t(2, 2, 0), MilnorType::Sol);
        assert_eq!(t(1, 0, 0), MilnorType::Nil);
        assert_eq!(t(0, 0, 0), MilnorType::Abelian);
        // non-diagonal constants are out of scope for the signature test
        let mut sc = StructureConstants::<Rational>::zero();
        sc.set_bracket(0, 2, 0, q(1));
        assert_eq!(milnor_type(&sc, &tol), MilnorType::NotLie);
    }

    #[test]
    fn milnor_type_is_invariant_under_global_flip_and_permutation() {
        let tol = Tol::default();
        let base = milnor_type(&StructureConstants::unimodular(q(1), q(2), q(3)), &tol);
        let flipped = milnor_type(&StructureConstants::unimodular(q(-1), q(-2), q(-3)), &tol);
        assert_eq!(base, flipped);
    }

    #[test]
    fn killing_form_signature_matches_milnor_type() {
        use crate::frame::killing_form;
        let tol = Tol::default();
        for (a, b, g) in [(2i64, -2i64, 2i64), (1, 2, 3), (3, -1, 2), (1, -2, -3)] {
            let sc = StructureConstants::unimodular(q(a), q(b), q(g));
            let ty = milnor_type(&sc, &tol);
            let bform = killing_form(&sc);
            let diag: Vec<Rational> = (0..3).map(|i| bform[i][i].clone()).collect();
            let all_neg = diag.iter().all(|x| *x < q(0));
            let mixed = diag.iter().any(|x| *x > q(0)) && diag.iter().any(|x| *x < q(0));
            match ty {
                MilnorType::Su2 => assert!(all_neg, "su2 must have definite Killing form"),
                MilnorType::Sl2R => assert!(mixed, "sl2r must have indefinite Killing form"),
                _ => {}
            }
        }
    }

    #[test]
    fn reference_classification_emits_expected_normal_form() {
        let r = classify_unimodular(1, 2, 3);
        assert_eq!(r.case, ClassificationCase::NonKillingBNonzero);
        assert_eq!(r.lambda, q(-12));
        assert_eq!(r.norm2_phi, q(13));
        assert_eq!(r.lambda1, Some(q(5)));
        assert_eq!(r.b, Some(qr(1, 2)));
        let e = r.emitted.expect("normal form present");
        assert_eq!(e.brackets, [q(2), q(3), q(-1)]);
        assert_eq!(e.roundtrip_residual, q(0));
        assert_eq!(e.expected_ricci, [q(-12), q(0), q(0)]);
        assert_eq!(e.milnor, MilnorType::Sl2R);
        let f = r.frame_checks.expect("frame checks present");
        assert_eq!(f.phi_form_residual, q(0));
        assert_eq!(f.ric12_residual, q(0));
        assert_eq!(f.scalb_residual, q(0));
        assert!(!r.compact_obstruction);
        assert_eq!(r.input_milnor, MilnorType::Sl2R);
    }

    #[test]
    fn second_reference_classification() {
        let r = classify_unimodular(1, 2, 4);
        assert_eq!(r.case, ClassificationCase::NonKillingBNonzero);
        assert_eq!(r.lambda, qr(-35, 2));
        assert_eq!(r.norm2_phi, qr(37, 2));
        assert_eq!(r.scal, qr(-33, 2));
        assert_eq!(r.lambda1, Some(q(6)));
        assert_eq!(r.b, Some(qr(1, 2)));
        let e = r.emitted.unwrap();
        assert_eq!(e.brackets, [q(2), q(4), q(-1)]);
        assert_eq!(e.expected_ricci, [qr(-35, 2), qr(7, 2), qr(-5, 2)]);
        assert_eq!(e.roundtrip_residual, q(0));
        let f = r.frame_checks.unwrap();
        assert_eq!(f.phi_form_residual, q(0));
        assert_eq!(f.ric12_residual, q(0));
        assert_eq!(f.scalb_residual, q(0));
    }

    #[test]
    fn hopf_field_classifies_as_killing_sasakian() {
        let r = classify_unimodular(2, -2, 2);
        assert_eq!(r.case, ClassificationCase::KillingSasakianRescale);
        assert_eq!(r.lambda, q(2));
        assert_eq!(r.b, Some(q(1)));
        assert_eq!(r.lambda1, Some(q(0)));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn rescaled_killing_model_is_sasakian() {
        let model = FrameModel::unimodular(q(6), q(-6), q(6));
        let tol = Tol::default();
        let analysis = analyze(&model, UnitField::axis(2), Orientation::Positive, &tol);
        let r = classify(&model, &analysis, &tol);
        assert_eq!(r.case, ClassificationCase::KillingSasakianRescale);
        assert_eq!(r.b, Some(q(3)));
        let rescaled = conformal_rescale(&model, &analysis.field, &q(3), &tol).unwrap();
        assert_eq!(rescaled.model.constants.c[0][1][2], q(2));
        assert_eq!(rescaled.sasakian_residual, q(0));
    }

    #[test]
    fn generic_killing_models_rescale_to_sasakian() {
        // beta + gamma = 0 gives a Killing axis; any such model rescales to a
        // Sasakian structure with b = |alpha| / 2
        let tol = Tol::default();
        for (a, b) in [(4i64, 7i64), (-6, 1), (2, -9)] {
            let model = FrameModel::unimodular(q(a), q(b), q(-b));
            let analysis = analyze(&model, UnitField::axis(2), Orientation::Positive, &tol);
            let r = classify(&model, &analysis, &tol);
            assert_eq!(r.case, ClassificationCase::KillingSasakianRescale);
            let expect_b = qr(a.abs(), 2);
            assert_eq!(r.b, Some(expect_b.clone()));
            let rescaled = conformal_rescale(&model, &analysis.field, &expect_b, &tol).unwrap();
            assert_eq!(rescaled.sasakian_residual, q(0), "model ({a}, {b}, {})", -b);
        }
    }

    #[test]
    fn flat_model_classifies_as_parallel() {
        let r = classify_unimodular(0, 0, 0);
        assert_eq!(r.case, ClassificationCase::Parallel);
        assert_eq!(r.lambda, q(0));
        assert_eq!(r.b, Some(q(0)));
    }

    #[test]
    fn flat_torus_field_uses_negative_twist_form() {
        let r = classify_unimodular(2, -2, 0);
        assert_eq!(r.case, ClassificationCase::NonKillingBNonzero);
        assert_eq!(r.lambda, q(0));
        assert_eq!(r.lambda1, Some(q(2)));
        assert_eq!(r.b, Some(q(-1)));
        let e = r.emitted.unwrap();
        assert_eq!(e.brackets, [q(2), q(0), q(2)]);
        assert_eq!(e.milnor, MilnorType::E2);
        assert_eq!(e.roundtrip_residual, q(0));
        let f = r.frame_checks.unwrap();
        assert_eq!(f.phi_form_residual, q(0));
        assert_eq!(f.scalb_residual, q(0));
    }

    #[test]
    fn untwisted_exact_family_confirms_scal_equals_lambda() {
        // (0, beta, gamma): b = 0, lambda1 = |beta + gamma|
        let r = classify_unimodular(0, 2, 3);
        assert_eq!(r.case, ClassificationCase::NonKillingBZero);
        assert_eq!(r.lambda1, Some(q(5)));
        assert_eq!(r.b, Some(q(0)));
        assert_eq!(r.scal_lambda_residual, Some(q(0)));
        assert_eq!(r.lambda, qr(-25, 2));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn hyperbolic_space_field_fails_divergence_hypothesis() {
        let mut sc = StructureConstants::<Rational>::zero();
        sc.set_bracket(0, 2, 0, q(1));
        sc.set_bracket(1, 2, 1, q(1));
        let model = FrameModel::new(sc);
        let tol = Tol::default();
        let analysis = analyze(&model, UnitField::axis(2), Orientation::Positive, &tol);
        let r = classify(&model, &analysis, &tol);
        assert_eq!(
            r.case,
            ClassificationCase::HypothesisFailed(HypothesisFailure::NotDivergenceFree)
        );
        assert!(r.compact_obstruction);
    }

    #[test]
    fn twist_sign_flip_relabels_the_normal_form()  {
        // replacing b by -b swaps the two nonaxial brackets and negates the
        // third: a basis relabel, so the Milnor type is unchanged
        let (scal, lambda, lambda1, b) = (q(-12), q(-12), q(5), qr(1, 2));
        let plus = normal_form_brackets(&scal, &lambda, &lambda1, &b);
        let minus = normal_form_brackets(&scal, &lambda, &lambda1, &-b.clone());
        assert_eq!(minus[0], plus[1]);
        assert_eq!(minus[1], plus[0]);
        assert_eq!(minus[2], -plus[2].clone());
        let tol = Tol::default();
        let ty_plus = milnor_type(
            &StructureConstants::unimodular(plus[0].clone(), plus[1].clone(), plus[2].clone()),
            &tol,
        );
        let ty_minus = milnor_type(
            &StructureConstants::unimodular(minus[0].clone(), minus[1].clone(), minus[2].clone()),
            &tol,
        );
        assert_eq!(ty_plus, ty_minus);
    }

    #[test]
    fn classification_is_idempotent_on_the_emitted_model() {
        let r = classify_unimodular(1, 2, 3);
        let e = r.emitted.unwrap();
        let emitted = FrameModel::unimodular(
            e.brackets[0].clone(),
            e.brackets[1].clone(),
            e.brackets[2].clone(),
        );
        let tol = Tol::default();
        let analysis = analyze(&emitted, UnitField::axis(0), Orientation::Positive, &tol);
        let r2 = classify(&emitted, &analysis, &tol);
        assert_eq!(r2.case, ClassificationCase::NonKillingBNonzero);
        assert_eq!(r2.lambda, r.lambda);
        assert_eq!(r2.norm2_phi, r.norm2_phi);
        assert_eq!(r2.lambda1, r.lambda1);
        let e2 = r2.emitted.unwrap();
        assert_eq!(e2.brackets, e.brackets);
        assert_eq!(e2.roundtrip_residual, q(0));
    }

    #[test]
    fn float_kernel_agrees_with_exact_kernel() {
        let tol = Tol::default();
        let exact = classify_unimodular(1, 2, 3);
        let model = FrameModel::unimodular(1.0f64, 2.0, 3.0);
        let analysis = analyze(&model, UnitField::axis(2), Orientation::Positive, &tol);
        let r = classify(&model, &analysis, &tol);
        assert_eq!(r.case, exact.case);
        assert!((r.lambda - exact.lambda.to_f64()).abs() < 1e-12);
        assert!((r.b.unwrap() - exact.b.unwrap().to_f64()).abs() < 1e-12);
        let ef = r.emitted.unwrap();
        let ee = exact.emitted.unwrap();
        for k in 0..3 {
            assert!((ef.brackets[k] - ee.brackets[k].to_f64()).abs() < 1e-12);
        }
        assert!(ef.roundtrip_residual < 1e-12);
    }
}

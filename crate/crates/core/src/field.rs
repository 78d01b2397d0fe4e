//! Unit fields on a frame model: shape operator, horizontal rotation,
//! pointwise invariants, and the residual suites.
//!
//! For a unit field zeta with constant frame components the basic object is
//!   phi(X) = -nabla_X zeta,     phi[i][j] = <phi(e_j), e_i>,
//! a frame matrix whose rows annihilate zeta (|zeta| = 1 forces the image of
//! phi into the horizontal plane H = zeta^perp).  Everything else is built
//! from phi, the curvature of the model, and the rotation J = sigma zeta x -.
//!
//! Residuals come in two kinds.  Diagnostics (harmonicity, Killing defect,
//! contact defect, ...) measure properties the field may or may not have and
//! are never asserted.  Identities are theorems under stated hypotheses; each
//! [`ResidualEntry`] carries an `asserted` flag that is true exactly when its
//! hypotheses hold for the given field, and an asserted residual must vanish
//! (literally in the exact kernel, within tolerance in the float kernel).

use crate::error::GeomError;
use crate::frame::FrameModel;
use crate::linalg::{
    cross, dot, epsilon, frob, m3, mat_mul, mat_vec, max_abs_m3, max_abs_v3, max_scalar, outer,
    scale_v3, sub_v3, sum3, sum33, t3, trace, transpose, v3, M3, V3,
};
use crate::scalar::{Scalar, Tol};
use crate::tensor::Tensor;

/// Acceptable drift of |v|^2 from 1 for float-kernel unit fields.
const UNIT_NORM_TOL2: f64 = 1e-12;

/// A unit vector field with constant components in the model frame.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitField<S> {
    zeta: V3<S>,
}

impl<S: Scalar> UnitField<S> {
    /// Requires |v|^2 = 1: literally in the exact kernel, within
    /// `UNIT_NORM_TOL2` for floats.
    pub fn new(zeta: V3<S>) -> Result<Self, GeomError> {
        let n2 = dot(&zeta, &zeta);
        let ok = if S::EXACT {
            n2 == S::one()
        } else {
            (n2.to_f64() - 1.0).abs() <= UNIT_NORM_TOL2
        };
        if ok {
            Ok(UnitField { zeta })
        } else {
            Err(GeomError::NotUnitLength { norm2: n2.to_f64() })
        }
    }

    pub fn axis(k: usize) -> Self {
        UnitField { zeta: v3(|i| if i == k { S::one() } else { S::zero() }) }
    }

    pub fn flipped(&self) -> Self {
        UnitField { zeta: v3(|i| -self.zeta[i].clone()) }
    }

    pub fn components(&self) -> &V3<S> {
        &self.zeta
    }

    pub fn to_f64(&self) -> UnitField<f64> {
        UnitField { zeta: v3(|i| self.zeta[i].to_f64()) }
    }
}

/// Normalize a float vector into a unit field.
pub fn normalized(v: [f64; 3]) -> Result<UnitField<f64>, GeomError> {
    let n = dot(&v, &v).sqrt();
    if n < 1e-14 {
        return Err(GeomError::ZeroField);
    }
    UnitField::new(v3(|i| v[i] / n))
}

/// Orientation of the horizontal rotation J.  `Positive` means
/// J X = zeta x X (so J e_1 = e_2 when zeta = e_3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign<S: Scalar>(self) -> S {
        match self {
            Orientation::Positive => S::one(),
            Orientation::Negative => -S::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// The rotation J = sigma zeta x - on the horizontal plane, as a frame
/// matrix.  J^2 = -Id + zeta zeta^T holds by construction.
#[derive(Clone, Debug)]
pub struct HorizontalStructure<S> {
    pub j: M3<S>,
    pub orientation: Orientation,
}

pub fn rotation_operator<S: Scalar>(
    zeta: &UnitField<S>,
    orientation: Orientation,
) -> HorizontalStructure<S> {
    let z = zeta.components();
    let sigma: S = orientation.sign();
    let j = m3(|i, l| {
        sigma.clone() * sum3(|k| S::from_int(epsilon(i, k, l)) * z[k].clone())
    });
    HorizontalStructure { j, orientation }
}

/// An orthogonal basis (u1, u2) of the horizontal plane with
/// |u1|^2 = |u2|^2 = norm2 and u2 = zeta x u1.  Deliberately not normalized:
/// norm2 is rational whenever zeta is, so bilinear quantities evaluated on
/// (u1, u2) stay exact after dividing by norm2.  u1 is the projection of the
/// axis least aligned with zeta (ties to the smallest index), which keeps
/// norm2 >= 2/3 away from degeneracy.
#[derive(Clone, Debug)]
pub struct AdaptedFrame<S> {
    pub u1: V3<S>,
    pub u2: V3<S>,
    pub norm2: S,
}

impl<S: Scalar> AdaptedFrame<S> {
    pub fn new(zeta: &UnitField<S>) -> Self {
        let z = zeta.components();
        let mut k_star = 0;
        for k in 1..3 {
            if z[k].abs() < z[k_star].abs() {
                k_star = k;
            }
        }
        let u1 = v3(|i| {
            let e = if i == k_star { S::one() } else { S::zero() };
            e - z[k_star].clone() * z[i].clone()
        });
        let u2 = cross(z, &u1);
        let norm2 = S::one() - z[k_star].clone() * z[k_star].clone();
        AdaptedFrame { u1, u2, norm2 }
    }
}

/// Shape data of the field: phi, its trace, the horizontal 2x2 block in the
/// adapted frame, and the totally geodesic flag (nabla_zeta zeta = 0).
#[derive(Clone, Debug)]
pub struct ShapeOperator<S> {
    pub phi: M3<S>,
    pub divergence: S,
    pub horizontal: [[S; 2]; 2],
    pub geodesic_defect: S,
    pub totally_geodesic: bool,
}

pub fn shape_operator<S: Scalar>(
    model: &FrameModel<S>,
    zeta: &UnitField<S>,
    frame: &AdaptedFrame<S>,
    tol: &Tol,
) -> ShapeOperator<S> {
    let z = zeta.components();
    let g = &model.connection.gamma;
    // phi[i][j] = -<nabla_{e_j} zeta, e_i> = -sum_k zeta_k g[j][k][i]
    let phi = m3(|i, j| -sum3(|k| z[k].clone() * g[j][k][i].clone()));
    let divergence = trace(&phi);
    let u = [&frame.u1, &frame.u2];
    let horizontal = std::array::from_fn(|a| {
        std::array::from_fn(|b| dot(&mat_vec(&phi, u[b]), u[a]) / frame.norm2.clone())
    });
    // nabla_zeta zeta = -phi(zeta)
    let geodesic_defect = max_abs_v3(&mat_vec(&phi, z));
    let totally_geodesic = geodesic_defect.is_negligible(tol);
    ShapeOperator { phi, divergence, horizontal, geodesic_defect, totally_geodesic }
}

/// Pointwise invariants of the field.
#[derive(Clone, Debug)]
pub struct FieldInvariants<S> {
    /// trace(phi) = divergence of -zeta's flow... the mean curvature sum of
    /// the horizontal plane.
    pub trace_phi: S,
    /// |phi|_F^2 = |nabla zeta|^2.
    pub norm2_phi: S,
    /// Determinant of the horizontal block; equals
    /// ((trace phi)^2 - trace(phi^2))/2 because zeta spans the left kernel.
    pub det_horizontal: S,
    /// S = phi + phi^T.
    pub sym: M3<S>,
    /// Largest eigenvalue of S restricted to the horizontal plane.  `None`
    /// when the value is irrational over the exact kernel.
    pub lambda1: Option<S>,
    pub trace_phi2: S,
    /// trace(phi J); orientation-sensitive, flips with J.
    pub trace_phi_j: S,
    /// Pointwise energy density (3 + |phi|^2)/2 of the section.
    pub energy_density: S,
}

pub fn field_invariants<S: Scalar>(
    shape: &ShapeOperator<S>,
    h: &HorizontalStructure<S>,
    frame: &AdaptedFrame<S>,
) -> FieldInvariants<S> {
    let phi = &shape.phi;
    let trace_phi = shape.divergence.clone();
    let norm2_phi = frob(phi, phi);
    let hb = &shape.horizontal;
    let det_horizontal =
        hb[0][0].clone() * hb[1][1].clone() - hb[0][1].clone() * hb[1][0].clone();
    let sym = m3(|i, j| phi[i][j].clone() + phi[j][i].clone());
    let trace_phi2 = trace(&mat_mul(phi, phi));
    let trace_phi_j = trace(&mat_mul(phi, &h.j));
    let energy_density = (S::from_int(3) + norm2_phi.clone()).half();
    // S restricted to H in the adapted frame: [[p, q], [q, r]];
    // eigenvalues (p+r)/2 +- sqrt(((p-r)/2)^2 + q^2).
    let u = [&frame.u1, &frame.u2];
    let s_h: [[S; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|b| dot(&mat_vec(&sym, u[b]), u[a]) / frame.norm2.clone())
    });
    let mean = (s_h[0][0].clone() + s_h[1][1].clone()).half();
    let half_gap = (s_h[0][0].clone() - s_h[1][1].clone()).half();
    let disc = half_gap.clone() * half_gap + s_h[0][1].clone() * s_h[0][1].clone();
    let lambda1 = disc.sqrt_exact().map(|root| mean + root);
    FieldInvariants {
        trace_phi,
        norm2_phi,
        det_horizontal,
        sym,
        lambda1,
        trace_phi2,
        trace_phi_j,
        energy_density,
    }
}

/// Jacobi operator L(X) = R(X, zeta) zeta as a frame matrix,
/// L[i][j] = <L(e_j), e_i>.
pub fn jacobi_operator<S: Scalar>(model: &FrameModel<S>, zeta: &UnitField<S>) -> M3<S> {
    let z = zeta.components();
    let r = &model.curvature.riemann;
    m3(|i, j| {
        sum33(|k, l| z[k].clone() * z[l].clone() * r[j][k][l][i].clone())
    })
}

/// Harmonicity diagnostics.
#[derive(Clone, Debug)]
pub struct HarmonicResiduals<S> {
    /// nabla* nabla zeta, frame components.
    pub rough_laplacian: V3<S>,
    /// max |nabla* nabla zeta - |nabla zeta|^2 zeta|: the unit-constrained
    /// harmonicity defect (the left side is automatically the horizontal
    /// projection because <nabla* nabla zeta, zeta> = |nabla zeta|^2 for
    /// frame-constant unit fields).
    pub unit_harmonic: S,
    /// max_d |sum_{i,m,l} phi[m][i] zeta_l R[m][l][i][d]|: the extra
    /// curvature term whose vanishing upgrades a harmonic field to a
    /// harmonic map into the unit tangent bundle.
    pub harmonic_map: S,
}

pub fn harmonic_residuals<S: Scalar>(
    model: &FrameModel<S>,
    zeta: &UnitField<S>,
) -> HarmonicResiduals<S> {
    let z = zeta.components();
    let lap = Tensor::from_vector(z)
        .rough_laplacian(&model.connection)
        .expect("rank 1 is always differentiable twice");
    let rough_laplacian = v3(|i| lap.get(&[i]).clone());
    let phi = m3(|i, j| -sum3(|k| z[k].clone() * model.connection.gamma[j][k][i].clone()));
    let norm2_phi = frob(&phi, &phi);
    let defect = sub_v3(&rough_laplacian, &scale_v3(&norm2_phi, z));
    let unit_harmonic = max_abs_v3(&defect);
    let r = &model.curvature.riemann;
    let mut harmonic_map = S::zero();
    for d in 0..3 {
        let mut acc = S::zero();
        for i in 0..3 {
            for m in 0..3 {
                for l in 0..3 {
                    acc += phi[m][i].clone() * z[l].clone() * r[m][l][i][d].clone();
                }
            }
        }
        harmonic_map = max_scalar(harmonic_map, acc.abs());
    }
    HarmonicResiduals { rough_laplacian, unit_harmonic, harmonic_map }
}

/// Killing-type diagnostics.
#[derive(Clone, Debug)]
pub struct KillingChecks<S> {
    /// max |phi[i][j] + phi[j][i]|: zero iff the field is Killing.
    pub killing_residual: S,
    /// max |(nabla^2 zeta)[l][k][i] - sum_m zeta_m R[l][m][k][i]|: the
    /// second-derivative identity satisfied by Killing fields.  Asserted
    /// only for Killing fields on models whose constants satisfy Jacobi.
    pub kostant_residual: S,
    /// |<Ric zeta, zeta> - |phi|^2|, meaningful for Killing fields with
    /// Ric zeta parallel to zeta; `None` when those hypotheses fail.
    pub aligned_gap: Option<S>,
}

pub fn killing_checks<S: Scalar>(
    model: &FrameModel<S>,
    zeta: &UnitField<S>,
    shape: &ShapeOperator<S>,
    tol: &Tol,
) -> KillingChecks<S> {
    let z = zeta.components();
    let phi = &shape.phi;
    let sym = m3(|i, j| phi[i][j].clone() + phi[j][i].clone());
    let killing_residual = max_abs_m3(&sym);
    let second = Tensor::from_vector(z)
        .covariant_derivative(&model.connection)
        .and_then(|t| t.covariant_derivative(&model.connection))
        .expect("rank 1 is always differentiable twice");
    let r = &model.curvature.riemann;
    let mut kostant_residual = S::zero();
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                let mut v = second.get(&[l, k, i]).clone();
                for m in 0..3 {
                    v -= z[m].clone() * r[l][m][k][i].clone();
                }
                kostant_residual = max_scalar(kostant_residual, v.abs());
            }
        }
    }
    let ric_z = model.ricci_vec(z);
    let lambda = dot(&ric_z, z);
    let aligned = max_abs_v3(&sub_v3(&ric_z, &scale_v3(&lambda, z))).is_negligible(tol);
    let aligned_gap = if killing_residual.is_negligible(tol) && aligned {
        Some((lambda - frob(phi, phi)).abs())
    } else {
        None
    };
    KillingChecks { killing_residual, kostant_residual, aligned_gap }
}

/// Defect of the Sasakian structure equations for (phi, zeta): both
/// phi^2 = -Id + zeta zeta^T and the covariant-derivative law
/// (nabla_a phi)(b) = <a,b> zeta - zeta_b e_a.  Zero for the rescaled
/// Killing models of either orientation.
pub fn sasakian_residual<S: Scalar>(
    model: &FrameModel<S>,
    zeta: &UnitField<S>,
    shape: &ShapeOperator<S>,
) -> S {
    let z = zeta.components();
    let phi = &shape.phi;
    let alg = max_abs_m3(&m3(|i, j| {
        let phi2 = sum3(|k| phi[i][k].clone() * phi[k][j].clone());
        let id = if i == j { S::one() } else { S::zero() };
        phi2 + id - z[i].clone() * z[j].clone()
    }));
    let d = Tensor::from_matrix(phi)
        .covariant_derivative(&model.connection)
        .expect("rank 2 is differentiable");
    let mut grad = S::zero();
    for a in 0..3 {
        for i in 0..3 {
            for b in 0..3 {
                let delta_ab = if a == b { S::one() } else { S::zero() };
                let delta_ai = if a == i { S::one() } else { S::zero() };
                let v = d.get(&[a, i, b]).clone() - delta_ab * z[i].clone()
                    + z[b].clone() * delta_ai;
                grad = max_scalar(grad, v.abs());
            }
        }
    }
    max_scalar(alg, grad)
}

/// Contact diagnostics for the dual 1-form of zeta, computed along two
/// independent routes: through the connection (trace(phi J)) and directly
/// from the structure constants (the volume component of eta wedge d eta).
/// `trace_phi_j = sigma * wedge_value` is itself an identity; `route_gap`
/// records the difference.
#[derive(Clone, Debug)]
pub struct ContactCheck<S> {
    pub trace_phi_j: S,
    pub wedge_value: S,
    pub route_gap: S,
    pub is_contact: bool,
}

pub fn contact_check<S: Scalar>(
    model: &FrameModel<S>,
    zeta: &UnitField<S>,
    shape: &ShapeOperator<S>,
    h: &HorizontalStructure<S>,
    tol: &Tol,
) -> ContactCheck<S> {
    let z = zeta.components();
    let trace_phi_j = trace(&mat_mul(&shape.phi, &h.j));
    // (eta ^ d eta)(e0, e1, e2) = -1/2 sum eps(i,j,k) z_k z_l c[i][j][l]
    let c = &model.constants.c;
    let mut wedge_value = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if epsilon(i, j, k) == 0 {
                    continue;
                }
                for l in 0..3 {
                    wedge_value += S::from_int(epsilon(i, j, k))
                        * z[k].clone()
                        * z[l].clone()
                        * c[i][j][l].clone();
                }
            }
        }
    }
    wedge_value = -wedge_value.half();
    let sigma: S = h.orientation.sign();
    let route_gap = (trace_phi_j.clone() - sigma * wedge_value.clone()).abs();
    let is_contact = !wedge_value.is_negligible(tol);
    ContactCheck { trace_phi_j, wedge_value, route_gap, is_contact }
}

/// Hypothesis flags under which identities are asserted.
#[derive(Clone, Copy, Debug)]
pub struct FieldFlags {
    pub harmonic: bool,
    pub totally_geodesic: bool,
    pub divergence_free: bool,
    pub killing: bool,
    /// Ric zeta parallel to zeta.
    pub ricci_aligned: bool,
    /// The model's constants satisfy the Jacobi identity, so curvature has
    /// the full symmetry package (pair symmetry, first Bianchi).
    pub jacobi_ok: bool,
}

/// One evaluated identity: a residual value, whether its hypotheses hold
/// (`asserted`), and the statement it measures.
#[derive(Clone, Debug)]
pub struct ResidualEntry<S> {
    pub name: &'static str,
    pub value: S,
    pub asserted: bool,
    pub statement: &'static str,
}

impl<S: Scalar> ResidualEntry<S> {
    pub fn holds(&self, tol: &Tol) -> bool {
        !self.asserted || self.value.is_negligible(tol)
    }
}

/// Evaluate the identity suite.  Each entry's `asserted` flag is the exact
/// hypothesis set of the corresponding statement; unasserted entries are
/// still evaluated and reported.
pub fn identity_suite<S: Scalar>(
    model: &FrameModel<S>,
    zeta: &UnitField<S>,
    shape: &ShapeOperator<S>,
    h: &HorizontalStructure<S>,
    flags: &FieldFlags,
    _tol: &Tol,
) -> Vec<ResidualEntry<S>> {
    let z = zeta.components();
    let phi = &shape.phi;
    let conn = &model.connection;
    let r = &model.curvature.riemann;
    let ric = &model.curvature.ricci;
    let scal = &model.curvature.scal;
    let l_op = jacobi_operator(model, zeta);
    let phi_t = transpose(phi);
    let phi2 = mat_mul(phi, phi);
    let norm2_phi = frob(phi, phi);
    let sym = m3(|i, j| phi[i][j].clone() + phi[j][i].clone());

    let d = Tensor::from_matrix(phi).covariant_derivative(conn).expect("rank 2");
    let dj = Tensor::from_matrix(&h.j).covariant_derivative(conn).expect("rank 2");
    let lap_phi = Tensor::from_matrix(phi).rough_laplacian(conn).expect("rank 2");
    let lap_j = Tensor::from_matrix(&h.j).rough_laplacian(conn).expect("rank 2");
    let dr = Tensor::from_rank4(r).covariant_derivative(conn).expect("rank 4");

    let dk = |k: usize, i: usize, j: usize| d.get(&[k, i, j]).clone();
    // nabla_zeta phi
    let dzeta_phi = m3(|i, j| sum3(|k| z[k].clone() * dk(k, i, j)));
    let jphi = mat_mul(&h.j, phi);

    let mut out = Vec::with_capacity(20);
    let mut push = |name: &'static str, value: S, asserted: bool, statement: &'static str| {
        out.push(ResidualEntry { name, value, asserted, statement });
    };

    // --- unconditional identities ---

    push(
        "codazzi",
        {
            let mut worst = S::zero();
            for a in 0..3 {
                for i in 0..3 {
                    for b in 0..3 {
                        let mut v = dk(a, i, b) - dk(b, i, a);
                        for l in 0..3 {
                            v += z[l].clone() * r[a][b][l][i].clone();
                        }
                        worst = max_scalar(worst, v.abs());
                    }
                }
            }
            worst
        },
        true,
        "(nabla_a phi)[i][b] - (nabla_b phi)[i][a] = -<R(e_a,e_b)zeta, e_i>",
    );

    push(
        "div_phi_transpose",
        {
            let ric_z = mat_vec(ric, z);
            max_abs_v3(&v3(|i| -sum3(|a| dk(a, a, i)) - ric_z[i].clone()))
        },
        true,
        "-sum_a (nabla_a phi)[a][i] = <Ric(zeta), e_i>",
    );

    push(
        "nabla_j",
        {
            let mut worst = S::zero();
            for a in 0..3 {
                for i in 0..3 {
                    for b in 0..3 {
                        let v = dj.get(&[a, i, b]).clone() + jphi[b][a].clone() * z[i].clone()
                            - z[b].clone() * jphi[i][a].clone();
                        worst = max_scalar(worst, v.abs());
                    }
                }
            }
            worst
        },
        true,
        "(nabla_a J)(e_b) = -<J phi(e_a), e_b> zeta + <e_b, zeta> J phi(e_a)",
    );

    push(
        "norm_identity",
        (frob(&sym, &sym) - (norm2_phi.clone() + trace(&phi2)) * S::from_int(2)).abs(),
        true,
        "|phi + phi^T|^2 = 2|phi|^2 + 2 trace(phi^2)",
    );

    // --- identities under Jacobi (full curvature symmetries) ---

    push(
        "codazzi_sym",
        {
            // symmetrized/antisymmetrized first-Bianchi consequence
            let ds = |a: usize, x: usize, y: usize| dk(a, x, y) + dk(a, y, x);
            let dst = |a: usize, x: usize, y: usize| dk(a, x, y) - dk(a, y, x);
            let mut worst = S::zero();
            for a in 0..3 {
                for zx in 0..3 {
                    for b in 0..3 {
                        let mut v = ds(a, zx, b) - ds(b, zx, a) - dst(zx, b, a);
                        for l in 0..3 {
                            v += z[l].clone() * r[a][b][l][zx].clone() * S::from_int(2);
                        }
                        worst = max_scalar(worst, v.abs());
                    }
                }
            }
            worst
        },
        flags.jacobi_ok,
        "(nabla S)[a][z][b] - (nabla S)[b][z][a] = (nabla A)[z][b][a] - 2<R(e_a,e_b)zeta, e_z>, S/A = phi +- phi^T",
    );

    // --- totally geodesic identities ---

    let tg = flags.totally_geodesic;

    push(
        "riccati",
        max_abs_m3(&m3(|i, j| {
            dzeta_phi[i][j].clone() - phi2[i][j].clone() - l_op[i][j].clone()
        })),
        tg,
        "nabla_zeta phi = phi^2 + R(., zeta)zeta",
    );

    push(
        "riccati_transpose",
        {
            let phi_t2 = mat_mul(&phi_t, &phi_t);
            max_abs_m3(&m3(|i, j| {
                dzeta_phi[j][i].clone() - phi_t2[i][j].clone() - l_op[i][j].clone()
            }))
        },
        tg,
        "nabla_zeta phi^T = (phi^T)^2 + R(., zeta)zeta",
    );

    push(
        "grad_phi_j",
        {
            let full = sum33(|i, j| {
                sum3(|k| dk(k, i, j) * dj.get(&[k, i, j]).clone())
            });
            (full - norm2_phi.clone() * frob(phi, &h.j)).abs()
        },
        tg,
        "<nabla phi, nabla J> = |phi|^2 <phi, J>",
    );

    // Leafwise flow derivatives of the basic scalars all vanish for
    // frame-constant data, so the algebraic sides of the leaf ODE system
    // must vanish too.
    push(
        "leaf_ode_1",
        (shape.divergence.clone() * trace(&mat_mul(phi, &h.j))).abs(),
        tg,
        "trace(phi) trace(phi J) = 0 along the leaf flow",
    );

    push(
        "leaf_ode_2",
        {
            let lambda = dot(&mat_vec(ric, z), z);
            (trace(&phi2) + lambda).abs()
        },
        tg,
        "trace(phi^2) + Ric(zeta, zeta) = 0 (trace of the Riccati identity)",
    );

    push(
        "leaf_ode_3",
        {
            let t1 = trace(&mat_mul(&phi2, &phi_t));
            (t1 + frob(phi, &l_op)).abs() * S::from_int(2)
        },
        tg,
        "2(trace(phi^2 phi^T) + <phi, R(., zeta)zeta>) = 0 along the leaf flow",
    );

    push(
        "leaf_ode_3_direct",
        frob(phi, &dzeta_phi).abs() * S::from_int(2),
        tg,
        "2<phi, nabla_zeta phi> = d/dt |phi|^2 = 0 along the leaf flow",
    );

    // --- harmonic identities ---

    let harm = flags.harmonic;

    push(
        "div_phi",
        max_abs_v3(&v3(|i| {
            sum3(|a| dk(a, i, a)) - norm2_phi.clone() * z[i].clone()
        })),
        harm,
        "sum_a (nabla_a phi)(e_a) = |phi|^2 zeta",
    );

    push(
        "laplacian_j",
        {
            let mut worst = S::zero();
            for i in 0..3 {
                for j in 0..3 {
                    let v = lap_j.get(&[i, j]).clone() - norm2_phi.clone() * h.j[i][j].clone();
                    worst = max_scalar(worst, v.abs());
                }
            }
            worst
        },
        harm,
        "nabla* nabla J = |phi|^2 J",
    );

    push(
        "laplacian_phi_full",
        {
            let phi_ric = mat_mul(phi, ric);
            let mut worst = S::zero();
            for dx in 0..3 {
                for x in 0..3 {
                    let w = sum33(|i, l| z[l].clone() * dr.get(&[i, x, i, l, dx]).clone());
                    let u = sum33(|i, m| phi[m][i].clone() * r[x][i][m][dx].clone());
                    let rhs = norm2_phi.clone() * phi[dx][x].clone()
                        - phi_ric[dx][x].clone()
                        - w
                        + u * S::from_int(2);
                    let v = lap_phi.get(&[dx, x]).clone() - rhs;
                    worst = max_scalar(worst, v.abs());
                }
            }
            worst
        },
        harm && flags.jacobi_ok,
        "nabla* nabla phi = |phi|^2 phi - phi Ric - W + 2U, W = contracted nabla R, U = phi-curvature pairing",
    );

    push(
        "laplacian_trace",
        {
            let t1 = norm2_phi.clone() * shape.divergence.clone();
            let t2 = trace(&mat_mul(&phi2, &phi_t)) * S::from_int(2);
            let t3v = frob(phi, ric);
            let t4 = frob(phi, &l_op) * S::from_int(2);
            (t1 - t2 + t3v - t4).abs()
        },
        harm && tg && flags.jacobi_ok,
        "|phi|^2 trace(phi) - 2 trace(phi^2 phi^T) + <phi, Ric> - 2<phi, R(., zeta)zeta> = 0",
    );

    push(
        "laplacian_phi_j",
        {
            let lap_phi_m = m3(|i, j| lap_phi.get(&[i, j]).clone());
            (frob(&lap_phi_m, &h.j) - norm2_phi.clone() * frob(phi, &h.j)).abs()
        },
        harm && tg && flags.ricci_aligned && flags.jacobi_ok,
        "<nabla* nabla phi, J> = |phi|^2 <phi, J>",
    );

    push(
        "laplacian_trace_aligned",
        {
            let lambda = dot(&mat_vec(ric, z), z);
            let hb = &shape.horizontal;
            let det_h = hb[0][0].clone() * hb[1][1].clone() - hb[0][1].clone() * hb[1][0].clone();
            (shape.divergence.clone()
                * (det_h * S::from_int(2) - norm2_phi.clone() + scal.clone()
                    - S::from_int(3) * lambda))
                .abs()
        },
        harm && tg && flags.ricci_aligned,
        "trace(phi) (2 det_H phi - |phi|^2 + Scal - 3 Ric(zeta,zeta)) = 0",
    );

    push(
        "trace_phi2",
        {
            let lambda = dot(&mat_vec(ric, z), z);
            (trace(&phi2) + lambda).abs()
        },
        flags.divergence_free && harm && tg && flags.ricci_aligned,
        "trace(phi^2) = -Ric(zeta, zeta) under the classification hypotheses",
    );

    push(
        "kostant",
        {
            let second = Tensor::from_vector(z)
                .covariant_derivative(conn)
                .and_then(|t| t.covariant_derivative(conn))
                .expect("rank 1");
            let mut worst = S::zero();
            for lx in 0..3 {
                for k in 0..3 {
                    for i in 0..3 {
                        let mut v = second.get(&[lx, k, i]).clone();
                        for m in 0..3 {
                            v -= z[m].clone() * r[lx][m][k][i].clone();
                        }
                        worst = max_scalar(worst, v.abs());
                    }
                }
            }
            worst
        },
        flags.killing && flags.jacobi_ok,
        "nabla^2 zeta = R(., zeta, ., .) for Killing fields",
    );

    out
}

/// Full analysis bundle for one field on one model.
#[derive(Clone, Debug)]
pub struct FieldAnalysis<S> {
    pub field: UnitField<S>,
    pub frame: AdaptedFrame<S>,
    pub rotation: HorizontalStructure<S>,
    pub shape: ShapeOperator<S>,
    pub invariants: FieldInvariants<S>,
    pub harmonic: HarmonicResiduals<S>,
    pub killing: KillingChecks<S>,
    pub sasakian_residual: S,
    pub contact: ContactCheck<S>,
    /// Ric(zeta, zeta).
    pub lambda: S,
    pub flags: FieldFlags,
    pub residuals: Vec<ResidualEntry<S>>,
}

impl<S: Scalar> FieldAnalysis<S> {
    /// True when every asserted residual vanishes under `tol`.
    pub fn identities_hold(&self, tol: &Tol) -> bool {
        self.residuals.iter().all(|e| e.holds(tol))
    }
}

pub fn analyze<S: Scalar>(
    model: &FrameModel<S>,
    zeta: UnitField<S>,
    orientation: Orientation,
    tol: &Tol,
) -> FieldAnalysis<S> {
    let frame = AdaptedFrame::new(&zeta);
    let shape = shape_operator(model, &zeta, &frame, tol);
    let rotation = rotation_operator(&zeta, orientation);
    let invariants = field_invariants(&shape, &rotation, &frame);
    let harmonic = harmonic_residuals(model, &zeta);
    let killing = killing_checks(model, &zeta, &shape, tol);
    let sas = sasakian_residual(model, &zeta, &shape);
    let contact = contact_check(model, &zeta, &shape, &rotation, tol);
    let z = zeta.components();
    let ric_z = model.ricci_vec(z);
    let lambda = dot(&ric_z, z);
    let aligned =
        max_abs_v3(&sub_v3(&ric_z, &scale_v3(&lambda, z))).is_negligible(tol);
    let flags = FieldFlags {
        harmonic: harmonic.unit_harmonic.is_negligible(tol),
        totally_geodesic: shape.totally_geodesic,
        divergence_free: shape.divergence.is_negligible(tol),
        killing: killing.killing_residual.is_negligible(tol),
        ricci_aligned: aligned,
        jacobi_ok: model.constants.jacobi_residual().is_negligible(tol),
    };
    let residuals = identity_suite(model, &zeta, &shape, &rotation, &flags, tol);
    FieldAnalysis {
        field: zeta,
        frame,
        rotation,
        shape,
        invariants,
        harmonic,
        killing,
        sasakian_residual: sas,
        contact,
        lambda,
        flags,
        residuals,
    }
}

/// Ric(zeta, zeta).
pub fn ricci_vertical<S: Scalar>(model: &FrameModel<S>, zeta: &UnitField<S>) -> S {
    let z = zeta.components();
    dot(&model.ricci_vec(z), z)
}

/// Projection matrix onto the horizontal plane of zeta.
pub fn horizontal_projection<S: Scalar>(zeta: &UnitField<S>) -> M3<S> {
    let z = zeta.components();
    let zz = outer(z, z);
    m3(|i, j| {
        let id = if i == j { S::one() } else { S::zero() };
        id - zz[i][j].clone()
    })
}

/// Structure constants scaled by 1/b together with the same field: the
/// homothety g -> b^2 g expressed frame-side.  Bracket coefficients of the
/// rescaled orthonormal frame are c/b, and unit fields keep their
/// components.
pub fn rescale_constants<S: Scalar>(
    model: &FrameModel<S>,
    b: &S,
) -> Result<FrameModel<S>, GeomError> {
    if b.is_negligible(&Tol::default()) && S::EXACT {
        return Err(GeomError::InvalidParameter("rescale factor must be nonzero".into()));
    }
    if !S::EXACT && b.to_f64() == 0.0 {
        return Err(GeomError::InvalidParameter("rescale factor must be nonzero".into()));
    }
    let c = t3(|i, j, k| model.constants.c[i][j][k].clone() / b.clone());
    Ok(FrameModel::new(crate::frame::StructureConstants { c }))
}

//! Frame-level geometry of a homogeneous 3-space.
//!
//! A model is an orthonormal frame (e_0, e_1, e_2) whose brackets have
//! constant coefficients: [e_i, e_j] = sum_k c[i][j][k] e_k.  The metric is
//! the one making the frame orthonormal.  From c the Koszul formula gives the
//! connection in closed form, and curvature follows by index gymnastics; no
//! differentiation ever happens at this level.
//!
//! Index conventions used throughout the crate:
//!   gamma[i][j][k] = <nabla_{e_i} e_j, e_k>
//!   riemann[i][j][k][l] = <R(e_i, e_j) e_k, e_l>,
//!       R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//!   ricci[a][b] = sum_i riemann[i][a][b][i]
//!
//! With these signs the bi-invariant metric on the (2,-2,2) unimodular model
//! is the round sphere of curvature +1 (ricci = +2 Id).

use crate::error::GeomError;
use crate::linalg::{m3, mat_vec, sum3, t3, t4, trace, v3, M3, T3, T4, V3};
use crate::scalar::Scalar;

/// Bracket coefficients of a metric Lie/frame model, antisymmetric in the
/// first two indices.  Antisymmetry is the only structural requirement;
/// the Jacobi identity is a measured quantity, not a precondition.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<S> {
    pub c: T3<S>,
}

impl<S: Scalar> StructureConstants<S> {
    pub fn new(c: T3<S>) -> Result<Self, GeomError> {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    if c[i][j][k].clone() + c[j][i][k].clone() != S::zero() {
                        return Err(GeomError::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(StructureConstants { c })
    }

    pub fn zero() -> Self {
        StructureConstants { c: t3(|_, _, _| S::zero()) }
    }

    /// Diagonal unimodular model: [e_0,e_1] = alpha e_2, [e_0,e_2] = beta e_1,
    /// [e_1,e_2] = gamma e_0.  Every such triple satisfies Jacobi.
    pub fn unimodular(alpha: S, beta: S, gamma: S) -> Self {
        let mut sc = Self::zero();
        sc.set_bracket(0, 1, 2, alpha);
        sc.set_bracket(0, 2, 1, beta);
        sc.set_bracket(1, 2, 0, gamma);
        sc
    }

    /// Set [e_i, e_j] component along e_k, keeping antisymmetry.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, value: S) {
        self.c[i][j][k] = value.clone();
        self.c[j][i][k] = -value;
    }

    /// [u, v] for constant-coefficient fields.
    pub fn bracket(&self, u: &V3<S>, v: &V3<S>) -> V3<S> {
        v3(|k| {
            let mut acc = S::zero();
            for i in 0..3 {
                for j in 0..3 {
                    acc += u[i].clone() * v[j].clone() * self.c[i][j][k].clone();
                }
            }
            acc
        })
    }

    /// Max-norm of the Jacobiator over basis triples.  Zero iff the constants
    /// define a Lie algebra.
    pub fn jacobi_residual(&self) -> S {
        let mut worst = S::zero();
        let basis = |i: usize| v3(|k| if k == i { S::one() } else { S::zero() });
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let (ei, ej, ek) = (basis(i), basis(j), basis(k));
                    let cyc1 = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let cyc2 = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let cyc3 = self.bracket(&self.bracket(&ek, &ei), &ej);
                    for m in 0..3 {
                        let r = (cyc1[m].clone() + cyc2[m].clone() + cyc3[m].clone()).abs();
                        if r > worst {
                            worst = r;
                        }
                    }
                }
            }
        }
        worst
    }

    /// Conjugate by an orthogonal matrix q: the model seen in the frame
    /// f_a = sum_i q[i][a] e_i.  Orthogonality of q is the caller's business.
    pub fn rotate(&self, q: &M3<S>) -> Self {
        // c'[a][b][d] = sum_{i,j,k} q[i][a] q[j][b] q[k][d] c[i][j][k]
        let c = t3(|a, b, d| {
            let mut acc = S::zero();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        acc += q[i][a].clone()
                            * q[j][b].clone()
                            * q[k][d].clone()
                            * self.c[i][j][k].clone();
                    }
                }
            }
            acc
        });
        StructureConstants { c }
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> StructureConstants<T> {
        StructureConstants { c: t3(|i, j, k| f(&self.c[i][j][k])) }
    }
}

/// Levi-Civita connection coefficients gamma[i][j][k] = <nabla_{e_i} e_j, e_k>.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable<S> {
    pub gamma: T3<S>,
}

impl<S: Scalar> ConnectionTable<S> {
    /// nabla_{e_x} v for a constant-coefficient field v.
    pub fn derivative(&self, x: usize, v: &V3<S>) -> V3<S> {
        v3(|k| sum3(|j| self.gamma[x][j][k].clone() * v[j].clone()))
    }

    /// nabla_u v for constant-coefficient fields.
    pub fn derivative_along(&self, u: &V3<S>, v: &V3<S>) -> V3<S> {
        v3(|k| {
            let mut acc = S::zero();
            for x in 0..3 {
                for j in 0..3 {
                    acc += u[x].clone() * self.gamma[x][j][k].clone() * v[j].clone();
                }
            }
            acc
        })
    }
}

/// Koszul formula for a frame with constant bracket coefficients and
/// orthonormal metric:
///   gamma[i][j][k] = (c[i][j][k] - c[j][k][i] + c[k][i][j]) / 2.
pub fn levi_civita<S: Scalar>(sc: &StructureConstants<S>) -> ConnectionTable<S> {
    let c = &sc.c;
    let gamma = t3(|i, j, k| {
        (c[i][j][k].clone() - c[j][k][i].clone() + c[k][i][j].clone()).half()
    });
    ConnectionTable { gamma }
}

/// Riemann tensor, Ricci tensor and scalar curvature of a frame model.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureBundle<S> {
    pub riemann: T4<S>,
    pub ricci: M3<S>,
    pub scal: S,
}

pub fn curvature<S: Scalar>(
    conn: &ConnectionTable<S>,
    sc: &StructureConstants<S>,
) -> CurvatureBundle<S> {
    let g = &conn.gamma;
    let c = &sc.c;
    // Constant coefficients kill the derivative terms of the curvature
    // operator; what survives is composition of connection maps plus the
    // bracket correction.
    let riemann = t4(|i, j, k, l| {
        sum3(|m| {
            g[j][k][m].clone() * g[i][m][l].clone()
                - g[i][k][m].clone() * g[j][m][l].clone()
                - c[i][j][m].clone() * g[m][k][l].clone()
        })
    });
    let ricci = m3(|a, b| sum3(|i| riemann[i][a][b][i].clone()));
    let scal = trace(&ricci);
    CurvatureBundle { riemann, ricci, scal }
}

/// Killing form B[i][j] = sum_{k,m} c[i][m][k] c[j][k][m] (trace of ad e_i
/// composed with ad e_j).  Definite/indefinite type separates the compact
/// and noncompact simple cases among diagonal models.
pub fn killing_form<S: Scalar>(sc: &StructureConstants<S>) -> M3<S> {
    let c = &sc.c;
    m3(|i, j| {
        let mut acc = S::zero();
        for k in 0..3 {
            for m in 0..3 {
                acc += c[i][m][k].clone() * c[j][k][m].clone();
            }
        }
        acc
    })
}

/// A frame model with its derived connection and curvature, computed once at
/// construction.
#[derive(Clone, Debug)]
pub struct FrameModel<S> {
    pub constants: StructureConstants<S>,
    pub connection: ConnectionTable<S>,
    pub curvature: CurvatureBundle<S>,
}

impl<S: Scalar> FrameModel<S> {
    pub fn new(constants: StructureConstants<S>) -> Self {
        let connection = levi_civita(&constants);
        let curvature = curvature(&connection, &constants);
        FrameModel { constants, connection, curvature }
    }

    pub fn unimodular(alpha: S, beta: S, gamma: S) -> Self {
        Self::new(StructureConstants::unimodular(alpha, beta, gamma))
    }

    pub fn from_table(c: T3<S>) -> Result<Self, GeomError> {
        Ok(Self::new(StructureConstants::new(c)?))
    }

    /// Ricci applied to a vector.
    pub fn ricci_vec(&self, v: &V3<S>) -> V3<S> {
        mat_vec(&self.curvature.ricci, v)
    }

    /// Same model pushed into the float kernel.  Derived tables are
    /// recomputed from the converted constants rather than converted
    /// entrywise, so the result is exactly what a float run would build.
    pub fn to_f64(&self) -> FrameModel<f64> {
        FrameModel::new(self.constants.map(|x| x.to_f64()))
    }
}

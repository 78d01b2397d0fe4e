//! Dense tensors on the frame, rank 0 through 5, all indices lowered via the
//! orthonormal metric.
//!
//! Components are taken constant in the frame (the setting is homogeneous),
//! so covariant differentiation is pure connection algebra: differentiating a
//! rank-r tensor prepends the derivative slot and contracts each original
//! slot against the connection,
//!
//!   (nabla T)[x][a_1..a_r] = - sum_p sum_m gamma[x][a_p][m] T[a_1..m..a_r].
//!
//! Rank 5 exists because the classifier needs nabla(Riemann); it is the cap,
//! a sixth slot returns an error instead of allocating 3^6 entries nobody
//! reads.

use crate::error::GeomError;
use crate::frame::ConnectionTable;
use crate::linalg::{M3, T3, T4, V3};
use crate::scalar::Scalar;

pub const MAX_RANK: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    rank: usize,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn from_fn(rank: usize, mut f: impl FnMut(&[usize]) -> S) -> Result<Self, GeomError> {
        if rank > MAX_RANK {
            return Err(GeomError::RankOverflow { rank, max: MAX_RANK });
        }
        let len = 3usize.pow(rank as u32);
        let mut data = Vec::with_capacity(len);
        let mut ix = vec![0usize; rank];
        for flat in 0..len {
            decode(flat, &mut ix);
            data.push(f(&ix));
        }
        Ok(Tensor { rank, data })
    }

    pub fn scalar(value: S) -> Self {
        Tensor { rank: 0, data: vec![value] }
    }

    pub fn from_vector(v: &V3<S>) -> Self {
        Tensor { rank: 1, data: v.to_vec() }
    }

    pub fn from_matrix(m: &M3<S>) -> Self {
        Tensor { rank: 2, data: m.iter().flatten().cloned().collect() }
    }

    pub fn from_rank3(t: &T3<S>) -> Self {
        Tensor { rank: 3, data: t.iter().flatten().flatten().cloned().collect() }
    }

    pub fn from_rank4(t: &T4<S>) -> Self {
        Tensor {
            rank: 4,
            data: t.iter().flatten().flatten().flatten().cloned().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, ix: &[usize]) -> &S {
        debug_assert_eq!(ix.len(), self.rank);
        &self.data[encode(ix)]
    }

    /// Covariant derivative; the new (derivation) index comes first.
    pub fn covariant_derivative(&self, conn: &ConnectionTable<S>) -> Result<Self, GeomError> {
        if self.rank + 1 > MAX_RANK {
            return Err(GeomError::DerivativeOverflow { rank: self.rank, max: MAX_RANK });
        }
        let g = &conn.gamma;
        Tensor::from_fn(self.rank + 1, |ix| {
            let x = ix[0];
            let args = &ix[1..];
            let mut acc = S::zero();
            let mut probe = args.to_vec();
            for p in 0..probe.len() {
                let kept = probe[p];
                for m in 0..3 {
                    probe[p] = m;
                    acc -= g[x][kept][m].clone() * self.get(&probe).clone();
                }
                probe[p] = kept;
            }
            acc
        })
    }

    /// Rough Laplacian nabla* nabla = -trace of the second derivative over
    /// its two derivation slots.  Same rank as the input.
    pub fn rough_laplacian(&self, conn: &ConnectionTable<S>) -> Result<Self, GeomError> {
        let second = self.covariant_derivative(conn)?.covariant_derivative(conn)?;
        let mut full = vec![0usize; self.rank + 2];
        Tensor::from_fn(self.rank, |ix| {
            full[2..].copy_from_slice(ix);
            let mut acc = S::zero();
            for i in 0..3 {
                full[0] = i;
                full[1] = i;
                acc -= second.get(&full).clone();
            }
            acc
        })
    }

    pub fn max_abs(&self) -> S {
        let mut worst = S::zero();
        for x in &self.data {
            let a = x.abs();
            if a > worst {
                worst = a;
            }
        }
        worst
    }
}

fn encode(ix: &[usize]) -> usize {
    let mut flat = 0usize;
    for &i in ix {
        debug_assert!(i < 3);
        flat = flat * 3 + i;
    }
    flat
}

fn decode(mut flat: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = flat % 3;
        flat /= 3;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{levi_civita, FrameModel, StructureConstants};
    use crate::linalg::m3;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn encode_decode_roundtrip() {
        let mut ix = [0usize; 4];
        for flat in 0..81 {
            decode(flat, &mut ix);
            assert_eq!(encode(&ix), flat);
        }
    }

    #[test]
    fn rank_cap_is_enforced() {
        assert!(matches!(
            Tensor::<f64>::from_fn(6, |_| 0.0),
            Err(GeomError::RankOverflow { .. })
        ));
        let conn = levi_civita(&StructureConstants::<f64>::zero());
        let t5 = Tensor::from_fn(5, |_| 1.0).unwrap();
        assert!(matches!(
            t5.covariant_derivative(&conn),
            Err(GeomError::DerivativeOverflow { .. })
        ));
    }

    #[test]
    fn derivative_of_vector_matches_connection_action() {
        let model = FrameModel::unimodular(q(1), q(2), q(3));
        let v = [q(2), q(-1), q(5)];
        let dv = Tensor::from_vector(&v).covariant_derivative(&model.connection).unwrap();
        for x in 0..3 {
            let direct = model.connection.derivative(x, &v);
            for k in 0..3 {
                // lowered-index layout: (nabla v)[x][k] = <nabla_{e_x} v, e_k>
                assert_eq!(dv.get(&[x, k]), &direct[k]);
            }
        }
    }

    #[test]
    fn derivative_of_metric_vanishes() {
        let model = FrameModel::unimodular(q(1), q(-4), q(7));
        let metric = Tensor::from_matrix(&m3(|i, j| if i == j { q(1) } else { q(0) }));
        let dm = metric.covariant_derivative(&model.connection).unwrap();
        assert_eq!(dm.max_abs(), q(0));
    }

    #[test]
    fn second_derivative_commutator_is_curvature_on_vectors() {
        // Ricci identity: the tensorial second derivative already subtracts
        // the nabla_{nabla_a b} term, so its antisymmetrization is curvature
        // with no bracket correction:
        //   (nabla^2 v)[a][b][k] - (nabla^2 v)[b][a][k] = sum_l R[a][b][l][k] v_l.
        let model = FrameModel::unimodular(q(2), q(-3), q(5));
        let v = [q(1), q(4), q(-2)];
        let second = Tensor::from_vector(&v)
            .covariant_derivative(&model.connection)
            .unwrap()
            .covariant_derivative(&model.connection)
            .unwrap();
        let r = &model.curvature.riemann;
        for a in 0..3 {
            for b in 0..3 {
                for k in 0..3 {
                    let lhs = second.get(&[a, b, k]).clone() - second.get(&[b, a, k]).clone();
                    let mut rhs = q(0);
                    for l in 0..3 {
                        rhs += r[a][b][l][k].clone() * v[l].clone();
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn rough_laplacian_of_invariant_vector() {
        // On the bi-invariant sphere model every frame field satisfies
        // nabla*nabla e_k = 2 e_k.
        let model = FrameModel::unimodular(q(2), q(-2), q(2));
        for k in 0..3 {
            let v = crate::linalg::v3(|i| if i == k { q(1) } else { q(0) });
            let lap = Tensor::from_vector(&v).rough_laplacian(&model.connection).unwrap();
            for i in 0..3 {
                assert_eq!(lap.get(&[i]), &(q(2) * v[i].clone()));
            }
        }
    }
}

//! Fixed-size linear algebra over a scalar kernel.
//!
//! Frame computations only ever meet 3-vectors and 3x3(x3x3) tables, so
//! everything here is plain arrays, `from_fn` builders and written-out index
//! sums.  No dependency can host arbitrary-precision rationals in this shape,
//! hence no matrix library.

use crate::scalar::Scalar;

pub type V3<S> = [S; 3];
pub type M3<S> = [[S; 3]; 3];
pub type T3<S> = [[[S; 3]; 3]; 3];
pub type T4<S> = [[[[S; 3]; 3]; 3]; 3];

pub fn v3<S>(mut f: impl FnMut(usize) -> S) -> V3<S> {
    std::array::from_fn(|i| f(i))
}

pub fn m3<S>(mut f: impl FnMut(usize, usize) -> S) -> M3<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

pub fn t3<S>(mut f: impl FnMut(usize, usize, usize) -> S) -> T3<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| f(i, j, k))))
}

pub fn t4<S>(mut f: impl FnMut(usize, usize, usize, usize) -> S) -> T4<S> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| std::array::from_fn(|l| f(i, j, k, l))))
    })
}

pub fn sum3<S: Scalar>(mut f: impl FnMut(usize) -> S) -> S {
    let mut acc = S::zero();
    for i in 0..3 {
        acc += f(i);
    }
    acc
}

pub fn sum33<S: Scalar>(mut f: impl FnMut(usize, usize) -> S) -> S {
    let mut acc = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            acc += f(i, j);
        }
    }
    acc
}

pub fn sum333<S: Scalar>(mut f: impl FnMut(usize, usize, usize) -> S) -> S {
    let mut acc = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                acc += f(i, j, k);
            }
        }
    }
    acc
}

/// Totally antisymmetric symbol, epsilon(0,1,2) = 1.
pub fn epsilon(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

pub fn identity<S: Scalar>() -> M3<S> {
    m3(|i, j| if i == j { S::one() } else { S::zero() })
}

pub fn zero_v3<S: Scalar>() -> V3<S> {
    v3(|_| S::zero())
}

pub fn dot<S: Scalar>(u: &V3<S>, v: &V3<S>) -> S {
    sum3(|i| u[i].clone() * v[i].clone())
}

pub fn cross<S: Scalar>(u: &V3<S>, v: &V3<S>) -> V3<S> {
    v3(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        u[j].clone() * v[k].clone() - u[k].clone() * v[j].clone()
    })
}

pub fn add_v3<S: Scalar>(u: &V3<S>, v: &V3<S>) -> V3<S> {
    v3(|i| u[i].clone() + v[i].clone())
}

pub fn sub_v3<S: Scalar>(u: &V3<S>, v: &V3<S>) -> V3<S> {
    v3(|i| u[i].clone() - v[i].clone())
}

pub fn scale_v3<S: Scalar>(s: &S, v: &V3<S>) -> V3<S> {
    v3(|i| s.clone() * v[i].clone())
}

pub fn mat_vec<S: Scalar>(a: &M3<S>, v: &V3<S>) -> V3<S> {
    v3(|i| sum3(|k| a[i][k].clone() * v[k].clone()))
}

pub fn mat_mul<S: Scalar>(a: &M3<S>, b: &M3<S>) -> M3<S> {
    m3(|i, j| sum3(|k| a[i][k].clone() * b[k][j].clone()))
}

pub fn mat_add<S: Scalar>(a: &M3<S>, b: &M3<S>) -> M3<S> {
    m3(|i, j| a[i][j].clone() + b[i][j].clone())
}

pub fn mat_sub<S: Scalar>(a: &M3<S>, b: &M3<S>) -> M3<S> {
    m3(|i, j| a[i][j].clone() - b[i][j].clone())
}

pub fn mat_scale<S: Scalar>(s: &S, a: &M3<S>) -> M3<S> {
    m3(|i, j| s.clone() * a[i][j].clone())
}

pub fn transpose<S: Scalar>(a: &M3<S>) -> M3<S> {
    m3(|i, j| a[j][i].clone())
}

pub fn trace<S: Scalar>(a: &M3<S>) -> S {
    sum3(|i| a[i][i].clone())
}

/// Frobenius pairing sum_ij a_ij b_ij.
pub fn frob<S: Scalar>(a: &M3<S>, b: &M3<S>) -> S {
    sum33(|i, j| a[i][j].clone() * b[i][j].clone())
}

pub fn outer<S: Scalar>(u: &V3<S>, v: &V3<S>) -> M3<S> {
    m3(|i, j| u[i].clone() * v[j].clone())
}

pub fn det3<S: Scalar>(a: &M3<S>) -> S {
    sum333(|i, j, k| S::from_int(epsilon(i, j, k)) * a[0][i].clone() * a[1][j].clone() * a[2][k].clone())
}

/// Inverse by adjugate; `None` on an exactly zero determinant.  Conditioning
/// is the float caller's problem.
pub fn inverse3<S: Scalar>(a: &M3<S>) -> Option<M3<S>> {
    let det = det3(a);
    if det == S::zero() {
        return None;
    }
    // adj[i][j] = cofactor(j, i)
    let cof = |r: usize, c: usize| -> S {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        a[r1][c1].clone() * a[r2][c2].clone() - a[r1][c2].clone() * a[r2][c1].clone()
    };
    Some(m3(|i, j| cof(j, i) / det.clone()))
}

pub fn max_abs_v3<S: Scalar>(v: &V3<S>) -> S {
    let mut acc = S::zero();
    for x in v {
        let a = x.abs();
        if a > acc {
            acc = a;
        }
    }
    acc
}

pub fn max_abs_m3<S: Scalar>(a: &M3<S>) -> S {
    let mut acc = S::zero();
    for row in a {
        for x in row {
            let v = x.abs();
            if v > acc {
                acc = v;
            }
        }
    }
    acc
}

pub fn max_scalar<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub fn map_v3<S: Scalar, T: Scalar>(v: &V3<S>, mut f: impl FnMut(&S) -> T) -> V3<T> {
    v3(|i| f(&v[i]))
}

pub fn map_m3<S: Scalar, T: Scalar>(a: &M3<S>, mut f: impl FnMut(&S) -> T) -> M3<T> {
    m3(|i, j| f(&a[i][j]))
}

pub fn map_t3<S: Scalar, T: Scalar>(a: &T3<S>, mut f: impl FnMut(&S) -> T) -> T3<T> {
    t3(|i, j, k| f(&a[i][j][k]))
}

//! Numeric search for harmonic directions among invariant unit fields.
//!
//! An invariant unit field is a point of the unit sphere in the frame
//! coefficients, and it is harmonic exactly when the tangential part of the
//! rough Laplacian vanishes.  The objective
//!     F(zeta) = |P_zeta(nabla* nabla zeta)|^2
//! is smooth on the sphere, nonnegative, and its zeros are the harmonic
//! directions, so the search is projected gradient descent from a
//! deterministic low-discrepancy seed set, with an optional Newton polish on
//! the two tangential equations to reach residuals near machine precision.
//!
//! For the energy e(zeta) = 1/2 |nabla zeta|^2 on invariant fields the
//! directional derivative along a tangent w equals <P(nabla* nabla zeta), w>
//! (the frame is divergence free, so the adjoint identity is exact algebra);
//! tests cross-check the gradient against finite differences of e along
//! great circles.
//!
//! Everything here runs in f64; exact verification of the directions a
//! search produces belongs to the rational kernel upstream.

use crate::field::{analyze, FieldFlags, Orientation, UnitField};
use crate::frame::FrameModel;
use crate::linalg::{cross, dot, V3};
use crate::scalar::Tol;
use crate::tensor::Tensor;

#[derive(Clone, Debug)]
pub struct FinderConfig {
    /// Seed directions on the sphere (antipodes identified afterwards).
    pub n_starts: usize,
    pub max_iters: usize,
    /// Initial backtracking step along the negative gradient.
    pub initial_step: f64,
    /// Step size below which a line search gives up.
    pub min_step: f64,
    /// Finite-difference step for the tangential gradient.
    pub fd_step: f64,
    /// Accept a direction when sqrt(F) falls at or below this.
    pub converge_tol: f64,
    /// Angular distance identifying two directions (and their antipodes).
    pub dedupe_tol: f64,
    /// Run Newton iteration on the two tangential equations after descent.
    pub newton_polish: bool,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            n_starts: 64,
            max_iters: 500,
            initial_step: 0.1,
            min_step: 1e-18,
            fd_step: 1e-6,
            converge_tol: 1e-12,
            dedupe_tol: 1e-6,
            newton_polish: true,
        }
    }
}

/// A root of the harmonicity equation located by the search.
#[derive(Clone, Debug)]
pub struct CriticalDirection {
    /// Unit components, sign-normalized so the largest entry is positive.
    pub direction: V3<f64>,
    /// sqrt(F) at the direction.
    pub residual: f64,
    /// Number of seeds that converged here.
    pub basin_count: usize,
    /// Diagnostic flags evaluated at a loose tolerance.
    pub flags: FieldFlags,
    /// Index of the frame axis this direction coincides with, if any.
    pub matches_axis: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct FinderReport {
    /// Distinct converged directions in order of first discovery.
    pub directions: Vec<CriticalDirection>,
    /// Seeds whose descent reached the acceptance residual.
    pub converged: usize,
    /// Seeds that stalled above it.
    pub dropped: usize,
    /// Nearly every converged seed was its own direction: the zero set looks
    /// positive-dimensional rather than isolated.
    pub continuous_family: bool,
}

/// Deterministic golden-angle spiral on the sphere.
pub fn fibonacci_directions(n: usize) -> Vec<V3<f64>> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden_angle * i as f64;
            [r * theta.cos(), r * theta.sin(), z]
        })
        .collect()
}

fn normalize(v: &V3<f64>) -> V3<f64> {
    let n = dot(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Tangential part of the rough Laplacian at a unit direction.
fn tangential_laplacian(model: &FrameModel<f64>, zeta: &V3<f64>) -> V3<f64> {
    let lap = Tensor::from_vector(zeta)
        .rough_laplacian(&model.connection)
        .expect("vector rank is differentiable twice");
    let l = [lap.get(&[0]).clone(), lap.get(&[1]).clone(), lap.get(&[2]).clone()];
    let vertical = dot(&l, zeta);
    [
        l[0] - vertical * zeta[0],
        l[1] - vertical * zeta[1],
        l[2] - vertical * zeta[2],
    ]
}

/// F(zeta): squared norm of the tangential rough Laplacian.  `zeta` must be
/// unit length.
pub fn residual_objective(model: &FrameModel<f64>, zeta: &V3<f64>) -> f64 {
    let t = tangential_laplacian(model, zeta);
    dot(&t, &t)
}

/// Energy density 1/2 |nabla zeta|^2 of an invariant unit field.
pub fn energy_density(model: &FrameModel<f64>, zeta: &V3<f64>) -> f64 {
    let grad = Tensor::from_vector(zeta)
        .covariant_derivative(&model.connection)
        .expect("vector rank is differentiable");
    let mut total = 0.0;
    for x in 0..3 {
        for i in 0..3 {
            let g = grad.get(&[x, i]);
            total += g * g;
        }
    }
    0.5 * total
}

/// Orthonormal basis of the tangent plane at a unit direction, anchored at
/// the axis least aligned with it.
fn tangent_basis(zeta: &V3<f64>) -> (V3<f64>, V3<f64>) {
    let mut axis = 0;
    for a in 1..3 {
        if zeta[a].abs() < zeta[axis].abs() {
            axis = a;
        }
    }
    let mut t1 = [0.0; 3];
    for i in 0..3 {
        t1[i] = -zeta[axis] * zeta[i];
    }
    t1[axis] += 1.0;
    let t1 = normalize(&t1);
    let t2 = cross(zeta, &t1);
    (t1, t2)
}

fn retract(zeta: &V3<f64>, dir: &V3<f64>, step: f64) -> V3<f64> {
    normalize(&[
        zeta[0] + step * dir[0],
        zeta[1] + step * dir[1],
        zeta[2] + step * dir[2],
    ])
}

/// Projected gradient descent with backtracking, then optional Newton
/// polish.  Returns the final point and sqrt(F) there.
fn descend(model: &FrameModel<f64>, seed: &V3<f64>, cfg: &FinderConfig) -> (V3<f64>, f64) {
    let mut zeta = normalize(seed);
    let mut f = residual_objective(model, &zeta);
    for _ in 0..cfg.max_iters {
        if f.sqrt() <= cfg.converge_tol {
            break;
        }
        let (t1, t2) = tangent_basis(&zeta);
        let h = cfg.fd_step;
        let g1 = (residual_objective(model, &retract(&zeta, &t1, h))
            - residual_objective(model, &retract(&zeta, &t1, -h)))
            / (2.0 * h);
        let g2 = (residual_objective(model, &retract(&zeta, &t2, h))
            - residual_objective(model, &retract(&zeta, &t2, -h)))
            / (2.0 * h);
        let down = [
            -(g1 * t1[0] + g2 * t2[0]),
            -(g1 * t1[1] + g2 * t2[1]),
            -(g1 * t1[2] + g2 * t2[2]),
        ];
        let mut step = cfg.initial_step;
        let mut moved = false;
        while step >= cfg.min_step {
            let candidate = retract(&zeta, &down, step);
            let fc = residual_objective(model, &candidate);
            if fc < f {
                zeta = candidate;
                f = fc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break; // line search exhausted: stationary for this seed
        }
    }
    // Descent contracts slowly along nearly flat valleys (two close
    // Laplacian eigenvalues), so polish must also run from stalled points,
    // re-anchoring its chart between rounds; the best point is kept, so a
    // diverging round cannot lose ground.
    if cfg.newton_polish {
        for _ in 0..3 {
            let (z, fz) = newton_polish(model, &zeta, cfg);
            if fz >= f {
                break;
            }
            zeta = z;
            f = fz;
            if f.sqrt() <= cfg.converge_tol * 1e-2 {
                break;
            }
        }
    }
    (zeta, f.sqrt())
}

/// Newton iteration on the two tangential components of the harmonicity
/// equation, in a fixed chart around the descent endpoint.
fn newton_polish(model: &FrameModel<f64>, center: &V3<f64>, cfg: &FinderConfig) -> (V3<f64>, f64) {
    let (t1, t2) = tangent_basis(center);
    let point = |u: f64, v: f64| -> V3<f64> {
        normalize(&[
            center[0] + u * t1[0] + v * t2[0],
            center[1] + u * t1[1] + v * t2[1],
            center[2] + u * t1[2] + v * t2[2],
        ])
    };
    let eqs = |u: f64, v: f64| -> [f64; 2] {
        let t = tangential_laplacian(model, &point(u, v));
        [dot(&t, &t1), dot(&t, &t2)]
    };
    let (mut u, mut v) = (0.0, 0.0);
    let mut best = (point(u, v), residual_objective(model, center));
    let h = 1e-7;
    for _ in 0..25 {
        let r = eqs(u, v);
        let ru = eqs(u + h, v);
        let rv = eqs(u, v + h);
        let j = [
            [(ru[0] - r[0]) / h, (rv[0] - r[0]) / h],
            [(ru[1] - r[1]) / h, (rv[1] - r[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-30 {
            break;
        }
        u -= (r[0] * j[1][1] - r[1] * j[0][1]) / det;
        v -= (j[0][0] * r[1] - j[1][0] * r[0]) / det;
        let z = point(u, v);
        let f = residual_objective(model, &z);
        if f < best.1 {
            best = (z, f);
        } else {
            break;
        }
        if f.sqrt() <= cfg.converge_tol * 1e-2 {
            break;
        }
    }
    best
}

/// Angular distance on the projective sphere (antipodes identified).
fn projective_angle(a: &V3<f64>, b: &V3<f64>) -> f64 {
    dot(a, b).abs().min(1.0).acos()
}

fn canonical_sign(v: &V3<f64>) -> V3<f64> {
    let mut lead = 0;
    for i in 1..3 {
        if v[i].abs() > v[lead].abs() {
            lead = i;
        }
    }
    if v[lead] < 0.0 {
        [-v[0], -v[1], -v[2]]
    } else {
        *v
    }
}

const AXIS_MATCH_TOL: f64 = 1e-6;
const FLAG_TOL: f64 = 1e-7;

fn axis_match(v: &V3<f64>) -> Option<usize> {
    (0..3).find(|&i| v[i].abs() > 1.0 - AXIS_MATCH_TOL)
}

/// Run the search from every seed and collect the distinct roots.
pub fn find_all(model: &FrameModel<f64>, cfg: &FinderConfig) -> FinderReport {
    let mut directions: Vec<CriticalDirection> = Vec::new();
    let mut converged = 0;
    let mut dropped = 0;
    for seed in fibonacci_directions(cfg.n_starts) {
        let (zeta, residual) = descend(model, &seed, cfg);
        if residual > cfg.converge_tol {
            dropped += 1;
            continue;
        }
        converged += 1;
        match directions
            .iter_mut()
            .find(|d| projective_angle(&d.direction, &zeta) <= cfg.dedupe_tol)
        {
            Some(existing) => {
                existing.basin_count += 1;
                if residual < existing.residual {
                    existing.residual = residual;
                    existing.direction = canonical_sign(&zeta);
                }
            }
            None => {
                let direction = canonical_sign(&zeta);
                let flags = direction_flags(model, &direction);
                directions.push(CriticalDirection {
                    matches_axis: axis_match(&direction),
                    direction,
                    residual,
                    basin_count: 1,
                    flags,
                });
            }
        }
    }
    let continuous_family =
        converged >= 8 && directions.len() * 10 >= converged * 9;
    FinderReport { directions, converged, dropped, continuous_family }
}

fn direction_flags(model: &FrameModel<f64>, direction: &V3<f64>) -> FieldFlags {
    let unit = UnitField::new(normalize(direction)).expect("normalized direction is unit");
    let tol = Tol::new(FLAG_TOL);
    analyze(model, unit, Orientation::Positive, &tol).flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::FrameModel;
    use crate::scalar::{Rational, Scalar};

    fn reference_model() -> FrameModel<f64> {
        FrameModel::unimodular(1.0, 2.0, 3.0)
    }

    #[test]
    fn fibonacci_seeds_are_unit_and_spread() {
        let seeds = fibonacci_directions(64);
        assert_eq!(seeds.len(), 64);
        for s in &seeds {
            assert!((dot(s, s) - 1.0).abs() < 1e-12);
        }
        // no two seeds nearly coincide
        for i in 0..seeds.len() {
            for j in (i + 1)..seeds.len() {
                assert!(projective_angle(&seeds[i], &seeds[j]) > 1e-3);
            }
        }
    }

    #[test]
    fn axis_laplacian_eigenvalues_are_exact() {
        // the rough Laplacian of a diagonal model is diagonal on the axes,
        // with eigenvalue |phi|^2 of that axis
        let model = FrameModel::unimodular(
            Rational::from_int(1),
            Rational::from_int(2),
            Rational::from_int(3),
        );
        let expected = [Rational::from_int(9), Rational::from_int(4), Rational::from_int(13)];
        for k in 0..3 {
            let axis: crate::linalg::V3<Rational> =
                crate::linalg::v3(|i| if i == k { Rational::from_int(1) } else { Rational::from_int(0) });
            let lap = Tensor::from_vector(&axis)
                .rough_laplacian(&model.connection)
                .unwrap();
            for i in 0..3 {
                let want = if i == k { expected[k].clone() } else { Rational::from_int(0) };
                assert_eq!(*lap.get(&[i]), want, "axis {k} component {i}");
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences_of_energy() {
        // <P(nabla* nabla zeta), w> against a central difference of the
        // energy along the great circle through zeta in direction w
        let model = reference_model();
        let points = fibonacci_directions(7);
        let h = 1e-5;
        for zeta in &points {
            let (t1, t2) = tangent_basis(zeta);
            for w in [&t1, &t2] {
                let analytic = dot(&tangential_laplacian(&model, zeta), w);
                let fd = (energy_density(&model, &retract(zeta, w, h))
                    - energy_density(&model, &retract(zeta, w, -h)))
                    / (2.0 * h);
                assert!(
                    (analytic - fd).abs() < 1e-6,
                    "gradient mismatch at {zeta:?}: {analytic} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn finds_the_three_axes_of_a_generic_diagonal_model() {
        let model = reference_model();
        let report = find_all(&model, &FinderConfig::default());
        assert_eq!(report.directions.len(), 3, "expected exactly the three axes");
        assert!(!report.continuous_family);
        assert_eq!(report.dropped + report.converged, 64);
        let mut axes_seen = [false; 3];
        for d in &report.directions {
            assert!(d.residual <= 1e-12, "residual {}", d.residual);
            let axis = d.matches_axis.expect("critical directions lie on axes");
            axes_seen[axis] = true;
            assert!(d.flags.harmonic);
            assert!(d.flags.totally_geodesic);
            assert!(d.basin_count >= 1);
        }
        assert_eq!(axes_seen, [true; 3]);
        let total_basins: usize = report.directions.iter().map(|d| d.basin_count).sum();
        assert_eq!(total_basins, report.converged);
    }

    #[test]
    fn killing_model_finds_isolated_axis_among_root_circle() {
        // beta + gamma = 0 equalizes the two horizontal Laplacian
        // eigenvalues, so the root set is the e0-e1 circle plus the isolated
        // Killing axis e2; the axis must still be located exactly
        let model = FrameModel::unimodular(4.0, 1.0, -1.0);
        let report = find_all(&model, &FinderConfig::default());
        let vertical = report
            .directions
            .iter()
            .find(|d| d.matches_axis == Some(2))
            .expect("vertical axis is harmonic");
        assert!(vertical.residual <= 1e-12);
        assert!(vertical.flags.killing);
        assert!(vertical.flags.harmonic);
        assert!(vertical.flags.totally_geodesic);
    }

    #[test]
    fn abelian_model_reports_a_continuous_family() {
        let model = FrameModel::unimodular(0.0, 0.0, 0.0);
        let report = find_all(&model, &FinderConfig::default());
        assert!(report.continuous_family);
        assert_eq!(report.dropped, 0);
        assert_eq!(report.converged, 64);
    }

    #[test]
    fn search_is_deterministic() {
        let model = reference_model();
        let a = find_all(&model, &FinderConfig::default());
        let b = find_all(&model, &FinderConfig::default());
        assert_eq!(a.directions.len(), b.directions.len());
        for (x, y) in a.directions.iter().zip(b.directions.iter()) {
            assert_eq!(x.direction, y.direction);
            assert_eq!(x.residual, y.residual);
            assert_eq!(x.basin_count, y.basin_count);
        }
    }

    #[test]
    fn bi_invariant_model_has_only_harmonic_directions() {
        // on the round model every invariant direction is harmonic: each
        // seed is already a root, so the search reports a continuous family
        let model = FrameModel::unimodular(2.0, -2.0, 2.0);
        let report = find_all(&model, &FinderConfig::default());
        assert_eq!(report.dropped, 0);
        assert!(report.continuous_family);
        for d in &report.directions {
            assert!(d.residual <= 1e-12);
            assert!(d.flags.harmonic);
        }
    }
}

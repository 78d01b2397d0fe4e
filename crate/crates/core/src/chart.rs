//! Coordinate-chart backend: finite-difference curvature and curve
//! diagnostics for metrics given as closures, used to cross-validate frame
//! models against an independent representation.
//!
//! A chart carries the metric in coordinates, a distinguished unit field,
//! and optionally an orthonormal frame.  Everything is differentiated
//! numerically, so nothing here is exact; the point is that the numbers come
//! from a completely different route than the structure-constant algebra,
//! and agreement within the finite-difference budget is strong evidence both
//! sides are right.
//!
//! Step-size policy: quantities needing one derivative of first-order data
//! (structure functions, field derivatives) use [`DEFAULT_CURVE_STEP`];
//! curvature needs nested differentiation of the metric and uses
//! [`DEFAULT_CURVATURE_STEP`] at both levels, giving errors around h^2 with
//! a comfortable margin over the rounding floor.

use crate::error::GeomError;
use crate::frame::FrameModel;
use crate::linalg::{dot, inverse3, m3, max_abs_m3, sum3, t3, transpose, v3, M3, T3, V3};

/// Step for nested curvature differences.
pub const DEFAULT_CURVATURE_STEP: f64 = 1e-3;
/// Step for single differences of first-order data.
pub const DEFAULT_CURVE_STEP: f64 = 1e-6;

type MetricFn = dyn Fn(&V3<f64>) -> M3<f64>;
type FieldFn = dyn Fn(&V3<f64>) -> V3<f64>;
type FrameFn = dyn Fn(&V3<f64>) -> M3<f64>;

/// A metric, a unit field, and optionally an orthonormal frame, all in one
/// coordinate chart.
pub struct ChartModel {
    pub name: String,
    /// g_ij at a point.
    pub metric: Box<MetricFn>,
    /// Coordinate components of the distinguished unit field.
    pub field: Box<FieldFn>,
    /// Row a holds the coordinate components of the frame vector E_a.
    pub frame: Option<Box<FrameFn>>,
    /// The frame has constant structure functions (so bracket and shape
    /// comparisons against a frame model make sense pointwise).
    pub lie_frame: bool,
    /// Fundamental periods of a compact quotient, metadata only.
    pub periods: [Option<f64>; 3],
}

fn shifted(x: &V3<f64>, coord: usize, delta: f64) -> V3<f64> {
    let mut y = *x;
    y[coord] += delta;
    y
}

fn check_step(h: f64) -> Result<(), GeomError> {
    if h > 0.0 {
        Ok(())
    } else {
        Err(GeomError::NonpositiveStep { value: h })
    }
}

fn metric_inverse(chart: &ChartModel, x: &V3<f64>) -> Result<M3<f64>, GeomError> {
    let g = (chart.metric)(x);
    inverse3(&g).ok_or(GeomError::SingularMetric { x: x[0], y: x[1], z: x[2] })
}

/// Christoffel symbols Gamma^k_ij (layout [k][i][j]) by central differences
/// of the metric.
pub fn christoffel_fd(chart: &ChartModel, x: &V3<f64>, h: f64) -> Result<T3<f64>, GeomError> {
    check_step(h)?;
    let ginv = metric_inverse(chart, x)?;
    // dg[l][i][j] = d_l g_ij
    let dg = t3(|l, i, j| {
        ((chart.metric)(&shifted(x, l, h))[i][j] - (chart.metric)(&shifted(x, l, -h))[i][j])
            / (2.0 * h)
    });
    Ok(t3(|k, i, j| {
        0.5 * sum3(|l| ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]))
    }))
}

/// Ricci tensor in coordinates by nested differences,
///   Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj
///          + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj,
/// with the same step at both levels.
pub fn ricci_fd(chart: &ChartModel, x: &V3<f64>, h: f64) -> Result<M3<f64>, GeomError> {
    check_step(h)?;
    let gamma = christoffel_fd(chart, x, h)?;
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3]; // [l][k][i][j] = d_l Gamma^k_ij
    for l in 0..3 {
        let plus = christoffel_fd(chart, &shifted(x, l, h), h)?;
        let minus = christoffel_fd(chart, &shifted(x, l, -h), h)?;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    dgamma[l][k][i][j] = (plus[k][i][j] - minus[k][i][j]) / (2.0 * h);
                }
            }
        }
    }
    Ok(m3(|i, j| {
        let divergence = sum3(|k| dgamma[k][k][i][j]);
        let traced = sum3(|k| dgamma[i][k][k][j]);
        let quad =
            sum3(|k| sum3(|l| gamma[k][k][l] * gamma[l][i][j] - gamma[k][i][l] * gamma[l][k][j]));
        divergence - traced + quad
    }))
}

/// Ricci tensor contracted into the chart frame: Ric(E_a, E_b).
pub fn ricci_fd_frame(chart: &ChartModel, x: &V3<f64>, h: f64) -> Result<M3<f64>, GeomError> {
    let frame = chart
        .frame
        .as_ref()
        .ok_or_else(|| GeomError::MissingFrame { name: chart.name.clone() })?;
    let ric = ricci_fd(chart, x, h)?;
    let e = frame(x);
    Ok(m3(|a, b| {
        sum3(|i| sum3(|j| e[a][i] * e[b][j] * ric[i][j]))
    }))
}

/// Covariant derivative (nabla_u v)^k at x for coordinate vector fields
/// given as closures; u is evaluated at x, v is differenced at
/// [`DEFAULT_CURVE_STEP`], and the connection uses step `h_gamma`.
fn covariant_along(
    chart: &ChartModel,
    u: &V3<f64>,
    v: &FieldFn,
    x: &V3<f64>,
    h_gamma: f64,
) -> Result<V3<f64>, GeomError> {
    let gamma = christoffel_fd(chart, x, h_gamma)?;
    let hv = DEFAULT_CURVE_STEP;
    let vx = v(x);
    Ok(v3(|k| {
        let transport = sum3(|i| {
            u[i] * (v(&shifted(x, i, hv))[k] - v(&shifted(x, i, -hv))[k]) / (2.0 * hv)
        });
        let correction = sum3(|i| sum3(|j| gamma[k][i][j] * u[i] * vx[j]));
        transport + correction
    }))
}

/// |nabla_V V|_g at x for the chart's own field: zero exactly when the
/// field's integral curves are geodesics.
pub fn geodesic_residual(chart: &ChartModel, x: &V3<f64>, h_gamma: f64) -> Result<f64, GeomError> {
    let vx = (chart.field)(x);
    let acc = covariant_along(chart, &vx, &chart.field, x, h_gamma)?;
    let g = (chart.metric)(x);
    Ok(sum3(|i| sum3(|j| g[i][j] * acc[i] * acc[j])).max(0.0).sqrt())
}

/// One integral curve of the chart field, integrated with classical
/// fourth-order Runge-Kutta on the raw (never re-normalized) field.
#[derive(Clone, Debug)]
pub struct CurveReport {
    pub end: V3<f64>,
    pub steps: usize,
    /// max | |field|_g - 1 | sampled along the curve: drift away from unit
    /// speed measures both the field normalization and the integrator.
    pub speed_drift: f64,
    /// max |nabla_V V|_g sampled along the curve.
    pub geodesic_residual: f64,
}

pub fn integral_curve(
    chart: &ChartModel,
    start: &V3<f64>,
    steps: usize,
    dt: f64,
) -> Result<CurveReport, GeomError> {
    check_step(dt)?;
    let f = |p: &V3<f64>| (chart.field)(p);
    let mut x = *start;
    let mut speed_drift: f64 = 0.0;
    let mut geo: f64 = 0.0;
    let sample = |p: &V3<f64>, drift: &mut f64, geo: &mut f64| -> Result<(), GeomError> {
        let g = (chart.metric)(p);
        let v = (chart.field)(p);
        let speed = sum3(|i| sum3(|j| g[i][j] * v[i] * v[j])).max(0.0).sqrt();
        *drift = drift.max((speed - 1.0).abs());
        *geo = geo.max(geodesic_residual(chart, p, DEFAULT_CURVATURE_STEP)?);
        Ok(())
    };
    sample(&x, &mut speed_drift, &mut geo)?;
    for _ in 0..steps {
        let k1 = f(&x);
        let k2 = f(&v3(|i| x[i] + 0.5 * dt * k1[i]));
        let k3 = f(&v3(|i| x[i] + 0.5 * dt * k2[i]));
        let k4 = f(&v3(|i| x[i] + dt * k3[i]));
        x = v3(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        sample(&x, &mut speed_drift, &mut geo)?;
    }
    Ok(CurveReport { end: x, steps, speed_drift, geodesic_residual: geo })
}

/// Chart-versus-frame comparison over a grid of points.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    /// max over the grid of |Ric_chart(E_a,E_b) - Ric_frame[a][b]|.
    pub ricci_residual: f64,
    /// max over the grid of the structure-function defect against the
    /// model's bracket coefficients (frames with constant brackets only).
    pub structure_residual: Option<f64>,
    /// max over the grid of the shape-operator defect against `phi`
    /// (frames with constant brackets only).
    pub phi_residual: Option<f64>,
    pub grid_points: usize,
}

/// 27 points with every coordinate in {-s, 0, +s}.
pub fn cube_grid(s: f64) -> Vec<V3<f64>> {
    let levels = [-s, 0.0, s];
    let mut pts = Vec::with_capacity(27);
    for &a in &levels {
        for &b in &levels {
            for &c in &levels {
                pts.push([a, b, c]);
            }
        }
    }
    pts
}

pub fn default_grid() -> Vec<V3<f64>> {
    cube_grid(0.2)
}

/// Structure functions of the chart frame at x, expressed in the frame
/// basis: out[a][b][c] = component along E_c of [E_a, E_b].
fn structure_functions(frame: &FrameFn, x: &V3<f64>) -> Result<T3<f64>, GeomError> {
    let h = DEFAULT_CURVE_STEP;
    let e = frame(x);
    // de[l][a][k] = d_l E_a^k
    let de = t3(|l, a, k| (frame(&shifted(x, l, h))[a][k] - frame(&shifted(x, l, -h))[a][k]) / (2.0 * h));
    let bracket = t3(|a, b, k| sum3(|l| e[a][l] * de[l][b][k] - e[b][l] * de[l][a][k]));
    // solve frame^T w = v for each bracket vector
    let basis = inverse3(&transpose(&e))
        .ok_or(GeomError::SingularMetric { x: x[0], y: x[1], z: x[2] })?;
    Ok(t3(|a, b, c| sum3(|k| basis[c][k] * bracket[a][b][k])))
}

/// Compare the chart against a frame model: Ricci always, brackets and the
/// shape operator of the chart field when the frame has constant brackets.
/// `phi` is the frame-side shape matrix to validate (entries
/// phi[i][j] = <phi(E_j), E_i>).
pub fn cross_validate(
    chart: &ChartModel,
    model: &FrameModel<f64>,
    phi: Option<&M3<f64>>,
    grid: &[V3<f64>],
    curvature_step: f64,
) -> Result<CrossValidation, GeomError> {
    let frame = chart
        .frame
        .as_ref()
        .ok_or_else(|| GeomError::MissingFrame { name: chart.name.clone() })?;
    let mut ricci_residual: f64 = 0.0;
    let mut structure_residual: Option<f64> = None;
    let mut phi_residual: Option<f64> = None;
    for x in grid {
        let ric_chart = ricci_fd_frame(chart, x, curvature_step)?;
        let defect = max_abs_m3(&m3(|a, b| ric_chart[a][b] - model.curvature.ricci[a][b]));
        ricci_residual = ricci_residual.max(defect);

        if chart.lie_frame {
            let sf = structure_functions(frame, x)?;
            let mut worst: f64 = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        worst = worst.max((sf[a][b][c] - model.constants.c[a][b][c]).abs());
                    }
                }
            }
            structure_residual = Some(structure_residual.unwrap_or(0.0).max(worst));

            if let Some(phi_expected) = phi {
                let e = frame(x);
                let g = (chart.metric)(x);
                let mut worst: f64 = 0.0;
                for j in 0..3 {
                    let ej = v3(|k| e[j][k]);
                    let nabla = covariant_along(chart, &ej, &chart.field, x, curvature_step)?;
                    for i in 0..3 {
                        // <phi(E_j), E_i> = -g(nabla_{E_j} zeta, E_i)
                        let entry = -sum3(|k| sum3(|l| g[k][l] * nabla[k] * e[i][l]));
                        worst = worst.max((entry - phi_expected[i][j]).abs());
                    }
                }
                phi_residual = Some(phi_residual.unwrap_or(0.0).max(worst));
            }
        }
    }
    Ok(CrossValidation { ricci_residual, structure_residual, phi_residual, grid_points: grid.len() })
}

/// Expanding factor of the gluing matrix [[a,b],[c,d]]: the larger root of
/// its characteristic polynomial.  Requires determinant one and |trace| > 2
/// so the roots are real, reciprocal, and irrational.
pub fn expanding_eigenvalue(matrix: [[i64; 2]; 2]) -> Result<f64, GeomError> {
    let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    let tr = matrix[0][0] + matrix[1][1];
    if det != 1 || tr.abs() <= 2 {
        return Err(GeomError::NotAnosov(matrix));
    }
    let t = tr.abs() as f64;
    Ok((t + (t * t - 4.0).sqrt()) / 2.0)
}

/// Mapping-torus chart of the 2-torus under the gluing matrix: coordinates
/// (x, s, t), metric diag(beta^(-2t), beta^(2t), 1) with beta the expanding
/// eigenvalue.  The frame contracts/expands the two torus directions and E3
/// runs along the suspension; the distinguished field is E3.
pub fn mapping_torus_chart(matrix: [[i64; 2]; 2]) -> Result<ChartModel, GeomError> {
    let beta = expanding_eigenvalue(matrix)?;
    let metric = move |x: &V3<f64>| -> M3<f64> {
        let t = x[2];
        let mut g = [[0.0; 3]; 3];
        g[0][0] = beta.powf(-2.0 * t);
        g[1][1] = beta.powf(2.0 * t);
        g[2][2] = 1.0;
        g
    };
    let frame = move |x: &V3<f64>| -> M3<f64> {
        let t = x[2];
        // E1 stretches along s, E2 along x, E3 = d_t; brackets
        // [E1,E3] = log(beta) E1, [E2,E3] = -log(beta) E2
        [
            [0.0, beta.powf(-t), 0.0],
            [beta.powf(t), 0.0, 0.0],
            [0.0, 0.0, 1.0],
        ]
    };
    Ok(ChartModel {
        name: "mapping-torus".into(),
        metric: Box::new(metric),
        field: Box::new(|_x| [0.0, 0.0, 1.0]),
        frame: Some(Box::new(frame)),
        lie_frame: true,
        periods: [Some(1.0), Some(1.0), Some(1.0)],
    })
}

/// Flat chart of the twisted product: identity metric with the frame
/// rotating at rate `a` along x; the distinguished field is the rotating
/// axis E3 = sin(ax) d_y + cos(ax) d_z.  Structure functions match the
/// diagonal model (a, -a, 0).
pub fn twisted_flat_chart(a: f64) -> ChartModel {
    let frame = move |x: &V3<f64>| -> M3<f64> {
        let (s, c) = (a * x[0]).sin_cos();
        [[1.0, 0.0, 0.0], [0.0, -c, s], [0.0, s, c]]
    };
    let field = move |x: &V3<f64>| -> V3<f64> {
        let (s, c) = (a * x[0]).sin_cos();
        [0.0, s, c]
    };
    ChartModel {
        name: "twisted-flat".into(),
        metric: Box::new(|_x| [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
        field: Box::new(field),
        frame: Some(Box::new(frame)),
        lie_frame: true,
        periods: [None, None, None],
    }
}

/// Stereographic chart of the round sphere of curvature one:
/// g = 4/(1+|x|^2)^2 Id with the conformal orthonormal frame.  The frame
/// does not have constant brackets; only curvature is comparable.
pub fn round_sphere_chart() -> ChartModel {
    let conf = |x: &V3<f64>| -> f64 { (1.0 + dot(x, x)) / 2.0 };
    let metric = move |x: &V3<f64>| -> M3<f64> {
        let c = conf(x);
        let w = 1.0 / (c * c);
        [[w, 0.0, 0.0], [0.0, w, 0.0], [0.0, 0.0, w]]
    };
    let frame = move |x: &V3<f64>| -> M3<f64> {
        let c = conf(x);
        [[c, 0.0, 0.0], [0.0, c, 0.0], [0.0, 0.0, c]]
    };
    let field = move |x: &V3<f64>| -> V3<f64> {
        let c = conf(x);
        [0.0, 0.0, c]
    };
    ChartModel {
        name: "round-sphere".into(),
        metric: Box::new(metric),
        field: Box::new(field),
        frame: Some(Box::new(frame)),
        lie_frame: false,
        periods: [None, None, None],
    }
}

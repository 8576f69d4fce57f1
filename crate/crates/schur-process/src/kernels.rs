//! Correlation kernels of the Schur measure and Schur process, their
//! determinant correlation functions, default contour radii, and the
//! joint (q, z) contour evaluators used to cross-check the derivation.
//!
//! ```
//! use schur_process::kernels::{det_correlation_measure, KernelRequest};
//! use schur_process::measures::rho_measure_bruteforce;
//! use schur_process::symfunc::Specialization;
//!
//! // the kernel determinant reproduces the enumeration oracle
//! let x = Specialization::of(&[0.5]);
//! let req = KernelRequest::with_nodes(128);
//! let det = det_correlation_measure(&[-1, 0], &x, &x, &req).unwrap();
//! let oracle = rho_measure_bruteforce(&[-1, 0], &x, &x, 40);
//! assert!((det - oracle.value).abs() < 1e-6);
//! ```

use crate::measures::{MeasureError, ProcessSpec};
use crate::quadrature::{
    circle_quadrature, determinant, tensor_quadrature, ContourSpec, NodeGrid, QuadratureError,
};
use crate::symfunc::{cauchy_f, h_q, Specialization, SymFuncError};
use num_complex::Complex64;
use thiserror::Error;

/// Largest point count accepted by the joint (q, z) evaluators; the cost
/// grows as M^{2d} and these exist only to validate the derivation.
pub const MAX_QZ_POINTS: usize = 2;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("radii ({r1}, {r2}) violate the window ({lo}, {hi}) with ordering {ordering:?}")]
    RadiusWindow {
        r1: f64,
        r2: f64,
        lo: f64,
        hi: f64,
        ordering: ContourOrdering,
    },
    #[error("level {0} outside 1..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("joint contour evaluation is capped at {MAX_QZ_POINTS} points, got {0}")]
    TooManyPoints(usize),
    #[error("need |X| = |Y| = n > max(d, d - min T) = {need}, got |X| = {nx}, |Y| = {ny}")]
    NotEnoughVariables { need: usize, nx: usize, ny: usize },
    #[error("determinant has imaginary part {0:.3e}, expected a real correlation")]
    NotReal(f64),
    #[error("no decreasing radius chain r_i with r_i s_i > r_(i+1) fits the specializations")]
    RadiusChainInfeasible,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    SymFunc(#[from] SymFuncError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Relative ordering of the two levels of a kernel entry; it decides
/// which contour is the outer one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContourOrdering {
    /// z inside w (r1 < r2): kernel entries with s > t.
    ZInner,
    /// z outside w (r1 > r2): entries with s <= t, and always the
    /// one-level measure kernel.
    ZOuter,
}

/// Contour radii and node count for a kernel evaluation. With
/// `radii: None` the log-equipartition defaults are used.
#[derive(Clone, Copy, Debug)]
pub struct KernelRequest {
    pub radii: Option<(f64, f64)>,
    pub nodes: usize,
}

impl KernelRequest {
    pub fn with_nodes(nodes: usize) -> Self {
        KernelRequest { radii: None, nodes }
    }
}

fn clamped_window(max_value: f64) -> (f64, f64) {
    if max_value <= 0.0 {
        (0.1, 10.0)
    } else {
        (max_value, 1.0 / max_value)
    }
}

/// Radii (r1, r2) at the log-thirds of the pole-free window (a, 1/a),
/// where a is the largest specialization value; this keeps both circles
/// maximally far from the poles. The ordering decides which one is
/// larger.
pub fn default_radii(max_value: f64, ordering: ContourOrdering) -> (f64, f64) {
    let (lo, hi) = clamped_window(max_value);
    let step = (hi.ln() - lo.ln()) / 3.0;
    let inner = (lo.ln() + step).exp();
    let outer = (lo.ln() + 2.0 * step).exp();
    match ordering {
        ContourOrdering::ZInner => (inner, outer),
        ContourOrdering::ZOuter => (outer, inner),
    }
}

fn validate_radii(
    r1: f64,
    r2: f64,
    max_value: f64,
    ordering: ContourOrdering,
) -> Result<(), KernelError> {
    let (lo, hi) = clamped_window(max_value);
    let ordered = match ordering {
        ContourOrdering::ZInner => r1 < r2,
        ContourOrdering::ZOuter => r2 < r1,
    };
    if !ordered || r1 <= lo || r2 <= lo || r1 >= hi || r2 >= hi {
        return Err(KernelError::RadiusWindow {
            r1,
            r2,
            lo,
            hi,
            ordering,
        });
    }
    Ok(())
}

fn two_axis_grids(r1: f64, r2: f64, nodes: usize) -> Result<[NodeGrid; 2], KernelError> {
    let z = circle_quadrature(&ContourSpec::new(r1, 1, nodes)?);
    let w = circle_quadrature(&ContourSpec::new(r2, 1, nodes)?);
    Ok([z, w])
}

/// Correlation kernel of the Schur measure:
///
///   L(i, j) = (2 pi i)^{-2} oint oint (z - w)^{-1}
///             F(Y; {1/w}) F(X; {z}) / (F(Y; {1/z}) F(X; {w}))
///             w^j z^{-i-1} dw dz
///
/// over positively oriented circles |z| = r1, |w| = r2 with
/// max(X, Y) < r2 < r1 < min(1/X, 1/Y).
#[allow(non_snake_case)]
pub fn kernel_L(
    i: i64,
    j: i64,
    x: &Specialization,
    y: &Specialization,
    req: &KernelRequest,
) -> Result<Complex64, KernelError> {
    let a = x.max_value().max(y.max_value());
    let (r1, r2) = req.radii.unwrap_or_else(|| default_radii(a, ContourOrdering::ZOuter));
    validate_radii(r1, r2, a, ContourOrdering::ZOuter)?;
    let grids = two_axis_grids(r1, r2, req.nodes)?;
    let xc = x.complex_values();
    let yc = y.complex_values();
    let f = move |zs: &[Complex64]| {
        let (z, w) = (zs[0], zs[1]);
        let num = cauchy_f(&yc, &[w.inv()]) * cauchy_f(&xc, &[z]);
        let den = cauchy_f(&yc, &[z.inv()]) * cauchy_f(&xc, &[w]);
        num / den / (z - w) * w.powi(j as i32) * z.powi(-(i as i32) - 1)
    };
    Ok(tensor_quadrature(&f, &grids)?)
}

/// Correlation kernel of the Schur process at points (s, i), (t, j) with
/// 1-based levels:
///
///   K(s,i; t,j) = (2 pi i)^{-2} oint oint (z - w)^{-1}
///     [prod_{k=t}^m F(Y^k; {1/w}) prod_{k=1}^s F(X^k; {z})]
///     / [prod_{k=s}^m F(Y^k; {1/z}) prod_{k=1}^t F(X^k; {w})]
///     w^j z^{-i-1} dw dz,
///
/// with |z| = r1 and |w| = r2 ordered r1 < r2 when s > t and r2 < r1
/// otherwise, both inside every level's pole-free window. The ordering
/// is pinned numerically: only this assignment reproduces the
/// enumeration oracle on mixed-level pairs.
#[allow(non_snake_case)]
pub fn kernel_K(
    s: usize,
    i: i64,
    t: usize,
    j: i64,
    spec: &ProcessSpec,
    req: &KernelRequest,
) -> Result<Complex64, KernelError> {
    let m = spec.levels();
    for lvl in [s, t] {
        if lvl < 1 || lvl > m {
            return Err(KernelError::LevelOutOfRange(lvl, m));
        }
    }
    let ordering = if s > t {
        ContourOrdering::ZInner
    } else {
        ContourOrdering::ZOuter
    };
    let a = spec.max_value();
    let (r1, r2) = req.radii.unwrap_or_else(|| default_radii(a, ordering));
    validate_radii(r1, r2, a, ordering)?;
    let grids = two_axis_grids(r1, r2, req.nodes)?;
    let xs: Vec<Vec<Complex64>> = spec.x_levels.iter().map(|v| v.complex_values()).collect();
    let ys: Vec<Vec<Complex64>> = spec.y_levels.iter().map(|v| v.complex_values()).collect();
    let f = move |zs: &[Complex64]| {
        let (z, w) = (zs[0], zs[1]);
        let mut val = Complex64::new(1.0, 0.0);
        for k in t - 1..m {
            val *= cauchy_f(&ys[k], &[w.inv()]);
        }
        for k in 0..s {
            val *= cauchy_f(&xs[k], &[z]);
        }
        for k in s - 1..m {
            val /= cauchy_f(&ys[k], &[z.inv()]);
        }
        for k in 0..t {
            val /= cauchy_f(&xs[k], &[w]);
        }
        val / (z - w) * w.powi(j as i32) * z.powi(-(i as i32) - 1)
    };
    Ok(tensor_quadrature(&f, &grids)?)
}

fn real_determinant(matrix: &[Vec<Complex64>]) -> Result<f64, KernelError> {
    let det = determinant(matrix);
    if det.im.abs() > 1e-8 {
        return Err(KernelError::NotReal(det.im));
    }
    Ok(det.re)
}

/// rho_SM(T) = det [L(t_r, t_c)] over positions T.
pub fn det_correlation_measure(
    t: &[i64],
    x: &Specialization,
    y: &Specialization,
    req: &KernelRequest,
) -> Result<f64, KernelError> {
    let mut matrix = Vec::with_capacity(t.len());
    for &tr in t {
        let mut row = Vec::with_capacity(t.len());
        for &tc in t {
            row.push(kernel_L(tr, tc, x, y, req)?);
        }
        matrix.push(row);
    }
    real_determinant(&matrix)
}

/// rho_S(T) = det [K(a_r, b_r; a_c, b_c)] over (level, position) pairs,
/// each entry with its own (s, t)-ordered contours.
pub fn det_correlation_process(
    t: &[(usize, i64)],
    spec: &ProcessSpec,
    req: &KernelRequest,
) -> Result<f64, KernelError> {
    let mut matrix = Vec::with_capacity(t.len());
    for &(lr, pr) in t {
        let mut row = Vec::with_capacity(t.len());
        for &(lc, pc) in t {
            row.push(kernel_K(lr, pr, lc, pc, spec, req)?);
        }
        matrix.push(row);
    }
    real_determinant(&matrix)
}

/// det [1/(z_a - q_b z_b)] for the current node point; NaN near a pole
/// poisons the quadrature rather than producing a large finite error.
fn cauchy_pair_determinant(zs: &[Complex64], qs: &[Complex64]) -> Complex64 {
    let d = zs.len();
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for (a, &za) in zs.iter().enumerate() {
        for b in 0..d {
            let den = za - qs[b] * zs[b];
            if den.norm() < 1e-12 {
                return Complex64::new(f64::NAN, 0.0);
            }
            matrix[a][b] = den.inv();
        }
    }
    determinant(&matrix)
}

/// det [1/(z_a - q_b z_b)] evaluated both as a determinant and by the
/// closed cross-ratio product; the two agree identically away from the
/// poles z_a = q_b z_b.
pub fn pair_determinant_check(zs: &[Complex64], qs: &[Complex64]) -> (Complex64, Complex64) {
    let det = cauchy_pair_determinant(zs, qs);
    let d = zs.len();
    let mut prod = Complex64::new(1.0, 0.0);
    for a in 0..d {
        prod /= zs[a] - qs[a] * zs[a];
        for b in a + 1..d {
            prod *= (qs[b] * zs[b] - qs[a] * zs[a]) * (zs[b] - zs[a])
                / ((qs[b] * zs[b] - zs[a]) * (zs[b] - qs[a] * zs[a]));
        }
    }
    (det, prod)
}

/// rho_SM(T) as the 2d-fold joint contour integral
///
///   (2 pi i)^{-2d} oint...oint det[1/(z_j - q_k z_k)]
///     prod_j H_{q_j}(X; {z_j}) H_{q_j}(Y; {1/(q_j z_j)}) q_j^{t_j}
///     dq_j dz_j,
///
/// with every z_j on the positively oriented unit circle and every q_j
/// on a positively oriented circle inside ((max Y)^{1/d}, 1). Capped at
/// d <= 2; requires |X| = |Y| = n > max(d, d - min T).
pub fn rho_measure_qz_contour(
    t: &[i64],
    x: &Specialization,
    y: &Specialization,
    nodes: usize,
) -> Result<f64, KernelError> {
    let d = t.len();
    if d == 0 {
        return Ok(1.0);
    }
    if d > MAX_QZ_POINTS {
        return Err(KernelError::TooManyPoints(d));
    }
    let min_t = *t.iter().min().unwrap();
    let need = (d as i64).max(d as i64 - min_t) as usize;
    let n = x.len();
    if y.len() != n || n <= need {
        return Err(KernelError::NotEnoughVariables {
            need,
            nx: n,
            ny: y.len(),
        });
    }
    // the q-integrand is analytic on max Y < |q| < 1 (poles at q = y/z
    // with |z| = 1, and at q -> 1 from the determinant factor), so the
    // aliasing-balanced radius is sqrt(max Y); clamp it just above the
    // window floor (max Y)^{1/d} stated by the representation
    let max_y = y.max_value();
    let rq = if max_y == 0.0 {
        0.5
    } else {
        max_y.sqrt().max(max_y.powf(1.0 / d as f64) * 1.02)
    };
    let z_grid = circle_quadrature(&ContourSpec::new(1.0, 1, nodes)?);
    let q_grid = circle_quadrature(&ContourSpec::new(rq, 1, nodes)?);
    let mut grids = vec![z_grid; d];
    grids.extend(std::iter::repeat_n(q_grid, d));
    let xc = x.complex_values();
    let yc = y.complex_values();
    let t = t.to_vec();
    let f = move |vars: &[Complex64]| {
        let (zs, qs) = vars.split_at(t.len());
        let mut val = cauchy_pair_determinant(zs, qs);
        for ((&z, &q), &tj) in zs.iter().zip(qs).zip(&t) {
            let hx = match h_q(&xc, &[z], q) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            let hy = match h_q(&yc, &[(q * z).inv()], q) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            val *= hx * hy * q.powi(tj as i32);
        }
        val
    };
    Ok(tensor_quadrature(&f, &grids)?.re)
}

/// Decreasing z-radii r_1 > ... > r_m > 1 and q-radii s_1..s_m < 1 with
/// r_i s_i > r_(i+1), all inside the per-level pole-free windows.
fn process_radius_chain(spec: &ProcessSpec, d: usize) -> Result<(Vec<f64>, Vec<f64>), KernelError> {
    let m = spec.levels();
    let a = spec.max_value();
    let u = if a <= 0.0 { 10.0 } else { 1.0 / a };
    if u <= 1.0 {
        return Err(KernelError::RadiusChainInfeasible);
    }
    let rs: Vec<f64> = (1..=m)
        .map(|i| u.powf((m + 1 - i) as f64 / (m + 1) as f64))
        .collect();
    let mut s_lo = spec.max_y().powf(1.0 / (d * m * m) as f64);
    if m > 1 {
        // the chain constraint r_i s_i > r_(i+1) with the geometric r_i
        s_lo = s_lo.max(u.powf(-1.0 / (m + 1) as f64));
    }
    if s_lo >= 1.0 {
        return Err(KernelError::RadiusChainInfeasible);
    }
    // stay barely above the window floor: the Cauchy factor 1/(z - qz)
    // has a pole at q = 1, so the aliasing error grows like s^M and the
    // q-circles should sit as low as the window allows
    let s = if s_lo == 0.0 { 0.5 } else { s_lo.powf(0.85) };
    Ok((rs, vec![s; m]))
}

/// rho_S(T) as the 2d-fold joint contour integral of
///
///   det[1/(z_a - q_b z_b)]
///   prod_a [prod_{h <= lvl(a)} H_{q_a}(X^h; {z_a})]
///          [prod_{h >= lvl(a)} H_{q_a}(Y^h; {1/(q_a z_a)})] q_a^{t_a}
///
/// over lexicographically ordered points, z_a on the positively oriented
/// circle of radius r_{lvl(a)} and q_a on the positively oriented circle
/// of radius s_{lvl(a)} from `process_radius_chain`. Capped at d <= 2.
pub fn rho_process_qz_contour(
    t: &[(usize, i64)],
    spec: &ProcessSpec,
    nodes: usize,
) -> Result<f64, KernelError> {
    let d = t.len();
    if d == 0 {
        return Ok(1.0);
    }
    if d > MAX_QZ_POINTS {
        return Err(KernelError::TooManyPoints(d));
    }
    let m = spec.levels();
    for &(lvl, _) in t {
        if lvl < 1 || lvl > m {
            return Err(KernelError::LevelOutOfRange(lvl, m));
        }
    }
    // same variable-count hypothesis as the measure case, with the
    // deepest slot over all levels driving the requirement
    let min_t = t.iter().map(|&(_, p)| p).min().unwrap();
    let need = (d as i64).max(d as i64 - min_t) as usize;
    let n = spec.x_levels[0].len();
    for s in spec.x_levels.iter().chain(&spec.y_levels) {
        if s.len() != n || n <= need {
            return Err(KernelError::NotEnoughVariables {
                need,
                nx: n,
                ny: s.len(),
            });
        }
    }
    let mut points = t.to_vec();
    points.sort();
    let (rs, ss) = process_radius_chain(spec, d)?;
    let mut grids = Vec::with_capacity(2 * d);
    for &(lvl, _) in &points {
        grids.push(circle_quadrature(&ContourSpec::new(rs[lvl - 1], 1, nodes)?));
    }
    for &(lvl, _) in &points {
        grids.push(circle_quadrature(&ContourSpec::new(ss[lvl - 1], 1, nodes)?));
    }
    let xs: Vec<Vec<Complex64>> = spec.x_levels.iter().map(|v| v.complex_values()).collect();
    let ys: Vec<Vec<Complex64>> = spec.y_levels.iter().map(|v| v.complex_values()).collect();
    let f = move |vars: &[Complex64]| {
        let (zs, qs) = vars.split_at(points.len());
        let mut val = cauchy_pair_determinant(zs, qs);
        for ((&z, &q), &(lvl, tj)) in zs.iter().zip(qs).zip(&points) {
            for xh in &xs[..lvl] {
                val *= match h_q(xh, &[z], q) {
                    Ok(v) => v,
                    Err(_) => return Complex64::new(f64::NAN, 0.0),
                };
            }
            for yh in &ys[lvl - 1..] {
                val *= match h_q(yh, &[(q * z).inv()], q) {
                    Ok(v) => v,
                    Err(_) => return Complex64::new(f64::NAN, 0.0),
                };
            }
            val *= q.powi(tj as i32);
        }
        val
    };
    Ok(tensor_quadrature(&f, &grids)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{rho_measure_bruteforce, rho_process_bruteforce};

    #[test]
    fn default_radii_examples() {
        let (r1, r2) = default_radii(0.5, ContourOrdering::ZOuter);
        assert!((r2 - 0.5 * 4.0f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((r1 - 0.5 * 4.0f64.powf(2.0 / 3.0)).abs() < 1e-12);
        let (s1, s2) = default_radii(0.5, ContourOrdering::ZInner);
        assert_eq!((s1, s2), (r2, r1));
        // all-empty clamp
        let (c1, c2) = default_radii(0.0, ContourOrdering::ZOuter);
        assert!((c2 - 100.0f64.powf(1.0 / 3.0) / 10.0 * 10.0f64.powf(0.0)).abs() < 1.0);
        assert!((c1 - 0.1 * 100.0f64.powf(2.0 / 3.0)).abs() < 1e-10);
        assert!((c2 - 0.1 * 100.0f64.powf(1.0 / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn empty_spec_kernel_is_a_step_projection() {
        let e = Specialization::empty();
        let req = KernelRequest::with_nodes(64);
        for i in -3..=2i64 {
            for j in -3..=2i64 {
                let v = kernel_L(i, j, &e, &e, &req).unwrap();
                let expect = if i == j && i <= -1 { 1.0 } else { 0.0 };
                assert!(
                    (v - Complex64::new(expect, 0.0)).norm() < 1e-12,
                    "L({i},{j}) = {v}"
                );
            }
        }
    }

    #[test]
    fn kernel_matches_measure_oracle_single_points() {
        let x = Specialization::of(&[0.5]);
        let req = KernelRequest::with_nodes(128);
        for t in [-3i64, -1, 0, 1, 2] {
            let det = det_correlation_measure(&[t], &x, &x, &req).unwrap();
            let oracle = rho_measure_bruteforce(&[t], &x, &x, 60);
            assert!(
                (det - oracle.value).abs() < 1e-8 + oracle.tail_bound,
                "t = {t}: det {det} vs oracle {}",
                oracle.value
            );
        }
    }

    #[test]
    fn process_kernel_reduces_to_measure_kernel() {
        let spec = ProcessSpec::new(
            vec![Specialization::of(&[0.5, 0.2])],
            vec![Specialization::of(&[0.4, 0.1])],
        )
        .unwrap();
        let req = KernelRequest::with_nodes(64);
        for (i, j) in [(0i64, 0i64), (-2, 1), (1, -1)] {
            let k = kernel_K(1, i, 1, j, &spec, &req).unwrap();
            let l = kernel_L(i, j, &spec.x_levels[0], &spec.y_levels[0], &req).unwrap();
            assert!((k - l).norm() < 1e-12);
        }
    }

    #[test]
    fn process_determinant_matches_chain_oracle() {
        let s = Specialization::of(&[0.3]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        let req = KernelRequest::with_nodes(128);
        for t in [
            vec![(1usize, 0i64)],
            vec![(2, -1)],
            vec![(1, 0), (2, -1)],
            vec![(2, 0), (1, -1)],
            vec![(1, 1), (2, 0)],
            vec![(1, 0), (2, 0)],
            vec![(2, -2), (1, -1)],
        ] {
            let det = det_correlation_process(&t, &spec, &req).unwrap();
            // the rigorous tail bound is far looser than the actual
            // truncation error here (the N = 14 normalization residual
            // is ~1e-15), so compare with a flat tolerance
            let oracle = rho_process_bruteforce(&t, &spec, 16).unwrap();
            assert!(
                (det - oracle.value).abs() < 1e-6,
                "T = {t:?}: det {det} vs oracle {}",
                oracle.value
            );
        }
    }

    #[test]
    fn determinant_basics() {
        let x = Specialization::of(&[0.5]);
        let req = KernelRequest::with_nodes(64);
        assert_eq!(det_correlation_measure(&[], &x, &x, &req).unwrap(), 1.0);
        let dup = det_correlation_measure(&[0, 0], &x, &x, &req).unwrap();
        assert!(dup.abs() < 1e-10);
        let e = Specialization::empty();
        let v = det_correlation_measure(&[-1], &e, &e, &req).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn radius_window_enforced() {
        let x = Specialization::of(&[0.5]);
        let bad = KernelRequest {
            radii: Some((0.3, 0.6)),
            nodes: 64,
        };
        assert!(matches!(
            kernel_L(0, 0, &x, &x, &bad),
            Err(KernelError::RadiusWindow { .. })
        ));
        let misordered = KernelRequest {
            radii: Some((0.8, 1.2)),
            nodes: 64,
        };
        assert!(matches!(
            kernel_L(0, 0, &x, &x, &misordered),
            Err(KernelError::RadiusWindow { .. })
        ));
    }

    #[test]
    fn qz_contour_matches_measure_oracle() {
        // n = 3 clears the variable-count hypothesis for t = -1
        let x = Specialization::of(&[0.5, 0.4, 0.3]);
        for t in [0i64, -1, 1] {
            let v = rho_measure_qz_contour(&[t], &x, &x, 64).unwrap();
            let oracle = rho_measure_bruteforce(&[t], &x, &x, 40);
            assert!(
                (v - oracle.value).abs() < 1e-6,
                "t = {t}: contour {v} vs oracle {}",
                oracle.value
            );
        }
        // a pair of slots exercises the 4-fold grid and the determinant
        let v2 = rho_measure_qz_contour(&[0, 1], &x, &x, 64).unwrap();
        let o2 = rho_measure_bruteforce(&[0, 1], &x, &x, 40);
        assert!((v2 - o2.value).abs() < 1e-6, "pair: {v2} vs {}", o2.value);
    }

    #[test]
    fn qz_contour_variable_count_hypothesis() {
        // slots below -n live outside the truncated observable window,
        // so the variable-count hypothesis must reject them
        let x = Specialization::of(&[0.5, 0.4]);
        assert!(matches!(
            rho_measure_qz_contour(&[-4], &x, &x, 16),
            Err(KernelError::NotEnoughVariables { need: 5, .. })
        ));
        assert!(matches!(
            rho_measure_qz_contour(&[0, 1, 2], &x, &x, 16),
            Err(KernelError::TooManyPoints(3))
        ));
        // a positive slot inside the window still matches the oracle
        let v = rho_measure_qz_contour(&[1], &x, &x, 64).unwrap();
        let oracle = rho_measure_bruteforce(&[1], &x, &x, 40);
        assert!((v - oracle.value).abs() < 1e-6);
    }

    #[test]
    fn qz_contour_process_reduces_to_measure() {
        let spec = ProcessSpec::new(
            vec![Specialization::of(&[0.5, 0.4, 0.3])],
            vec![Specialization::of(&[0.5, 0.4, 0.3])],
        )
        .unwrap();
        for t in [0i64, -1] {
            let p = rho_process_qz_contour(&[(1, t)], &spec, 64).unwrap();
            let m = rho_measure_qz_contour(&[t], &spec.x_levels[0], &spec.y_levels[0], 64).unwrap();
            assert!((p - m).abs() < 1e-6, "t = {t}: process {p} vs measure {m}");
        }
    }

    #[test]
    fn qz_contour_process_two_levels() {
        let s = Specialization::of(&[0.3, 0.2]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        for t in [vec![(2usize, 0i64)], vec![(1, 0)]] {
            let v = rho_process_qz_contour(&t, &spec, 64).unwrap();
            let oracle = rho_process_bruteforce(&t, &spec, 16).unwrap();
            assert!(
                (v - oracle.value).abs() < 1e-5,
                "T = {t:?}: contour {v} vs oracle {}",
                oracle.value
            );
        }
        // a slot below the truncated observable window is rejected
        assert!(matches!(
            rho_process_qz_contour(&[(1, -2)], &spec, 16),
            Err(KernelError::NotEnoughVariables { need: 3, .. })
        ));
    }

    #[test]
    fn pair_determinant_equals_cross_ratio_product() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let d = rng.gen_range(1..=3usize);
            let zs: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let qs: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.gen_range(0.2..0.9), rng.gen_range(-0.3..0.3)))
                .collect();
            let (det, prod) = pair_determinant_check(&zs, &qs);
            if !det.is_finite() {
                continue;
            }
            let scale = det.norm().max(prod.norm()).max(1.0);
            assert!(
                (det - prod).norm() / scale < 1e-10,
                "det {det} vs product {prod}"
            );
        }
    }

    #[test]
    fn kernel_stable_under_radius_perturbation() {
        let x = Specialization::of(&[0.5]);
        let base = kernel_L(0, 0, &x, &x, &KernelRequest::with_nodes(128)).unwrap();
        let (r1, r2) = default_radii(0.5, ContourOrdering::ZOuter);
        for f in [0.9, 1.1] {
            let req = KernelRequest {
                radii: Some((r1 * f, r2 * f)),
                nodes: 128,
            };
            let v = kernel_L(0, 0, &x, &x, &req).unwrap();
            assert!((v - base).norm() < 1e-8, "perturbed {v} vs base {base}");
        }
    }
}

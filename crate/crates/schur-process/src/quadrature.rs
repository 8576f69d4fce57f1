//! Trapezoid quadrature on circles, tensor-product contour integration
//! with node doubling, and small complex determinants.
//!
//! Every integral here is normalized per variable as (2*pi*i)^{-1} times
//! the oriented contour integral, so a positively oriented circle around
//! a simple pole of residue 1 evaluates to exactly 1. Multi-variable
//! prefactors such as 1/(2 pi)^{2d} in closed-form references are realized
//! as this per-variable normalization together with explicit contour
//! orientations; the literal real prefactor has the wrong sign for odd
//! numbers of variables.
//!
//! ```
//! use num_complex::Complex64;
//! use schur_process::quadrature::{circle_quadrature, tensor_quadrature, ContourSpec};
//!
//! // (2 pi i)^{-1} oint dz / (z - 0.3) = 1 on any circle enclosing 0.3
//! let grid = circle_quadrature(&ContourSpec::new(1.0, 1, 32).unwrap());
//! let pole = Complex64::new(0.3, 0.0);
//! let v = tensor_quadrature(&|zs| (zs[0] - pole).inv(), &[grid]).unwrap();
//! assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
//! ```

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

/// Default cap on total integrand evaluations in `integrate`.
pub const DEFAULT_EVAL_BUDGET: u64 = 1 << 22;

/// Two distinct nodes closer than this make a Cauchy matrix singular.
pub const CAUCHY_SEP_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("contour radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("node count must be a power of two >= 8, got {0}")]
    BadNodeCount(usize),
    #[error("orientation must be +1 or -1, got {0}")]
    BadOrientation(i8),
    #[error("integrand produced a non-finite value")]
    NonFinite,
    #[error("evaluation budget {budget} exhausted; best estimate {best} with error estimate {est_error}")]
    BudgetExceeded {
        budget: u64,
        best: Complex64,
        est_error: f64,
    },
    #[error("nodes a[{i}] and b[{j}] closer than {CAUCHY_SEP_TOL}")]
    SingularPair { i: usize, j: usize },
}

/// A circle |z| = radius with orientation +1 (counterclockwise) or -1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub radius: f64,
    pub orientation: i8,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(radius: f64, orientation: i8, nodes: usize) -> Result<Self, QuadratureError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(QuadratureError::BadRadius(radius));
        }
        if orientation != 1 && orientation != -1 {
            return Err(QuadratureError::BadOrientation(orientation));
        }
        if nodes < 8 || !nodes.is_power_of_two() {
            return Err(QuadratureError::BadNodeCount(nodes));
        }
        Ok(ContourSpec {
            radius,
            orientation,
            nodes,
        })
    }

    pub fn with_nodes(self, nodes: usize) -> ContourSpec {
        ContourSpec { nodes, ..self }
    }
}

/// Nodes and weights for one contour axis. Weights absorb the
/// (2*pi*i)^{-1} normalization and the orientation sign, so
/// sum w_k f(z_k) approximates (2*pi*i)^{-1} times the oriented integral.
pub type NodeGrid = Vec<(Complex64, Complex64)>;

/// Uniform trapezoid rule on the circle: z_k = radius e^{2 pi i k / M},
/// w_k = orientation * z_k / M. Exact on Laurent monomials z^p with
/// p != -1 mod M; aliases p = -1 mod M to 1.
pub fn circle_quadrature(spec: &ContourSpec) -> NodeGrid {
    circle_quadrature_with_phase(spec, 0.0)
}

/// Same rule with all nodes rotated by a fixed phase (radians). The
/// integral of an analytic integrand is phase-independent, which tests
/// exploit as a consistency check.
pub fn circle_quadrature_with_phase(spec: &ContourSpec, phase: f64) -> NodeGrid {
    let m = spec.nodes;
    let sign = spec.orientation as f64;
    (0..m)
        .map(|k| {
            let theta = phase + std::f64::consts::TAU * k as f64 / m as f64;
            let z = Complex64::from_polar(spec.radius, theta);
            (z, z * (sign / m as f64))
        })
        .collect()
}

/// Union of two circles treated as a single contour axis.
pub fn two_circle_grid(inner: &ContourSpec, outer: &ContourSpec) -> NodeGrid {
    let mut grid = circle_quadrature(inner);
    grid.extend(circle_quadrature(outer));
    grid
}

/// Tensor-product quadrature over per-axis node grids. Deterministic:
/// partial sums are grouped by the first-axis node index and reduced in
/// index order, independent of thread count.
pub fn tensor_quadrature(
    f: &(dyn Fn(&[Complex64]) -> Complex64 + Sync),
    grids: &[NodeGrid],
) -> Result<Complex64, QuadratureError> {
    if grids.is_empty() {
        return Ok(f(&[]));
    }
    let first = &grids[0];
    let rest = &grids[1..];
    let partials: Vec<Complex64> = first
        .par_iter()
        .map(|&(z0, w0)| {
            let mut args = vec![Complex64::zero(); grids.len()];
            args[0] = z0;
            w0 * inner_sum(f, rest, &mut args, 1)
        })
        .collect();
    let mut total = Complex64::zero();
    for p in partials {
        total += p;
    }
    if !total.is_finite() {
        return Err(QuadratureError::NonFinite);
    }
    return Ok(total);

    fn inner_sum(
        f: &(dyn Fn(&[Complex64]) -> Complex64 + Sync),
        rest: &[NodeGrid],
        args: &mut Vec<Complex64>,
        depth: usize,
    ) -> Complex64 {
        let Some((grid, deeper)) = rest.split_first() else {
            return f(args);
        };
        let mut acc = Complex64::zero();
        for &(z, w) in grid {
            args[depth] = z;
            acc += w * inner_sum(f, deeper, args, depth + 1);
        }
        acc
    }
}

/// Adaptive driver: evaluates the tensor rule, doubles every axis's node
/// count until successive values differ by less than `tol`, and reports
/// the final value with the last observed difference as error estimate.
pub fn integrate(
    f: &(dyn Fn(&[Complex64]) -> Complex64 + Sync),
    contours: &[ContourSpec],
    tol: f64,
    budget: u64,
) -> Result<(Complex64, f64), QuadratureError> {
    let mut specs: Vec<ContourSpec> = contours.to_vec();
    let mut spent: u64 = 0;
    let mut prev: Option<Complex64> = None;
    let mut last_diff = f64::INFINITY;
    loop {
        let cost: u64 = specs.iter().map(|s| s.nodes as u64).product();
        if spent + cost > budget {
            return Err(QuadratureError::BudgetExceeded {
                budget,
                best: prev.unwrap_or_else(Complex64::zero),
                est_error: last_diff,
            });
        }
        let grids: Vec<NodeGrid> = specs.iter().map(circle_quadrature).collect();
        let val = tensor_quadrature(f, &grids)?;
        spent += cost;
        if let Some(p) = prev {
            last_diff = (val - p).norm();
            if last_diff < tol {
                return Ok((val, last_diff));
            }
        }
        prev = Some(val);
        for s in &mut specs {
            s.nodes *= 2;
        }
    }
}

/// Determinant of a square complex matrix (row-major) by Gaussian
/// elimination with partial pivoting.
pub fn determinant(matrix: &[Vec<Complex64>]) -> Complex64 {
    let n = matrix.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut a: Vec<Vec<Complex64>> = matrix.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return Complex64::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let s = a[col][k];
                a[row][k] -= factor * s;
            }
        }
    }
    det
}

/// Evaluates det[1/(a_i - b_j)] both directly and by the closed product
/// form prod_k (a_k - b_k)^{-1} prod_{j<k} (a_k - a_j)(b_k - b_j) /
/// ((a_k - b_j)(b_k - a_j)), returning (determinant, product).
pub fn cauchy_determinant_check(
    a: &[Complex64],
    b: &[Complex64],
) -> Result<(Complex64, Complex64), QuadratureError> {
    assert_eq!(a.len(), b.len(), "need equally many a and b nodes");
    let n = a.len();
    for i in 0..n {
        for j in 0..n {
            if (a[i] - b[j]).norm() <= CAUCHY_SEP_TOL {
                return Err(QuadratureError::SingularPair { i, j });
            }
        }
    }
    let matrix: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| (a[i] - b[j]).inv()).collect())
        .collect();
    let det = determinant(&matrix);
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..n {
        prod /= a[k] - b[k];
        for j in 0..k {
            prod *= (a[k] - a[j]) * (b[k] - b[j]) / ((a[k] - b[j]) * (b[k] - a[j]));
        }
    }
    Ok((det, prod))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn contour_spec_validation() {
        assert!(ContourSpec::new(1.0, 1, 8).is_ok());
        assert!(matches!(
            ContourSpec::new(0.0, 1, 8),
            Err(QuadratureError::BadRadius(_))
        ));
        assert!(matches!(
            ContourSpec::new(1.0, 1, 12),
            Err(QuadratureError::BadNodeCount(12))
        ));
        assert!(matches!(
            ContourSpec::new(1.0, 0, 8),
            Err(QuadratureError::BadOrientation(0))
        ));
    }

    #[test]
    fn laurent_monomials_exact() {
        let spec = ContourSpec::new(0.75, 1, 16).unwrap();
        let grid = circle_quadrature(&spec);
        for p in -8i32..8 {
            let sum: Complex64 = grid.iter().map(|&(z, w)| w * z.powi(p)).sum();
            let want = if p == -1 { 1.0 } else { 0.0 };
            assert!(
                (sum - c(want, 0.0)).norm() < 1e-13,
                "monomial p = {p}: got {sum}"
            );
        }
        // aliasing: p = -1 - M maps onto the residue slot
        let sum: Complex64 = grid.iter().map(|&(z, w)| w * z.powi(-17)).sum();
        let scale = 0.75f64.powi(-16); // radius^(p+1) amplification
        assert!((sum - c(scale, 0.0)).norm() < 1e-9 * scale);
    }

    #[test]
    fn orientation_flips_sign() {
        let pos = circle_quadrature(&ContourSpec::new(1.0, 1, 32).unwrap());
        let neg = circle_quadrature(&ContourSpec::new(1.0, -1, 32).unwrap());
        let f = |z: Complex64| (z - c(0.3, 0.2)).inv();
        let a: Complex64 = pos.iter().map(|&(z, w)| w * f(z)).sum();
        let b: Complex64 = neg.iter().map(|&(z, w)| w * f(z)).sum();
        assert!((a - c(1.0, 0.0)).norm() < 1e-12);
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn tensor_rule_two_axes() {
        // (2 pi i)^{-2} oint oint z^{-1} w^{-1} dz dw = 1
        let s1 = ContourSpec::new(1.0, 1, 16).unwrap();
        let s2 = ContourSpec::new(0.5, 1, 16).unwrap();
        let grids = vec![circle_quadrature(&s1), circle_quadrature(&s2)];
        let v = tensor_quadrature(&|zs| (zs[0] * zs[1]).inv(), &grids).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn integrate_doubles_until_tolerance() {
        // residue of 1/(z - a) inside |z| = 1 with a close to the contour,
        // needs refinement beyond the initial 8 nodes
        let a = c(0.83, 0.0);
        let f = move |zs: &[Complex64]| (zs[0] - a).inv();
        let spec = ContourSpec::new(1.0, 1, 8).unwrap();
        let (v, est) = integrate(&f, &[spec], 1e-10, DEFAULT_EVAL_BUDGET).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-9);
        assert!(est < 1e-10);
    }

    #[test]
    fn integrate_reports_budget_exhaustion() {
        // pole nearly on the contour defeats any budget this small
        let a = c(0.999_999, 0.0);
        let f = move |zs: &[Complex64]| (zs[0] - a).inv();
        let spec = ContourSpec::new(1.0, 1, 8).unwrap();
        match integrate(&f, &[spec], 1e-14, 1 << 10) {
            Err(QuadratureError::BudgetExceeded { budget, .. }) => assert_eq!(budget, 1 << 10),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_rejected() {
        let f = |_: &[Complex64]| c(f64::NAN, 0.0);
        let spec = ContourSpec::new(1.0, 1, 8).unwrap();
        assert!(matches!(
            tensor_quadrature(&f, &[circle_quadrature(&spec)]),
            Err(QuadratureError::NonFinite)
        ));
    }

    #[test]
    fn phase_rotation_invariance() {
        let spec = ContourSpec::new(1.0, 1, 64).unwrap();
        let f = |z: Complex64| (z - c(0.4, 0.1)).inv() * (z + c(0.2, 0.0)).inv();
        let base: Complex64 = circle_quadrature(&spec).iter().map(|&(z, w)| w * f(z)).sum();
        let half_step = std::f64::consts::TAU / 128.0;
        let rot: Complex64 = circle_quadrature_with_phase(&spec, half_step)
            .iter()
            .map(|&(z, w)| w * f(z))
            .sum();
        assert!((base - rot).norm() < 1e-12);
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&[]), c(1.0, 0.0));
        let m = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ];
        assert!((determinant(&m) - c(-2.0, 0.0)).norm() < 1e-14);
        // singular
        let s = vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ];
        assert!(determinant(&s).norm() < 1e-14);
    }

    #[test]
    fn cauchy_determinant_identity() {
        let a = [c(1.3, 0.2), c(-0.4, 1.1), c(2.2, -0.7)];
        let b = [c(0.1, -0.3), c(-1.5, 0.4), c(0.8, 0.9)];
        let (det, prod) = cauchy_determinant_check(&a, &b).unwrap();
        assert!((det - prod).norm() / prod.norm() < 1e-12);
    }

    #[test]
    fn cauchy_determinant_degenerate_a_is_zero() {
        // two equal a's: determinant and product both vanish (no error)
        let a = [c(1.0, 0.5), c(1.0, 0.5)];
        let b = [c(-0.2, 0.0), c(0.3, 0.1)];
        let (det, prod) = cauchy_determinant_check(&a, &b).unwrap();
        assert!(det.norm() < 1e-12);
        assert!(prod.norm() < 1e-12);
    }

    #[test]
    fn cauchy_determinant_singular_pair_rejected() {
        let a = [c(1.0, 0.0)];
        let b = [c(1.0, 1e-14)];
        assert!(matches!(
            cauchy_determinant_check(&a, &b),
            Err(QuadratureError::SingularPair { .. })
        ));
    }
}

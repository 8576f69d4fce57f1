//! Macdonald q-difference operators in the first-order variant that has
//! Schur polynomials as eigenfunctions, their two-circle contour form,
//! and the observable generating function they produce when applied to a
//! Cauchy product.
//!
//! ```
//! use num_complex::Complex64;
//! use schur_process::operators::{apply_tilde_d1, eigenvalue_er};
//! use schur_process::partition::Partition;
//! use schur_process::symfunc::schur;
//!
//! // Schur polynomials are eigenfunctions of the shifted operator
//! let lam = Partition::of(&[2, 1]);
//! let q = Complex64::new(0.6, 0.0);
//! let xs = [Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.0)];
//! let lhs = apply_tilde_d1(q, &|v| schur(&lam, v), &xs).unwrap();
//! let rhs = eigenvalue_er(1, &lam, 2, q).unwrap() * schur(&lam, &xs);
//! assert!((lhs - rhs).norm() < 1e-12);
//! ```

use crate::partition::{enumerate_partitions, partition_count_table, Partition};
use crate::quadrature::{
    circle_quadrature, tensor_quadrature, ContourSpec, NodeGrid, QuadratureError,
};
use crate::symfunc::{cauchy_f, h_q, schur, Specialization, SymFuncError};
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

/// Two variables closer than this make the difference-operator
/// coefficients blow up.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// Cross-ratio denominators closer to zero than this abort a contour
/// evaluation.
pub const CROSS_RATIO_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("the operator needs at least one variable")]
    EmptyVariableSet,
    #[error("variables {i} and {j} coincide to within {COINCIDENCE_TOL}")]
    CoincidentPoints { i: usize, j: usize },
    #[error("parameter q must satisfy 0 < |q| < 1, got |q| = {0}")]
    ParameterOutOfRange(f64),
    #[error("rank r = {r} must lie in [0, n] with n = {n}")]
    RankOutOfRange { r: usize, n: usize },
    #[error("partition length {len} exceeds the variable count {n}")]
    LengthExceedsRank { len: usize, n: usize },
    #[error("need 1 <= r < s, got r = {r}, s = {s}")]
    BadRadiusOrder { r: f64, s: f64 },
    #[error("variable {x} outside the window ({lo}, {hi})")]
    VariableOutsideWindow { x: f64, lo: f64, hi: f64 },
    #[error("a pole of the specialization factor sits on or between the contours at |z| = {0}")]
    PoleInAnnulus(f64),
    #[error("specialization sizes differ: |X| = {nx}, |Y| = {ny}")]
    SizeMismatch { nx: usize, ny: usize },
    #[error("parameter window violated: need max Y = {max_y} < |q|^m = {qpow} < 1")]
    ParameterWindow { max_y: f64, qpow: f64 },
    #[error("cross-ratio denominator vanishes to within {CROSS_RATIO_TOL}")]
    CrossRatioPole,
    #[error("cannot nest the level-{level} contour between the cross-ratio poles; bring s/r closer to 1")]
    ContourNestingInfeasible { level: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    SymFunc(#[from] SymFuncError),
}

/// A symmetric function presented as an evaluation callback.
pub type SymCallback<'a> = &'a (dyn Fn(&[Complex64]) -> Complex64 + Sync);

/// Applies the first-order shifted difference operator
/// q^{-binom(n,2)} D^{n-1}_{n;q} T_{1/q} to `f` at the point `xs`.
/// Expanding the subset sum over complements of a single index gives
///
///   q^{-(n-1)} sum_j prod_{i != j} (q x_i - x_j)/(x_i - x_j)
///              * f(x_1, ..., x_j / q, ..., x_n).
pub fn apply_tilde_d1(
    q: Complex64,
    f: SymCallback,
    xs: &[Complex64],
) -> Result<Complex64, OperatorError> {
    let n = xs.len();
    if n == 0 {
        return Err(OperatorError::EmptyVariableSet);
    }
    if q.norm() == 0.0 || q.norm() >= 1.0 {
        return Err(OperatorError::ParameterOutOfRange(q.norm()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (xs[i] - xs[j]).norm() <= COINCIDENCE_TOL {
                return Err(OperatorError::CoincidentPoints { i, j });
            }
        }
    }
    let mut total = Complex64::zero();
    let mut args = xs.to_vec();
    for j in 0..n {
        let mut coef = Complex64::new(1.0, 0.0);
        for i in 0..n {
            if i != j {
                coef *= (q * xs[i] - xs[j]) / (xs[i] - xs[j]);
            }
        }
        args[j] = xs[j] / q;
        total += coef * f(&args);
        args[j] = xs[j];
    }
    Ok(total * q.powi(-(n as i32 - 1)))
}

/// Eigenvalue of the rank-r operator on s_lambda with n variables:
/// e_r(q^{1 - lambda_1 - n}, q^{2 - lambda_2 - n}, ..., q^{-lambda_n}).
pub fn eigenvalue_er(
    r: usize,
    lambda: &Partition,
    n: usize,
    q: Complex64,
) -> Result<Complex64, OperatorError> {
    if r > n {
        return Err(OperatorError::RankOutOfRange { r, n });
    }
    if lambda.length() > n {
        return Err(OperatorError::LengthExceedsRank {
            len: lambda.length(),
            n,
        });
    }
    if q.norm() == 0.0 {
        return Err(OperatorError::ParameterOutOfRange(0.0));
    }
    let vals: Vec<Complex64> = (1..=n)
        .map(|i| q.powi(i as i32 - lambda.part(i) as i32 - n as i32))
        .collect();
    // elementary symmetric polynomial by the product recurrence
    let mut coeffs = vec![Complex64::zero(); r + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for v in vals {
        for k in (1..=r).rev() {
            let lower = coeffs[k - 1];
            coeffs[k] += v * lower;
        }
    }
    Ok(coeffs[r])
}

/// Union-of-two-circles contour axis used by the operator identities:
/// inner circle positively oriented, outer circle negatively oriented.
///
/// The source derivation states the opposite orientations, but a residue
/// computation (and the eigenfunction oracle in the tests) fixes the sign
/// this way: with the one-variable operator acting on the constant
/// function, the only pole between the circles is z = 1/x with residue
/// -q times the operator value, so the annulus must be traversed
/// clockwise overall.
pub fn operator_contour_grid(inner: f64, outer: f64, nodes: usize) -> Result<NodeGrid, OperatorError> {
    let inner_spec = ContourSpec::new(inner, 1, nodes)?;
    let outer_spec = ContourSpec::new(outer, -1, nodes)?;
    let mut grid = circle_quadrature(&inner_spec);
    grid.extend(circle_quadrature(&outer_spec));
    Ok(grid)
}

/// Contour form of q^n D~ G for G(X) = F(X; Y): evaluates
///
///   G(X) * (2 pi i)^{-1} oint q/(z - qz) prod_k (1-q z x_k)/(1-z x_k)
///          * g(1/(qz)) / g(1/z) dz,     g(u) = prod_y (1 - u y)^{-1}
///
/// over the two-circle axis `operator_contour_grid(r, s, nodes)` with
/// 1 <= r < s and every x in (1/s, 1/r).
pub fn apply_tilde_d1_contour(
    q: Complex64,
    x: &Specialization,
    y: &Specialization,
    r: f64,
    s: f64,
    nodes: usize,
) -> Result<Complex64, OperatorError> {
    if x.is_empty() {
        return Err(OperatorError::EmptyVariableSet);
    }
    if q.norm() == 0.0 || q.norm() >= 1.0 {
        return Err(OperatorError::ParameterOutOfRange(q.norm()));
    }
    if !(1.0 <= r && r < s) {
        return Err(OperatorError::BadRadiusOrder { r, s });
    }
    let (lo, hi) = (1.0 / s, 1.0 / r);
    for &xv in x.values() {
        if !(lo < xv && xv < hi) {
            return Err(OperatorError::VariableOutsideWindow { x: xv, lo, hi });
        }
    }
    // g(1/(qz)) has a pole where |z| = y / |q|; keep it off the annulus
    for &yv in y.values() {
        let loc = yv / q.norm();
        if r * (1.0 - 1e-9) <= loc && loc <= s * (1.0 + 1e-9) {
            return Err(OperatorError::PoleInAnnulus(loc));
        }
    }
    let xc = x.complex_values();
    let yc = y.complex_values();
    let g = |u: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for yv in &yc {
            acc /= Complex64::new(1.0, 0.0) - u * yv;
        }
        acc
    };
    let grid = operator_contour_grid(r, s, nodes)?;
    let integrand = move |zs: &[Complex64]| -> Complex64 {
        let z = zs[0];
        let mut val = q / (z - z * q);
        for xv in &xc {
            val *= (Complex64::new(1.0, 0.0) - q * z * xv)
                / (Complex64::new(1.0, 0.0) - z * xv);
        }
        val * g((q * z).inv()) / g(z.inv())
    };
    let integral = tensor_quadrature(&integrand, &[grid])?;
    let gx = cauchy_f(&x.complex_values(), &y.complex_values());
    Ok(gx * integral)
}

/// Per-level observable factor sum_{j=1}^{cap} q^{j - lambda_j}; with
/// `cap = None` the sum runs to infinity (geometric past the last part).
pub fn q_observable(q: Complex64, lambda: &Partition, cap: Option<usize>) -> Complex64 {
    let ell = lambda.length();
    let mut acc = Complex64::zero();
    let head = match cap {
        Some(c) => ell.min(c),
        None => ell,
    };
    for j in 1..=head {
        acc += q.powi(j as i32 - lambda.part(j) as i32);
    }
    // parts beyond the length vanish: plain geometric sum of q^j
    match cap {
        Some(c) => {
            for j in ell + 1..=c {
                acc += q.powi(j as i32);
            }
        }
        None => {
            let one = Complex64::new(1.0, 0.0);
            acc += q.powi(ell as i32 + 1) / (one - q);
        }
    }
    acc
}

/// Truncated series value of the generating function together with a
/// bound on the dropped tail.
#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// C(X; Y; Q) as a normalized series over partitions:
/// F(X;Y)^{-1} sum_lambda s_lambda(X) s_lambda(Y)
/// prod_i sum_{j=1}^n q_i^{j - lambda_j}, truncated at |lambda| <= max_size.
pub fn c_series(
    x: &Specialization,
    y: &Specialization,
    qs: &[Complex64],
    max_size: u32,
) -> Result<SeriesValue, OperatorError> {
    let n = x.len();
    if n == 0 {
        return Err(OperatorError::EmptyVariableSet);
    }
    if y.len() != n {
        return Err(OperatorError::SizeMismatch {
            nx: n,
            ny: y.len(),
        });
    }
    let m = qs.len() as i32;
    for q in qs {
        let qpow = q.norm().powi(m);
        if !(y.max_value() < qpow && qpow < 1.0) {
            return Err(OperatorError::ParameterWindow {
                max_y: y.max_value(),
                qpow,
            });
        }
    }
    let f = cauchy_f(x.values(), y.values());
    let mut sum = Complex64::zero();
    for lam in enumerate_partitions(max_size, Some(n)) {
        let weight = schur(&lam, x.values()) * schur(&lam, y.values());
        if weight == 0.0 {
            continue;
        }
        let mut obs = Complex64::new(weight, 0.0);
        for &q in qs {
            obs *= q_observable(q, &lam, Some(n));
        }
        sum += obs;
    }
    let tail = c_series_tail_bound(x, y, qs, max_size, f);
    Ok(SeriesValue {
        value: sum / f,
        tail_bound: tail,
    })
}

/// Geometric bound on the series tail past `max_size`: each degree-j term
/// is at most count(j) (j+1)^{2 n^2} (max X max Y)^j prod_i n |q_i|^{1-j},
/// and the window guarantees the resulting ratio is below one.
fn c_series_tail_bound(
    x: &Specialization,
    y: &Specialization,
    qs: &[Complex64],
    max_size: u32,
    f: f64,
) -> f64 {
    let n = x.len();
    let qprod: f64 = qs.iter().map(|q| q.norm()).product();
    let ratio = x.max_value() * y.max_value() / qprod;
    if ratio == 0.0 {
        return 0.0;
    }
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let scale: f64 = qs.iter().map(|q| n as f64 * q.norm()).product::<f64>() / f;
    let horizon = max_size as usize + 600;
    let counts = partition_count_table(Some(n), horizon);
    let poly = 2 * (n as i32) * (n as i32);
    let mut acc = 0.0;
    let mut prev_term = f64::INFINITY;
    let mut last_ratio: f64 = 0.0;
    for j in max_size as usize + 1..=horizon {
        let term = counts[j] * ((j + 1) as f64).powi(poly) * ratio.powi(j as i32);
        if prev_term.is_finite() && prev_term > 0.0 {
            last_ratio = term / prev_term;
        }
        acc += term;
        prev_term = term;
        if term < 1e-300 {
            break;
        }
    }
    if last_ratio >= 1.0 {
        return f64::INFINITY;
    }
    scale * (acc + prev_term * last_ratio / (1.0 - last_ratio))
}

/// Per-variable two-circle annuli for the m-fold operator contour.
///
/// The last variable keeps (r, s). For every j < k the annulus of z_j
/// must strictly enclose |q_k| times the annulus of z_k: the residue at
/// the cross-ratio pole z_j = q_k z_k is what collapses the m-fold
/// integral to the single-operator identity with parameter q_j q_k, so
/// losing it to the inner circle zeroes the integral. At the same time
/// the reflected poles z_j = z_k / q_j must stay outside, which forces
///
///   |q_j q_k| s_k < r_k    for all j < k.
///
/// A statement of the identity with one common annulus for all
/// variables cannot satisfy both constraints once m >= 2.
pub fn nested_annuli(
    qs: &[Complex64],
    r: f64,
    s: f64,
    x: &Specialization,
) -> Result<Vec<(f64, f64)>, OperatorError> {
    let m = qs.len();
    let mut bands = vec![(r, s); m];
    let min_x_inv = x
        .values()
        .iter()
        .filter(|&&v| v > 0.0)
        .fold(f64::INFINITY, |a, &v| a.min(1.0 / v));
    for j in (0..m.saturating_sub(1)).rev() {
        let qj = qs[j].norm();
        let mut hi: f64 = 0.0;
        let mut lo = f64::INFINITY;
        let mut cap = f64::INFINITY;
        for k in j + 1..m {
            let qk = qs[k].norm();
            hi = hi.max(qk * bands[k].1);
            lo = lo.min(qk * bands[k].0);
            cap = cap.min(bands[k].0 / qj);
        }
        if cap <= hi * (1.0 + 1e-9) {
            return Err(OperatorError::ContourNestingInfeasible { level: j + 1 });
        }
        // keep the x-poles above the band too when the geometry allows it
        if min_x_inv > hi * (1.0 + 1e-9) {
            cap = cap.min(min_x_inv);
        }
        let sj = (hi * cap).sqrt();
        let rj = lo * hi / sj;
        bands[j] = (rj, sj);
    }
    Ok(bands)
}

/// Contour form of C(X; Y; Q): an m-fold integral over the nested
/// two-circle axes of `nested_annuli` (the last variable on radii r, s,
/// oriented as in `operator_contour_grid`) of
///
///   prod_j q_j/(z_j - q_j z_j)
///   prod_{j<k} (q_k z_k - q_j z_j)(z_k - z_j)
///              / ((z_k - q_j z_j)(q_k z_k - z_j))
///   prod_j H_{q_j}(X; {z_j}) H_{q_j}(Y; {1/(q_j z_j)}).
pub fn c_contour(
    x: &Specialization,
    y: &Specialization,
    qs: &[Complex64],
    r: f64,
    s: f64,
    nodes: usize,
) -> Result<Complex64, OperatorError> {
    let n = x.len();
    if n == 0 {
        return Err(OperatorError::EmptyVariableSet);
    }
    if y.len() != n {
        return Err(OperatorError::SizeMismatch {
            nx: n,
            ny: y.len(),
        });
    }
    if !(1.0 <= r && r < s) {
        return Err(OperatorError::BadRadiusOrder { r, s });
    }
    let (lo, hi) = (1.0 / s, 1.0 / r);
    for &xv in x.values() {
        if !(lo < xv && xv < hi) {
            return Err(OperatorError::VariableOutsideWindow { x: xv, lo, hi });
        }
    }
    let m = qs.len() as i32;
    for q in qs {
        if q.norm() == 0.0 || q.norm() >= 1.0 {
            return Err(OperatorError::ParameterOutOfRange(q.norm()));
        }
        let qpow = q.norm().powi(m);
        if !(y.max_value() < qpow && qpow < 1.0) {
            return Err(OperatorError::ParameterWindow {
                max_y: y.max_value(),
                qpow,
            });
        }
    }
    let bands = nested_annuli(qs, r, s, x)?;
    let mut grids: Vec<NodeGrid> = Vec::with_capacity(qs.len());
    for (&(rj, sj), q) in bands.iter().zip(qs) {
        // poles of H_{q_j}(Y; {1/(q_j z_j)}) at z_j = y / q_j must stay
        // inside the inner circle, and x-poles off both circles
        for &yv in y.values() {
            let loc = yv / q.norm();
            if rj * (1.0 - 1e-9) <= loc {
                return Err(OperatorError::PoleInAnnulus(loc));
            }
        }
        for &xv in x.values() {
            if xv > 0.0 {
                let loc = 1.0 / xv;
                if (loc / rj - 1.0).abs() < 1e-6 || (loc / sj - 1.0).abs() < 1e-6 {
                    return Err(OperatorError::PoleInAnnulus(loc));
                }
            }
        }
        grids.push(operator_contour_grid(rj, sj, nodes)?);
    }
    let qs = qs.to_vec();
    let xc = x.complex_values();
    let yc = y.complex_values();
    let one = Complex64::new(1.0, 0.0);
    let integrand = move |zs: &[Complex64]| -> Complex64 {
        let mut val = one;
        for (j, (&z, &q)) in zs.iter().zip(&qs).enumerate() {
            val *= q / (z - q * z);
            for (&zk, &qk) in zs.iter().zip(qs.iter()).skip(j + 1) {
                let d1 = zk - q * z;
                let d2 = qk * zk - z;
                if d1.norm() <= CROSS_RATIO_TOL || d2.norm() <= CROSS_RATIO_TOL {
                    return Complex64::new(f64::NAN, 0.0);
                }
                val *= (qk * zk - q * z) * (zk - z) / (d1 * d2);
            }
            let hx = match h_q(&xc, &[z], q) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            let hy = match h_q(&yc, &[(q * z).inv()], q) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            val *= hx * hy;
        }
        val
    };
    Ok(tensor_quadrature(&integrand, &grids)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_variable_action_is_rescaling() {
        // n = 1: the operator reduces to f(x/q)
        let f = |xs: &[Complex64]| xs[0] * xs[0];
        let v = apply_tilde_d1(c(0.5, 0.0), &f, &[c(0.3, 0.0)]).unwrap();
        assert!((v - c(0.36, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coincident_points_rejected() {
        let f = |_: &[Complex64]| Complex64::zero();
        assert!(matches!(
            apply_tilde_d1(c(0.5, 0.0), &f, &[c(0.3, 0.0), c(0.3, 0.0)]),
            Err(OperatorError::CoincidentPoints { .. })
        ));
        assert!(matches!(
            apply_tilde_d1(c(0.5, 0.0), &f, &[]),
            Err(OperatorError::EmptyVariableSet)
        ));
    }

    #[test]
    fn schur_polynomials_are_eigenfunctions() {
        let xs = [c(0.21, 0.0), c(0.47, 0.0), c(0.66, 0.0)];
        for q in [c(0.3, 0.0), c(0.8, 0.0), c(0.5, 0.2)] {
            for n in 1..=3usize {
                for lam in enumerate_partitions(4, Some(n)) {
                    let lam2 = lam.clone();
                    let f = move |args: &[Complex64]| schur(&lam2, args);
                    let lhs = apply_tilde_d1(q, &f, &xs[..n]).unwrap();
                    let ev = eigenvalue_er(1, &lam, n, q).unwrap();
                    let rhs = ev * schur(&lam, &xs[..n]);
                    let scale = rhs.norm().max(1.0);
                    assert!(
                        (lhs - rhs).norm() / scale < 1e-12,
                        "eigen relation failed at lam={lam}, n={n}, q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        // e_1(q^{-2}, q^0) for lambda = (1), n = 2
        let q = c(0.37, 0.0);
        let v = eigenvalue_er(1, &Partition::of(&[1]), 2, q).unwrap();
        assert!((v - (q.powi(-2) + c(1.0, 0.0))).norm() < 1e-14);
        // e_0 = 1
        let v0 = eigenvalue_er(0, &Partition::empty(), 3, q).unwrap();
        assert!((v0 - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            eigenvalue_er(3, &Partition::empty(), 2, q),
            Err(OperatorError::RankOutOfRange { .. })
        ));
        assert!(matches!(
            eigenvalue_er(1, &Partition::of(&[1, 1, 1]), 2, q),
            Err(OperatorError::LengthExceedsRank { .. })
        ));
    }

    #[test]
    fn contour_matches_direct_operator() {
        // q^n (operator applied to F(.;Y)) against the two-circle form
        let x = Specialization::of(&[0.5]);
        let y = Specialization::of(&[0.5]);
        let q = c(0.45, 0.0);
        let yc = y.complex_values();
        let g = move |args: &[Complex64]| {
            let mut acc = c(1.0, 0.0);
            for a in args {
                for yv in &yc {
                    acc /= c(1.0, 0.0) - a * yv;
                }
            }
            acc
        };
        let direct = q * apply_tilde_d1(q, &g, &x.complex_values()).unwrap();
        let contour = apply_tilde_d1_contour(q, &x, &y, 1.4, 2.8, 256).unwrap();
        assert!(
            (direct - contour).norm() < 1e-10,
            "direct {direct} vs contour {contour}"
        );
    }

    #[test]
    fn contour_matches_direct_operator_two_variables() {
        let x = Specialization::of(&[0.52, 0.61]);
        let y = Specialization::of(&[0.45]);
        let q = c(0.35, 0.0);
        let yc = y.complex_values();
        let g = move |args: &[Complex64]| {
            let mut acc = c(1.0, 0.0);
            for a in args {
                for yv in &yc {
                    acc /= c(1.0, 0.0) - a * yv;
                }
            }
            acc
        };
        let direct = q * q * apply_tilde_d1(q, &g, &x.complex_values()).unwrap();
        // x in (1/s, 1/r) = (1/2.4, 1/1.45); pole of g(1/(qz)) at
        // 0.45/0.35 = 1.286 < 1.45
        let contour = apply_tilde_d1_contour(q, &x, &y, 1.45, 2.4, 256).unwrap();
        assert!(
            (direct - contour).norm() < 1e-9,
            "direct {direct} vs contour {contour}"
        );
    }

    #[test]
    fn contour_window_validation() {
        let x = Specialization::of(&[0.5]);
        let y = Specialization::empty();
        let q = c(0.4, 0.0);
        assert!(matches!(
            apply_tilde_d1_contour(q, &x, &y, 2.2, 1.5, 64),
            Err(OperatorError::BadRadiusOrder { .. })
        ));
        // x = 0.5 not inside (1/1.1, 1/1.05)
        assert!(matches!(
            apply_tilde_d1_contour(q, &x, &y, 1.05, 1.1, 64),
            Err(OperatorError::VariableOutsideWindow { .. })
        ));
        // pole of the Y-factor lands between the circles
        let y2 = Specialization::of(&[0.7]);
        assert!(matches!(
            apply_tilde_d1_contour(q, &x, &y2, 1.5, 2.2, 64),
            Err(OperatorError::PoleInAnnulus(_))
        ));
    }

    #[test]
    fn q_observable_closed_forms() {
        let q = c(0.6, 0.0);
        // empty partition, cap n: q + q^2 + ... + q^n
        let v = q_observable(q, &Partition::empty(), Some(3));
        assert!((v - (q + q.powi(2) + q.powi(3))).norm() < 1e-15);
        // infinite cap: geometric
        let vinf = q_observable(q, &Partition::empty(), None);
        assert!((vinf - q / (c(1.0, 0.0) - q)).norm() < 1e-15);
        // lambda = (2), cap 2: q^{1-2} + q^2
        let v2 = q_observable(q, &Partition::of(&[2]), Some(2));
        assert!((v2 - (q.powi(-1) + q.powi(2))).norm() < 1e-15);
        // infinite cap agrees with a long finite cap
        let lam = Partition::of(&[3, 1]);
        let a = q_observable(q, &lam, None);
        let b = q_observable(q, &lam, Some(200));
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn series_degenerate_case() {
        // X = Y = {0}: only the empty partition survives, C = prod q_i
        let x = Specialization::of(&[0.0]);
        let qs = [c(0.7, 0.0), c(0.8, 0.0)];
        let v = c_series(&x, &x, &qs, 10).unwrap();
        assert!((v.value - qs[0] * qs[1]).norm() < 1e-15);
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn series_window_enforced() {
        let x = Specialization::of(&[0.5]);
        // |q|^2 = 0.49 < 0.5 = max Y
        assert!(matches!(
            c_series(&x, &x, &[c(0.7, 0.0), c(0.7, 0.0)], 10),
            Err(OperatorError::ParameterWindow { .. })
        ));
    }

    #[test]
    fn series_tail_bound_dominates_truncation() {
        let x = Specialization::of(&[0.5]);
        let qs = [c(0.9, 0.0)];
        let coarse = c_series(&x, &x, &qs, 30).unwrap();
        let fine = c_series(&x, &x, &qs, 120).unwrap();
        let actual = (fine.value - coarse.value).norm();
        assert!(coarse.tail_bound.is_finite());
        assert!(
            actual <= coarse.tail_bound,
            "tail {actual} exceeds bound {}",
            coarse.tail_bound
        );
    }

    #[test]
    fn contour_matches_series_one_operator() {
        let x = Specialization::of(&[0.5]);
        let qs = [c(0.9, 0.0)];
        let series = c_series(&x, &x, &qs, 80).unwrap().value;
        let contour = c_contour(&x, &x, &qs, 1.3, 2.6, 256).unwrap();
        assert!(
            (series - contour).norm() < 1e-8,
            "series {series} vs contour {contour}"
        );
    }

    #[test]
    fn contour_matches_series_two_operators() {
        let x = Specialization::of(&[0.5]);
        let qs = [c(0.9, 0.0), c(0.85, 0.0)];
        let series = c_series(&x, &x, &qs, 80).unwrap().value;
        // the outer band must be thin enough to nest: |q_1 q_2| s < r
        let contour = c_contour(&x, &x, &qs, 1.85, 2.16, 512).unwrap();
        assert!(
            (series - contour).norm() < 1e-7,
            "series {series} vs contour {contour}"
        );
        assert!(matches!(
            c_contour(&x, &x, &qs, 1.3, 2.6, 64),
            Err(OperatorError::ContourNestingInfeasible { level: 1 })
        ));
    }

    #[test]
    fn operator_identity_on_cauchy_series() {
        // prod_j q_j^n D~ F(X;Y) = sum_lambda s s prod_i q_obs, checked
        // through eigenvalues: apply the operator to a truncated Cauchy
        // sum term by term.
        let x = Specialization::of(&[0.4, 0.2]);
        let y = Specialization::of(&[0.3, 0.25]);
        let q = c(0.8, 0.0);
        let n = 2;
        let mut series = Complex64::zero();
        for lam in enumerate_partitions(40, Some(n)) {
            let w = schur(&lam, x.values()) * schur(&lam, y.values());
            series += c(w, 0.0) * q_observable(q, &lam, Some(n));
        }
        // same sum via the eigenvalue: q^n e_1(...) must equal the
        // observable factor for every lambda
        for lam in enumerate_partitions(6, Some(n)) {
            let ev = eigenvalue_er(1, &lam, n, q).unwrap();
            let obs = q_observable(q, &lam, Some(n));
            assert!(
                (q.powi(n as i32) * ev - obs).norm() < 1e-13,
                "observable mismatch at {lam}"
            );
        }
        // and the operator side reproduces the series on the truncated sum
        let xc = x.complex_values();
        let yv = y.clone();
        let g = move |args: &[Complex64]| {
            let mut acc = Complex64::zero();
            for lam in enumerate_partitions(40, Some(2)) {
                let sy = schur(&lam, yv.values());
                if sy == 0.0 {
                    continue;
                }
                acc += schur(&lam, args) * c(sy, 0.0);
            }
            acc
        };
        let direct = q * q * apply_tilde_d1(q, &g, &xc).unwrap();
        assert!((direct - series).norm() < 1e-10);
    }
}

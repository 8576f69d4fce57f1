//! Schur and skew Schur polynomials, Cauchy products, and the truncated
//! power-sum scalar product, generic over exact rational or floating
//! coefficient rings.
//!
//! ```
//! use schur_process::partition::Partition;
//! use schur_process::symfunc::{cauchy_f, schur, skew_schur, Specialization};
//!
//! let x = Specialization::of(&[0.5, 0.25]);
//! // s_(2,1)(a, b) = a^2 b + a b^2
//! let v: f64 = schur(&Partition::of(&[2, 1]), x.values());
//! assert!((v - 0.09375).abs() < 1e-15);
//!
//! // s_(2)/(1)(a, b) = a + b
//! let w: f64 = skew_schur(&Partition::of(&[2]), &Partition::of(&[1]), x.values());
//! assert!((w - 0.75).abs() < 1e-15);
//!
//! // F(X; Y) = prod_{i,j} 1/(1 - x_i y_j)
//! let f: f64 = cauchy_f(x.values(), &[0.5]);
//! assert!((f - 1.0 / (0.75 * 0.875)).abs() < 1e-15);
//! ```

use crate::partition::{
    horizontal_strip_extensions, partitions_of, sub_partitions, Partition,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::ops::{Div, Neg, Sub};
use thiserror::Error;

/// Distance below which a Cauchy factor 1 - x*y counts as a pole.
pub const POLE_TOL: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum SymFuncError {
    #[error("specialization values must lie in [0, 1), got {0}")]
    ValueOutOfRange(f64),
    #[error("Cauchy factor 1 - x*y vanishes to within {POLE_TOL}")]
    CauchyPole,
    #[error("Cauchy product requires |x*y| < 1, got {0}")]
    CauchyDivergent(f64),
    #[error("degree cap is {cap} but the expansion needs degree {needed}")]
    DegreeCapExceeded { cap: u32, needed: u32 },
    #[error("degree caps above {0} are not supported")]
    DegreeCapTooLarge(u32),
    #[error("need at least one latent variable, got u = 0")]
    NoLatentVariables,
}

/// Hard ceiling on power-basis expansion degrees.
pub const MAX_EXPANSION_DEGREE: u32 = 8;

/// Coefficient ring for symmetric-function evaluation. Implemented for
/// f64, Complex64 and BigRational; the rational instance keeps every
/// identity in this module exact.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    fn from_integer(n: i64) -> Self;
}

impl Scalar for f64 {
    fn from_integer(n: i64) -> Self {
        n as f64
    }
}

impl Scalar for Complex64 {
    fn from_integer(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Scalar for BigRational {
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

pub fn scalar_pow<T: Scalar>(x: &T, k: u64) -> T {
    let mut acc = T::one();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

/// A nonnegative specialization with values in [0, 1), the domain on
/// which every Cauchy product in this crate converges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Specialization {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Specialization {
    type Error = SymFuncError;
    fn try_from(values: Vec<f64>) -> Result<Self, SymFuncError> {
        Specialization::new(values)
    }
}

impl From<Specialization> for Vec<f64> {
    fn from(s: Specialization) -> Vec<f64> {
        s.values
    }
}

impl Specialization {
    pub fn new(values: Vec<f64>) -> Result<Self, SymFuncError> {
        for &v in &values {
            if !(0.0..1.0).contains(&v) {
                return Err(SymFuncError::ValueOutOfRange(v));
            }
        }
        Ok(Specialization { values })
    }

    /// Shorthand for tests and examples; panics on values outside [0, 1).
    pub fn of(values: &[f64]) -> Self {
        Specialization::new(values.to_vec()).expect("values must lie in [0,1)")
    }

    pub fn empty() -> Self {
        Specialization { values: Vec::new() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest value; zero for the empty specialization.
    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn complex_values(&self) -> Vec<Complex64> {
        self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
    }
}

/// p_k(x_1..x_n) = sum x_i^k, with p_0 = 1 by convention.
pub fn power_sum<T: Scalar>(k: u32, xs: &[T]) -> T {
    if k == 0 {
        return T::one();
    }
    let mut acc = T::zero();
    for x in xs {
        acc = acc + scalar_pow(x, k as u64);
    }
    acc
}

/// Skew Schur polynomial via the horizontal-strip branching rule, one
/// variable at a time. In a single variable s_{lambda/mu}(x) is
/// x^{|lambda|-|mu|} when lambda/mu is a horizontal strip and 0 otherwise;
/// more variables chain this over interlacing sequences.
pub fn skew_schur<T: Scalar>(lambda: &Partition, mu: &Partition, xs: &[T]) -> T {
    if !lambda.contains(mu) {
        return T::zero();
    }
    if xs.is_empty() {
        return if lambda == mu { T::one() } else { T::zero() };
    }
    let x = &xs[0];
    let rest = &xs[1..];
    let mut acc = T::zero();
    for nu in horizontal_strip_extensions(mu, lambda) {
        let step = scalar_pow(x, nu.size() - mu.size());
        acc = acc + step * skew_schur(lambda, &nu, rest);
    }
    acc
}

/// Schur polynomial; zero whenever lambda has more rows than variables.
pub fn schur<T: Scalar>(lambda: &Partition, xs: &[T]) -> T {
    skew_schur(lambda, &Partition::empty(), xs)
}

/// Cauchy product F(X;Y) = prod_{x,y} (1 - x y)^{-1}.
pub fn cauchy_f<T: Scalar>(xs: &[T], ys: &[T]) -> T {
    let mut acc = T::one();
    for x in xs {
        for y in ys {
            acc = acc / (T::one() - x.clone() * y.clone());
        }
    }
    acc
}

/// Cauchy product over complex points, rejecting |x y| >= 1 and
/// near-vanishing factors.
pub fn cauchy_f_checked(xs: &[Complex64], ys: &[Complex64]) -> Result<Complex64, SymFuncError> {
    let mut acc = Complex64::one();
    for x in xs {
        for y in ys {
            let p = x * y;
            if p.norm() >= 1.0 {
                return Err(SymFuncError::CauchyDivergent(p.norm()));
            }
            let d = Complex64::one() - p;
            if d.norm() <= POLE_TOL {
                return Err(SymFuncError::CauchyPole);
            }
            acc /= d;
        }
    }
    Ok(acc)
}

/// Logarithmic form exp(sum_{j>=1} p_j(X) p_j(Y) / j), truncated at
/// `terms` summands. Cross-checks the product form in tests.
pub fn cauchy_f_log_form(xs: &[f64], ys: &[f64], terms: u32) -> f64 {
    let mut log = 0.0;
    for j in 1..=terms {
        log += power_sum(j, xs) * power_sum(j, ys) / j as f64;
    }
    log.exp()
}

/// H_q(X;Y) = F(X;Y) / F(qX;Y) = prod (1 - q x y)/(1 - x y).
/// Accepts arbitrary complex points; errors when a denominator factor is
/// within POLE_TOL of zero.
pub fn h_q(xs: &[Complex64], ys: &[Complex64], q: Complex64) -> Result<Complex64, SymFuncError> {
    let mut acc = Complex64::one();
    for x in xs {
        for y in ys {
            let p = x * y;
            let den = Complex64::one() - p;
            if den.norm() <= POLE_TOL {
                return Err(SymFuncError::CauchyPole);
            }
            acc *= (Complex64::one() - q * p) / den;
        }
    }
    Ok(acc)
}

/// z_mu = prod_i i^{m_i} m_i! where m_i is the multiplicity of i in mu.
pub fn z_factor(mu: &Partition) -> u64 {
    let mut z: u64 = 1;
    let mut i = 0;
    while i < mu.length() {
        let v = mu.parts()[i];
        let m = mu.multiplicity(v) as u64;
        for k in 1..=m {
            z *= v as u64 * k;
        }
        i += m as usize;
    }
    z
}

/// Irreducible symmetric-group character chi^mu(nu) via the
/// Murnaghan-Nakayama rule, phrased on beta-numbers: removing a border
/// strip of size k moves one beta-number down by k, with sign given by
/// the number of beta-numbers jumped over.
pub fn symmetric_group_character(mu: &Partition, nu: &Partition) -> i64 {
    assert_eq!(mu.size(), nu.size(), "character requires |mu| = |nu|");
    let ell = mu.length();
    let betas: Vec<u64> = (1..=ell)
        .map(|j| mu.part(j) as u64 + (ell - j) as u64)
        .collect();
    return mn(&betas, nu.parts());

    fn mn(betas: &[u64], strips: &[u32]) -> i64 {
        let Some((&k, rest)) = strips.split_first() else {
            return 1;
        };
        let k = k as u64;
        let mut total = 0;
        for (idx, &b) in betas.iter().enumerate() {
            if b < k {
                continue;
            }
            let target = b - k;
            if betas.contains(&target) {
                continue;
            }
            let jumped = betas.iter().filter(|&&c| c > target && c < b).count();
            let sign = if jumped % 2 == 0 { 1 } else { -1 };
            let mut next: Vec<u64> = betas.to_vec();
            next[idx] = target;
            next.sort_unstable_by(|a, b| b.cmp(a));
            total += sign * mn(&next, rest);
        }
        total
    }
}

/// A symmetric function written in the power-sum basis: finitely many
/// coefficients indexed by partitions of size at most `degree_cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerBasisPolynomial<T> {
    coeffs: BTreeMap<Partition, T>,
    degree_cap: u32,
}

impl<T: Scalar> PowerBasisPolynomial<T> {
    pub fn new(degree_cap: u32) -> Result<Self, SymFuncError> {
        if degree_cap > MAX_EXPANSION_DEGREE {
            return Err(SymFuncError::DegreeCapTooLarge(MAX_EXPANSION_DEGREE));
        }
        Ok(PowerBasisPolynomial {
            coeffs: BTreeMap::new(),
            degree_cap,
        })
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn add_term(&mut self, mu: Partition, c: T) -> Result<(), SymFuncError> {
        if mu.size() as u32 > self.degree_cap {
            return Err(SymFuncError::DegreeCapExceeded {
                cap: self.degree_cap,
                needed: mu.size() as u32,
            });
        }
        let entry = self.coeffs.entry(mu.clone()).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if *entry == T::zero() {
            self.coeffs.remove(&mu);
        }
        Ok(())
    }

    pub fn coefficient(&self, mu: &Partition) -> T {
        self.coeffs.get(mu).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &T)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Display> PowerBasisPolynomial<T> {
    /// JSON object keyed by comma-joined part lists ("2,1"; "" for the
    /// constant term). Rational coefficients print exactly ("3/4").
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (mu, c) in &self.coeffs {
            let key = mu
                .parts()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",");
            map.insert(key, serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }
}

/// Truncated power-sum pairing: <p_lambda, p_mu> = 1{lambda = mu}
/// 1{|lambda| <= k} z_lambda, extended bilinearly.
pub fn truncated_scalar_product<T: Scalar>(
    a: &PowerBasisPolynomial<T>,
    b: &PowerBasisPolynomial<T>,
    k: u32,
) -> T {
    let mut acc = T::zero();
    for (mu, ca) in a.iter() {
        if mu.size() as u32 > k {
            continue;
        }
        let cb = b.coefficient(mu);
        if cb == T::zero() {
            continue;
        }
        acc = acc + ca.clone() * cb * T::from_integer(z_factor(mu) as i64);
    }
    acc
}

/// Power-sum expansion of s_mu as an abstract symmetric function:
/// s_mu = sum_nu chi^mu(nu) / z_nu * p_nu over nu of size |mu|.
pub fn schur_to_power_basis<T: Scalar>(mu: &Partition) -> Vec<(Partition, T)> {
    let mut out = Vec::new();
    for nu in partitions_of(mu.size() as u32, None) {
        let chi = symmetric_group_character(mu, &nu);
        if chi != 0 {
            let c = T::from_integer(chi) / T::from_integer(z_factor(&nu) as i64);
            out.push((nu, c));
        }
    }
    out
}

/// Expands s_lambda(X, Z) in the power sums of the latent alphabet Z:
/// s_lambda(X, Z) = sum_{mu ⊆ lambda} s_{lambda/mu}(X) s_mu(Z), with each
/// s_mu(Z) rewritten in the p-basis. The expansion itself does not depend
/// on the number u of latent variables; u matters only when the result is
/// paired under the truncated scalar product with k = u.
pub fn expand_in_power_basis<T: Scalar>(
    lambda: &Partition,
    xs: &[T],
    u: u32,
    degree_cap: u32,
) -> Result<PowerBasisPolynomial<T>, SymFuncError> {
    if u == 0 {
        return Err(SymFuncError::NoLatentVariables);
    }
    if lambda.size() as u32 > degree_cap {
        return Err(SymFuncError::DegreeCapExceeded {
            cap: degree_cap,
            needed: lambda.size() as u32,
        });
    }
    let mut poly = PowerBasisPolynomial::new(degree_cap)?;
    for mu in sub_partitions(lambda) {
        let c = skew_schur(lambda, &mu, xs);
        if c == T::zero() {
            continue;
        }
        for (nu, w) in schur_to_power_basis::<T>(&mu) {
            poly.add_term(nu, c.clone() * w)?;
        }
    }
    Ok(poly)
}

/// Difference between the two sides of the skew pairing identity
/// 1{|mu| <= u} s_{lambda/mu}(X) = <s_lambda(X, Z), s_mu(Z)> with u latent
/// variables. Exactly zero over the rationals.
pub fn skew_scalar_identity_gap<T: Scalar>(
    lambda: &Partition,
    mu: &Partition,
    xs: &[T],
    u: u32,
) -> Result<T, SymFuncError> {
    let cap = (lambda.size().max(mu.size()) as u32).min(MAX_EXPANSION_DEGREE);
    if lambda.size() as u32 > cap || mu.size() as u32 > cap {
        return Err(SymFuncError::DegreeCapExceeded {
            cap,
            needed: lambda.size().max(mu.size()) as u32,
        });
    }
    let lhs = if mu.size() as u32 <= u {
        skew_schur(lambda, mu, xs)
    } else {
        T::zero()
    };
    let left = expand_in_power_basis(lambda, xs, u, cap)?;
    let right = expand_in_power_basis(mu, &[], u, cap)?;
    let rhs = truncated_scalar_product(&left, &right, u);
    Ok(lhs - rhs)
}

/// Partial Cauchy sum sum_{|lambda| <= max_size} s_lambda(X) s_lambda(Y)
/// against its closed-form target F(X;Y). The partial sums increase
/// monotonically to the target.
pub fn verify_cauchy_truncation(
    xs: &Specialization,
    ys: &Specialization,
    max_size: u32,
) -> (f64, f64) {
    let n = xs.len().min(ys.len());
    let mut partial = 0.0;
    for lam in crate::partition::enumerate_partitions(max_size, Some(n)) {
        partial += schur(&lam, xs.values()) * schur(&lam, ys.values());
    }
    let target = cauchy_f(xs.values(), ys.values());
    (partial, target)
}

/// Finitely truncated diagonal pairing sum_{|lambda| <= min(u, cap)}
/// prod_i q_{lambda_i} r_{lambda_i} / z_lambda against its large-u limit
/// exp(sum_i q_i r_i / i). Coefficient lists are 1-indexed by part value;
/// parts beyond the lists contribute zero.
pub fn verify_scalar_product_limit(
    q: &[f64],
    r: &[f64],
    u: u32,
    degree_cap: u32,
) -> (f64, f64) {
    let cap = u.min(degree_cap);
    let mut finite = 0.0;
    for lam in crate::partition::enumerate_partitions(cap, None) {
        let mut term = 1.0;
        for &p in lam.parts() {
            let idx = p as usize - 1;
            let qv = q.get(idx).copied().unwrap_or(0.0);
            let rv = r.get(idx).copied().unwrap_or(0.0);
            term *= qv * rv;
        }
        if term != 0.0 || lam.is_empty() {
            finite += term / z_factor(&lam) as f64;
        }
    }
    let mut log = 0.0;
    for i in 0..q.len().min(r.len()) {
        log += q[i] * r[i] / (i as f64 + 1.0);
    }
    (finite, log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent oracle: sum over full interlacing chains
    /// mu = nu^0 ⊆ nu^1 ⊆ ... ⊆ nu^n = lambda of the monomial weights,
    /// enumerated explicitly rather than by recursive branching.
    fn skew_schur_chain_oracle(lambda: &Partition, mu: &Partition, xs: &[f64]) -> f64 {
        fn chains(
            from: &Partition,
            to: &Partition,
            steps: usize,
            prefix: &mut Vec<Partition>,
            out: &mut Vec<Vec<Partition>>,
        ) {
            if steps == 0 {
                if from == to {
                    out.push(prefix.clone());
                }
                return;
            }
            for nu in horizontal_strip_extensions(from, to) {
                prefix.push(nu.clone());
                chains(&nu, to, steps - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        chains(mu, lambda, xs.len(), &mut Vec::new(), &mut all);
        let mut total = 0.0;
        for chain in all {
            let mut w = 1.0;
            let mut prev = mu.size();
            for (x, nu) in xs.iter().zip(&chain) {
                w *= x.powi((nu.size() - prev) as i32);
                prev = nu.size();
            }
            total += w;
        }
        total
    }

    #[test]
    fn power_sums() {
        assert_eq!(power_sum(0, &[0.3f64, 0.7]), 1.0);
        assert!((power_sum(2, &[0.5f64, 0.5]) - 0.5).abs() < 1e-15);
        assert_eq!(power_sum::<f64>(3, &[]), 0.0);
    }

    #[test]
    fn schur_small_cases() {
        // s_(1)(x,y) = x + y; s_(2)(x,y) = x^2 + xy + y^2;
        // s_(1,1)(x,y) = xy
        let xs = [0.5f64, 0.25];
        assert!((schur(&Partition::of(&[1]), &xs) - 0.75).abs() < 1e-15);
        assert!((schur(&Partition::of(&[2]), &xs) - (0.25 + 0.125 + 0.0625)).abs() < 1e-15);
        assert!((schur(&Partition::of(&[1, 1]), &xs) - 0.125).abs() < 1e-15);
        // more rows than variables
        assert_eq!(schur(&Partition::of(&[1, 1]), &[0.5f64]), 0.0);
        assert_eq!(schur::<f64>(&Partition::empty(), &[]), 1.0);
    }

    #[test]
    fn schur_single_variable_row() {
        // s_(k)(x) = x^k
        for k in 0..6 {
            let lam = Partition::new(vec![k]).unwrap();
            assert!((schur(&lam, &[0.3f64]) - 0.3f64.powi(k as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn skew_schur_matches_chain_oracle() {
        let xs = [0.31f64, 0.47, 0.11];
        for lambda in enumerate_partitions(5, None) {
            for mu in sub_partitions(&lambda) {
                let fast = skew_schur(&lambda, &mu, &xs);
                let slow = skew_schur_chain_oracle(&lambda, &mu, &xs);
                assert!(
                    (fast - slow).abs() < 1e-13,
                    "mismatch at {lambda}/{mu}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn skew_schur_incomparable_is_zero() {
        let lam = Partition::of(&[2]);
        let mu = Partition::of(&[1, 1]);
        assert_eq!(skew_schur(&lam, &mu, &[0.5f64, 0.5]), 0.0);
    }

    #[test]
    fn schur_is_symmetric() {
        let lam = Partition::of(&[3, 1]);
        let a = schur(&lam, &[0.2f64, 0.5, 0.7]);
        let b = schur(&lam, &[0.7f64, 0.2, 0.5]);
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn schur_exact_rational() {
        // s_(2,1)(1/2, 1/3) = x^2 y + x y^2 = (1/12)(1/2 + 1/3) = 5/72
        let xs = [rat(1, 2), rat(1, 3)];
        assert_eq!(schur(&Partition::of(&[2, 1]), &xs), rat(5, 36));
    }

    #[test]
    fn cauchy_product_forms_agree() {
        let xs = [0.5, 0.3];
        let ys = [0.4, 0.2];
        let prod: f64 = cauchy_f(&xs, &ys);
        let logf = cauchy_f_log_form(&xs, &ys, 200);
        assert!((prod - logf).abs() < 1e-12);
        assert_eq!(cauchy_f::<f64>(&[], &[0.9]), 1.0);
    }

    #[test]
    fn cauchy_checked_rejects_divergence() {
        let one = Complex64::new(1.25, 0.0);
        assert!(matches!(
            cauchy_f_checked(&[one], &[Complex64::new(0.9, 0.0)]),
            Err(SymFuncError::CauchyDivergent(_))
        ));
    }

    #[test]
    fn h_q_special_values() {
        let x = [Complex64::new(0.5, 0.0)];
        let y = [Complex64::new(0.5, 0.0)];
        // (1 - q x y)/(1 - x y) at q = 1/2: (1 - 1/8)/(1 - 1/4) = 7/6
        let v = h_q(&x, &y, Complex64::new(0.5, 0.0)).unwrap();
        assert!((v - Complex64::new(7.0 / 6.0, 0.0)).norm() < 1e-15);
        // q = 0 recovers F, q = 1 gives 1
        let f = cauchy_f_checked(&x, &y).unwrap();
        assert!((h_q(&x, &y, Complex64::zero()).unwrap() - f).norm() < 1e-15);
        assert!((h_q(&x, &y, Complex64::one()).unwrap() - Complex64::one()).norm() < 1e-15);
        // pole detection
        let bad = [Complex64::new(2.0, 0.0)];
        assert_eq!(
            h_q(&bad, &[Complex64::new(0.5, 0.0)], Complex64::zero()),
            Err(SymFuncError::CauchyPole)
        );
    }

    #[test]
    fn z_factor_values() {
        assert_eq!(z_factor(&Partition::empty()), 1);
        assert_eq!(z_factor(&Partition::of(&[1, 1, 1])), 6); // 1^3 3!
        assert_eq!(z_factor(&Partition::of(&[2, 2])), 8); // 2^2 2!
        assert_eq!(z_factor(&Partition::of(&[3, 1])), 3);
        assert_eq!(z_factor(&Partition::of(&[2, 1, 1])), 4);
    }

    #[test]
    fn character_table_s3() {
        // chi^mu(nu) for |mu| = 3, against the standard table.
        let p3 = Partition::of(&[3]);
        let p21 = Partition::of(&[2, 1]);
        let p111 = Partition::of(&[1, 1, 1]);
        assert_eq!(symmetric_group_character(&p3, &p111), 1);
        assert_eq!(symmetric_group_character(&p3, &p21), 1);
        assert_eq!(symmetric_group_character(&p3, &p3), 1);
        assert_eq!(symmetric_group_character(&p21, &p111), 2);
        assert_eq!(symmetric_group_character(&p21, &p21), 0);
        assert_eq!(symmetric_group_character(&p21, &p3), -1);
        assert_eq!(symmetric_group_character(&p111, &p111), 1);
        assert_eq!(symmetric_group_character(&p111, &p21), -1);
        assert_eq!(symmetric_group_character(&p111, &p3), 1);
    }

    #[test]
    fn character_orthogonality() {
        // sum_nu chi^a(nu) chi^b(nu) / z_nu = 1{a = b}, degrees up to 6
        for n in 1..=6u32 {
            let shapes = partitions_of(n, None);
            for a in &shapes {
                for b in &shapes {
                    let mut acc = rat(0, 1);
                    for nu in partitions_of(n, None) {
                        let ca = symmetric_group_character(a, &nu);
                        let cb = symmetric_group_character(b, &nu);
                        acc += rat(ca * cb, z_factor(&nu) as i64);
                    }
                    let want = if a == b { rat(1, 1) } else { rat(0, 1) };
                    assert_eq!(acc, want, "orthogonality failed at {a}, {b}");
                }
            }
        }
    }

    #[test]
    fn power_basis_expansion_example() {
        // s_(2)(x, Z) = x^2 + x p_1 + (p_1^2 + p_2)/2 with x = 1/2
        let poly =
            expand_in_power_basis(&Partition::of(&[2]), &[rat(1, 2)], 1, 2).unwrap();
        assert_eq!(poly.coefficient(&Partition::empty()), rat(1, 4));
        assert_eq!(poly.coefficient(&Partition::of(&[1])), rat(1, 2));
        assert_eq!(poly.coefficient(&Partition::of(&[2])), rat(1, 2));
        assert_eq!(poly.coefficient(&Partition::of(&[1, 1])), rat(1, 2));
        let json = serde_json::to_string(&poly.to_json()).unwrap();
        assert_eq!(json, r#"{"":"1/4","1":"1/2","1,1":"1/2","2":"1/2"}"#);
    }

    #[test]
    fn expansion_respects_caps() {
        assert!(matches!(
            expand_in_power_basis::<f64>(&Partition::of(&[3]), &[], 1, 2),
            Err(SymFuncError::DegreeCapExceeded { .. })
        ));
        assert!(matches!(
            PowerBasisPolynomial::<f64>::new(9),
            Err(SymFuncError::DegreeCapTooLarge(_))
        ));
        assert!(matches!(
            expand_in_power_basis::<f64>(&Partition::empty(), &[], 0, 2),
            Err(SymFuncError::NoLatentVariables)
        ));
    }

    #[test]
    fn schur_orthonormality_under_truncated_pairing() {
        // <s_a(Z), s_b(Z)> = 1{a = b} 1{|a| <= k}, exhaustively for
        // |a|, |b| <= 4 and k <= 4.
        let shapes = enumerate_partitions(4, None);
        for k in 1..=4u32 {
            for a in &shapes {
                for b in &shapes {
                    let pa = expand_in_power_basis::<BigRational>(a, &[], k, 4).unwrap();
                    let pb = expand_in_power_basis::<BigRational>(b, &[], k, 4).unwrap();
                    let got = truncated_scalar_product(&pa, &pb, k);
                    let want = if a == b && a.size() as u32 <= k {
                        rat(1, 1)
                    } else if a.size() == b.size() {
                        rat(0, 1)
                    } else {
                        // different degrees never pair
                        rat(0, 1)
                    };
                    assert_eq!(got, want, "pairing failed at {a}, {b}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn truncated_pairing_is_bilinear() {
        let mut a = PowerBasisPolynomial::<BigRational>::new(3).unwrap();
        a.add_term(Partition::of(&[2]), rat(2, 3)).unwrap();
        a.add_term(Partition::of(&[1, 1]), rat(-1, 2)).unwrap();
        let mut b = PowerBasisPolynomial::<BigRational>::new(3).unwrap();
        b.add_term(Partition::of(&[2]), rat(5, 7)).unwrap();
        b.add_term(Partition::of(&[3]), rat(1, 1)).unwrap();
        // only (2) pairs: 2/3 * 5/7 * z_(2) = 2/3 * 5/7 * 2 = 20/21
        assert_eq!(truncated_scalar_product(&a, &b, 3), rat(20, 21));
        // truncation at k = 1 kills everything
        assert_eq!(truncated_scalar_product(&a, &b, 1), rat(0, 1));
    }

    #[test]
    fn skew_pairing_identity_exact() {
        let xs = [rat(1, 2), rat(1, 3)];
        for lambda in enumerate_partitions(5, None) {
            for mu in enumerate_partitions(4, None) {
                for u in 1..=4u32 {
                    let gap = skew_scalar_identity_gap(&lambda, &mu, &xs, u).unwrap();
                    assert_eq!(
                        gap,
                        rat(0, 1),
                        "identity failed at lambda={lambda}, mu={mu}, u={u}"
                    );
                }
            }
        }
    }

    #[test]
    fn cauchy_truncation_monotone() {
        let x = Specialization::of(&[0.5]);
        let y = Specialization::of(&[0.5]);
        let (p20, t) = verify_cauchy_truncation(&x, &y, 20);
        let (p40, _) = verify_cauchy_truncation(&x, &y, 40);
        assert!(p20 <= p40 + 1e-15);
        assert!(p40 <= t + 1e-12);
        assert!((t - p40).abs() < 1e-11); // geometric tail 0.25^41
        assert!((t - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn scalar_product_limit_monotone() {
        // single nonzero coefficient q_1 = r_1 = 0.3: partial sums of
        // exp(0.09)
        let q = [0.3];
        let mut prev = 0.0;
        for u in 1..=6u32 {
            let (finite, limit) = verify_scalar_product_limit(&q, &q, u, 8);
            assert!(finite >= prev - 1e-15);
            assert!(finite <= limit + 1e-15);
            prev = finite;
            if u == 6 {
                assert!((limit - finite).abs() < 1e-10);
                assert!((limit - 0.09f64.exp()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn specialization_validation() {
        assert!(Specialization::new(vec![0.0, 0.99]).is_ok());
        assert!(Specialization::new(vec![1.0]).is_err());
        assert!(Specialization::new(vec![-0.1]).is_err());
        assert_eq!(Specialization::empty().max_value(), 0.0);
    }
}

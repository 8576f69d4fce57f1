//! Schur measure and Schur process weights, brute-force correlation
//! oracles with rigorous truncation tails, normalization checks, and the
//! multi-level observable generating function series.
//!
//! ```
//! use schur_process::measures::{rho_measure_bruteforce, verify_normalization_measure};
//! use schur_process::symfunc::Specialization;
//!
//! let x = Specialization::of(&[0.5]);
//! // truncated weights sum to 1 up to the rigorous tail bound
//! let norm = verify_normalization_measure(&x, &x, 20);
//! assert!(norm.value <= norm.tail_bound);
//!
//! // probability that slots -2 and 0 are both occupied
//! let rho = rho_measure_bruteforce(&[-2, 0], &x, &x, 20);
//! assert!(rho.value > 0.0 && rho.value < 1.0);
//! ```

use crate::partition::{
    enumerate_partitions, enumerate_process_supports, partition_count_table, InterlacingChain,
    Partition,
};
use crate::operators::q_observable;
use crate::symfunc::{cauchy_f, schur, skew_schur, Specialization, SymFuncError};
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("process needs the same number of X and Y levels, got {nx} and {ny}")]
    LevelCountMismatch { nx: usize, ny: usize },
    #[error("process needs at least one level")]
    NoLevels,
    #[error("expected {expected} partitions, got {got}")]
    ChainLengthMismatch { expected: usize, got: usize },
    #[error("brute-force process oracle is capped at m <= 3, got m = {0}")]
    TooManyLevels(usize),
    #[error("series needs every level of the same size, got {0} and {1}")]
    UnevenLevelSizes(usize, usize),
    #[error("q-set needs one group per level: {groups} groups for {m} levels")]
    QGroupMismatch { groups: usize, m: usize },
    #[error("parameter window violated: need max Y = {max_y} < |q|^(d m^2) = {qpow} < 1")]
    ParameterWindow { max_y: f64, qpow: f64 },
    #[error(transparent)]
    SymFunc(#[from] SymFuncError),
}

/// Per-level specializations of a Schur process: X^(1..m) and Y^(1..m).
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessSpec {
    pub x_levels: Vec<Specialization>,
    pub y_levels: Vec<Specialization>,
}

impl ProcessSpec {
    pub fn new(
        x_levels: Vec<Specialization>,
        y_levels: Vec<Specialization>,
    ) -> Result<Self, MeasureError> {
        if x_levels.len() != y_levels.len() {
            return Err(MeasureError::LevelCountMismatch {
                nx: x_levels.len(),
                ny: y_levels.len(),
            });
        }
        if x_levels.is_empty() {
            return Err(MeasureError::NoLevels);
        }
        Ok(ProcessSpec { x_levels, y_levels })
    }

    pub fn levels(&self) -> usize {
        self.x_levels.len()
    }

    pub fn max_y(&self) -> f64 {
        self.y_levels
            .iter()
            .fold(0.0, |a, s| a.max(s.max_value()))
    }

    pub fn max_value(&self) -> f64 {
        self.x_levels
            .iter()
            .chain(&self.y_levels)
            .fold(0.0, |a, s| a.max(s.max_value()))
    }

    /// Z = prod_{1 <= i <= j <= m} F(X^(i); Y^(j)).
    pub fn normalization(&self) -> f64 {
        let m = self.levels();
        let mut z = 1.0;
        for i in 0..m {
            for j in i..m {
                z *= cauchy_f(self.x_levels[i].values(), self.y_levels[j].values());
            }
        }
        z
    }
}

/// SM(lambda) = s_lambda(X) s_lambda(Y) / F(X; Y).
pub fn schur_measure_weight(lambda: &Partition, x: &Specialization, y: &Specialization) -> f64 {
    let sx: f64 = schur(lambda, x.values());
    if sx == 0.0 {
        return 0.0;
    }
    sx * schur::<f64>(lambda, y.values()) / cauchy_f(x.values(), y.values())
}

/// Normalized process weight of a chain (lambda^1..m, mu^1..m-1):
///
///   W = s_{lambda^1}(X^1) prod_i s_{lambda^{i+1}/mu^i}(X^{i+1})
///       s_{lambda^i/mu^i}(Y^i) * s_{lambda^m}(Y^m)
///
/// divided by Z. Returns (W/Z, Z). Zero unless the chain interlaces.
pub fn schur_process_weight(
    lambdas: &[Partition],
    mus: &[Partition],
    spec: &ProcessSpec,
) -> Result<(f64, f64), MeasureError> {
    let m = spec.levels();
    if lambdas.len() != m {
        return Err(MeasureError::ChainLengthMismatch {
            expected: m,
            got: lambdas.len(),
        });
    }
    if mus.len() + 1 != m {
        return Err(MeasureError::ChainLengthMismatch {
            expected: m - 1,
            got: mus.len(),
        });
    }
    let z = spec.normalization();
    let mut w: f64 = schur(&lambdas[0], spec.x_levels[0].values());
    for i in 0..m - 1 {
        if w == 0.0 {
            return Ok((0.0, z));
        }
        w *= skew_schur::<f64>(&lambdas[i + 1], &mus[i], spec.x_levels[i + 1].values());
        w *= skew_schur::<f64>(&lambdas[i], &mus[i], spec.y_levels[i].values());
    }
    w *= schur::<f64>(&lambdas[m - 1], spec.y_levels[m - 1].values());
    Ok((w / z, z))
}

/// A truncated oracle value together with a rigorous bound on the mass
/// dropped by the truncation.
#[derive(Clone, Copy, Debug)]
pub struct OracleValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Geometric wrap for sum_{j > cutoff} counts[j] (j+1)^poly ratio^j,
/// continuing past the table with the last observed term ratio.
fn tail_sum(counts: &[f64], cutoff: usize, poly: i32, ratio: f64) -> f64 {
    if ratio == 0.0 {
        return 0.0;
    }
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let mut acc = 0.0;
    let mut prev = f64::INFINITY;
    let mut last_ratio: f64 = 0.0;
    for j in cutoff + 1..counts.len() {
        let term = counts[j] * ((j + 1) as f64).powi(poly) * ratio.powi(j as i32);
        if prev.is_finite() && prev > 0.0 {
            last_ratio = term / prev;
        }
        acc += term;
        prev = term;
        if term < 1e-300 {
            return acc;
        }
    }
    if last_ratio >= 1.0 {
        return f64::INFINITY;
    }
    acc + prev * last_ratio / (1.0 - last_ratio)
}

fn measure_tail_bound(x: &Specialization, y: &Specialization, max_size: u32) -> f64 {
    let n = x.len().min(y.len());
    let ratio = x.max_value() * y.max_value();
    if n == 0 || ratio == 0.0 {
        return 0.0;
    }
    let horizon = max_size as usize + 600;
    let counts = partition_count_table(Some(n), horizon);
    let f = cauchy_f(x.values(), y.values());
    // s_lambda(X) s_lambda(Y) <= (|lambda|+1)^{2n^2} (max X max Y)^{|lambda|}
    tail_sum(&counts, max_size as usize, 2 * (n * n) as i32, ratio) / f
}

/// rho_SM(T): probability that every t in T is an occupied slot of the
/// point configuration {lambda_j - j : j >= 1}, by enumeration over
/// |lambda| <= max_size.
pub fn rho_measure_bruteforce(
    t: &[i64],
    x: &Specialization,
    y: &Specialization,
    max_size: u32,
) -> OracleValue {
    let n = x.len().min(y.len());
    let lams = enumerate_partitions(max_size, Some(n));
    // indexed collect keeps the summation order fixed, so results are
    // bit-identical regardless of thread scheduling
    let terms_vec: Vec<f64> = lams
        .par_iter()
        .map(|lam| {
            if t.iter().all(|&p| lam.occupies(p)) {
                schur_measure_weight(lam, x, y)
            } else {
                0.0
            }
        })
        .collect();
    let value: f64 = terms_vec.iter().sum();
    OracleValue {
        value,
        tail_bound: measure_tail_bound(x, y, max_size),
        terms: lams.len(),
    }
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= out.len() {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Bound on the process mass with total lambda-size past `cutoff`:
/// W <= (max Y)^{|lambda|/m} prod_i (|lambda^i|+1)^{2n^2}, the number of
/// lambda-sequences of total size j is an m-fold convolution of per-level
/// counts, and each mu^i ranges over at most cum(j) partitions.
fn process_tail_bound(spec: &ProcessSpec, max_size: u32) -> f64 {
    let m = spec.levels();
    let n = spec
        .x_levels
        .iter()
        .chain(&spec.y_levels)
        .map(|s| s.len())
        .max()
        .unwrap_or(0);
    let ratio = spec.max_y().powf(1.0 / m as f64);
    if ratio == 0.0 {
        return 0.0;
    }
    let horizon = max_size as usize + 600;
    let per_level = partition_count_table(Some(n), horizon);
    let mut conv = per_level.clone();
    for _ in 1..m {
        conv = convolve(&conv, &per_level);
    }
    let mut cum = 0.0;
    let counts: Vec<f64> = conv
        .iter()
        .zip(&per_level)
        .map(|(&c, &p)| {
            cum += p;
            c * cum.powi(m as i32 - 1)
        })
        .collect();
    let poly = 2 * (m * n * n) as i32;
    tail_sum(&counts, max_size as usize, poly, ratio) / spec.normalization()
}

/// rho_S(T) for T a set of (level, position) pairs with 1-based levels,
/// by enumeration over chains with every |lambda^i| <= max_size.
pub fn rho_process_bruteforce(
    t: &[(usize, i64)],
    spec: &ProcessSpec,
    max_size: u32,
) -> Result<OracleValue, MeasureError> {
    let m = spec.levels();
    if m > 3 {
        return Err(MeasureError::TooManyLevels(m));
    }
    let max_len = spec
        .x_levels
        .iter()
        .chain(&spec.y_levels)
        .map(|s| s.len())
        .max()
        .unwrap_or(0);
    let chains = enumerate_process_supports(m, max_size, Some(max_len));
    // same fixed-order reduction as the measure oracle
    let terms_vec: Vec<f64> = chains
        .par_iter()
        .map(|chain| {
            let hit = t
                .iter()
                .all(|&(lvl, p)| lvl >= 1 && lvl <= m && chain.lambdas[lvl - 1].occupies(p));
            if !hit {
                return 0.0;
            }
            schur_process_weight(&chain.lambdas, &chain.mus, spec)
                .map(|(w, _)| w)
                .unwrap_or(0.0)
        })
        .collect();
    let value: f64 = terms_vec.iter().sum();
    Ok(OracleValue {
        value,
        tail_bound: process_tail_bound(spec, max_size),
        terms: chains.len(),
    })
}

/// |1 - sum of truncated Schur-measure weights|, with the tail bound that
/// must dominate it.
pub fn verify_normalization_measure(
    x: &Specialization,
    y: &Specialization,
    max_size: u32,
) -> OracleValue {
    let total = rho_measure_bruteforce(&[], x, y, max_size);
    OracleValue {
        value: (1.0 - total.value).abs(),
        ..total
    }
}

/// Process analogue of `verify_normalization_measure`.
pub fn verify_normalization_process(
    spec: &ProcessSpec,
    max_size: u32,
) -> Result<OracleValue, MeasureError> {
    let total = rho_process_bruteforce(&[], spec, max_size)?;
    Ok(OracleValue {
        value: (1.0 - total.value).abs(),
        ..total
    })
}

/// Truncation cap of the level-i q-sum in the process generating
/// function: n on the first level, n + u above it (unbounded for the
/// fully summed function).
fn level_cap(level: usize, n: usize, u: Option<u32>) -> Option<usize> {
    if level == 0 {
        Some(n)
    } else {
        u.map(|v| n + v as usize)
    }
}

/// Multi-level observable generating function C(X; Y; Q; u), truncated
/// over chains with every |lambda^i| <= max_size:
///
///   sum over chains of S(lambda, mu)
///     prod_{j} sum_{k=1}^{n} q_{1j}^{k - lambda^1_k}
///     prod_{i >= 2} 1{|mu^{i-1}| <= u} prod_j sum_{k=1}^{n+u} q_{ij}^{k - lambda^i_k},
///
/// with `u = None` meaning the fully summed function (indicators dropped,
/// sums unbounded). `qs[i]` holds the q-group attached to level i+1.
pub fn c_process_series(
    spec: &ProcessSpec,
    qs: &[Vec<Complex64>],
    u: Option<u32>,
    max_size: u32,
) -> Result<Complex64, MeasureError> {
    let m = spec.levels();
    if qs.len() != m {
        return Err(MeasureError::QGroupMismatch {
            groups: qs.len(),
            m,
        });
    }
    let n = spec.x_levels[0].len();
    for s in spec.x_levels.iter().chain(&spec.y_levels) {
        if s.len() != n {
            return Err(MeasureError::UnevenLevelSizes(n, s.len()));
        }
    }
    let d: usize = qs.iter().map(|g| g.len()).sum();
    let max_y = spec.max_y();
    for q in qs.iter().flatten() {
        let qpow = q.norm().powi((d * m * m) as i32);
        if !(max_y < qpow && qpow < 1.0) {
            return Err(MeasureError::ParameterWindow { max_y, qpow });
        }
    }
    let chains = enumerate_process_supports(m, max_size, Some(n));
    let parts: Vec<Complex64> = chains
        .par_iter()
        .map(|chain: &InterlacingChain| {
            if let Some(cap) = u {
                if chain.mus.iter().any(|mu| mu.size() > cap as u64) {
                    return Complex64::zero();
                }
            }
            let w = match schur_process_weight(&chain.lambdas, &chain.mus, spec) {
                Ok((w, _)) => w,
                Err(_) => return Complex64::zero(),
            };
            if w == 0.0 {
                return Complex64::zero();
            }
            let mut acc = Complex64::new(w, 0.0);
            for (i, group) in qs.iter().enumerate() {
                let cap = level_cap(i, n, u);
                for &q in group {
                    acc *= q_observable(q, &chain.lambdas[i], cap);
                }
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(Complex64::zero(), |a, b| a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{circle_quadrature, tensor_quadrature, ContourSpec};

    #[test]
    fn measure_weight_examples() {
        // X = Y = {0.5}: SM((k)) = 0.25^k * 3/4
        let x = Specialization::of(&[0.5]);
        for k in 0..5u32 {
            let lam = if k == 0 {
                Partition::empty()
            } else {
                Partition::of(&[k])
            };
            let w = schur_measure_weight(&lam, &x, &x);
            assert!((w - 0.25f64.powi(k as i32) * 0.75).abs() < 1e-15);
        }
        // empty specializations: lambda = () has weight 1
        let e = Specialization::empty();
        assert_eq!(schur_measure_weight(&Partition::empty(), &e, &e), 1.0);
        assert_eq!(schur_measure_weight(&Partition::of(&[1]), &e, &e), 0.0);
        // length beyond the variable count kills the weight
        assert_eq!(schur_measure_weight(&Partition::of(&[1, 1]), &x, &x), 0.0);
    }

    #[test]
    fn process_weight_reduces_to_measure_at_one_level() {
        let spec = ProcessSpec::new(
            vec![Specialization::of(&[0.5, 0.2])],
            vec![Specialization::of(&[0.4])],
        )
        .unwrap();
        for lam in enumerate_partitions(4, None) {
            let (w, _) = schur_process_weight(std::slice::from_ref(&lam), &[], &spec).unwrap();
            let direct = schur_measure_weight(&lam, &spec.x_levels[0], &spec.y_levels[0]);
            assert!((w - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn process_weight_zero_off_chain() {
        let s = Specialization::of(&[0.3]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        // mu not contained in lambda^2
        let (w, _) = schur_process_weight(
            &[Partition::of(&[2]), Partition::empty()],
            &[Partition::of(&[1])],
            &spec,
        )
        .unwrap();
        assert_eq!(w, 0.0);
        // all-empty chain carries 1/Z
        let (w0, z) = schur_process_weight(
            &[Partition::empty(), Partition::empty()],
            &[Partition::empty()],
            &spec,
        )
        .unwrap();
        assert!((w0 - 1.0 / z).abs() < 1e-15);
        assert!(z > 1.0);
    }

    #[test]
    fn normalization_measure() {
        let x = Specialization::of(&[0.5]);
        let r = verify_normalization_measure(&x, &x, 60);
        assert!(r.value < 1e-10, "residual {}", r.value);
        assert!(r.value <= r.tail_bound);
        // empty specializations are exact
        let e = Specialization::empty();
        let re = verify_normalization_measure(&e, &e, 5);
        assert_eq!(re.value, 0.0);
        assert_eq!(re.tail_bound, 0.0);
    }

    #[test]
    fn normalization_process() {
        let s = Specialization::of(&[0.3]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        let r = verify_normalization_process(&spec, 14).unwrap();
        assert!(r.value < 1e-6, "residual {}", r.value);
        assert!(
            r.value <= r.tail_bound,
            "residual {} above bound {}",
            r.value,
            r.tail_bound
        );
    }

    #[test]
    fn measure_oracle_tail_consistency() {
        let x = Specialization::of(&[0.5]);
        let y = Specialization::of(&[0.4]);
        for t in [vec![], vec![0], vec![-1, 1]] {
            let coarse = rho_measure_bruteforce(&t, &x, &y, 25);
            let fine = rho_measure_bruteforce(&t, &x, &y, 35);
            assert!(
                (coarse.value - fine.value).abs() <= coarse.tail_bound,
                "tail bound too small for T = {t:?}"
            );
        }
    }

    #[test]
    fn duplicate_point_never_occupied() {
        let x = Specialization::of(&[0.5]);
        let r = rho_measure_bruteforce(&[0, 0], &x, &x, 20);
        // the configuration has distinct slots, so {0, 0} as a multiset
        // is just {0}; the oracle treats T as a set
        let r1 = rho_measure_bruteforce(&[0], &x, &x, 20);
        assert!((r.value - r1.value).abs() < 1e-15);
    }

    #[test]
    fn process_oracle_reduces_to_measure() {
        let spec = ProcessSpec::new(
            vec![Specialization::of(&[0.5])],
            vec![Specialization::of(&[0.4])],
        )
        .unwrap();
        for t in [-2i64, -1, 0, 1] {
            let p = rho_process_bruteforce(&[(1, t)], &spec, 25).unwrap();
            let m = rho_measure_bruteforce(&[t], &spec.x_levels[0], &spec.y_levels[0], 25);
            assert!((p.value - m.value).abs() < 1e-14);
        }
    }

    #[test]
    fn projection_consistency_two_orders() {
        // sum over mu of the m = 2 weight, grouped two ways, must agree
        let s = Specialization::of(&[0.3]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        let pool = enumerate_partitions(6, Some(1));
        let l1 = Partition::of(&[2]);
        let l2 = Partition::of(&[1]);
        let mut by_mu = 0.0;
        for mu in &pool {
            let (w, _) = schur_process_weight(
                &[l1.clone(), l2.clone()],
                std::slice::from_ref(mu),
                &spec,
            )
            .unwrap();
            by_mu += w;
        }
        // independent order: accumulate the two skew factors separately
        let z = spec.normalization();
        let mut by_factor = 0.0;
        for mu in &pool {
            let a: f64 = skew_schur(&l2, mu, spec.x_levels[1].values());
            let b: f64 = skew_schur(&l1, mu, spec.y_levels[0].values());
            by_factor += a * b;
        }
        by_factor *= schur::<f64>(&l1, spec.x_levels[0].values())
            * schur::<f64>(&l2, spec.y_levels[1].values())
            / z;
        assert!((by_mu - by_factor).abs() < 1e-15);
    }

    #[test]
    fn process_tail_dominates_on_random_specs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let m = rng.gen_range(1..=2usize);
            let mk = |rng: &mut StdRng| Specialization::of(&[rng.gen_range(0.05..0.35)]);
            let xs: Vec<_> = (0..m).map(|_| mk(&mut rng)).collect();
            let ys: Vec<_> = (0..m).map(|_| mk(&mut rng)).collect();
            let spec = ProcessSpec::new(xs, ys).unwrap();
            let coarse = rho_process_bruteforce(&[], &spec, 8).unwrap();
            let fine = rho_process_bruteforce(&[], &spec, 12).unwrap();
            assert!(
                (coarse.value - fine.value).abs() <= coarse.tail_bound,
                "tail bound violated at m = {m}"
            );
        }
    }

    #[test]
    fn series_u_zero_collapses_mus() {
        // u = 0 forces every mu empty; compare against the restricted sum
        let s = Specialization::of(&[0.2]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        let q = Complex64::new(0.93, 0.0);
        let qs = vec![vec![q], vec![]];
        let full = c_process_series(&spec, &qs, Some(0), 10).unwrap();
        let mut manual = Complex64::zero();
        for chain in enumerate_process_supports(2, 10, Some(1)) {
            if !chain.mus[0].is_empty() {
                continue;
            }
            let (w, _) = schur_process_weight(&chain.lambdas, &chain.mus, &spec).unwrap();
            manual += Complex64::new(w, 0.0) * q_observable(q, &chain.lambdas[0], Some(1));
        }
        assert!((full - manual).norm() < 1e-15);
    }

    #[test]
    fn series_truncation_converges_in_u() {
        let s = Specialization::of(&[0.2]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        // the dropped part of the level-2 sum is q^{n+u+1}/(1-q)
        let q = Complex64::new(0.8, 0.0);
        let qs = vec![vec![], vec![q]];
        let capped = c_process_series(&spec, &qs, Some(120), 16).unwrap();
        let unbounded = c_process_series(&spec, &qs, None, 16).unwrap();
        assert!(
            (capped - unbounded).norm() < 1e-10,
            "capped {capped} vs unbounded {unbounded}"
        );
    }

    #[test]
    fn series_window_enforced() {
        let s = Specialization::of(&[0.2]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        // |q|^{d m^2} = 0.5^4 = 0.0625 < 0.2
        assert!(matches!(
            c_process_series(&spec, &[vec![Complex64::new(0.5, 0.0)], vec![]], None, 5),
            Err(MeasureError::ParameterWindow { .. })
        ));
    }

    #[test]
    fn coefficient_extraction_matches_process_oracle() {
        // one q-contour integral of C(X; Y; {q}; infinity) against the
        // enumeration value of rho at a single point
        let s = Specialization::of(&[0.3]);
        let spec = ProcessSpec::new(vec![s.clone(), s.clone()], vec![s.clone(), s]).unwrap();
        for (lvl, t) in [(2usize, 0i64), (1, -1)] {
            // (max Y)^{1/4} = 0.74 < 0.78 < 1; deep-negative Laurent
            // coefficients of C are near 1, so the aliasing error is
            // about radius^M and the radius must sit low in the window
            let radius = 0.78;
            let grid = circle_quadrature(&ContourSpec::new(radius, 1, 64).unwrap());
            let spec_ref = &spec;
            let f = move |qv: &[Complex64]| {
                let q = qv[0];
                let mut qs = vec![vec![], vec![]];
                qs[lvl - 1].push(q);
                let c = c_process_series(spec_ref, &qs, None, 18).unwrap();
                c * q.powi(t as i32 - 1)
            };
            let integral = tensor_quadrature(&f, std::slice::from_ref(&grid)).unwrap();
            let oracle = rho_process_bruteforce(&[(lvl, t)], &spec, 18).unwrap();
            assert!(
                (integral.re - oracle.value).abs() < 1e-5,
                "level {lvl}, t = {t}: integral {} vs oracle {}",
                integral.re,
                oracle.value
            );
            assert!(integral.im.abs() < 1e-10);
        }
    }
}

//! Property-based checks on correlation determinants and the
//! serialization layer.

use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

use schur_process::kernels::{kernel_L, KernelRequest};
use schur_process::partition::Partition;
use schur_process::quadrature::determinant;
use schur_process::report::{render, to_csv, ReportFormat, RhoReport, SCHEMA_VERSION};
use schur_process::symfunc::Specialization;

const SLOTS: [i64; 7] = [-4, -3, -2, -1, 0, 1, 2];

/// Kernel matrix over SLOTS for X = Y = {0.5}, computed once.
fn kernel_matrix() -> &'static Vec<Vec<Complex64>> {
    static MATRIX: OnceLock<Vec<Vec<Complex64>>> = OnceLock::new();
    MATRIX.get_or_init(|| {
        let x = Specialization::of(&[0.5]);
        let req = KernelRequest::with_nodes(128);
        SLOTS
            .iter()
            .map(|&i| {
                SLOTS
                    .iter()
                    .map(|&j| kernel_L(i, j, &x, &x, &req).unwrap())
                    .collect()
            })
            .collect()
    })
}

fn subdet(mask: u8) -> f64 {
    let matrix = kernel_matrix();
    let idx: Vec<usize> = (0..SLOTS.len()).filter(|i| mask >> i & 1 == 1).collect();
    let sub: Vec<Vec<Complex64>> = idx
        .iter()
        .map(|&r| idx.iter().map(|&c| matrix[r][c]).collect())
        .collect();
    determinant(&sub).re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Adding points to T can only lower the correlation.
    #[test]
    fn correlations_decrease_under_refinement(mask in 0u8..128, extra in 0u8..128) {
        let small = subdet(mask);
        let large = subdet(mask | extra);
        prop_assert!(large <= small + 1e-8, "rho grew: {small} -> {large}");
    }

    /// Correlations are probabilities up to quadrature noise.
    #[test]
    fn correlations_are_probabilities(mask in 0u8..128) {
        let v = subdet(mask);
        prop_assert!((-1e-8..=1.0 + 1e-8).contains(&v), "rho out of range: {v}");
    }

    /// Kernel determinants over real specializations are real.
    #[test]
    fn determinants_are_real(mask in 0u8..128) {
        let matrix = kernel_matrix();
        let idx: Vec<usize> = (0..SLOTS.len()).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<Complex64>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| matrix[r][c]).collect())
            .collect();
        prop_assert!(determinant(&sub).im.abs() < 1e-10);
    }

    /// Partitions round-trip through their JSON array form.
    #[test]
    fn partition_json_roundtrip(mut parts in proptest::collection::vec(1u32..30, 0..8)) {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let lam = Partition::new(parts).unwrap();
        let s = serde_json::to_string(&lam).unwrap();
        let back: Partition = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(lam, back);
    }

    /// Reports render deterministically and their CSV projection keeps
    /// every leaf value.
    #[test]
    fn report_render_roundtrip(
        brute in 0.0f64..1.0,
        det in 0.0f64..1.0,
        t in proptest::collection::vec(-6i64..6, 1..4),
    ) {
        let report = RhoReport {
            schema: SCHEMA_VERSION,
            command: "rho".into(),
            flavor: "measure".into(),
            points: serde_json::to_value(&t).unwrap(),
            bruteforce: brute,
            tail_bound: 1e-12,
            terms: 61,
            det,
            abs_diff: (det - brute).abs(),
            tolerance: 1e-6,
            pass: (det - brute).abs() <= 1e-6,
            truncation: 60,
            nodes: 128,
        };
        let a = render(&report, ReportFormat::Json);
        let b = render(&report, ReportFormat::Json);
        prop_assert_eq!(&a, &b);
        // the JSON form parses back to the identical value tree
        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        prop_assert_eq!(&parsed, &serde_json::to_value(&report).unwrap());
        // CSV has one row per leaf plus the header
        let csv = to_csv(&parsed);
        let leaves = 12 + t.len();
        prop_assert_eq!(csv.lines().count(), 1 + leaves);
    }
}

//! Determinantal point processes from Schur measures and Schur processes.
//!
//! The crate computes correlation functions two independent ways: by
//! direct enumeration over partitions (slow, exact up to a controlled
//! truncation tail) and by contour-integral kernels evaluated with
//! spectrally convergent trapezoid quadrature. The test suite pins the
//! two against each other.
//!
//! ```
//! use schur_process::partition::Partition;
//! use schur_process::symfunc::{schur, Specialization};
//!
//! let lam = Partition::of(&[2, 1]);
//! let x = Specialization::of(&[0.5, 0.25]);
//! // s_(2,1)(a, b) = a^2 b + a b^2
//! let v: f64 = schur(&lam, x.values());
//! assert!((v - (0.0625 + 0.03125)).abs() < 1e-15);
//! ```

pub mod kernels;
pub mod measures;
pub mod operators;
pub mod partition;
pub mod quadrature;
pub mod report;
pub mod symfunc;

//! Exact expected solution counts for the Permuted Kernel Problem and its
//! inhomogeneous form, with the instance generators they describe and the
//! brute-force oracles used to check them.
//!
//! An instance is `(A, B, C)` over a prime field `F_q` with `A` of size
//! `ell x m`, `B` of size `m x n` and `C = A * P_pi * B` for a secret
//! permutation `pi`; the homogeneous variants have `C = 0`. The quantity of
//! interest is the number of permutations `rho` with `A * P_rho * B = C`.
//!
//! ```
//! use pkp_core::{evaluate, ParameterSet, Validity, Variant};
//!
//! let p = ParameterSet::new(Variant::Pkp, 2, 1, 2, 1).unwrap();
//! let r = evaluate(&p, Validity::Strict).unwrap();
//! assert_eq!(r.exact.to_string(), "4/3");
//! ```

pub mod error;
pub mod exactnum;
pub mod expectation;
pub mod generators;
pub mod gfp;
pub mod linalg;
pub mod oracle;
pub mod par;
pub mod params;
pub mod sampling;

pub use error::{Error, ParamError, Result};
pub use exactnum::ExactRational;
pub use expectation::{evaluate, heuristic_expectation, ExpectationReport, Validity};
pub use generators::{generate, Instance, IpkpInstance, PkpInstance};
pub use gfp::{FieldElement, Fq};
pub use linalg::{FqMatrix, Permutation};
pub use oracle::Caps;
pub use params::{ParameterSet, Variant};
pub use sampling::SeededRng;

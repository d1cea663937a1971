//! Independent ground truth for the closed forms: exhaustive solution
//! counting, exact averages over whole instance spaces, eigenvector
//! censuses and seeded Monte Carlo estimates.

mod count;
mod eigen;
mod exhaustive;
mod montecarlo;

pub use count::{count_solutions, count_solutions_reference, count_with, SolutionCount};
pub use eigen::{brute_e_sigma, check_cycle_identity};
pub use exhaustive::{exhaustive_expectation, exhaustive_expectation_with, AEnumeration, ExhaustiveReport};
pub use montecarlo::{monte_carlo_expectation, MonteCarloReport, Z_THRESHOLD};

/// Enumeration limits. Every oracle refuses work beyond its cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `m` for which `S_m` is enumerated when counting solutions.
    pub max_m: u32,
    /// Largest number of `(B, pi, A)` points in an exhaustive expectation.
    pub max_points: u64,
    /// Largest `q^m` for eigenvector brute force.
    pub max_vectors: u64,
    /// Largest `m` for the cycle identity check.
    pub max_cycle_m: u32,
}

/// `m!` must fit in a `u64`.
pub const HARD_MAX_M: u32 = 20;

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_m: 12,
            max_points: 10_000_000,
            max_vectors: 10_000_000,
            max_cycle_m: 8,
        }
    }
}

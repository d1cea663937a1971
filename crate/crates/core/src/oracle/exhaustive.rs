use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{self, ExactRational};
use crate::gfp::Fq;
use crate::linalg::{all_matrices, all_rref_full_rank, FqMatrix, Permutation};
use crate::oracle::count::Counter;
use crate::oracle::Caps;
use crate::par;
use crate::params::ParameterSet;

/// How the `A` component of the instance space is enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AEnumeration {
    /// One `A` per `ell`-dimensional row space. The solution count depends
    /// on `A` only through its row space, and every row space has the same
    /// number of bases, so the uniform average is unchanged. For the
    /// homogeneous variants the row spaces are those inside the left kernel
    /// of `Pi * B`, reached as `M * K` with `M` in reduced echelon form.
    #[default]
    Subspaces,
    /// Every admissible `A` explicitly. For the homogeneous variants every
    /// rank-`ell` matrix is tested against `A * Pi * B = 0`.
    AllMatrices,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub params: ParameterSet,
    pub expectation: ExactRational,
    /// Number of `(B, pi, A)` triples visited.
    pub points: u64,
    pub b_count: u64,
}

/// Exact mean of the solution count over the generator's whole output
/// distribution, using [`AEnumeration::Subspaces`].
pub fn exhaustive_expectation(params: &ParameterSet, caps: &Caps) -> Result<ExactRational> {
    exhaustive_expectation_with(params, AEnumeration::Subspaces, caps).map(|r| r.expectation)
}

pub fn exhaustive_expectation_with(
    params: &ParameterSet,
    mode: AEnumeration,
    caps: &Caps,
) -> Result<ExhaustiveReport> {
    let p = ParameterSet::new(params.variant, params.q, params.ell, params.m, params.n)?;
    let field = Fq::new(p.q)?;
    let (ell, m, n) = (p.ell as usize, p.m as usize, p.n as usize);
    if m as u32 > caps.max_m.min(super::HARD_MAX_M) {
        return Err(refuse(format!("m = {m}"), format!("m <= {}", caps.max_m)));
    }

    let b_space = BigUint::from(p.q).pow((m * n) as u32);
    if b_space > BigUint::from(caps.max_points) {
        return Err(refuse(format!("{b_space} candidate B"), caps.max_points.to_string()));
    }
    let bs: Vec<FqMatrix> = all_matrices(field, m, n)
        .filter(|b| b.rank() == n && (!p.variant.is_star() || distinct_nonzero_rows(b)))
        .collect();

    let homogeneous = p.variant.is_homogeneous();
    let a_work = match (homogeneous, mode) {
        (false, AEnumeration::Subspaces) => gaussian_binomial(m as u32, ell as u32, p.q),
        (true, AEnumeration::Subspaces) => gaussian_binomial((m - n) as u32, ell as u32, p.q),
        (false, AEnumeration::AllMatrices) => exactnum::rank_count(ell as u32, m as u32, ell as u32, p.q),
        (true, AEnumeration::AllMatrices) => exactnum::pow(p.q, (ell * m) as u64),
    };
    let fact: u64 = (1..=m as u64).product();
    let estimate = BigUint::from(bs.len()) * fact * a_work;
    if estimate > BigUint::from(caps.max_points) {
        return Err(refuse(format!("{estimate} weighted points"), caps.max_points.to_string()));
    }

    // A candidates that do not depend on (B, pi)
    let a_list: Vec<FqMatrix> = match (homogeneous, mode) {
        (false, AEnumeration::Subspaces) => all_rref_full_rank(field, ell, m),
        (false, AEnumeration::AllMatrices) => all_matrices(field, ell, m).filter(|a| a.rank() == ell).collect(),
        (true, AEnumeration::Subspaces) => all_rref_full_rank(field, ell, m - n),
        (true, AEnumeration::AllMatrices) => all_matrices(field, ell, m).filter(|a| a.rank() == ell).collect(),
    };
    let perms: Vec<Permutation> = Permutation::all(m).collect();

    // per B: (sum over pi of mean N_sol given (B, pi), points visited)
    let partials = par::map_indexed(bs.len(), |bi| -> Result<(ExactRational, u64)> {
        let b = &bs[bi];
        let mut sum = ExactRational::zero();
        let mut points = 0u64;
        for pi in &perms {
            let pb = b.permute_rows(pi)?;
            let (mut n_sum, mut a_count) = (0u64, 0u64);
            let mut visit = |a: &FqMatrix, c: &FqMatrix| {
                n_sum += Counter::new(a, b, c).count();
                a_count += 1;
            };
            match (homogeneous, mode) {
                (false, _) => {
                    for a in &a_list {
                        let c = a.mat_mul(&pb)?;
                        visit(a, &c);
                    }
                }
                (true, AEnumeration::Subspaces) => {
                    let kernel = pb.left_kernel_basis();
                    let zero = FqMatrix::zeros(field, ell, n);
                    for coeffs in &a_list {
                        visit(&coeffs.mat_mul(&kernel)?, &zero);
                    }
                }
                (true, AEnumeration::AllMatrices) => {
                    let zero = FqMatrix::zeros(field, ell, n);
                    for a in &a_list {
                        if a.mat_mul(&pb)?.is_zero() {
                            visit(a, &zero);
                        }
                    }
                }
            }
            if a_count == 0 {
                return Err(Error::Internal("no admissible A for some (B, pi)".into()));
            }
            points += a_count;
            sum = sum + ExactRational::new(n_sum, a_count);
        }
        Ok((sum, points))
    });

    let mut total = ExactRational::zero();
    let mut points = 0;
    for part in partials {
        let (s, pts) = part?;
        total = total + s;
        points += pts;
    }
    let denom = ExactRational::from(bs.len() as u64 * fact);
    Ok(ExhaustiveReport {
        params: p,
        expectation: total / denom,
        points,
        b_count: bs.len() as u64,
    })
}

fn refuse(size: String, cap: String) -> Error {
    Error::CapExceeded {
        what: "exhaustive expectation",
        size,
        cap,
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    exactnum::rank_count(k, n, k, q) / exactnum::rank_count(k, k, k, q)
}

fn distinct_nonzero_rows(b: &FqMatrix) -> bool {
    (0..b.rows()).all(|i| b.row(i).iter().any(|&v| v != 0) && (0..i).all(|j| b.row(j) != b.row(i)))
}

//! Closed-form expected solution counts and the probability and counting
//! lemmas behind them, all in exact rational arithmetic.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, ParamError, Result};
use crate::exactnum::{self, ExactRational};
use crate::par;
use crate::params::{ParameterSet, Variant};

/// How to treat parameters outside a formula's proven range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validity {
    /// Reject constraint violations and non-prime-power `q`.
    #[default]
    Strict,
    /// Evaluate anyway; the report is labelled outside stated validity.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectationReport {
    pub params: ParameterSet,
    /// Expected number of solutions, the generator's secret included.
    pub exact: ExactRational,
    /// Expected number of solutions other than the secret.
    pub exact_minus_one: ExactRational,
    /// `m! / q^(ell n)`.
    pub heuristic: ExactRational,
    pub outside_validity: bool,
    pub warnings: Vec<String>,
}

impl ExpectationReport {
    /// `(exact - 1) / heuristic`.
    pub fn ratio(&self) -> ExactRational {
        self.exact_minus_one
            .checked_div(&self.heuristic)
            .expect("heuristic is positive")
    }
}

/// Evaluates the closed form matching `params.variant`.
pub fn evaluate(params: &ParameterSet, validity: Validity) -> Result<ExpectationReport> {
    if params.variant != Variant::Ipkp && params.n != 1 {
        return Err(ParamError::Multidimensional {
            variant: params.variant,
            n: params.n,
        }
        .into());
    }
    if params.q > exactnum::MAX_Q {
        return Err(ParamError::QTooLarge(params.q).into());
    }
    let mut warnings = Vec::new();
    let mut outside = false;
    let mut problems = params.violations();
    if exactnum::prime_power(params.q).is_none() {
        problems.push(ParamError::NotPrimePower(params.q));
    }
    for p in problems {
        match validity {
            Validity::Strict => return Err(p.into()),
            Validity::Lenient => {
                outside = true;
                warnings.push(p.to_string());
            }
        }
    }
    let ParameterSet { q, ell, m, n, .. } = *params;
    let exact = match params.variant {
        Variant::Ipkp => ipkp_formula(q, ell, m, n)?,
        Variant::IpkpStar => ipkp_star_formula(q, ell, m),
        Variant::Pkp => pkp_formula(q, ell, m)?,
        Variant::PkpStar => pkp_star_formula(q, ell, m)?,
    };
    if outside {
        warnings.push("outside stated validity: value is not covered by a proof".into());
    }
    Ok(ExpectationReport {
        params: *params,
        exact_minus_one: &exact - &ExactRational::one(),
        exact,
        heuristic: heuristic_expectation(params),
        outside_validity: outside,
        warnings,
    })
}

/// `m! / q^(ell n)`.
pub fn heuristic_expectation(params: &ParameterSet) -> ExactRational {
    let ParameterSet { q, ell, m, n, .. } = *params;
    ExactRational::new(
        exactnum::factorial(m),
        exactnum::pow(q, u64::from(ell) * u64::from(n)),
    )
}

fn big(x: BigUint) -> BigInt {
    BigInt::from(x)
}

fn pow(q: u64, e: u32) -> BigInt {
    big(exactnum::pow(q, e.into()))
}

fn strict(params: &ParameterSet, variant: Variant) -> Result<ParameterSet, ParamError> {
    let p = ParameterSet::new(variant, params.q, params.ell, params.m, params.n)?;
    if variant != Variant::Ipkp && p.n != 1 {
        return Err(ParamError::Multidimensional { variant, n: p.n });
    }
    Ok(p)
}

/// Expected solution count for the `ipkp` generator, any `n`.
pub fn expected_ipkp(params: &ParameterSet) -> Result<ExactRational> {
    let p = strict(params, Variant::Ipkp)?;
    ipkp_formula(p.q, p.ell, p.m, p.n)
}

/// Expected solution count for `ipkp_star` with `n = 1`.
pub fn expected_ipkp_star_mono(params: &ParameterSet) -> Result<ExactRational> {
    let p = strict(params, Variant::IpkpStar)?;
    Ok(ipkp_star_formula(p.q, p.ell, p.m))
}

/// Expected solution count for `pkp` with `n = 1`.
pub fn expected_pkp_mono(params: &ParameterSet) -> Result<ExactRational> {
    let p = strict(params, Variant::Pkp)?;
    pkp_formula(p.q, p.ell, p.m)
}

/// Expected solution count for `pkp_star` with `n = 1`.
pub fn expected_pkp_star_mono(params: &ParameterSet) -> Result<ExactRational> {
    let p = strict(params, Variant::PkpStar)?;
    pkp_star_formula(p.q, p.ell, p.m)
}

fn undefined(what: &str) -> Error {
    ParamError::Undefined(what.to_string()).into()
}

/// `sum_k |S(m,k)| sum_r P[rank of the first m-k columns of A is r] *
/// prod_i (q^(m-r) - q^i) / (q^m - q^i)`, accumulated over a common
/// denominator.
fn ipkp_formula(q: u64, ell: u32, m: u32, n: u32) -> Result<ExactRational> {
    let full = big(exactnum::rank_count(ell, m, ell, q));
    let qm = pow(q, m);
    let col_den: BigInt = (0..n).map(|i| &qm - pow(q, i)).product();
    if full.is_zero() || col_den.is_zero() {
        return Err(undefined("no full-rank A or B exists"));
    }
    // prod_{i<n} (q^(m-r) - q^i) for r = 0..=min(ell, m)
    let col_num: Vec<BigInt> = (0..=ell.min(m))
        .map(|r| (0..n).map(|i| pow(q, m - r) - pow(q, i)).product())
        .collect();
    let stirling = exactnum::stirling1_row(m);
    let numerator: BigInt = par::sum_indexed(m as usize, |idx| {
        let k = idx as u32 + 1;
        let inner: BigInt = (0..=ell.min(m - k))
            .map(|r| {
                big(exactnum::rank_count(ell, m - k, r, q))
                    * big(exactnum::rank_count(ell - r, k, ell - r, q))
                    * pow(q, k * r)
                    * &col_num[r as usize]
            })
            .sum();
        big(stirling[k as usize].clone()) * inner
    });
    Ok(ExactRational::new(numerator, full * col_den))
}

/// `1 + (m! - 1)(q^(m-ell) - 1) / (q^m - 1)`.
fn ipkp_star_formula(q: u64, ell: u32, m: u32) -> ExactRational {
    let fact = ExactRational::from(big(exactnum::factorial(m)));
    let tail = qpow_signed(q, m, ell) - ExactRational::one();
    ExactRational::one() + (fact - ExactRational::one()) * tail / ExactRational::from(pow(q, m) - 1)
}

/// `q^(m-ell)` for possibly negative exponents.
fn qpow_signed(q: u64, m: u32, ell: u32) -> ExactRational {
    if ell <= m {
        ExactRational::from(pow(q, m - ell))
    } else {
        ExactRational::new(1, pow(q, ell - m))
    }
}

/// `sum_{d | q-1} phi(d) C(floor((q+m-1)/d), floor(m/d))`.
fn divisor_binomial_sum(q: u64, m: u32) -> BigInt {
    let m = u64::from(m);
    exactnum::divisors(q - 1)
        .into_iter()
        .map(|d| BigInt::from(exactnum::euler_phi(d)) * big(exactnum::binomial((q + m - 1) / d, m / d)))
        .sum()
}

/// `sum_{d | gcd(q-1, m)} phi(d) C((q-1)/d, m/d)`.
fn star_divisor_binomial_sum(q: u64, m: u32) -> BigInt {
    let m = u64::from(m);
    exactnum::divisors(exactnum::gcd(q - 1, m))
        .into_iter()
        .map(|d| BigInt::from(exactnum::euler_phi(d)) * big(exactnum::binomial((q - 1) / d, m / d)))
        .sum()
}

/// First term shared by both homogeneous formulas:
/// `m! (q^(m-ell) - q) / (q^m - q)` and the weight `q^m - q^(m-ell)`.
fn homogeneous_parts(q: u64, ell: u32, m: u32) -> Result<(ExactRational, ExactRational, BigInt)> {
    let fact = ExactRational::from(big(exactnum::factorial(m)));
    let qm = pow(q, m);
    let q_m_ell = qpow_signed(q, m, ell);
    let den = &qm - BigInt::from(q);
    if den.is_zero() {
        return Err(undefined("q^m - q = 0 (m = 1)"));
    }
    let first = &fact * &(&q_m_ell - &ExactRational::from(q)) / ExactRational::from(den.clone());
    let weight = ExactRational::from(qm) - q_m_ell;
    Ok((first, weight, den))
}

fn pkp_formula(q: u64, ell: u32, m: u32) -> Result<ExactRational> {
    let (first, weight, den) = homogeneous_parts(q, ell, m)?;
    let fact = ExactRational::from(big(exactnum::factorial(m)));
    let qm1 = pow(q, m) - 1;
    let bracket: BigInt = divisor_binomial_sum(q, m) - BigInt::from(q) + 1;
    let second = fact * weight * ExactRational::from(bracket) / ExactRational::from(qm1 * den);
    Ok(first + second)
}

fn pkp_star_formula(q: u64, ell: u32, m: u32) -> Result<ExactRational> {
    let (first, weight, den) = homogeneous_parts(q, ell, m)?;
    let choose = big(exactnum::binomial(q - 1, m.into()));
    if choose.is_zero() {
        return Err(undefined("C(q-1, m) = 0: no vector with m distinct nonzero entries"));
    }
    let second = weight * ExactRational::from(star_divisor_binomial_sum(q, m))
        / ExactRational::from(den * choose);
    Ok(first + second)
}

/// Probability that the first `m1` columns of a uniform rank-`ell`
/// `ell x (m1+m2)` matrix have rank `r`.
pub fn prob_block_rank(ell: u32, m1: u32, m2: u32, r: u32, q: u64) -> Result<ExactRational, ParamError> {
    if ell > m1 + m2 {
        return Err(ParamError::constraint("ell <= m1 + m2", format!("ell = {ell}, m1 + m2 = {}", m1 + m2)));
    }
    if r > ell.min(m1) {
        return Err(ParamError::constraint("0 <= r <= min(ell, m1)", format!("r = {r}")));
    }
    Ok(block_rank_unchecked(ell, m1, m2, r, q))
}

fn block_rank_unchecked(ell: u32, m1: u32, m2: u32, r: u32, q: u64) -> ExactRational {
    let num = exactnum::rank_count(ell, m1, r, q)
        * exactnum::rank_count(ell - r, m2, ell - r, q)
        * exactnum::pow(q, u64::from(m2) * u64::from(r));
    ExactRational::new(num, exactnum::rank_count(ell, m1 + m2, ell, q))
}

/// Which zero-product event to evaluate, for a fixed rank-`s` matrix `M`
/// of shape `m x m'`, `A` uniform of rank `ell` (`ell x m`) and `B`
/// uniform of rank `n` (`m' x n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroProduct {
    AM,
    MB,
    AMB,
}

fn column_space_ratio(total: u32, s: u32, count: u32, q: u64) -> ExactRational {
    // prod_{i<count} (q^(total-s) - q^i) / (q^total - q^i)
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..count {
        num *= pow(q, total - s) - pow(q, i);
        den *= pow(q, total) - pow(q, i);
    }
    ExactRational::new(num, den)
}

/// Probability that the chosen product vanishes. It depends on `M` only
/// through its rank `s`.
pub fn prob_zero_product(
    ell: u32,
    m: u32,
    mprime: u32,
    n: u32,
    s: u32,
    q: u64,
    which: ZeroProduct,
) -> Result<ExactRational, ParamError> {
    if s > m.min(mprime) {
        return Err(ParamError::constraint("s <= min(m, m')", format!("s = {s}, m = {m}, m' = {mprime}")));
    }
    if ell > m {
        return Err(ParamError::constraint("ell <= m", format!("ell = {ell}, m = {m}")));
    }
    if n > mprime {
        return Err(ParamError::constraint("n <= m'", format!("n = {n}, m' = {mprime}")));
    }
    Ok(match which {
        ZeroProduct::AM => column_space_ratio(m, s, ell, q),
        ZeroProduct::MB => column_space_ratio(mprime, s, n, q),
        ZeroProduct::AMB => (0..=ell.min(s))
            .map(|r| block_rank_unchecked(ell, s, m - s, r, q) * column_space_ratio(mprime, r, n, q))
            .sum(),
    })
}

/// `sum over sigma in S_m` of the number of nonzero eigenvectors of the
/// permutation matrix of `sigma` (all eigenvalues in `F_q^*`).
pub fn sum_e_sigma(m: u32, q: u64) -> Result<BigUint, ParamError> {
    if m < 1 {
        return Err(ParamError::TooSmall { name: "m", min: 1, value: 0 });
    }
    if q < 2 {
        return Err(ParamError::TooSmall { name: "q", min: 2, value: q });
    }
    let bracket: BigInt = divisor_binomial_sum(q, m) - BigInt::from(q) + 1;
    let total: BigInt = big(exactnum::factorial(m)) * bracket;
    Ok(total.to_biguint().expect("eigenvector counts are non-negative"))
}

/// As [`sum_e_sigma`], restricted to vectors with pairwise distinct nonzero
/// entries. Requires `1 <= m <= q - 1`.
pub fn sum_e_sigma_star(m: u32, q: u64) -> Result<BigUint, ParamError> {
    if m < 1 || u64::from(m) > q.saturating_sub(1) {
        return Err(ParamError::constraint("1 <= m <= q - 1", format!("m = {m}, q = {q}")));
    }
    let total: BigInt = big(exactnum::factorial(m)) * star_divisor_binomial_sum(q, m);
    Ok(total.to_biguint().expect("non-negative"))
}

/// Whether `sum_{d | gcd(q-1, m)} phi(d) C((q-1)/d, m/d) < 3 C(q-1, m)`,
/// which holds for `1 <= m <= q - 2`.
pub fn check_star_sum_bound(m: u32, q: u64) -> Result<bool, ParamError> {
    if m < 1 || u64::from(m) > q.saturating_sub(2) {
        return Err(ParamError::constraint("1 <= m <= q - 2", format!("m = {m}, q = {q}")));
    }
    let lhs = star_divisor_binomial_sum(q, m);
    let rhs = big(exactnum::binomial(q - 1, m.into())) * 3;
    Ok(lhs < rhs)
}

//! Exact integer kernels: factorials, binomials, Euler's totient, divisors,
//! unsigned Stirling numbers of the first kind and rank-class cardinalities
//! of matrices over a finite field.

mod rational;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::ParamError;

pub use rational::ExactRational;

/// Largest field size supported by factorization and field arithmetic.
pub const MAX_Q: u64 = 1 << 31;

pub fn factorial(k: u32) -> BigUint {
    (2..=u64::from(k)).fold(BigUint::one(), |acc, i| acc * i)
}

/// `C(a, b)`, zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        // acc is now C(a, i+1) * (i+1), an exact multiple of i+1
        let (quo, rem) = acc.div_rem(&BigUint::from(i + 1));
        debug_assert!(rem.is_zero());
        acc = quo;
    }
    acc
}

/// `base^exp` as a big integer.
pub fn pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= k {
        if k.is_multiple_of(p) {
            let mut e = 0;
            while k.is_multiple_of(p) {
                k /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

pub fn is_prime(k: u64) -> bool {
    k >= 2 && factorize(k) == [(k, 1)]
}

/// `Some((p, e))` with `k = p^e` when `k` is a prime power.
pub fn prime_power(k: u64) -> Option<(u64, u32)> {
    match factorize(k).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn euler_phi(k: u64) -> u64 {
    assert!(k >= 1, "euler_phi is defined for k >= 1");
    factorize(k)
        .into_iter()
        .fold(k, |acc, (p, _)| acc / p * (p - 1))
}

/// All positive divisors of `k`, ascending.
pub fn divisors(k: u64) -> Vec<u64> {
    assert!(k >= 1, "divisors are defined for k >= 1");
    let mut divs = vec![1u64];
    for (p, e) in factorize(k) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

type StirlingRow = Arc<[BigUint]>;

fn stirling_cache() -> &'static RwLock<HashMap<u32, StirlingRow>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, StirlingRow>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Row `m` of the unsigned Stirling numbers of the first kind, indexed by
/// `k = 0..=m`. Rows are memoized process-wide.
pub fn stirling1_row(m: u32) -> StirlingRow {
    if let Some(row) = stirling_cache().read().unwrap().get(&m) {
        return Arc::clone(row);
    }
    // |S(i, k)| = |S(i-1, k-1)| + (i-1) |S(i-1, k)|
    let mut row = vec![BigUint::one()];
    for i in 1..=m as usize {
        let mut next = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let mut v = row[k - 1].clone();
            if k < row.len() {
                v += &row[k] * (i - 1);
            }
            next[k] = v;
        }
        row = next;
    }
    let row: StirlingRow = row.into();
    stirling_cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&row));
    row
}

/// Number of permutations of `m` elements with exactly `k` disjoint cycles.
pub fn stirling1_unsigned(m: u32, k: u32) -> Result<BigUint, ParamError> {
    if k < 1 || k > m {
        return Err(ParamError::constraint(
            "1 <= k <= m",
            format!("k = {k}, m = {m}"),
        ));
    }
    Ok(stirling1_row(m)[k as usize].clone())
}

/// Number of `m x n` matrices of rank exactly `r` over a field of `q`
/// elements: `prod_{i<r} (q^m - q^i)(q^n - q^i) / (q^r - q^i)`.
pub fn rank_count(m: u32, n: u32, r: u32, q: u64) -> BigUint {
    if r > m.min(n) {
        return BigUint::zero();
    }
    let qm = pow(q, m.into());
    let qn = pow(q, n.into());
    let qr = pow(q, r.into());
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let mut qi = BigUint::one();
    for _ in 0..r {
        num *= (&qm - &qi) * (&qn - &qi);
        den *= &qr - &qi;
        qi *= q;
    }
    let (quo, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "rank_count: inexact division");
    quo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        let oracle: u64 = (1..=20u64).product();
        assert_eq!(factorial(20), BigUint::from(oracle));
        assert_eq!(oracle, 2432902008176640000);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(7, 0), BigUint::one());
        // C(250, 69) = 250! / (69! 181!)
        let direct = factorial(250) / (factorial(69) * factorial(181));
        assert_eq!(binomial(250, 69), direct);
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(divisors(12).iter().map(|&d| euler_phi(d)).sum::<u64>(), 12);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1021), vec![1, 1021]);
        assert_eq!(divisors(250), vec![1, 2, 5, 10, 25, 50, 125, 250]);
    }

    #[test]
    fn primes_and_prime_powers() {
        assert!(is_prime(2) && is_prime(251) && is_prime(1021));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(1020));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(2147483647), Some((2147483647, 1)));
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling1_unsigned(6, 6).unwrap(), BigUint::one());
        assert_eq!(stirling1_unsigned(3, 1).unwrap(), BigUint::from(2u32));
        assert!(stirling1_unsigned(3, 0).is_err());
        assert!(stirling1_unsigned(3, 4).is_err());
        for m in 1..=8 {
            let total: BigUint = stirling1_row(m).iter().sum();
            assert_eq!(total, factorial(m));
        }
    }

    #[test]
    fn rank_count_small() {
        for q in [2u64, 3, 5, 1021] {
            assert_eq!(rank_count(1, 1, 1, q), BigUint::from(q - 1));
        }
        assert_eq!(rank_count(2, 2, 1, 2), BigUint::from(9u32));
        assert_eq!(rank_count(2, 2, 2, 2), BigUint::from(6u32));
        assert_eq!(rank_count(2, 3, 3, 2), BigUint::zero());
        assert_eq!(rank_count(0, 4, 0, 7), BigUint::one());
    }

    #[test]
    fn rank_census_totals() {
        for q in [2u64, 3, 5] {
            for m in 0..=4u32 {
                for n in 0..=4u32 {
                    let total: BigUint = (0..=m.min(n)).map(|r| rank_count(m, n, r, q)).sum();
                    assert_eq!(total, pow(q, (m * n).into()), "q={q} m={m} n={n}");
                    for r in 0..=4 {
                        assert_eq!(rank_count(m, n, r, q), rank_count(n, m, r, q));
                    }
                }
            }
        }
    }
}

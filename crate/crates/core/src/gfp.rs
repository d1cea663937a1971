//! Arithmetic in the prime field `F_q`.
//!
//! Field elements are plain `u32` values in `[0, q)`; the modulus lives in
//! an [`Fq`] context rather than in every element.

use crate::error::{Error, ParamError};
use crate::exactnum;
use crate::params;

/// An element of `F_q`, always reduced into `[0, q)`.
pub type FieldElement = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    q: u32,
}

impl Fq {
    /// `q` must be a prime not exceeding 2^31.
    pub fn new(q: u64) -> Result<Self, ParamError> {
        params::require_prime(q)?;
        Ok(Fq { q: q as u32 })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn contains(self, x: u64) -> bool {
        x < u64::from(self.q)
    }

    #[inline]
    pub fn reduce(self, x: u64) -> FieldElement {
        (x % u64::from(self.q)) as u32
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = u64::from(a) + u64::from(b);
        let q = u64::from(self.q);
        (if s >= q { s - q } else { s }) as u32
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            (u64::from(a) + u64::from(self.q) - u64::from(b)) as u32
        }
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        (u64::from(a) * u64::from(b) % u64::from(self.q)) as u32
    }

    pub fn pow(self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: FieldElement) -> Result<FieldElement, Error> {
        if a.is_multiple_of(self.q) {
            return Err(Error::DivisionByZero { q: self.q.into() });
        }
        let (mut r0, mut r1) = (i64::from(self.q), i64::from(a));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quo = r0 / r1;
            (r0, r1) = (r1, r0 - quo * r1);
            (t0, t1) = (t1, t0 - quo * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(i64::from(self.q)) as u32)
    }

    /// Least `d >= 1` with `a^d = 1`; tries the divisors of `q - 1` in
    /// ascending order.
    pub fn multiplicative_order(self, a: FieldElement) -> Result<u64, Error> {
        if a.is_multiple_of(self.q) {
            return Err(Error::DivisionByZero { q: self.q.into() });
        }
        let group = u64::from(self.q) - 1;
        exactnum::divisors(group)
            .into_iter()
            .find(|&d| self.pow(a, d) == 1)
            .ok_or_else(|| Error::Internal(format!("no order found for {a} in F_{}", self.q)))
    }

    pub fn elements(self) -> impl Iterator<Item = FieldElement> + Clone {
        0..self.q
    }

    pub fn nonzero(self) -> impl Iterator<Item = FieldElement> + Clone {
        1..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_primes() {
        assert!(Fq::new(4).is_err());
        assert!(Fq::new(1).is_err());
        assert!(Fq::new(1 << 32).is_err());
        assert!(Fq::new(2147483647).is_ok());
    }

    #[test]
    fn inverse_examples() {
        let f7 = Fq::new(7).unwrap();
        assert_eq!(f7.inv(3).unwrap(), 5);
        assert_eq!(Fq::new(2).unwrap().inv(1).unwrap(), 1);
        assert!(matches!(f7.inv(0), Err(Error::DivisionByZero { q: 7 })));
        let f5 = Fq::new(5).unwrap();
        for x in f5.nonzero() {
            assert_eq!(f5.inv(f5.inv(x).unwrap()).unwrap(), x);
        }
        let big = Fq::new(2147483647).unwrap();
        let x = 123456789;
        assert_eq!(big.mul(x, big.inv(x).unwrap()), 1);
    }

    #[test]
    fn order_examples() {
        let f7 = Fq::new(7).unwrap();
        assert_eq!(f7.multiplicative_order(1).unwrap(), 1);
        // 3, 2, 6, 4, 5, 1
        assert_eq!(f7.multiplicative_order(3).unwrap(), 6);
        assert_eq!(Fq::new(5).unwrap().multiplicative_order(4).unwrap(), 2);
        assert!(f7.multiplicative_order(0).is_err());
    }

    #[test]
    fn elements_of_each_order_counted_by_phi() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let f = Fq::new(q).unwrap();
            for d in exactnum::divisors(q - 1) {
                let count = f
                    .nonzero()
                    .filter(|&x| f.multiplicative_order(x).unwrap() == d)
                    .count() as u64;
                assert_eq!(count, exactnum::euler_phi(d), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2u64, 3, 5, 7] {
            let f = Fq::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.sub(a, a), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(f.sub(a, b), b), a);
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }
}

use std::fmt;

use crate::error::{Error, Result};
use crate::gfp::Fq;
use crate::linalg::FqMatrix;

/// A permutation of `{0, .., m-1}`; `images[i] = pi(i)`.
///
/// Matrix convention: the permutation matrix of `pi` has a one at
/// `(i, pi(i))`, so row `i` of `Pi * B` is row `pi(i)` of `B`.
///
/// Two products are provided. [`Permutation::compose`] is function
/// composition, `(s.compose(t))(i) = s(t(i))`, for which
/// `permute_rows(s.compose(t), X) = permute_rows(t, permute_rows(s, X))`.
/// [`Permutation::product`] is the product matching matrix multiplication,
/// `matrix(s.product(t)) = matrix(s) * matrix(t)`, i.e. `s.product(t) = t.compose(s)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (0..m as u32).collect(),
        }
    }

    /// From zero-indexed images; fails unless they form a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for (i, &v) in images.iter().enumerate() {
            let v = v as usize;
            if v >= m || std::mem::replace(&mut seen[v], true) {
                return Err(Error::parse(
                    format!("pi[{i}]"),
                    "permutation images must be a bijection",
                ));
            }
        }
        Ok(Permutation { images })
    }

    /// From one-indexed images, as stored in instance files.
    pub fn from_one_indexed(images: &[u64]) -> Result<Self> {
        let zero = images
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v == 0 || v > images.len() as u64 {
                    Err(Error::parse(
                        format!("pi[{i}]"),
                        format!("image {v} outside 1..={}", images.len()),
                    ))
                } else {
                    Ok((v - 1) as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(zero)
    }

    pub fn to_one_indexed(&self) -> Vec<u64> {
        self.images.iter().map(|&v| u64::from(v) + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `(self o other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "compose: length mismatch");
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    /// Product consistent with permutation matrices: `self` acts first.
    pub fn product(&self, other: &Permutation) -> Permutation {
        other.compose(self)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// Cycle lengths, descending; fixed points count as 1-cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut lens = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_type().len()
    }

    pub fn matrix(&self, field: Fq) -> FqMatrix {
        let m = self.len();
        let mut out = FqMatrix::zeros(field, m, m);
        for i in 0..m {
            out.set(i, self.apply(i), 1);
        }
        out
    }

    /// `rank(Pi - I) = m - #cycles`. Debug builds cross-check against an
    /// explicit rank computation over `F_2`.
    pub fn rank_sigma_minus_identity(&self) -> usize {
        let r = self.len() - self.num_cycles();
        #[cfg(debug_assertions)]
        if self.len() <= 16 {
            let f = Fq::new(2).expect("2 is prime");
            let explicit = self
                .matrix(f)
                .sub(&FqMatrix::identity(f, self.len()))
                .expect("same shape")
                .rank();
            debug_assert_eq!(r, explicit);
        }
        r
    }

    /// Advances to the next permutation in lexicographic order of the image
    /// sequence; returns `false` (leaving `self` unchanged) at the last one.
    pub fn next_lexicographic(&mut self) -> bool {
        let v = &mut self.images;
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("exists");
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    /// All of `S_m` in lexicographic order.
    pub fn all(m: usize) -> AllPermutations {
        AllPermutations {
            next: Some(Permutation::identity(m)),
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.to_one_indexed())
    }
}

pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if succ.next_lexicographic() {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum;

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<_> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Permutation::all(1).count(), 1);
        assert_eq!(Permutation::all(0).count(), 1);
    }

    #[test]
    fn cycle_counts_match_stirling() {
        for m in 1..=6u32 {
            let row = exactnum::stirling1_row(m);
            let mut counts = vec![0u64; m as usize + 1];
            for p in Permutation::all(m as usize) {
                counts[p.num_cycles()] += 1;
            }
            for k in 1..=m as usize {
                assert_eq!(exactnum::ExactRational::from(row[k].clone()), counts[k].into());
            }
        }
    }

    #[test]
    fn one_indexed_round_trip_and_validation() {
        let p = Permutation::from_one_indexed(&[2, 3, 1]).unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.to_one_indexed(), vec![2, 3, 1]);
        assert!(Permutation::from_one_indexed(&[1, 1, 2]).is_err());
        assert!(Permutation::from_one_indexed(&[0, 1]).is_err());
        assert!(Permutation::from_one_indexed(&[1, 3]).is_err());
    }

    #[test]
    fn matrix_product_matches_permutation_product() {
        let f = Fq::new(3).unwrap();
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                let lhs = s.product(&t).matrix(f);
                let rhs = s.matrix(f).mat_mul(&t.matrix(f)).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(s.compose(&t).apply(0), s.apply(t.apply(0)));
            }
        }
    }

    #[test]
    fn inverse_and_identity() {
        for p in Permutation::all(4) {
            assert!(p.compose(&p.inverse()).is_identity());
            assert!(p.product(&p.inverse()).is_identity());
        }
    }

    #[test]
    fn rank_sigma_minus_identity_exhaustive() {
        assert_eq!(Permutation::identity(5).rank_sigma_minus_identity(), 0);
        let cycle = Permutation::from_images(vec![1, 2, 3, 4, 0]).unwrap();
        assert_eq!(cycle.rank_sigma_minus_identity(), 4);
        let f = Fq::new(3).unwrap();
        for s in Permutation::all(4) {
            let explicit = s.matrix(f).sub(&FqMatrix::identity(f, 4)).unwrap().rank();
            assert_eq!(s.rank_sigma_minus_identity(), explicit);
        }
    }
}

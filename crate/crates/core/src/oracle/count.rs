use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::Instance;
use crate::linalg::{FqMatrix, Permutation};
use crate::oracle::{Caps, HARD_MAX_M};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolutionCount {
    pub n_sol: u64,
    /// Size of the search space, `m!`.
    pub enumerated: u64,
    /// The instance carries a secret and it is among the solutions.
    pub contains_secret: bool,
}

fn check_cap(m: usize, caps: &Caps) -> Result<()> {
    let cap = caps.max_m.min(HARD_MAX_M) as usize;
    if m > cap {
        return Err(Error::CapExceeded {
            what: "solution enumeration",
            size: format!("m = {m} ({m}! permutations)"),
            cap: format!("m <= {cap}"),
        });
    }
    Ok(())
}

/// Counts permutations `rho` with `A * P_rho * B = C` by enumerating
/// `S_m` in lexicographic order.
pub fn count_solutions(instance: &Instance, caps: &Caps) -> Result<SolutionCount> {
    let (a, b, c) = (instance.a(), instance.b(), instance.c());
    let n_sol = count_with(a, b, &c, caps)?;
    let m = a.cols();
    Ok(SolutionCount {
        n_sol,
        enumerated: (1..=m as u64).product(),
        contains_secret: instance.secret().is_some_and(|pi| instance.is_solution(pi)),
    })
}

/// Solution count for raw matrices `A (ell x m)`, `B (m x n)`, `C (ell x n)`.
pub fn count_with(a: &FqMatrix, b: &FqMatrix, c: &FqMatrix, caps: &Caps) -> Result<u64> {
    if a.cols() != b.rows() || (c.rows(), c.cols()) != (a.rows(), b.cols()) {
        return Err(Error::Dimension("A * P * B = C shapes disagree".into()));
    }
    check_cap(a.cols(), caps)?;
    Ok(Counter::new(a, b, c).count())
}

/// Unpruned enumeration with full matrix products; kept for differential
/// testing of the pruned search.
pub fn count_solutions_reference(instance: &Instance, caps: &Caps) -> Result<u64> {
    let m = instance.params().m as usize;
    check_cap(m, caps)?;
    let c = instance.c();
    let mut n = 0;
    for rho in Permutation::all(m) {
        if instance.a().mat_mul(&instance.b().permute_rows(&rho)?)? == c {
            n += 1;
        }
    }
    Ok(n)
}

/// Depth-first search over `rho(0), rho(1), ..` with running partial sums
/// of `A * P_rho * B`. Row `i` of the product is final once every nonzero
/// entry of row `i` of `A` has been assigned; a final row that disagrees
/// with `C` prunes the whole subtree.
pub(crate) struct Counter {
    q: u64,
    ell: usize,
    m: usize,
    n: usize,
    /// Column-major copy of `A`: `a_cols[j * ell + i] = A[i][j]`.
    a_cols: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
    /// Rows of `A` whose last nonzero entry is in column `j`.
    finals: Vec<Vec<usize>>,
    /// Zero rows of `A` must already match `C`.
    zero_rows_match: bool,
}

impl Counter {
    pub(crate) fn new(a: &FqMatrix, b: &FqMatrix, c: &FqMatrix) -> Self {
        let (ell, m, n) = (a.rows(), a.cols(), b.cols());
        let mut a_cols = vec![0u64; ell * m];
        for i in 0..ell {
            for j in 0..m {
                a_cols[j * ell + i] = a.get(i, j).into();
            }
        }
        let mut finals = vec![Vec::new(); m];
        let mut zero_rows_match = true;
        for i in 0..ell {
            match (0..m).rev().find(|&j| a.get(i, j) != 0) {
                Some(j) => finals[j].push(i),
                None => zero_rows_match &= c.row(i).iter().all(|&v| v == 0),
            }
        }
        Counter {
            q: a.field().q().into(),
            ell,
            m,
            n,
            a_cols,
            b: b.entries().iter().map(|&x| x.into()).collect(),
            c: c.entries().iter().map(|&x| x.into()).collect(),
            finals,
            zero_rows_match,
        }
    }

    pub(crate) fn count(&self) -> u64 {
        if !self.zero_rows_match {
            return 0;
        }
        if self.m < 6 {
            return self.count_subtree(None);
        }
        par::sum_indexed(self.m, |first| self.count_subtree(Some(first)))
    }

    /// Count with `rho(0)` fixed to `first`, or over everything.
    fn count_subtree(&self, first: Option<usize>) -> u64 {
        let width = self.ell * self.n;
        let mut acc = vec![0u64; (self.m + 1) * width];
        match first {
            None => self.dfs(0, 0, &mut acc),
            Some(v) => {
                if self.assign(0, v, &mut acc) {
                    self.dfs(1, 1u64 << v, &mut acc)
                } else {
                    0
                }
            }
        }
    }

    /// Writes level `pos + 1` of `acc` for `rho(pos) = v`; false if a row
    /// finalized at `pos` disagrees with `C`.
    #[inline]
    fn assign(&self, pos: usize, v: usize, acc: &mut [u64]) -> bool {
        let width = self.ell * self.n;
        let (lo, hi) = acc.split_at_mut((pos + 1) * width);
        let src = &lo[pos * width..];
        let dst = &mut hi[..width];
        let brow = &self.b[v * self.n..(v + 1) * self.n];
        for i in 0..self.ell {
            let aij = self.a_cols[pos * self.ell + i];
            let row = i * self.n..(i + 1) * self.n;
            for ((d, &s), &b) in dst[row.clone()].iter_mut().zip(&src[row]).zip(brow) {
                *d = if aij == 0 { s } else { (s + aij * b) % self.q };
            }
        }
        self.finals[pos].iter().all(|&i| {
            dst[i * self.n..(i + 1) * self.n] == self.c[i * self.n..(i + 1) * self.n]
        })
    }

    fn dfs(&self, pos: usize, used: u64, acc: &mut [u64]) -> u64 {
        if pos == self.m {
            return 1;
        }
        let mut total = 0;
        for v in 0..self.m {
            if used & (1 << v) != 0 {
                continue;
            }
            if self.assign(pos, v, acc) {
                total += self.dfs(pos + 1, used | (1 << v), acc);
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{self, PkpInstance};
    use crate::gfp::Fq;
    use crate::params::{ParameterSet, Variant};
    use crate::sampling::{self, SeededRng};

    fn m(q: u64, rows: &[&[u64]]) -> FqMatrix {
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        FqMatrix::from_rows(Fq::new(q).unwrap(), "X", &rows).unwrap()
    }

    #[test]
    fn hand_examples() {
        let caps = Caps::default();
        let b = m(2, &[&[1], &[0]]);
        assert_eq!(count_with(&m(2, &[&[1, 1]]), &b, &m(2, &[&[1]]), &caps).unwrap(), 2);
        assert_eq!(count_with(&m(2, &[&[1, 0]]), &b, &m(2, &[&[0]]), &caps).unwrap(), 1);
    }

    #[test]
    fn zero_row_mismatch_has_no_solutions() {
        let caps = Caps::default();
        let a = m(3, &[&[0, 0, 0], &[1, 2, 0]]);
        let b = m(3, &[&[1], &[2], &[0]]);
        assert_eq!(count_with(&a, &b, &m(3, &[&[1], &[0]]), &caps).unwrap(), 0);
    }

    #[test]
    fn cap_refusal() {
        let caps = Caps { max_m: 3, ..Caps::default() };
        let p = ParameterSet::new(Variant::Ipkp, 5, 1, 4, 1).unwrap();
        let inst = generators::generate(&p, &mut SeededRng::new(1)).unwrap();
        assert!(matches!(count_solutions(&inst, &caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn generated_instances_contain_secret() {
        let caps = Caps::default();
        let mut rng = SeededRng::new(2);
        for v in Variant::ALL {
            let p = ParameterSet::new(v, 5, 2, 6, 2).unwrap();
            for _ in 0..10 {
                let inst = generators::generate(&p, &mut rng).unwrap();
                let sc = count_solutions(&inst, &caps).unwrap();
                assert!(sc.n_sol >= 1 && sc.contains_secret);
                assert_eq!(sc.enumerated, 720);
                assert!(!count_solutions(&inst.clone().without_secret(), &caps).unwrap().contains_secret);
            }
        }
    }

    #[test]
    fn pruned_matches_reference() {
        let caps = Caps::default();
        let mut rng = SeededRng::new(3);
        for (q, ell, mm, n) in [(2u64, 1u32, 5u32, 1u32), (3, 2, 6, 1), (2, 1, 6, 2), (5, 3, 6, 2), (2, 2, 7, 1)] {
            for v in Variant::ALL {
                let Ok(p) = ParameterSet::new(v, q, ell, mm, n) else { continue };
                for _ in 0..5 {
                    let inst = generators::generate(&p, &mut rng).unwrap();
                    assert_eq!(
                        count_solutions(&inst, &caps).unwrap().n_sol,
                        count_solutions_reference(&inst, &caps).unwrap(),
                        "{p}"
                    );
                }
            }
        }
        // sparse A with zero rows exercises the pruning paths
        let f = Fq::new(2).unwrap();
        for _ in 0..20 {
            let a = sampling::sample_matrix(f, 3, 6, &mut rng);
            let b = sampling::sample_matrix(f, 6, 1, &mut rng);
            let c = sampling::sample_matrix(f, 3, 1, &mut rng);
            let mut reference = 0;
            for rho in Permutation::all(6) {
                if a.mat_mul(&b.permute_rows(&rho).unwrap()).unwrap() == c {
                    reference += 1;
                }
            }
            assert_eq!(count_with(&a, &b, &c, &caps).unwrap(), reference);
        }
    }

    #[test]
    fn relabelling_rows_of_b_preserves_count() {
        let caps = Caps::default();
        let p = ParameterSet::new(Variant::Pkp, 3, 1, 3, 1).unwrap();
        let mut rng = SeededRng::new(4);
        for _ in 0..20 {
            let inst = generators::gen_pkp(&p, &mut rng).unwrap();
            let base = count_solutions(&inst.clone().into(), &caps).unwrap().n_sol;
            let pi = inst.secret.clone().unwrap();
            for tau in Permutation::all(3) {
                // P_s * P_tau = P_pi
                let moved = PkpInstance {
                    b: inst.b.permute_rows(&tau).unwrap(),
                    secret: Some(pi.product(&tau.inverse())),
                    ..inst.clone()
                };
                let moved: Instance = moved.into();
                moved.validate().unwrap();
                let sc = count_solutions(&moved, &caps).unwrap();
                assert_eq!(sc.n_sol, base);
                assert!(sc.contains_secret);
            }
        }
    }
}

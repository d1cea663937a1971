//! Dense matrices over a prime field.

mod perm;

use std::fmt;

use crate::error::{Error, Result};
use crate::gfp::{FieldElement, Fq};

pub use perm::{AllPermutations, Permutation};

/// Row-major dense matrix over `F_q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: Fq,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FqMatrix {
    pub fn zeros(field: Fq, rows: usize, cols: usize) -> Self {
        FqMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fq, m: usize) -> Self {
        let mut out = Self::zeros(field, m, m);
        for i in 0..m {
            out.set(i, i, 1);
        }
        out
    }

    /// Entries must already be reduced into `[0, q)`.
    pub fn from_vec(field: Fq, rows: usize, cols: usize, data: Vec<FieldElement>) -> Self {
        assert_eq!(data.len(), rows * cols, "from_vec: wrong entry count");
        debug_assert!(data.iter().all(|&x| x < field.q()));
        FqMatrix { field, rows, cols, data }
    }

    /// From nested rows, validating shape and entry range. `name` is used in
    /// error locations, e.g. `A[1][2]`.
    pub fn from_rows(field: Fq, name: &str, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::parse(
                    format!("{name}[{i}]"),
                    format!("row has {} entries, expected {cols}", row.len()),
                ));
            }
            for (j, &x) in row.iter().enumerate() {
                if !field.contains(x) {
                    return Err(Error::parse(
                        format!("{name}[{i}][{j}]"),
                        format!("entry {x} outside [0, {})", field.q()),
                    ));
                }
                data.push(x as u32);
            }
        }
        Ok(FqMatrix { field, rows: rows.len(), cols, data })
    }

    pub fn from_fn(
        field: Fq,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.reduce(f(i, j).into()));
            }
        }
        FqMatrix { field, rows, cols, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| x.into()).collect())
            .collect()
    }

    #[inline]
    pub fn field(&self) -> Fq {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        debug_assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_field(&self, other: &FqMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Dimension(format!(
                "modulus mismatch: F_{} vs F_{}",
                self.field.q(),
                other.field.q()
            )));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let q = u64::from(f.q());
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + u64::from(a) * u64::from(b)) % q;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.set(i, j, v as u32);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(FqMatrix { data, ..*self })
    }

    pub fn transpose(&self) -> FqMatrix {
        FqMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hconcat(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        Ok(FqMatrix::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    /// Pivots are the first nonzero entry in column order.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : x * self = 0}` as the rows of a
    /// `(rows - rank) x rows` matrix in reduced row echelon form.
    pub fn left_kernel_basis(&self) -> FqMatrix {
        let f = self.field;
        let m = self.rows;
        // x X = 0  <=>  X^T x^T = 0: null space of the transpose
        let (r, pivots) = self.transpose().rref();
        let mut is_pivot = vec![false; m];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        let free: Vec<usize> = (0..m).filter(|&c| !is_pivot[c]).collect();
        let mut basis = FqMatrix::zeros(f, free.len(), m);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(r.get(i, fc)));
            }
        }
        basis.rref().0
    }

    /// Row `i` of the result is row `pi(i)` of `self`, i.e. `Pi * self`.
    pub fn permute_rows(&self, pi: &Permutation) -> Result<FqMatrix> {
        if pi.len() != self.rows {
            return Err(Error::Dimension(format!(
                "permutation of length {} applied to {} rows",
                pi.len(),
                self.rows
            )));
        }
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(pi.apply(i)));
        }
        Ok(FqMatrix { data, ..*self })
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqMatrix<F_{}>{:?}", self.field.q(), self.to_rows())
    }
}

/// Iterates every `rows x cols` matrix over `F_q` (q^(rows*cols) of them)
/// in base-q counting order.
pub fn all_matrices(field: Fq, rows: usize, cols: usize) -> impl Iterator<Item = FqMatrix> {
    let total = (u64::from(field.q())).checked_pow((rows * cols) as u32);
    let total = total.expect("matrix space too large to enumerate");
    (0..total).map(move |mut code| {
        let q = u64::from(field.q());
        let mut data = vec![0u32; rows * cols];
        for slot in data.iter_mut() {
            *slot = (code % q) as u32;
            code /= q;
        }
        FqMatrix::from_vec(field, rows, cols, data)
    })
}

/// Every `k x n` matrix of rank `k` in reduced row echelon form, one per
/// `k`-dimensional subspace of `F_q^n`.
pub fn all_rref_full_rank(field: Fq, k: usize, n: usize) -> Vec<FqMatrix> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let q = u64::from(field.q());
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row i, col j) with j > pivots[i], j not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = &pivots;
                (pv[i] + 1..n).filter(move |j| !pv.contains(j)).map(move |j| (i, j))
            })
            .collect();
        let count = q.pow(free.len() as u32);
        for mut code in 0..count {
            let mut mat = FqMatrix::zeros(field, k, n);
            for (i, &p) in pivots.iter().enumerate() {
                mat.set(i, p, 1);
            }
            for &(i, j) in &free {
                mat.set(i, j, (code % q) as u32);
                code /= q;
            }
            out.push(mat);
        }
        // next k-combination of 0..n
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out
}

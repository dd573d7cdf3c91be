//! Dense linear algebra over the prime fields `F_p`, `p` in {2,3,5,7}.
//!
//! Matrices are small (dimensions rarely exceed 10) and entries are stored
//! as `u32` residues.  Provides row reduction, kernel bases, subspace
//! enumeration in reduced-echelon canonical form, `|GL_n(F_p)|` and
//! Gaussian binomials for closed-form cross-checks.

use num::bigint::BigUint;
use num::traits::One;

use crate::error::{Error, Result};

pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

pub fn check_prime(p: u32) -> Result<()> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::Config(format!("unsupported field size {p}; expected one of {SUPPORTED_PRIMES:?}")))
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p <= 7, brute force is fine.
    (1..p).find(|&x| (a * x) % p == 1).expect("inverse of zero")
}

/// A dense `rows x cols` matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> FpMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = FpMatrix::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Flat entry list, row-major; used as a hash/canonical key.
    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        assert_eq!(self.p, other.p);
        let mut out = FpMatrix::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % self.p;
                    out.data[i * other.cols + j] = v;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn neg(&self) -> FpMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = (self.p - *a) % self.p;
        }
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add(&other.neg())
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = FpMatrix::zero(self.p, self.rows + other.rows, self.cols);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &FpMatrix) -> FpMatrix {
        let mut m = FpMatrix::zero(self.p, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    let (a, b) = (self.get(row, j), self.get(pr, j));
                    self.set(row, j, b);
                    self.set(pr, j, a);
                }
            }
            let inv = inv_mod(self.get(row, col), p);
            for j in 0..self.cols {
                let v = (self.get(row, j) * inv) % p;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let f = self.get(r, col);
                    for j in 0..self.cols {
                        let v = (self.get(r, j) + (p - f) * self.get(row, j)) % p;
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`, as rows.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - r.get(i, free)) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of a square invertible matrix; `None` if singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FpMatrix::zero(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut inv = FpMatrix::zero(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Row span of `self` contains `v`?
    pub fn row_span_contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.cols);
        let probe = FpMatrix::from_rows(self.p, &[v.to_vec()]);
        self.vstack(&probe).rank() == self.rank()
    }

    /// Solve `x * self = v` for a row vector `x`; `None` if unsolvable.
    pub fn solve_left(&self, v: &[u32]) -> Option<Vec<u32>> {
        // Transpose to the standard column problem self^T x^T = v^T.
        let t = self.transpose();
        let n = t.cols;
        let mut aug = FpMatrix::zero(self.p, t.rows, n + 1);
        for i in 0..t.rows {
            for j in 0..n {
                aug.set(i, j, t.get(i, j));
            }
            aug.set(i, n, v[i]);
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&n) {
            return None;
        }
        let mut x = vec![0u32; n];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, n);
        }
        Some(x)
    }
}

/// `|GL_n(F_p)| = prod_{i<n} (p^n - p^i)`.
pub fn gl_order(n: usize, p: u32) -> BigUint {
    let pb = BigUint::from(p);
    let pn = pb.pow(n as u32);
    let mut out = BigUint::one();
    for i in 0..n {
        out *= &pn - pb.pow(i as u32);
    }
    out
}

/// Gaussian binomial `[n choose k]_p`: the number of `k`-dimensional
/// subspaces of `F_p^n`.
pub fn gaussian_binomial(n: usize, k: usize, p: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let pb = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pb.pow((n - i) as u32) - BigUint::one();
        den *= pb.pow((i + 1) as u32) - BigUint::one();
    }
    // The quotient is exact.
    num / den
}

/// All `k`-dimensional subspaces of `F_p^n`, each as the unique reduced
/// row echelon basis matrix (`k x n`, full rank).
pub fn enumerate_subspaces(n: usize, k: usize, p: u32) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // Choose pivot columns c_0 < ... < c_{k-1}; free entries sit at (i, j)
    // with j > c_i and j not a pivot column.
    let mut pivots = (0..k).collect::<Vec<usize>>();
    loop {
        let mut free = Vec::new();
        for (i, &ci) in pivots.iter().enumerate() {
            for j in ci + 1..n {
                if !pivots.contains(&j) {
                    free.push((i, j));
                }
            }
        }
        let total = free.len();
        let mut counter = vec![0u32; total];
        loop {
            let mut m = FpMatrix::zero(p, k, n);
            for (i, &ci) in pivots.iter().enumerate() {
                m.set(i, ci, 1);
            }
            for (idx, &(i, j)) in free.iter().enumerate() {
                m.set(i, j, counter[idx]);
            }
            out.push(m);
            // Odometer over F_p^total.
            let mut pos = 0;
            loop {
                if pos == total {
                    break;
                }
                counter[pos] += 1;
                if counter[pos] < p {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
            if pos == total {
                break;
            }
        }
        // Next pivot combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] + (k - i) <= n - 1 {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All vectors of `F_p^n` in odometer order (including zero).
pub fn enumerate_vectors(n: usize, p: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut v = vec![0u32; n];
    loop {
        out.push(v.clone());
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            v[pos] += 1;
            if v[pos] < p {
                break;
            }
            v[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        // Over F_2: rows (1,1,0), (0,1,1) -> kernel spanned by (1,1,1).
        let m = FpMatrix::from_rows(2, &[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![1, 1, 1]]);
        // Over F_5 a random invertible matrix round-trips through inverse.
        let a = FpMatrix::from_rows(5, &[vec![2, 3], vec![1, 3]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), FpMatrix::identity(5, 2));
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(1, 2), BigUint::from(1u32));
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        assert_eq!(gl_order(2, 3), BigUint::from(48u32));
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for p in [2u32, 3] {
            for n in 0..=4usize {
                for k in 0..=n {
                    let subs = enumerate_subspaces(n, k, p);
                    assert_eq!(
                        BigUint::from(subs.len()),
                        gaussian_binomial(n, k, p),
                        "n={n} k={k} p={p}"
                    );
                    // Each basis is full-rank and in echelon form (unique),
                    // so pairwise distinct is implied by plain inequality.
                    for s in &subs {
                        assert_eq!(s.rank(), k);
                    }
                    let mut seen = subs.clone();
                    seen.sort_by(|a, b| a.entries().cmp(b.entries()));
                    seen.dedup();
                    assert_eq!(seen.len(), subs.len());
                }
            }
        }
    }

    #[test]
    fn solve_left_finds_row_combinations() {
        let m = FpMatrix::from_rows(3, &[vec![1, 2, 0], vec![0, 1, 1]]);
        let v = vec![1, 0, 1]; // row0 + (-2)*row1 = row0 + row1 over F_3
        let x = m.solve_left(&v).unwrap();
        let mut got = vec![0u32; 3];
        for j in 0..3 {
            got[j] = (x[0] * m.get(0, j) + x[1] * m.get(1, j)) % 3;
        }
        assert_eq!(got, v);
        assert!(m.row_span_contains(&v));
        assert!(!m.row_span_contains(&[0, 0, 1]));
    }
}

//! Smith normal form over the integers.
//!
//! Reduction repeatedly moves the smallest nonzero entry of the trailing
//! block to the pivot, clears its row and column by Euclidean steps, and
//! folds offending rows back in until the pivot divides the whole block.
//! Every row operation is mirrored into `U` and every column operation into
//! `V`, so `U * A * V = D` holds exactly with unimodular `U`, `V`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[i64]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i * cols + i] = BigInt::from(d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    *out.at(i, j) += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    *m.at(i, j) = v;
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * factor;
            *self.at(dst, j) += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * factor;
            *self.at(i, dst) += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            *self.at(r, j) = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    /// Same layout the matrix parser accepts: a `rows cols` header, then one
    /// line of space-separated entries per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `D`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.a.add_row(dst, src, factor);
        self.u.add_row(dst, src, factor);
    }

    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.a.add_col(dst, src, factor);
        self.v.add_col(dst, src, factor);
    }

    /// Position of the smallest nonzero |entry| in the block `[k.., k..]`.
    fn smallest_in_block(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.a.rows {
            for j in k..self.a.cols {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < self.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Clears column `k` below and row `k` right of the pivot. Returns once
    /// both are zero; the pivot may have shrunk along the way.
    fn clear_cross(&mut self, k: usize) {
        loop {
            let mut dirty = false;
            for i in k + 1..self.a.rows {
                if self.a.get(i, k).is_zero() {
                    continue;
                }
                let q = self.a.get(i, k).div_floor(self.a.get(k, k));
                self.add_row(i, k, &-q);
                if !self.a.get(i, k).is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..self.a.cols {
                if self.a.get(k, j).is_zero() {
                    continue;
                }
                let q = self.a.get(k, j).div_floor(self.a.get(k, k));
                self.add_col(j, k, &-q);
                if !self.a.get(k, j).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                return;
            }
            // A nonzero remainder is now strictly smaller than the pivot.
            let mut best = (k, k);
            for i in k + 1..self.a.rows {
                if !self.a.get(i, k).is_zero()
                    && self.a.get(i, k).abs() < self.a.get(best.0, best.1).abs()
                {
                    best = (i, k);
                }
            }
            for j in k + 1..self.a.cols {
                if !self.a.get(k, j).is_zero()
                    && self.a.get(k, j).abs() < self.a.get(best.0, best.1).abs()
                {
                    best = (k, j);
                }
            }
            self.swap_rows(k, best.0);
            self.swap_cols(k, best.1);
        }
    }

    fn run(mut self) -> SnfResult {
        let steps = self.a.rows.min(self.a.cols);
        for k in 0..steps {
            let Some((pi, pj)) = self.smallest_in_block(k) else {
                break;
            };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                self.clear_cross(k);
                let pivot = self.a.get(k, k).clone();
                let offender = (k + 1..self.a.rows).find(|&i| {
                    (k + 1..self.a.cols).any(|j| !self.a.get(i, j).is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(k, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(k, k).is_negative() {
                self.a.negate_row(k);
                self.u.negate_row(k);
            }
        }
        SnfResult {
            u: self.u,
            d: self.a,
            v: self.v,
        }
    }
}

/// Computes `U`, `D`, `V` with `U * A * V = D`, `U` and `V` unimodular, and
/// `D` diagonal with non-negative entries `d_1 | d_2 | ...`, zeros last.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    Reducer {
        a: a.clone(),
        u: IntMatrix::identity(a.rows),
        v: IntMatrix::identity(a.cols),
    }
    .run()
}

/// Isomorphism type of `Z^rows / (column span of A)`.
///
/// Unit diagonal entries are dropped; every row without a nonzero pivot
/// contributes a free generator.
pub fn cokernel_structure(a: &IntMatrix) -> Result<FgAbGroup> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let mut factors = Vec::new();
    for d in diag.iter().filter(|d| !d.is_zero() && !d.is_one()) {
        factors.push(
            d.to_u64()
                .ok_or_else(|| Error::domain(format!("invariant factor {d} does not fit in 64 bits")))?,
        );
    }
    FgAbGroup::new(a.rows - nonzero, factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_fixed() {
        let snf = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(snf.d, IntMatrix::identity(3));
    }

    #[test]
    fn diag_4_6() {
        let a = IntMatrix::diagonal(2, 2, &[4, 6]);
        assert_eq!(smith_normal_form(&a).diagonal(), big(&[2, 12]));
    }

    #[test]
    fn dense_2x2() {
        let a = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]).unwrap();
        assert_eq!(smith_normal_form(&a).diagonal(), big(&[2, 4]));
    }

    #[test]
    fn zero_and_empty_shapes() {
        let snf = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(snf.diagonal(), big(&[0, 0]));
        assert_eq!(snf.u, IntMatrix::identity(2));
        let snf = smith_normal_form(&IntMatrix::zeros(0, 2));
        assert!(snf.diagonal().is_empty());
        assert_eq!(snf.v, IntMatrix::identity(2));
    }

    #[test]
    fn negative_pivot_is_normalized() {
        let a = IntMatrix::from_i64(1, 1, &[-7]).unwrap();
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), big(&[7]));
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d);
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel_structure(&IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!((g.free_rank(), g.invariant_factors()), (2, &[][..]));
        let g = cokernel_structure(&IntMatrix::diagonal(2, 2, &[1, 6])).unwrap();
        assert_eq!((g.free_rank(), g.invariant_factors()), (0, &[6][..]));
        let g = cokernel_structure(&IntMatrix::diagonal(3, 2, &[2, 4])).unwrap();
        assert_eq!((g.free_rank(), g.invariant_factors()), (1, &[2, 4][..]));
    }

    /// Counts `Z^2 / (column span of A)` for nonsingular 2x2 `A` by testing
    /// pairwise membership of difference vectors on a complete residue box.
    fn brute_cokernel_order(a: [i64; 4]) -> usize {
        let det = a[0] * a[3] - a[1] * a[2];
        let n = det.abs();
        // x is in the column span iff adj(A) x is divisible by det.
        let in_span = |x: i64, y: i64| (a[3] * x - a[1] * y) % det == 0 && (-a[2] * x + a[0] * y) % det == 0;
        let mut reps: Vec<(i64, i64)> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if !reps.iter().any(|&(rx, ry)| in_span(x - rx, y - ry)) {
                    reps.push((x, y));
                }
            }
        }
        reps.len()
    }

    #[test]
    fn cokernel_order_matches_brute_force() {
        for a in [[1, 0, 0, 6], [2, 4, 6, 8], [4, 0, 0, 6], [3, 1, 1, 5]] {
            let g = cokernel_structure(&IntMatrix::from_i64(2, 2, &a).unwrap()).unwrap();
            assert_eq!(g.free_rank(), 0);
            assert_eq!(g.torsion_order() as usize, brute_cokernel_order(a), "{a:?}");
        }
        assert_eq!(brute_cokernel_order([1, 0, 0, 6]), 6);
    }

    #[test]
    fn determinant_examples() {
        let a = IntMatrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]).unwrap();
        assert_eq!(a.determinant().unwrap(), BigInt::from(6));
        let a = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]).unwrap();
        assert_eq!(a.determinant().unwrap(), BigInt::from(-1));
        let a = IntMatrix::from_i64(2, 2, &[2, 4, 1, 2]).unwrap();
        assert_eq!(a.determinant().unwrap(), BigInt::from(0));
    }

    #[test]
    fn display_layout() {
        let a = IntMatrix::from_i64(2, 2, &[4, 0, 0, -6]).unwrap();
        assert_eq!(a.to_string(), "2 2\n4 0\n0 -6\n");
    }
}

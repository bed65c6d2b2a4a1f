//! Dense integer matrices with arbitrary-precision entries.
//!
//! Matrices act on column vectors; storage is row-major. All arithmetic is
//! exact. Dimension mismatches in the low-level algebra are programming
//! errors and panic; fallible public entry points live at the module level.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Convenience constructor from machine integers, mostly for tests.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn diagonal(diag: &[BigInt], rows: usize, cols: usize) -> Self {
        let mut m = IntMatrix::zero(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            assert!(i < rows && i < cols);
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        assert!(c < self.cols);
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must match cols");
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for c in 0..self.cols {
                    if !self[(r, c)].is_zero() && !v[c].is_zero() {
                        acc += &self[(r, c)] * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack col mismatch");
        IntMatrix::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self[(r, c)].clone()
            } else {
                other[(r - self.rows, c)].clone()
            }
        })
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = IntMatrix::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        IntMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows.start + r, cols.start + c)].clone()
        })
    }

    /// Keep only the selected columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, keep.len(), |r, c| self[(r, keep[c])].clone())
    }

    /// Drop columns that are identically zero.
    pub fn drop_zero_columns(&self) -> IntMatrix {
        let keep: Vec<usize> = (0..self.cols)
            .filter(|&c| (0..self.rows).any(|r| !self[(r, c)].is_zero()))
            .collect();
        self.select_columns(&keep)
    }

    // Elementary operations, used by the normal-form routines.

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    pub fn row_add_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        assert_ne!(a, b);
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = &self[(b, c)] * q;
            self[(a, c)] += t;
        }
    }

    /// col[a] += q * col[b]
    pub fn col_add_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        assert_ne!(a, b);
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = &self[(r, b)] * q;
            self[(r, a)] += t;
        }
    }

    pub fn negate_row(&mut self, a: usize) {
        for c in 0..self.cols {
            let t = -self[(a, c)].clone();
            self[(a, c)] = t;
        }
    }

    pub fn negate_col(&mut self, a: usize) {
        for r in 0..self.rows {
            let t = -self[(r, a)].clone();
            self[(r, a)] = t;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// Only used as an independent check on unimodularity.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
            }
            for i in k + 1..n {
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Random unimodular matrix together with its exact inverse, built as a
/// product of `ops` elementary operations with small coefficients.
pub fn random_unimodular<R: rand::Rng>(n: usize, rng: &mut R, ops: usize) -> (IntMatrix, IntMatrix) {
    let mut w = IntMatrix::identity(n);
    let mut w_inv = IntMatrix::identity(n);
    if n == 0 {
        return (w, w_inv);
    }
    for _ in 0..ops {
        if n >= 2 {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            match rng.gen_range(0..3) {
                0 => {
                    let q = BigInt::from(rng.gen_range(-2..=2i64));
                    let neg_q = -&q;
                    w.row_add_mul(a, b, &q);
                    w_inv.col_add_mul(b, a, &neg_q);
                }
                1 => {
                    w.swap_rows(a, b);
                    w_inv.swap_cols(a, b);
                }
                _ => {
                    w.negate_row(a);
                    w_inv.negate_col(a);
                }
            }
        } else if rng.gen_bool(0.5) {
            w.negate_row(0);
            w_inv.negate_col(0);
        }
    }
    (w, w_inv)
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.entries[r * self.cols + c]
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "add shape");
        IntMatrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &rhs[(r, c)])
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "sub shape");
        IntMatrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &rhs[(r, c)])
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |r, c| -self[(r, c)].clone())
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self[(r, k)].is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    if rhs[(k, c)].is_zero() {
                        continue;
                    }
                    let t = &self[(r, k)] * &rhs[(k, c)];
                    out[(r, c)] += t;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_identity() {
        let m = IntMatrix::from_rows(&[&[2, 4], &[6, 8]]);
        let i = IntMatrix::identity(2);
        assert_eq!(&m * &i, m);
        assert_eq!(&i * &m, m);
    }

    #[test]
    fn apply_column_vector() {
        let m = IntMatrix::from_rows(&[&[1, 2], &[3, 4]]);
        let v = vec![BigInt::from(5), BigInt::from(-1)];
        assert_eq!(m.apply(&v), vec![BigInt::from(3), BigInt::from(11)]);
    }

    #[test]
    fn determinant_bareiss() {
        let m = IntMatrix::from_rows(&[&[2, 4], &[6, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-8));
        let id = IntMatrix::identity(4);
        assert_eq!(id.determinant(), BigInt::one());
        let sing = IntMatrix::from_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.determinant(), BigInt::zero());
        let m3 = IntMatrix::from_rows(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        assert_eq!(m3.determinant(), BigInt::from(-3));
    }

    #[test]
    fn random_unimodular_pairs_invert() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for n in 0..5 {
            for _ in 0..20 {
                let (w, w_inv) = random_unimodular(n, &mut rng, 3 * n + 1);
                assert_eq!(&w * &w_inv, IntMatrix::identity(n));
                if n > 0 {
                    assert_eq!(w.determinant().abs(), BigInt::from(1));
                }
            }
        }
    }

    #[test]
    fn stacking() {
        let a = IntMatrix::from_rows(&[&[1], &[2]]);
        let b = IntMatrix::from_rows(&[&[3], &[4]]);
        let h = a.hstack(&b);
        assert_eq!(h, IntMatrix::from_rows(&[&[1, 3], &[2, 4]]));
        let v = a.vstack(&b);
        assert_eq!(v, IntMatrix::from_rows(&[&[1], &[2], &[3], &[4]]));
    }
}

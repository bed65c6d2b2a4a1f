//! Smith and Hermite-style normal forms with accumulated unimodular
//! transforms, plus the lattice solvers built on them.

use super::matrix::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Smith normal form decomposition `U * M * V = D`.
///
/// `U`, `V` are unimodular; `D` is diagonal with the invariant factors
/// `d_1 | d_2 | ... | d_r` (each positive) followed by zeros. The inverses of
/// both transforms are accumulated during elimination so elements can be
/// transported between presentation coordinates and Smith coordinates
/// without ever inverting a matrix after the fact.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Position of the entry with least nonzero absolute value in the trailing
/// block starting at `(k, k)`, scanning row-major so ties break
/// deterministically.
fn least_nonzero(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for r in k..m.rows() {
        for c in k..m.cols() {
            let e = &m[(r, c)];
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best {
                Some((_, b)) if *b <= a => {}
                _ => best = Some(((r, c), a)),
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form. Pivoting always picks the least-absolute-value entry
/// of the remaining block, which keeps coefficient growth modest.
pub fn snf(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Row op on d is u <- E*u, u_inv <- u_inv*E^{-1}; col op is v <- v*F,
    // v_inv <- F^{-1}*v_inv. Each helper keeps all five matrices in step.
    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, a: usize, b: usize| {
        d.swap_rows(a, b);
        u.swap_rows(a, b);
        ui.swap_cols(a, b);
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, a: usize, b: usize| {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
        vi.swap_rows(a, b);
    };
    let row_add = |d: &mut IntMatrix,
                   u: &mut IntMatrix,
                   ui: &mut IntMatrix,
                   a: usize,
                   b: usize,
                   q: &BigInt| {
        d.row_add_mul(a, b, q);
        u.row_add_mul(a, b, q);
        ui.col_add_mul(b, a, &-q);
    };
    let col_add = |d: &mut IntMatrix,
                   v: &mut IntMatrix,
                   vi: &mut IntMatrix,
                   a: usize,
                   b: usize,
                   q: &BigInt| {
        d.col_add_mul(a, b, q);
        v.col_add_mul(a, b, q);
        vi.row_add_mul(b, a, &-q);
    };

    let n = rows.min(cols);
    for k in 0..n {
        'pivot: loop {
            let Some((pr, pc)) = least_nonzero(&d, k) else {
                break 'pivot;
            };
            swap_rows(&mut d, &mut u, &mut u_inv, k, pr);
            swap_cols(&mut d, &mut v, &mut v_inv, k, pc);

            // Clear the pivot column.
            let mut dirty = false;
            for r in k + 1..rows {
                if d[(r, k)].is_zero() {
                    continue;
                }
                let q = -(&d[(r, k)]).div_euclid(&d[(k, k)]);
                row_add(&mut d, &mut u, &mut u_inv, r, k, &q);
                if !d[(r, k)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Clear the pivot row.
            for c in k + 1..cols {
                if d[(k, c)].is_zero() {
                    continue;
                }
                let q = -(&d[(k, c)]).div_euclid(&d[(k, k)]);
                col_add(&mut d, &mut v, &mut v_inv, c, k, &q);
                if !d[(k, c)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Pivot must divide every remaining entry; if not, fold the
            // offending row into the pivot row and restart this step.
            let mut offender = None;
            'scan: for r in k + 1..rows {
                for c in k + 1..cols {
                    if !(&d[(r, c)] % &d[(k, k)]).is_zero() {
                        offender = Some(r);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(r) => {
                    let one = BigInt::from(1);
                    row_add(&mut d, &mut u, &mut u_inv, k, r, &one);
                    continue 'pivot;
                }
                None => {
                    if d[(k, k)].is_negative() {
                        d.negate_row(k);
                        u.negate_row(k);
                        u_inv.negate_col(k);
                    }
                    break 'pivot;
                }
            }
        }
        if d[(k, k)].is_zero() {
            break;
        }
    }

    let invariant_factors: Vec<BigInt> = (0..n)
        .map(|i| d[(i, i)].clone())
        .take_while(|e| !e.is_zero())
        .collect();

    debug_assert_eq!(&(&u * m) * &v, d);
    SmithForm {
        d,
        u,
        v,
        u_inv,
        v_inv,
        invariant_factors,
    }
}

trait DivEuclidExt {
    fn div_euclid(&self, rhs: &BigInt) -> BigInt;
}

impl DivEuclidExt for &BigInt {
    fn div_euclid(&self, rhs: &BigInt) -> BigInt {
        let (q, r) = self.div_rem(rhs);
        if r.is_negative() {
            if rhs.is_negative() {
                q + 1
            } else {
                q - 1
            }
        } else {
            q
        }
    }
}

/// Column-style Hermite form `H = M * V` with `V` unimodular.
///
/// `H` is in column echelon shape: nonzero columns come first, their pivot
/// rows strictly increase, pivots are positive, and entries to the left of a
/// pivot within its row are reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub v: IntMatrix,
    /// `(pivot_row, column)` pairs in increasing row order.
    pub pivots: Vec<(usize, usize)>,
}

pub fn column_echelon(m: &IntMatrix) -> ColumnEchelon {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut v = IntMatrix::identity(cols);
    let mut pivots = Vec::new();
    let mut next_col = 0;

    for row in 0..rows {
        if next_col == cols {
            break;
        }
        // Reduce the active columns until at most one has a nonzero entry in
        // this row.
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for c in next_col..cols {
                let e = &h[(row, c)];
                if e.is_zero() {
                    continue;
                }
                let a = e.abs();
                match &best {
                    Some((_, b)) if *b <= a => {}
                    _ => best = Some((c, a)),
                }
            }
            let Some((pc, _)) = best else {
                break;
            };
            h.swap_cols(next_col, pc);
            v.swap_cols(next_col, pc);
            let mut finished = true;
            for c in next_col + 1..cols {
                if h[(row, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(row, c)]).div_euclid(&h[(row, next_col)]);
                h.col_add_mul(c, next_col, &q);
                v.col_add_mul(c, next_col, &q);
                if !h[(row, c)].is_zero() {
                    finished = false;
                }
            }
            if finished {
                if h[(row, next_col)].is_negative() {
                    h.negate_col(next_col);
                    v.negate_col(next_col);
                }
                // Reduce earlier columns against this pivot.
                for c in 0..next_col {
                    if h[(row, c)].is_zero() {
                        continue;
                    }
                    let q = -(&h[(row, c)]).div_euclid(&h[(row, next_col)]);
                    h.col_add_mul(c, next_col, &q);
                    v.col_add_mul(c, next_col, &q);
                }
                pivots.push((row, next_col));
                next_col += 1;
                break;
            }
        }
    }

    debug_assert_eq!(&(m * &v), &h);
    ColumnEchelon { h, v, pivots }
}

impl ColumnEchelon {
    /// Solve `H * y = b` by pivot-row forward substitution. Returns `None`
    /// when `b` is not in the column span.
    fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut residual = b.to_vec();
        let mut y = vec![BigInt::zero(); self.h.cols()];
        for &(row, col) in &self.pivots {
            let pivot = &self.h[(row, col)];
            let (q, r) = residual[row].div_rem(pivot);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for rr in 0..self.h.rows() {
                    let t = &self.h[(rr, col)] * &q;
                    residual[rr] -= t;
                }
                y[col] = q;
            }
        }
        if residual.iter().all(|e| e.is_zero()) {
            Some(y)
        } else {
            None
        }
    }

    /// Membership of `b` in the column lattice, with coefficients pulled
    /// back through `V` so that `M * x = b` for the original matrix.
    pub fn solve_in_original(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        self.solve(b).map(|y| self.v.apply(&y))
    }

    pub fn contains(&self, b: &[BigInt]) -> bool {
        self.solve(b).is_some()
    }
}

/// Does the column lattice of `m` contain `b`? If so, return `x` with
/// `m * x = b`.
pub fn solve_membership(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "membership vector has length {}, matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    Ok(column_echelon(m).solve_in_original(b))
}

/// Basis of `{ x : m * x = 0 }` as the columns of the returned matrix.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let sf = snf(m);
    let rank = sf.rank();
    let keep: Vec<usize> = (rank..m.cols()).collect();
    sf.v.select_columns(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check_snf(m: &IntMatrix) {
        let sf = snf(m);
        assert_eq!(&(&sf.u * m) * &sf.v, sf.d, "U*M*V = D");
        assert_eq!(&sf.u * &sf.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(&sf.v * &sf.v_inv, IntMatrix::identity(m.cols()));
        assert_eq!(sf.u.determinant().abs(), BigInt::one());
        assert_eq!(sf.v.determinant().abs(), BigInt::one());
        for w in sf.invariant_factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
        for f in &sf.invariant_factors {
            assert!(f.is_positive());
        }
        // Diagonal carries the factors followed by zeros.
        for r in 0..sf.d.rows() {
            for c in 0..sf.d.cols() {
                if r != c {
                    assert!(sf.d[(r, c)].is_zero());
                } else if r < sf.invariant_factors.len() {
                    assert_eq!(sf.d[(r, c)], sf.invariant_factors[r]);
                } else {
                    assert!(sf.d[(r, c)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_two_by_two() {
        let m = IntMatrix::from_rows(&[&[2, 4], &[6, 8]]);
        let sf = snf(&m);
        assert_eq!(
            sf.invariant_factors,
            vec![BigInt::from(2), BigInt::from(4)]
        );
        check_snf(&m);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        let sf = snf(&m);
        assert!(sf.invariant_factors.is_empty());
        assert!(sf.d.is_zero());
        check_snf(&m);
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(3);
        let sf = snf(&m);
        assert_eq!(sf.d, IntMatrix::identity(3));
        assert_eq!(sf.invariant_factors, vec![BigInt::one(); 3]);
        check_snf(&m);
    }

    #[test]
    fn snf_recovers_scrambled_diagonal() {
        // Start from diag(1, 3, 21, 0) and scramble with unimodular row and
        // column operations; the invariant factors must come back unchanged.
        let mut m = IntMatrix::diagonal(
            &[BigInt::one(), BigInt::from(3), BigInt::from(21)],
            4,
            4,
        );
        m.row_add_mul(0, 1, &BigInt::from(2));
        m.row_add_mul(3, 0, &BigInt::from(-5));
        m.row_add_mul(1, 2, &BigInt::from(7));
        m.col_add_mul(2, 0, &BigInt::from(3));
        m.col_add_mul(0, 3, &BigInt::from(-4));
        m.col_add_mul(3, 1, &BigInt::from(6));
        m.swap_rows(1, 3);
        m.swap_cols(0, 2);
        let sf = snf(&m);
        assert_eq!(
            sf.invariant_factors,
            vec![BigInt::one(), BigInt::from(3), BigInt::from(21)]
        );
        check_snf(&m);
    }

    #[test]
    fn snf_deterministic() {
        let m = IntMatrix::from_rows(&[&[4, 6, 10], &[2, -8, 14]]);
        let a = snf(&m);
        let b = snf(&m);
        assert_eq!(a.d, b.d);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
        check_snf(&m);
    }

    #[test]
    fn membership_simple() {
        let m = IntMatrix::from_rows(&[&[2]]);
        assert_eq!(
            solve_membership(&m, &[BigInt::from(4)]).unwrap(),
            Some(vec![BigInt::from(2)])
        );
        assert_eq!(solve_membership(&m, &[BigInt::from(3)]).unwrap(), None);
    }

    #[test]
    fn membership_diag() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let x = solve_membership(&m, &[BigInt::from(2), BigInt::from(3)])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn membership_dimension_error() {
        let m = IntMatrix::from_rows(&[&[2]]);
        assert!(solve_membership(&m, &[BigInt::one(), BigInt::one()]).is_err());
    }

    #[test]
    fn membership_solution_is_exact() {
        let m = IntMatrix::from_rows(&[&[2, 3, 1], &[0, 4, -2], &[6, 1, 5]]);
        let target = m.apply(&[BigInt::from(7), BigInt::from(-3), BigInt::from(2)]);
        let x = solve_membership(&m, &target).unwrap().unwrap();
        assert_eq!(m.apply(&x), target);
    }

    #[test]
    fn kernel_basis_annihilates() {
        let m = IntMatrix::from_rows(&[&[1, 1, 0], &[0, 2, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
    }
}

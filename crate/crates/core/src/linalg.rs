//! Dense exact linear algebra: integer matrices, fraction-free determinants
//! over any exact integral domain, and rational linear solves.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Integral domain with exact division, enough for Bareiss elimination.
pub trait ExactRing: Clone {
    fn ring_zero() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    /// `self / divisor`, known to be exact.
    fn exact_div(&self, divisor: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

/// Bareiss determinant of a square matrix. The empty matrix has determinant 1
/// only for rings with a known unit, so callers pass at least a 1x1 matrix.
pub fn det_fraction_free<T: ExactRing>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    assert!(n > 0, "determinant of an empty matrix");
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut negate = false;
    let mut prev: Option<T> = None;
    for k in 0..n - 1 {
        if m[k][k].ring_is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].ring_is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return T::ring_zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j]
                    .ring_mul(&m[k][k])
                    .ring_sub(&m[i][k].ring_mul(&m[k][j]));
                m[i][j] = match &prev {
                    Some(p) => t.exact_div(p),
                    None => t,
                };
            }
            m[i][k] = T::ring_zero();
        }
        prev = Some(m[k][k].clone());
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.ring_neg()
    } else {
        d
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero-based access.
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Remove the listed (zero-based) rows and columns.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> IntMatrix {
        let rows: Vec<usize> = (0..self.rows).filter(|r| !drop_rows.contains(r)).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|c| !drop_cols.contains(c)).collect();
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }

    pub fn row_nnz(&self, r: usize) -> usize {
        self.row(r).iter().filter(|&&v| v != 0).count()
    }

    pub fn col_nnz(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c) != 0).count()
    }

    pub fn to_bigint_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    /// Exact determinant. The 0x0 matrix has determinant 1.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigInt::one();
        }
        det_fraction_free(self.to_bigint_rows())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<BigRational>),
    Singular,
    Inconsistent,
}

/// Gauss-Jordan over `Q` for a square system `A x = b`.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> SolveOutcome {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length");
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &f * &m[rank][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if (rank..n).any(|r| !m[r][n].is_zero()) {
        return SolveOutcome::Inconsistent;
    }
    if rank < n {
        return SolveOutcome::Singular;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    SolveOutcome::Unique(x)
}

/// One solution of a possibly over- or under-determined system `A x = b`
/// over `Q` (free variables set to zero), or `None` when inconsistent.
pub fn solve_consistent(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    unknowns: usize,
) -> Option<Vec<BigRational>> {
    let rows = a.len();
    assert_eq!(b.len(), rows, "right-hand side length");
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), unknowns, "row length");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=unknowns {
                    let t = &f * &m[rank][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if (rank..rows).any(|r| !m[r][unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][unknowns].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.det(), BigInt::from(4));
        let z = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(z.det(), BigInt::from(-1));
        let s = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.det(), BigInt::zero());
        assert_eq!(IntMatrix::zeros(0, 0).det(), BigInt::one());
    }

    #[test]
    fn minor_drops() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(m.minor(&[0], &[2]).to_rows(), vec![vec![4, 5], vec![7, 8]]);
    }

    #[test]
    fn rational_solve() {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        match solve_rational(&a, &[q(3), q(5)]) {
            SolveOutcome::Unique(x) => {
                assert_eq!(x[0], BigRational::new(4.into(), 5.into()));
                assert_eq!(x[1], BigRational::new(7.into(), 5.into()));
            }
            o => panic!("{o:?}"),
        }
        let s = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(
            solve_rational(&s, &[q(1), q(3)]),
            SolveOutcome::Inconsistent
        );
        assert_eq!(solve_rational(&s, &[q(1), q(2)]), SolveOutcome::Singular);
    }
}

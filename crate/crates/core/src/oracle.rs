//! Independent ground truth: exact determinants of instantiated minors and
//! effective resistance by a direct grounded linear solve.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::families::{FamilyError, FamilyHandle, FamilySpec};
use crate::linalg::{solve_rational, IntMatrix, SolveOutcome};
use crate::shift_poly::{Sequence, ShiftPoly};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("resistance between a node and itself is not a two-terminal measurement (node {0})")]
    SameNode(usize),
    #[error("node {node} is outside the {size}-vertex graph")]
    NodeOutOfRange { node: usize, size: usize },
    #[error("grounded Laplacian is singular (graph is disconnected)")]
    Singular,
}

pub fn det_exact(m: &IntMatrix) -> BigInt {
    m.det()
}

/// `Det(instantiate(h, n))` for `n` in `from..=to`; empty when `to < from`.
pub fn det_sequence(h: &FamilyHandle, from: usize, to: usize) -> Result<Sequence, OracleError> {
    if to < from {
        return Ok(Sequence::new(from as i64, Vec::new()));
    }
    let values: Result<Vec<BigInt>, FamilyError> = (from..=to)
        .into_par_iter()
        .map(|n| h.instantiate(n).map(|m| m.det()))
        .collect();
    Ok(Sequence::new(from as i64, values?))
}

/// Effective resistance between one-based nodes `i` and `j` of the
/// `size`-vertex member: ground `j`, inject a unit current at `i`, read `v_i`.
pub fn resistance_solve(
    spec: &FamilySpec,
    size: usize,
    i: usize,
    j: usize,
) -> Result<BigRational, OracleError> {
    let l = spec.instantiate(size)?;
    resistance_from_laplacian(&l, i, j)
}

pub fn resistance_from_laplacian(
    l: &IntMatrix,
    i: usize,
    j: usize,
) -> Result<BigRational, OracleError> {
    let size = l.nrows();
    for node in [i, j] {
        if node == 0 || node > size {
            return Err(OracleError::NodeOutOfRange { node, size });
        }
    }
    if i == j {
        return Err(OracleError::SameNode(i));
    }
    let keep: Vec<usize> = (0..size).filter(|&r| r != j - 1).collect();
    let a: Vec<Vec<BigRational>> = keep
        .iter()
        .map(|&r| {
            keep.iter()
                .map(|&c| BigRational::from_integer(l.get(r, c).into()))
                .collect()
        })
        .collect();
    let b: Vec<BigRational> = keep
        .iter()
        .map(|&r| {
            if r == i - 1 {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    match solve_rational(&a, &b) {
        SolveOutcome::Unique(v) => {
            let pos = keep
                .iter()
                .position(|&r| r == i - 1)
                .expect("i is not grounded");
            Ok(v[pos].clone())
        }
        _ => Err(OracleError::Singular),
    }
}

/// `index,value` lines with a header.
pub fn write_sequence_csv(seq: &Sequence, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "index,value")?;
    for (n, v) in seq.indices().zip(&seq.values) {
        writeln!(out, "{n},{v}")?;
    }
    Ok(())
}

/// A row of an identity system that the oracle determinants contradict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityMismatch {
    /// One-based family id.
    pub row: usize,
    pub size: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Check `x_i(n) = Σ_j S_ij(Y) x_j(n)` for every row of `system` and every
/// `n` in `sizes`, with `x_j(m)` the determinant of `families[j]` at
/// dimension `m` and `Y^k` read as `m = n − k`.
pub fn check_identities(
    families: &[std::sync::Arc<FamilyHandle>],
    system: &[Vec<ShiftPoly>],
    sizes: &[usize],
) -> Result<Vec<IdentityMismatch>, OracleError> {
    let max_deg = system
        .iter()
        .flatten()
        .filter_map(ShiftPoly::degree)
        .max()
        .unwrap_or(0);
    let lo = sizes
        .iter()
        .min()
        .copied()
        .unwrap_or(0)
        .saturating_sub(max_deg);
    let hi = sizes.iter().max().copied().unwrap_or(0);
    let dets: Vec<Vec<Option<BigInt>>> = families
        .par_iter()
        .map(|h| {
            (lo..=hi)
                .map(|m| h.instantiate(m).ok().map(|x| x.det()))
                .collect()
        })
        .collect();
    let det = |j: usize, m: usize| -> Result<&BigInt, OracleError> {
        dets[j][m - lo].as_ref().ok_or_else(|| {
            OracleError::Family(FamilyError::SizeTooSmall {
                family: families[j].label(),
                n: m,
                min: families[j].min_size(),
            })
        })
    };
    let mut bad = Vec::new();
    for (i, row) in system.iter().enumerate() {
        for &n in sizes {
            let mut rhs = BigInt::zero();
            for (j, c) in row.iter().enumerate() {
                for (k, ck) in c.coeffs().iter().enumerate() {
                    if !ck.is_zero() {
                        rhs += ck * det(j, n - k)?;
                    }
                }
            }
            let lhs = det(i, n)?.clone();
            if lhs != rhs {
                bad.push(IdentityMismatch {
                    row: i + 1,
                    size: n,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::builtin;

    #[test]
    fn identity_det() {
        let mut m = IntMatrix::zeros(5, 5);
        for i in 0..5 {
            m.set(i, i, 1);
        }
        assert_eq!(det_exact(&m), BigInt::one());
    }

    #[test]
    fn path_resistance() {
        let p = builtin("path").unwrap();
        for n in 3..12 {
            assert_eq!(
                resistance_solve(&p, n, 1, n).unwrap(),
                BigRational::from_integer((n as i64 - 1).into())
            );
        }
        assert!(matches!(
            resistance_solve(&p, 5, 2, 2),
            Err(OracleError::SameNode(2))
        ));
        assert!(matches!(
            resistance_solve(&p, 5, 1, 9),
            Err(OracleError::NodeOutOfRange { .. })
        ));
    }

    #[test]
    fn csv_dump() {
        let s = Sequence::new(3, vec![BigInt::from(5), BigInt::from(-2)]);
        let mut buf = Vec::new();
        write_sequence_csv(&s, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,value\n3,5\n4,-2\n");
    }
}

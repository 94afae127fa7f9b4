//! Elimination of an identity system down to one annihilating operator.
//!
//! Row `k` of the system reads `x_k = Σ_j R[k][j]·x_j`, where `x_j` is the
//! determinant sequence of family `j`. When `R[k][k] = 0` the row defines
//! `x_k` outright and can be substituted everywhere, leaving only the
//! self-referential families. Those are solved by the small-system formulas
//! below, with a generic one-variable-at-a-time elimination for larger
//! supports.

use serde::Serialize;
use thiserror::Error;

use crate::expansion::IdentitySystem;
use crate::linalg::det_fraction_free;
use crate::shift_poly::ShiftPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("reduced system references no families; nothing to annihilate")]
    EmptySystem,
    #[error("reduced support has {size} families, above the cap of {cap}")]
    SupportTooLarge { size: usize, cap: usize },
    #[error("elimination produced the zero operator (the system is vacuous)")]
    ZeroAnnihilator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedSystem {
    pub r: Vec<Vec<ShiftPoly>>,
    /// One-based ids of columns with a nonzero entry.
    pub support: Vec<usize>,
}

impl ReducedSystem {
    pub fn from_matrix(r: Vec<Vec<ShiftPoly>>) -> Self {
        let support = support_of(&r);
        ReducedSystem { r, support }
    }

    /// One-based access.
    pub fn get(&self, i: usize, j: usize) -> &ShiftPoly {
        &self.r[i - 1][j - 1]
    }

    /// The square block on the support, in support order.
    pub fn restricted(&self) -> Vec<Vec<ShiftPoly>> {
        self.support
            .iter()
            .map(|&i| {
                self.support
                    .iter()
                    .map(|&j| self.get(i, j).clone())
                    .collect()
            })
            .collect()
    }

    pub fn as_identity_system(&self) -> IdentitySystem {
        IdentitySystem { q: self.r.clone() }
    }
}

fn support_of(r: &[Vec<ShiftPoly>]) -> Vec<usize> {
    let n = r.len();
    (0..n)
        .filter(|&j| r.iter().any(|row| !row[j].is_zero()))
        .map(|j| j + 1)
        .collect()
}

/// One substitution: row `k` (one-based) was fed into every other row.
pub struct ReductionStep<'a> {
    pub k: usize,
    pub system: &'a [Vec<ShiftPoly>],
}

pub fn system_reduce(q: &IdentitySystem) -> ReducedSystem {
    system_reduce_traced(q, |_| {})
}

/// As [`system_reduce`], calling `trace` after each substitution.
pub fn system_reduce_traced(
    q: &IdentitySystem,
    mut trace: impl FnMut(&ReductionStep<'_>),
) -> ReducedSystem {
    let n = q.len();
    let mut m = q.q.clone();
    for k in 1..n {
        if !m[k][k].is_zero() {
            continue;
        }
        let row_k = m[k].clone();
        let mut changed = false;
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let mik = std::mem::take(&mut m[i][k]);
            for (j, rkj) in row_k.iter().enumerate() {
                if j != k && !rkj.is_zero() {
                    let add = &mik * rkj;
                    m[i][j] += &add;
                }
            }
            changed = true;
        }
        if changed {
            trace(&ReductionStep {
                k: k + 1,
                system: &m,
            });
        }
    }
    ReducedSystem::from_matrix(m)
}

/// `A'x = B'x` is annihilated by `A' − B'`.
pub fn annihilator_1x1(a: &ShiftPoly, b: &ShiftPoly) -> Result<ShiftPoly, ReductionError> {
    nonzero(a - b)
}

/// `A'x = B'x + C'y`, `D'y = E'x + F'y` is annihilated by
/// `(D' − F')(A' − B') − C'E'`.
pub fn annihilator_2x2(
    a: &ShiftPoly,
    b: &ShiftPoly,
    c: &ShiftPoly,
    d: &ShiftPoly,
    e: &ShiftPoly,
    f: &ShiftPoly,
) -> ShiftPoly {
    &(d - f) * &(a - b) - c * e
}

/// `x = Ax + By + Cz`, `y = Dx + Ey + Fz`, `z = Gx + Hy + Iz`: substitute
/// the `y` row, then apply [`annihilator_2x2`].
#[allow(clippy::too_many_arguments)]
pub fn annihilator_3x3(
    a: &ShiftPoly,
    b: &ShiftPoly,
    c: &ShiftPoly,
    d: &ShiftPoly,
    e: &ShiftPoly,
    f: &ShiftPoly,
    g: &ShiftPoly,
    h: &ShiftPoly,
    i: &ShiftPoly,
) -> ShiftPoly {
    let one_e = &ShiftPoly::one() - e;
    let ap = one_e.clone();
    let bp = &one_e * a + b * d;
    let cp = &one_e * c + b * f;
    let dp = one_e.clone();
    let ep = &one_e * g + h * d;
    let fp = &one_e * i + h * f;
    annihilator_2x2(&ap, &bp, &cp, &dp, &ep, &fp)
}

/// Drop the last variable of `x = Rx`: multiply through by `1 − R_nn` and
/// substitute, keeping the `x = R'x` shape.
pub fn eliminate_last(r: &[Vec<ShiftPoly>]) -> Vec<Vec<ShiftPoly>> {
    let n = r.len();
    assert!(n >= 2, "need two variables to eliminate one");
    let last = n - 1;
    let ann = &r[last][last];
    let scale = &ShiftPoly::one() - ann;
    (0..last)
        .map(|i| {
            (0..last)
                .map(|j| {
                    let mut v = &scale * &r[i][j] + &r[i][last] * &r[last][j];
                    if i == j {
                        v += ann;
                    }
                    v
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Annihilation {
    /// As produced by the elimination, sign and content included.
    pub raw: ShiftPoly,
    pub normalized: ShiftPoly,
    pub support: Vec<usize>,
}

pub const DEFAULT_SUPPORT_CAP: usize = 64;

/// Annihilator of every family in the reduced system. Supports of one to
/// three columns use the closed elimination formulas; larger ones take
/// `det(I - R)`, which kills every `x` with `x = Rx` by the adjugate.
pub fn solve_identity_system(
    red: &ReducedSystem,
    support_cap: usize,
) -> Result<Annihilation, ReductionError> {
    if red.support.is_empty() {
        return Err(ReductionError::EmptySystem);
    }
    if red.support.len() > support_cap {
        return Err(ReductionError::SupportTooLarge {
            size: red.support.len(),
            cap: support_cap,
        });
    }
    let m = red.restricted();
    let one = ShiftPoly::one();
    let raw = match m.len() {
        1 => annihilator_1x1(&one, &m[0][0])?,
        2 => annihilator_2x2(&one, &m[0][0], &m[0][1], &one, &m[1][0], &m[1][1]),
        3 => annihilator_3x3(
            &m[0][0], &m[0][1], &m[0][2], &m[1][0], &m[1][1], &m[1][2], &m[2][0], &m[2][1],
            &m[2][2],
        ),
        n => det_fraction_free(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { &one - &m[i][j] } else { -&m[i][j] })
                        .collect()
                })
                .collect(),
        ),
    };
    let raw = nonzero(raw)?;
    Ok(Annihilation {
        normalized: raw.normalized(),
        raw,
        support: red.support.clone(),
    })
}

fn nonzero(p: ShiftPoly) -> Result<ShiftPoly, ReductionError> {
    if p.is_zero() {
        Err(ReductionError::ZeroAnnihilator)
    } else {
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WheelFixture {
    pub annihilator: ShiftPoly,
    pub validity: i64,
    pub note: &'static str,
}

/// Wheel `L(n|n)`: its expansion carries `(−1)^n` coefficients, so the
/// recursion is supplied from a manual derivation rather than the engine.
pub fn wheel_denominator_fixture() -> WheelFixture {
    WheelFixture {
        annihilator: &ShiftPoly::from_i64s(&[1, -3, 1]) * &ShiftPoly::from_i64s(&[-1, 1]),
        validity: 6,
        note: "manual derivation; (-1)^n terms cancel after reduction and are not automated",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ShiftPoly {
        s.parse().unwrap()
    }

    #[test]
    fn one_by_one() {
        assert_eq!(
            annihilator_1x1(&ShiftPoly::one(), &p("3*Y - Y^2"))
                .unwrap()
                .normalized(),
            p("Y^2 - 3*Y + 1")
        );
        assert_eq!(
            annihilator_1x1(&ShiftPoly::one(), &p("2*Y - Y^2"))
                .unwrap()
                .normalized(),
            p("Y^2 - 2*Y + 1")
        );
        assert_eq!(
            annihilator_1x1(&ShiftPoly::one(), &ShiftPoly::one()),
            Err(ReductionError::ZeroAnnihilator)
        );
    }

    #[test]
    fn two_by_two() {
        let one = ShiftPoly::one();
        let z = ShiftPoly::zero();
        let y = ShiftPoly::y();
        assert_eq!(annihilator_2x2(&one, &z, &y, &one, &y, &z), p("1 - Y^2"));
        let (a, b, d, f) = (p("2"), p("Y"), p("3"), p("Y^2"));
        assert_eq!(
            annihilator_2x2(&a, &b, &z, &d, &p("5"), &f),
            &(&d - &f) * &(&a - &b)
        );
    }

    #[test]
    fn three_by_three_decoupled() {
        let z = ShiftPoly::zero();
        let (a, e, i) = (p("Y"), p("2*Y"), p("Y^2"));
        let got = annihilator_3x3(&a, &z, &z, &z, &e, &z, &z, &z, &i);
        let one = ShiftPoly::one();
        let expect = &(&(&one - &e) * &(&one - &e)) * &(&(&one - &a) * &(&one - &i));
        assert_eq!(got, expect);
    }

    #[test]
    fn path_reduction() {
        let q = IdentitySystem {
            q: vec![vec![p("2*Y"), p("Y")], vec![p("-Y"), ShiftPoly::zero()]],
        };
        let r = system_reduce(&q);
        assert_eq!(r.r[0][0], p("2*Y - Y^2"));
        assert!(r.r[0][1].is_zero() && r.r[1][1].is_zero());
        assert_eq!(r.r[1][0], p("-Y"));
        assert_eq!(r.support, vec![1]);
        let a = solve_identity_system(&r, DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(a.normalized, p("Y^2 - 2*Y + 1"));
    }

    fn i_minus(r: &[Vec<ShiftPoly>]) -> Vec<Vec<ShiftPoly>> {
        let n = r.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            &ShiftPoly::one() - &r[i][j]
                        } else {
                            -&r[i][j]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn three_by_three_is_scaled_determinant() {
        let r = vec![
            vec![p("Y"), p("2*Y"), p("Y^2")],
            vec![p("Y"), p("Y^2 - Y"), p("Y")],
            vec![p("3*Y^3"), p("Y^2"), p("Y")],
        ];
        let red = ReducedSystem::from_matrix(r.clone());
        let raw = solve_identity_system(&red, 8).unwrap().raw;
        let scale = &ShiftPoly::one() - &r[1][1];
        assert_eq!(raw, &scale * &det_fraction_free(i_minus(&r)));
    }

    #[test]
    fn decoupled_fourth_variable_factors_out() {
        let z = ShiftPoly::zero();
        let r = vec![
            vec![p("Y"), p("Y"), z.clone(), z.clone()],
            vec![p("Y"), z.clone(), p("Y"), z.clone()],
            vec![z.clone(), p("Y^2"), p("Y"), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), p("3*Y")],
        ];
        let four = solve_identity_system(&ReducedSystem::from_matrix(r.clone()), 8)
            .unwrap()
            .raw;
        let three: Vec<Vec<ShiftPoly>> = r[..3].iter().map(|row| row[..3].to_vec()).collect();
        let factor = &ShiftPoly::one() - &p("3*Y");
        assert_eq!(four, &factor * &det_fraction_free(i_minus(&three)));
    }
}

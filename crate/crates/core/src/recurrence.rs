//! Minimal recursions of determinant sequences.
//!
//! An annihilator `A` from the elimination stage is usually far from
//! minimal. The minimal one is found without factoring `A`: the shortest
//! linear recurrence of the sequence tail is computed by exact rational
//! linear algebra, then confirmed to divide `A` and to kill the sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::families::FamilyHandle;
use crate::linalg::solve_consistent;
use crate::oracle::{det_sequence, OracleError};
use crate::shift_poly::{PolyError, Sequence, ShiftPoly};

#[derive(Debug, Error)]
pub enum RecurrenceError {
    #[error(
        "operator {op} does not annihilate the sequence on its tested range (last index {last})"
    )]
    NoAnnihilation { op: String, last: i64 },
    #[error(
        "minimal tail recurrence {candidate} does not divide {op}; the sampled tail is too short"
    )]
    CandidateFailsDivision { candidate: String, op: String },
    #[error("sequence of {have} terms is too short; need {need}")]
    SequenceTooShort { have: usize, need: usize },
    #[error("no recurrence of order at most {max} fits the sequence")]
    NoRecurrence { max: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Recurrence {
    pub family: String,
    pub annihilator: ShiftPoly,
    pub validity_index: i64,
    pub tested_range: (i64, i64),
}

impl Serialize for Recurrence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Recurrence", 5)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("annihilator_Y", &self.annihilator)?;
        st.serialize_field("annihilator_X", &self.annihilator.to_char())?;
        st.serialize_field("validity_index", &self.validity_index)?;
        st.serialize_field("tested_range", &self.tested_range)?;
        st.end()
    }
}

impl Recurrence {
    pub fn degree(&self) -> usize {
        self.annihilator.degree().unwrap_or(0)
    }
}

pub fn oracle_sequence(
    h: &FamilyHandle,
    from: usize,
    to: usize,
) -> Result<Sequence, RecurrenceError> {
    Ok(det_sequence(h, from, to)?)
}

/// Residuals `Σ a_i s_{n-i}` at every index where the operator is defined.
pub fn residuals(c: &ShiftPoly, seq: &Sequence) -> Sequence {
    c.apply_all(seq)
}

/// Smallest `v` with a zero residual at every tested `n ≥ v`. Indices below
/// `start + deg` are untestable and never counted as failures.
pub fn validity_index(c: &ShiftPoly, seq: &Sequence) -> Result<i64, RecurrenceError> {
    let res = residuals(c, seq);
    if res.is_empty() {
        return Err(RecurrenceError::SequenceTooShort {
            have: seq.len(),
            need: c.degree().unwrap_or(0) + 1,
        });
    }
    match res
        .indices()
        .zip(&res.values)
        .filter(|(_, r)| !r.is_zero())
        .last()
    {
        None => Ok(res.start),
        Some((n, _)) if n == res.end() => Err(RecurrenceError::NoAnnihilation {
            op: c.to_string(),
            last: n,
        }),
        Some((n, _)) => Ok(n + 1),
    }
}

/// Whether some recurrence `s_n + c_1 s_{n-1} + … + c_d s_{n-d} = 0` holds
/// for every `n` in `start + d ..= end`.
pub fn fits_order(seq: &Sequence, d: usize) -> Option<ShiftPoly> {
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let rows: Vec<i64> = (seq.start + d as i64..=seq.end()).collect();
    if d == 0 {
        return seq.values.iter().all(Zero::is_zero).then(ShiftPoly::one);
    }
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&n| (1..=d).map(|i| q(seq.get(n - i as i64).unwrap())).collect())
        .collect();
    let b: Vec<BigRational> = rows.iter().map(|&n| -q(seq.get(n).unwrap())).collect();
    let c = solve_consistent(&a, &b, d)?;
    let denom = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut coeffs = vec![denom.clone()];
    coeffs.extend(c.iter().map(|x| x.numer() * (&denom / x.denom())));
    Some(ShiftPoly::new(coeffs).normalized())
}

/// Shortest recurrence of the whole sequence, as a normalized operator with
/// nonzero constant term. Orders are tried up to `(len - 1) / 2`, so every
/// accepted order is overdetermined by at least one equation.
pub fn hankel_minimal_recurrence(seq: &Sequence) -> Result<ShiftPoly, RecurrenceError> {
    let max = seq.len().saturating_sub(1) / 2;
    (0..=max)
        .find_map(|d| fits_order(seq, d))
        .ok_or(RecurrenceError::NoRecurrence { max })
}

/// The part of `seq` from index `from` on.
pub fn tail(seq: &Sequence, from: i64) -> Sequence {
    let from = from.max(seq.start);
    let skip = (from - seq.start) as usize;
    Sequence::new(from, seq.values.iter().skip(skip).cloned().collect())
}

pub fn default_tail_len(a: &ShiftPoly) -> usize {
    3 * a.degree().unwrap_or(0) + 10
}

/// Minimal annihilator of `seq`, dividing the known annihilator `a`.
pub fn minimal_annihilator(
    a: &ShiftPoly,
    seq: &Sequence,
    family: &str,
) -> Result<Recurrence, RecurrenceError> {
    let deg_a = a.degree().unwrap_or(0);
    let need = default_tail_len(a);
    if seq.len() < need {
        return Err(RecurrenceError::SequenceTooShort {
            have: seq.len(),
            need,
        });
    }
    let va = validity_index(a, seq)?;
    let t = tail(seq, va - deg_a as i64);
    let candidate = hankel_minimal_recurrence(&t)?;
    let quotient =
        candidate
            .divides(a)?
            .ok_or_else(|| RecurrenceError::CandidateFailsDivision {
                candidate: candidate.to_string(),
                op: a.to_string(),
            })?;
    // Premise: the candidate vanishes on deg(A/C) consecutive terms past the
    // point where A is known to hold.
    let deg_b = quotient.degree().unwrap_or(0) as i64;
    let deg_c = candidate.degree().unwrap_or(0) as i64;
    let first = (va - deg_a as i64 + deg_c).max(seq.start + deg_c);
    for n in first..first + deg_b {
        if !candidate.apply(seq, n)?.is_zero() {
            return Err(RecurrenceError::NoAnnihilation {
                op: candidate.to_string(),
                last: n,
            });
        }
    }
    let v = validity_index(&candidate, seq)?;
    Ok(Recurrence {
        family: family.to_string(),
        annihilator: candidate,
        validity_index: v,
        tested_range: (seq.start, seq.end()),
    })
}

/// Oracle determinants of `h` from its smallest size, long enough for
/// [`minimal_annihilator`], lengthened while the tail proves too short.
pub fn minimal_recurrence_of(
    h: &FamilyHandle,
    a: &ShiftPoly,
) -> Result<(Recurrence, Sequence), RecurrenceError> {
    let from = h.min_size();
    let mut len = default_tail_len(a);
    let mut last_err = None;
    for _ in 0..4 {
        let seq = oracle_sequence(h, from, from + len - 1)?;
        match minimal_annihilator(a, &seq, &h.label()) {
            Ok(r) => return Ok((r, seq)),
            Err(e @ RecurrenceError::CandidateFailsDivision { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        len *= 2;
    }
    Err(last_err.expect("loop ran"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsequenceRecurrence {
    pub stride: usize,
    pub residue: i64,
    /// `C` with every root raised to the `stride`-th power.
    pub power: ShiftPoly,
    /// Minimal annihilator of `m ↦ s_{stride·m + residue}` in its own index.
    pub minimal: Recurrence,
}

pub fn subsequence_annihilator(
    c: &ShiftPoly,
    stride: usize,
    residue: i64,
    seq: &Sequence,
    family: &str,
) -> Result<SubsequenceRecurrence, RecurrenceError> {
    assert!(stride >= 1, "stride must be positive");
    let power = c.root_power(stride);
    let sub = seq.subsequence(stride, residue);
    let minimal = minimal_annihilator(&power, &sub, &format!("{family}[{stride}m+{residue}]"))?;
    Ok(SubsequenceRecurrence {
        stride,
        residue,
        power,
        minimal,
    })
}

/// Least common multiple of several annihilators: the smallest operator
/// killing all of the sequences at once.
pub fn joint_annihilator<'a>(ops: impl IntoIterator<Item = &'a ShiftPoly>) -> ShiftPoly {
    ops.into_iter().fold(ShiftPoly::one(), |acc, p| acc.lcm(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ShiftPoly {
        s.parse().unwrap()
    }

    fn fib_like(len: usize) -> Sequence {
        // s_n = 3 s_{n-1} - s_{n-2}: 1, 2, 5, 13, …
        let mut v = vec![BigInt::from(1), BigInt::from(2)];
        while v.len() < len {
            let n = v.len();
            v.push(BigInt::from(3) * &v[n - 1] - &v[n - 2]);
        }
        Sequence::new(1, v)
    }

    #[test]
    fn constant_sequence() {
        let s = Sequence::from_fn(4, 12, |_| BigInt::one());
        assert_eq!(validity_index(&p("Y - 1"), &s).unwrap(), 5);
        assert_eq!(hankel_minimal_recurrence(&s).unwrap(), p("Y - 1"));
        let sub = subsequence_annihilator(
            &p("Y - 1"),
            3,
            0,
            &Sequence::from_fn(1, 60, |_| BigInt::one()),
            "c",
        )
        .unwrap();
        assert_eq!(sub.minimal.annihilator, p("Y - 1"));
    }

    #[test]
    fn minimal_from_product() {
        let s = fib_like(40);
        let a = &p("Y^2 - 3*Y + 1") * &p("Y + 1").pow(2);
        let r = minimal_annihilator(&a, &s, "f").unwrap();
        assert_eq!(r.annihilator, p("Y^2 - 3*Y + 1"));
        assert_eq!(r.validity_index, 3);
    }

    #[test]
    fn even_subsequence_of_fibonacci_type() {
        let s = fib_like(60);
        let sub = subsequence_annihilator(&p("Y^2 - 3*Y + 1"), 2, 0, &s, "f").unwrap();
        assert_eq!(sub.minimal.annihilator, p("Y^2 - 7*Y + 1"));
        // independent: order-2 fit of the even terms directly
        let even = s.subsequence(2, 0);
        assert_eq!(
            hankel_minimal_recurrence(&even).unwrap(),
            p("Y^2 - 7*Y + 1")
        );
    }

    #[test]
    fn eventual_validity() {
        // n - 1 for n >= 3, junk before
        let mut s = Sequence::from_fn(1, 20, |n| BigInt::from(n - 1));
        s.values[0] = BigInt::from(7);
        assert_eq!(validity_index(&p("Y^2 - 2*Y + 1"), &s).unwrap(), 4);
        assert!(matches!(
            validity_index(&p("Y - 1"), &s),
            Err(RecurrenceError::NoAnnihilation { .. })
        ));
    }

    #[test]
    fn division_failure_is_reported() {
        let s = fib_like(40);
        let a = p("Y^2 - 2*Y + 1").pow(3);
        assert!(matches!(
            minimal_annihilator(&a, &s, "f"),
            Err(RecurrenceError::NoAnnihilation { .. })
        ));
    }

    #[test]
    fn joint() {
        let a = p("Y - 1").pow(2);
        let b = &p("Y - 1") * &p("Y + 1");
        assert_eq!(
            joint_annihilator([&a, &b]),
            (&p("Y - 1").pow(2) * &p("Y + 1")).normalized()
        );
    }
}

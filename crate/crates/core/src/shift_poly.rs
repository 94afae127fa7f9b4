//! Integer polynomials in the backward-shift operator `Y`.
//!
//! `Y` acts on a sequence by `Y(G_n) = G_{n-1}`, so a polynomial
//! `A = Σ a_i Y^i` applied to `s` at index `n` is `Σ a_i s_{n-i}`. `A`
//! annihilates `s` from `v` on when that action vanishes for every `n ≥ v`.
//!
//! The same coefficient lists read in the other direction give the
//! characteristic polynomial [`CharPoly`] in `X`: `C(X) = X^d · A(1/X)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{det_fraction_free, ExactRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("index underflow: applying a degree-{degree} operator at n = {at} needs s_{needed}, sequence starts at {start}")]
    IndexUnderflow {
        degree: usize,
        at: i64,
        needed: i64,
        start: i64,
    },
    #[error("index {at} is past the end of the sequence (last index {last})")]
    IndexOverflow { at: i64, last: i64 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Exact integer sequence `s_start, s_{start+1}, …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence {
    pub start: i64,
    pub values: Vec<BigInt>,
}

impl Sequence {
    pub fn new(start: i64, values: Vec<BigInt>) -> Self {
        Sequence { start, values }
    }

    pub fn from_fn(start: i64, len: usize, mut f: impl FnMut(i64) -> BigInt) -> Self {
        let values = (0..len as i64).map(|k| f(start + k)).collect();
        Sequence { start, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last index held, or `start - 1` when empty.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<&BigInt> {
        if n < self.start {
            return None;
        }
        self.values.get((n - self.start) as usize)
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.start..=self.end()
    }

    /// `m ↦ s_{stride·m + residue}` over the indices that are present, with
    /// `m` starting at the smallest value for which the index is in range.
    pub fn subsequence(&self, stride: usize, residue: i64) -> Sequence {
        assert!(stride >= 1, "stride must be positive");
        let s = stride as i64;
        let first_m = Integer::div_ceil(&(self.start - residue), &s);
        let mut values = Vec::new();
        let mut m = first_m;
        while let Some(v) = self.get(s * m + residue) {
            values.push(v.clone());
            m += 1;
        }
        Sequence::new(first_m, values)
    }
}

/// Polynomial in `Y` with integer coefficients; `coeffs[i]` multiplies `Y^i`.
///
/// Always canonical: the highest stored coefficient is nonzero, and the zero
/// polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ShiftPoly {
    coeffs: Vec<BigInt>,
}

impl ShiftPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ShiftPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ShiftPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The operator `Y` itself.
    pub fn y() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, k: &BigInt) -> ShiftPoly {
        if k.is_zero() {
            return ShiftPoly::zero();
        }
        ShiftPoly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiply by `Y^k`.
    pub fn shift(&self, k: usize) -> ShiftPoly {
        if self.is_zero() {
            return ShiftPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        ShiftPoly { coeffs }
    }

    /// Content 1 and positive leading coefficient. Zero stays zero.
    pub fn normalized(&self) -> ShiftPoly {
        if self.is_zero() {
            return ShiftPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        ShiftPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> ShiftPoly {
        let mut base = self.clone();
        let mut acc = ShiftPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> ShiftPoly {
        ShiftPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `A(-Y)`.
    pub fn negate_variable(&self) -> ShiftPoly {
        ShiftPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn eval(&self, y: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * y + c)
    }

    /// `Σ a_i s_{n-i}`.
    pub fn apply(&self, seq: &Sequence, n: i64) -> Result<BigInt, PolyError> {
        let d = self.degree().unwrap_or(0);
        let needed = n - d as i64;
        if needed < seq.start {
            return Err(PolyError::IndexUnderflow {
                degree: d,
                at: n,
                needed,
                start: seq.start,
            });
        }
        if n > seq.end() {
            return Err(PolyError::IndexOverflow {
                at: n,
                last: seq.end(),
            });
        }
        let mut acc = BigInt::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc += a * seq.get(n - i as i64).expect("checked range");
            }
        }
        Ok(acc)
    }

    /// The operator applied at every index where it is defined.
    pub fn apply_all(&self, seq: &Sequence) -> Sequence {
        let d = self.degree().unwrap_or(0) as i64;
        let start = seq.start + d;
        let values = (start..=seq.end())
            .map(|n| self.apply(seq, n).expect("in range"))
            .collect();
        Sequence::new(start, values)
    }

    /// Exact division in `Z[Y]`: `Some(q)` with `b = self · q`, `None` when
    /// the remainder is nonzero or the quotient is not integral.
    pub fn divides(&self, b: &ShiftPoly) -> Result<Option<ShiftPoly>, PolyError> {
        let da = self.degree().ok_or(PolyError::DivisionByZero)?;
        if b.is_zero() {
            return Ok(Some(ShiftPoly::zero()));
        }
        let db = b.degree().unwrap();
        if db < da {
            return Ok(None);
        }
        let lead = self.leading().unwrap();
        let mut rem = b.coeffs.clone();
        let mut quot = vec![BigInt::zero(); db - da + 1];
        for k in (0..=db - da).rev() {
            let top = &rem[k + da];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Ok(None);
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                rem[k + i] -= &q * a;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Ok(None);
        }
        Ok(Some(ShiftPoly::new(quot)))
    }

    /// Pseudo-remainder `prem(self, d)`: `lc(d)^(deg self - deg d + 1)·self mod d`.
    fn pseudo_rem(&self, d: &ShiftPoly) -> ShiftPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let c = r.leading().unwrap().clone();
            r = &r.scale(&lead) - &d.scale(&c).shift(dr - dd);
        }
        r
    }

    /// Normalized gcd in `Z[Y]` (primitive remainder sequence).
    pub fn gcd(&self, other: &ShiftPoly) -> ShiftPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.normalized();
        let mut b = other.normalized();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.normalized();
        }
        a.normalized().scale(&content)
    }

    /// Normalized least common multiple.
    pub fn lcm(&self, other: &ShiftPoly) -> ShiftPoly {
        if self.is_zero() || other.is_zero() {
            return ShiftPoly::zero();
        }
        let g = self.gcd(other);
        let q = g
            .divides(&self.normalized())
            .expect("gcd is nonzero")
            .expect("gcd divides its argument");
        (&q * &other.normalized()).normalized()
    }

    /// Yun square-free decomposition of a primitive polynomial:
    /// `[(f_1, 1), (f_2, 2), …]` with `self ~ Π f_k^k`, `f_k` square-free and
    /// pairwise coprime. Factors equal to 1 are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(ShiftPoly, u32)> {
        let f = self.normalized();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let exact = |a: &ShiftPoly, b: &ShiftPoly| -> ShiftPoly {
            a.divides(b)
                .unwrap()
                .expect("exact division in Yun's algorithm")
        };
        let mut out = Vec::new();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = exact(&a, &f);
        let mut c = exact(&a, &df);
        let mut k = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let d = &c - &b.derivative();
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), k));
            }
            b = exact(&g, &b);
            c = exact(&g, &d);
            k += 1;
        }
        out
    }

    /// `Res_Y(A(Y), Z - Y^s)` as a polynomial in `Z`, normalized: its roots
    /// are the `s`-th powers of the roots of `A`, multiplicities kept.
    pub fn root_power(&self, s: usize) -> ShiftPoly {
        assert!(s >= 1, "power must be positive");
        if s == 1 || self.degree().unwrap_or(0) == 0 {
            return self.normalized();
        }
        let m = self.degree().unwrap();
        // Sylvester matrix over Z[Z]; A has constant (in Z) coefficients,
        // g(Y) = Z - Y^s has g_0 = Z and g_s = -1.
        let n = m + s;
        let mut rows: Vec<Vec<ShiftPoly>> = vec![vec![ShiftPoly::zero(); n]; n];
        for r in 0..s {
            for (i, a) in self.coeffs.iter().enumerate().rev() {
                rows[r][r + (m - i)] = ShiftPoly::constant(a.clone());
            }
        }
        for r in 0..m {
            rows[s + r][r] = ShiftPoly::constant(-1);
            rows[s + r][r + s] = ShiftPoly::y();
        }
        det_fraction_free(rows).normalized()
    }

    pub fn to_char(&self) -> CharPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        CharPoly::new(coeffs)
    }

    pub fn from_char(c: &CharPoly) -> ShiftPoly {
        c.to_shift()
    }

    pub fn format_with(&self, var: &str) -> String {
        format_poly(&self.coeffs, var)
    }

    pub fn parse_with(s: &str, var: &str) -> Result<ShiftPoly, PolyError> {
        parse_poly(s, var).map(ShiftPoly::new)
    }
}

impl ExactRing for ShiftPoly {
    fn ring_zero() -> Self {
        ShiftPoly::zero()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
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
        divisor
            .divides(self)
            .expect("nonzero divisor")
            .expect("fraction-free elimination divides exactly")
    }
}

/// Characteristic polynomial in `X`, reciprocal to a [`ShiftPoly`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        CharPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn to_shift(&self) -> ShiftPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        ShiftPoly::new(coeffs)
    }

    /// Same integer polynomial viewed in `Y`; used for arithmetic on X-forms.
    pub fn as_poly(&self) -> ShiftPoly {
        ShiftPoly::new(self.coeffs.clone())
    }

    pub fn from_poly(p: &ShiftPoly) -> CharPoly {
        CharPoly::new(p.coeffs().to_vec())
    }
}

impl fmt::Display for ShiftPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs, "Y"))
    }
}

impl fmt::Debug for ShiftPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShiftPoly({self})")
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs, "X"))
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({self})")
    }
}

impl FromStr for ShiftPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ShiftPoly::parse_with(s, "Y")
    }
}

impl FromStr for CharPoly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s, "X").map(CharPoly::new)
    }
}

impl Serialize for ShiftPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ShiftPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CharPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Descending powers: `Y^4 - 4*Y^2 + 1`.
fn format_poly(coeffs: &[BigInt], var: &str) -> String {
    if coeffs.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

fn parse_poly(input: &str, var: &str) -> Result<Vec<BigInt>, PolyError> {
    let err = |reason: &str| PolyError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty input"));
    }
    // Split into signed terms.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut neg = false;
    for (idx, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && !(idx > 0 && current.ends_with('^')) {
            if idx > 0 {
                if current.is_empty() {
                    return Err(err("dangling sign"));
                }
                terms.push((neg, std::mem::take(&mut current)));
            }
            neg = ch == '-';
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(err("dangling sign"));
    }
    terms.push((neg, current));

    let mut coeffs: Vec<BigInt> = Vec::new();
    for (neg, term) in terms {
        let (coef, power) = match term.find(var) {
            None => (
                term.parse::<BigInt>()
                    .map_err(|_| err("bad constant term"))?,
                0usize,
            ),
            Some(pos) => {
                let head = &term[..pos];
                let tail = &term[pos + var.len()..];
                let coef = if head.is_empty() {
                    BigInt::one()
                } else {
                    let h = head.strip_suffix('*').ok_or_else(|| err("expected '*'"))?;
                    h.parse::<BigInt>().map_err(|_| err("bad coefficient"))?
                };
                let power = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .ok_or_else(|| err("expected '^'"))?
                        .parse::<usize>()
                        .map_err(|_| err("bad exponent"))?
                };
                (coef, power)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        if neg {
            coeffs[power] -= coef;
        } else {
            coeffs[power] += coef;
        }
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// Arithmetic operators

impl<'a> Add<&'a ShiftPoly> for &'a ShiftPoly {
    type Output = ShiftPoly;
    fn add(self, rhs: &ShiftPoly) -> ShiftPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                c += r;
            }
            out.push(c);
        }
        ShiftPoly::new(out)
    }
}

impl<'a> Sub<&'a ShiftPoly> for &'a ShiftPoly {
    type Output = ShiftPoly;
    fn sub(self, rhs: &ShiftPoly) -> ShiftPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                c -= r;
            }
            out.push(c);
        }
        ShiftPoly::new(out)
    }
}

impl<'a> Mul<&'a ShiftPoly> for &'a ShiftPoly {
    type Output = ShiftPoly;
    fn mul(self, rhs: &ShiftPoly) -> ShiftPoly {
        if self.is_zero() || rhs.is_zero() {
            return ShiftPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ShiftPoly::new(out)
    }
}

impl Neg for &ShiftPoly {
    type Output = ShiftPoly;
    fn neg(self) -> ShiftPoly {
        ShiftPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for ShiftPoly {
    type Output = ShiftPoly;
    fn neg(self) -> ShiftPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ShiftPoly> for ShiftPoly {
            type Output = ShiftPoly;
            fn $m(self, rhs: ShiftPoly) -> ShiftPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ShiftPoly> for ShiftPoly {
            type Output = ShiftPoly;
            fn $m(self, rhs: &ShiftPoly) -> ShiftPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ShiftPoly> for &'a ShiftPoly {
            type Output = ShiftPoly;
            fn $m(self, rhs: ShiftPoly) -> ShiftPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&ShiftPoly> for ShiftPoly {
    fn add_assign(&mut self, rhs: &ShiftPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ShiftPoly> for ShiftPoly {
    fn sub_assign(&mut self, rhs: &ShiftPoly) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ShiftPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert!((p("Y") + p("-Y")).is_zero());
        assert_eq!(p("2*Y - Y^2") + p("Y^2"), p("2*Y"));
        assert_eq!(p("3*Y") + p("Y^3"), p("Y^3 + 3*Y"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("Y - 1") * p("Y + 1"), p("Y^2 - 1"));
        let q = p("Y^2 - 3*Y + 1");
        // hand convolution of (1, -3, 1) with itself: (1, -6, 11, -6, 1)
        assert_eq!(&q * &q, ShiftPoly::from_i64s(&[1, -6, 11, -6, 1]));
        assert_eq!(ShiftPoly::one() * q.clone(), q);
    }

    #[test]
    fn apply_examples() {
        // s(n) = n - 1
        let s = Sequence::from_fn(1, 12, |n| BigInt::from(n - 1));
        let a = p("Y^2 - 2*Y + 1");
        for n in 3..=12 {
            assert!(a.apply(&s, n).unwrap().is_zero());
        }
        let ones = Sequence::from_fn(0, 5, |_| BigInt::one());
        assert!(p("Y - 1").apply(&ones, 3).unwrap().is_zero());
        let id = Sequence::from_fn(0, 10, BigInt::from);
        // (Y - 1)s at 5 = s_4 - s_5 = -1 under Σ a_i s_{n-i}
        assert_eq!(p("Y - 1").apply(&id, 5).unwrap(), BigInt::from(-1));
        assert_eq!(p("1 - Y").apply(&id, 5).unwrap(), BigInt::from(1));
    }

    #[test]
    fn apply_underflow() {
        let s = Sequence::from_fn(3, 5, BigInt::from);
        let e = p("Y^2 + 1").apply(&s, 4).unwrap_err();
        assert!(matches!(e, PolyError::IndexUnderflow { needed: 2, .. }));
    }

    #[test]
    fn divides_examples() {
        let f = p("Y^2 - 3*Y + 1");
        let b = &p("Y + 1") * &f.pow(2);
        assert_eq!(f.divides(&b).unwrap(), Some(&p("Y + 1") * &f));
        // synthetic division by Y - 2 leaves remainder 4 - 6 + 1 = -1
        assert_eq!(p("Y - 2").divides(&f).unwrap(), None);
        assert_eq!(f.eval(&BigInt::from(2)), BigInt::from(-1));
        assert_eq!(f.divides(&f).unwrap(), Some(ShiftPoly::one()));
        assert_eq!(
            ShiftPoly::zero().divides(&f),
            Err(PolyError::DivisionByZero)
        );
        // divisible over Q but not over Z
        assert_eq!(ShiftPoly::constant(2).divides(&p("Y")).unwrap(), None);
    }

    #[test]
    fn char_conversion() {
        let a = p("Y^2 - 2*Y + 1");
        assert_eq!(a.to_char().to_string(), "X^2 - 2*X + 1");
        // s_n - 3 s_{n-1} + s_{n-2} = 0  <->  1 - 3Y + Y^2  <->  X^2 - 3X + 1
        let b = p("1 - 3*Y + Y^2");
        assert_eq!(b.to_char(), "X^2 - 3*X + 1".parse().unwrap());
        assert!(ShiftPoly::zero().to_char().coeffs().is_empty());
        let c: CharPoly = "2*X^3 - X + 5".parse().unwrap();
        assert_eq!(c.to_shift().to_char(), c);
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "Y^4 - 4*Y^2 + 1",
            "-Y",
            "2*Y",
            "0",
            "-3",
            "Y^10 - 12*Y^3 + Y",
        ] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!("Y^".parse::<ShiftPoly>().is_err());
        assert!("Y +".parse::<ShiftPoly>().is_err());
        assert!("3Y".parse::<ShiftPoly>().is_err());
        assert!("".parse::<ShiftPoly>().is_err());
    }

    #[test]
    fn normalization() {
        let a = p("-2*Y^2 + 4*Y - 2");
        assert_eq!(a.normalized(), p("Y^2 - 2*Y + 1"));
        assert!(ShiftPoly::zero().normalized().is_zero());
    }

    #[test]
    fn gcd_and_lcm() {
        let f = p("Y^2 - 3*Y + 1");
        let a = &f * &p("Y - 1");
        let b = &f * &p("Y + 1");
        assert_eq!(a.gcd(&b), f);
        assert_eq!(a.lcm(&b), (&f * &p("Y^2 - 1")).normalized());
        assert_eq!(p("2*Y + 2").gcd(&p("4*Y + 4")), p("2*Y + 2"));
    }

    #[test]
    fn squarefree_parts() {
        let f = p("Y^2 - 3*Y + 1");
        let a = &(&p("Y - 1").pow(2) * &f.pow(2)) * &p("Y + 1");
        let parts = a.squarefree_decomposition();
        assert_eq!(
            parts,
            vec![(p("Y + 1"), 1), ((&p("Y - 1") * &f).normalized(), 2)]
        );
    }

    #[test]
    fn root_power_squares_roots() {
        // roots ±1 collide at 1
        assert_eq!(p("Y^2 - 1").root_power(2), p("Y - 1").pow(2));
        // roots ±sqrt(2 ± sqrt 3) square to 2 ± sqrt 3
        assert_eq!(
            p("Y^4 - 4*Y^2 + 1").root_power(2),
            p("Y^2 - 4*Y + 1").pow(2)
        );
        // roots of X^2 - 3X + 1 squared satisfy X^2 - 7X + 1
        assert_eq!(p("Y^2 - 3*Y + 1").root_power(2), p("Y^2 - 7*Y + 1"));
        assert_eq!(p("Y - 2").root_power(3), p("Y - 8"));
    }
}

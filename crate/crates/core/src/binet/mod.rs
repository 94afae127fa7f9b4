//! Binet forms of minimal recursions.
//!
//! A sequence killed by an annihilator with characteristic roots `r_j` of
//! multiplicity `m_j` has, from its validity index on, the shape
//!
//! ```text
//! s_n = Σ_j Σ_{k<m_j} c_{j,k} · C(n - σ + k, k) · r_j^(n - σ)
//! ```
//!
//! which is the coefficient form of the partial fractions `c/(1 - rX)^(k+1)`
//! of the generating function of `g_i = s_{σ+i}`. The shift `σ` is stored
//! so constants can be quoted against any starting index.

pub mod precision;
pub mod resistance;
pub mod roots;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::families::FamilyError;
use crate::recurrence::Recurrence;
use crate::shift_poly::Sequence;

pub use precision::{Complex, Precision, Real};
pub use resistance::*;
pub use roots::{char_roots, Root};

use precision::{abs, to_decimal_string};

#[derive(Debug, Error)]
pub enum BinetError {
    #[error("precision of {0} digits is below the supported minimum of {MIN_DIGITS}")]
    PrecisionTooLow(usize),
    #[error("fit needs exact terms {from}..={to}, the sequence covers {have_from}..={have_to}")]
    SequenceTooShort {
        from: i64,
        to: i64,
        have_from: i64,
        have_to: i64,
    },
    #[error("Binet fit is ill-conditioned at {digits} digits; raise the precision")]
    IllConditioned { digits: usize },
    #[error("root isolation failed: {0}")]
    RootIsolationFailure(String),
    #[error("no unique dominant root: {} share the maximal modulus", roots.join(", "))]
    DominanceTie { roots: Vec<String> },
    #[error("denominator determinant vanishes at size {0} (graph is disconnected)")]
    ZeroDenominator(usize),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

pub const MIN_DIGITS: usize = 30;

#[derive(Debug, Clone)]
pub struct BinetForm {
    pub roots: Vec<Root>,
    /// `coeffs[j][k]` multiplies `C(n - σ + k, k) · r_j^(n - σ)`.
    pub coeffs: Vec<Vec<Complex>>,
    pub start_shift: i64,
    pub precision: Precision,
    /// Precision all arithmetic is carried at.
    pub working: Precision,
}

/// Internal digits used for a requested output precision.
pub fn working_precision(p: Precision) -> Precision {
    Precision::new(2 * p.digits + 20)
}

fn binom_shifted(x: i64, k: usize, p: Precision) -> Real {
    // C(x + k, k) = (x+1)(x+2)…(x+k) / k!
    let mut num = p.one();
    let mut den = p.one();
    for i in 1..=k as i64 {
        num = &num * &p.small(x + i);
        den = &den * &p.small(i);
    }
    &num / &den
}

impl BinetForm {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn eval(&self, n: i64) -> Complex {
        let w = self.working;
        let x = n - self.start_shift;
        let mut acc = Complex::zero(w);
        for (root, cs) in self.roots.iter().zip(&self.coeffs) {
            let pw = root.value.powi(x, w);
            for (k, c) in cs.iter().enumerate() {
                let term = (c * &pw).scale(&binom_shifted(x, k, w));
                acc = &acc + &term;
            }
        }
        acc
    }

    pub fn eval_real(&self, n: i64) -> Real {
        self.eval(n).re
    }

    /// Coefficients against `C(n - σ + k, k) · r_j^n`, i.e. `c · r_j^(-σ)`.
    pub fn primed_coeffs(&self) -> Vec<Vec<Complex>> {
        self.roots
            .iter()
            .zip(&self.coeffs)
            .map(|(root, cs)| {
                let s = root.value.powi(-self.start_shift, self.working);
                cs.iter().map(|c| c * &s).collect()
            })
            .collect()
    }

    /// Same function of `n`, quoted against a different start shift. Each
    /// root block is refitted from its own values.
    pub fn reshifted(&self, start_shift: i64) -> BinetForm {
        let w = self.working;
        let coeffs = self
            .roots
            .iter()
            .zip(&self.coeffs)
            .map(|(root, cs)| {
                let m = cs.len();
                let single = BinetForm {
                    roots: vec![root.clone()],
                    coeffs: vec![cs.clone()],
                    start_shift: self.start_shift,
                    precision: self.precision,
                    working: w,
                };
                let rows: Vec<Vec<Complex>> = (0..m as i64)
                    .map(|i| {
                        let pw = root.value.powi(i, w);
                        (0..m).map(|k| pw.scale(&binom_shifted(i, k, w))).collect()
                    })
                    .collect();
                let rhs: Vec<Complex> = (0..m as i64)
                    .map(|i| single.eval(start_shift + i))
                    .collect();
                solve_complex(rows, rhs, w).expect("confluent Vandermonde block of a nonzero root")
            })
            .collect();
        BinetForm {
            roots: self.roots.clone(),
            coeffs,
            start_shift,
            precision: self.precision,
            working: w,
        }
    }

    pub fn dominant_root(&self) -> Option<&Root> {
        self.roots.first()
    }
}

/// Fit the Binet form of `seq` under `rec` on the `deg` exact terms starting
/// at the validity index, then confirm it on the next 26 available terms.
pub fn binet_fit(
    rec: &Recurrence,
    seq: &Sequence,
    precision: Precision,
    start_shift: i64,
) -> Result<BinetForm, BinetError> {
    if precision.digits < MIN_DIGITS {
        return Err(BinetError::PrecisionTooLow(precision.digits));
    }
    let w = working_precision(precision);
    let d = rec.degree();
    let n0 = rec.validity_index.max(seq.start);
    let last = n0 + d as i64 - 1;
    if seq.is_empty() || last > seq.end() {
        return Err(BinetError::SequenceTooShort {
            from: n0,
            to: last,
            have_from: seq.start,
            have_to: seq.end(),
        });
    }
    let roots = char_roots(&rec.annihilator.to_char(), w)?;
    let rows: Vec<Vec<Complex>> = (n0..=last)
        .map(|n| {
            let x = n - start_shift;
            roots
                .iter()
                .flat_map(|r| {
                    let pw = r.value.powi(x, w);
                    (0..r.multiplicity).map(move |k| pw.scale(&binom_shifted(x, k, w)))
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Complex> = (n0..=last)
        .map(|n| Complex::real(w.int(seq.get(n).expect("checked range"))))
        .collect();
    let flat = solve_complex(rows, rhs, w).ok_or(BinetError::IllConditioned {
        digits: precision.digits,
    })?;
    let mut it = flat.into_iter();
    let coeffs = roots
        .iter()
        .map(|r| it.by_ref().take(r.multiplicity).collect())
        .collect();
    let bf = BinetForm {
        roots,
        coeffs,
        start_shift,
        precision,
        working: w,
    };
    let tol = w.tenth_pow(precision.digits - 10);
    for n in n0..=(n0 + 25).min(seq.end()) {
        let exact = w.int(seq.get(n).expect("in range"));
        let got = bf.eval_real(n);
        let err = abs(&(&got - &exact));
        if err > &tol * &abs(&exact) && err > tol {
            return Err(BinetError::IllConditioned {
                digits: precision.digits,
            });
        }
    }
    Ok(bf)
}

/// Gaussian elimination with partial pivoting; `None` on a pivot that is
/// zero at the working precision.
fn solve_complex(
    mut a: Vec<Vec<Complex>>,
    mut b: Vec<Complex>,
    p: Precision,
) -> Option<Vec<Complex>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter().map(Complex::abs))
        .fold(p.zero(), |m, x| if x > m { x } else { m });
    let tiny = &scale * &p.tenth_pow(p.digits.saturating_sub(10));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .norm_sqr()
                .partial_cmp(&a[j][col].norm_sqr())
                .expect("finite")
        })?;
        if a[piv][col].abs() <= tiny {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in col + 1..n {
            let f = &a[r][col] * &inv;
            if f.norm_sqr() == Real::ZERO {
                continue;
            }
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
            let t = &f * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    let mut x = vec![Complex::zero(p); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = &acc - &(&a[r][c] * &x[c]);
        }
        x[r] = &acc / &a[r][r];
    }
    Some(x)
}

/// Truncation to the terms of the root of largest modulus.
pub fn asymptotic_form(bf: &BinetForm) -> Result<BinetForm, BinetError> {
    let Some(first) = bf.roots.first() else {
        return Ok(bf.clone());
    };
    let w = bf.working;
    let top = first.value.abs();
    let tol = &top * &w.tenth_pow(bf.precision.digits);
    let tied: Vec<&Root> = bf
        .roots
        .iter()
        .filter(|r| abs(&(&r.value.abs() - &top)) <= tol)
        .collect();
    if tied.len() > 1 {
        return Err(BinetError::DominanceTie {
            roots: tied.iter().map(|r| format_complex(&r.value, 12)).collect(),
        });
    }
    Ok(BinetForm {
        roots: vec![first.clone()],
        coeffs: vec![bf.coeffs[0].clone()],
        start_shift: bf.start_shift,
        precision: bf.precision,
        working: w,
    })
}

/// `form(n) / s_n` for each `n` in range.
pub fn ratio_table(form: &BinetForm, seq: &Sequence, from: i64, to: i64) -> Vec<(i64, Real)> {
    let w = form.working;
    (from..=to)
        .filter_map(|n| {
            let exact = seq.get(n)?;
            Some((n, &form.eval_real(n) / &w.int(exact)))
        })
        .collect()
}

pub fn format_real(x: &Real, digits: usize) -> String {
    to_decimal_string(x, digits)
}

/// `a` for real values, `a+bi` otherwise.
pub fn format_complex(z: &Complex, digits: usize) -> String {
    let w = Precision::new(digits);
    if roots::is_real(z, w) {
        format_real(&z.re, digits)
    } else {
        let im = format_real(&abs(&z.im), digits);
        let sign = if z.im < Real::ZERO { '-' } else { '+' };
        format!("{}{}{}i", format_real(&z.re, digits), sign, im)
    }
}

impl Serialize for BinetForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct RootOut {
            value: String,
            multiplicity: usize,
            coeffs: Vec<String>,
            primed_coeffs: Vec<String>,
        }
        let digits = self.precision.digits;
        let primed = self.primed_coeffs();
        let roots: Vec<RootOut> = self
            .roots
            .iter()
            .zip(&self.coeffs)
            .zip(&primed)
            .map(|((r, cs), ps)| RootOut {
                value: format_complex(&r.value, digits),
                multiplicity: r.multiplicity,
                coeffs: cs.iter().map(|c| format_complex(c, digits)).collect(),
                primed_coeffs: ps.iter().map(|c| format_complex(c, digits)).collect(),
            })
            .collect();
        let mut st = s.serialize_struct("BinetForm", 3)?;
        st.serialize_field("start_shift", &self.start_shift)?;
        st.serialize_field("precision_digits", &digits)?;
        st.serialize_field("roots", &roots)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::precision::to_f64;
    use super::*;
    use crate::shift_poly::ShiftPoly;
    use num_bigint::BigInt;

    fn rec(op: &str, v: i64) -> Recurrence {
        Recurrence {
            family: "t".into(),
            annihilator: op.parse::<ShiftPoly>().unwrap(),
            validity_index: v,
            tested_range: (0, 0),
        }
    }

    #[test]
    fn constant_sequence() {
        let s = Sequence::from_fn(1, 3, |_| BigInt::from(1));
        let bf = binet_fit(&rec("Y - 1", 2), &s, Precision::new(30), 0).unwrap();
        assert_eq!(bf.roots.len(), 1);
        assert!((to_f64(&bf.roots[0].value.re) - 1.0).abs() < 1e-30);
        assert!((to_f64(&bf.coeffs[0][0].re) - 1.0).abs() < 1e-30);
        let a = asymptotic_form(&bf).unwrap();
        assert_eq!(to_f64(&a.eval_real(40)), 1.0);
    }

    #[test]
    fn repeated_root_is_linear() {
        // s_n = n - 1: root 1 twice, and with σ = 0 the form is -1 + 1·(n + 1) - 1
        let s = Sequence::from_fn(3, 40, |n| BigInt::from(n - 1));
        let bf = binet_fit(&rec("Y^2 - 2*Y + 1", 5), &s, Precision::new(40), 0).unwrap();
        assert_eq!(bf.degree(), 2);
        assert!((to_f64(&bf.eval_real(100)) - 99.0).abs() < 1e-25);
        let re = bf.reshifted(7);
        assert!((to_f64(&re.eval_real(100)) - 99.0).abs() < 1e-25);
        assert_eq!(re.start_shift, 7);
    }

    #[test]
    fn dominance_tie() {
        let s = Sequence::from_fn(0, 30, |n| BigInt::from(if n % 2 == 0 { 3 } else { 1 }));
        let bf = binet_fit(&rec("1 - Y^2", 2), &s, Precision::new(30), 0).unwrap();
        assert!(matches!(
            asymptotic_form(&bf),
            Err(BinetError::DominanceTie { .. })
        ));
    }

    #[test]
    fn low_precision_rejected() {
        let s = Sequence::from_fn(0, 5, |_| BigInt::from(1));
        assert!(matches!(
            binet_fit(&rec("Y - 1", 1), &s, Precision::new(10), 0),
            Err(BinetError::PrecisionTooLow(10))
        ));
    }
}

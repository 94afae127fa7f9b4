//! Two-terminal resistance from determinant ratios, and the classical
//! Fibonacci closed forms it is checked against.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::precision::{Precision, Real};
use super::{format_complex, format_real, BinetError, BinetForm};
use crate::families::{bapat_handles, FamilySpec};
use crate::oracle::resistance_solve;

/// `r(1, N) = Det(L_N({1,N}|{1,N})) / Det(L_N(d|d))` with `d` the spec's
/// denominator choice.
pub fn resistance_exact(spec: &FamilySpec, size: usize) -> Result<BigRational, BinetError> {
    let spec = Arc::new(spec.clone());
    let (num, den) = bapat_handles(&spec, spec.denominator);
    let n = num.instantiate(size - 2)?.det();
    let d = den.instantiate(size - 1)?.det();
    if d.is_zero() {
        return Err(BinetError::ZeroDenominator(size));
    }
    Ok(BigRational::new(n, d))
}

/// `R(n) = num(n - 2) / den(n - 1)` from fitted forms.
pub fn resistance_from_forms(num: &BinetForm, den: &BinetForm, n: i64) -> Real {
    &num.eval_real(n - 2) / &den.eval_real(n - 1)
}

/// `R(n + 1) - R(n)` for each `n` in `from..=to`.
pub fn resistance_asymptotic_difference(
    num: &BinetForm,
    den: &BinetForm,
    from: i64,
    to: i64,
) -> Vec<(i64, Real)> {
    (from..=to)
        .into_par_iter()
        .map(|n| {
            let d = resistance_from_forms(num, den, n + 1) - resistance_from_forms(num, den, n);
            (n, d)
        })
        .collect()
}

/// Exact `r(1, n + 1) - r(1, n)` for `n` in `from..=to`.
pub fn exact_differences(
    spec: &FamilySpec,
    from: usize,
    to: usize,
) -> Result<Vec<(usize, BigRational)>, BinetError> {
    let values: Result<Vec<BigRational>, BinetError> = (from..=to + 1)
        .into_par_iter()
        .map(|n| resistance_exact(spec, n))
        .collect();
    let values = values?;
    Ok((from..=to)
        .zip(values.windows(2))
        .map(|(n, w)| (n, &w[1] - &w[0]))
        .collect())
}

/// `F_n`, extended to negative indices by `F_{-n} = (-1)^(n+1) F_n`.
pub fn fibonacci(n: i64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n.unsigned_abs() {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    if n < 0 && n % 2 == 0 {
        -a
    } else {
        a
    }
}

/// `L_n = F_{n-1} + F_{n+1}`.
pub fn lucas(n: i64) -> BigInt {
    fibonacci(n - 1) + fibonacci(n + 1)
}

fn q(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// `(n-1)/5 + 4F_{n-1} / (5L_{n-1})`.
pub fn two_tree_formula(n: i64) -> BigRational {
    q((n - 1).into(), 5.into()) + q(4 * fibonacci(n - 1), 5 * lucas(n - 1))
}

/// Fan on `k` vertices, rim vertex `i` to hub, as a sum of Fibonacci numbers.
pub fn fan_formula_sum(i: i64, k: i64) -> BigRational {
    q(
        fibonacci(2 * (k - 1 - i) + 1) + fibonacci(2 * i - 1),
        fibonacci(2 * k - 2),
    )
}

/// Fan on `k` vertices, rim vertex `i` to hub, as a product.
pub fn fan_formula_product(i: i64, k: i64) -> BigRational {
    q(
        fibonacci(2 * (k - 1 - i) + 1) * fibonacci(2 * i - 1),
        fibonacci(2 * k - 2),
    )
}

/// Wheel on `k` vertices, any rim vertex to hub.
pub fn wheel_formula(k: i64) -> BigRational {
    let f = fibonacci(2 * k - 2);
    q(&f * &f, fibonacci(4 * k - 4) - 2 * &f)
}

/// `-1 - √3 + 2√3 / (1 - (2 - √3)^(2m))`.
pub fn ladder_closed_form(m: i64, p: Precision) -> Real {
    let s3 = p.small(3).sqrt();
    let alpha = p.small(2) - &s3;
    let mut pw = p.one();
    for _ in 0..2 * m {
        pw = &pw * &alpha;
    }
    let two_s3 = &p.small(2) * &s3;
    -p.one() - &s3 + &two_s3 / &(p.one() - pw)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactResistance {
    pub n: usize,
    pub value: String,
    pub decimal: String,
    pub oracle_agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Difference {
    pub n: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticSummary {
    pub dominant_root: String,
    pub numerator_coeffs: Vec<String>,
    pub denominator_coeffs: Vec<String>,
    pub difference_at_end: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResistanceReport {
    pub family: String,
    pub exact: Vec<ExactResistance>,
    pub asymptotic: Option<AsymptoticSummary>,
    pub differences: Vec<Difference>,
    pub limit_estimate: Option<String>,
}

impl ResistanceReport {
    pub fn all_agree(&self) -> bool {
        self.exact.iter().all(|e| e.oracle_agrees)
    }
}

/// Exact `r(1, n)` over `sizes`, each checked against the grounded solve,
/// with successive differences and, when both dominant forms are given,
/// their asymptotic difference.
pub fn resistance_report(
    spec: &FamilySpec,
    sizes: &[usize],
    forms: Option<(&BinetForm, &BinetForm)>,
    digits: usize,
) -> Result<ResistanceReport, BinetError> {
    let p = Precision::new(digits);
    let exact: Result<Vec<(usize, BigRational, bool)>, BinetError> = sizes
        .par_iter()
        .map(|&n| {
            let r = resistance_exact(spec, n)?;
            let agrees = resistance_solve(spec, n, 1, n)
                .map(|s| s == r)
                .unwrap_or(false);
            Ok((n, r, agrees))
        })
        .collect();
    let exact = exact?;
    let differences: Vec<Difference> = exact
        .windows(2)
        .map(|w| Difference {
            n: w[0].0,
            value: format_real(&p.rational(&(&w[1].1 - &w[0].1)), digits),
        })
        .collect();
    let asymptotic = forms.map(|(num, den)| {
        let end = *sizes.last().unwrap_or(&0) as i64;
        let diff = resistance_from_forms(num, den, end + 1) - resistance_from_forms(num, den, end);
        AsymptoticSummary {
            dominant_root: num
                .roots
                .first()
                .map(|r| format_complex(&r.value, digits))
                .unwrap_or_default(),
            numerator_coeffs: num
                .primed_coeffs()
                .iter()
                .flatten()
                .map(|c| format_complex(c, digits))
                .collect(),
            denominator_coeffs: den
                .primed_coeffs()
                .iter()
                .flatten()
                .map(|c| format_complex(c, digits))
                .collect(),
            difference_at_end: format_real(&diff, digits),
        }
    });
    let limit_estimate = asymptotic
        .as_ref()
        .map(|a| a.difference_at_end.clone())
        .or_else(|| differences.last().map(|d| d.value.clone()));
    Ok(ResistanceReport {
        family: spec.name.clone(),
        exact: exact
            .into_iter()
            .map(|(n, r, oracle_agrees)| ExactResistance {
                n,
                value: r.to_string(),
                decimal: format_real(&p.rational(&r), digits.min(20)),
                oracle_agrees,
            })
            .collect(),
        asymptotic,
        differences,
        limit_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::builtin;

    #[test]
    fn fibonacci_values() {
        let f: Vec<i64> = (-4..=8).map(|n| fibonacci(n).try_into().unwrap()).collect();
        assert_eq!(f, vec![-3, 2, -1, 1, 0, 1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(lucas(0), BigInt::from(2));
        assert_eq!(lucas(5), BigInt::from(11));
    }

    #[test]
    fn path_is_n_minus_one() {
        let p = builtin("path").unwrap();
        for n in 3..20 {
            assert_eq!(
                resistance_exact(&p, n).unwrap(),
                BigRational::from_integer((n as i64 - 1).into())
            );
        }
    }

    #[test]
    fn wheel_small() {
        let w = builtin("wheel").unwrap();
        for k in 6..10 {
            assert_eq!(resistance_exact(&w, k).unwrap(), wheel_formula(k as i64));
        }
    }
}

//! Roots of integer characteristic polynomials at arbitrary precision.
//!
//! Repeated roots are split off first by squarefree decomposition. Real
//! roots of each squarefree part are isolated exactly with a Sturm chain
//! over the rationals and then polished by bracketed Newton steps; the
//! remaining complex roots come from Weierstrass (Durand-Kerner) iteration.
//! Every root is certified by the disc bound `|z - ζ| ≤ d·|p(z)/p'(z)|`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::precision::{abs, Complex, Precision, Real};
use super::BinetError;
use crate::shift_poly::{CharPoly, ShiftPoly};

#[derive(Debug, Clone)]
pub struct Root {
    pub value: Complex,
    pub multiplicity: usize,
}

/// Distinct roots of `c` with multiplicities, largest modulus first.
pub fn char_roots(c: &CharPoly, p: Precision) -> Result<Vec<Root>, BinetError> {
    let poly = c.as_poly();
    if poly.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (factor, mult) in poly.squarefree_decomposition() {
        if factor.degree().unwrap_or(0) == 0 {
            continue;
        }
        for z in squarefree_roots(&factor, p)? {
            out.push(Root {
                value: z,
                multiplicity: mult as usize,
            });
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

pub fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        let (ma, mb) = (a.value.norm_sqr(), b.value.norm_sqr());
        mb.partial_cmp(&ma)
            .unwrap_or(Ordering::Equal)
            .then_with(|| {
                b.value
                    .re
                    .partial_cmp(&a.value.re)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| {
                b.value
                    .im
                    .partial_cmp(&a.value.im)
                    .unwrap_or(Ordering::Equal)
            })
    });
}

fn squarefree_roots(f: &ShiftPoly, p: Precision) -> Result<Vec<Complex>, BinetError> {
    let d = f.degree().expect("nonconstant");
    let reals = real_roots(f, p)?;
    let k = reals.len();
    let mut roots: Vec<Complex> = reals.into_iter().map(Complex::real).collect();
    if k < d {
        let mut all = weierstrass(f, p)?;
        all.sort_by(|a, b| {
            abs(&b.im)
                .partial_cmp(&abs(&a.im))
                .unwrap_or(Ordering::Equal)
        });
        all.truncate(d - k);
        for z in all {
            roots.push(newton_complex(f, z, p));
        }
    }
    certify(f, &roots, p)?;
    Ok(roots)
}

fn real_poly(f: &ShiftPoly, p: Precision) -> Vec<Real> {
    f.coeffs().iter().map(|c| p.int(c)).collect()
}

fn horner_real(c: &[Real], x: &Real) -> (Real, Real) {
    let mut v = c.last().expect("nonzero").clone();
    let mut dv = v.clone() - v.clone();
    for a in c.iter().rev().skip(1) {
        dv = &dv * x + &v;
        v = &v * x + a;
    }
    (v, dv)
}

fn horner_complex(c: &[Real], z: &Complex) -> (Complex, Complex) {
    let lead = c.last().expect("nonzero").clone();
    let mut v = Complex::real(lead);
    let mut dv = Complex::new(v.im.clone(), v.im.clone());
    for a in c.iter().rev().skip(1) {
        dv = &(&dv * z) + &v;
        v = &v * z;
        v.re += a;
    }
    (v, dv)
}

/// Cauchy bound `1 + max |a_i / a_d|`, as an integer.
fn root_bound(f: &ShiftPoly) -> BigInt {
    let lead = f.leading().expect("nonzero").abs();
    let max = f.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    max / lead + 2
}

type QPoly = Vec<BigRational>;

fn q_trim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn q_rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = r.last().unwrap() / b.last().unwrap();
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &q * bi;
        }
        r.pop();
        r = q_trim(r);
    }
    r
}

fn q_eval(a: &[BigRational], x: &BigRational) -> BigRational {
    a.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

struct Sturm {
    chain: Vec<QPoly>,
}

impl Sturm {
    fn new(f: &ShiftPoly) -> Self {
        let q = |c: &BigInt| BigRational::from_integer(c.clone());
        let p0: QPoly = f.coeffs().iter().map(q).collect();
        let p1: QPoly = f.derivative().coeffs().iter().map(q).collect();
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            let r = q_rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Sturm { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let v = q_eval(p, x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                continue;
            };
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Real roots of a squarefree `f`, ascending.
fn real_roots(f: &ShiftPoly, p: Precision) -> Result<Vec<Real>, BinetError> {
    let sturm = Sturm::new(f);
    let b = BigRational::from_integer(root_bound(f));
    let mut pending = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    let two = BigRational::from_integer(2.into());
    while let Some((lo, hi)) = pending.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                pending.push((lo, mid.clone()));
                pending.push((mid, hi));
            }
        }
    }
    isolated.sort_by(|x, y| x.0.cmp(&y.0));
    let coeffs = f.coeffs();
    isolated
        .into_iter()
        .map(|(lo, hi)| {
            let q = |c: &BigInt| BigRational::from_integer(c.clone());
            let qc: QPoly = coeffs.iter().map(q).collect();
            if q_eval(&qc, &hi).is_zero() {
                return Ok(p.rational(&hi));
            }
            polish_real(f, p.rational(&lo), p.rational(&hi), p)
        })
        .collect()
}

/// Bracketed Newton: Newton steps that leave the bracket are replaced by
/// bisection, and the bracket shrinks on every step.
fn polish_real(
    f: &ShiftPoly,
    mut lo: Real,
    mut hi: Real,
    p: Precision,
) -> Result<Real, BinetError> {
    let c = real_poly(f, p);
    let eps = p.tenth_pow(p.digits + 8);
    let two = p.small(2);
    let lo_neg = horner_real(&c, &lo).0 < Real::ZERO;
    let mut x = (&lo + &hi) / &two;
    for _ in 0..20 * p.bits() {
        let (v, dv) = horner_real(&c, &x);
        if v == Real::ZERO {
            return Ok(x);
        }
        if (v < Real::ZERO) == lo_neg {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let newton = if dv != Real::ZERO {
            Some(&x - &(&v / &dv))
        } else {
            None
        };
        let next = match newton {
            Some(n) if n > lo && n < hi => n,
            _ => (&lo + &hi) / &two,
        };
        let step = abs(&(&next - &x));
        x = next;
        let scale = abs(&x) + p.one();
        if step <= &eps * &scale || abs(&(&hi - &lo)) <= &eps * &scale {
            return Ok(x);
        }
    }
    Err(BinetError::RootIsolationFailure(format!(
        "real root of {} did not converge",
        f
    )))
}

/// All roots of a squarefree `f` by simultaneous iteration.
fn weierstrass(f: &ShiftPoly, p: Precision) -> Result<Vec<Complex>, BinetError> {
    let d = f.degree().expect("nonconstant");
    let lead = p.int(f.leading().expect("nonzero"));
    let c: Vec<Real> = real_poly(f, p).iter().map(|a| a / &lead).collect();
    let r = p.int(&root_bound(f));
    let seed = Complex::new(p.rational(&ratio(2, 5)), p.rational(&ratio(9, 10)));
    let mut z: Vec<Complex> = (0..d)
        .map(|k| seed.powi(k as i64 + 1, p).scale(&r))
        .collect();
    let eps = p.tenth_pow(p.digits + 4);
    for _ in 0..4000 {
        let mut worst = p.zero();
        for i in 0..d {
            let (v, _) = horner_complex(&c, &z[i]);
            let mut den = Complex::one(p);
            for j in 0..d {
                if j != i {
                    den = &den * &(&z[i] - &z[j]);
                }
            }
            if den.norm_sqr() == Real::ZERO {
                z[i] = &z[i] + &Complex::new(eps.clone(), eps.clone());
                continue;
            }
            let delta = &v / &den;
            let size = delta.abs() / (z[i].abs() + p.one());
            if size > worst {
                worst = size;
            }
            z[i] = &z[i] - &delta;
        }
        if worst < eps {
            return Ok(z);
        }
    }
    Err(BinetError::RootIsolationFailure(format!(
        "simultaneous iteration for {} did not converge",
        f
    )))
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn newton_complex(f: &ShiftPoly, mut z: Complex, p: Precision) -> Complex {
    let c = real_poly(f, p);
    let eps = p.tenth_pow(p.digits + 8);
    for _ in 0..64 {
        let (v, dv) = horner_complex(&c, &z);
        if dv.norm_sqr() == Real::ZERO {
            break;
        }
        let step = &v / &dv;
        z = &z - &step;
        if step.abs() <= &eps * &(z.abs() + p.one()) {
            break;
        }
    }
    z
}

/// Each root must lie within a tiny proven disc, and the discs of distinct
/// roots must be disjoint.
fn certify(f: &ShiftPoly, roots: &[Complex], p: Precision) -> Result<(), BinetError> {
    let c = real_poly(f, p);
    let d = p.small(f.degree().expect("nonconstant") as i64);
    let tol = p.tenth_pow(p.digits);
    let mut radii = Vec::with_capacity(roots.len());
    for z in roots {
        let (v, dv) = horner_complex(&c, z);
        if dv.norm_sqr() == Real::ZERO {
            return Err(BinetError::RootIsolationFailure(format!(
                "vanishing derivative at a root of {}",
                f
            )));
        }
        let rho = &d * &(v.abs() / dv.abs());
        if rho > &tol * &(z.abs() + p.one()) {
            return Err(BinetError::RootIsolationFailure(format!(
                "residual bound too large for a root of {} near {:?}",
                f, z
            )));
        }
        radii.push(rho);
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (&roots[i] - &roots[j]).abs() <= &radii[i] + &radii[j] {
                return Err(BinetError::RootIsolationFailure(format!(
                    "two roots of {} coincide",
                    f
                )));
            }
        }
    }
    Ok(())
}

/// Whether the imaginary part is below the working precision.
pub fn is_real(z: &Complex, p: Precision) -> bool {
    abs(&z.im) <= &p.tenth_pow(p.digits) * &(z.abs() + p.one())
}

#[cfg(test)]
mod tests {
    use super::super::precision::to_f64;
    use super::*;

    fn roots_of(s: &str) -> Vec<Root> {
        let c: CharPoly = s.parse().unwrap();
        char_roots(&c, Precision::new(40)).unwrap()
    }

    #[test]
    fn golden_square() {
        let r = roots_of("X^2 - 3*X + 1");
        assert_eq!(r.len(), 2);
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((to_f64(&r[0].value.re) - phi2).abs() < 1e-14);
        assert!((to_f64(&r[1].value.re) - 1.0 / phi2).abs() < 1e-14);
    }

    #[test]
    fn multiplicities_and_complex() {
        let r = roots_of("X^5 - X^4 + 2*X^3 - 2*X^2 + X - 1");
        // (X - 1)(X^2 + 1)^2
        assert_eq!(r.len(), 3);
        let one = r.iter().find(|x| x.multiplicity == 1).unwrap();
        assert!((to_f64(&one.value.re) - 1.0).abs() < 1e-15);
        let pair: Vec<_> = r.iter().filter(|x| x.multiplicity == 2).collect();
        assert_eq!(pair.len(), 2);
        for z in pair {
            assert!(to_f64(&z.value.re).abs() < 1e-15);
            assert!((to_f64(&z.value.im).abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_rational_root() {
        let r = roots_of("2*X - 1");
        assert_eq!(to_f64(&r[0].value.re), 0.5);
    }
}

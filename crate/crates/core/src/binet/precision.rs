//! Fixed-precision binary floating point and complex numbers on top of it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;

pub type Real = FBig;

/// Working precision, stated in decimal digits and carried in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub digits: usize,
}

pub const DEFAULT_DIGITS: usize = 50;

impl Precision {
    pub fn new(digits: usize) -> Self {
        Precision { digits }
    }

    /// Binary digits for the requested decimal digits plus guard bits.
    pub fn bits(self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
    }

    pub fn int(self, v: &BigInt) -> Real {
        int_to_real(v, self.bits())
    }

    pub fn small(self, v: i64) -> Real {
        Real::from(v).with_precision(self.bits()).value()
    }

    pub fn rational(self, q: &BigRational) -> Real {
        let n = self.int(q.numer());
        let d = self.int(q.denom());
        &n / &d
    }

    /// `10^(-k)` at this precision.
    pub fn tenth_pow(self, k: usize) -> Real {
        let one = self.small(1);
        let ten = Real::from(IBig::from(10u8).pow(k))
            .with_precision(self.bits())
            .value();
        &one / &ten
    }

    pub fn zero(self) -> Real {
        self.small(0)
    }

    pub fn one(self) -> Real {
        self.small(1)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(DEFAULT_DIGITS)
    }
}

pub fn int_to_real(v: &BigInt, bits: usize) -> Real {
    let i = IBig::from_str_radix(&v.to_string(), 10).expect("decimal integer");
    Real::from(i).with_precision(bits).value()
}

pub fn abs(x: &Real) -> Real {
    if *x < Real::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal_string(x: &Real, digits: usize) -> String {
    let d = x.to_decimal().value();
    d.with_precision(digits).value().to_string()
}

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn real(re: Real) -> Self {
        let im = re.clone() - re.clone();
        Complex { re, im }
    }

    pub fn zero(p: Precision) -> Self {
        Complex::new(p.zero(), p.zero())
    }

    pub fn one(p: Precision) -> Self {
        Complex::new(p.one(), p.zero())
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> Complex {
        let n = self.norm_sqr();
        Complex::new(&self.re / &n, -(&self.im / &n))
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, e: i64, p: Precision) -> Complex {
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Complex::one(p);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "{re:e}{im:+e}i")
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &Complex) -> Complex {
        self * &o.recip()
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re.clone(), -self.im.clone())
    }
}

//! Scalar abstractions: floating types for numerics, fields for exact algebra,
//! and helpers for exact rationals.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Floating-point scalar used by evaluation, special functions and eigensolvers.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Coefficient field of a multivariate polynomial.
///
/// Exact arithmetic ([`BigRational`]) is what the Groebner machinery relies on;
/// the bound is generic so that evaluation-only uses can run over floats.
pub trait Field: Num + Clone + PartialEq + Debug + Display + Neg<Output = Self> + Send + Sync {}

impl<T> Field for T where T: Num + Clone + PartialEq + Debug + Display + Neg<Output = T> + Send + Sync {}

pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        return v;
    }
    // fallback for magnitudes outside the direct conversion range
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational value of a finite `f64` (binary expansion, no rounding).
pub fn from_f64_exact(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Rounds `q` to the nearest rational with the given denominator (ties away from zero).
pub fn round_to_denominator(q: &BigRational, denom: &BigInt) -> BigRational {
    let scaled = q * BigRational::from_integer(denom.clone());
    BigRational::new(scaled.round().to_integer(), denom.clone())
}

/// Rounds an `f64` to a rational with denominator `10^digits`, going through
/// the shortest decimal representation of `x`.
pub fn f64_to_decimal_rational(x: f64, digits: u32) -> Option<BigRational> {
    let exact = parse_decimal(&format!("{x:e}"))?;
    Some(round_to_denominator(&exact, &BigInt::from(10u32).pow(digits)))
}

/// Parses a decimal literal (`-12`, `3.25`, `1.5e-3`, `.5`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let s = text.trim();
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    // the fixed-width parse covers typical data and is much cheaper than the bignum one
    let mut numer: BigInt = match digits.parse::<i128>() {
        Ok(v) => BigInt::from(v),
        Err(_) if digits.is_empty() => BigInt::zero(),
        Err(_) => digits.parse().ok()?,
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * ten.pow(scale as u32))
    } else {
        BigRational::new(numer, ten.pow((-scale) as u32))
    })
}

/// Square root of a nonnegative rational.
///
/// Exact when `q` is the square of a rational; otherwise a rational
/// approximation with relative error below `10^-digits`.
pub fn sqrt_rational(q: &BigRational, digits: u32) -> BigRational {
    assert!(!q.is_negative(), "square root of a negative rational");
    if q.is_zero() {
        return BigRational::zero();
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        return BigRational::new(rn, rd);
    }
    // sqrt(n/d) = sqrt(n*d*s^2)/(d*s) with s = 10^(digits + lead)
    let lead = (d.bits() / 3 + 1) as u32;
    let s = BigInt::from(10u32).pow(digits + lead);
    let radicand = n * d * &s * &s;
    BigRational::new(radicand.sqrt(), d * s)
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `C(n, k)` as an exact integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Integer power of a rational (negative exponents invert).
pub fn pow_rational(q: &BigRational, e: i32) -> BigRational {
    num_traits::pow::Pow::pow(q, e)
}

//! Distribution-family catalog: raw moments (numeric and symbolic), CDFs,
//! Gram–Charlier coefficients and empirical moments.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hermite::{self, HermiteCoeffs};
use crate::poly::Ring;
use crate::scalar::{binomial, factorial, int, sqrt_rational, to_f64, Real};
use crate::special;
use crate::{QPoly, Rational};

/// A family parameter: a fixed exact value or a named unknown.
#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Fixed(Rational),
    Unknown(String),
}

impl Param {
    pub fn fixed(&self) -> Option<&Rational> {
        match self {
            Param::Fixed(v) => Some(v),
            Param::Unknown(_) => None,
        }
    }
}

impl From<Rational> for Param {
    fn from(v: Rational) -> Self {
        Param::Fixed(v)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Fixed(v) => write!(f, "{}", format_rational(v)),
            Param::Unknown(name) => write!(f, "?{name}"),
        }
    }
}

/// Terminating decimals print as decimals, everything else as `p/q`.
pub fn format_rational(v: &Rational) -> String {
    let mut d = v.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut digits = 0u32;
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return v.to_string();
    }
    digits += twos.max(fives);
    if digits == 0 {
        return v.numer().to_string();
    }
    let scaled = (v * BigRational::from_integer(BigInt::from(10).pow(digits))).to_integer();
    let negative = scaled.is_negative();
    let mut text = scaled.abs().to_string();
    while text.len() <= digits as usize {
        text.insert(0, '0');
    }
    let split = text.len() - digits as usize;
    format!("{}{}.{}", if negative { "-" } else { "" }, &text[..split], &text[split..])
}

/// A distribution family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Gaussian {
        mu: Param,
        sigma2: Param,
    },
    Gamma {
        shape: Param,
        scale: Param,
    },
    /// Parameterized by the scale `theta = 1 / rate`.
    Exponential {
        theta: Param,
    },
    Uniform {
        a: Param,
        b: Param,
    },
    StudentT {
        nu: Param,
    },
    Poisson {
        rate: Param,
    },
}

fn fixed_pair<'a>(a: &'a Param, b: &'a Param) -> Option<(&'a Rational, &'a Rational)> {
    Some((a.fixed()?, b.fixed()?))
}

impl FamilySpec {
    pub fn gaussian(mu: impl Into<Param>, sigma2: impl Into<Param>) -> Result<Self> {
        FamilySpec::Gaussian { mu: mu.into(), sigma2: sigma2.into() }.validated()
    }

    pub fn gamma(shape: impl Into<Param>, scale: impl Into<Param>) -> Result<Self> {
        FamilySpec::Gamma { shape: shape.into(), scale: scale.into() }.validated()
    }

    pub fn exponential(theta: impl Into<Param>) -> Result<Self> {
        FamilySpec::Exponential { theta: theta.into() }.validated()
    }

    pub fn uniform(a: impl Into<Param>, b: impl Into<Param>) -> Result<Self> {
        FamilySpec::Uniform { a: a.into(), b: b.into() }.validated()
    }

    pub fn student_t(nu: impl Into<Param>) -> Result<Self> {
        FamilySpec::StudentT { nu: nu.into() }.validated()
    }

    pub fn poisson(rate: impl Into<Param>) -> Result<Self> {
        FamilySpec::Poisson { rate: rate.into() }.validated()
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Gaussian { .. } => "gaussian",
            FamilySpec::Gamma { .. } => "gamma",
            FamilySpec::Exponential { .. } => "exponential",
            FamilySpec::Uniform { .. } => "uniform",
            FamilySpec::StudentT { .. } => "studentt",
            FamilySpec::Poisson { .. } => "poisson",
        }
    }

    /// Parameters in canonical order with their names.
    pub fn params(&self) -> Vec<(&'static str, &Param)> {
        match self {
            FamilySpec::Gaussian { mu, sigma2 } => vec![("mu", mu), ("sigma2", sigma2)],
            FamilySpec::Gamma { shape, scale } => vec![("shape", shape), ("scale", scale)],
            FamilySpec::Exponential { theta } => vec![("theta", theta)],
            FamilySpec::Uniform { a, b } => vec![("a", a), ("b", b)],
            FamilySpec::StudentT { nu } => vec![("nu", nu)],
            FamilySpec::Poisson { rate } => vec![("rate", rate)],
        }
    }

    fn params_mut(&mut self) -> Vec<&mut Param> {
        match self {
            FamilySpec::Gaussian { mu, sigma2 } => vec![mu, sigma2],
            FamilySpec::Gamma { shape, scale } => vec![shape, scale],
            FamilySpec::Exponential { theta } => vec![theta],
            FamilySpec::Uniform { a, b } => vec![a, b],
            FamilySpec::StudentT { nu } => vec![nu],
            FamilySpec::Poisson { rate } => vec![rate],
        }
    }

    pub fn unknowns(&self) -> Vec<&str> {
        self.params()
            .into_iter()
            .filter_map(|(_, p)| match p {
                Param::Unknown(name) => Some(name.as_str()),
                Param::Fixed(_) => None,
            })
            .collect()
    }

    pub fn is_fixed(&self) -> bool {
        self.unknowns().is_empty()
    }

    /// Checks positivity constraints on fixed parameters and that unknowns
    /// only appear where moments stay polynomial.
    pub fn validate(&self) -> Result<()> {
        let positive = |p: &Param, what: &str| -> Result<()> {
            match p.fixed() {
                Some(v) if !v.is_positive() => Err(Error::InvalidParameter(format!(
                    "{} {what} must be positive, got {}",
                    self.name(),
                    format_rational(v)
                ))),
                _ => Ok(()),
            }
        };
        match self {
            FamilySpec::Gaussian { sigma2, .. } => positive(sigma2, "sigma2"),
            FamilySpec::Gamma { shape, scale } => {
                positive(shape, "shape")?;
                positive(scale, "scale")
            }
            FamilySpec::Exponential { theta } => positive(theta, "theta"),
            FamilySpec::Uniform { a, b } => match fixed_pair(a, b) {
                Some((a, b)) if a >= b => Err(Error::InvalidParameter(format!(
                    "uniform requires a < b, got a={}, b={}",
                    format_rational(a),
                    format_rational(b)
                ))),
                _ => Ok(()),
            },
            FamilySpec::StudentT { nu } => match nu {
                Param::Unknown(_) => {
                    Err(Error::NonPolynomialParameter { family: "studentt".into(), param: "nu".into() })
                }
                Param::Fixed(_) => positive(nu, "nu"),
            },
            FamilySpec::Poisson { rate } => positive(rate, "rate"),
        }
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Replaces unknowns that have a value in `values`.
    pub fn substitute(&self, values: &HashMap<String, Rational>) -> FamilySpec {
        let mut out = self.clone();
        for p in out.params_mut() {
            if let Param::Unknown(name) = p {
                if let Some(v) = values.get(name.as_str()) {
                    *p = Param::Fixed(v.clone());
                }
            }
        }
        out
    }

    /// Highest raw-moment order that is finite, if bounded.
    pub fn max_finite_order(&self) -> Option<usize> {
        match self {
            FamilySpec::StudentT { nu: Param::Fixed(nu) } => {
                // moments of order k exist iff k < nu
                let floor = nu.floor().to_integer();
                let k = if nu.is_integer() { floor - 1 } else { floor };
                Some(usize::try_from(k).unwrap_or(0))
            }
            _ => None,
        }
    }

    /// Parameter values as `f64`, in declaration order; errors on unknowns.
    pub fn fixed_f64(&self) -> Result<Vec<f64>> {
        self.params()
            .into_iter()
            .map(|(name, p)| {
                p.fixed()
                    .map(to_f64)
                    .ok_or_else(|| Error::InvalidParameter(format!("{} parameter `{name}` is not fixed", self.name())))
            })
            .collect()
    }
}

impl fmt::Display for FamilySpec {
    /// Command-line grammar form, e.g. `gaussian:mu=0,sigma2=1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}:{}", self.name(), params.join(","))
    }
}

/// Raw moments `m_1..m_M`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<T = Rational> {
    values: Vec<T>,
}

impl<T: Clone> MomentVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("moment vector"));
        }
        Ok(MomentVector { values })
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `m_k` for `k >= 1`.
    pub fn get(&self, k: usize) -> Option<&T> {
        k.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn truncated(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientMoments { needed: order, available: self.order() });
        }
        MomentVector::new(self.values[..order].to_vec())
    }
}

impl MomentVector<Rational> {
    /// `m_2 >= m_1^2`, vacuously true below order 2.
    pub fn variance_nonnegative(&self) -> bool {
        match (self.get(1), self.get(2)) {
            (Some(m1), Some(m2)) => m2 >= &(m1 * m1),
            _ => true,
        }
    }

    pub fn to_f64(&self) -> MomentVector<f64> {
        MomentVector { values: self.values.iter().map(to_f64).collect() }
    }
}

/// Affine reference frame `z = (x - location) / scale` for Gram–Charlier coefficients.
///
/// The squared scale is held exactly; the scale itself is exact when the
/// variance is a rational square and a 40-digit rational approximation otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Standardization {
    location: Rational,
    variance: Rational,
    scale: Rational,
}

impl Standardization {
    pub fn new(location: Rational, scale: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidParameter("standardization scale must be positive".into()));
        }
        Ok(Standardization { location, variance: &scale * &scale, scale })
    }

    pub fn from_variance(location: Rational, variance: Rational) -> Result<Self> {
        if !variance.is_positive() {
            return Err(Error::InvalidParameter("standardization variance must be positive".into()));
        }
        let scale = sqrt_rational(&variance, 40);
        Ok(Standardization { location, variance, scale })
    }

    /// The distribution's own mean and standard deviation.
    pub fn of_moments(moments: &MomentVector) -> Result<Self> {
        let m1 = moments.get(1).cloned().ok_or(Error::InsufficientMoments { needed: 2, available: 0 })?;
        let m2 = moments.get(2).ok_or(Error::InsufficientMoments { needed: 2, available: moments.order() })?;
        Self::from_variance(m1.clone(), m2 - &m1 * &m1)
    }

    pub fn identity() -> Self {
        Standardization { location: Rational::zero(), variance: Rational::one(), scale: Rational::one() }
    }

    pub fn location(&self) -> &Rational {
        &self.location
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn variance(&self) -> &Rational {
        &self.variance
    }
}

fn family_moment_polys(spec: &FamilySpec, order: usize, ring: &Arc<Ring>) -> Result<Vec<QPoly>> {
    spec.validate()?;
    let as_poly = |p: &Param| -> Result<QPoly> {
        match p {
            Param::Fixed(v) => Ok(QPoly::constant(ring, v.clone())),
            Param::Unknown(name) => ring
                .index_of(name)
                .map(|i| QPoly::variable(ring, i))
                .ok_or_else(|| Error::InvalidParameter(format!("unknown `{name}` is not in the ring"))),
        }
    };
    let constant = |v: Rational| QPoly::constant(ring, v);
    let mut out = Vec::with_capacity(order);
    match spec {
        FamilySpec::Gaussian { mu, sigma2 } => {
            let (mu, s2) = (as_poly(mu)?, as_poly(sigma2)?);
            for n in 1..=order {
                // E[(mu + sigma Z)^n] = sum_k C(n,k) mu^(n-k) sigma^k E[Z^k], E[Z^(2j)] = (2j-1)!!
                let mut acc = QPoly::zero(ring);
                let mut double_fact = BigInt::one();
                for k in (0..=n).step_by(2) {
                    if k >= 2 {
                        double_fact *= BigInt::from(k - 1);
                    }
                    let c = Rational::from_integer(binomial(n, k) * &double_fact);
                    let term = &(&mu.pow((n - k) as u32) * &s2.pow((k / 2) as u32)) * &constant(c);
                    acc = &acc + &term;
                }
                out.push(acc);
            }
        }
        FamilySpec::Gamma { shape, scale } => {
            let (k, s) = (as_poly(shape)?, as_poly(scale)?);
            let mut rising = QPoly::one(ring);
            for n in 1..=order {
                rising = &rising * &(&k + &constant(int(n as i64 - 1)));
                out.push(&rising * &s.pow(n as u32));
            }
        }
        FamilySpec::Exponential { theta } => {
            let t = as_poly(theta)?;
            for n in 1..=order {
                out.push(&t.pow(n as u32) * &constant(Rational::from_integer(factorial(n))));
            }
        }
        FamilySpec::Uniform { a, b } => {
            // (b^(n+1) - a^(n+1)) / ((n+1)(b-a)) = sum_k a^k b^(n-k) / (n+1)
            let (a, b) = (as_poly(a)?, as_poly(b)?);
            for n in 1..=order {
                let mut acc = QPoly::zero(ring);
                for k in 0..=n {
                    acc = &acc + &(&a.pow(k as u32) * &b.pow((n - k) as u32));
                }
                out.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(n + 1))));
            }
        }
        FamilySpec::StudentT { nu } => {
            let nu = nu.fixed().expect("validated: nu is fixed");
            if let Some(max) = spec.max_finite_order() {
                if order > max {
                    return Err(Error::MomentNotFinite { family: spec.to_string(), order: max + 1 });
                }
            }
            let mut even = Rational::one();
            for n in 1..=order {
                if n % 2 == 1 {
                    out.push(QPoly::zero(ring));
                } else {
                    // m_2k = nu^k prod_{i=1..k} (2i-1)/(nu-2i)
                    let i = (n / 2) as i64;
                    even = even * nu * int(2 * i - 1) / (nu - int(2 * i));
                    out.push(constant(even.clone()));
                }
            }
        }
        FamilySpec::Poisson { rate } => {
            // Touchard: m_n = sum_k S(n,k) rate^k, S(n,k) = k S(n-1,k) + S(n-1,k-1)
            let r = as_poly(rate)?;
            let mut stirling: Vec<BigInt> = vec![BigInt::one()];
            for n in 1..=order {
                let mut next = vec![BigInt::zero(); n + 1];
                for k in 1..=n {
                    let carry = if k < stirling.len() { &stirling[k] * BigInt::from(k) } else { BigInt::zero() };
                    next[k] = carry + &stirling[k - 1];
                }
                stirling = next;
                let mut acc = QPoly::zero(ring);
                for (k, s) in stirling.iter().enumerate().skip(1) {
                    acc = &acc + &r.pow(k as u32).scale(&Rational::from_integer(s.clone()));
                }
                out.push(acc);
            }
        }
    }
    Ok(out)
}

/// Exact raw moments of a fully specified family.
pub fn raw_moments(spec: &FamilySpec, order: usize) -> Result<MomentVector> {
    if order == 0 {
        return Err(Error::EmptyInput("moment order"));
    }
    if !spec.is_fixed() {
        return Err(Error::InvalidParameter(format!("{spec} has unknown parameters")));
    }
    let ring = Ring::new(Vec::<String>::new());
    let polys = family_moment_polys(spec, order, &ring)?;
    let one = crate::poly::Monomial::one(0);
    MomentVector::new(polys.iter().map(|p| p.coeff(&one)).collect())
}

/// Raw moments as polynomials in the family's unknowns (ring ordered as the unknowns appear).
pub fn symbolic_raw_moments(spec: &FamilySpec, order: usize) -> Result<Vec<QPoly>> {
    let ring = Ring::new(spec.unknowns());
    symbolic_raw_moments_in(spec, order, &ring)
}

/// Raw moments as polynomials in a caller-supplied ring that contains every unknown.
pub fn symbolic_raw_moments_in(spec: &FamilySpec, order: usize, ring: &Arc<Ring>) -> Result<Vec<QPoly>> {
    if order == 0 {
        return Err(Error::EmptyInput("moment order"));
    }
    family_moment_polys(spec, order, ring)
}

/// `m_k = (1/N) Σ x_i^k` for `k = 1..order`.
pub fn empirical_raw_moments<T>(sample: &[T], order: usize) -> Result<MomentVector<T>>
where
    T: Num + Clone + FromPrimitive,
{
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if order == 0 {
        return Err(Error::EmptyInput("moment order"));
    }
    let mut sums = vec![T::zero(); order];
    for x in sample {
        let mut p = T::one();
        for s in sums.iter_mut() {
            p = p * x.clone();
            *s = s.clone() + p.clone();
        }
    }
    let n = T::from_usize(sample.len()).expect("sample size representable");
    MomentVector::new(sums.into_iter().map(|s| s / n.clone()).collect())
}

/// Exact empirical moments of decimal data.
///
/// Accumulates integer numerators over a common denominator instead of
/// normalizing a rational per term.
pub fn empirical_raw_moments_exact(sample: &[Rational], order: usize) -> Result<MomentVector> {
    use num_integer::Integer;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if order == 0 {
        return Err(Error::EmptyInput("moment order"));
    }
    let common = sample.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = sample.iter().map(|x| x.numer() * (&common / x.denom())).collect();
    let mut sums = vec![BigInt::zero(); order];
    for v in &scaled {
        let mut p = BigInt::one();
        for s in sums.iter_mut() {
            p *= v;
            *s += &p;
        }
    }
    let n = BigInt::from(sample.len());
    let values = sums.into_iter().enumerate().map(|(k, s)| Rational::new(s, &n * common.pow(k as u32 + 1))).collect();
    MomentVector::new(values)
}

/// Gram–Charlier coefficients `c_n = E[He_n((X - a)/b)] / n!` for `n = 0..order`.
///
/// Expanded exactly as a linear combination of raw moments; `c_0 = 1`.
pub fn gram_charlier_coeffs(moments: &MomentVector, std: &Standardization, order: usize) -> Result<HermiteCoeffs> {
    if moments.order() < order {
        return Err(Error::InsufficientMoments { needed: order, available: moments.order() });
    }
    let a = &std.location;
    let v = &std.variance;
    let raw = |j: usize| -> Rational {
        if j == 0 {
            Rational::one()
        } else {
            moments.values[j - 1].clone()
        }
    };
    // central moments about the location: mu_k = sum_j C(k,j) m_j (-a)^(k-j)
    let neg_a = -a.clone();
    let central: Vec<Rational> = (0..=order)
        .map(|k| {
            (0..=k).fold(Rational::zero(), |acc, j| {
                acc + Rational::from_integer(binomial(k, j))
                    * raw(j)
                    * crate::scalar::pow_rational(&neg_a, (k - j) as i32)
            })
        })
        .collect();
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let h = hermite::he_monomial_coeffs(n)?;
        // E[He_n(z)] * b^n = sum_k h_k mu_k b^(n-k), and n-k is even
        let mut acc = Rational::zero();
        for (k, hk) in h.iter().enumerate() {
            if hk.is_zero() {
                continue;
            }
            acc += hk * &central[k] * crate::scalar::pow_rational(v, ((n - k) / 2) as i32);
        }
        let mut denom = crate::scalar::pow_rational(v, (n / 2) as i32);
        if n % 2 == 1 {
            denom *= &std.scale;
        }
        coeffs.push(acc / denom / Rational::from_integer(factorial(n)));
    }
    HermiteCoeffs::new(coeffs)
}

fn param_t<T: Real>(v: f64) -> T {
    T::lit(v)
}

/// CDF of a fully specified family.
pub fn family_cdf<T: Real>(spec: &FamilySpec, x: T) -> Result<T> {
    spec.validate()?;
    let p = spec.fixed_f64()?;
    let zero = T::zero();
    let one = T::one();
    Ok(match spec {
        FamilySpec::Gaussian { .. } => {
            let (mu, s2) = (param_t::<T>(p[0]), param_t::<T>(p[1]));
            special::normal_cdf((x - mu) / s2.sqrt())
        }
        FamilySpec::Gamma { .. } => {
            if x <= zero {
                zero
            } else {
                special::gamma_p(param_t(p[0]), x / param_t(p[1]))
            }
        }
        FamilySpec::Exponential { .. } => {
            if x <= zero {
                zero
            } else {
                -(-x / param_t(p[0])).exp_m1()
            }
        }
        FamilySpec::Uniform { .. } => {
            let (a, b) = (param_t::<T>(p[0]), param_t::<T>(p[1]));
            ((x - a) / (b - a)).max(zero).min(one)
        }
        FamilySpec::StudentT { .. } => special::student_t_cdf(x, param_t(p[0])),
        FamilySpec::Poisson { .. } => {
            if x < zero {
                zero
            } else {
                poisson_cdf(x.floor(), param_t(p[0]))
            }
        }
    })
}

/// Left limit `P(X < x)`; differs from [`family_cdf`] only at atoms.
pub fn family_cdf_left<T: Real>(spec: &FamilySpec, x: T) -> Result<T> {
    match spec {
        FamilySpec::Poisson { .. } if x.fract() == T::zero() => {
            if x <= T::zero() {
                spec.validate()?;
                Ok(T::zero())
            } else {
                family_cdf(spec, x - T::one())
            }
        }
        _ => family_cdf(spec, x),
    }
}

fn poisson_cdf<T: Real>(k: T, rate: T) -> T {
    // terms in log space so large rates do not underflow e^-rate
    let mut sum = T::zero();
    let mut j = T::zero();
    while j <= k {
        let ln_term = -rate + j * rate.ln() - special::ln_gamma(j + T::one());
        let term = ln_term.exp();
        sum = sum + term;
        if j > rate && term < sum * T::epsilon() {
            break;
        }
        j = j + T::one();
    }
    sum.min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn raw_moment_examples() {
        let g = FamilySpec::gaussian(int(0), int(1)).unwrap();
        assert_eq!(raw_moments(&g, 6).unwrap().values(), &ints(&[0, 1, 0, 3, 0, 15])[..]);
        let e = FamilySpec::exponential(int(1)).unwrap();
        assert_eq!(raw_moments(&e, 4).unwrap().values(), &ints(&[1, 2, 6, 24])[..]);
        let u = FamilySpec::uniform(int(0), int(1)).unwrap();
        assert_eq!(raw_moments(&u, 3).unwrap().values(), &[rat(1, 2), rat(1, 3), rat(1, 4)][..]);
    }

    #[test]
    fn other_families() {
        // gamma(2, 3): m_n = 3^n (2)(3)...(n+1)
        let g = FamilySpec::gamma(int(2), int(3)).unwrap();
        assert_eq!(raw_moments(&g, 3).unwrap().values(), &ints(&[6, 54, 648])[..]);
        // poisson(2): 2, 6, 22, 94
        let p = FamilySpec::poisson(int(2)).unwrap();
        assert_eq!(raw_moments(&p, 4).unwrap().values(), &ints(&[2, 6, 22, 94])[..]);
        // t(5): m2 = 5/3, m4 = 25 * 1*3 / (3*1) = 25
        let t = FamilySpec::student_t(int(5)).unwrap();
        assert_eq!(raw_moments(&t, 4).unwrap().values(), &[int(0), rat(5, 3), int(0), int(25)][..]);
        // N(1, 2): 1, 3, 7, 25
        let n = FamilySpec::gaussian(int(1), int(2)).unwrap();
        assert_eq!(raw_moments(&n, 4).unwrap().values(), &ints(&[1, 3, 7, 25])[..]);
    }

    #[test]
    fn student_t_moment_limits() {
        let t = FamilySpec::student_t(int(4)).unwrap();
        assert!(raw_moments(&t, 3).is_ok());
        assert!(matches!(raw_moments(&t, 4), Err(Error::MomentNotFinite { order: 4, .. })));
        let t = FamilySpec::student_t(rat(9, 2)).unwrap();
        assert_eq!(t.max_finite_order(), Some(4));
        assert!(matches!(raw_moments(&t, 5), Err(Error::MomentNotFinite { .. })));
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(FamilySpec::gaussian(int(0), int(0)), Err(Error::InvalidParameter(_))));
        assert!(matches!(FamilySpec::uniform(int(1), int(1)), Err(Error::InvalidParameter(_))));
        assert!(matches!(FamilySpec::exponential(int(-1)), Err(Error::InvalidParameter(_))));
        assert!(matches!(FamilySpec::student_t(Param::Unknown("n".into())), Err(Error::NonPolynomialParameter { .. })));
        assert!(FamilySpec::uniform(Param::Unknown("a".into()), int(1)).is_ok());
    }

    #[test]
    fn symbolic_examples() {
        let g = FamilySpec::gaussian(Param::Unknown("u".into()), int(1)).unwrap();
        let p = symbolic_raw_moments(&g, 3).unwrap();
        let shown: Vec<String> = p.iter().map(|q| q.to_string()).collect();
        assert_eq!(shown, vec!["u", "u^2 + 1", "u^3 + 3*u"]);
        let e = FamilySpec::exponential(Param::Unknown("t".into())).unwrap();
        let shown: Vec<String> = symbolic_raw_moments(&e, 2).unwrap().iter().map(|q| q.to_string()).collect();
        assert_eq!(shown, vec!["t", "2*t^2"]);
        let fixed = FamilySpec::gaussian(int(0), int(1)).unwrap();
        let shown: Vec<String> = symbolic_raw_moments(&fixed, 2).unwrap().iter().map(|q| q.to_string()).collect();
        assert_eq!(shown, vec!["0", "1"]);
    }

    #[test]
    fn empirical_examples() {
        let m = empirical_raw_moments(&ints(&[1, 2, 3]), 2).unwrap();
        assert_eq!(m.values(), &[int(2), rat(14, 3)][..]);
        let m = empirical_raw_moments(&ints(&[5]), 3).unwrap();
        assert_eq!(m.values(), &ints(&[5, 25, 125])[..]);
        let m = empirical_raw_moments(&ints(&[-1, 1]), 4).unwrap();
        assert_eq!(m.values(), &ints(&[0, 1, 0, 1])[..]);
        assert_eq!(empirical_raw_moments::<f64>(&[], 2), Err(Error::EmptySample));
        let m = empirical_raw_moments(&[1.0f64, 2.0, 3.0], 2).unwrap();
        assert!((m.values()[1] - 14.0 / 3.0).abs() < 1e-15);
        let exact = empirical_raw_moments_exact(&[rat(1, 10), rat(1, 4), int(-3)], 3).unwrap();
        let generic = empirical_raw_moments(&[rat(1, 10), rat(1, 4), int(-3)], 3).unwrap();
        assert_eq!(exact, generic);
        assert_eq!(empirical_raw_moments_exact(&[], 1), Err(Error::EmptySample));
    }

    #[test]
    fn gram_charlier_examples() {
        let g = raw_moments(&FamilySpec::gaussian(int(0), int(1)).unwrap(), 4).unwrap();
        let c = gram_charlier_coeffs(&g, &Standardization::identity(), 4).unwrap();
        assert_eq!(c.coeffs(), &ints(&[1, 0, 0, 0, 0])[..]);

        let e = raw_moments(&FamilySpec::exponential(int(1)).unwrap(), 4).unwrap();
        let std = Standardization::new(int(1), int(1)).unwrap();
        let c = gram_charlier_coeffs(&e, &std, 4).unwrap();
        assert_eq!(c.coeffs(), &[int(1), int(0), int(0), rat(1, 3), rat(1, 4)][..]);

        assert!(matches!(
            gram_charlier_coeffs(&e, &std, 5),
            Err(Error::InsufficientMoments { needed: 5, available: 4 })
        ));
    }

    #[test]
    fn own_standardization_zeroes_first_two() {
        let u = raw_moments(&FamilySpec::uniform(int(0), int(1)).unwrap(), 4).unwrap();
        let std = Standardization::of_moments(&u).unwrap();
        let c = gram_charlier_coeffs(&u, &std, 4).unwrap();
        assert_eq!(c.coeffs()[0], int(1));
        assert!(c.coeffs()[1].is_zero());
        assert!(c.coeffs()[2].is_zero());
        // uniform excess kurtosis -6/5 gives c4 = -1/20
        assert_eq!(c.coeffs()[4], rat(-1, 20));
    }

    #[test]
    fn cdf_examples() {
        let g = FamilySpec::gaussian(int(0), int(1)).unwrap();
        assert!((family_cdf(&g, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let u = FamilySpec::uniform(int(0), int(2)).unwrap();
        assert!((family_cdf(&u, 0.5).unwrap() - 0.25).abs() < 1e-15);
        let e = FamilySpec::exponential(int(1)).unwrap();
        assert!((family_cdf(&e, 1.0).unwrap() - 0.632_120_558_828_557_7).abs() < 1e-12);
        let p = FamilySpec::poisson(int(2)).unwrap();
        // P(X <= 1) = 3 e^-2
        assert!((family_cdf(&p, 1.5).unwrap() - 3.0 * (-2.0f64).exp()).abs() < 1e-14);
        assert!((family_cdf_left(&p, 1.0).unwrap() - (-2.0f64).exp()).abs() < 1e-14);
        assert_eq!(family_cdf_left(&p, 0.0).unwrap(), 0.0);
        let unknown = FamilySpec::exponential(Param::Unknown("t".into())).unwrap();
        assert!(family_cdf(&unknown, 1.0).is_err());
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&rat(3, 10)), "0.3");
        assert_eq!(format_rational(&rat(-1, 4)), "-0.25");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_rational(&rat(1, 3)), "1/3");
        assert_eq!(format_rational(&rat(21, 20)), "1.05");
        let g = FamilySpec::gaussian(Param::Unknown("u".into()), int(1)).unwrap();
        assert_eq!(g.to_string(), "gaussian:mu=?u,sigma2=1");
    }
}

//! Probabilists' Hermite polynomials `He_n`.
//!
//! `He_0 = 1`, `He_1 = x`, `He_{n+1}(x) = x He_n(x) - n He_{n-1}(x)`; orthogonal
//! under the standard normal weight with `<He_m, He_n> = n! δ_mn`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Real};

/// Highest Hermite order accepted at the API boundary.
pub const MAX_ORDER: usize = 32;

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: n, max: MAX_ORDER });
    }
    Ok(())
}

/// Coordinates of a polynomial in the Hermite basis: `Σ c_n He_n(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteCoeffs {
    coeffs: Vec<BigRational>,
}

impl HermiteCoeffs {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput("Hermite coefficient list"));
        }
        check_order(coeffs.len() - 1)?;
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.coeffs.get(n)
    }

    /// Expands back into monomial coefficients `a_0..a_d`.
    pub fn to_monomial(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, a) in hermite_table(n).into_iter().enumerate() {
                out[k] += c * a;
            }
        }
        out
    }

    /// Evaluates `Σ c_n He_n(x)` in floating point.
    pub fn eval<T: Real>(&self, x: T) -> T {
        let values = he_values(self.degree(), x);
        self.coeffs.iter().zip(values).fold(T::zero(), |acc, (c, h)| acc + T::lit(crate::scalar::to_f64(c)) * h)
    }
}

/// `He_0(x)..He_n(x)` by the three-term recurrence.
fn he_values<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n {
        let next = x * out[k] - T::from_count(k) * out[k - 1];
        out.push(next);
    }
    out
}

/// Evaluates `He_n(x)`.
pub fn he_eval<T: Real>(n: usize, x: T) -> Result<T> {
    check_order(n)?;
    let (mut prev, mut cur) = (T::one(), x);
    if n == 0 {
        return Ok(prev);
    }
    for k in 1..n {
        let next = x * cur - T::from_count(k) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn hermite_table(n: usize) -> Vec<BigRational> {
    let mut prev = vec![BigRational::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigRational::zero(), BigRational::one()];
    for k in 1..n {
        // x*cur - k*prev
        let mut next = vec![BigRational::zero(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        let kq = int(k as i64);
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &kq * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients `a_0..a_n` of `He_n`, computed exactly.
pub fn he_monomial_coeffs(n: usize) -> Result<Vec<BigRational>> {
    check_order(n)?;
    Ok(hermite_table(n))
}

/// Rewrites a monomial-basis polynomial `Σ a_k x^k` in the Hermite basis.
pub fn monomial_to_hermite(poly: &[BigRational]) -> Result<HermiteCoeffs> {
    if poly.is_empty() {
        return Err(Error::EmptyInput("polynomial coefficient list"));
    }
    check_order(poly.len() - 1)?;
    let mut rest = poly.to_vec();
    let mut coeffs = vec![BigRational::zero(); poly.len()];
    // He_d is monic, so peel off leading terms from the top down
    for d in (0..poly.len()).rev() {
        let lead = rest[d].clone();
        if lead.is_zero() {
            continue;
        }
        for (k, a) in hermite_table(d).into_iter().enumerate() {
            rest[k] -= &lead * a;
        }
        coeffs[d] = lead;
    }
    HermiteCoeffs::new(coeffs)
}

/// Gauss–Hermite nodes and weights for the standard normal density.
///
/// Nodes are found by Newton iteration on the orthonormal Hermite recurrence;
/// weights sum to one, so `Σ w_i f(x_i) ≈ E[f(Z)]` for `Z ~ N(0, 1)`.
pub fn gauss_hermite_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-0.166_67),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (PIM4, 0.0f64);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let nodes = x.iter().map(|v| v * std::f64::consts::SQRT_2).collect();
    let weights = w.iter().map(|v| v / sqrt_pi).collect();
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(he_eval(0, 7.3).unwrap(), 1.0);
        assert_eq!(he_eval(2, 1.0).unwrap(), 0.0);
        assert_eq!(he_eval(3, 2.0).unwrap(), 2.0);
        assert_eq!(he_eval(3, 2.0f32).unwrap(), 2.0f32);
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(he_monomial_coeffs(0).unwrap(), ints(&[1]));
        assert_eq!(he_monomial_coeffs(3).unwrap(), ints(&[0, -3, 0, 1]));
        assert_eq!(he_monomial_coeffs(4).unwrap(), ints(&[3, 0, -6, 0, 1]));
    }

    #[test]
    fn basis_change_examples() {
        assert_eq!(monomial_to_hermite(&ints(&[0, 1])).unwrap().coeffs(), &ints(&[0, 1])[..]);
        assert_eq!(monomial_to_hermite(&ints(&[0, 0, 1])).unwrap().coeffs(), &ints(&[1, 0, 1])[..]);
        assert_eq!(monomial_to_hermite(&ints(&[1])).unwrap().coeffs(), &ints(&[1])[..]);
        let c = monomial_to_hermite(&[rat(1, 2), int(0), int(0), rat(-2, 3)]).unwrap();
        assert_eq!(c.to_monomial(), vec![rat(1, 2), int(0), int(0), rat(-2, 3)]);
    }

    #[test]
    fn order_cap_enforced() {
        assert!(he_eval(32, 0.5).is_ok());
        assert_eq!(he_eval(33, 0.5), Err(Error::OrderTooLarge { order: 33, max: 32 }));
        assert!(he_monomial_coeffs(33).is_err());
        assert!(monomial_to_hermite(&vec![int(1); 34]).is_err());
        assert!(monomial_to_hermite(&[]).is_err());
    }

    #[test]
    fn series_eval_matches_monomial_eval() {
        let c = HermiteCoeffs::new(vec![int(1), rat(1, 2), int(0), rat(1, 3)]).unwrap();
        let x = 0.7f64;
        let mono: f64 =
            c.to_monomial().iter().enumerate().map(|(k, a)| crate::scalar::to_f64(a) * x.powi(k as i32)).sum();
        assert!((c.eval(x) - mono).abs() < 1e-14);
    }

    #[test]
    fn quadrature_rule_integrates_normal_moments() {
        let (x, w) = gauss_hermite_rule(64);
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m4 - 3.0).abs() < 1e-12);
    }
}

//! Numeric points of a zero-dimensional variety.
//!
//! For f in the ring, the multiplication map on the quotient ring has the
//! values f(p) as eigenvalues, and the evaluation functional at p, written in
//! the standard-monomial basis, is a common left eigenvector of every
//! multiplication matrix. A generic linear form separates the points, so one
//! decomposition of its transposed matrix yields all coordinates.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{eig, EigenPair, Matrix};
use crate::poly::{normal_form, quotient_basis, GroebnerBasis, Monomial, MultiPoly, QuotientBasis};
use crate::rng::Pcg32;
use crate::scalar::to_f64;
use crate::QPoly;

/// Default realness tolerance, relative above magnitude 1 and absolute below.
pub const DEFAULT_REAL_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (relative above magnitude 1) form one cluster.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Separating forms tried before giving up.
pub const MAX_ATTEMPTS: usize = 6;

/// Matrix of multiplication by `multiplier` on the quotient basis.
///
/// Column j holds the normal-form coordinates of `multiplier · β_j`.
#[derive(Clone, Debug)]
pub struct MultiplicationMatrix {
    multiplier: QPoly,
    basis: QuotientBasis,
    entries: Matrix<f64>,
}

impl MultiplicationMatrix {
    pub fn multiplier(&self) -> &QPoly {
        &self.multiplier
    }

    pub fn basis(&self) -> &QuotientBasis {
        &self.basis
    }

    pub fn entries(&self) -> &Matrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarietyPoint {
    /// One coordinate per ring variable.
    pub coordinates: Vec<Complex64>,
    /// Max over the generators of `|g(point)|`.
    pub residual: f64,
    pub is_real: bool,
    /// Size of the eigenvalue cluster the point was read from.
    pub multiplicity: usize,
}

/// Multiplication-by-x matrix of a monic univariate polynomial on `{1, x, ..., x^(d-1)}`.
pub fn companion_matrix(p: &QPoly) -> Result<Matrix<f64>> {
    let support = p.support();
    if support.len() != 1 {
        return Err(Error::NotUnivariate);
    }
    let v = support[0];
    let degree = p.total_degree() as usize;
    let lead = p.coeff(&Monomial::new(pure(p.ring().nvars(), v, degree as u32)));
    if !lead.is_one() {
        return Err(Error::NotMonic);
    }
    let mut m = Matrix::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = 1.0;
    }
    for (mono, c) in p.terms() {
        let k = mono.exponents()[v] as usize;
        if k < degree {
            m[(k, degree - 1)] = -to_f64(c);
        }
    }
    Ok(m)
}

fn pure(nvars: usize, v: usize, e: u32) -> Vec<u32> {
    let mut out = vec![0; nvars];
    out[v] = e;
    out
}

fn coordinates(f: &QPoly, basis: &GroebnerBasis<BigRational>, beta: &QuotientBasis) -> Result<Vec<BigRational>> {
    let nf = normal_form(f, basis)?;
    let mut out = vec![BigRational::zero(); beta.len()];
    for (m, c) in nf.terms() {
        let i = beta.index_of(m).ok_or(Error::BasisMismatch)?;
        out[i] = c.clone();
    }
    Ok(out)
}

/// Exact multiplication matrix, converted to `f64` entrywise at the end.
pub fn multiplication_matrix(
    f: &QPoly,
    basis: &GroebnerBasis<BigRational>,
    beta: &QuotientBasis,
) -> Result<MultiplicationMatrix> {
    if f.ring() != basis.ring() {
        return Err(Error::RingMismatch);
    }
    if quotient_basis(basis)? != *beta {
        return Err(Error::BasisMismatch);
    }
    let ring = basis.ring();
    let n = beta.len();
    let mut entries = Matrix::zeros(n, n);
    for (j, mono) in beta.monomials().iter().enumerate() {
        let product = f.mul_term(mono, &BigRational::one());
        for (i, c) in coordinates(&product, basis, beta)?.iter().enumerate() {
            entries[(i, j)] = to_f64(c);
        }
    }
    debug_assert!(ring.nvars() == f.ring().nvars());
    Ok(MultiplicationMatrix { multiplier: f.clone(), basis: beta.clone(), entries })
}

/// Max of `|g(point)|` over `polys`.
pub fn residual(polys: &[QPoly], point: &[Complex64]) -> f64 {
    polys.iter().map(|g| g.eval_with(point, |c| Complex64::new(to_f64(c), 0.0)).norm()).fold(0.0, f64::max)
}

fn random_form(basis: &GroebnerBasis<BigRational>, rng: &mut Pcg32) -> QPoly {
    let ring = basis.ring();
    let mut f = MultiPoly::zero(ring);
    for v in 0..ring.nvars() {
        let numer = 1 + rng.below(97) as i64;
        let sign = if rng.below(2) == 0 { 1 } else { -1 };
        let r = BigRational::new((sign * numer).into(), 32.into());
        f = &f + &MultiPoly::monomial(ring, Monomial::var(ring.nvars(), v), r);
    }
    f
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

struct Readout {
    coords: Vec<Complex64>,
    // ‖M_xᵀ v − x v‖ / ‖v‖, max over variables, with v scaled so v[one] = 1
    consistency: f64,
}

fn read_point(pair: &EigenPair<f64>, one: usize, var_mats: &[Matrix<f64>]) -> Option<Readout> {
    let v = &pair.vector;
    let pivot = v[one];
    if pivot.norm() < 1e-8 {
        return None;
    }
    let v: Vec<Complex64> = v.iter().map(|z| z / pivot).collect();
    let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut coords = Vec::with_capacity(var_mats.len());
    let mut consistency: f64 = 0.0;
    for mt in var_mats {
        let w = mt.apply(&v);
        let x = w[one];
        let gap = w.iter().zip(&v).map(|(a, b)| (a - b * x).norm_sqr()).sum::<f64>().sqrt();
        consistency = consistency.max(gap / (vnorm * mt.norm().max(1.0)));
        coords.push(x);
    }
    Some(Readout { coords, consistency })
}

fn try_form(
    f: &QPoly,
    basis: &GroebnerBasis<BigRational>,
    beta: &QuotientBasis,
    var_mats: &[Matrix<f64>],
    real_tol: f64,
) -> Result<Option<Vec<VarietyPoint>>> {
    let one = beta.index_of(&Monomial::one(basis.ring().nvars())).ok_or(Error::BasisMismatch)?;
    let mf = multiplication_matrix(f, basis, beta)?;
    let pairs = eig(&mf.entries.transpose())?;
    let mut assigned = vec![false; pairs.len()];
    let mut points = Vec::new();
    for i in 0..pairs.len() {
        if assigned[i] {
            continue;
        }
        let cluster: Vec<usize> =
            (i..pairs.len()).filter(|&j| !assigned[j] && close(pairs[i].value, pairs[j].value, CLUSTER_TOL)).collect();
        for &j in &cluster {
            assigned[j] = true;
        }
        let readouts: Vec<Readout> = cluster.iter().filter_map(|&j| read_point(&pairs[j], one, var_mats)).collect();
        let Some(first) = readouts.first() else {
            return Ok(None);
        };
        let agree =
            readouts.iter().all(|r| r.coords.iter().zip(&first.coords).all(|(a, b)| close(*a, *b, CLUSTER_TOL)));
        let best = readouts.iter().min_by(|a, b| a.consistency.total_cmp(&b.consistency)).unwrap();
        if !agree || best.consistency > 1e-6 {
            return Ok(None);
        }
        let coords = best.coords.clone();
        points.push(VarietyPoint {
            residual: residual(basis.elements(), &coords),
            is_real: is_real(&coords, real_tol),
            coordinates: coords,
            multiplicity: cluster.len(),
        });
    }
    sort_points(&mut points);
    Ok(Some(points))
}

fn is_real(coords: &[Complex64], tol: f64) -> bool {
    coords.iter().all(|z| z.im.abs() <= tol * z.norm().max(1.0))
}

/// Orders points by real parts, then imaginary parts, coordinate by coordinate.
pub fn sort_points(points: &mut [VarietyPoint]) {
    points.sort_by(|a, b| {
        for (x, y) in a.coordinates.iter().zip(&b.coordinates) {
            let o = x.re.total_cmp(&y.re);
            if o.is_ne() {
                return o;
            }
        }
        for (x, y) in a.coordinates.iter().zip(&b.coordinates) {
            let o = x.im.total_cmp(&y.im);
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// All complex points of the variety of `basis`, with multiplicities.
///
/// The separating form has small random rational coefficients drawn from
/// `seed`; a form that leaves two points on one eigenvalue is replaced by a
/// fresh draw, at most [`MAX_ATTEMPTS`] times in total.
pub fn solve_variety(basis: &GroebnerBasis<BigRational>, beta: &QuotientBasis, seed: u64) -> Result<Vec<VarietyPoint>> {
    if quotient_basis(basis)? != *beta {
        return Err(Error::BasisMismatch);
    }
    if beta.is_empty() {
        return Ok(Vec::new());
    }
    let ring = basis.ring();
    let var_mats: Vec<Matrix<f64>> = (0..ring.nvars())
        .map(|v| multiplication_matrix(&MultiPoly::variable(ring, v), basis, beta).map(|m| m.entries.transpose()))
        .collect::<Result<_>>()?;
    let mut rng = Pcg32::seed(seed);
    for _ in 0..MAX_ATTEMPTS {
        let f = random_form(basis, &mut rng);
        if let Some(points) = try_form(&f, basis, beta, &var_mats, DEFAULT_REAL_TOL)? {
            return Ok(points);
        }
    }
    Err(Error::SeparationFailure { attempts: MAX_ATTEMPTS })
}

/// Keeps points whose coordinates all satisfy `|Im z| ≤ tol · max(1, |z|)`,
/// zeroes their imaginary parts and recomputes residuals against `polys`.
pub fn filter_real(points: &[VarietyPoint], tol: f64, polys: &[QPoly]) -> Vec<VarietyPoint> {
    points
        .iter()
        .filter(|p| is_real(&p.coordinates, tol))
        .map(|p| {
            let coords: Vec<Complex64> = p.coordinates.iter().map(|z| Complex64::new(z.re, 0.0)).collect();
            VarietyPoint {
                residual: residual(polys, &coords),
                is_real: true,
                coordinates: coords,
                multiplicity: p.multiplicity,
            }
        })
        .collect()
}

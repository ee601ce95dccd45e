//! Dense real matrices and a nonsymmetric eigensolver.
//!
//! Eigenvalues: radix-2 balancing, reduction to upper Hessenberg form by
//! stabilized elementary similarities, then Francis double-shift QR with
//! exceptional shifts. Eigenvectors: complex inverse iteration on the
//! original matrix, re-orthogonalized inside clusters of equal eigenvalues so
//! that a multi-dimensional eigenspace yields independent vectors.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Complex matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (a, x)| acc + *x * *a))
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}

/// Eigenvalue with a unit-norm right eigenvector.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair<T> {
    pub value: Complex<T>,
    pub vector: Vec<Complex<T>>,
}

// 1-based square scratch matrix, matching the indexing of the classic QR routines
struct Work<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Real> Work<T> {
    fn from(m: &Matrix<T>) -> Self {
        let n = m.rows;
        let mut a = vec![T::zero(); (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                a[(i + 1) * (n + 1) + j + 1] = m[(i, j)];
            }
        }
        Work { n, a }
    }

    #[inline]
    fn g(&self, i: usize, j: usize) -> T {
        self.a[i * (self.n + 1) + j]
    }

    #[inline]
    fn s(&mut self, i: usize, j: usize, v: T) {
        let n = self.n;
        self.a[i * (n + 1) + j] = v;
    }

    fn swap(&mut self, (i1, j1): (usize, usize), (i2, j2): (usize, usize)) {
        let n = self.n;
        self.a.swap(i1 * (n + 1) + j1, i2 * (n + 1) + j2);
    }

    fn balance(&mut self) {
        let radix = T::lit(2.0);
        let sqrdx = radix * radix;
        let n = self.n;
        let mut done = false;
        while !done {
            done = true;
            for i in 1..=n {
                let (mut c, mut r) = (T::zero(), T::zero());
                for j in 1..=n {
                    if j != i {
                        c = c + self.g(j, i).abs();
                        r = r + self.g(i, j).abs();
                    }
                }
                if c != T::zero() && r != T::zero() {
                    let mut g = r / radix;
                    let mut f = T::one();
                    let s = c + r;
                    while c < g {
                        f = f * radix;
                        c = c * sqrdx;
                    }
                    g = r * radix;
                    while c > g {
                        f = f / radix;
                        c = c / sqrdx;
                    }
                    if (c + r) / f < T::lit(0.95) * s {
                        done = false;
                        let g = T::one() / f;
                        for j in 1..=n {
                            self.s(i, j, self.g(i, j) * g);
                        }
                        for j in 1..=n {
                            self.s(j, i, self.g(j, i) * f);
                        }
                    }
                }
            }
        }
    }

    fn hessenberg(&mut self) {
        let n = self.n;
        for m in 2..n {
            let mut x = T::zero();
            let mut i = m;
            for j in m..=n {
                if self.g(j, m - 1).abs() > x.abs() {
                    x = self.g(j, m - 1);
                    i = j;
                }
            }
            if i != m {
                for j in (m - 1)..=n {
                    self.swap((i, j), (m, j));
                }
                for j in 1..=n {
                    self.swap((j, i), (j, m));
                }
            }
            if x != T::zero() {
                for i in (m + 1)..=n {
                    let mut y = self.g(i, m - 1);
                    if y != T::zero() {
                        y = y / x;
                        self.s(i, m - 1, y);
                        for j in m..=n {
                            self.s(i, j, self.g(i, j) - y * self.g(m, j));
                        }
                        for j in 1..=n {
                            self.s(j, m, self.g(j, m) + y * self.g(j, i));
                        }
                    }
                }
            }
        }
        for i in 1..=n {
            for j in 1..i.saturating_sub(1) {
                self.s(i, j, T::zero());
            }
        }
    }

    /// Francis double-shift QR on an upper Hessenberg matrix.
    fn hqr(&mut self, max_its: usize) -> Result<Vec<Complex<T>>> {
        let n = self.n;
        let mut wr = vec![T::zero(); n + 1];
        let mut wi = vec![T::zero(); n + 1];
        let eps = T::epsilon();
        let mut anorm = T::zero();
        for i in 1..=n {
            for j in i.saturating_sub(1).max(1)..=n {
                anorm = anorm + self.g(i, j).abs();
            }
        }
        let mut nn = n;
        let mut t = T::zero();
        let mut total = 0usize;
        let half = T::lit(0.5);
        while nn >= 1 {
            let mut its = 0usize;
            loop {
                let mut l = nn;
                while l >= 2 {
                    let mut s = self.g(l - 1, l - 1).abs() + self.g(l, l).abs();
                    if s == T::zero() {
                        s = anorm;
                    }
                    if self.g(l, l - 1).abs() <= eps * s {
                        self.s(l, l - 1, T::zero());
                        break;
                    }
                    l -= 1;
                }
                let mut x = self.g(nn, nn);
                if l == nn {
                    wr[nn] = x + t;
                    wi[nn] = T::zero();
                    nn -= 1;
                    break;
                }
                let mut y = self.g(nn - 1, nn - 1);
                let mut w = self.g(nn, nn - 1) * self.g(nn - 1, nn);
                if l == nn - 1 {
                    let p = half * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x = x + t;
                    if q >= T::zero() {
                        z = p + if p >= T::zero() { z } else { -z };
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != T::zero() {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = T::zero();
                        wi[nn] = T::zero();
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                    break;
                }
                if its == max_its {
                    return Err(Error::NoConvergence { iterations: total });
                }
                if its == 10 || its == 20 {
                    t = t + x;
                    for i in 1..=nn {
                        self.s(i, i, self.g(i, i) - x);
                    }
                    let s = self.g(nn, nn - 1).abs() + self.g(nn - 1, nn - 2).abs();
                    x = T::lit(0.75) * s;
                    y = x;
                    w = T::lit(-0.4375) * s * s;
                }
                its += 1;
                total += 1;
                let (mut p, mut q, mut r);
                let mut z;
                let mut m = nn - 2;
                loop {
                    z = self.g(m, m);
                    let rr = x - z;
                    let ss = y - z;
                    p = (rr * ss - w) / self.g(m + 1, m) + self.g(m, m + 1);
                    q = self.g(m + 1, m + 1) - z - rr - ss;
                    r = self.g(m + 2, m + 1);
                    let s = p.abs() + q.abs() + r.abs();
                    p = p / s;
                    q = q / s;
                    r = r / s;
                    if m == l {
                        break;
                    }
                    let u = self.g(m, m - 1).abs() * (q.abs() + r.abs());
                    let v = p.abs() * (self.g(m - 1, m - 1).abs() + z.abs() + self.g(m + 1, m + 1).abs());
                    if u <= eps * v {
                        break;
                    }
                    m -= 1;
                }
                for i in (m + 2)..=nn {
                    self.s(i, i - 2, T::zero());
                    if i != m + 2 {
                        self.s(i, i - 3, T::zero());
                    }
                }
                let mut k = m;
                while k < nn {
                    if k != m {
                        p = self.g(k, k - 1);
                        q = self.g(k + 1, k - 1);
                        r = if k != nn - 1 { self.g(k + 2, k - 1) } else { T::zero() };
                        x = p.abs() + q.abs() + r.abs();
                        if x != T::zero() {
                            p = p / x;
                            q = q / x;
                            r = r / x;
                        }
                    }
                    let norm = (p * p + q * q + r * r).sqrt();
                    let s = if p >= T::zero() { norm } else { -norm };
                    if s != T::zero() {
                        if k == m {
                            if l != m {
                                self.s(k, k - 1, -self.g(k, k - 1));
                            }
                        } else {
                            self.s(k, k - 1, -s * x);
                        }
                        p = p + s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q = q / p;
                        r = r / p;
                        for j in k..=nn {
                            let mut pp = self.g(k, j) + q * self.g(k + 1, j);
                            if k != nn - 1 {
                                pp = pp + r * self.g(k + 2, j);
                                self.s(k + 2, j, self.g(k + 2, j) - pp * z);
                            }
                            self.s(k + 1, j, self.g(k + 1, j) - pp * y);
                            self.s(k, j, self.g(k, j) - pp * x);
                        }
                        let mmin = nn.min(k + 3);
                        for i in l..=mmin {
                            let mut pp = x * self.g(i, k) + y * self.g(i, k + 1);
                            if k != nn - 1 {
                                pp = pp + z * self.g(i, k + 2);
                                self.s(i, k + 2, self.g(i, k + 2) - pp * r);
                            }
                            self.s(i, k + 1, self.g(i, k + 1) - pp * q);
                            self.s(i, k, self.g(i, k) - pp);
                        }
                    }
                    k += 1;
                }
                if l >= nn - 1 {
                    break;
                }
            }
        }
        Ok((1..=n).map(|i| Complex::new(wr[i], wi[i])).collect())
    }
}

/// Iteration cap per eigenvalue in the QR sweep.
pub const MAX_QR_ITERATIONS: usize = 60;

/// All eigenvalues of a square real matrix.
pub fn eigenvalues<T: Real>(a: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    if !a.is_finite() {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    if a.rows == 0 {
        return Ok(Vec::new());
    }
    let mut w = Work::from(a);
    w.balance();
    w.hessenberg();
    let mut values = w.hqr(MAX_QR_ITERATIONS)?;
    values.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(values)
}

fn cnorm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

fn normalize<T: Real>(v: &mut [Complex<T>]) {
    let n = cnorm(v);
    if n > T::zero() {
        for z in v.iter_mut() {
            *z = *z / n;
        }
    }
}

// Solves (A - shift I) x = b by LU with partial pivoting; zero pivots are nudged.
fn shifted_solve<T: Real>(a: &Matrix<T>, shift: Complex<T>, b: &[Complex<T>], tiny: T) -> Vec<Complex<T>> {
    let n = a.rows;
    let mut m: Vec<Complex<T>> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut z = Complex::new(a[(i, j)], T::zero());
            if i == j {
                z = z - shift;
            }
            m.push(z);
        }
    }
    let mut x: Vec<Complex<T>> = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i * n + k].norm().partial_cmp(&m[j * n + k].norm()).unwrap()).unwrap();
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        if m[k * n + k].norm() < tiny {
            m[k * n + k] = Complex::new(tiny, T::zero());
        }
        let pivot = m[k * n + k];
        for i in (k + 1)..n {
            let f = m[i * n + k] / pivot;
            if f.norm() == T::zero() {
                continue;
            }
            for j in k..n {
                let v = m[k * n + j];
                m[i * n + j] = m[i * n + j] - f * v;
            }
            let xv = x[k];
            x[i] = x[i] - f * xv;
        }
    }
    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in (k + 1)..n {
            acc = acc - m[k * n + j] * x[j];
        }
        x[k] = acc / m[k * n + k];
    }
    x
}

/// Relative residual `‖Av − λv‖ / (‖A‖ ‖v‖)`.
pub fn eigen_residual<T: Real>(a: &Matrix<T>, value: Complex<T>, vector: &[Complex<T>]) -> T {
    let av = a.apply(vector);
    let r: Vec<Complex<T>> = av.iter().zip(vector).map(|(x, v)| *x - *v * value).collect();
    let scale = a.norm().max(T::min_positive_value()) * cnorm(vector).max(T::min_positive_value());
    cnorm(&r) / scale
}

fn inverse_iteration<T: Real>(
    a: &Matrix<T>,
    value: Complex<T>,
    start: &[Complex<T>],
    against: &[Vec<Complex<T>>],
) -> Vec<Complex<T>> {
    let anorm = a.norm().max(T::one());
    let eps = T::epsilon();
    let tiny = eps * anorm;
    // shift slightly off the eigenvalue so the factorization stays usable
    let delta = T::lit(1e3) * eps * anorm;
    // real eigenvalues keep a real shift, so their vectors stay exactly real
    let tilt = if value.im == T::zero() { T::zero() } else { delta * T::lit(0.5) };
    let shift = value + Complex::new(delta, tilt);
    // repeated solves can degrade near defective eigenvalues, so keep the best iterate
    let mut v = start.to_vec();
    let mut best = (T::infinity(), v.clone());
    for _ in 0..4 {
        v = shifted_solve(a, shift, &v, tiny);
        for u in against {
            let dot = u.iter().zip(&v).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * *y);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi = *vi - *ui * dot;
            }
        }
        normalize(&mut v);
        let r = eigen_residual(a, value, &v);
        if r < best.0 {
            best = (r, v.clone());
        }
    }
    best.1
}

fn start_vector<T: Real>(n: usize, salt: usize, real: bool) -> Vec<Complex<T>> {
    let mut v: Vec<Complex<T>> = (0..n)
        .map(|i| {
            let t = T::from_count((i * 7 + salt * 13) % 17 + 1) / T::lit(17.0);
            Complex::new(T::one() + t, if real { T::zero() } else { t * T::lit(0.5) })
        })
        .collect();
    normalize(&mut v);
    v
}

/// Eigenvalues and unit right eigenvectors of a square real matrix.
///
/// Eigenvalues whose distance is below `1e-6 · max(1, |λ|)` are treated as a
/// cluster; eigenvectors inside a cluster are orthogonalized against each
/// other whenever the eigenspace allows it.
pub fn eig<T: Real>(a: &Matrix<T>) -> Result<Vec<EigenPair<T>>> {
    let values = eigenvalues(a)?;
    let n = a.rows;
    let cluster_tol = T::lit(1e-6);
    let accept = T::lit(1e-10);
    let mut out: Vec<EigenPair<T>> = Vec::with_capacity(n);
    for (k, &value) in values.iter().enumerate() {
        let same: Vec<Vec<Complex<T>>> = out
            .iter()
            .filter(|p| (p.value - value).norm() <= cluster_tol * value.norm().max(T::one()))
            .map(|p| p.vector.clone())
            .collect();
        let start = start_vector::<T>(n, k, value.im == T::zero());
        let plain = inverse_iteration(a, value, &start, &[]);
        let vector = if same.is_empty() {
            plain
        } else {
            let orth = inverse_iteration(a, value, &start, &same);
            if eigen_residual(a, value, &orth) <= accept {
                orth
            } else {
                plain
            }
        };
        out.push(EigenPair { value, vector });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn reals(v: &[Complex<f64>]) -> Vec<f64> {
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn examples() {
        let i2 = Matrix::<f64>::identity(2);
        let ev = eigenvalues(&i2).unwrap();
        assert_eq!(reals(&ev), vec![1.0, 1.0]);

        let ev = eigenvalues(&m(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((ev[0].re + 1.0).abs() < 1e-14 && (ev[1].re - 1.0).abs() < 1e-14);

        let ev = eigenvalues(&m(&[&[0.0, 2.0], &[1.0, 0.0]])).unwrap();
        let r2 = 2f64.sqrt();
        assert!((ev[0].re + r2).abs() < 1e-14 && (ev[1].re - r2).abs() < 1e-14);
        assert!(ev.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn complex_pair() {
        let ev = eigenvalues(&m(&[&[0.0, -1.0], &[1.0, 0.0]])).unwrap();
        assert!((ev[0].im.abs() - 1.0).abs() < 1e-14);
        assert!((ev[0].re).abs() < 1e-14);
        assert!((ev[0].im + ev[1].im).abs() < 1e-14);
    }

    #[test]
    fn eigenvectors_have_small_backward_error() {
        let a = m(&[&[4.0, -2.0, 1.0, 0.5], &[3.0, 6.0, -4.0, 2.0], &[2.0, 1.0, 8.0, -1.0], &[0.1, 0.0, 2.0, -3.0]]);
        let pairs = eig(&a).unwrap();
        assert_eq!(pairs.len(), 4);
        for p in &pairs {
            assert!(eigen_residual(&a, p.value, &p.vector) < 1e-8);
        }
        let trace: f64 = pairs.iter().map(|p| p.value.re).sum();
        assert!((trace - 15.0).abs() < 1e-10);
    }

    #[test]
    fn identity_yields_independent_vectors() {
        let pairs = eig(&Matrix::<f64>::identity(3)).unwrap();
        for (i, p) in pairs.iter().enumerate() {
            for q in &pairs[..i] {
                let dot: Complex<f64> = p.vector.iter().zip(&q.vector).map(|(x, y)| x.conj() * y).sum();
                assert!(dot.norm() < 1e-8);
            }
        }
    }

    #[test]
    fn jordan_block_reports_repeated_value() {
        let pairs = eig(&m(&[&[2.0, 1.0], &[0.0, 2.0]])).unwrap();
        for p in &pairs {
            assert!((p.value.re - 2.0).abs() < 1e-7);
            assert!(eigen_residual(&m(&[&[2.0, 1.0], &[0.0, 2.0]]), p.value, &p.vector) < 1e-8);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(eigenvalues(&m(&[&[f64::NAN]])).is_err());
    }

    #[test]
    fn works_in_f32() {
        let ev = eigenvalues(&Matrix::<f32>::from_rows(&[vec![0.0, 2.0], vec![1.0, 0.0]])).unwrap();
        assert!((ev[1].re - 2f32.sqrt()).abs() < 1e-6);
    }
}

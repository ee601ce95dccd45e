//! Moment-matching fits of heterogeneous finite mixtures.
//!
//! The last weight is eliminated through `λ_K = 1 - Σ_{j<K} λ_j`, so every
//! candidate sums to one by construction. Problems whose only unknowns are
//! weights are solved as an exact rational linear system; problems with
//! unknown family parameters go through a Groebner basis and the eigenvalue
//! readout of its variety.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::eigensolve::{filter_real, residual, solve_variety, DEFAULT_REAL_TOL};
use crate::error::{Error, Result};
use crate::moments::{
    empirical_raw_moments_exact, family_cdf, family_cdf_left, gram_charlier_coeffs, raw_moments,
    symbolic_raw_moments_in, FamilySpec, MomentVector, Standardization,
};
use crate::poly::{buchberger, quotient_basis, MonomialOrder, MultiPoly, Ring};
use crate::scalar::{from_f64_exact, parse_decimal, round_to_denominator, to_f64};
use crate::{QPoly, Rational};

/// Simplex tolerance on `|Σλ - 1|` and on negative weights.
pub const SIMPLEX_TOL: f64 = 1e-8;
/// Data-derived targets are rounded to this many decimal places.
pub const TARGET_DECIMALS: u32 = 12;
/// Largest pool accepted by [`eda_scan`].
pub const MAX_POOL: usize = 12;

/// Name of the j-th weight, 1-based.
pub fn weight_name(j: usize) -> String {
    format!("lambda{j}")
}

/// An observed sample, held both exactly (for moment targets) and as floats (for KS).
#[derive(Clone, Debug)]
pub struct Sample {
    exact: Vec<Rational>,
    sorted: Vec<f64>,
}

impl Sample {
    pub fn from_rationals(exact: Vec<Rational>) -> Result<Self> {
        if exact.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut sorted: Vec<f64> = exact.iter().map(to_f64).collect();
        sorted.sort_by(f64::total_cmp);
        Ok(Sample { exact, sorted })
    }

    /// Each value enters exactly as its shortest decimal representation.
    pub fn from_f64(values: &[f64]) -> Result<Self> {
        let exact = values
            .iter()
            .map(|x| {
                parse_decimal(&format!("{x:e}"))
                    .ok_or_else(|| Error::InvalidParameter(format!("sample value {x} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(exact)
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn exact(&self) -> &[Rational] {
        &self.exact
    }

    /// Empirical raw moments rounded to denominator `10^12`.
    pub fn target_moments(&self, order: usize) -> Result<MomentVector> {
        let m = empirical_raw_moments_exact(&self.exact, order)?;
        let denom = BigInt::from(10u32).pow(TARGET_DECIMALS);
        MomentVector::new(m.values().iter().map(|v| round_to_denominator(v, &denom)).collect())
    }
}

#[derive(Clone, Debug)]
pub struct MixtureProblem {
    components: Vec<FamilySpec>,
    match_order: usize,
    target: MomentVector,
    std: Standardization,
    ring: Arc<Ring>,
}

impl MixtureProblem {
    /// Validates the components and fixes the matching order.
    ///
    /// `match_order = None` matches as many moments as there are unknowns
    /// (at least one). The target is truncated to the matching order.
    pub fn new(components: Vec<FamilySpec>, match_order: Option<usize>, target: &MomentVector) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyInput("mixture components"));
        }
        let k = components.len();
        let mut names: Vec<String> = (1..k).map(weight_name).collect();
        let mut seen: HashSet<String> = names.iter().cloned().collect();
        seen.insert(weight_name(k));
        for c in &components {
            c.validate()?;
            for u in c.unknowns() {
                if !seen.insert(u.to_string()) {
                    return Err(Error::DuplicateUnknown(u.to_string()));
                }
                names.push(u.to_string());
            }
        }
        let unknowns = names.len();
        let m = match_order.unwrap_or(unknowns.max(1));
        if m == 0 {
            return Err(Error::EmptyInput("moment order"));
        }
        if unknowns > m {
            return Err(Error::Underdetermined { unknowns, equations: m });
        }
        for c in &components {
            if let Some(max) = c.max_finite_order() {
                if m > max {
                    return Err(Error::MomentNotFinite { family: c.to_string(), order: m });
                }
            }
        }
        let target = target.truncated(m)?;
        let std = match Standardization::of_moments(&target) {
            Ok(s) => s,
            Err(_) => Standardization::identity(),
        };
        Ok(MixtureProblem { components, match_order: m, target, std, ring: Ring::new(names) })
    }

    /// Replaces the Gram–Charlier reference frame.
    pub fn with_standardization(mut self, std: Standardization) -> Self {
        self.std = std;
        self
    }

    pub fn components(&self) -> &[FamilySpec] {
        &self.components
    }

    pub fn match_order(&self) -> usize {
        self.match_order
    }

    pub fn target(&self) -> &MomentVector {
        &self.target
    }

    pub fn standardization(&self) -> &Standardization {
        &self.std
    }

    /// Weights `λ_1..λ_{K-1}` followed by family unknowns in component order.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn weight_unknowns(&self) -> usize {
        self.components.len() - 1
    }

    pub fn has_parameter_unknowns(&self) -> bool {
        self.ring.nvars() > self.weight_unknowns()
    }

    /// Equations `e_n = Σ_{j<K} λ_j p_n^(j) + (1 - Σ_{j<K} λ_j) p_n^(K) - m_n`, `n = 1..M`.
    pub fn build_system(&self) -> Result<Vec<QPoly>> {
        let ring = &self.ring;
        let k = self.components.len();
        let m = self.match_order;
        let per: Vec<Vec<QPoly>> =
            self.components.iter().map(|c| symbolic_raw_moments_in(c, m, ring)).collect::<Result<_>>()?;
        let mut last_weight = MultiPoly::one(ring);
        for j in 0..k - 1 {
            last_weight = &last_weight - &MultiPoly::variable(ring, j);
        }
        let mut system = Vec::with_capacity(m);
        for n in 0..m {
            let mut e = &last_weight * &per[k - 1][n];
            for (j, moments) in per.iter().enumerate().take(k - 1) {
                e = &e + &(&MultiPoly::variable(ring, j) * &moments[n]);
            }
            e = &e - &MultiPoly::constant(ring, self.target.values()[n].clone());
            system.push(e);
        }
        Ok(system)
    }

    fn fixed_check(&self) -> Result<()> {
        match self.components.iter().find(|c| !c.is_fixed()) {
            Some(c) => Err(Error::InvalidParameter(format!(
                "{c} has unknown parameters; the linear path needs fixed families"
            ))),
            None => Ok(()),
        }
    }
}

/// One candidate solution, weights in component order.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionCandidate {
    pub weights: Vec<f64>,
    /// Family unknowns in ring order.
    pub parameters: Vec<(String, f64)>,
    /// Max of `|e_n|` over the matching equations.
    pub residual: f64,
    pub simplex_feasible: bool,
    pub ks: Option<f64>,
}

impl SolutionCandidate {
    fn new(weights: Vec<f64>, parameters: Vec<(String, f64)>, residual: f64) -> Self {
        let simplex_feasible = simplex_feasible(&weights);
        SolutionCandidate { weights, parameters, residual, simplex_feasible, ks: None }
    }

    /// Components with this candidate's parameter values substituted.
    pub fn fitted_components(&self, components: &[FamilySpec]) -> Result<Vec<FamilySpec>> {
        let values = self
            .parameters
            .iter()
            .map(|(k, v)| {
                from_f64_exact(*v)
                    .map(|q| (k.clone(), q))
                    .ok_or_else(|| Error::InvalidParameter(format!("parameter {k} is not finite")))
            })
            .collect::<Result<_>>()?;
        let out: Vec<FamilySpec> = components.iter().map(|c| c.substitute(&values)).collect();
        for c in &out {
            c.validate()?;
        }
        Ok(out)
    }
}

pub fn simplex_feasible(weights: &[f64]) -> bool {
    let sum: f64 = weights.iter().sum();
    (sum - 1.0).abs() <= SIMPLEX_TOL && weights.iter().all(|w| *w >= -SIMPLEX_TOL)
}

/// Which moment coordinates the linear path matches in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MatchingSpace {
    #[default]
    RawMoments,
    /// Gram–Charlier coefficients `c_1..c_M` under the problem's standardization.
    GramCharlier,
}

// Exact Gauss-Jordan on a square system; returns None when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col][col..].iter_mut() {
            *x = &*x * &inv;
        }
        b[col] = &b[col] * &inv;
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * p;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

// Columns of `a` that are linear combinations of earlier columns, with their supports.
fn dependent_columns(a: &[Vec<Rational>], cols: usize) -> Option<Vec<usize>> {
    // row-reduce the transpose: column j is dependent if it reduces to zero
    let mut basis: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    for j in 0..cols {
        let mut v: Vec<Rational> = a.iter().map(|row| row[j].clone()).collect();
        let mut combo = vec![Rational::zero(); cols];
        combo[j] = Rational::one();
        for (pivot, bv, bc) in &basis {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &bv[*pivot];
                for (x, y) in v.iter_mut().zip(bv) {
                    *x -= &f * y;
                }
                for (x, y) in combo.iter_mut().zip(bc) {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => basis.push((p, v, combo)),
            None => return Some((0..cols).filter(|&i| !combo[i].is_zero()).collect()),
        }
    }
    None
}

fn component_moments(problem: &MixtureProblem, space: MatchingSpace) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let m = problem.match_order;
    let per: Vec<Vec<Rational>> = problem
        .components
        .iter()
        .map(|c| -> Result<Vec<Rational>> {
            let raw = raw_moments(c, m)?;
            Ok(match space {
                MatchingSpace::RawMoments => raw.values().to_vec(),
                MatchingSpace::GramCharlier => gram_charlier_coeffs(&raw, &problem.std, m)?.coeffs()[1..].to_vec(),
            })
        })
        .collect::<Result<_>>()?;
    let target = match space {
        MatchingSpace::RawMoments => problem.target.values().to_vec(),
        MatchingSpace::GramCharlier => gram_charlier_coeffs(&problem.target, &problem.std, m)?.coeffs()[1..].to_vec(),
    };
    Ok((per, target))
}

/// Exact solve of the weight-only system: square when `M = K-1`, normal
/// equations of the least-squares problem when `M > K-1`.
pub fn solve_linear(problem: &MixtureProblem) -> Result<Vec<SolutionCandidate>> {
    solve_linear_in(problem, MatchingSpace::RawMoments)
}

pub fn solve_linear_in(problem: &MixtureProblem, space: MatchingSpace) -> Result<Vec<SolutionCandidate>> {
    problem.fixed_check()?;
    let k = problem.components.len();
    let m = problem.match_order;
    let (per, target) = component_moments(problem, space)?;
    let last = &per[k - 1];
    let a: Vec<Vec<Rational>> = (0..m).map(|n| (0..k - 1).map(|j| &per[j][n] - &last[n]).collect()).collect();
    let b: Vec<Rational> = (0..m).map(|n| &target[n] - &last[n]).collect();

    let free = if k == 1 {
        Vec::new()
    } else {
        if let Some(cols) = dependent_columns(&a, k - 1) {
            let mut comps = cols;
            comps.push(k - 1);
            return Err(Error::RankDeficient { components: comps });
        }
        let (lhs, rhs) = if m == k - 1 {
            (a.clone(), b.clone())
        } else {
            let ata = (0..k - 1)
                .map(|i| {
                    (0..k - 1).map(|j| (0..m).fold(Rational::zero(), |acc, n| acc + &a[n][i] * &a[n][j])).collect()
                })
                .collect();
            let atb = (0..k - 1).map(|i| (0..m).fold(Rational::zero(), |acc, n| acc + &a[n][i] * &b[n])).collect();
            (ata, atb)
        };
        solve_square(lhs, rhs).ok_or_else(|| Error::RankDeficient { components: (0..k).collect() })?
    };

    let mut weights_q = free.clone();
    weights_q.push(free.iter().fold(Rational::one(), |acc, w| acc - w));
    let residual = (0..m)
        .map(|n| {
            let fit = (0..k).fold(Rational::zero(), |acc, j| acc + &weights_q[j] * &per[j][n]);
            to_f64(&(fit - &target[n]).abs())
        })
        .fold(0.0, f64::max);
    let weights: Vec<f64> = weights_q.iter().map(to_f64).collect();
    Ok(vec![SolutionCandidate::new(weights, Vec::new(), residual)])
}

/// Outcome of the polynomial path, with the quotient dimension for diagnostics.
#[derive(Clone, Debug)]
pub struct PolynomialSolution {
    pub candidates: Vec<SolutionCandidate>,
    pub quotient_dimension: usize,
}

/// Groebner basis, quotient basis, eigenvalue readout, real filtering.
pub fn solve_polynomial(problem: &MixtureProblem, seed: u64) -> Result<PolynomialSolution> {
    solve_polynomial_with(problem, seed, DEFAULT_REAL_TOL)
}

pub fn solve_polynomial_with(problem: &MixtureProblem, seed: u64, real_tol: f64) -> Result<PolynomialSolution> {
    let unknowns = problem.ring.nvars();
    let system = problem.build_system()?;
    if system.len() > unknowns {
        return Err(Error::Overdetermined { unknowns, equations: system.len() });
    }
    let k = problem.components.len();
    if unknowns == 0 {
        let residual = residual(&system, &[]);
        return Ok(PolynomialSolution {
            candidates: vec![SolutionCandidate::new(vec![1.0], Vec::new(), residual)],
            quotient_dimension: 1,
        });
    }
    let g = buchberger(&system, MonomialOrder::DegRevLex)?;
    let beta = quotient_basis(&g)?;
    let points = solve_variety(&g, &beta, seed)?;
    let real = filter_real(&points, real_tol, &system);
    let names = problem.ring.vars();
    let candidates = real
        .iter()
        .map(|p| {
            let coords: Vec<f64> = p.coordinates.iter().map(|z| z.re).collect();
            let mut weights: Vec<f64> = coords[..k - 1].to_vec();
            weights.push(1.0 - weights.iter().sum::<f64>());
            let params = names[k - 1..].iter().cloned().zip(coords[k - 1..].iter().copied()).collect();
            SolutionCandidate::new(weights, params, p.residual)
        })
        .collect();
    Ok(PolynomialSolution { candidates, quotient_dimension: beta.len() })
}

/// Mixture CDF `Σ λ_j F_j(x)`.
pub fn mixture_cdf(components: &[FamilySpec], weights: &[f64], x: f64) -> Result<f64> {
    components.iter().zip(weights).try_fold(0.0, |acc, (c, w)| Ok(acc + w * family_cdf(c, x)?))
}

fn mixture_cdf_left(components: &[FamilySpec], weights: &[f64], x: f64) -> Result<f64> {
    components.iter().zip(weights).try_fold(0.0, |acc, (c, w)| Ok(acc + w * family_cdf_left(c, x)?))
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `sample` and the mixture.
///
/// Both one-sided gaps are taken at every distinct sample point, comparing
/// the empirical CDF before the point with the model's left limit.
pub fn ks_statistic(components: &[FamilySpec], weights: &[f64], sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    crate::rng::check_weights(weights, components.len())?;
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let before = i as f64 / n;
        let after = j as f64 / n;
        let f = mixture_cdf(components, weights, x)?;
        let f_left = mixture_cdf_left(components, weights, x)?;
        d = d.max((after - f).abs()).max((before - f_left).abs());
        i = j;
    }
    Ok(d.min(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverPath {
    Linear,
    Polynomial,
}

impl fmt::Display for SolverPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverPath::Linear => "linear",
            SolverPath::Polynomial => "polynomial",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub solver_path: SolverPath,
    /// Size of the quotient basis; absent on the linear path.
    pub quotient_dimension: Option<usize>,
    pub moment_order: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct FitReport {
    pub components: Vec<FamilySpec>,
    /// Sorted by feasibility, then KS, then residual.
    pub candidates: Vec<SolutionCandidate>,
    pub diagnostics: Diagnostics,
}

impl FitReport {
    pub fn best(&self) -> Option<&SolutionCandidate> {
        self.candidates.first()
    }

    pub fn best_feasible(&self) -> Option<&SolutionCandidate> {
        self.candidates.first().filter(|c| c.simplex_feasible)
    }
}

fn candidate_order(a: &SolutionCandidate, b: &SolutionCandidate) -> std::cmp::Ordering {
    let ks = |c: &SolutionCandidate| c.ks.unwrap_or(f64::INFINITY);
    b.simplex_feasible
        .cmp(&a.simplex_feasible)
        .then(ks(a).total_cmp(&ks(b)))
        .then(a.residual.total_cmp(&b.residual))
        .then_with(|| {
            a.weights
                .iter()
                .zip(&b.weights)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
}

/// Solves by the linear path when every family is fixed, else by the
/// polynomial path, then scores feasible candidates against `sample`.
pub fn fit(problem: &MixtureProblem, sample: Option<&Sample>, seed: u64) -> Result<FitReport> {
    fit_with(problem, sample, seed, DEFAULT_REAL_TOL)
}

/// [`fit`] with an explicit realness tolerance for the polynomial path.
pub fn fit_with(problem: &MixtureProblem, sample: Option<&Sample>, seed: u64, real_tol: f64) -> Result<FitReport> {
    let (mut candidates, path, qdim) = if problem.has_parameter_unknowns() {
        let sol = solve_polynomial_with(problem, seed, real_tol)?;
        (sol.candidates, SolverPath::Polynomial, Some(sol.quotient_dimension))
    } else {
        (solve_linear(problem)?, SolverPath::Linear, None)
    };
    if let Some(sample) = sample {
        for c in candidates.iter_mut().filter(|c| c.simplex_feasible) {
            c.ks = c
                .fitted_components(&problem.components)
                .and_then(|comps| ks_statistic(&comps, &c.weights, sample.sorted()))
                .ok();
        }
    }
    candidates.sort_by(candidate_order);
    Ok(FitReport {
        components: problem.components.clone(),
        candidates,
        diagnostics: Diagnostics {
            solver_path: path,
            quotient_dimension: qdim,
            moment_order: problem.match_order,
            seed,
        },
    })
}

/// Number of unknowns (free weights plus family unknowns), at least 1.
pub fn default_match_order(components: &[FamilySpec]) -> usize {
    let params: usize = components.iter().map(|c| c.unknowns().len()).sum();
    (components.len().saturating_sub(1) + params).max(1)
}

/// Builds the problem from the sample's rounded empirical moments and fits it.
pub fn fit_sample(
    components: Vec<FamilySpec>,
    match_order: Option<usize>,
    sample: &Sample,
    seed: u64,
) -> Result<FitReport> {
    if components.is_empty() {
        return Err(Error::EmptyInput("mixture components"));
    }
    let order = match_order.unwrap_or_else(|| default_match_order(&components));
    let target = sample.target_moments(order)?;
    let problem = MixtureProblem::new(components, Some(order), &target)?;
    fit(&problem, Some(sample), seed)
}

/// One subset of an EDA scan.
#[derive(Clone, Debug)]
pub struct EdaEntry {
    /// Indices into the pool, increasing.
    pub subset: Vec<usize>,
    pub components: Vec<FamilySpec>,
    pub outcome: Result<FitReport>,
}

impl EdaEntry {
    /// KS of the best feasible candidate, if any.
    pub fn best_ks(&self) -> Option<f64> {
        self.outcome.as_ref().ok().and_then(|r| r.best_feasible()).and_then(|c| c.ks)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Fits every size-`k` subset of `pool` in parallel.
///
/// Entries are assembled in lexicographic subset order and then stably
/// sorted by best KS, so the result does not depend on scheduling. Failed
/// subsets stay in the list, after every scored one.
pub fn eda_scan(
    sample: &Sample,
    pool: &[FamilySpec],
    k: usize,
    match_order: usize,
    seed: u64,
) -> Result<Vec<EdaEntry>> {
    if pool.is_empty() {
        return Err(Error::EmptyInput("family pool"));
    }
    if pool.len() > MAX_POOL {
        return Err(Error::InvalidParameter(format!("pool of {} families exceeds the cap of {MAX_POOL}", pool.len())));
    }
    if k == 0 || k > pool.len() {
        return Err(Error::InvalidParameter(format!("subset size {k} must lie in 1..={}", pool.len())));
    }
    let target = sample.target_moments(match_order)?;
    let mut entries: Vec<EdaEntry> = subsets(pool.len(), k)
        .into_par_iter()
        .map(|subset| {
            let components: Vec<FamilySpec> = subset.iter().map(|&i| pool[i].clone()).collect();
            let outcome = MixtureProblem::new(components.clone(), Some(match_order), &target)
                .and_then(|p| fit(&p, Some(sample), seed));
            EdaEntry { subset, components, outcome }
        })
        .collect();
    entries.sort_by(|a, b| {
        let key = |e: &EdaEntry| e.best_ks().unwrap_or(f64::INFINITY);
        key(a).total_cmp(&key(b))
    });
    Ok(entries)
}

/// Coordinates of a candidate as complex values in ring order (free weights, then parameters).
pub fn candidate_point(candidate: &SolutionCandidate) -> Vec<Complex64> {
    let k = candidate.weights.len();
    candidate.weights[..k - 1]
        .iter()
        .chain(candidate.parameters.iter().map(|(_, v)| v))
        .map(|v| Complex64::new(*v, 0.0))
        .collect()
}

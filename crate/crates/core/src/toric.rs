//! Affine toric complete intersections `C{S}` presented as
//! `C{x_1, ..., x_{d+p}} / (x^{alpha_i} - x^{beta_i})`, the map `theta`
//! sending a monomial valuation `nu` on `S` to the weights `<s_k, nu>`, and
//! the semigroup-side Poincaré series.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{ExponentVector, Polynomial, Rational, ValuationSystem, WeightVector};
use crate::oracle::oracle_series;
use crate::series::{poincare_from_codims, CoefficientBox, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    pub alpha: ExponentVector,
    pub beta: ExponentVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupPresentation {
    d: usize,
    generators: Vec<Vec<i64>>,
    binomials: Vec<Binomial>,
}

impl SemigroupPresentation {
    /// Checks only the shapes; see [`validate_presentation`] for the rest.
    pub fn new(d: usize, generators: Vec<Vec<i64>>, binomials: Vec<Binomial>) -> Result<Self> {
        if d == 0 || binomials.is_empty() {
            return Err(Error::InvalidPresentation("d and p must be positive".into()));
        }
        let n = d + binomials.len();
        if generators.len() != n {
            return Err(Error::InvalidPresentation(format!("expected {n} generators, found {}", generators.len())));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != d) {
            return Err(Error::InvalidPresentation(format!("generator {g:?} is not a {d}-tuple")));
        }
        if let Some(b) = binomials.iter().find(|b| b.alpha.dim() != n || b.beta.dim() != n) {
            return Err(Error::InvalidPresentation(format!(
                "binomial exponents {} / {} need {n} entries",
                b.alpha, b.beta
            )));
        }
        Ok(SemigroupPresentation { d, generators, binomials })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> usize {
        self.binomials.len()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn binomials(&self) -> &[Binomial] {
        &self.binomials
    }

    /// `x^alpha - x^beta` in `d + p` variables.
    pub fn binomial_polynomial(&self, i: usize) -> Result<Polynomial> {
        let b = &self.binomials[i];
        Polynomial::from_terms(
            self.d + self.p(),
            [
                (b.alpha.clone(), Rational::from_integer(1.into())),
                (b.beta.clone(), Rational::from_integer((-1).into())),
            ],
        )
    }

    fn degree(&self, e: &ExponentVector) -> Vec<i64> {
        let mut out = vec![0i64; self.d];
        for (a, s) in e.entries().iter().zip(&self.generators) {
            for (o, x) in out.iter_mut().zip(s) {
                *o += i64::from(*a) * x;
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationReport {
    /// `(binomial, deg alpha, deg beta)` for every unbalanced binomial.
    pub degree_mismatches: Vec<(usize, Vec<i64>, Vec<i64>)>,
    /// Binomials whose two monomials share a variable.
    pub overlapping_supports: Vec<usize>,
    /// Nonnegative relation `sum c_k s_k = 0` found by the bounded search.
    pub non_pointed: Option<Vec<u32>>,
}

impl PresentationReport {
    pub fn is_valid(&self) -> bool {
        self.degree_mismatches.is_empty() && self.overlapping_supports.is_empty() && self.non_pointed.is_none()
    }
}

/// Total size of the relations tried when looking for `s, -s` both in `S`.
pub const POINTEDNESS_SEARCH_BOUND: u32 = 6;

fn nonnegative_relation(generators: &[Vec<i64>], d: usize) -> Option<Vec<u32>> {
    fn go(gens: &[Vec<i64>], k: usize, left: u32, c: &mut Vec<u32>, sum: &mut Vec<i64>) -> bool {
        if k == gens.len() {
            return c.iter().any(|&x| x > 0) && sum.iter().all(|&x| x == 0);
        }
        for a in 0..=left {
            c.push(a);
            for (s, g) in sum.iter_mut().zip(&gens[k]) {
                *s += i64::from(a) * g;
            }
            let found = go(gens, k + 1, left - a, c, sum);
            for (s, g) in sum.iter_mut().zip(&gens[k]) {
                *s -= i64::from(a) * g;
            }
            if found {
                return true;
            }
            c.pop();
        }
        false
    }
    let mut c = Vec::new();
    go(generators, 0, POINTEDNESS_SEARCH_BOUND, &mut c, &mut vec![0; d]).then_some(c)
}

pub fn validate_presentation(sp: &SemigroupPresentation) -> PresentationReport {
    let mut report = PresentationReport::default();
    for (i, b) in sp.binomials.iter().enumerate() {
        let (da, db) = (sp.degree(&b.alpha), sp.degree(&b.beta));
        if da != db {
            report.degree_mismatches.push((i, da, db));
        }
        if b.alpha.entries().iter().zip(b.beta.entries()).any(|(a, c)| *a > 0 && *c > 0) {
            report.overlapping_supports.push(i);
        }
    }
    report.non_pointed = nonnegative_relation(&sp.generators, sp.d);
    report
}

/// `mu_k = <s_k, nu>`.
pub fn theta(sp: &SemigroupPresentation, nu: &[i64]) -> Result<Vec<i64>> {
    if nu.len() != sp.d {
        return Err(Error::DimensionMismatch { expected: sp.d, found: nu.len() });
    }
    Ok(sp.generators.iter().map(|s| s.iter().zip(nu).map(|(a, b)| a * b).sum()).collect())
}

/// `sum_k (alpha_ik - beta_ik) mu_k = 0` for every binomial.
pub fn on_dual_locus(sp: &SemigroupPresentation, mu: &[i64]) -> bool {
    mu.len() == sp.generators.len()
        && sp.binomials.iter().all(|b| {
            b.alpha
                .entries()
                .iter()
                .zip(b.beta.entries())
                .zip(mu)
                .map(|((a, c), m)| (i64::from(*a) - i64::from(*c)) * m)
                .sum::<i64>()
                == 0
        })
}

/// `#{s in S : <s, nu_j> < w_j for some j}`.
pub fn semigroup_codim(sp: &SemigroupPresentation, nus: &[Vec<i64>], w: &[i64]) -> Result<u64> {
    if nus.len() != w.len() {
        return Err(Error::RankMismatch { expected: nus.len(), found: w.len() });
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    for (j, (nu, &wj)) in nus.iter().zip(w).enumerate() {
        let mu = theta(sp, nu)?;
        if mu.iter().any(|&m| m < 0) || (wj > 0 && mu.contains(&0)) {
            return Err(Error::InfiniteCount(j));
        }
        if wj <= 0 {
            continue;
        }
        let zero = vec![0i64; sp.d];
        let mut frontier = vec![(zero.clone(), 0i64)];
        let mut local: HashSet<Vec<i64>> = HashSet::from([zero]);
        while let Some((s, val)) = frontier.pop() {
            for (g, m) in sp.generators.iter().zip(&mu) {
                if val + m >= wj {
                    continue;
                }
                let next: Vec<i64> = s.iter().zip(g).map(|(a, b)| a + b).collect();
                if local.insert(next.clone()) {
                    frontier.push((next, val + m));
                }
            }
        }
        seen.extend(local);
    }
    Ok(seen.len() as u64)
}

pub fn semigroup_series(
    sp: &SemigroupPresentation,
    nus: &[Vec<i64>],
    bounds: &CoefficientBox,
    exec: Exec,
) -> Result<TruncatedSeries> {
    poincare_from_codims(nus.len(), bounds, |w| semigroup_codim(sp, nus, w), exec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricComparison {
    pub weights: Vec<Vec<i64>>,
    pub semigroup: TruncatedSeries,
    pub embedded: TruncatedSeries,
}

impl ToricComparison {
    pub fn identical(&self) -> bool {
        self.semigroup == self.embedded
    }
}

/// Semigroup series against the embedded oracle on `C^{d+1}` with the
/// weights `theta(nu_j)` and the single binomial.
pub fn compare_toric(
    sp: &SemigroupPresentation,
    nus: &[Vec<i64>],
    bounds: &CoefficientBox,
    exec: Exec,
) -> Result<ToricComparison> {
    if sp.p() != 1 {
        return Err(Error::Unsupported(format!(
            "embedded comparison needs a single binomial, presentation has {}",
            sp.p()
        )));
    }
    let report = validate_presentation(sp);
    if !report.is_valid() {
        return Err(Error::InvalidPresentation(format!("{report:?}")));
    }
    let mut weights = Vec::with_capacity(nus.len());
    let mut rows = Vec::with_capacity(nus.len());
    for (j, nu) in nus.iter().enumerate() {
        let mu = theta(sp, nu)?;
        let entries = mu
            .iter()
            .map(|&m| u32::try_from(m).ok().filter(|&m| m > 0))
            .collect::<Option<Vec<u32>>>()
            .ok_or(Error::OutOfOracleScope(j))?;
        rows.push(WeightVector::new(entries)?);
        weights.push(mu);
    }
    let sys = ValuationSystem::new(rows)?;
    let h = sp.binomial_polynomial(0)?;
    let embedded = oracle_series(&sys, &h, bounds, exec)?;
    let semigroup = semigroup_series(sp, nus, bounds, exec)?;
    Ok(ToricComparison { weights, semigroup, embedded })
}

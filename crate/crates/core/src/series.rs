//! Poincaré series as factored products `c * prod (1 - t^m)^e` and as
//! box-truncated coefficient tables.
//!
//! All series have support in the nonnegative orthant of `Z^r`: every
//! valuation involved is nonnegative on the ring.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, try_map_indexed, Exec};
use crate::lattice::{value_tuple, Polynomial, Rational, ValuationSystem, ValueTuple};

/// `scalar * prod_m (1 - t^m)^{e_m}` over nonzero exponent tuples `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredSeries {
    rank: usize,
    factors: BTreeMap<Vec<u32>, i64>,
    scalar: Rational,
}

impl FactoredSeries {
    pub fn one(rank: usize) -> Self {
        FactoredSeries { rank, factors: BTreeMap::new(), scalar: Rational::one() }
    }

    pub fn from_factors<I>(rank: usize, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut f = Self::one(rank);
        for (m, e) in factors {
            f.multiply_factor(m, e)?;
        }
        Ok(f)
    }

    pub fn with_scalar(mut self, scalar: Rational) -> Self {
        self.scalar = scalar;
        self
    }

    /// Multiplies in `(1 - t^m)^e`, merging with an existing factor.
    pub fn multiply_factor(&mut self, m: Vec<u32>, e: i64) -> Result<()> {
        if m.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: m.len() });
        }
        if m.iter().all(|&x| x == 0) {
            return Err(Error::ZeroExponentFactor);
        }
        if e == 0 {
            return Ok(());
        }
        let slot = self.factors.entry(m.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&m);
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn factors(&self) -> impl Iterator<Item = (&[u32], i64)> + '_ {
        self.factors.iter().map(|(m, &e)| (m.as_slice(), e))
    }

    pub fn exponent(&self, m: &[u32]) -> i64 {
        self.factors.get(m).copied().unwrap_or(0)
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.scalar.is_one()
    }

    pub fn mul(&self, other: &FactoredSeries) -> Result<FactoredSeries> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        let mut out = self.clone();
        for (m, e) in other.factors() {
            out.multiply_factor(m.to_vec(), e)?;
        }
        out.scalar = &self.scalar * &other.scalar;
        Ok(out)
    }

    pub fn inverse(&self) -> Result<FactoredSeries> {
        if self.scalar.is_zero() {
            return Err(Error::InvalidInput("inverse of the zero series".into()));
        }
        Ok(FactoredSeries {
            rank: self.rank,
            factors: self.factors.iter().map(|(m, e)| (m.clone(), -e)).collect(),
            scalar: self.scalar.recip(),
        })
    }

    /// Factors in rendering order: numerators first, then by exponent tuple.
    pub fn ordered_factors(&self) -> Vec<(&[u32], i64)> {
        let mut fs: Vec<(&[u32], i64)> = self.factors().collect();
        fs.sort_by(|a, b| (a.1 < 0).cmp(&(b.1 < 0)).then_with(|| a.0.cmp(b.0)));
        fs
    }
}

pub fn variable_names(rank: usize) -> Vec<String> {
    if rank == 1 {
        vec!["t".to_string()]
    } else {
        (1..=rank).map(|i| format!("t{i}")).collect()
    }
}

/// `t1^18*t2^24`; zero exponents are omitted and `^1` is implicit.
pub fn render_monomial(m: &[u32]) -> String {
    let names = variable_names(m.len());
    m.iter()
        .zip(&names)
        .filter(|(a, _)| **a > 0)
        .map(|(a, n)| if *a == 1 { n.clone() } else { format!("{n}^{a}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text, e.g. `(1-t1^18*t2^24)^1 * (1-t1^2*t2^4)^-1 * (1-t1^3*t2^3)^-1`.
impl fmt::Display for FactoredSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.ordered_factors().into_iter().map(|(m, e)| format!("(1-{})^{e}", render_monomial(m))).collect();
        match (parts.is_empty(), self.scalar.is_one()) {
            (true, _) => write!(f, "{}", self.scalar),
            (false, true) => f.write_str(&parts.join(" * ")),
            (false, false) => write!(f, "{} * {}", self.scalar, parts.join(" * ")),
        }
    }
}

/// Truncation window `0 <= v <= bound` componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientBox {
    bound: Vec<u32>,
    strides: Vec<usize>,
}

impl CoefficientBox {
    pub fn new(bound: Vec<u32>) -> Self {
        let mut strides = vec![1usize; bound.len()];
        for i in (0..bound.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (bound[i + 1] as usize + 1);
        }
        CoefficientBox { bound, strides }
    }

    pub fn cube(rank: usize, side: u32) -> Self {
        Self::new(vec![side; rank])
    }

    pub fn rank(&self) -> usize {
        self.bound.len()
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    /// Number of lattice points in the box.
    pub fn len(&self) -> usize {
        self.bound.iter().map(|&b| b as usize + 1).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.rank() && v.iter().zip(&self.bound).all(|(a, b)| a <= b)
    }

    pub fn index(&self, v: &[u32]) -> Option<usize> {
        self.contains(v).then(|| v.iter().zip(&self.strides).map(|(&a, s)| a as usize * s).sum())
    }

    pub fn point(&self, mut idx: usize) -> Vec<u32> {
        self.strides
            .iter()
            .map(|s| {
                let a = idx / s;
                idx %= s;
                a as u32
            })
            .collect()
    }

    /// The box enlarged by one in every direction.
    pub fn grown(&self) -> CoefficientBox {
        CoefficientBox::new(self.bound.iter().map(|b| b + 1).collect())
    }
}

/// Coefficients of a series on a box; points outside carry nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    bounds: CoefficientBox,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(bounds: CoefficientBox) -> Self {
        let coeffs = vec![Rational::zero(); bounds.len()];
        TruncatedSeries { bounds, coeffs }
    }

    pub fn from_coefficients(bounds: CoefficientBox, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != bounds.len() {
            return Err(Error::InvalidInput("coefficient table does not fill the box".into()));
        }
        Ok(TruncatedSeries { bounds, coeffs })
    }

    pub fn bounds(&self) -> &CoefficientBox {
        &self.bounds
    }

    pub fn rank(&self) -> usize {
        self.bounds.rank()
    }

    /// Coefficient at `v`; zero outside the box.
    pub fn coefficient(&self, v: &[u32]) -> Rational {
        self.bounds.index(v).map_or_else(Rational::zero, |i| self.coeffs[i].clone())
    }

    /// Coefficients in row-major order of the box.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.bounds.point(i), c))
    }

    /// First point (row-major) where the tables differ.
    pub fn first_difference(&self, other: &TruncatedSeries) -> Option<(Vec<u32>, Rational, Rational)> {
        if self.bounds != other.bounds {
            return Some((Vec::new(), Rational::zero(), Rational::zero()));
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
            .map(|i| (self.bounds.point(i), self.coeffs[i].clone(), other.coeffs[i].clone()))
    }

    /// Truncated product on the common box.
    pub fn convolve(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.bounds != other.bounds {
            return Err(Error::InvalidInput("boxes differ".into()));
        }
        let b = &self.bounds;
        let mut out = vec![Rational::zero(); b.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let u = b.point(i);
            for (j, c) in other.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let w: Vec<u32> = u.iter().zip(b.point(j)).map(|(x, y)| x + y).collect();
                if let Some(k) = b.index(&w) {
                    out[k] += a * c;
                }
            }
        }
        Ok(TruncatedSeries { bounds: b.clone(), coeffs: out })
    }
}

fn binomial_series(e: i64, terms: usize) -> Vec<BigInt> {
    // Coefficients of (1 - s)^e up to s^{terms-1}.
    let mut c = Vec::with_capacity(terms);
    let mut cur = BigInt::one();
    for j in 0..terms {
        c.push(cur.clone());
        // c_{j+1} = c_j * (j - e) / (j + 1); with the sign of -s folded in.
        cur = cur * BigInt::from(j as i64 - e) / BigInt::from(j as i64 + 1);
    }
    c
}

/// Exact coefficients of a factored series on a box.
pub fn expand(f: &FactoredSeries, bounds: &CoefficientBox, exec: Exec) -> Result<TruncatedSeries> {
    if bounds.rank() != f.rank() {
        return Err(Error::RankMismatch { expected: f.rank(), found: bounds.rank() });
    }
    let n = bounds.len();
    let mut table = vec![BigInt::zero(); n];
    table[0] = BigInt::one();
    for (m, e) in f.factors() {
        if m.iter().zip(bounds.bound()).any(|(a, b)| a > b) {
            continue;
        }
        let max_j = m
            .iter()
            .zip(bounds.bound())
            .filter(|(a, _)| **a > 0)
            .map(|(a, b)| (b / a) as usize)
            .min()
            .expect("nonzero exponent tuple");
        let coeffs = binomial_series(e, max_j + 1);
        let shift = bounds.index(m).expect("inside box");
        let prev = &table;
        table = map_indexed(exec, n, |idx| {
            let v = bounds.point(idx);
            let reach = m.iter().zip(&v).filter(|(a, _)| **a > 0).map(|(a, x)| (x / a) as usize).min().unwrap_or(0);
            let mut acc = BigInt::zero();
            for (j, c) in coeffs.iter().enumerate().take(reach + 1) {
                if !c.is_zero() {
                    acc += c * &prev[idx - j * shift];
                }
            }
            acc
        });
    }
    let scalar = f.scalar();
    let coeffs = table.into_iter().map(|c| Rational::from_integer(c) * scalar).collect();
    TruncatedSeries::from_coefficients(bounds.clone(), coeffs)
}

/// `prod_k (1 - t^{(nu_1(x_k), ..., nu_r(x_k))})^{-1}`: the series of the
/// ambient smooth germ.
pub fn ambient_closed_form(sys: &ValuationSystem) -> Result<FactoredSeries> {
    let mut f = FactoredSeries::one(sys.rank());
    for k in 0..sys.dim() {
        let col = sys.column(k);
        if col.iter().all(|&a| a == 0) {
            return Err(Error::ZeroColumn(k));
        }
        f.multiply_factor(col, -1)?;
    }
    Ok(f)
}

/// `(1 - t^q) * ambient_closed_form(sys)` with `q = nu(h)`.
pub fn embedded_closed_form(sys: &ValuationSystem, h: &Polynomial) -> Result<FactoredSeries> {
    let mut f = ambient_closed_form(sys)?;
    let q = value_tuple(sys, h)?;
    if q.entries().iter().all(|&x| x == 0) {
        return Err(Error::UnitGerm);
    }
    f.multiply_factor(q.entries().iter().map(|&x| x as u32).collect(), 1)?;
    Ok(f)
}

/// Rank-one series obtained by `t_j -> t^{n_j}`.
pub fn substitute_powers(f: &FactoredSeries, n: &[u32]) -> Result<FactoredSeries> {
    if n.len() != f.rank() {
        return Err(Error::RankMismatch { expected: f.rank(), found: n.len() });
    }
    let mut out = FactoredSeries::one(1).with_scalar(f.scalar().clone());
    for (m, e) in f.factors() {
        let s: u32 = m.iter().zip(n).map(|(a, b)| a * b).sum();
        if s == 0 {
            return Err(Error::DegenerateSubstitution);
        }
        out.multiply_factor(vec![s], e)?;
    }
    Ok(out)
}

fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Splits off the numerator factor `(1 - t^q)` whose tuple dominates every
/// other factor tuple.
pub fn extract_dominant_factor(f: &FactoredSeries) -> Result<(ValueTuple, FactoredSeries)> {
    let keys: Vec<&Vec<u32>> = f.factors.keys().collect();
    let numerators: Vec<&Vec<u32>> = f.factors.iter().filter(|(_, &e)| e > 0).map(|(m, _)| m).collect();
    if numerators.is_empty() {
        return Err(Error::NoDominantFactor);
    }
    let dominant: Vec<&Vec<u32>> =
        numerators.iter().copied().filter(|m| keys.iter().all(|k| dominates(m, k))).collect();
    let q = match dominant.as_slice() {
        [q] => (*q).clone(),
        _ => {
            let maximal = numerators.iter().filter(|m| !keys.iter().any(|k| k != *m && dominates(k, m))).count();
            return Err(if maximal > 1 { Error::DominantNotUnique } else { Error::NoDominantFactor });
        }
    };
    let mut rest = f.clone();
    rest.multiply_factor(q.clone(), -1)?;
    Ok((ValueTuple::new(q.iter().map(|&x| x as i64).collect()), rest))
}

/// Coefficients `(-1)^{r+1} sum_A (-1)^{|A|} codim(v - 1_A + 1)` on the box.
///
/// The codimension table is evaluated once on the grown box, in parallel
/// when `exec` allows, then combined per coefficient.
pub fn poincare_from_codims<F>(rank: usize, bounds: &CoefficientBox, codim: F, exec: Exec) -> Result<TruncatedSeries>
where
    F: Fn(&[i64]) -> Result<u64> + Sync + Send,
{
    if bounds.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, found: bounds.rank() });
    }
    let grid = bounds.grown();
    let table: Vec<u64> = try_map_indexed(exec, grid.len(), |i| {
        let w: Vec<i64> = grid.point(i).into_iter().map(i64::from).collect();
        codim(&w)
    })?;
    let sign = if rank % 2 == 1 { 1i64 } else { -1i64 };
    let coeffs = (0..bounds.len())
        .map(|i| {
            let v = bounds.point(i);
            let mut acc: i128 = 0;
            for mask in 0u32..(1 << rank) {
                let w: Vec<u32> =
                    v.iter().enumerate().map(|(j, &x)| if mask & (1 << j) != 0 { x } else { x + 1 }).collect();
                let c = table[grid.index(&w).expect("inside grown box")] as i128;
                if mask.count_ones() % 2 == 0 {
                    acc += c;
                } else {
                    acc -= c;
                }
            }
            Rational::from_integer(BigInt::from(acc * sign as i128))
        })
        .collect();
    TruncatedSeries::from_coefficients(bounds.clone(), coeffs)
}

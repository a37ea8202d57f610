//! Exponent vectors, polynomials over the rationals and monomial valuations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};

pub type Rational = BigRational;

/// Exponents of `x_1 .. x_d` in a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut e = vec![0; dim];
        e[index] = 1;
        ExponentVector(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    /// Exponent vector of the product of two monomials.
    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.dim(), other.dim());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&a| a as i64).collect()
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Nonnegative integer weights defining a monomial valuation
/// `x^m -> <w, m>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::ZeroWeight);
        }
        Ok(WeightVector(weights))
    }

    /// Divides out the gcd of the entries.
    pub fn primitive(weights: Vec<u32>) -> Result<Self> {
        let g = weights.iter().fold(0u32, |g, &w| num_integer::gcd(g, w));
        if g == 0 {
            return Err(Error::ZeroWeight);
        }
        Ok(WeightVector(weights.into_iter().map(|w| w / g).collect()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0u32, |g, &w| num_integer::gcd(g, w)) == 1
    }

    /// Every entry strictly positive: the valuation is centred at the maximal ideal.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&w| w > 0)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Value of a valuation; the zero polynomial has infinite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(i64),
    Infinite,
}

impl Value {
    pub fn finite(self) -> Option<i64> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

/// A point of `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueTuple(Vec<i64>);

impl ValueTuple {
    pub fn new(entries: Vec<i64>) -> Self {
        ValueTuple(entries)
    }

    pub fn zeros(rank: usize) -> Self {
        ValueTuple(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn componentwise_max(&self, other: &ValueTuple) -> ValueTuple {
        ValueTuple(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn offset(&self, other: &[i64]) -> ValueTuple {
        ValueTuple(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    /// `self >= other` in every component.
    pub fn dominates(&self, other: &ValueTuple) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl From<Vec<i64>> for ValueTuple {
    fn from(v: Vec<i64>) -> Self {
        ValueTuple(v)
    }
}

impl fmt::Display for ValueTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Ordered list of monomial valuations on `d` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValuationSystem {
    dim: usize,
    valuations: Vec<WeightVector>,
}

impl ValuationSystem {
    pub fn new(valuations: Vec<WeightVector>) -> Result<Self> {
        let first = valuations.first().ok_or(Error::EmptySystem)?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidInput("valuations need at least one variable".into()));
        }
        for w in &valuations {
            check_dim(dim, w.dim())?;
        }
        Ok(ValuationSystem { dim, valuations })
    }

    /// Convenience constructor from raw weight rows.
    pub fn from_rows(rows: &[&[u32]]) -> Result<Self> {
        let ws = rows.iter().map(|r| WeightVector::new(r.to_vec())).collect::<Result<Vec<_>>>()?;
        Self::new(ws)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.valuations.len()
    }

    pub fn valuations(&self) -> &[WeightVector] {
        &self.valuations
    }

    /// `(nu_1(x_k), ..., nu_r(x_k))`.
    pub fn column(&self, k: usize) -> Vec<u32> {
        self.valuations.iter().map(|w| w.entries()[k]).collect()
    }

    /// Values of a monomial under every valuation.
    pub fn values_of(&self, e: &ExponentVector) -> Vec<i64> {
        self.valuations.iter().map(|w| dot(w.entries(), e.entries())).collect()
    }

    /// Index of the first valuation with a zero weight, if any.
    pub fn first_non_positive(&self) -> Option<usize> {
        self.valuations.iter().position(|w| !w.is_positive())
    }
}

pub(crate) fn dot(w: &[u32], e: &[u32]) -> i64 {
    w.iter().zip(e).map(|(&a, &b)| a as i64 * b as i64).sum()
}

pub fn valuate_monomial(w: &WeightVector, e: &ExponentVector) -> Result<i64> {
    check_dim(w.dim(), e.dim())?;
    Ok(dot(w.entries(), e.entries()))
}

pub fn valuate_polynomial(w: &WeightVector, p: &Polynomial) -> Result<Value> {
    check_dim(w.dim(), p.dim())?;
    Ok(p.support().map(|e| dot(w.entries(), e.entries())).min().map_or(Value::Infinite, Value::Finite))
}

/// Componentwise valuation; this is `q = nu(h)` when `p = h`.
pub fn value_tuple(sys: &ValuationSystem, p: &Polynomial) -> Result<ValueTuple> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    sys.valuations()
        .iter()
        .map(|w| Ok(valuate_polynomial(w, p)?.finite().expect("nonzero polynomial")))
        .collect::<Result<Vec<_>>>()
        .map(ValueTuple)
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zeros(dim), c)
    }

    pub fn monomial(e: ExponentVector, c: Rational) -> Self {
        let dim = e.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Polynomial { dim, terms }
    }

    /// Sums duplicate monomials and drops zero coefficients.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Polynomial::zero(dim);
        for (e, c) in terms {
            check_dim(dim, e.dim())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Integer-coefficient shorthand used heavily in tests and fixtures.
    pub fn from_int_terms(dim: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            dim,
            terms.iter().map(|(e, c)| (ExponentVector::new(e.to_vec()), Rational::from_integer(BigInt::from(*c)))),
        )
    }

    fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
            *slot += c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> + '_ {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&ExponentVector::zeros(self.dim))
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial { dim: self.dim, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter_terms<F: Fn(&ExponentVector) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Same polynomial scaled to coprime integer coefficients; the zero
    /// polynomial maps to an empty list.
    pub fn primitive_integer_terms(&self) -> Vec<(ExponentVector, BigInt)> {
        let lcm = self.terms.values().fold(BigInt::one(), |l, c| num_integer::lcm(l, c.denom().clone()));
        let ints: Vec<(ExponentVector, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), (c * Rational::from_integer(lcm.clone())).to_integer()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, (_, c)| num_integer::gcd(g, c.clone()));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|(e, c)| (e, c / &g)).collect()
    }

    /// Renders with the given variable names, e.g. `x^6*y^2 + y^8`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .entries()
                .iter()
                .zip(names)
                .filter(|(a, _)| **a > 0)
                .map(|(a, n)| if *a == 1 { n.clone() } else { format!("{n}^{a}") })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// `x, y, z` for up to three variables, `x1, ..., xd` beyond.
/// The integer value of a rational, when it is one and fits.
pub fn as_i64(c: &Rational) -> Option<i64> {
    if c.is_integer() {
        c.to_integer().to_i64()
    } else {
        None
    }
}

pub fn default_variable_names(dim: usize) -> Vec<String> {
    if dim <= 3 {
        ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_variable_names(self.dim)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[u32]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    fn ex1() -> Polynomial {
        Polynomial::from_int_terms(2, &[(&[6, 2], 1), (&[0, 8], 1)]).unwrap()
    }

    #[test]
    fn monomial_values() {
        let e = ExponentVector::new(vec![4, 4]);
        assert_eq!(valuate_monomial(&w(&[2, 3]), &e).unwrap(), 20);
        assert_eq!(valuate_monomial(&w(&[1, 0, 0]), &ExponentVector::zeros(3)).unwrap(), 0);
        assert_eq!(valuate_monomial(&w(&[4, 3]), &ExponentVector::new(vec![6, 2])).unwrap(), 30);
        assert!(matches!(
            valuate_monomial(&w(&[1, 1]), &ExponentVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(valuate_polynomial(&w(&[2, 3]), &ex1()).unwrap(), Value::Finite(18));
        assert_eq!(valuate_polynomial(&w(&[4, 3]), &ex1()).unwrap(), Value::Finite(24));
        assert_eq!(valuate_polynomial(&w(&[4, 3]), &Polynomial::zero(2)).unwrap(), Value::Infinite);
    }

    #[test]
    fn value_tuples() {
        let sys = ValuationSystem::from_rows(&[&[2, 3], &[4, 3]]).unwrap();
        assert_eq!(value_tuple(&sys, &ex1()).unwrap(), ValueTuple::new(vec![18, 24]));
        let cusp = Polynomial::from_int_terms(2, &[(&[2, 0], 1), (&[0, 3], 1)]).unwrap();
        let sys = ValuationSystem::from_rows(&[&[1, 1]]).unwrap();
        assert_eq!(value_tuple(&sys, &cusp).unwrap(), ValueTuple::new(vec![2]));
        let one = Polynomial::constant(2, Rational::one());
        let sys = ValuationSystem::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(value_tuple(&sys, &one).unwrap(), ValueTuple::new(vec![0, 0]));
        assert_eq!(value_tuple(&sys, &Polynomial::zero(2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn construction_checks() {
        assert_eq!(WeightVector::new(vec![0, 0]), Err(Error::ZeroWeight));
        assert_eq!(WeightVector::primitive(vec![4, 6]).unwrap().entries(), &[2, 3]);
        assert!(ValuationSystem::new(vec![]).is_err());
        assert!(ValuationSystem::from_rows(&[&[1, 1], &[1, 1, 1]]).is_err());
        let p = Polynomial::from_int_terms(1, &[(&[1], 2), (&[1], -2)]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn display_round_shape() {
        assert_eq!(ex1().to_string(), "x^6*y^2 + y^8");
        let p = Polynomial::from_int_terms(2, &[(&[1, 0], -3), (&[0, 0], 1)]).unwrap();
        assert_eq!(p.to_string(), "-3*x + 1");
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..5, 0u32..5), -4i64..=4), 1..5).prop_map(|ts| {
            Polynomial::from_terms(
                2,
                ts.into_iter().map(|((a, b), c)| (ExponentVector::new(vec![a, b]), Rational::from_integer(c.into()))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative(p in arb_poly(), q in arb_poly(), a in 0u32..5, b in 1u32..5) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let wv = w(&[a, b]);
            let vp = valuate_polynomial(&wv, &p).unwrap().finite().unwrap();
            let vq = valuate_polynomial(&wv, &q).unwrap().finite().unwrap();
            let vpq = valuate_polynomial(&wv, &(&p * &q)).unwrap();
            prop_assert_eq!(vpq, Value::Finite(vp + vq));
        }

        #[test]
        fn valuation_of_sum_is_at_least_min(p in arb_poly(), q in arb_poly(), a in 1u32..5, b in 0u32..5) {
            let wv = w(&[a, b]);
            let vs = valuate_polynomial(&wv, &(&p + &q)).unwrap();
            let m = valuate_polynomial(&wv, &p).unwrap().min(valuate_polynomial(&wv, &q).unwrap());
            prop_assert!(vs >= m);
        }

        #[test]
        fn value_tuple_ignores_scaling(p in arb_poly(), c in 1i64..7, neg in any::<bool>()) {
            prop_assume!(!p.is_zero());
            let sys = ValuationSystem::from_rows(&[&[2, 3], &[1, 4]]).unwrap();
            let c = Rational::new((if neg { -c } else { c }).into(), 3.into());
            prop_assert_eq!(value_tuple(&sys, &p).unwrap(), value_tuple(&sys, &p.scale(&c)).unwrap());
        }
    }
}

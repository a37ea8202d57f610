//! Ground truth by exact linear algebra in the finite-dimensional quotients
//! `O / M(w)`, where `M(w)` is spanned by the monomials `m` with
//! `nu_j(m) >= w_j` for all `j`.
//!
//! Everything here needs every valuation to have strictly positive weights;
//! otherwise some `O / M(w)` is infinite-dimensional.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exec::{map_indexed, Exec};
use crate::lattice::{value_tuple, ExponentVector, Polynomial, ValuationSystem, ValueTuple, WeightVector};
use crate::linalg;
use crate::newton::{face_polynomial, newton_polyhedron};
use crate::series::{poincare_from_codims, CoefficientBox, TruncatedSeries};

/// Monomial basis of `O / M(w)`, ordered by total degree then lexicographically.
#[derive(Clone, Debug)]
pub struct QuotientModel {
    sys: ValuationSystem,
    w: ValueTuple,
    basis: Vec<ExponentVector>,
    index: HashMap<ExponentVector, usize>,
}

impl QuotientModel {
    pub fn sys(&self) -> &ValuationSystem {
        &self.sys
    }

    pub fn threshold(&self) -> &ValueTuple {
        &self.w
    }

    pub fn basis(&self) -> &[ExponentVector] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, e: &ExponentVector) -> Option<usize> {
        self.index.get(e).copied()
    }
}

fn check_scope(sys: &ValuationSystem) -> Result<()> {
    match sys.first_non_positive() {
        Some(j) => Err(Error::OutOfOracleScope(j)),
        None => Ok(()),
    }
}

fn check_germ(sys: &ValuationSystem, h: &Polynomial) -> Result<()> {
    check_dim(sys.dim(), h.dim())?;
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !h.vanishes_at_origin() {
        return Err(Error::UnitGerm);
    }
    Ok(())
}

fn below(weights: &[u32], bound: i64, prefix: &mut Vec<u32>, acc: i64, out: &mut BTreeSet<Vec<u32>>) {
    let k = prefix.len();
    if k == weights.len() {
        out.insert(prefix.clone());
        return;
    }
    let mut a = 0u32;
    while acc + i64::from(a) * i64::from(weights[k]) < bound {
        prefix.push(a);
        below(weights, bound, prefix, acc + i64::from(a) * i64::from(weights[k]), out);
        prefix.pop();
        a += 1;
    }
}

/// Monomials outside `M(w)`.
pub fn quotient_basis(sys: &ValuationSystem, w: &ValueTuple) -> Result<QuotientModel> {
    check_scope(sys)?;
    if w.rank() != sys.rank() {
        return Err(Error::RankMismatch { expected: sys.rank(), found: w.rank() });
    }
    let mut set = BTreeSet::new();
    for (nu, &wj) in sys.valuations().iter().zip(w.entries()) {
        below(nu.entries(), wj, &mut Vec::with_capacity(sys.dim()), 0, &mut set);
    }
    let mut basis: Vec<ExponentVector> = set.into_iter().map(ExponentVector::new).collect();
    basis.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b)));
    let index = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    Ok(QuotientModel { sys: sys.clone(), w: w.clone(), basis, index })
}

/// `dim O / M(w)`.
pub fn codim_m(sys: &ValuationSystem, w: &ValueTuple) -> Result<u64> {
    Ok(quotient_basis(sys, w)?.len() as u64)
}

/// Rows of `x^a h` reduced modulo `M(w)`, one per multiplier `a` whose
/// product can leave a trace in the quotient.
fn ideal_rows(model: &QuotientModel, h: &Polynomial, q: &ValueTuple) -> Result<Vec<Vec<BigInt>>> {
    let shifted = ValueTuple::new(model.w.entries().iter().zip(q.entries()).map(|(w, q)| w - q).collect());
    let multipliers = quotient_basis(&model.sys, &shifted)?;
    let terms = h.primitive_integer_terms();
    Ok(multipliers
        .basis()
        .iter()
        .map(|a| {
            let mut row = vec![BigInt::zero(); model.len()];
            for (e, c) in &terms {
                if let Some(i) = model.position(&a.add(e)) {
                    row[i] += c;
                }
            }
            row
        })
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect())
}

/// `dim O / (M(w) + (h))`.
pub fn codim_j(sys: &ValuationSystem, h: &Polynomial, w: &ValueTuple) -> Result<u64> {
    check_germ(sys, h)?;
    let model = quotient_basis(sys, w)?;
    let q = value_tuple(sys, h)?;
    let rows = ideal_rows(&model, h, &q)?;
    Ok((model.len() - linalg::rank(&rows)) as u64)
}

fn inclusion_exclusion<F>(rank: usize, v: &[i64], codim: F) -> Result<i64>
where
    F: Fn(&ValueTuple) -> Result<u64>,
{
    let mut acc: i64 = 0;
    for mask in 0u32..(1 << rank) {
        let w: Vec<i64> = v.iter().enumerate().map(|(j, &x)| if mask & (1 << j) != 0 { x } else { x + 1 }).collect();
        let c = codim(&ValueTuple::new(w))? as i64;
        acc += if mask.count_ones() % 2 == 0 { c } else { -c };
    }
    Ok(if rank % 2 == 1 { acc } else { -acc })
}

/// Coefficient of `t^v` in the embedded series, from codimensions.
pub fn embedded_coefficient(sys: &ValuationSystem, h: &Polynomial, v: &ValueTuple) -> Result<i64> {
    check_germ(sys, h)?;
    check_scope(sys)?;
    inclusion_exclusion(sys.rank(), v.entries(), |w| codim_j(sys, h, w))
}

/// Coefficient of `t^v` in the ambient series `P_X`.
pub fn ambient_coefficient(sys: &ValuationSystem, v: &ValueTuple) -> Result<i64> {
    check_scope(sys)?;
    inclusion_exclusion(sys.rank(), v.entries(), |w| codim_m(sys, w))
}

pub fn oracle_series(
    sys: &ValuationSystem,
    h: &Polynomial,
    bounds: &CoefficientBox,
    exec: Exec,
) -> Result<TruncatedSeries> {
    check_germ(sys, h)?;
    check_scope(sys)?;
    poincare_from_codims(sys.rank(), bounds, |w| codim_j(sys, h, &ValueTuple::new(w.to_vec())), exec)
}

pub fn ambient_oracle_series(sys: &ValuationSystem, bounds: &CoefficientBox, exec: Exec) -> Result<TruncatedSeries> {
    check_scope(sys)?;
    poincare_from_codims(sys.rank(), bounds, |w| codim_m(sys, &ValueTuple::new(w.to_vec())), exec)
}

/// `O / M(T)` together with an echelon basis of the image of `(h)`.
///
/// Every ideal `M(v) + (h)` with `v <= T` contains `M(T)`, so intersections
/// of such ideals are computed exactly inside this quotient. Images of
/// `M(v)` are coordinate subspaces.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    model: QuotientModel,
    q: ValueTuple,
    image: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i128>>>,
    values: Vec<Vec<i64>>,
}

impl TruncatedIdeal {
    pub fn new(sys: &ValuationSystem, h: &Polynomial, trunc: &ValueTuple) -> Result<Self> {
        check_germ(sys, h)?;
        let model = quotient_basis(sys, trunc)?;
        let q = value_tuple(sys, h)?;
        let image = linalg::row_basis(&ideal_rows(&model, h, &q)?);
        let values = model.basis().iter().map(|e| sys.values_of(e)).collect();
        let small = image.iter().map(|r| r.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()).collect();
        Ok(TruncatedIdeal { model, q, image, small, values })
    }

    pub fn truncation(&self) -> &ValueTuple {
        self.model.threshold()
    }

    pub fn value_tuple(&self) -> &ValueTuple {
        &self.q
    }

    /// `dim O / M(T)`.
    pub fn dim(&self) -> usize {
        self.model.len()
    }

    /// `dim` of the image of `(h)`.
    pub fn ideal_dim(&self) -> usize {
        self.image.len()
    }

    fn in_filtration(&self, col: usize, v: &[i64]) -> bool {
        self.values[col].iter().zip(v).all(|(a, b)| a >= b)
    }

    fn columns_of(&self, v: &[&[i64]]) -> Vec<bool> {
        (0..self.dim()).map(|c| v.iter().any(|w| self.in_filtration(c, w))).collect()
    }

    fn project_off(&self, cols: &[bool]) -> Vec<Vec<BigInt>> {
        self.image.iter().map(|r| r.iter().zip(cols).filter(|(_, &c)| !c).map(|(x, _)| x.clone()).collect()).collect()
    }

    /// Rank of the image of `(h)` after killing the coordinates in `cols`.
    fn rank_off(&self, cols: &[bool]) -> usize {
        if let Some(small) = &self.small {
            let proj: Vec<Vec<i128>> = small
                .iter()
                .map(|r| r.iter().zip(cols).filter(|(_, &c)| !c).map(|(x, _)| *x).collect::<Vec<_>>())
                .filter(|r| r.iter().any(|&x| x != 0))
                .collect();
            if let Some(r) = linalg::rank_i128(proj) {
                return r;
            }
        }
        linalg::rank(&self.project_off(cols))
    }

    /// `M(v) ∩ (h)` in coordinates of the (independent) image rows, echelonised.
    fn meet_coordinates(&self, cols: &[bool]) -> Vec<Vec<BigInt>> {
        linalg::row_basis(&linalg::left_kernel(&self.project_off(cols)))
    }

    /// Basis of `(coordinate subspace on cols) ∩ image of (h)`.
    fn meet(&self, cols: &[bool]) -> Vec<Vec<BigInt>> {
        let proj = self.project_off(cols);
        linalg::left_kernel(&proj).iter().map(|y| linalg::combine(y, &self.image)).collect()
    }

    fn check_levels(&self, v1: &ValueTuple, v2: &ValueTuple) -> Result<()> {
        let r = self.model.sys().rank();
        for v in [v1, v2] {
            if v.rank() != r {
                return Err(Error::RankMismatch { expected: r, found: v.rank() });
            }
        }
        let required = required_truncation(v1, v2, &self.q);
        if !self.truncation().dominates(&required) {
            return Err(Error::TruncationTooSmall {
                trunc: self.truncation().entries().to_vec(),
                required: required.into_inner(),
            });
        }
        Ok(())
    }

    /// `dim (J(v1) ∩ J(v2)) - dim J(max(v1, v2))` in `O / M(T)`, where
    /// `J(v) = M(v) + (h)`.
    pub fn condition_excess(&self, v1: &ValueTuple, v2: &ValueTuple) -> Result<u64> {
        self.check_levels(v1, v2)?;
        let a1 = self.columns_of(&[v1.entries()]);
        let a2 = self.columns_of(&[v2.entries()]);
        let union: Vec<bool> = a1.iter().zip(&a2).map(|(x, y)| *x || *y).collect();
        let meet: Vec<bool> = a1.iter().zip(&a2).map(|(x, y)| *x && *y).collect();
        let plus = self.rank_off(&a1) + self.rank_off(&a2);
        let minus = self.rank_off(&union) + self.rank_off(&meet);
        Ok((plus - minus) as u64)
    }

    /// Dimensions of `(M(v1) + M(v2)) ∩ (h)` and of
    /// `(M(v1) ∩ (h)) + (M(v2) ∩ (h))` in `O / M(T)`.
    pub fn lemma_sides(&self, v1: &ValueTuple, v2: &ValueTuple) -> Result<(usize, usize)> {
        self.check_levels(v1, v2)?;
        let union = self.columns_of(&[v1.entries(), v2.entries()]);
        let lhs = linalg::rank(&self.meet(&union));
        let mut both = self.meet(&self.columns_of(&[v1.entries()]));
        both.extend(self.meet(&self.columns_of(&[v2.entries()])));
        Ok((lhs, linalg::rank(&both)))
    }
}

/// Smallest admissible truncation `max(v1, v2) + q + 1`.
pub fn required_truncation(v1: &ValueTuple, v2: &ValueTuple, q: &ValueTuple) -> ValueTuple {
    let m = v1.componentwise_max(v2);
    ValueTuple::new(m.entries().iter().zip(q.entries()).map(|(a, b)| a + b + 1).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    ConsistentAtTruncation,
    Violated,
}

impl Verdict {
    fn from_excess(excess: u64) -> Self {
        if excess > 0 {
            Verdict::Violated
        } else {
            Verdict::ConsistentAtTruncation
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentAtTruncation => "consistent-at-truncation",
            Verdict::Violated => "violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// Truncation levels visited, starting with the requested one.
    pub levels: Vec<ValueTuple>,
    /// Excess dimension at each level.
    pub excess: Vec<u64>,
}

/// Number of times a violation is re-confirmed at a larger truncation.
pub const ESCALATIONS: usize = 2;

fn resolve_truncation(
    sys: &ValuationSystem,
    h: &Polynomial,
    v1: &ValueTuple,
    v2: &ValueTuple,
    trunc: Option<&ValueTuple>,
) -> Result<(ValueTuple, ValueTuple)> {
    check_germ(sys, h)?;
    check_scope(sys)?;
    let q = value_tuple(sys, h)?;
    let required = required_truncation(v1, v2, &q);
    let t = match trunc {
        Some(t) if !t.dominates(&required) => {
            return Err(Error::TruncationTooSmall { trunc: t.entries().to_vec(), required: required.into_inner() })
        }
        Some(t) => t.clone(),
        None => required,
    };
    Ok((t, q))
}

fn escalate(t: &ValueTuple, q: &ValueTuple) -> ValueTuple {
    ValueTuple::new(t.entries().iter().zip(q.entries()).map(|(a, b)| a + b + 2).collect())
}

/// Whether `J(v1) ∩ J(v2) = J(max(v1, v2))` survives in `O / M(T)`.
///
/// The default truncation is `max(v1, v2) + q + 1`; a violation is
/// re-checked at `T + q + 2` up to [`ESCALATIONS`] times and reported only
/// if it persists.
pub fn check_condition(
    sys: &ValuationSystem,
    h: &Polynomial,
    v1: &ValueTuple,
    v2: &ValueTuple,
    trunc: Option<&ValueTuple>,
) -> Result<ConditionReport> {
    let (mut t, q) = resolve_truncation(sys, h, v1, v2, trunc)?;
    let mut report = ConditionReport { verdict: Verdict::ConsistentAtTruncation, levels: vec![], excess: vec![] };
    for step in 0..=ESCALATIONS {
        let excess = TruncatedIdeal::new(sys, h, &t)?.condition_excess(v1, v2)?;
        report.levels.push(t.clone());
        report.excess.push(excess);
        report.verdict = Verdict::from_excess(excess);
        if excess == 0 || step == ESCALATIONS {
            break;
        }
        t = escalate(&t, &q);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub condition: Verdict,
    pub intersection: Verdict,
    pub truncation: ValueTuple,
    /// `dim (M(v1)+M(v2)) ∩ (h)` and `dim (M(v1)∩(h)) + (M(v2)∩(h))`.
    pub dims: (usize, usize),
}

impl LemmaReport {
    pub fn agree(&self) -> bool {
        self.condition == self.intersection
    }
}

/// Both sides of the equivalence between the `J`-ideal condition and the
/// distributivity of `(h)` over `M(v1) + M(v2)`, at one truncation.
pub fn check_lemma_equivalence(
    sys: &ValuationSystem,
    h: &Polynomial,
    v1: &ValueTuple,
    v2: &ValueTuple,
    trunc: Option<&ValueTuple>,
) -> Result<LemmaReport> {
    let (t, _) = resolve_truncation(sys, h, v1, v2, trunc)?;
    let model = TruncatedIdeal::new(sys, h, &t)?;
    lemma_report(&model, v1, v2)
}

fn lemma_report(model: &TruncatedIdeal, v1: &ValueTuple, v2: &ValueTuple) -> Result<LemmaReport> {
    let excess = model.condition_excess(v1, v2)?;
    let (lhs, rhs) = model.lemma_sides(v1, v2)?;
    Ok(LemmaReport {
        condition: Verdict::from_excess(excess),
        intersection: Verdict::from_excess((lhs - rhs) as u64),
        truncation: model.truncation().clone(),
        dims: (lhs, rhs),
    })
}

/// Outcome of sweeping every pair `(v1, v2)` in `[0, bound]^r`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GridReport {
    pub pairs: usize,
    pub violations: Vec<(ValueTuple, ValueTuple)>,
    pub disagreements: Vec<(ValueTuple, ValueTuple)>,
}

/// Checks the condition (and, when `with_lemma`, both lemma sides) on all
/// pairs of a cube, inside the single truncation `bound + q + 1`.
///
/// Per-level data is computed once per cube point: `J(v1) ∩ J(v2)` only
/// needs the ranks at `v1`, `v2`, `max(v1, v2)` and at the union of the two
/// coordinate subspaces, and the lemma side needs bases of `M(v) ∩ (h)`.
pub fn condition_grid(
    sys: &ValuationSystem,
    h: &Polynomial,
    bound: u32,
    with_lemma: bool,
    exec: Exec,
) -> Result<GridReport> {
    check_germ(sys, h)?;
    check_scope(sys)?;
    let r = sys.rank();
    let q = value_tuple(sys, h)?;
    let top = ValueTuple::new(vec![i64::from(bound); r]);
    let model = TruncatedIdeal::new(sys, h, &required_truncation(&top, &top, &q))?;
    let cube = CoefficientBox::cube(r, bound);
    let n = cube.len();
    let levels: Vec<Vec<i64>> = (0..n).map(|i| cube.point(i).into_iter().map(i64::from).collect()).collect();
    let columns: Vec<Vec<bool>> = levels.iter().map(|v| model.columns_of(&[v])).collect();
    let ranks: Vec<usize> = map_indexed(exec, n, |i| model.rank_off(&columns[i]));
    let meets: Vec<Vec<Vec<BigInt>>> =
        if with_lemma { map_indexed(exec, n, |i| model.meet_coordinates(&columns[i])) } else { Vec::new() };
    let small_meets: Option<Vec<Vec<Vec<i128>>>> = meets
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>()).collect())
        .collect();
    let stacked_rank = |i: usize, j: usize| -> usize {
        if let Some(small) = &small_meets {
            let both: Vec<Vec<i128>> = small[i].iter().chain(&small[j]).cloned().collect();
            if let Some(r) = linalg::rank_i128(both) {
                return r;
            }
        }
        let both: Vec<Vec<BigInt>> = meets[i].iter().chain(&meets[j]).cloned().collect();
        linalg::rank(&both)
    };
    // Everything below is symmetric in (v1, v2): evaluate i <= j only.
    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let half = map_indexed(exec, upper.len(), |k| {
        let (i, j) = upper[k];
        let union: Vec<bool> = columns[i].iter().zip(&columns[j]).map(|(a, b)| *a || *b).collect();
        let top: Vec<u32> = levels[i].iter().zip(&levels[j]).map(|(a, b)| (*a).max(*b) as u32).collect();
        let r_union = model.rank_off(&union);
        let r_max = ranks[cube.index(&top).expect("inside cube")];
        let violated = ranks[i] + ranks[j] > r_union + r_max;
        let disagrees = with_lemma && ((model.ideal_dim() - r_union > stacked_rank(i, j)) != violated);
        (violated, disagrees)
    });
    let mut results = vec![(false, false); n * n];
    for (&(i, j), r) in upper.iter().zip(half) {
        results[i * n + j] = r;
        results[j * n + i] = r;
    }
    let tuple = |i: usize| ValueTuple::new(levels[i].clone());
    let mut report = GridReport { pairs: n * n, ..Default::default() };
    for (k, (violated, disagrees)) in results.into_iter().enumerate() {
        if violated {
            report.violations.push((tuple(k / n), tuple(k % n)));
        }
        if disagrees {
            report.disagreements.push((tuple(k / n), tuple(k % n)));
        }
    }
    Ok(report)
}

/// Two compact facets whose faces share no support monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Positions in the list of compact facets (facet order).
    pub first: usize,
    pub second: usize,
    pub first_normal: WeightVector,
    pub second_normal: WeightVector,
    /// Face part of `h` on the first facet.
    pub face_part: Polynomial,
}

impl Witness {
    /// `(nu(h_i), nu(h - h_i))`, the pair on which the condition fails.
    pub fn value_pair(&self, sys: &ValuationSystem, h: &Polynomial) -> Result<(ValueTuple, ValueTuple)> {
        Ok((value_tuple(sys, &self.face_part)?, value_tuple(sys, &(h - &self.face_part))?))
    }
}

pub fn nonbistellar_witness(h: &Polynomial) -> Result<Option<Witness>> {
    let np = newton_polyhedron(h)?;
    let compact: Vec<_> = np.compact_facets().collect();
    if compact.is_empty() {
        return Err(Error::NoCompactFacet);
    }
    let faces = compact.iter().map(|f| face_polynomial(h, &f.normal)).collect::<Result<Vec<_>>>()?;
    for i in 0..compact.len() {
        for j in i + 1..compact.len() {
            let si: BTreeSet<_> = faces[i].support().collect();
            if faces[j].support().all(|e| !si.contains(e)) {
                return Ok(Some(Witness {
                    first: i,
                    second: j,
                    first_normal: compact[i].normal.clone(),
                    second_normal: compact[j].normal.clone(),
                    face_part: faces[i].clone(),
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::as_i64;
    use crate::series::{ambient_closed_form, embedded_closed_form, expand};
    use proptest::prelude::*;

    fn sys(rows: &[&[u32]]) -> ValuationSystem {
        ValuationSystem::from_rows(rows).unwrap()
    }

    fn vt(v: &[i64]) -> ValueTuple {
        ValueTuple::new(v.to_vec())
    }

    fn poly(terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_int_terms(2, terms).unwrap()
    }

    fn e(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn bases() {
        let m = quotient_basis(&sys(&[&[2, 3]]), &vt(&[4])).unwrap();
        assert_eq!(m.basis(), &[e(&[0, 0]), e(&[0, 1]), e(&[1, 0])]);
        assert_eq!(codim_m(&sys(&[&[1, 1]]), &vt(&[3])).unwrap(), 6);
        assert_eq!(codim_m(&sys(&[&[2, 3], &[4, 3]]), &vt(&[0, 0])).unwrap(), 0);
        assert_eq!(codim_m(&sys(&[&[1, 1]]), &vt(&[-2])).unwrap(), 0);
        assert_eq!(codim_m(&sys(&[&[1, 0]]), &vt(&[2])), Err(Error::OutOfOracleScope(0)));
        assert_eq!(m.position(&e(&[1, 0])), Some(2));
    }

    #[test]
    fn ideal_codimensions() {
        let xy = poly(&[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(codim_j(&sys(&[&[1, 1]]), &xy, &vt(&[2])).unwrap(), 2);
        assert_eq!(codim_j(&sys(&[&[1, 1]]), &xy, &vt(&[1])).unwrap(), 1);
        let cusp = poly(&[(&[2, 0], 1), (&[0, 3], 1)]);
        assert_eq!(codim_j(&sys(&[&[2, 3]]), &cusp, &vt(&[1])).unwrap(), 1);
        let unit = poly(&[(&[0, 0], 1), (&[1, 0], 1)]);
        assert_eq!(codim_j(&sys(&[&[1, 1]]), &unit, &vt(&[1])), Err(Error::UnitGerm));
    }

    #[test]
    fn coefficients() {
        let xy = poly(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let s = sys(&[&[1, 1]]);
        assert_eq!(embedded_coefficient(&s, &xy, &vt(&[1])).unwrap(), 1);
        assert_eq!(embedded_coefficient(&s, &xy, &vt(&[0])).unwrap(), 1);
        for k in 0..6 {
            assert_eq!(ambient_coefficient(&s, &vt(&[k])).unwrap(), k + 1);
        }
        let ex1 = poly(&[(&[6, 2], 1), (&[0, 8], 1)]);
        let s2 = sys(&[&[2, 3], &[4, 3]]);
        assert_eq!(embedded_coefficient(&s2, &ex1, &vt(&[20, 28])).unwrap(), 0);
        assert_eq!(embedded_coefficient(&s2, &ex1, &vt(&[0, 0])).unwrap(), 1);
    }

    #[test]
    fn series_against_closed_forms() {
        let cusp = poly(&[(&[2, 0], 1), (&[0, 3], 1)]);
        let s = sys(&[&[3, 2]]);
        let b = CoefficientBox::cube(1, 12);
        let lhs = oracle_series(&s, &cusp, &b, Exec::Sequential).unwrap();
        let rhs = expand(&embedded_closed_form(&s, &cusp).unwrap(), &b, Exec::Sequential).unwrap();
        assert_eq!(lhs, rhs);

        let x = poly(&[(&[1, 0], 1)]);
        let t = oracle_series(&sys(&[&[1, 1]]), &x, &CoefficientBox::cube(1, 5), Exec::Parallel).unwrap();
        assert!(t.coefficients().iter().all(|c| as_i64(c) == Some(1)));

        let amb = ambient_oracle_series(&sys(&[&[2, 3]]), &CoefficientBox::cube(1, 6), Exec::Sequential).unwrap();
        let got: Vec<i64> = amb.coefficients().iter().map(|c| as_i64(c).unwrap()).collect();
        assert_eq!(got, vec![1, 0, 1, 1, 1, 1, 2]);
        let amb2 = ambient_closed_form(&sys(&[&[2, 3]])).unwrap();
        assert_eq!(amb, expand(&amb2, &CoefficientBox::cube(1, 6), Exec::Sequential).unwrap());
    }

    #[test]
    fn rank_one_is_always_consistent() {
        let cusp = poly(&[(&[2, 0], 1), (&[0, 3], 1)]);
        let s = sys(&[&[3, 2]]);
        for (a, b) in [(0, 0), (3, 7), (6, 2), (9, 9)] {
            let rep = check_condition(&s, &cusp, &vt(&[a]), &vt(&[b]), None).unwrap();
            assert_eq!(rep.verdict, Verdict::ConsistentAtTruncation);
            assert_eq!(rep.levels.len(), 1);
        }
    }

    fn three_facets() -> Polynomial {
        poly(&[(&[6, 0], 1), (&[4, 1], 1), (&[1, 3], 1), (&[0, 5], 1)])
    }

    #[test]
    fn witness_pair_is_violated() {
        let h = three_facets();
        let w = nonbistellar_witness(&h).unwrap().unwrap();
        assert_eq!((w.first, w.second), (0, 1));
        assert_eq!(w.first_normal.entries(), &[1, 2]);
        assert_eq!(w.second_normal.entries(), &[2, 1]);
        assert_eq!(w.face_part, poly(&[(&[6, 0], 1), (&[4, 1], 1)]));

        let s = sys(&[&[1, 2], &[2, 3], &[2, 1]]);
        let (v1, v2) = w.value_pair(&s, &h).unwrap();
        assert_eq!(v1, vt(&[6, 11, 9]));
        assert_eq!(v2, vt(&[7, 11, 5]));
        let rep = check_condition(&s, &h, &v1, &v2, None).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
        assert_eq!(rep.levels.len(), 1 + ESCALATIONS);
        assert_eq!(rep.levels[0], vt(&[14, 23, 15]));

        let lemma = check_lemma_equivalence(&s, &h, &v1, &v2, None).unwrap();
        assert_eq!(lemma.condition, Verdict::Violated);
        assert!(lemma.agree());
    }

    #[test]
    fn witnesses_absent_when_bistellar() {
        assert_eq!(nonbistellar_witness(&poly(&[(&[4, 0], 1), (&[2, 1], 1), (&[0, 3], 1)])).unwrap(), None);
        assert_eq!(nonbistellar_witness(&poly(&[(&[2, 0], 1), (&[0, 3], 1)])).unwrap(), None);
        assert_eq!(nonbistellar_witness(&poly(&[(&[2, 2], 1)])), Err(Error::NoCompactFacet));
    }

    #[test]
    fn bistellar_small_grid() {
        let h = poly(&[(&[4, 0], 1), (&[2, 1], 1), (&[0, 3], 1)]);
        let s = sys(&[&[1, 1], &[1, 2]]);
        let rep = condition_grid(&s, &h, 4, true, Exec::Parallel).unwrap();
        assert_eq!(rep.pairs, 625);
        assert!(rep.violations.is_empty());
        assert!(rep.disagreements.is_empty());
    }

    #[test]
    fn equal_levels_hold() {
        let h = three_facets();
        let s = sys(&[&[1, 2], &[2, 3], &[2, 1]]);
        let v = vt(&[6, 11, 9]);
        let rep = check_lemma_equivalence(&s, &h, &v, &v, None).unwrap();
        assert_eq!(rep.condition, Verdict::ConsistentAtTruncation);
        assert!(rep.agree());
    }

    #[test]
    fn small_truncation_is_rejected() {
        let h = three_facets();
        let s = sys(&[&[1, 2], &[2, 3], &[2, 1]]);
        let r = check_condition(&s, &h, &vt(&[6, 11, 9]), &vt(&[7, 11, 5]), Some(&vt(&[10, 10, 10])));
        assert!(matches!(r, Err(Error::TruncationTooSmall { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn codimensions_are_monotone(
            w in prop::collection::vec(0i64..8, 2),
            bump in 0usize..2,
            a in 1u32..4, b in 1u32..4,
        ) {
            let s = sys(&[&[a, b], &[b, a]]);
            let h = poly(&[(&[2, 1], 1), (&[0, 3], -2)]);
            let mut w2 = w.clone();
            w2[bump] += 1;
            prop_assert!(codim_m(&s, &vt(&w)).unwrap() <= codim_m(&s, &vt(&w2)).unwrap());
            prop_assert!(codim_j(&s, &h, &vt(&w)).unwrap() <= codim_j(&s, &h, &vt(&w2)).unwrap());
        }

        #[test]
        fn codim_j_ignores_far_multipliers(w in prop::collection::vec(0i64..9, 2)) {
            // Multipliers beyond the finite set only contribute rows inside M(w).
            let s = sys(&[&[2, 3], &[4, 3]]);
            let h = poly(&[(&[6, 2], 1), (&[0, 8], 1)]);
            let model = quotient_basis(&s, &vt(&w)).unwrap();
            let q = value_tuple(&s, &h).unwrap();
            let big = quotient_basis(&s, &vt(&[w[0] + 6, w[1] + 6])).unwrap();
            let terms = h.primitive_integer_terms();
            let mut rows = ideal_rows(&model, &h, &q).unwrap();
            let base = linalg::rank(&rows);
            for a in big.basis() {
                let mut row = vec![BigInt::zero(); model.len()];
                for (e, c) in &terms {
                    if let Some(i) = model.position(&a.add(e)) { row[i] += c; }
                }
                rows.push(row);
            }
            prop_assert_eq!(linalg::rank(&rows), base);
        }
    }
}

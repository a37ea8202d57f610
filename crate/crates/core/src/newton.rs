//! Newton polyhedra `conv(supp h) + R^d_{>=0}`: facets, facet valuations,
//! the stellar and bi-stellar predicates, face parts and halfspace
//! reconstruction.
//!
//! Facets are found by exact enumeration: every facet contains a point of the
//! support and is spanned by `d - 1` independent directions taken from the
//! support differences and the recession rays `e_i`. Each candidate normal is
//! made primitive and kept when it supports the whole polyhedron.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{dot, ExponentVector, Polynomial, Rational, ValuationSystem, WeightVector};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Primitive inward normal.
    pub normal: WeightVector,
    /// Minimum of `<normal, .>` over the polyhedron.
    pub offset: i64,
    /// Indices into [`NewtonPolyhedron::vertices`] lying on the facet.
    pub vertex_ids: Vec<usize>,
    pub compact: bool,
}

impl Facet {
    pub fn halfspace(&self) -> Halfspace {
        Halfspace { normal: self.normal.clone(), offset: self.offset }
    }
}

/// `{x : <normal, x> >= offset}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: WeightVector,
    pub offset: i64,
}

impl Halfspace {
    pub fn new(normal: &[u32], offset: i64) -> Result<Self> {
        Ok(Halfspace { normal: WeightVector::new(normal.to_vec())?, offset })
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>={}", self.normal, self.offset)
    }
}

/// Valuation system formed by the normals of a list of halfspaces.
pub fn halfspace_system(rows: &[Halfspace]) -> Result<ValuationSystem> {
    ValuationSystem::new(rows.iter().map(|h| h.normal.clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    dim: usize,
    vertices: Vec<ExponentVector>,
    facets: Vec<Facet>,
}

impl NewtonPolyhedron {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme points, sorted lexicographically.
    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    /// All facets, sorted by normal then offset.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn compact_facets(&self) -> impl Iterator<Item = &Facet> + '_ {
        self.facets.iter().filter(|f| f.compact)
    }

    pub fn has_compact_facet(&self) -> bool {
        self.facets.iter().any(|f| f.compact)
    }

    /// Whether the lattice point lies in the polyhedron.
    pub fn contains(&self, e: &ExponentVector) -> bool {
        self.facets.iter().all(|f| dot(f.normal.entries(), e.entries()) >= f.offset)
    }
}

impl fmt::Display for NewtonPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices:")?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        for facet in &self.facets {
            let ids: Vec<String> = facet.vertex_ids.iter().map(|&i| self.vertices[i].to_string()).collect();
            writeln!(
                f,
                "facet normal {} offset {} {} [{}]",
                facet.normal,
                facet.offset,
                if facet.compact { "compact" } else { "non-compact" },
                ids.join(" ")
            )?;
        }
        Ok(())
    }
}

pub fn newton_polyhedron(p: &Polynomial) -> Result<NewtonPolyhedron> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let points: Vec<Vec<i64>> = p.support().map(|e| e.as_i64()).collect();
    Ok(hull_of_points(p.dim(), &points))
}

/// Newton polyhedron of an arbitrary nonempty set of lattice points in the
/// orthant.
pub(crate) fn hull_of_points(dim: usize, points: &[Vec<i64>]) -> NewtonPolyhedron {
    let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut found: BTreeSet<(Vec<u32>, i64)> = BTreeSet::new();

    if dim == 1 {
        let min = pts.iter().map(|p| p[0]).min().expect("nonempty support");
        found.insert((vec![1], min));
    } else {
        let units: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        for base in &pts {
            let mut dirs: Vec<Vec<i64>> =
                pts.iter().filter(|p| *p != base).map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            dirs.extend(units.iter().cloned());
            for subset in linalg::combinations(dirs.len(), dim - 1) {
                let chosen: Vec<Vec<i64>> = subset.iter().map(|&i| dirs[i].clone()).collect();
                let Some(normal) = primitive_nonnegative(&linalg::cross(&chosen, dim)) else {
                    continue;
                };
                let offset = dot_i64(&normal, base);
                if pts.iter().all(|p| dot_i64(&normal, p) >= offset) {
                    found.insert((normal, offset));
                }
            }
        }
    }

    let planes: Vec<(Vec<u32>, i64)> = found.into_iter().collect();
    let vertices: Vec<Vec<i64>> = pts
        .iter()
        .filter(|p| {
            let tight: Vec<Vec<BigInt>> = planes
                .iter()
                .filter(|(n, o)| dot_i64(n, p) == *o)
                .map(|(n, _)| n.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            linalg::rank(&tight) == dim
        })
        .cloned()
        .collect();

    let facets = planes
        .into_iter()
        .map(|(normal, offset)| {
            let vertex_ids =
                vertices.iter().enumerate().filter(|(_, v)| dot_i64(&normal, v) == offset).map(|(i, _)| i).collect();
            let compact = normal.iter().all(|&a| a > 0);
            Facet { normal: WeightVector::new(normal).expect("nonzero normal"), offset, vertex_ids, compact }
        })
        .collect();

    NewtonPolyhedron {
        dim,
        vertices: vertices
            .into_iter()
            .map(|v| ExponentVector::new(v.into_iter().map(|x| x as u32).collect()))
            .collect(),
        facets,
    }
}

fn dot_i64(n: &[u32], p: &[i64]) -> i64 {
    n.iter().zip(p).map(|(&a, &b)| a as i64 * b).sum()
}

/// Primitive representative with nonnegative entries of `v` or `-v`; `None`
/// for zero vectors and for vectors with mixed signs.
fn primitive_nonnegative(v: &[BigInt]) -> Option<Vec<u32>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let sign = if v.iter().all(|x| !x.is_negative()) {
        BigInt::from(1)
    } else if v.iter().all(|x| !x.is_positive()) {
        BigInt::from(-1)
    } else {
        return None;
    };
    let g = v.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    v.iter().map(|x| (x * &sign / &g).to_u32()).collect()
}

/// One `(normal, offset)` pair per facet in lexicographic order of normals.
pub fn facet_valuations(np: &NewtonPolyhedron, include_noncompact: bool) -> Vec<Halfspace> {
    np.facets.iter().filter(|f| include_noncompact || f.compact).map(Facet::halfspace).collect()
}

fn compact_vertex_sets(np: &NewtonPolyhedron) -> Result<Vec<BTreeSet<usize>>> {
    let sets: Vec<BTreeSet<usize>> = np.compact_facets().map(|f| f.vertex_ids.iter().copied().collect()).collect();
    if sets.is_empty() {
        return Err(Error::NoCompactFacet);
    }
    Ok(sets)
}

/// All compact facets share a vertex.
pub fn is_stellar(np: &NewtonPolyhedron) -> Result<bool> {
    let sets = compact_vertex_sets(np)?;
    let mut common = sets[0].clone();
    for s in &sets[1..] {
        common = common.intersection(s).copied().collect();
    }
    Ok(!common.is_empty())
}

/// Every two compact facets meet. Faces of a pointed polyhedron meet iff
/// they share a vertex, so vertex sets decide it.
pub fn is_bistellar(np: &NewtonPolyhedron) -> Result<bool> {
    let sets = compact_vertex_sets(np)?;
    Ok(sets.iter().enumerate().all(|(i, a)| sets[i + 1..].iter().all(|b| !a.is_disjoint(b))))
}

/// Terms of `p` on which `w` attains its minimum over the support.
pub fn face_polynomial(p: &Polynomial, w: &WeightVector) -> Result<Polynomial> {
    check_dim(w.dim(), p.dim())?;
    let Some(min) = p.support().map(|e| dot(w.entries(), e.entries())).min() else {
        return Ok(p.clone());
    };
    Ok(p.filter_terms(|e| dot(w.entries(), e.entries()) == min))
}

/// Terms whose exponents vanish outside `axes` (0-based variable indices),
/// re-expressed in `axes.len()` variables.
pub fn restrict_to_axes(p: &Polynomial, axes: &[usize]) -> Result<Polynomial> {
    if axes.is_empty() {
        return Err(Error::InvalidInput("empty coordinate subset".into()));
    }
    let set: BTreeSet<usize> = axes.iter().copied().collect();
    if set.len() != axes.len() || set.iter().any(|&i| i >= p.dim()) {
        return Err(Error::InvalidInput(format!("bad coordinate subset {axes:?}")));
    }
    let kept = p.terms().filter(|(e, _)| e.entries().iter().enumerate().all(|(i, &a)| a == 0 || set.contains(&i)));
    Polynomial::from_terms(
        set.len(),
        kept.map(|(e, c)| (ExponentVector::new(set.iter().map(|&i| e.entries()[i]).collect()), c.clone())),
    )
}

/// `{x in R^d_{>=0} : <normal_j, x> >= offset_j}` with redundant rows dropped.
pub fn polyhedron_from_halfspaces(rows: &[Halfspace]) -> Result<NewtonPolyhedron> {
    let first = rows.first().ok_or_else(|| Error::MalformedHalfspaces("no rows".into()))?;
    let dim = first.normal.dim();
    for r in rows {
        check_dim(dim, r.normal.dim())?;
        if r.offset < 0 {
            return Err(Error::MalformedHalfspaces(format!("negative offset in {r}")));
        }
    }
    // Constraints as (normal, rhs); the orthant walls come last.
    let mut constraints: Vec<(Vec<i64>, i64)> =
        rows.iter().map(|r| (r.normal.entries().iter().map(|&a| a as i64).collect(), r.offset)).collect();
    for i in 0..dim {
        constraints.push(((0..dim).map(|j| i64::from(i == j)).collect(), 0));
    }

    let mut vertices: BTreeSet<Vec<i64>> = BTreeSet::new();
    for subset in linalg::combinations(constraints.len(), dim) {
        let m: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| constraints[i].0.iter().map(|&a| Rational::from_integer(a.into())).collect())
            .collect();
        let b: Vec<Rational> = subset.iter().map(|&i| Rational::from_integer(constraints[i].1.into())).collect();
        let Some(x) = linalg::solve(&m, &b) else {
            continue;
        };
        let feasible = constraints.iter().all(|(n, rhs)| {
            let lhs =
                n.iter().zip(&x).fold(Rational::zero(), |acc, (a, xi)| acc + Rational::from_integer((*a).into()) * xi);
            lhs >= Rational::from_integer((*rhs).into())
        });
        if !feasible {
            continue;
        }
        if x.iter().any(|xi| !xi.is_integer()) {
            let shown: Vec<String> = x.iter().map(|xi| xi.to_string()).collect();
            return Err(Error::NonLatticeVertex(format!("({})", shown.join(","))));
        }
        vertices.insert(x.iter().map(|xi| xi.to_integer().to_i64().expect("vertex fits i64")).collect());
    }
    if vertices.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let pts: Vec<Vec<i64>> = vertices.into_iter().collect();
    Ok(hull_of_points(dim, &pts))
}

/// Same vertices and the same (normal, offset) facets.
pub fn equal_polyhedra(a: &NewtonPolyhedron, b: &NewtonPolyhedron) -> bool {
    let key = |np: &NewtonPolyhedron| -> BTreeMap<(WeightVector, i64), bool> {
        np.facets.iter().map(|f| ((f.normal.clone(), f.offset), f.compact)).collect()
    };
    a.dim == b.dim && a.vertices == b.vertices && key(a) == key(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::value_tuple;
    use proptest::prelude::*;

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_int_terms(dim, terms).unwrap()
    }

    fn hs(n: &[u32], o: i64) -> Halfspace {
        Halfspace::new(n, o).unwrap()
    }

    fn normals(np: &NewtonPolyhedron) -> Vec<(Vec<u32>, i64, bool)> {
        np.facets().iter().map(|f| (f.normal.entries().to_vec(), f.offset, f.compact)).collect()
    }

    pub(crate) fn ex1() -> Polynomial {
        poly(2, &[(&[6, 2], 1), (&[0, 8], 1)])
    }
    pub(crate) fn cusp() -> Polynomial {
        poly(2, &[(&[2, 0], 1), (&[0, 3], 1)])
    }
    pub(crate) fn bistellar() -> Polynomial {
        poly(2, &[(&[4, 0], 1), (&[2, 1], 1), (&[0, 3], 1)])
    }
    pub(crate) fn three_facets() -> Polynomial {
        poly(2, &[(&[6, 0], 1), (&[4, 1], 1), (&[1, 3], 1), (&[0, 5], 1)])
    }

    #[test]
    fn example_polyhedra() {
        let np = newton_polyhedron(&ex1()).unwrap();
        assert_eq!(np.vertices(), &[ExponentVector::new(vec![0, 8]), ExponentVector::new(vec![6, 2])]);
        assert_eq!(normals(&np), vec![(vec![0, 1], 2, false), (vec![1, 0], 0, false), (vec![1, 1], 8, true)]);

        let np = newton_polyhedron(&cusp()).unwrap();
        assert_eq!(np.vertices().len(), 2);
        assert_eq!(normals(&np), vec![(vec![0, 1], 0, false), (vec![1, 0], 0, false), (vec![3, 2], 6, true)]);

        let np = newton_polyhedron(&poly(1, &[(&[1], 1)])).unwrap();
        assert_eq!(np.vertices(), &[ExponentVector::new(vec![1])]);
        assert_eq!(normals(&np), vec![(vec![1], 1, true)]);

        assert_eq!(newton_polyhedron(&Polynomial::zero(2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let np = newton_polyhedron(&poly(2, &[(&[2, 0], 1), (&[0, 3], 1), (&[2, 2], 1), (&[1, 2], 1)])).unwrap();
        assert_eq!(np.vertices().len(), 2);
        let three = newton_polyhedron(&three_facets()).unwrap();
        assert_eq!(three.vertices().len(), 4);
        let compact: Vec<Vec<u32>> = three.compact_facets().map(|f| f.normal.entries().to_vec()).collect();
        assert_eq!(compact, vec![vec![1, 2], vec![2, 1], vec![2, 3]]);
    }

    #[test]
    fn facet_valuation_lists() {
        let np = newton_polyhedron(&cusp()).unwrap();
        assert_eq!(facet_valuations(&np, false), vec![hs(&[3, 2], 6)]);
        assert_eq!(facet_valuations(&np, true), vec![hs(&[0, 1], 0), hs(&[1, 0], 0), hs(&[3, 2], 6)]);
        let np = newton_polyhedron(&ex1()).unwrap();
        assert_eq!(facet_valuations(&np, true), vec![hs(&[0, 1], 2), hs(&[1, 0], 0), hs(&[1, 1], 8)]);
    }

    #[test]
    fn stellar_predicates() {
        let c = newton_polyhedron(&cusp()).unwrap();
        let b = newton_polyhedron(&bistellar()).unwrap();
        let t = newton_polyhedron(&three_facets()).unwrap();
        assert!(is_stellar(&c).unwrap());
        assert!(is_stellar(&b).unwrap());
        assert!(!is_stellar(&t).unwrap());
        assert!(is_bistellar(&c).unwrap());
        assert!(is_bistellar(&b).unwrap());
        assert!(!is_bistellar(&t).unwrap());
        let orthant = newton_polyhedron(&poly(2, &[(&[1, 1], 1)])).unwrap();
        assert_eq!(is_stellar(&orthant), Err(Error::NoCompactFacet));
        assert_eq!(is_bistellar(&orthant), Err(Error::NoCompactFacet));
    }

    #[test]
    fn face_parts() {
        let w = WeightVector::new(vec![1, 2]).unwrap();
        assert_eq!(face_polynomial(&three_facets(), &w).unwrap(), poly(2, &[(&[6, 0], 1), (&[4, 1], 1)]));
        let w = WeightVector::new(vec![3, 2]).unwrap();
        assert_eq!(face_polynomial(&cusp(), &w).unwrap(), cusp());
        let x = poly(3, &[(&[1, 0, 0], 1)]);
        let w = WeightVector::new(vec![1, 0, 0]).unwrap();
        assert_eq!(face_polynomial(&x, &w).unwrap(), x);
    }

    #[test]
    fn axis_restrictions() {
        assert_eq!(restrict_to_axes(&cusp(), &[0]).unwrap(), poly(1, &[(&[2], 1)]));
        assert_eq!(restrict_to_axes(&cusp(), &[1]).unwrap(), poly(1, &[(&[3], 1)]));
        assert!(restrict_to_axes(&ex1(), &[0]).unwrap().is_zero());
        assert!(restrict_to_axes(&ex1(), &[]).is_err());
    }

    #[test]
    fn halfspace_reconstruction() {
        let np = polyhedron_from_halfspaces(&[hs(&[3, 2], 6), hs(&[1, 0], 0), hs(&[0, 1], 0)]).unwrap();
        assert!(equal_polyhedra(&np, &newton_polyhedron(&cusp()).unwrap()));
        let np = polyhedron_from_halfspaces(&[hs(&[1, 1], 8), hs(&[1, 0], 0), hs(&[0, 1], 2)]).unwrap();
        assert!(equal_polyhedra(&np, &newton_polyhedron(&ex1()).unwrap()));
        let np =
            polyhedron_from_halfspaces(&[hs(&[1, 1, 1], 0), hs(&[1, 0, 0], 0), hs(&[0, 1, 0], 0), hs(&[0, 0, 1], 0)])
                .unwrap();
        assert_eq!(np.vertices(), &[ExponentVector::zeros(3)]);
        assert_eq!(np.facets().len(), 3);
        assert!(matches!(polyhedron_from_halfspaces(&[hs(&[2, 2], 1)]), Err(Error::NonLatticeVertex(_))));
        assert!(matches!(polyhedron_from_halfspaces(&[hs(&[1, 1], -1)]), Err(Error::MalformedHalfspaces(_))));
    }

    #[test]
    fn polyhedron_equality() {
        let a = newton_polyhedron(&cusp()).unwrap();
        let b = newton_polyhedron(&poly(2, &[(&[2, 0], 1), (&[0, 3], 1), (&[2, 2], 1)])).unwrap();
        let c = newton_polyhedron(&poly(2, &[(&[2, 0], 1), (&[0, 2], 1)])).unwrap();
        assert!(equal_polyhedra(&a, &b));
        assert!(!equal_polyhedra(&a, &c));
        assert!(equal_polyhedra(&a, &a));
    }

    #[test]
    fn three_dimensional_hull() {
        // x^2 + y^3 + z^4: one compact triangle with normal (6,4,3).
        let p = poly(3, &[(&[2, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 4], 1)]);
        let np = newton_polyhedron(&p).unwrap();
        let compact: Vec<_> = np.compact_facets().map(|f| (f.normal.entries().to_vec(), f.offset)).collect();
        assert_eq!(compact, vec![(vec![6, 4, 3], 12)]);
        assert_eq!(np.vertices().len(), 3);
        // Three walls x_i = 0 plus the triangle.
        assert_eq!(np.facets().len(), 4);
    }

    fn arb_support(dim: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(prop::collection::vec(0u32..6, dim), 1..6).prop_map(move |pts| {
            Polynomial::from_terms(
                dim,
                pts.into_iter().map(|e| (ExponentVector::new(e), Rational::from_integer(1.into()))),
            )
            .unwrap()
        })
    }

    fn check_polyhedron(p: &Polynomial) -> std::result::Result<(), TestCaseError> {
        let np = newton_polyhedron(p).unwrap();
        for f in np.facets() {
            prop_assert!(f.normal.is_primitive());
            if f.compact {
                prop_assert!(f.normal.entries().iter().all(|&a| a >= 1));
            } else {
                prop_assert!(f.normal.entries().contains(&0));
            }
            for e in p.support() {
                prop_assert!(dot(f.normal.entries(), e.entries()) >= f.offset);
            }
            let face = face_polynomial(p, &f.normal).unwrap();
            let expected: BTreeSet<_> =
                p.support().filter(|e| dot(f.normal.entries(), e.entries()) == f.offset).cloned().collect();
            prop_assert_eq!(face.support().cloned().collect::<BTreeSet<_>>(), expected);
        }
        let rows = facet_valuations(&np, true);
        let back = polyhedron_from_halfspaces(&rows).unwrap();
        prop_assert!(equal_polyhedra(&back, &np));
        let sys = halfspace_system(&rows).unwrap();
        let offsets: Vec<i64> = rows.iter().map(|r| r.offset).collect();
        let q = value_tuple(&sys, p).unwrap();
        prop_assert_eq!(q.entries(), &offsets[..]);
        if np.has_compact_facet() && is_stellar(&np).unwrap() {
            prop_assert!(is_bistellar(&np).unwrap());
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn plane_round_trip(p in arb_support(2)) { check_polyhedron(&p)?; }

        #[test]
        fn space_round_trip(p in arb_support(3)) { check_polyhedron(&p)?; }
    }
}

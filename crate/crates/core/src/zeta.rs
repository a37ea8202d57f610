//! Varchenko's zeta function of the monodromy of a nondegenerate germ, read
//! off its Newton polyhedron, and the reconstruction of the polyhedron from
//! facet valuations and a Poincaré series.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Polynomial, WeightVector};
use crate::linalg;
use crate::newton::{newton_polyhedron, polyhedron_from_halfspaces, restrict_to_axes, Halfspace, NewtonPolyhedron};
use crate::series::{extract_dominant_factor, FactoredSeries};

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Coordinates on which the affine hull of `ids` projects injectively.
fn chart(points: &[Vec<i64>], ids: &[usize], k: usize) -> Vec<usize> {
    let dim = points[ids[0]].len();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for &i in &ids[1..] {
        let e: Vec<BigInt> = sub(&points[i], &points[ids[0]]).into_iter().map(BigInt::from).collect();
        let mut trial = basis.clone();
        trial.push(e.clone());
        if linalg::rank(&trial) > basis.len() {
            basis = trial;
        }
        if basis.len() == k {
            break;
        }
    }
    linalg::combinations(dim, k)
        .into_iter()
        .find(|cols| {
            let minor: Vec<Vec<BigInt>> = basis.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            !linalg::determinant(&minor).is_zero()
        })
        .expect("independent edges have a nonzero maximal minor")
}

/// Facets of `conv(points[ids])` inside its own affine hull, as id sets.
fn relative_facets(points: &[Vec<i64>], ids: &[usize], k: usize) -> Vec<Vec<usize>> {
    let cols = chart(points, ids, k);
    let proj: Vec<Vec<i64>> = ids.iter().map(|&i| cols.iter().map(|&c| points[i][c]).collect()).collect();
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    if k == 1 {
        let lo = proj.iter().map(|p| p[0]).min().expect("nonempty");
        let hi = proj.iter().map(|p| p[0]).max().expect("nonempty");
        for end in [lo, hi] {
            out.insert(ids.iter().zip(&proj).filter(|(_, p)| p[0] == end).map(|(&i, _)| i).collect());
        }
        return out.into_iter().collect();
    }
    for subset in linalg::combinations(ids.len(), k) {
        let base = &proj[subset[0]];
        let edges: Vec<Vec<i64>> = subset[1..].iter().map(|&s| sub(&proj[s], base)).collect();
        let normal = linalg::cross(&edges, k);
        if normal.iter().all(|x| x.is_zero()) {
            continue;
        }
        let side: Vec<BigInt> =
            proj.iter().map(|p| sub(p, base).iter().zip(&normal).map(|(x, n)| BigInt::from(*x) * n).sum()).collect();
        let pos = side.iter().any(|s| *s > BigInt::zero());
        let neg = side.iter().any(|s| *s < BigInt::zero());
        if pos && neg {
            continue;
        }
        out.insert(ids.iter().zip(&side).filter(|(_, s)| s.is_zero()).map(|(&i, _)| i).collect());
    }
    out.into_iter().collect()
}

/// Pulling triangulation of `conv(points[ids])` into simplices, each given by
/// `k + 1` ids where `k` is the affine dimension.
fn triangulate(points: &[Vec<i64>], ids: &[usize]) -> Vec<Vec<usize>> {
    let pts: Vec<Vec<i64>> = ids.iter().map(|&i| points[i].clone()).collect();
    let k = linalg::affine_rank(&pts);
    if ids.len() == k + 1 {
        return vec![ids.to_vec()];
    }
    let apex = ids[0];
    let mut out = Vec::new();
    for facet in relative_facets(points, ids, k) {
        if facet.contains(&apex) {
            continue;
        }
        for mut simplex in triangulate(points, &facet) {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
    out
}

/// Normalised volume of the lattice polytope `conv(points)` in the lattice of
/// its affine hull; `1` for a point, the lattice length for a segment.
pub fn lattice_volume(points: &[Vec<i64>]) -> BigInt {
    if points.is_empty() {
        return BigInt::zero();
    }
    let dim = points[0].len();
    let ids: Vec<usize> = (0..points.len()).collect();
    triangulate(points, &ids)
        .into_iter()
        .map(|s| {
            let edges: Vec<Vec<i64>> = s[1..].iter().map(|&i| sub(&points[i], &points[s[0]])).collect();
            if edges.is_empty() {
                BigInt::from(1)
            } else {
                linalg::gcd_of_maximal_minors(&edges, dim)
            }
        })
        .sum()
}

/// `prod_{J} prod_{tau} (1 - t^{N_tau})^{(-1)^{|J|} LV(tau)}` over nonempty
/// coordinate subsets `J` and compact facets `tau` of the Newton polyhedron
/// of `h` restricted to the coordinates in `J`.
///
/// Correct only for germs nondegenerate with respect to their Newton
/// polyhedron; that is not checked.
pub fn varchenko_zeta(h: &Polynomial) -> Result<FactoredSeries> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !h.vanishes_at_origin() {
        return Err(Error::UnitGerm);
    }
    let d = h.dim();
    let mut zeta = FactoredSeries::one(1);
    for size in 1..=d {
        let sign = if size % 2 == 0 { 1 } else { -1 };
        for axes in linalg::combinations(d, size) {
            let hj = restrict_to_axes(h, &axes)?;
            if hj.is_zero() {
                continue;
            }
            let np = newton_polyhedron(&hj)?;
            for facet in np.compact_facets() {
                let pts: Vec<Vec<i64>> = facet.vertex_ids.iter().map(|&i| np.vertices()[i].as_i64()).collect();
                let lv = lattice_volume(&pts).to_i64().expect("facet volume fits");
                zeta.multiply_factor(vec![facet.offset as u32], sign * lv)?;
            }
        }
    }
    Ok(zeta)
}

/// `{x >= 0 : <nu_j, x> >= q_j}`.
pub fn recover_newton(rows: &[Halfspace]) -> Result<NewtonPolyhedron> {
    polyhedron_from_halfspaces(rows)
}

/// Takes `q` from the dominant factor of `pv` (one entry per normal in
/// `normals`), then intersects those halfspaces with the `known` ones.
pub fn recover_newton_from_series(
    pv: &FactoredSeries,
    normals: &[WeightVector],
    known: &[Halfspace],
) -> Result<NewtonPolyhedron> {
    if pv.rank() != normals.len() {
        return Err(Error::RankMismatch { expected: normals.len(), found: pv.rank() });
    }
    let (q, _) = extract_dominant_factor(pv)?;
    let mut rows: Vec<Halfspace> =
        normals.iter().zip(q.entries()).map(|(n, &o)| Halfspace { normal: n.clone(), offset: o }).collect();
    rows.extend(known.iter().cloned());
    recover_newton(&rows)
}

/// Equality of normalised single-variable factored forms.
pub fn compare_zeta(a: &FactoredSeries, b: &FactoredSeries) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{acampo_zeta, fixtures};
    use crate::lattice::{value_tuple, ValuationSystem};
    use crate::newton::{equal_polyhedra, facet_valuations};
    use proptest::prelude::*;

    fn poly(dim: usize, terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_int_terms(dim, terms).unwrap()
    }

    fn fs(fs: &[(&[u32], i64)]) -> FactoredSeries {
        FactoredSeries::from_factors(1, fs.iter().map(|(m, e)| (m.to_vec(), *e))).unwrap()
    }

    fn hs(n: &[u32], o: i64) -> Halfspace {
        Halfspace::new(n, o).unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(lattice_volume(&[vec![3, 1]]), BigInt::from(1));
        assert_eq!(lattice_volume(&[vec![2, 0], vec![0, 2]]), BigInt::from(2));
        assert_eq!(lattice_volume(&[vec![2, 0], vec![0, 3]]), BigInt::from(1));
        // Standard triangle and the facet x+y+z=2 of 2*simplex.
        assert_eq!(lattice_volume(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), BigInt::from(1));
        assert_eq!(lattice_volume(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]), BigInt::from(4));
        // Unit square in a plane of R^3: two unimodular triangles.
        let sq = [vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![1, 1, 1]];
        assert_eq!(lattice_volume(&sq), BigInt::from(2));
        // A 3x2 rectangle in R^2 with an interior point listed.
        let rect = [vec![0, 0], vec![1, 1], vec![3, 0], vec![0, 2], vec![3, 2]];
        assert_eq!(lattice_volume(&rect), BigInt::from(12));
    }

    #[test]
    fn varchenko_examples() {
        let cusp = varchenko_zeta(&poly(2, &[(&[2, 0], 1), (&[0, 3], 1)])).unwrap();
        assert_eq!(cusp, fs(&[(&[6], 1), (&[2], -1), (&[3], -1)]));
        assert!(varchenko_zeta(&poly(2, &[(&[2, 0], 1), (&[0, 2], 1)])).unwrap().is_one());
        assert_eq!(varchenko_zeta(&poly(1, &[(&[5], 1)])).unwrap(), fs(&[(&[5], -1)]));
        assert_eq!(varchenko_zeta(&poly(2, &[(&[1, 0], 1)])).unwrap(), fs(&[(&[1], -1)]));
        assert_eq!(varchenko_zeta(&poly(2, &[(&[3, 0], 1), (&[0, 3], 1)])).unwrap(), fs(&[(&[3], 1)]));
        assert_eq!(varchenko_zeta(&poly(2, &[])), Err(Error::ZeroPolynomial));
        assert_eq!(varchenko_zeta(&poly(2, &[(&[0, 0], 1), (&[1, 0], 1)])), Err(Error::UnitGerm));
    }

    #[test]
    fn surface_singularity() {
        // Three points, three segments of lattice length 2 and one triangle of
        // volume 4, all at N = 2.
        let h = poly(3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        assert_eq!(varchenko_zeta(&h).unwrap(), fs(&[(&[2], -3 + 6 - 4)]));
    }

    #[test]
    fn agrees_with_graph_formula() {
        let cusp = varchenko_zeta(&poly(2, &[(&[2, 0], 1), (&[0, 3], 1)])).unwrap();
        assert!(compare_zeta(&cusp, &acampo_zeta(&fixtures::cusp()).unwrap()));
        let a4 = varchenko_zeta(&poly(2, &[(&[2, 0], 1), (&[0, 5], 1)])).unwrap();
        assert!(compare_zeta(&a4, &acampo_zeta(&fixtures::a4()).unwrap()));
        assert!(compare_zeta(&FactoredSeries::one(1), &fs(&[(&[1], 0)])));
        assert!(!compare_zeta(&fs(&[(&[2], 1)]), &fs(&[(&[1], 2)])));
    }

    #[test]
    fn reconstruction() {
        let np = recover_newton(&[hs(&[3, 2], 6), hs(&[1, 0], 0), hs(&[0, 1], 0)]).unwrap();
        assert!(equal_polyhedra(&np, &newton_polyhedron(&poly(2, &[(&[2, 0], 1), (&[0, 3], 1)])).unwrap()));
        let np = recover_newton(&[hs(&[1, 1], 8), hs(&[1, 0], 0), hs(&[0, 1], 2)]).unwrap();
        assert!(equal_polyhedra(&np, &newton_polyhedron(&poly(2, &[(&[6, 2], 1), (&[0, 8], 1)])).unwrap()));

        let pv = fs(&[(&[6], 1), (&[2], -1), (&[3], -1)]);
        let np = recover_newton_from_series(
            &pv,
            &[WeightVector::new(vec![3, 2]).unwrap()],
            &[hs(&[1, 0], 0), hs(&[0, 1], 0)],
        )
        .unwrap();
        assert!(equal_polyhedra(&np, &newton_polyhedron(&poly(2, &[(&[2, 0], 1), (&[0, 3], 1)])).unwrap()));
    }

    fn arb_germ() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..6, 2), 1i64..4), 1..5).prop_filter_map(
            "nonzero germ",
            |ts| {
                let terms: Vec<(&[u32], i64)> = ts.iter().map(|(e, c)| (e.as_slice(), *c)).collect();
                let p = Polynomial::from_int_terms(2, &terms).ok()?;
                (!p.is_zero() && p.vanishes_at_origin()).then_some(p)
            },
        )
    }

    proptest! {
        #[test]
        fn newton_round_trip(h in arb_germ()) {
            let np = newton_polyhedron(&h).unwrap();
            let rows = facet_valuations(&np, true);
            let sys = ValuationSystem::new(rows.iter().map(|r| r.normal.clone()).collect()).unwrap();
            let q = value_tuple(&sys, &h).unwrap();
            let with_values: Vec<Halfspace> = rows.iter().zip(q.entries())
                .map(|(r, &o)| Halfspace { normal: r.normal.clone(), offset: o }).collect();
            prop_assert!(equal_polyhedra(&recover_newton(&with_values).unwrap(), &np));
        }

        #[test]
        fn segment_volume_is_lattice_length(a in 0i64..20, b in 0i64..20, c in 1i64..20, d in 0i64..20) {
            let v = lattice_volume(&[vec![a, b], vec![a + c, b + d]]);
            prop_assert_eq!(v, BigInt::from(num_integer::gcd(c, d)));
        }
    }
}

//! Plane curve data from a resolution graph: the curvette matrix
//! `M = -I^{-1}`, Poincaré series of divisorial valuations, A'Campo's zeta
//! function of the monodromy, and the recovery of `q` and the branch counts
//! `n` from an embedded series.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Rational, ValueTuple};
use crate::linalg;
use crate::series::{extract_dominant_factor, substitute_powers, FactoredSeries};

/// Dual graph of the exceptional divisors of an embedded resolution, with the
/// number of strict-transform branches meeting each divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionGraph {
    ids: Vec<String>,
    intersection: Vec<Vec<i64>>,
    arrows: Vec<u32>,
    curvettes: Vec<Vec<u64>>,
}

/// Centre of a point blow-up on an existing graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowUp {
    /// A general point of one divisor.
    Free(usize),
    /// The intersection point of two adjacent divisors.
    Satellite(usize, usize),
}

impl ResolutionGraph {
    pub fn new(ids: Vec<String>, intersection: Vec<Vec<i64>>, arrows: Vec<u32>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if ids.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidGraph("duplicate vertex id".into()));
        }
        if intersection.len() != n || intersection.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGraph(format!("intersection matrix must be {n}x{n}")));
        }
        if arrows.len() != n {
            return Err(Error::InvalidGraph("one arrow count per vertex expected".into()));
        }
        for i in 0..n {
            if intersection[i][i] > -1 {
                return Err(Error::InvalidGraph(format!("self-intersection of {} must be <= -1", ids[i])));
            }
            for j in 0..n {
                if intersection[i][j] != intersection[j][i] {
                    return Err(Error::InvalidGraph("intersection matrix is not symmetric".into()));
                }
                if i != j && !(0..=1).contains(&intersection[i][j]) {
                    return Err(Error::InvalidGraph(format!("entry ({}, {}) must be 0 or 1", ids[i], ids[j])));
                }
            }
        }
        if !connected(&intersection) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        let big: Vec<Vec<BigInt>> = intersection.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for k in 1..=n {
            let minor: Vec<Vec<BigInt>> = big[..k].iter().map(|r| r[..k].to_vec()).collect();
            let d = linalg::determinant(&minor);
            let expected_negative = k % 2 == 1;
            if d.is_zero() || d.is_negative() != expected_negative {
                return Err(Error::NotNegativeDefinite(k));
            }
        }
        let det = linalg::determinant(&big);
        if det.abs() != BigInt::from(1) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let rat: Vec<Vec<Rational>> =
            big.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
        let inv = linalg::inverse(&rat).ok_or(Error::SingularMatrix)?;
        let mut curvettes = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let m = -&inv[i][j];
                if !m.is_integer() {
                    return Err(Error::NonIntegral(format!("curvette entry ({}, {}) = {m}", ids[i], ids[j])));
                }
                match m.to_integer().to_u64() {
                    Some(v) if v > 0 => curvettes[i][j] = v,
                    _ => return Err(Error::Negative(format!("curvette entry ({}, {}) = {m}", ids[i], ids[j]))),
                }
            }
        }
        Ok(ResolutionGraph { ids, intersection, arrows, curvettes })
    }

    /// One blow-up of the origin of the plane: `I = [[-1]]`.
    pub fn single(arrows: u32) -> Self {
        ResolutionGraph::new(vec!["1".into()], vec![vec![-1]], vec![arrows]).expect("valid")
    }

    /// Graph after blowing up one more point; the new divisor gets the next
    /// numeric id and no arrows.
    pub fn blow_up(&self, at: BlowUp) -> Result<ResolutionGraph> {
        let n = self.len();
        let mut m: Vec<Vec<i64>> = self
            .intersection
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(0);
                r
            })
            .collect();
        m.push(vec![0; n + 1]);
        m[n][n] = -1;
        let touch = |m: &mut Vec<Vec<i64>>, i: usize| {
            m[i][i] -= 1;
            m[i][n] = 1;
            m[n][i] = 1;
        };
        match at {
            BlowUp::Free(i) if i < n => touch(&mut m, i),
            BlowUp::Satellite(i, j) if i < n && j < n && i != j && self.intersection[i][j] == 1 => {
                m[i][j] = 0;
                m[j][i] = 0;
                touch(&mut m, i);
                touch(&mut m, j);
            }
            _ => return Err(Error::InvalidGraph(format!("cannot blow up at {at:?}"))),
        }
        let mut ids = self.ids.clone();
        ids.push((n + 1).to_string());
        let mut arrows = self.arrows.clone();
        arrows.push(0);
        ResolutionGraph::new(ids, m, arrows)
    }

    pub fn with_arrows(&self, arrows: Vec<u32>) -> Result<ResolutionGraph> {
        ResolutionGraph::new(self.ids.clone(), self.intersection.clone(), arrows)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn intersection(&self) -> &[Vec<i64>] {
        &self.intersection
    }

    pub fn arrows(&self) -> &[u32] {
        &self.arrows
    }

    /// Vertices met by the strict transform, in vertex order.
    pub fn rees(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.arrows[i] > 0).collect()
    }

    pub fn valence(&self, i: usize) -> usize {
        (0..self.len()).filter(|&j| j != i && self.intersection[i][j] != 0).count()
    }
}

fn connected(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && m[i][j] != 0 && !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// `M = -I^{-1}`; entry `(s, t)` is the value of the divisorial valuation
/// of `E_t` on a curvette of `E_s`.
pub fn curvette_matrix(g: &ResolutionGraph) -> &[Vec<u64>] {
    &g.curvettes
}

/// `(chi(E•), chi(E°))` per vertex: the divisor minus its intersection
/// points with other divisors, and additionally minus the strict transform.
pub fn euler_numbers(g: &ResolutionGraph) -> Vec<(i64, i64)> {
    (0..g.len())
        .map(|i| {
            let bullet = 2 - g.valence(i) as i64;
            (bullet, bullet - i64::from(g.arrows[i]))
        })
        .collect()
}

/// `prod_s (1 - t^{(m_{s,j})_{j in R}})^{-chi(E•_s)}`.
pub fn ambient_series_from_graph(g: &ResolutionGraph, subset: &[usize]) -> Result<FactoredSeries> {
    if subset.is_empty() {
        return Err(Error::EmptySystem);
    }
    if let Some(&j) = subset.iter().find(|&&j| j >= g.len()) {
        return Err(Error::InvalidGraph(format!("no vertex at position {j}")));
    }
    let mut f = FactoredSeries::one(subset.len());
    for (s, (bullet, _)) in euler_numbers(g).into_iter().enumerate() {
        let m = subset.iter().map(|&j| g.curvettes[s][j] as u32).collect();
        f.multiply_factor(m, -bullet)?;
    }
    Ok(f)
}

/// `q_i = sum_j n_j m_{i,j}` for `i` in `subset`.
pub fn q_vector(g: &ResolutionGraph, subset: &[usize]) -> ValueTuple {
    ValueTuple::new(subset.iter().map(|&i| total_multiplicity(g, i) as i64).collect())
}

fn total_multiplicity(g: &ResolutionGraph, i: usize) -> u64 {
    (0..g.len()).map(|j| u64::from(g.arrows[j]) * g.curvettes[i][j]).sum()
}

/// `(1 - t^q) * ambient_series_from_graph(g, rees)`.
pub fn embedded_series_from_graph(g: &ResolutionGraph) -> Result<FactoredSeries> {
    let rees = g.rees();
    if rees.is_empty() {
        return Err(Error::NoReesVertex);
    }
    let mut f = ambient_series_from_graph(g, &rees)?;
    f.multiply_factor(q_vector(g, &rees).entries().iter().map(|&x| x as u32).collect(), 1)?;
    Ok(f)
}

/// A'Campo's formula `prod_s (1 - t^{q_s})^{-chi(E°_s)}` with `q_s` the
/// multiplicity of the total transform along `E_s`.
pub fn acampo_zeta(g: &ResolutionGraph) -> Result<FactoredSeries> {
    if g.rees().is_empty() {
        return Err(Error::NoReesVertex);
    }
    let mut f = FactoredSeries::one(1);
    for (s, (_, circ)) in euler_numbers(g).into_iter().enumerate() {
        f.multiply_factor(vec![total_multiplicity(g, s) as u32], -circ)?;
    }
    Ok(f)
}

/// `P_V(t^{n_1}, ..., t^{n_r}) * prod_j (1 - t^{q_j})^{n_j} / (1 - t^{sum n_j q_j})`.
pub fn zeta_from_embedded(pv: &FactoredSeries, n: &[u32], q: &ValueTuple) -> Result<FactoredSeries> {
    if q.rank() != n.len() {
        return Err(Error::RankMismatch { expected: n.len(), found: q.rank() });
    }
    let mut f = substitute_powers(pv, n)?;
    let mut total = 0u32;
    for (&nj, &qj) in n.iter().zip(q.entries()) {
        let qj = u32::try_from(qj).map_err(|_| Error::Negative(format!("q entry {qj}")))?;
        if qj == 0 {
            return Err(Error::ZeroExponentFactor);
        }
        f.multiply_factor(vec![qj], i64::from(nj))?;
        total += nj * qj;
    }
    f.multiply_factor(vec![total], -1)?;
    Ok(f)
}

/// Reads off `q` as the strictly dominant numerator factor of `pv` and
/// solves `M_R n = q` over the Rees vertices of `g`.
pub fn extract_and_recover(pv: &FactoredSeries, g: &ResolutionGraph) -> Result<(ValueTuple, Vec<u32>)> {
    let rees = g.rees();
    if rees.is_empty() {
        return Err(Error::NoReesVertex);
    }
    if pv.rank() != rees.len() {
        return Err(Error::RankMismatch { expected: rees.len(), found: pv.rank() });
    }
    let (q, _) = extract_dominant_factor(pv)?;
    let qm: Vec<u32> = q.entries().iter().map(|&x| x as u32).collect();
    for (m, _) in pv.factors() {
        if m != qm.as_slice() && !qm.iter().zip(m).all(|(a, b)| a > b) {
            return Err(Error::DominanceTie { dominant: qm.clone(), other: m.to_vec() });
        }
    }
    let mr: Vec<Vec<Rational>> = rees
        .iter()
        .map(|&i| rees.iter().map(|&j| Rational::from_integer(g.curvettes[i][j].into())).collect())
        .collect();
    let rhs: Vec<Rational> = q.entries().iter().map(|&x| Rational::from_integer(x.into())).collect();
    let sol = linalg::solve(&mr, &rhs).ok_or(Error::SingularMatrix)?;
    let mut n = Vec::with_capacity(sol.len());
    for x in sol {
        if !x.is_integer() {
            return Err(Error::NonIntegral(format!("branch count {x}")));
        }
        match x.to_integer().to_u32() {
            Some(v) => n.push(v),
            None => return Err(Error::Negative(format!("branch count {x}"))),
        }
    }
    Ok((q, n))
}

//! JSON exchange formats for graphs, factored series and semigroup
//! presentations, plus the plain-text shapes shared by every report.

use std::collections::BTreeMap;

use poincare_core::{
    Binomial, ExponentVector, FactoredSeries, NewtonPolyhedron, Rational, ResolutionGraph, SemigroupPresentation,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub intersection_matrix: Vec<Vec<i64>>,
    /// Branch counts by vertex id; vertices without arrows may be omitted.
    #[serde(default)]
    pub arrows: BTreeMap<String, u32>,
}

impl GraphFile {
    pub fn from_graph(g: &ResolutionGraph) -> Self {
        GraphFile {
            vertices: g.ids().to_vec(),
            intersection_matrix: g.intersection().to_vec(),
            arrows: g.ids().iter().zip(g.arrows()).filter(|(_, &a)| a > 0).map(|(id, &a)| (id.clone(), a)).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<ResolutionGraph, String> {
        if let Some(id) = self.arrows.keys().find(|id| !self.vertices.contains(id)) {
            return Err(format!("arrow on unknown vertex `{id}`"));
        }
        let arrows = self.vertices.iter().map(|v| self.arrows.get(v).copied().unwrap_or(0)).collect();
        ResolutionGraph::new(self.vertices.clone(), self.intersection_matrix.clone(), arrows).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub m: Vec<u32>,
    pub e: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub factors: Vec<FactorEntry>,
    #[serde(default = "one")]
    pub scalar: String,
    /// Only needed when there are no factors to read the rank from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

fn one() -> String {
    "1".to_string()
}

impl SeriesFile {
    pub fn from_series(f: &FactoredSeries) -> Self {
        SeriesFile {
            factors: f.ordered_factors().into_iter().map(|(m, e)| FactorEntry { m: m.to_vec(), e }).collect(),
            scalar: f.scalar().to_string(),
            rank: (f.num_factors() == 0).then_some(f.rank()),
        }
    }

    pub fn to_series(&self) -> Result<FactoredSeries, String> {
        let rank = match (self.factors.first(), self.rank) {
            (Some(first), Some(r)) if first.m.len() != r => {
                return Err(format!("rank {r} but factor {:?} has {} entries", first.m, first.m.len()))
            }
            (Some(first), _) => first.m.len(),
            (None, r) => r.unwrap_or(1),
        };
        let scalar: Rational = self.scalar.parse().map_err(|_| format!("invalid scalar `{}`", self.scalar))?;
        FactoredSeries::from_factors(rank, self.factors.iter().map(|f| (f.m.clone(), f.e)))
            .map(|s| s.with_scalar(scalar))
            .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinomialEntry {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub d: usize,
    pub generators: Vec<Vec<i64>>,
    pub binomials: Vec<BinomialEntry>,
}

impl PresentationFile {
    pub fn from_presentation(sp: &SemigroupPresentation) -> Self {
        PresentationFile {
            d: sp.d(),
            generators: sp.generators().to_vec(),
            binomials: sp
                .binomials()
                .iter()
                .map(|b| BinomialEntry { alpha: b.alpha.entries().to_vec(), beta: b.beta.entries().to_vec() })
                .collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<SemigroupPresentation, String> {
        let binomials = self
            .binomials
            .iter()
            .map(|b| Binomial {
                alpha: ExponentVector::new(b.alpha.clone()),
                beta: ExponentVector::new(b.beta.clone()),
            })
            .collect();
        SemigroupPresentation::new(self.d, self.generators.clone(), binomials).map_err(|e| e.to_string())
    }
}

/// `(20,28)`.
pub fn tuple<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

pub fn polyhedron_json(np: &NewtonPolyhedron) -> Value {
    let vertex = |i: usize| np.vertices()[i].entries().to_vec();
    json!({
        "vertices": (0..np.vertices().len()).map(vertex).collect::<Vec<_>>(),
        "facets": np.facets().iter().map(|f| json!({
            "normal": f.normal.entries(),
            "offset": f.offset,
            "compact": f.compact,
            "vertices": f.vertex_ids.iter().map(|&i| vertex(i)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn series_json(f: &FactoredSeries) -> Value {
    serde_json::to_value(SeriesFile::from_series(f)).expect("plain data")
}

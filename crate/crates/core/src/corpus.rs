//! Seeded random inputs for the property suites and the self-check command.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{BlowUp, ResolutionGraph};
use crate::lattice::{ExponentVector, Polynomial, Rational, ValuationSystem, WeightVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermCase {
    pub sys: ValuationSystem,
    pub h: Polynomial,
}

/// Plane germs `h` with `h(0) = 0` and at most `max_terms` terms, paired with
/// one or two monomial valuations of positive weights at most `max_weight`.
#[derive(Clone, Copy, Debug)]
pub struct GermSpec {
    pub max_rank: usize,
    pub max_weight: u32,
    pub max_terms: usize,
    pub max_exponent: u32,
}

impl Default for GermSpec {
    fn default() -> Self {
        GermSpec { max_rank: 2, max_weight: 5, max_terms: 5, max_exponent: 5 }
    }
}

pub fn random_germ_case(rng: &mut impl Rng, spec: GermSpec) -> GermCase {
    let rank = rng.gen_range(1..=spec.max_rank);
    let rows = (0..rank)
        .map(|_| WeightVector::new((0..2).map(|_| rng.gen_range(1..=spec.max_weight)).collect()).expect("positive"))
        .collect();
    let sys = ValuationSystem::new(rows).expect("nonempty");
    let n_terms = rng.gen_range(1..=spec.max_terms);
    let mut terms = BTreeMap::new();
    while terms.len() < n_terms {
        let e = vec![rng.gen_range(0..=spec.max_exponent), rng.gen_range(0..=spec.max_exponent)];
        if e == [0, 0] {
            continue;
        }
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        terms.insert(ExponentVector::new(e), Rational::from_integer(c.into()));
    }
    let h = Polynomial::from_terms(2, terms).expect("plane terms");
    GermCase { sys, h }
}

/// `count` cases from a ChaCha stream seeded with `seed`.
pub fn germ_corpus(seed: u64, count: usize, spec: GermSpec) -> Vec<GermCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_germ_case(&mut rng, spec)).collect()
}

/// Resolution graph of `blowups` further point blow-ups after the first,
/// with up to two arrows on random vertices.
pub fn random_graph(rng: &mut impl Rng, blowups: usize) -> ResolutionGraph {
    let mut g = ResolutionGraph::single(0);
    for _ in 0..blowups {
        let n = g.len();
        let i = rng.gen_range(0..n);
        let edges: Vec<usize> = (0..n).filter(|&j| j != i && g.intersection()[i][j] == 1).collect();
        let at = if !edges.is_empty() && rng.gen_bool(0.5) {
            BlowUp::Satellite(i, edges[rng.gen_range(0..edges.len())])
        } else {
            BlowUp::Free(i)
        };
        g = g.blow_up(at).expect("blow-up of a valid graph");
    }
    let mut arrows = vec![0u32; g.len()];
    for _ in 0..rng.gen_range(1..=2) {
        arrows[rng.gen_range(0..g.len())] += 1;
    }
    g.with_arrows(arrows).expect("same matrix")
}

pub fn graph_corpus(seed: u64, count: usize, max_blowups: usize) -> Vec<ResolutionGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let b = rng.gen_range(0..=max_blowups);
            random_graph(&mut rng, b)
        })
        .collect()
}

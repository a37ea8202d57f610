use num_bigint::BigInt;
use poincare_cli::formats::{GraphFile, PresentationFile, SeriesFile};
use poincare_cli::parse::{default_names, parse_polynomial, render_polynomial};
use poincare_core::corpus::random_graph;
use poincare_core::{ExponentVector, FactoredSeries, Polynomial, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn polynomial(dim: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..7, dim), -20i64..20, 1i64..6), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(
            dim,
            terms
                .into_iter()
                .map(|(e, n, d)| (ExponentVector::new(e), Rational::new(BigInt::from(n), BigInt::from(d)))),
        )
        .unwrap()
    })
}

fn series() -> impl Strategy<Value = FactoredSeries> {
    (1usize..4).prop_flat_map(|rank| {
        (prop::collection::vec((prop::collection::vec(0u32..9, rank), -3i64..4), 0..5), -9i64..10, 1i64..5).prop_map(
            move |(factors, n, d)| {
                let mut f = FactoredSeries::one(rank);
                for (m, e) in factors {
                    if m.iter().any(|&x| x > 0) {
                        f.multiply_factor(m, e).unwrap();
                    }
                }
                f.with_scalar(Rational::new(BigInt::from(n), BigInt::from(d)))
            },
        )
    })
}

proptest! {
    #[test]
    fn polynomial_text(p in (1usize..6).prop_flat_map(polynomial)) {
        let names = default_names(p.dim());
        let (back, back_names) = parse_polynomial(&render_polynomial(&p, &names)).unwrap();
        prop_assert_eq!(back, p);
        prop_assert_eq!(back_names, names);
    }

    #[test]
    fn polynomial_custom_names(p in polynomial(3)) {
        let names: Vec<String> = vec!["u".into(), "v_1".into(), "w".into()];
        prop_assert_eq!(parse_polynomial(&render_polynomial(&p, &names)).unwrap().0, p);
    }

    #[test]
    fn series_json(f in series()) {
        let text = serde_json::to_string(&SeriesFile::from_series(&f)).unwrap();
        let back: SeriesFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_series().unwrap(), f);
    }

    #[test]
    fn graph_json(seed in any::<u64>(), blowups in 0usize..7) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), blowups);
        let text = serde_json::to_string(&GraphFile::from_graph(&g)).unwrap();
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_graph().unwrap(), g);
    }
}

#[test]
fn presentation_json() {
    let text = r#"{"d":2,"generators":[[1,0],[1,1],[1,2]],"binomials":[{"alpha":[1,0,1],"beta":[0,2,0]}]}"#;
    let file: PresentationFile = serde_json::from_str(text).unwrap();
    let sp = file.to_presentation().unwrap();
    assert_eq!(serde_json::to_string(&PresentationFile::from_presentation(&sp)).unwrap(), text);
}

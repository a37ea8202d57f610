//! Poincaré series of multi-index filtrations given by monomial valuations,
//! computed two independent ways: closed product formulas and exact
//! dimension counts in finite quotients.
//!
//! The crate also covers the geometry around those series: Newton polyhedra
//! and the bi-stellar condition, resolution graphs of plane curves and
//! A'Campo's zeta function, toric complete intersections, and Varchenko's
//! formula.
//!
//! ```
//! use poincare_core::{embedded_closed_form, expand, oracle_series, CoefficientBox, Exec};
//! use poincare_core::{Polynomial, ValuationSystem};
//!
//! let sys = ValuationSystem::from_rows(&[&[2, 3], &[4, 3]]).unwrap();
//! let h = Polynomial::from_int_terms(2, &[(&[6, 2], 1), (&[0, 8], 1)]).unwrap();
//! let closed = embedded_closed_form(&sys, &h).unwrap();
//! assert_eq!(closed.to_string(), "(1-t1^18*t2^24)^1 * (1-t1^2*t2^4)^-1 * (1-t1^3*t2^3)^-1");
//!
//! let b = CoefficientBox::new(vec![6, 6]);
//! let lhs = expand(&closed, &b, Exec::Parallel).unwrap();
//! assert_eq!(lhs, oracle_series(&sys, &h, &b, Exec::Parallel).unwrap());
//! ```

pub mod corpus;
pub mod curve;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod linalg;
pub mod newton;
pub mod oracle;
pub mod series;
pub mod toric;
pub mod zeta;

pub use curve::{
    acampo_zeta, ambient_series_from_graph, curvette_matrix, embedded_series_from_graph, euler_numbers,
    extract_and_recover, q_vector, zeta_from_embedded, BlowUp, ResolutionGraph,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use lattice::{
    as_i64, valuate_monomial, valuate_polynomial, value_tuple, ExponentVector, Polynomial, Rational, ValuationSystem,
    Value, ValueTuple, WeightVector,
};
pub use newton::{
    equal_polyhedra, face_polynomial, facet_valuations, is_bistellar, is_stellar, newton_polyhedron,
    polyhedron_from_halfspaces, restrict_to_axes, Facet, Halfspace, NewtonPolyhedron,
};
pub use oracle::{
    ambient_coefficient, ambient_oracle_series, check_condition, check_lemma_equivalence, codim_j, codim_m,
    condition_grid, embedded_coefficient, nonbistellar_witness, oracle_series, quotient_basis, required_truncation,
    ConditionReport, GridReport, LemmaReport, QuotientModel, TruncatedIdeal, Verdict, Witness,
};
pub use series::{
    ambient_closed_form, embedded_closed_form, expand, extract_dominant_factor, poincare_from_codims,
    substitute_powers, CoefficientBox, FactoredSeries, TruncatedSeries,
};
pub use toric::{
    compare_toric, on_dual_locus, semigroup_codim, semigroup_series, theta, validate_presentation, Binomial,
    PresentationReport, SemigroupPresentation, ToricComparison,
};
pub use zeta::{compare_zeta, lattice_volume, recover_newton, recover_newton_from_series, varchenko_zeta};

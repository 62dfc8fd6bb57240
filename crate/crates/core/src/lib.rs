//! Exact coherent sets of desirable gambles, conditional lower previsions
//! and independent products on finite possibility spaces.

pub mod cone;
pub mod error;
pub mod family;
pub mod independence;
pub mod lowprev;
pub mod lp;
pub mod measurability;
pub mod random;
pub mod rational;
pub mod space;

pub use cone::{lower_prev_from_cone, DesirCone, Generator, LowerPrevSolution, PmfWitness};
pub use error::{Error, Result};
pub use family::{EventFamily, FamilyKind};
pub use independence::{
    check_epistemic_independence, conditional_cone, fact_add_general, factorisation_closed_form,
    ine_cone, ine_cone_materialized, ine_lowprev, marginal_cone, nested_prevision,
    nested_sandwich_check, ConeView, IndependenceReport, IndependentNaturalExtension,
    IndependentProductCone, LocalQuery, SandwichReport,
};
pub use lowprev::{
    check_axioms_lp1_to_lp8, check_linear_properties, check_williams_coherence,
    dominating_linear_previsions, natural_extension, upper_prev, Assessment, CondLowerPrevision,
    Entry, LinearPrevision, LowerPrevision, PropertyCheck, PropertyReport, PropertySamples, Source,
    Term, Verdict, Violation, ViolationKind,
};
pub use lp::{LinearProgram, LpOutcome, Relation};
pub use measurability::{
    field_criterion, is_b_measurable, is_disjoint_union, is_field, level_set_approximation,
    level_set_obstruction, measurability_witness, simple_representation, Approximation,
    SimpleRepresentation,
};
pub use rational::{format_rational, int, parse_canonical, parse_lenient, ratio, Rational};
pub use space::{indicator, Event, Gamble, ProductSpace, Side, Space, SpaceRef};

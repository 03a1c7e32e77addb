//! Partial equational theories at desk scale.
//!
//! Terms are string diagrams over a partial signature. Generator-free terms
//! are decided exactly by canonical cospans with surjective left leg; terms
//! with generators are interpreted in finite sets and partial functions,
//! where equations are read as Kleene equalities.

pub mod catkit;
pub mod diagram;
pub mod finpar;
mod lex;
pub mod model;
pub mod structural;
pub mod theory;

pub use catkit::{
    counit_finset, find_monos, finset, has_finite_limits, kt_totals, limit_search, missing_limit, par_construction,
    parse_fincat, parse_rcat, unit_embed, CatError, ConcreteRCat, Cone, CounitReport, Diagram, FinCat, FinSetCat, KtCat,
    LimitWitness, ParCat, Span, UnitEmbedding,
};
pub use diagram::{parse_term, sort_of, GenSym, Signature, Sort, SortType, Term};
pub use finpar::{
    compose_pfn, cospan_canonicalize, cospan_compose, cospan_tensor, domain_idempotent, leq_pfn,
    product_pfn, pushout, tensor_pfn, Cospan, FinFun, FinPfn, SurjCospan, TupleSpace,
};
pub use lex::ParseError;
pub use structural::{
    cospan_semantics, eval_sorted, eval_structural, structural_eq, SortedCospan, StructError,
    StructTarget, StructValue,
};
pub use theory::{
    builtin, lower_leq, parse_theory, restriction_term, PartialEquation, Theory, TheoryError,
    BUILTIN_NAMES,
};
pub use model::{
    check_equation, check_hom, check_model, enumerate_homs, enumerate_models, eval_term, parse_model,
    EnumOptions, EqCheck, HomCheck, Interpretation, ModelError, ModelFile, ModelReport, SortedMap,
    DEFAULT_SEARCH_CAP,
};

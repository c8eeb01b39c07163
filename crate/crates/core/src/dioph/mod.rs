//! Diophantine definitions as explicit polynomial systems.

pub mod coset;
pub mod poly;
pub mod predicates;
pub mod udef;

pub use coset::{emit_coset_membership, BranchKind, CosetSystem};
pub use poly::{
    bind, box_search, conjunction, scalarize, scale, sum, union, union_witness, MPoly, Monomial, PolySystem,
    ScalarizedSystem, SearchOutcome, SystemJson, Witness, WitnessJson,
};
pub use predicates::{
    emit_nonzero, emit_predicate, random_instance, zero_unsatisfiable_certificate, PredicateInstance, PredicateKind,
};
pub use udef::{accept_ok, accept_u, emit_ok, emit_u, CurveOracle, Decision, NativeOracle, OKDefinition, SOracle, UDefinition};

/// Default coordinate radius for witness searches.
pub const DEFAULT_BOX_RADIUS: i64 = 50;

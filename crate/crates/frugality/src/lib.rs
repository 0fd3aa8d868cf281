//! Exact payment bounds and truthful mechanisms for set-system procurement
//! auctions.
//!
//! A buyer must purchase a feasible set of agents (edges of a path, a vertex
//! cover, a matroid base, or an explicitly listed family). Truthful
//! mechanisms pay winners above cost, and this crate computes — in exact
//! rational arithmetic — the four canonical benchmarks for how much
//! overpayment is unavoidable, runs reference mechanisms against them, and
//! exercises the structural results connecting the two.

pub mod bounds;
pub mod caps;
pub mod error;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod matroid;
pub mod mechanisms;
pub mod ratlp;
pub mod rational;
pub mod suite;
pub mod system;
pub mod witness;

pub use bounds::{
    all_bounds, all_bounds_for_set, payment_bound, payment_bound_for_set, shift_costs,
    vc_ntumax_witness, vc_tumax_witness, AllBounds, BoundKind, CostShift, PaymentBound,
    ShiftOutcome,
};
pub use caps::Caps;
pub use error::{Error, Result};
pub use generators::x3c::{x3c_brute, x3c_reduce, X3CInstance};
pub use generators::{paper_instance, random_instance, RandomKind, NAMED_INSTANCES};
pub use graph::Graph;
pub use instance::{instance_to_json, parse_instance, resolve_instance};
pub use matroid::MatroidDescriptor;
pub use mechanisms::{
    allocate, audit_lower_bound, frugality, is_locally_optimal, locally_optimal_transform,
    run_mechanism, threshold_payment, AuditOutcome, FrugalityReport, MechanismOutcome,
    RatioValue, Rule,
};
pub use rational::Rat;
pub use suite::{
    criterion_id, run_all, run_criterion, CriterionReport, CsvRow, SuiteConfig, CRITERIA,
    CSV_HEADER,
};
pub use system::{
    cheapest_feasible_set, enumerate_feasible, first_monopolist, is_monopoly_free,
    min_feasible_cost, Agent, AgentSet, BidVector, CostVector, FeasibleFamily, SetSystem,
};
pub use witness::{
    separation_oracle, type2_constraints, verify_witness, Mode, Type2Constraint,
    WitnessVerdict,
};

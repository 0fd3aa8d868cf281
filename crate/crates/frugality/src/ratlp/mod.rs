//! Exact rational optimization back-ends: a dense two-phase simplex and an
//! Edmonds–Karp max-flow, both free of floating point.

pub mod flow;
pub mod lp;

pub use flow::{augment_from, max_flow, Capacity, FlowArc, FlowNetwork, FlowResult};
pub use lp::{solve_lp, LinearProgram, LpResult, LpRow, Relation, Sense};

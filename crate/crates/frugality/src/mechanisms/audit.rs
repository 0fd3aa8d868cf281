//! The lower-bound auditor: a per-rule, per-degree certificate that no
//! truthful vertex-cover mechanism beats the Δ/2 barrier against the
//! no-transfer minimum.
//!
//! The stage is the complete bipartite graph with sides L and R of size Δ.
//! Every vertex cover of it contains all of L or all of R. For each of the
//! Δ² cost vectors y with one unit-cost vertex per side, run the rule: if
//! the chosen cover swallows L, the covered side's unit vertex was forced
//! in, and zeroing it yields a single-unit-cost vector x reachable from y
//! by lowering one winner's cost; likewise for R. Tallying these
//! derivations over the 2Δ possible x, some x collects at least Δ/2 of
//! them — and by monotonicity each of the corresponding lowered vertices
//! still wins under x with a threshold of at least 1, while the
//! no-transfer minimum of x is exactly 1. The mechanism therefore pays at
//! least Δ/2 times the benchmark on x.

use serde::Serialize;

use crate::bounds::{payment_bound, BoundKind};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rat;
use crate::system::{CostVector, SetSystem};

use super::{allocate, run_mechanism, Rule};

/// The certificate found by [`audit_lower_bound`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditOutcome {
    pub delta: usize,
    /// The hard cost vector: a single unit-cost vertex on the complete
    /// bipartite graph, everything else free.
    pub costs: CostVector,
    pub unit_cost_vertex: usize,
    /// How many of the Δ² probes derived this vector.
    pub witness_degree: usize,
    pub total_payment: Rat,
    pub ntumin: Rat,
    pub ratio: Rat,
}

/// Searches the Δ² probe family for a cost vector on which the rule pays
/// at least Δ/2 times the no-transfer minimum, and verifies every step of
/// the argument along the way.
pub fn audit_lower_bound(rule: &Rule, delta: usize, caps: &Caps) -> Result<AuditOutcome> {
    if delta < 2 {
        return Err(Error::UnsatisfiableParams(format!(
            "audit needs degree at least 2, got {delta}"
        )));
    }
    let n = 2 * delta;
    let mut edges = Vec::with_capacity(delta * delta);
    for l in 0..delta {
        for r in delta..n {
            edges.push((l, r));
        }
    }
    let system = SetSystem::new_vertex_cover(Graph::new(n, edges)?)?;

    // derived[x] lists the probes (l, r) whose chosen cover lets the cost
    // of the other unit vertex drop to zero, leaving x's unit vertex.
    let mut derived: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for l in 0..delta {
        for r in delta..n {
            let mut y = vec![Rat::zero(); n];
            y[l] = Rat::one();
            y[r] = Rat::one();
            let cover = allocate(rule, &system, &CostVector::new(y)?, caps)?;
            let left = (0..delta).all(|v| cover.contains(&v));
            let right = (delta..n).all(|v| cover.contains(&v));
            if !left && !right {
                return Err(Error::AuditFailed(format!(
                    "chosen set {cover:?} misses a vertex on each side and cannot cover \
                     the complete bipartite graph"
                )));
            }
            if left {
                derived[r].push((l, r));
            }
            if right {
                derived[l].push((l, r));
            }
        }
    }

    let unit_cost_vertex = (0..n)
        .max_by_key(|&x| (derived[x].len(), n - x))
        .expect("nonempty vertex range");
    let witness_degree = derived[unit_cost_vertex].len();
    if 2 * witness_degree < delta {
        return Err(Error::AuditFailed(format!(
            "{} probes spread over {n} vectors left a maximum tally of {witness_degree}, \
             below {delta}/2",
            delta * delta
        )));
    }

    let mut x = vec![Rat::zero(); n];
    x[unit_cost_vertex] = Rat::one();
    let costs = CostVector::new(x)?;

    // Monotonicity step: every vertex whose cost dropped between a probe
    // and x must still be chosen under x, and its threshold payment must
    // remain at least its old unit cost.
    let outcome = run_mechanism(rule, &system, &costs, caps)?;
    for &(l, r) in &derived[unit_cost_vertex] {
        let lowered = if r == unit_cost_vertex { l } else { r };
        let Some(payment) = outcome.payments.get(&lowered) else {
            return Err(Error::AuditFailed(format!(
                "vertex {lowered} won its probe but is dropped under the derived \
                 vector — the rule is not monotone"
            )));
        };
        if payment < &Rat::one() {
            return Err(Error::AuditFailed(format!(
                "vertex {lowered} still wins but its threshold fell to {payment}, \
                 below the probe bid it won with"
            )));
        }
    }
    if &outcome.total * Rat::int(2) < Rat::int(delta as i64) {
        return Err(Error::AuditFailed(format!(
            "total payment {} is below {delta}/2",
            outcome.total
        )));
    }

    let ntumin = payment_bound(&system, &costs, BoundKind::NtuMin, caps)?.value;
    if ntumin != Rat::one() {
        return Err(Error::AuditFailed(format!(
            "no-transfer minimum of the derived vector is {ntumin}, expected exactly 1"
        )));
    }
    let ratio = &outcome.total / &ntumin;
    if &ratio * Rat::int(2) < Rat::int(delta as i64) {
        return Err(Error::AuditFailed(format!(
            "ratio {ratio} is below {delta}/2"
        )));
    }
    Ok(AuditOutcome {
        delta,
        costs,
        unit_cost_vertex,
        witness_degree,
        total_payment: outcome.total,
        ntumin,
        ratio,
    })
}

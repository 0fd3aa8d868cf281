//! Cost shifts that step an instance between benchmark regimes.
//!
//! Each shift recomputes the winners' costs from a benchmark witness and
//! leaves all other agents alone. The winning set provably stays cheapest
//! (checked at runtime anyway), and the punchline identities are:
//!
//! * `CapAtTuMax`: c' = min(c, transfer-max witness); afterwards the
//!   no-transfer maximum of c' equals the transfer maximum of c.
//! * `RaiseToNtuMin`: c' = no-transfer-min witness; the no-transfer
//!   minimum is unchanged and now equals the winning set's cost.
//! * `RaiseToNtuMax`: c' = no-transfer-max witness; afterwards the
//!   no-transfer minimum of c' equals the no-transfer maximum of c.
//! * `CapAtTuMin`: c' = min(c, transfer-min witness); afterwards the
//!   no-transfer minimum of c' equals the transfer minimum of c.
//!
//! Chained, these turn any gap across the benchmark chain into a gap
//! between the two no-transfer benchmarks on a perturbed instance.

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::system::{cheapest_feasible_set, min_feasible_cost, BidVector, CostVector, SetSystem};
use crate::system::AgentSet;

use super::{payment_bound_for_set, BoundKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CostShift {
    CapAtTuMax,
    RaiseToNtuMin,
    RaiseToNtuMax,
    CapAtTuMin,
}

impl CostShift {
    fn witness_kind(self) -> BoundKind {
        match self {
            CostShift::CapAtTuMax => BoundKind::TuMax,
            CostShift::RaiseToNtuMin => BoundKind::NtuMin,
            CostShift::RaiseToNtuMax => BoundKind::NtuMax,
            CostShift::CapAtTuMin => BoundKind::TuMin,
        }
    }

    fn caps_at_witness(self) -> bool {
        matches!(self, CostShift::CapAtTuMax | CostShift::CapAtTuMin)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftOutcome {
    pub costs: CostVector,
    /// The winning set the shift was computed at (still cheapest after).
    pub set: AgentSet,
    /// The witness the new costs were derived from.
    pub witness: BidVector,
}

pub fn shift_costs(
    system: &SetSystem,
    costs: &CostVector,
    shift: CostShift,
    caps: &Caps,
) -> Result<ShiftOutcome> {
    let s = cheapest_feasible_set(system, costs, caps)?;
    let bound = payment_bound_for_set(system, costs, &s, shift.witness_kind(), caps)?;
    let mut shifted = costs.clone();
    for (&e, b) in bound.witness.iter() {
        let new = if shift.caps_at_witness() {
            if b < costs.get(e) { b.clone() } else { costs.get(e).clone() }
        } else {
            b.clone()
        };
        shifted.set(e, new)?;
    }
    // The shift must keep the chosen set cheapest; this is a theorem about
    // the witness conditions, so a failure means a bug upstream.
    let new_min = min_feasible_cost(system, &shifted, caps)?;
    if shifted.total(s.iter().copied()) != new_min {
        return Err(Error::InvariantViolated(
            "cost shift displaced the winning set".into(),
        ));
    }
    Ok(ShiftOutcome { costs: shifted, set: s, witness: bound.witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{all_bounds, payment_bound};
    use crate::graph::Graph;
    use crate::rational::Rat;

    fn diamond() -> (SetSystem, CostVector) {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)]).unwrap();
        let sys = SetSystem::new_path(g, 0, 3).unwrap();
        (sys, CostVector::from_ints(&[2, 1, 2, 5, 5]))
    }

    fn clique_tail(n: usize) -> (SetSystem, CostVector) {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for u in 1..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        edges.push((0, n - 1));
        let g = Graph::new(n, edges).unwrap();
        let sys = SetSystem::new_vertex_cover(g).unwrap();
        let mut costs = vec![0i64; n];
        costs[0] = 1;
        costs[n - 1] = 1;
        (sys, CostVector::from_ints(&costs))
    }

    #[test]
    fn diamond_shift_identities() {
        let (sys, costs) = diamond();
        let caps = Caps::default();
        let before = all_bounds(&sys, &costs, &caps).unwrap();

        let l1 = shift_costs(&sys, &costs, CostShift::CapAtTuMax, &caps).unwrap();
        assert_eq!(l1.costs.as_slice(), CostVector::from_ints(&[2, 0, 2, 5, 5]).as_slice());
        let after = payment_bound(&sys, &l1.costs, BoundKind::NtuMax, &caps).unwrap();
        assert_eq!(after.value, before.tumax.value);

        let l2 = shift_costs(&sys, &costs, CostShift::RaiseToNtuMin, &caps).unwrap();
        assert_eq!(l2.costs.as_slice(), CostVector::from_ints(&[2, 3, 2, 5, 5]).as_slice());
        let after = payment_bound(&sys, &l2.costs, BoundKind::NtuMin, &caps).unwrap();
        assert_eq!(after.value, before.ntumin.value);
        // Normalization: the winning set now costs exactly the benchmark.
        assert_eq!(l2.costs.total(l2.set.iter().copied()), before.ntumin.value);

        let l3 = shift_costs(&sys, &costs, CostShift::RaiseToNtuMax, &caps).unwrap();
        assert_eq!(l3.costs.as_slice(), CostVector::from_ints(&[4, 1, 4, 5, 5]).as_slice());
        let after = payment_bound(&sys, &l3.costs, BoundKind::NtuMin, &caps).unwrap();
        assert_eq!(after.value, before.ntumax.value);

        let l4 = shift_costs(&sys, &costs, CostShift::CapAtTuMin, &caps).unwrap();
        assert_eq!(l4.costs.as_slice(), CostVector::from_ints(&[0, 1, 0, 5, 5]).as_slice());
        let after = payment_bound(&sys, &l4.costs, BoundKind::NtuMin, &caps).unwrap();
        assert_eq!(after.value, before.tumin.value);
    }

    /// Capping at the transfer-max witness, then raising to the new
    /// no-transfer-max witness, drags the clique separation down the
    /// chain: first into the no-transfer maximum, then into the
    /// no-transfer minimum.
    #[test]
    fn clique_tail_chain_of_shifts() {
        let n = 6;
        let (sys, costs) = clique_tail(n);
        let caps = Caps::default();
        let gap = Rat::int(n as i64 - 2);

        let before = all_bounds(&sys, &costs, &caps).unwrap();
        assert_eq!(before.tumax.value, gap);
        assert_eq!(before.ntumax.value, Rat::one());

        let step1 = shift_costs(&sys, &costs, CostShift::CapAtTuMax, &caps).unwrap();
        let mut want = vec![0i64; n];
        want[n - 1] = 1;
        assert_eq!(step1.costs.as_slice(), CostVector::from_ints(&want).as_slice());
        let mid = all_bounds(&sys, &step1.costs, &caps).unwrap();
        assert_eq!(mid.ntumax.value, gap);
        assert_eq!(mid.ntumin.value, Rat::one());

        let step2 = shift_costs(&sys, &step1.costs, CostShift::RaiseToNtuMax, &caps).unwrap();
        let mut want = vec![1i64; n];
        want[0] = 0;
        assert_eq!(step2.costs.as_slice(), CostVector::from_ints(&want).as_slice());
        let after = all_bounds(&sys, &step2.costs, &caps).unwrap();
        assert_eq!(after.ntumin.value, gap);
        assert_eq!(after.tumin.value, Rat::one());
    }

    /// The punchline identities on arbitrary explicit systems, not just
    /// the curated examples.
    #[test]
    fn shift_identities_hold_on_random_systems() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(302);
        let caps = Caps::default();
        let mut tried = 0;
        while tried < 20 {
            let n = rng.gen_range(3..=6);
            let mut sets: Vec<AgentSet> = Vec::new();
            for _ in 0..rng.gen_range(2..=5) {
                let s: AgentSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                if !s.is_empty() {
                    sets.push(s);
                }
            }
            if sets.is_empty() {
                continue;
            }
            let sys = SetSystem::new_explicit(n, sets).unwrap();
            if !crate::system::is_monopoly_free(&sys, &caps).unwrap() {
                continue;
            }
            let costs =
                CostVector::from_ints(&(0..n).map(|_| rng.gen_range(0..=4)).collect::<Vec<_>>());
            tried += 1;
            let before = all_bounds(&sys, &costs, &caps).unwrap();
            let checks: [(CostShift, BoundKind, &Rat); 4] = [
                (CostShift::CapAtTuMax, BoundKind::NtuMax, &before.tumax.value),
                (CostShift::RaiseToNtuMin, BoundKind::NtuMin, &before.ntumin.value),
                (CostShift::RaiseToNtuMax, BoundKind::NtuMin, &before.ntumax.value),
                (CostShift::CapAtTuMin, BoundKind::NtuMin, &before.tumin.value),
            ];
            for (shift, then, want) in checks {
                let out = shift_costs(&sys, &costs, shift, &caps).unwrap();
                let after =
                    payment_bound_for_set(&sys, &out.costs, &out.set, then, &caps).unwrap();
                assert_eq!(
                    &after.value, want,
                    "{shift:?} then {then} on {sys:?} with {costs:?}"
                );
            }
        }
    }
}

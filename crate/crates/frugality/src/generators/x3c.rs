//! Exact cover by 3-sets, and its encoding as a no-transfer-minimum
//! computation.
//!
//! An instance asks for `n/3` pairwise disjoint triples covering a
//! universe of `n` elements. [`x3c_reduce`] turns an instance with `m`
//! triples into a set system whose no-transfer minimum equals the optimum
//! of a small covering program, and that optimum is exactly `m` if and
//! only if an exact cover exists — the gap is what makes the benchmark
//! hard to compute in general.
//!
//! The covering program has, per triple `i`, variables `x_i` (take the
//! triple), `x̄_i` (leave it) and two padding variables `a_i`, `b_i`, with
//! the five comparisons `x+x̄ ≤ 1`, `x+a ≤ 1`, `x̄+a ≤ 1`, `x+b ≤ 1`,
//! `x̄+b ≤ 1`; per universe element `j` it has a slack variable `d_j` and
//! the comparison `d_j + Σ {x_i : element j ∈ triple i} ≤ 1`. Every
//! variable must sit in some tight comparison. A triple block can reach
//! total 1 only at the two integral points `x=1` or `x̄=1`, and the
//! element comparisons then force the chosen triples to cover each
//! element exactly once.
//!
//! The encoding into a set system gives every program variable a cost-0
//! agent, every comparison `k` a cost-1 agent `e'_k`, and takes as
//! feasible sets the full variable set `E0` plus, per comparison, the set
//! `E0` minus the comparison's variables plus `e'_k`. The comparison
//! constraints of the benchmark computation are then exactly the program
//! comparisons, and the no-transfer minimum equals the program optimum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{AgentSet, CostVector, SetSystem};

/// An exact-cover-by-3-sets instance over elements `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X3CInstance {
    n: usize,
    triples: Vec<[usize; 3]>,
}

impl X3CInstance {
    /// Universe size must be a positive multiple of three; each triple
    /// holds three distinct elements of the universe. Repeated triples
    /// are allowed.
    pub fn new(n: usize, triples: Vec<[usize; 3]>) -> Result<X3CInstance> {
        if n == 0 || !n.is_multiple_of(3) {
            return Err(Error::InvalidInstance(format!(
                "universe size {n} is not a positive multiple of three"
            )));
        }
        for t in &triples {
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(Error::InvalidInstance(format!("triple {t:?} repeats an element")));
            }
            if let Some(&g) = t.iter().find(|&&g| g >= n) {
                return Err(Error::InvalidInstance(format!(
                    "element {g} outside the universe 0..{n}"
                )));
            }
        }
        let mut triples = triples;
        for t in &mut triples {
            t.sort_unstable();
        }
        Ok(X3CInstance { n, triples })
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    /// Number of triples, usually called m.
    pub fn num_triples(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }
}

/// Exhaustive check for an exact cover: is there a collection of `n/3`
/// pairwise disjoint triples whose union is the universe? Instances are
/// capped at 20 triples — this is the oracle for small cases, not a
/// solver.
pub fn x3c_brute(inst: &X3CInstance) -> Result<bool> {
    if inst.num_triples() > 20 {
        return Err(Error::CapExceeded(20));
    }
    fn cover(inst: &X3CInstance, taken: &mut Vec<bool>) -> bool {
        let Some(first) = taken.iter().position(|&c| !c) else {
            return true;
        };
        for t in &inst.triples {
            if t.contains(&first) && t.iter().all(|&g| !taken[g]) {
                for &g in t {
                    taken[g] = true;
                }
                if cover(inst, taken) {
                    return true;
                }
                for &g in t {
                    taken[g] = false;
                }
            }
        }
        false
    }
    Ok(cover(inst, &mut vec![false; inst.n]))
}

/// Builds the set system whose no-transfer minimum is the covering
/// program's optimum, and returns it with its cost vector and the triple
/// count `m` (the optimum equals `m` exactly when an exact cover exists).
///
/// Agent layout: variables first — per triple `i` the block
/// `x=4i, x̄=4i+1, a=4i+2, b=4i+3`, then the element slacks
/// `d_j = 4m + j` — followed by one cost-1 agent per comparison.
pub fn x3c_reduce(inst: &X3CInstance) -> (SetSystem, CostVector, usize) {
    let m = inst.num_triples();
    let n = inst.universe_size();
    let num_vars = 4 * m + n;

    let mut comparisons: Vec<AgentSet> = Vec::with_capacity(5 * m + n);
    for i in 0..m {
        let (x, xbar, a, b) = (4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3);
        comparisons.push(AgentSet::from([x, xbar]));
        comparisons.push(AgentSet::from([x, a]));
        comparisons.push(AgentSet::from([xbar, a]));
        comparisons.push(AgentSet::from([x, b]));
        comparisons.push(AgentSet::from([xbar, b]));
    }
    for j in 0..n {
        let mut lhs = AgentSet::from([4 * m + j]);
        for (i, t) in inst.triples.iter().enumerate() {
            if t.contains(&j) {
                lhs.insert(4 * i);
            }
        }
        comparisons.push(lhs);
    }

    let everything: AgentSet = (0..num_vars).collect();
    let mut sets = vec![everything.clone()];
    for (k, lhs) in comparisons.iter().enumerate() {
        let mut t: AgentSet = everything.difference(lhs).copied().collect();
        t.insert(num_vars + k);
        sets.push(t);
    }

    let mut labels: Vec<String> = Vec::with_capacity(num_vars + comparisons.len());
    for i in 1..=m {
        labels.extend([format!("x{i}"), format!("xb{i}"), format!("a{i}"), format!("b{i}")]);
    }
    labels.extend((1..=n).map(|j| format!("d{j}")));
    labels.extend((1..=comparisons.len()).map(|k| format!("e'{k}")));

    let num_agents = num_vars + comparisons.len();
    let mut costs = vec![0i64; num_agents];
    for c in costs.iter_mut().skip(num_vars) {
        *c = 1;
    }

    let sys = SetSystem::new_explicit(num_agents, sets)
        .and_then(|s| s.with_labels(labels))
        .expect("the encoding is well formed by construction");
    (sys, CostVector::from_ints(&costs), m)
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use super::*;
    use crate::bounds::{payment_bound, BoundKind};
    use crate::caps::Caps;
    use crate::rational::Rat;
    use crate::system::cheapest_feasible_set;
    use crate::witness::type2_constraints;

    fn wide_caps() -> Caps {
        Caps { cover_constraints: 64, ..Caps::default() }
    }

    fn ntumin_of(inst: &X3CInstance) -> Rat {
        let (sys, costs, _) = x3c_reduce(inst);
        payment_bound(&sys, &costs, BoundKind::NtuMin, &wide_caps()).unwrap().value
    }

    #[test]
    fn single_triple_covers_its_universe() {
        let inst = X3CInstance::new(3, vec![[0, 1, 2]]).unwrap();
        assert!(x3c_brute(&inst).unwrap());
        assert_eq!(ntumin_of(&inst), Rat::one());
    }

    #[test]
    fn a_repeated_triple_still_covers_but_costs_both_blocks() {
        let inst = X3CInstance::new(3, vec![[0, 1, 2], [0, 1, 2]]).unwrap();
        assert!(x3c_brute(&inst).unwrap());
        assert_eq!(ntumin_of(&inst), Rat::int(2));
    }

    #[test]
    fn an_uncoverable_element_blocks_the_cover_and_raises_the_minimum() {
        let inst = X3CInstance::new(6, vec![[0, 1, 2], [2, 3, 4]]).unwrap();
        assert!(!x3c_brute(&inst).unwrap());
        // Element 5 is in no triple and elements 3, 4 force their slacks
        // once triple 1 is taken; the program bottoms out at 5, not m=2.
        assert_eq!(ntumin_of(&inst), Rat::int(5));
    }

    #[test]
    fn reduction_layout_matches_the_program() {
        let inst = X3CInstance::new(6, vec![[0, 1, 2], [2, 3, 4]]).unwrap();
        let (sys, costs, m) = x3c_reduce(&inst);
        assert_eq!(m, 2);
        // 4m + n variables plus 5m + n comparison agents.
        assert_eq!(sys.n(), (4 * 2 + 6) + (5 * 2 + 6));
        assert_eq!(costs.total_all(), Rat::int(5 * 2 + 6));
        let caps = wide_caps();
        let s = cheapest_feasible_set(&sys, &costs, &caps).unwrap();
        assert_eq!(s, (0..14).collect::<AgentSet>());
        let constraints = type2_constraints(&sys, &costs, &s, &caps).unwrap();
        assert_eq!(constraints.len(), 5 * 2 + 6);
        assert!(constraints.iter().all(|c| c.rhs == Rat::one()));
        // The comparison for element 2 (agent d3 = 10) joins both x's.
        assert!(constraints
            .iter()
            .any(|c| c.lhs == AgentSet::from([0, 4, 10])));
        assert_eq!(sys.label(0), "x1");
        assert_eq!(sys.label(10), "d3");
    }

    #[test]
    fn rejected_instances() {
        assert!(X3CInstance::new(4, vec![]).is_err());
        assert!(X3CInstance::new(3, vec![[0, 1, 1]]).is_err());
        assert!(X3CInstance::new(3, vec![[0, 1, 3]]).is_err());
        let big = X3CInstance::new(3, vec![[0, 1, 2]; 21]).unwrap();
        assert!(matches!(x3c_brute(&big), Err(Error::CapExceeded(20))));
    }

    #[test]
    fn planted_partitions_are_found() {
        let inst = X3CInstance::new(
            9,
            vec![[0, 1, 2], [3, 4, 5], [6, 7, 8], [1, 4, 7]],
        )
        .unwrap();
        assert!(x3c_brute(&inst).unwrap());
        assert_eq!(ntumin_of(&inst), Rat::int(4));
    }

    /// The reduction's defining equivalence, on random small instances:
    /// an exact cover exists exactly when the no-transfer minimum hits m.
    #[test]
    fn cover_existence_matches_the_minimum_hitting_m() {
        let mut rng = StdRng::seed_from_u64(99);
        let mut seen_cover = false;
        let mut seen_blocked = false;
        for trial in 0..24 {
            let n = if rng.gen_bool(0.5) { 3 } else { 6 };
            let m = rng.gen_range(1..=3);
            let triples: Vec<[usize; 3]> = (0..m)
                .map(|_| loop {
                    let mut t = [0; 3];
                    for slot in &mut t {
                        *slot = rng.gen_range(0..n);
                    }
                    t.sort_unstable();
                    if t[0] != t[1] && t[1] != t[2] {
                        break t;
                    }
                })
                .collect();
            let inst = X3CInstance::new(n, triples).unwrap();
            let covered = x3c_brute(&inst).unwrap();
            seen_cover |= covered;
            seen_blocked |= !covered;
            let value = ntumin_of(&inst);
            let m = Rat::int(inst.num_triples() as i64);
            assert!(value >= m, "trial {trial}: minimum {value} under m={m} on {inst:?}");
            assert_eq!(covered, value == m, "trial {trial}: {inst:?} gave {value}");
        }
        assert!(seen_cover && seen_blocked, "sample never exercised both outcomes");
    }
}

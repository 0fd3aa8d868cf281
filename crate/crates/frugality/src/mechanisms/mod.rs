//! Truthful auctions on set systems: monotone allocation rules, exact
//! threshold payments, and frugality measurement against the four payment
//! benchmarks.
//!
//! An allocation rule maps a bid vector to a feasible set. All rules here
//! are monotone — raising one agent's bid never turns that agent from a
//! loser into a winner — so paying every winner its threshold bid (the
//! highest bid at which it would still have won) yields a truthful
//! mechanism, and we always evaluate at bids equal to the true costs.
//!
//! Three rules are provided, plus a repair combinator:
//!
//! * [`Rule::Vcg`] picks a cheapest feasible set under the bids;
//! * [`Rule::GreedyVc`] builds a vertex cover by repeatedly taking the
//!   vertex with the smallest bid per uncovered incident edge;
//! * [`Rule::LocalRatioVc`] runs the local-ratio pass over the edges in a
//!   fixed bid-independent order and keeps the zeroed vertices — a
//!   2-approximation;
//! * [`Rule::Composed`] post-processes any rule's cover with
//!   [`locally_optimal_transform`] so that no chosen vertex outbids its
//!   neighbourhood.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{all_bounds, AllBounds, BoundKind};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rat;
use crate::system::{
    cheapest_feasible_set, first_monopolist, Agent, AgentSet, CostVector, FeasibleFamily,
    SetSystem,
};

mod audit;
mod threshold;

pub use audit::{audit_lower_bound, AuditOutcome};
pub use threshold::threshold_payment;

/// A monotone allocation rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// Cheapest feasible set under the bids, lexicographic tie-break.
    Vcg,
    /// Greedy vertex cover: repeatedly take the vertex minimizing
    /// bid / (number of uncovered incident edges), ties to the smaller
    /// index.
    GreedyVc,
    /// Local-ratio vertex cover: walk the edges in lexicographic order,
    /// subtract the smaller residual from both endpoints, select the
    /// vertices whose residual reaches zero.
    LocalRatioVc,
    /// Run the inner rule, then repair its cover with
    /// [`locally_optimal_transform`].
    Composed(Box<Rule>),
}

impl Rule {
    /// True when the rule only makes sense on vertex-cover systems.
    pub fn needs_graph(&self) -> bool {
        !matches!(self, Rule::Vcg)
    }

    /// Greedy compares bid-to-degree ratios, which refines the breakpoint
    /// lattice used by threshold bisection.
    fn contains_greedy(&self) -> bool {
        match self {
            Rule::GreedyVc => true,
            Rule::Composed(inner) => inner.contains_greedy(),
            Rule::Vcg | Rule::LocalRatioVc => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Vcg => write!(f, "vcg"),
            Rule::GreedyVc => write!(f, "greedy"),
            Rule::LocalRatioVc => write!(f, "local-ratio"),
            Rule::Composed(inner) => write!(f, "{inner}+transform"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        match s {
            "vcg" => Ok(Rule::Vcg),
            "greedy" => Ok(Rule::GreedyVc),
            "local-ratio" => Ok(Rule::LocalRatioVc),
            _ => match s.strip_suffix("+transform") {
                Some(inner) => Ok(Rule::Composed(Box::new(inner.parse()?))),
                None => Err(Error::UnknownInstance(format!("rule `{s}`"))),
            },
        }
    }
}

/// A mechanism evaluation at truthful bids: the chosen feasible set, each
/// winner's threshold payment, their sum, and the true cost of the chosen
/// set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MechanismOutcome {
    pub selected: AgentSet,
    pub payments: BTreeMap<Agent, Rat>,
    pub total: Rat,
    pub allocation_cost: Rat,
}

fn cover_graph(system: &SetSystem) -> Result<&Graph> {
    match system.family() {
        FeasibleFamily::VertexCover { graph } => Ok(graph),
        _ => Err(Error::InvalidInstance(
            "this allocation rule runs on vertex-cover systems only".into(),
        )),
    }
}

/// Runs the allocation rule on the given bids and returns the selected
/// feasible set.
pub fn allocate(
    rule: &Rule,
    system: &SetSystem,
    bids: &CostVector,
    caps: &Caps,
) -> Result<AgentSet> {
    if bids.len() != system.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} bids for {} agents",
            bids.len(),
            system.n()
        )));
    }
    match rule {
        Rule::Vcg => cheapest_feasible_set(system, bids, caps),
        Rule::GreedyVc => Ok(greedy_cover(cover_graph(system)?, bids)),
        Rule::LocalRatioVc => Ok(local_ratio_cover(cover_graph(system)?, bids)),
        Rule::Composed(inner) => {
            let base = allocate(inner, system, bids, caps)?;
            locally_optimal_transform(cover_graph(system)?, bids, &base)
        }
    }
}

fn greedy_cover(graph: &Graph, bids: &CostVector) -> AgentSet {
    let mut covered = vec![false; graph.num_edges()];
    let mut remaining = graph.num_edges();
    let mut chosen = AgentSet::new();
    while remaining > 0 {
        let mut best: Option<(Agent, usize)> = None;
        for v in 0..graph.n_vertices() {
            if chosen.contains(&v) {
                continue;
            }
            let open = graph.incident(v).iter().filter(|&&i| !covered[i]).count();
            if open == 0 {
                continue;
            }
            // bids[v]/open < bids[u]/du, cross-multiplied to stay exact;
            // scanning v in increasing order makes ties keep the smaller
            // index.
            let better = match best {
                None => true,
                Some((u, du)) => {
                    bids.get(v) * Rat::int(du as i64) < bids.get(u) * Rat::int(open as i64)
                }
            };
            if better {
                best = Some((v, open));
            }
        }
        let (v, _) = best.expect("an uncovered edge always offers a candidate");
        chosen.insert(v);
        for i in graph.incident(v) {
            if !covered[i] {
                covered[i] = true;
                remaining -= 1;
            }
        }
    }
    chosen
}

fn local_ratio_cover(graph: &Graph, bids: &CostVector) -> AgentSet {
    let mut residual: Vec<Rat> = bids.as_slice().to_vec();
    for i in graph.lex_edge_order() {
        let (u, v) = graph.edge(i);
        let eps = residual[u].clone().min(residual[v].clone());
        residual[u] = &residual[u] - &eps;
        residual[v] = &residual[v] - &eps;
    }
    (0..graph.n_vertices()).filter(|&v| residual[v].is_zero()).collect()
}

/// One pass over the vertices in index order: whenever a chosen vertex
/// bids more than its whole neighbourhood combined, it is replaced by its
/// neighbours.
///
/// The replacement never needs revisiting: if v was dropped because its
/// bid beats its neighbourhood, no later replacement can re-add v, since
/// that would require a neighbour of v to outbid a neighbourhood
/// containing v — and the two inequalities contradict each other. The
/// result is therefore locally optimal after a single pass, and its bid
/// cost never exceeds the input's.
pub fn locally_optimal_transform(
    graph: &Graph,
    bids: &CostVector,
    cover: &AgentSet,
) -> Result<AgentSet> {
    if bids.len() != graph.n_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "{} bids for {} vertices",
            bids.len(),
            graph.n_vertices()
        )));
    }
    if !graph.is_vertex_cover(cover) {
        return Err(Error::NotAVertexCover);
    }
    let mut out = cover.clone();
    for v in 0..graph.n_vertices() {
        if !out.contains(&v) {
            continue;
        }
        let around: Rat = graph.neighbors(v).iter().map(|&w| bids.get(w)).sum();
        if bids.get(v) > &around {
            out.remove(&v);
            out.extend(graph.neighbors(v));
        }
    }
    Ok(out)
}

/// True when no chosen vertex bids more than the sum of its neighbours'
/// bids.
pub fn is_locally_optimal(
    graph: &Graph,
    bids: &CostVector,
    cover: &AgentSet,
) -> Result<bool> {
    if bids.len() != graph.n_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "{} bids for {} vertices",
            bids.len(),
            graph.n_vertices()
        )));
    }
    if !graph.is_vertex_cover(cover) {
        return Err(Error::NotAVertexCover);
    }
    Ok(cover.iter().all(|&v| {
        let around: Rat = graph.neighbors(v).iter().map(|&w| bids.get(w)).sum();
        bids.get(v) <= &around
    }))
}

/// Evaluates the truthful mechanism induced by the rule: allocate at bids
/// equal to costs, then pay every winner its threshold bid.
pub fn run_mechanism(
    rule: &Rule,
    system: &SetSystem,
    costs: &CostVector,
    caps: &Caps,
) -> Result<MechanismOutcome> {
    if let Some(agent) = first_monopolist(system, caps)? {
        return Err(Error::MonopolyDetected(agent));
    }
    let selected = allocate(rule, system, costs, caps)?;
    let mut payments = BTreeMap::new();
    for &e in &selected {
        let t = threshold_payment(rule, system, costs, e, caps)?;
        if &t < costs.get(e) {
            return Err(Error::InvariantViolated(format!(
                "threshold payment {t} for agent {e} is below its truthful bid"
            )));
        }
        payments.insert(e, t);
    }
    let total: Rat = payments.values().sum();
    let allocation_cost = costs.total(selected.iter().copied());
    Ok(MechanismOutcome { selected, payments, total, allocation_cost })
}

/// A frugality ratio: total payment divided by a payment benchmark, or
/// infinite when the benchmark is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RatioValue {
    Finite(Rat),
    Infinite,
}

impl RatioValue {
    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            RatioValue::Finite(r) => Some(r),
            RatioValue::Infinite => None,
        }
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Finite(r) => write!(f, "{r}"),
            RatioValue::Infinite => write!(f, "inf"),
        }
    }
}

/// The mechanism outcome next to all four payment benchmarks and the
/// resulting frugality ratios.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrugalityReport {
    pub rule: Rule,
    pub outcome: MechanismOutcome,
    pub bounds: AllBounds,
    pub ratios: Vec<(BoundKind, RatioValue)>,
    /// Maximum degree, for vertex-cover instances.
    pub max_degree: Option<usize>,
    /// Set when some benchmark is zero and its ratio infinite.
    pub degenerate_zero_bound: bool,
}

impl FrugalityReport {
    pub fn ratio(&self, kind: BoundKind) -> &RatioValue {
        &self.ratios.iter().find(|(k, _)| *k == kind).expect("all four kinds present").1
    }
}

/// Runs the mechanism and measures its total payment against all four
/// benchmarks.
///
/// On vertex-cover instances this also re-checks two facts the theory
/// promises: the no-transfer minimum dominates both the winning side's
/// cost and the rest of the graph's cost, and a locally optimal selection
/// never collects more than max-degree times the whole graph's cost.
pub fn frugality(
    rule: &Rule,
    system: &SetSystem,
    costs: &CostVector,
    caps: &Caps,
) -> Result<FrugalityReport> {
    let outcome = run_mechanism(rule, system, costs, caps)?;
    let bounds = all_bounds(system, costs, caps)?;
    let mut degenerate = false;
    let mut ratios = Vec::with_capacity(4);
    for kind in BoundKind::ALL {
        let value = &bounds.get(kind).value;
        let ratio = if value.is_zero() {
            degenerate = true;
            RatioValue::Infinite
        } else {
            RatioValue::Finite(&outcome.total / value)
        };
        ratios.push((kind, ratio));
    }
    let max_degree = match system.family() {
        FeasibleFamily::VertexCover { graph } => {
            let delta = graph.max_degree();
            let ground = costs.total_all();
            let winning = costs.total(bounds.chosen_set.iter().copied());
            let rest = &ground - &winning;
            let ntumin = &bounds.ntumin.value;
            if ntumin < &winning || ntumin < &rest {
                return Err(Error::InvariantViolated(format!(
                    "no-transfer minimum {ntumin} under cover cost {winning} / complement {rest}"
                )));
            }
            if is_locally_optimal(graph, costs, &outcome.selected)?
                && outcome.total > Rat::int(delta as i64) * &ground
            {
                return Err(Error::InvariantViolated(format!(
                    "locally optimal selection pays {} over a degree-{delta} graph costing {ground}",
                    outcome.total
                )));
            }
            Some(delta)
        }
        _ => None,
    };
    Ok(FrugalityReport {
        rule: rule.clone(),
        outcome,
        bounds,
        ratios,
        max_degree,
        degenerate_zero_bound: degenerate,
    })
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use super::*;
    use crate::matroid::MatroidDescriptor;

    fn set(elems: &[usize]) -> AgentSet {
        elems.iter().copied().collect()
    }

    fn edge(n: usize) -> Graph {
        assert_eq!(n, 2);
        Graph::new(2, vec![(0, 1)]).unwrap()
    }

    fn star() -> Graph {
        Graph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn diamond() -> (SetSystem, CostVector) {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)]).unwrap();
        let sys = SetSystem::new_path(g, 0, 3).unwrap();
        (sys, CostVector::from_ints(&[2, 1, 2, 5, 5]))
    }

    /// Clique on vertices 1..n-1 plus the pendant edge (0, n-1).
    fn clique_tail(n: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for u in 1..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        edges.push((0, n - 1));
        Graph::new(n, edges).unwrap()
    }

    /// Random loop-free graph with no isolated vertices.
    fn random_graph(rng: &mut StdRng, max_n: usize) -> Graph {
        loop {
            let n = rng.gen_range(3..=max_n);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Graph::new(n, edges).unwrap();
            if (0..n).all(|v| g.degree(v) > 0) {
                return g;
            }
        }
    }

    fn random_costs(rng: &mut StdRng, n: usize, max: i64) -> CostVector {
        CostVector::from_ints(&(0..n).map(|_| rng.gen_range(0..=max)).collect::<Vec<_>>())
    }

    /// Does agent `e` win under `rule` when it bids `at` and everyone else
    /// bids as in `bids`?
    fn wins_at(
        rule: &Rule,
        sys: &SetSystem,
        bids: &CostVector,
        e: Agent,
        at: &Rat,
        caps: &Caps,
    ) -> bool {
        let mut tweaked = bids.as_slice().to_vec();
        tweaked[e] = at.clone();
        let tweaked = CostVector::new(tweaked).unwrap();
        allocate(rule, sys, &tweaked, caps).unwrap().contains(&e)
    }

    #[test]
    fn rule_names_round_trip() {
        let rules = [
            Rule::Vcg,
            Rule::GreedyVc,
            Rule::LocalRatioVc,
            Rule::Composed(Box::new(Rule::GreedyVc)),
            Rule::Composed(Box::new(Rule::LocalRatioVc)),
            Rule::Composed(Box::new(Rule::Composed(Box::new(Rule::Vcg)))),
        ];
        for rule in rules {
            let printed = rule.to_string();
            assert_eq!(printed.parse::<Rule>().unwrap(), rule, "{printed}");
        }
        assert_eq!(Rule::GreedyVc.to_string(), "greedy");
        assert_eq!(
            "local-ratio+transform".parse::<Rule>().unwrap(),
            Rule::Composed(Box::new(Rule::LocalRatioVc))
        );
        assert!("magic".parse::<Rule>().is_err());
        assert!(!Rule::Vcg.needs_graph());
        assert!(Rule::LocalRatioVc.needs_graph());
        assert!(Rule::Composed(Box::new(Rule::Vcg)).needs_graph());
    }

    #[test]
    fn local_ratio_pays_the_cheaper_endpoint_of_a_single_edge() {
        let sys = SetSystem::new_vertex_cover(edge(2)).unwrap();
        let bids = CostVector::from_ints(&[1, 3]);
        let caps = Caps::default();
        assert_eq!(allocate(&Rule::LocalRatioVc, &sys, &bids, &caps).unwrap(), set(&[0]));
        let t = threshold_payment(&Rule::LocalRatioVc, &sys, &bids, 0, &caps).unwrap();
        assert_eq!(t, Rat::int(3));
    }

    #[test]
    fn local_ratio_walks_the_path_edges_in_order() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let sys = SetSystem::new_vertex_cover(g).unwrap();
        let bids = CostVector::from_ints(&[1, 1, 1]);
        // The first edge zeroes both endpoints, the second is already
        // covered for free, so the middle-only optimum is missed — but
        // still within the factor-two guarantee.
        let chosen = allocate(&Rule::LocalRatioVc, &sys, &bids, &Caps::default()).unwrap();
        assert_eq!(chosen, set(&[0, 1]));
        assert_eq!(bids.total(chosen.iter().copied()), Rat::int(2));
    }

    #[test]
    fn greedy_prefers_coverage_per_bid() {
        let sys = SetSystem::new_vertex_cover(star()).unwrap();
        let caps = Caps::default();
        // Cheap centre: one vertex at ratio 2/3 beats three leaves at 1.
        let bids = CostVector::from_ints(&[2, 1, 1, 1]);
        assert_eq!(allocate(&Rule::GreedyVc, &sys, &bids, &caps).unwrap(), set(&[0]));
        // Expensive centre: the leaves win one by one.
        let bids = CostVector::from_ints(&[4, 1, 1, 1]);
        assert_eq!(allocate(&Rule::GreedyVc, &sys, &bids, &caps).unwrap(), set(&[1, 2, 3]));
    }

    #[test]
    fn vcg_on_the_diamond_pays_eleven_for_the_cheap_path() {
        let (sys, costs) = diamond();
        let rep = frugality(&Rule::Vcg, &sys, &costs, &Caps::default()).unwrap();
        assert_eq!(rep.outcome.selected, set(&[0, 1, 2]));
        assert_eq!(rep.outcome.payments[&0], Rat::int(4));
        assert_eq!(rep.outcome.payments[&1], Rat::int(3));
        assert_eq!(rep.outcome.payments[&2], Rat::int(4));
        assert_eq!(rep.outcome.total, Rat::int(11));
        assert_eq!(rep.outcome.allocation_cost, Rat::int(5));
        // The full payment sits above every benchmark on this instance.
        assert!(rep.bounds.ntumax.value <= rep.outcome.total);
        assert_eq!(rep.ratio(BoundKind::NtuMax), &RatioValue::Finite(Rat::frac(11, 9)));
        assert_eq!(rep.max_degree, None);
    }

    #[test]
    fn transform_swaps_an_overpriced_centre_for_its_leaves() {
        let g = star();
        let bids = CostVector::from_ints(&[10, 1, 1, 1]);
        assert!(!is_locally_optimal(&g, &bids, &set(&[0])).unwrap());
        let out = locally_optimal_transform(&g, &bids, &set(&[0])).unwrap();
        assert_eq!(out, set(&[1, 2, 3]));
        assert!(is_locally_optimal(&g, &bids, &out).unwrap());
        // Already locally optimal covers are fixed points.
        assert_eq!(locally_optimal_transform(&g, &bids, &out).unwrap(), out);
    }

    #[test]
    fn transform_output_is_locally_optimal_and_never_costlier() {
        let mut rng = StdRng::seed_from_u64(907);
        let caps = Caps::default();
        for _ in 0..40 {
            let g = random_graph(&mut rng, 8);
            let n = g.n_vertices();
            let bids = random_costs(&mut rng, n, 6);
            let sys = SetSystem::new_vertex_cover(g.clone()).unwrap();
            let everything: AgentSet = (0..n).collect();
            let lr = allocate(&Rule::LocalRatioVc, &sys, &bids, &caps).unwrap();
            for start in [everything, lr] {
                let before = bids.total(start.iter().copied());
                let out = locally_optimal_transform(&g, &bids, &start).unwrap();
                assert!(g.is_vertex_cover(&out), "{out:?} on {g:?}");
                assert!(is_locally_optimal(&g, &bids, &out).unwrap(), "{out:?} on {g:?}");
                assert!(bids.total(out.iter().copied()) <= before);
            }
        }
    }

    #[test]
    fn clique_tail_vcg_charges_only_the_bridge() {
        let n = 7;
        let sys = SetSystem::new_vertex_cover(clique_tail(n)).unwrap();
        let mut costs = vec![0i64; n];
        costs[0] = 1;
        costs[n - 1] = 1;
        let costs = CostVector::from_ints(&costs);
        let rep = frugality(&Rule::Vcg, &sys, &costs, &Caps::default()).unwrap();
        assert_eq!(rep.outcome.selected, set(&[0, 1, 2, 3, 4, 5]));
        assert_eq!(rep.outcome.payments[&0], Rat::int(1));
        for v in 1..n - 1 {
            assert_eq!(rep.outcome.payments[&v], Rat::zero(), "clique vertex {v}");
        }
        assert_eq!(rep.outcome.total, Rat::int(1));
        // The transfer maximum grows with the clique while the winner's
        // side never collects more than the pendant edge is worth, so VCG
        // undershoots that benchmark by the factor n - 2.
        assert_eq!(rep.bounds.tumax.value, Rat::int((n - 2) as i64));
        assert_eq!(
            &rep.bounds.tumax.value / &rep.outcome.total,
            Rat::int((n - 2) as i64)
        );
        assert_eq!(rep.ratio(BoundKind::NtuMin), &RatioValue::Finite(Rat::one()));
    }

    #[test]
    fn a_lone_substitute_sets_the_price() {
        let sys = SetSystem::new_vertex_cover(edge(2)).unwrap();
        let costs = CostVector::from_ints(&[0, 5]);
        let caps = Caps::default();
        for rule in [
            Rule::Vcg,
            Rule::GreedyVc,
            Rule::LocalRatioVc,
            Rule::Composed(Box::new(Rule::GreedyVc)),
        ] {
            let out = run_mechanism(&rule, &sys, &costs, &caps).unwrap();
            assert_eq!(out.selected, set(&[0]), "{rule}");
            assert_eq!(out.total, Rat::int(5), "{rule}");
        }
    }

    /// Every computed threshold is checked against the defining property
    /// of the supremum: bids strictly below win, bids strictly above
    /// lose. Probing half a lattice step away on each side pins the value
    /// exactly, because the true breakpoint is itself a lattice point.
    #[test]
    fn thresholds_sit_exactly_on_the_breakpoint_lattice() {
        let mut rng = StdRng::seed_from_u64(2214);
        let caps = Caps::default();
        let rules = [
            Rule::Vcg,
            Rule::GreedyVc,
            Rule::LocalRatioVc,
            Rule::Composed(Box::new(Rule::GreedyVc)),
            Rule::Composed(Box::new(Rule::LocalRatioVc)),
        ];
        for _ in 0..12 {
            let g = random_graph(&mut rng, 6);
            let n = g.n_vertices();
            let sys = SetSystem::new_vertex_cover(g).unwrap();
            let bids = random_costs(&mut rng, n, 4);
            for rule in &rules {
                let unit = if rule.contains_greedy() {
                    let l = (1..n as i64).fold(1i64, num_integer::lcm);
                    Rat::frac(1, l)
                } else {
                    Rat::one()
                };
                let half = &unit / Rat::int(2);
                let winners = allocate(rule, &sys, &bids, &caps).unwrap();
                for &e in &winners {
                    let t = threshold_payment(rule, &sys, &bids, e, &caps).unwrap();
                    assert!(&t >= bids.get(e), "{rule}: threshold below the winning bid");
                    if !t.is_zero() {
                        assert!(
                            wins_at(rule, &sys, &bids, e, &(&t - &half), &caps),
                            "{rule}: {e} loses just below its threshold {t}"
                        );
                        assert!(
                            wins_at(rule, &sys, &bids, e, &(&t / Rat::int(2)), &caps),
                            "{rule}: {e} loses at half its threshold {t}"
                        );
                    }
                    assert!(
                        !wins_at(rule, &sys, &bids, e, &(&t + &half), &caps),
                        "{rule}: {e} wins just above its threshold {t}"
                    );
                    assert!(
                        !wins_at(rule, &sys, &bids, e, &(&t + Rat::int(1)), &caps),
                        "{rule}: {e} wins well above its threshold {t}"
                    );
                }
            }
        }
    }

    /// No unilateral deviation beats truthful bidding, and a winner's
    /// payment never depends on its own bid.
    #[test]
    fn payments_never_reward_misreporting() {
        let mut rng = StdRng::seed_from_u64(5150);
        let caps = Caps::default();
        let rules = [
            Rule::Vcg,
            Rule::GreedyVc,
            Rule::LocalRatioVc,
            Rule::Composed(Box::new(Rule::LocalRatioVc)),
        ];
        for _ in 0..10 {
            let g = random_graph(&mut rng, 5);
            let n = g.n_vertices();
            let sys = SetSystem::new_vertex_cover(g).unwrap();
            let costs = random_costs(&mut rng, n, 4);
            for rule in &rules {
                let out = run_mechanism(rule, &sys, &costs, &caps).unwrap();
                for e in 0..n {
                    let truthful = match out.payments.get(&e) {
                        Some(t) => t - costs.get(e),
                        None => Rat::zero(),
                    };
                    let deviations = [
                        Rat::zero(),
                        costs.get(e) + Rat::int(3),
                        Rat::frac(rng.gen_range(0..=12), 2),
                    ];
                    for dev in deviations {
                        let mut tweaked = costs.as_slice().to_vec();
                        tweaked[e] = dev.clone();
                        let tweaked = CostVector::new(tweaked).unwrap();
                        let won = allocate(rule, &sys, &tweaked, &caps).unwrap().contains(&e);
                        let utility = if won {
                            let t = threshold_payment(rule, &sys, &tweaked, e, &caps).unwrap();
                            if let Some(paid) = out.payments.get(&e) {
                                assert_eq!(&t, paid, "{rule}: payment moved with agent {e}'s bid");
                            }
                            &t - costs.get(e)
                        } else {
                            Rat::zero()
                        };
                        assert!(
                            utility <= truthful,
                            "{rule}: agent {e} gains by bidding {dev} instead of {}",
                            costs.get(e)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn vcg_on_a_matroid_meets_every_benchmark_exactly() {
        let sys = SetSystem::new_matroid(MatroidDescriptor::Uniform { n: 4, k: 2 }).unwrap();
        let costs = CostVector::from_ints(&[1, 2, 3, 4]);
        let rep = frugality(&Rule::Vcg, &sys, &costs, &Caps::default()).unwrap();
        assert_eq!(rep.outcome.selected, set(&[0, 1]));
        assert_eq!(rep.outcome.total, Rat::int(6));
        for kind in BoundKind::ALL {
            assert_eq!(rep.bounds.get(kind).value, Rat::int(6), "{kind}");
            assert_eq!(rep.ratio(kind), &RatioValue::Finite(Rat::one()), "{kind}");
        }
    }

    #[test]
    fn no_transfer_maximum_never_beats_vcg() {
        let mut rng = StdRng::seed_from_u64(640);
        let caps = Caps::default();
        let mut tried = 0;
        while tried < 30 {
            let n = rng.gen_range(3..=6);
            let mut sets: Vec<AgentSet> = Vec::new();
            for _ in 0..rng.gen_range(2..=6) {
                let s: AgentSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                if !s.is_empty() {
                    sets.push(s);
                }
            }
            if sets.is_empty() {
                continue;
            }
            let sys = SetSystem::new_explicit(n, sets).unwrap();
            if crate::system::first_monopolist(&sys, &caps).unwrap().is_some() {
                continue;
            }
            tried += 1;
            let costs = random_costs(&mut rng, n, 4);
            let rep = frugality(&Rule::Vcg, &sys, &costs, &caps).unwrap();
            assert!(
                rep.bounds.ntumax.value <= rep.outcome.total,
                "no-transfer maximum {} above VCG total {} on {sys:?} with {costs:?}",
                rep.bounds.ntumax.value,
                rep.outcome.total
            );
        }
    }

    #[test]
    fn local_ratio_stays_within_twice_the_optimum() {
        let mut rng = StdRng::seed_from_u64(3111);
        let caps = Caps::default();
        for _ in 0..20 {
            let g = random_graph(&mut rng, 9);
            let n = g.n_vertices();
            let bids = random_costs(&mut rng, n, 6);
            let sys = SetSystem::new_vertex_cover(g.clone()).unwrap();
            let chosen = allocate(&Rule::LocalRatioVc, &sys, &bids, &caps).unwrap();
            let opt = (0u32..1 << n)
                .filter_map(|mask| {
                    let cand: AgentSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                    g.is_vertex_cover(&cand).then(|| bids.total(cand.iter().copied()))
                })
                .min()
                .unwrap();
            let cost = bids.total(chosen.iter().copied());
            assert!(
                cost <= Rat::int(2) * &opt,
                "local ratio paid {cost} against optimum {opt} on {g:?}"
            );
        }
    }

    #[test]
    fn rules_produce_locally_optimal_covers() {
        let mut rng = StdRng::seed_from_u64(808);
        let caps = Caps::default();
        for _ in 0..25 {
            let g = random_graph(&mut rng, 7);
            let n = g.n_vertices();
            let bids = random_costs(&mut rng, n, 5);
            let sys = SetSystem::new_vertex_cover(g.clone()).unwrap();
            for rule in [Rule::Vcg, Rule::LocalRatioVc] {
                let chosen = allocate(&rule, &sys, &bids, &caps).unwrap();
                assert!(
                    is_locally_optimal(&g, &bids, &chosen).unwrap(),
                    "{rule} output {chosen:?} on {g:?} with {bids:?}"
                );
            }
            // Greedy may in principle leave an overpriced pick behind; the
            // transform is the advertised repair, so only the composed
            // version is held to the guarantee.
            let repaired =
                allocate(&Rule::Composed(Box::new(Rule::GreedyVc)), &sys, &bids, &caps).unwrap();
            assert!(is_locally_optimal(&g, &bids, &repaired).unwrap());
        }
    }

    /// The two links behind the 2Δ guarantee: a locally optimal winner
    /// set collects at most Δ times the whole graph, and the no-transfer
    /// minimum is at least half the whole graph.
    #[test]
    fn locally_optimal_payments_respect_the_degree_bound() {
        let mut rng = StdRng::seed_from_u64(4242);
        let caps = Caps::default();
        for _ in 0..15 {
            let g = random_graph(&mut rng, 6);
            let n = g.n_vertices();
            let costs = random_costs(&mut rng, n, 5);
            let sys = SetSystem::new_vertex_cover(g.clone()).unwrap();
            let ground = costs.total_all();
            for rule in [Rule::LocalRatioVc, Rule::Composed(Box::new(Rule::GreedyVc))] {
                let rep = frugality(&rule, &sys, &costs, &caps).unwrap();
                let delta = Rat::int(rep.max_degree.unwrap() as i64);
                assert!(rep.outcome.total <= &delta * &ground, "{rule}");
                assert!(Rat::int(2) * &rep.bounds.ntumin.value >= ground, "{rule}");
                if let Some(phi) = rep.ratio(BoundKind::NtuMin).as_finite() {
                    assert!(phi <= &(Rat::int(2) * &delta), "{rule}: ratio {phi} over 2Δ");
                }
            }
        }
    }

    #[test]
    fn bipartite_audit_certifies_half_delta() {
        let caps = Caps::default();
        let rules = [
            Rule::Vcg,
            Rule::LocalRatioVc,
            Rule::Composed(Box::new(Rule::GreedyVc)),
        ];
        for delta in [2usize, 3] {
            for rule in &rules {
                let audit = audit_lower_bound(rule, delta, &caps).unwrap();
                assert_eq!(audit.ntumin, Rat::one(), "{rule} at Δ={delta}");
                assert!(
                    &audit.ratio * Rat::int(2) >= Rat::int(delta as i64),
                    "{rule} at Δ={delta}: ratio {}",
                    audit.ratio
                );
                assert!(2 * audit.witness_degree >= delta);
            }
        }
        let audit = audit_lower_bound(&Rule::LocalRatioVc, 4, &caps).unwrap();
        assert!(&audit.ratio * Rat::int(2) >= Rat::int(4));
    }

    #[test]
    fn mechanisms_reject_bad_inputs() {
        let caps = Caps::default();
        // A monopolist blocks the whole mechanism.
        let sys = SetSystem::new_explicit(3, vec![set(&[0, 1]), set(&[0, 2])]).unwrap();
        let costs = CostVector::from_ints(&[1, 1, 1]);
        assert!(matches!(
            run_mechanism(&Rule::Vcg, &sys, &costs, &caps),
            Err(Error::MonopolyDetected(0))
        ));
        // Thresholds are only defined for winners.
        let (diamond_sys, diamond_costs) = diamond();
        assert!(matches!(
            threshold_payment(&Rule::Vcg, &diamond_sys, &diamond_costs, 3, &caps),
            Err(Error::NotAWinner(3))
        ));
        // Cover rules refuse non-cover systems.
        assert!(matches!(
            allocate(&Rule::GreedyVc, &diamond_sys, &diamond_costs, &caps),
            Err(Error::InvalidInstance(_))
        ));
        // The transform insists on a genuine cover to start from.
        let g = edge(2);
        let bids = CostVector::from_ints(&[1, 1]);
        assert!(matches!(
            locally_optimal_transform(&g, &bids, &AgentSet::new()),
            Err(Error::NotAVertexCover)
        ));
    }
}

//! Constructive lower-bound witnesses for vertex-cover systems.
//!
//! For a minimum-cost cover S, both maxima are at least the cost of the
//! excluded vertices, and the witnesses proving it are combinatorial — no
//! LP required:
//!
//! * transfers: split each outside vertex's cost evenly among its
//!   neighbors in S and pay every winner what lands on it;
//! * no transfers: route flow from the winners' costs to the outside
//!   costs through the cut the graph itself provides, and read each
//!   winner's bid off the flow through it.
//!
//! Since the comparisons also force any witness total below the cost of
//! every cover, and S and V \ S are both covers... no: V \ S need not be
//! a cover. What the flow argument really gives is the one-sided bound,
//! and together with the floors it pins the no-transfer minimum at
//! max(c(S), c(V \ S)) or more. Both constructions assume every vertex
//! has at least one incident edge.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratlp::{augment_from, max_flow, Capacity, FlowNetwork};
use crate::rational::Rat;
use crate::system::{AgentSet, BidVector, CostVector};

fn check_vc_inputs(graph: &Graph, costs: &CostVector, s: &AgentSet) -> Result<()> {
    if costs.len() != graph.n_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "{} costs for {} vertices",
            costs.len(),
            graph.n_vertices()
        )));
    }
    if !graph.is_vertex_cover(s) {
        return Err(Error::NotAVertexCover);
    }
    if let Some(v) = (0..graph.n_vertices()).find(|&v| graph.degree(v) == 0) {
        return Err(Error::InvalidInstance(format!(
            "vertex {v} is isolated; the cost-splitting identities need every vertex covered"
        )));
    }
    Ok(())
}

/// The cost-splitting bid vector: each winner collects, from every
/// non-winning neighbor, that neighbor's cost divided by its number of
/// winning neighbors. The total is exactly c(V \ S), and the vector
/// satisfies the zero floors and all comparisons, so it certifies
/// the transfer maximum at `s` to be at least c(V \ S). `s` must be a
/// minimum-cost cover for the comparison argument to go through.
pub fn vc_tumax_witness(graph: &Graph, costs: &CostVector, s: &AgentSet) -> Result<BidVector> {
    check_vc_inputs(graph, costs, s)?;
    let mut bids: BTreeMap<usize, Rat> = s.iter().map(|&v| (v, Rat::zero())).collect();
    for w in 0..graph.n_vertices() {
        if s.contains(&w) {
            continue;
        }
        let winners: Vec<usize> =
            graph.neighbors(w).into_iter().filter(|v| s.contains(v)).collect();
        // Every edge at w is covered by s, so all neighbors are winners.
        debug_assert_eq!(winners.len(), graph.neighbors(w).len());
        let share = costs.get(w) / &Rat::int(winners.len() as i64);
        for v in winners {
            let b = bids.get_mut(&v).expect("winner present");
            *b = &*b + &share;
        }
    }
    Ok(BidVector::new(bids))
}

/// The flow bid vector for the no-transfer maximum. When the winners
/// already cost at least the rest, their costs themselves are the
/// witness. Otherwise, route winner costs toward outside costs in the
/// bipartite network S -> V \ S (source feeds winners at their costs,
/// outside vertices drain at theirs):
///
/// * winners cut off from the source (their source arc crosses the min
///   cut) bid their own cost;
/// * for the others, re-run the flow on the sink-side piece with the
///   source arcs uncapped, and each such winner bids the flow through
///   it, which can only have grown.
///
/// The result satisfies the cost floors and all comparisons and totals
/// at least c(V \ S). `s` must be a minimum-cost cover.
pub fn vc_ntumax_witness(graph: &Graph, costs: &CostVector, s: &AgentSet) -> Result<BidVector> {
    check_vc_inputs(graph, costs, s)?;
    let n = graph.n_vertices();
    let outside_cost: Rat = (0..n).filter(|v| !s.contains(v)).map(|v| costs.get(v)).sum();
    let s_cost: Rat = s.iter().map(|&v| costs.get(v)).sum();
    if s_cost >= outside_cost {
        return Ok(BidVector::from_pairs(s.iter().map(|&v| (v, costs.get(v).clone()))));
    }

    let source = n;
    let sink = n + 1;
    let build = |winners: &dyn Fn(usize) -> bool,
                 outsiders: &dyn Fn(usize) -> bool,
                 uncapped_source: bool| {
        let mut net = FlowNetwork::new(n + 2);
        let mut source_arc: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            if winners(v) {
                let cap = if uncapped_source {
                    Capacity::Infinite
                } else {
                    Capacity::Finite(costs.get(v).clone())
                };
                source_arc.insert(v, net.add_arc(source, v, cap));
            }
        }
        for i in 0..graph.num_edges() {
            let (a, b) = graph.edge(i);
            let (v, w) = if s.contains(&a) && !s.contains(&b) {
                (a, b)
            } else if s.contains(&b) && !s.contains(&a) {
                (b, a)
            } else {
                continue; // both endpoints are winners
            };
            if winners(v) && outsiders(w) {
                net.add_arc(v, w, Capacity::Infinite);
            }
        }
        for w in 0..n {
            if outsiders(w) {
                net.add_arc(w, sink, Capacity::Finite(costs.get(w).clone()));
            }
        }
        (net, source_arc)
    };

    // Full network: where does the graph cut the winners' budget?
    let in_s = |v: usize| s.contains(&v);
    let out_s = |v: usize| v < n && !s.contains(&v);
    let (net, _) = build(&in_s, &out_s, false);
    let first = max_flow(&net, source, sink)?;
    let cut_winners: AgentSet =
        s.iter().copied().filter(|v| first.cut_source_side.contains(v)).collect();
    let kept_winners: AgentSet =
        s.iter().copied().filter(|v| !first.cut_source_side.contains(v)).collect();
    let kept_outside: AgentSet = (0..n)
        .filter(|v| !s.contains(v) && !first.cut_source_side.contains(v))
        .collect();

    // Sink-side piece at original capacities: its flow saturates every
    // kept winner's source arc.
    let in_kept = |v: usize| kept_winners.contains(&v);
    let out_kept = |v: usize| kept_outside.contains(&v);
    let (piece, piece_arcs) = build(&in_kept, &out_kept, false);
    let base = max_flow(&piece, source, sink)?;
    let kept_cost: Rat = kept_winners.iter().map(|&v| costs.get(v)).sum();
    if base.value != kept_cost {
        return Err(Error::InvariantViolated(format!(
            "sink-side flow {} differs from its winners' cost {kept_cost}",
            base.value
        )));
    }

    // Uncap the source arcs and keep pushing; arc ids line up because the
    // two networks are built identically.
    let (uncapped, uncapped_arcs) = build(&in_kept, &out_kept, true);
    debug_assert_eq!(piece_arcs, uncapped_arcs);
    let grown = augment_from(&uncapped, base.flows, source, sink)?;
    let kept_outside_cost: Rat = kept_outside.iter().map(|&v| costs.get(v)).sum();
    if grown.value != kept_outside_cost {
        return Err(Error::InvariantViolated(format!(
            "augmented flow {} differs from the outside cost {kept_outside_cost}",
            grown.value
        )));
    }

    let mut bids: BTreeMap<usize, Rat> = BTreeMap::new();
    for &v in &cut_winners {
        bids.insert(v, costs.get(v).clone());
    }
    for &v in &kept_winners {
        let flow = grown.flows[uncapped_arcs[&v]].clone();
        if &flow < costs.get(v) {
            return Err(Error::InvariantViolated(format!(
                "flow through winner {v} fell below its cost"
            )));
        }
        bids.insert(v, flow);
    }
    let witness = BidVector::new(bids);
    if witness.total() < outside_cost {
        return Err(Error::InvariantViolated(format!(
            "flow witness totals {} below the outside cost {outside_cost}",
            witness.total()
        )));
    }
    Ok(witness)
}

//! Exact max-flow / min-cut on small directed networks, via shortest
//! augmenting paths (Edmonds–Karp). Arcs may carry infinite capacity;
//! boundedness is decided up front, exactly: the flow value is infinite
//! iff the sink is reachable from the source through infinite arcs alone,
//! since otherwise the set reachable that way is a finite cut.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rat),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: Capacity,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    num_nodes: usize,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new(num_nodes: usize) -> FlowNetwork {
        FlowNetwork { num_nodes, arcs: Vec::new() }
    }

    /// Adds a directed arc and returns its id. Ids index the flow vectors
    /// in results.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Capacity) -> usize {
        assert!(from < self.num_nodes && to < self.num_nodes, "arc endpoint out of range");
        if let Capacity::Finite(c) = &capacity {
            assert!(!c.is_negative(), "negative arc capacity");
        }
        self.arcs.push(FlowArc { from, to, capacity });
        self.arcs.len() - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: Rat,
    /// Flow on each arc, indexed by arc id.
    pub flows: Vec<Rat>,
    /// The source side of a minimum cut (residual-reachable nodes).
    pub cut_source_side: BTreeSet<usize>,
    pub cut_sink_side: BTreeSet<usize>,
}

pub fn max_flow(net: &FlowNetwork, s: usize, t: usize) -> Result<FlowResult> {
    augment_from(net, vec![Rat::zero(); net.arcs.len()], s, t)
}

/// Continues augmenting from an existing feasible flow. The base must
/// respect capacities and conserve flow at every node other than `s` and
/// `t`; the result is a maximum flow (the augmenting-path optimality
/// argument does not care where the starting flow came from).
pub fn augment_from(
    net: &FlowNetwork,
    base: Vec<Rat>,
    s: usize,
    t: usize,
) -> Result<FlowResult> {
    if s >= net.num_nodes || t >= net.num_nodes {
        return Err(Error::InvalidInstance("flow endpoint out of range".into()));
    }
    if s == t {
        return Err(Error::InvalidInstance("flow source equals sink".into()));
    }
    validate_flow(net, &base, s, t)?;

    // Boundedness: can t be reached through infinite arcs only?
    let mut seen = vec![false; net.num_nodes];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        for arc in &net.arcs {
            if arc.from == u && arc.capacity == Capacity::Infinite && !seen[arc.to] {
                seen[arc.to] = true;
                queue.push_back(arc.to);
            }
        }
    }
    if seen[t] {
        return Err(Error::UnboundedFlow);
    }

    // Outgoing and incoming arc ids per node, in insertion order, so the
    // BFS (and hence the final flow) is deterministic.
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); net.num_nodes];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); net.num_nodes];
    for (id, arc) in net.arcs.iter().enumerate() {
        out[arc.from].push(id);
        inc[arc.to].push(id);
    }

    let mut flows = base;
    let forward_residual = |flows: &[Rat], id: usize| -> Option<Rat> {
        match &net.arcs[id].capacity {
            Capacity::Infinite => None, // unlimited
            Capacity::Finite(c) => Some(c - &flows[id]),
        }
    };

    loop {
        // BFS over the residual graph; parent[v] = (arc id, is_forward).
        let mut parent: Vec<Option<(usize, bool)>> = vec![None; net.num_nodes];
        let mut seen = vec![false; net.num_nodes];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &id in &out[u] {
                let open = match forward_residual(&flows, id) {
                    None => true,
                    Some(r) => !r.is_zero(),
                };
                let v = net.arcs[id].to;
                if open && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((id, true));
                    if v == t {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
            for &id in &inc[u] {
                let v = net.arcs[id].from;
                if !flows[id].is_zero() && !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((id, false));
                    if v == t {
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            // Maximum reached; the reachable set is a minimum cut.
            let cut_source_side: BTreeSet<usize> =
                (0..net.num_nodes).filter(|&v| seen[v]).collect();
            let cut_sink_side: BTreeSet<usize> =
                (0..net.num_nodes).filter(|&v| !seen[v]).collect();
            let value = flow_value(net, &flows, s);
            return Ok(FlowResult { value, flows, cut_source_side, cut_sink_side });
        }

        // Walk the path back, collect the bottleneck, then push it.
        let mut path: Vec<(usize, bool)> = Vec::new();
        let mut v = t;
        while v != s {
            let (id, fwd) = parent[v].expect("path back to source");
            path.push((id, fwd));
            v = if fwd { net.arcs[id].from } else { net.arcs[id].to };
        }
        let mut bottleneck: Option<Rat> = None;
        for &(id, fwd) in &path {
            let room = if fwd {
                match forward_residual(&flows, id) {
                    None => continue,
                    Some(r) => r,
                }
            } else {
                flows[id].clone()
            };
            if bottleneck.as_ref().is_none_or(|b| &room < b) {
                bottleneck = Some(room);
            }
        }
        // All-infinite paths were excluded up front, so some arc bounds
        // the push.
        let delta = bottleneck.expect("finite bottleneck");
        debug_assert!(!delta.is_zero() && !delta.is_negative());
        for &(id, fwd) in &path {
            if fwd {
                flows[id] = &flows[id] + &delta;
            } else {
                flows[id] = &flows[id] - &delta;
            }
        }
    }
}

fn flow_value(net: &FlowNetwork, flows: &[Rat], s: usize) -> Rat {
    let mut value = Rat::zero();
    for (id, arc) in net.arcs.iter().enumerate() {
        if arc.from == s {
            value += &flows[id];
        }
        if arc.to == s {
            value -= &flows[id];
        }
    }
    value
}

fn validate_flow(net: &FlowNetwork, flows: &[Rat], s: usize, t: usize) -> Result<()> {
    if flows.len() != net.arcs.len() {
        return Err(Error::InfeasibleBase(format!(
            "{} flow entries for {} arcs",
            flows.len(),
            net.arcs.len()
        )));
    }
    for (id, arc) in net.arcs.iter().enumerate() {
        if flows[id].is_negative() {
            return Err(Error::InfeasibleBase(format!("negative flow on arc {id}")));
        }
        if let Capacity::Finite(c) = &arc.capacity {
            if &flows[id] > c {
                return Err(Error::InfeasibleBase(format!("arc {id} over capacity")));
            }
        }
    }
    for v in 0..net.num_nodes {
        if v == s || v == t {
            continue;
        }
        let mut net_out = Rat::zero();
        for (id, arc) in net.arcs.iter().enumerate() {
            if arc.from == v {
                net_out += &flows[id];
            }
            if arc.to == v {
                net_out -= &flows[id];
            }
        }
        if !net_out.is_zero() {
            return Err(Error::InfeasibleBase(format!("conservation fails at node {v}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn fin(n: i64) -> Capacity {
        Capacity::Finite(Rat::int(n))
    }

    #[test]
    fn small_network_flow_and_cut() {
        // s=0, a=1, b=2, t=3.
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, fin(3));
        net.add_arc(0, 2, fin(2));
        net.add_arc(1, 2, fin(1));
        net.add_arc(1, 3, fin(2));
        net.add_arc(2, 3, fin(3));
        let res = max_flow(&net, 0, 3).unwrap();
        assert_eq!(res.value, Rat::int(5));
        // Both source arcs saturated: the cut is {s} alone.
        assert_eq!(res.cut_source_side, BTreeSet::from([0]));
        assert_eq!(res.cut_sink_side, BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn fractional_capacities_stay_exact() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, Capacity::Finite(Rat::frac(1, 3)));
        net.add_arc(0, 1, Capacity::Finite(Rat::frac(1, 6)));
        net.add_arc(1, 2, Capacity::Finite(Rat::frac(5, 12)));
        let res = max_flow(&net, 0, 2).unwrap();
        assert_eq!(res.value, Rat::frac(5, 12));
    }

    #[test]
    fn infinite_arcs_are_fine_when_cut_is_finite() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, Capacity::Infinite);
        net.add_arc(1, 2, fin(7));
        let res = max_flow(&net, 0, 2).unwrap();
        assert_eq!(res.value, Rat::int(7));
        assert_eq!(res.cut_source_side, BTreeSet::from([0, 1]));
    }

    #[test]
    fn unbounded_flow_is_detected() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, Capacity::Infinite);
        net.add_arc(1, 2, Capacity::Infinite);
        net.add_arc(0, 2, fin(1));
        assert!(matches!(max_flow(&net, 0, 2), Err(Error::UnboundedFlow)));
    }

    #[test]
    fn needs_backward_edges_to_reach_optimum() {
        // The classic rerouting example: a greedy forward-only path
        // through the middle arc must be partially undone.
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, fin(1));
        net.add_arc(0, 2, fin(1));
        net.add_arc(1, 2, fin(1));
        net.add_arc(1, 3, fin(1));
        net.add_arc(2, 3, fin(1));
        let res = max_flow(&net, 0, 3).unwrap();
        assert_eq!(res.value, Rat::int(2));
    }

    #[test]
    fn augmenting_a_scaled_down_max_flow_recovers_it() {
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, fin(3));
        net.add_arc(0, 2, fin(2));
        net.add_arc(1, 2, fin(1));
        net.add_arc(1, 3, fin(2));
        net.add_arc(2, 3, fin(3));
        let full = max_flow(&net, 0, 3).unwrap();
        let half: Vec<Rat> = full.flows.iter().map(|f| f * &Rat::frac(1, 2)).collect();
        let resumed = augment_from(&net, half, 0, 3).unwrap();
        assert_eq!(resumed.value, full.value);
    }

    #[test]
    fn invalid_bases_are_rejected() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, fin(1));
        net.add_arc(1, 2, fin(1));
        // Conservation broken at node 1.
        let res = augment_from(&net, vec![Rat::int(1), Rat::zero()], 0, 2);
        assert!(matches!(res, Err(Error::InfeasibleBase(_))));
        // Over capacity.
        let res = augment_from(&net, vec![Rat::int(2), Rat::int(2)], 0, 2);
        assert!(matches!(res, Err(Error::InfeasibleBase(_))));
    }

    /// Brute-force min cut: minimum, over all source-side subsets, of the
    /// total capacity leaving the subset.
    fn brute_min_cut(net: &FlowNetwork, s: usize, t: usize) -> Option<Rat> {
        let n = net.num_nodes();
        let mut best: Option<Rat> = None;
        for mask in 0u32..(1 << n) {
            if mask >> s & 1 == 0 || mask >> t & 1 == 1 {
                continue;
            }
            let mut cap = Rat::zero();
            let mut finite = true;
            for arc in net.arcs() {
                if mask >> arc.from & 1 == 1 && mask >> arc.to & 1 == 0 {
                    match &arc.capacity {
                        Capacity::Finite(c) => cap += c,
                        Capacity::Infinite => {
                            finite = false;
                            break;
                        }
                    }
                }
            }
            if finite && best.as_ref().is_none_or(|b| &cap < b) {
                best = Some(cap);
            }
        }
        best
    }

    #[test]
    fn random_networks_match_brute_force_cuts() {
        let mut rng = StdRng::seed_from_u64(23);
        for trial in 0..80 {
            let n = rng.gen_range(3..=6);
            let mut net = FlowNetwork::new(n);
            for _ in 0..rng.gen_range(3..=10) {
                let from = rng.gen_range(0..n);
                let to = rng.gen_range(0..n);
                let cap = if rng.gen_bool(0.15) {
                    Capacity::Infinite
                } else {
                    Capacity::Finite(Rat::frac(rng.gen_range(0..=8), rng.gen_range(1..=2)))
                };
                net.add_arc(from, to, cap);
            }
            let brute = brute_min_cut(&net, 0, n - 1);
            match max_flow(&net, 0, n - 1) {
                Ok(res) => {
                    assert_eq!(Some(&res.value), brute.as_ref(), "trial {trial}");
                    // The reported cut must pay exactly the flow value.
                    let mut cut_cap = Rat::zero();
                    for arc in net.arcs() {
                        if res.cut_source_side.contains(&arc.from)
                            && res.cut_sink_side.contains(&arc.to)
                        {
                            match &arc.capacity {
                                Capacity::Finite(c) => cut_cap += c,
                                Capacity::Infinite => panic!("infinite arc across min cut"),
                            }
                        }
                    }
                    assert_eq!(cut_cap, res.value, "trial {trial}");
                }
                Err(Error::UnboundedFlow) => assert_eq!(brute, None, "trial {trial}"),
                Err(e) => panic!("trial {trial}: {e}"),
            }
        }
    }
}

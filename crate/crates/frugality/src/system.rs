//! Set systems over a ground set of agents, the cost/bid vectors attached to
//! them, and the basic enumeration operations everything else builds on.
//!
//! Feasible families come in four flavors: explicit lists, s-t path systems
//! (agents are edges; a set is feasible when it contains an s-t path),
//! vertex-cover systems (agents are vertices; a set is feasible when it
//! covers every edge), and matroid base systems. Ties between equal-cost
//! feasible sets are always broken by comparing the sorted agent-index
//! sequences lexicographically, so every operation here is deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::MatroidDescriptor;
use crate::rational::Rat;

pub type Agent = usize;
pub type AgentSet = BTreeSet<Agent>;

/// Per-agent true costs; nonnegative exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CostVector(Vec<Rat>);

impl CostVector {
    pub fn new(costs: Vec<Rat>) -> Result<CostVector> {
        if let Some(i) = costs.iter().position(Rat::is_negative) {
            return Err(Error::InvalidInstance(format!("negative cost for agent {i}")));
        }
        Ok(CostVector(costs))
    }

    pub fn from_ints(costs: &[i64]) -> CostVector {
        CostVector::new(costs.iter().map(|&c| Rat::int(c)).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, e: Agent) -> &Rat {
        &self.0[e]
    }

    pub fn set(&mut self, e: Agent, value: Rat) -> Result<()> {
        if value.is_negative() {
            return Err(Error::InvalidInstance(format!("negative cost for agent {e}")));
        }
        self.0[e] = value;
        Ok(())
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    pub fn total(&self, agents: impl IntoIterator<Item = Agent>) -> Rat {
        agents.into_iter().map(|e| &self.0[e]).sum()
    }

    pub fn total_all(&self) -> Rat {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<Rat>> for CostVector {
    type Error = Error;
    fn try_from(v: Vec<Rat>) -> Result<CostVector> {
        CostVector::new(v)
    }
}

/// Bids for the agents of one particular feasible set; the domain is exactly
/// that set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BidVector {
    bids: BTreeMap<Agent, Rat>,
}

impl BidVector {
    pub fn new(bids: BTreeMap<Agent, Rat>) -> BidVector {
        BidVector { bids }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Agent, Rat)>) -> BidVector {
        BidVector { bids: pairs.into_iter().collect() }
    }

    pub fn domain(&self) -> AgentSet {
        self.bids.keys().copied().collect()
    }

    pub fn get(&self, e: Agent) -> Option<&Rat> {
        self.bids.get(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Agent, &Rat)> {
        self.bids.iter()
    }

    pub fn total(&self) -> Rat {
        self.bids.values().sum()
    }

    pub fn total_over<'a>(&self, agents: impl IntoIterator<Item = &'a Agent>) -> Rat {
        agents.into_iter().filter_map(|e| self.bids.get(e)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FeasibleFamily {
    Explicit(Vec<AgentSet>),
    Path { graph: Graph, s: usize, t: usize },
    VertexCover { graph: Graph },
    Matroid(MatroidDescriptor),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetSystem {
    n: usize,
    family: FeasibleFamily,
    labels: Option<Vec<String>>,
}

impl SetSystem {
    /// Explicit family over agents `0..n`. Listed sets must be nonempty and
    /// in range; exact duplicates are dropped and the list is sorted.
    pub fn new_explicit(n: usize, sets: Vec<AgentSet>) -> Result<SetSystem> {
        let mut sets = sets;
        for set in &sets {
            if set.is_empty() {
                return Err(Error::InvalidInstance("empty feasible set".into()));
            }
            if let Some(&e) = set.iter().find(|&&e| e >= n) {
                return Err(Error::InvalidInstance(format!(
                    "agent {e} out of range for ground set of {n}"
                )));
            }
        }
        sets.sort();
        sets.dedup();
        Ok(SetSystem { n, family: FeasibleFamily::Explicit(sets), labels: None })
    }

    /// Path system: agents are the edges of `graph`, a set is feasible when
    /// it contains an s-t path.
    pub fn new_path(graph: Graph, s: usize, t: usize) -> Result<SetSystem> {
        if s >= graph.n_vertices() || t >= graph.n_vertices() {
            return Err(Error::InvalidInstance("path endpoint out of range".into()));
        }
        if s == t {
            return Err(Error::InvalidInstance("path endpoints must differ".into()));
        }
        let n = graph.num_edges();
        Ok(SetSystem { n, family: FeasibleFamily::Path { graph, s, t }, labels: None })
    }

    /// Vertex-cover system: agents are the vertices of `graph`. The graph
    /// must be loop-free (a self-loop would make its vertex a monopolist)
    /// and have at least one edge (otherwise the empty set would be the only
    /// sensible cover, and feasible sets must be nonempty).
    pub fn new_vertex_cover(graph: Graph) -> Result<SetSystem> {
        if graph.has_self_loop() {
            return Err(Error::InvalidInstance("self-loop in vertex-cover graph".into()));
        }
        if graph.num_edges() == 0 {
            return Err(Error::InvalidInstance("vertex-cover graph has no edges".into()));
        }
        let n = graph.n_vertices();
        Ok(SetSystem { n, family: FeasibleFamily::VertexCover { graph }, labels: None })
    }

    /// Matroid base system. Explicit base lists are validated against the
    /// exchange characterization.
    pub fn new_matroid(descriptor: MatroidDescriptor) -> Result<SetSystem> {
        match &descriptor {
            MatroidDescriptor::Uniform { n, k } => {
                if *k == 0 || *k > *n {
                    return Err(Error::InvalidInstance(format!(
                        "uniform matroid needs 1 <= k <= n, got k={k}, n={n}"
                    )));
                }
            }
            MatroidDescriptor::Graphic(g) => {
                if g.num_edges() == 0 {
                    return Err(Error::InvalidInstance("graphic matroid has no edges".into()));
                }
            }
            MatroidDescriptor::ExplicitBases(bases) => {
                if !crate::matroid::validate_matroid(bases)? {
                    return Err(Error::NotAMatroid);
                }
                if bases.iter().any(|b| b.is_empty()) {
                    return Err(Error::InvalidInstance("empty base".into()));
                }
            }
        }
        let n = descriptor.num_elements();
        Ok(SetSystem { n, family: FeasibleFamily::Matroid(descriptor), labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<SetSystem> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} agents",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &FeasibleFamily {
        &self.family
    }

    pub fn label(&self, e: Agent) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => format!("e{e}"),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.n).map(|e| self.label(e)).collect()
    }

    /// Membership test, without any enumeration.
    pub fn contains(&self, set: &AgentSet) -> bool {
        if set.is_empty() || set.iter().any(|&e| e >= self.n) {
            return false;
        }
        match &self.family {
            FeasibleFamily::Explicit(sets) => sets.contains(set),
            FeasibleFamily::Path { graph, s, t } => graph.connects(*s, *t, set),
            FeasibleFamily::VertexCover { graph } => graph.is_vertex_cover(set),
            FeasibleFamily::Matroid(m) => m.is_base(set),
        }
    }

    /// Adds one feasible set to an explicit family, returning the grown
    /// system. Only explicit families support this.
    pub fn add_feasible_set(&self, set: AgentSet) -> Result<SetSystem> {
        match &self.family {
            FeasibleFamily::Explicit(sets) => {
                let mut sets = sets.clone();
                sets.push(set);
                let mut grown = SetSystem::new_explicit(self.n, sets)?;
                grown.labels = self.labels.clone();
                Ok(grown)
            }
            _ => Err(Error::InvalidInstance(
                "add_feasible_set requires an explicit family".into(),
            )),
        }
    }
}

/// Walks the feasible family, calling `visit` for each set. With
/// `minimal_only` the walk is restricted to inclusion-minimal members. The
/// visit order is unspecified; callers that need determinism sort.
fn visit_feasible(
    system: &SetSystem,
    minimal_only: bool,
    caps: &Caps,
    visit: &mut dyn FnMut(AgentSet),
) -> Result<()> {
    let mut budget = Budget::new(caps.enumeration);
    match &system.family {
        FeasibleFamily::Explicit(sets) => {
            for (i, set) in sets.iter().enumerate() {
                budget.spend(1)?;
                if minimal_only && sets.iter().enumerate().any(|(j, other)| {
                    j != i && other.is_subset(set) && other.len() < set.len()
                }) {
                    continue;
                }
                visit(set.clone());
            }
        }
        FeasibleFamily::Path { graph, s, t } => {
            if minimal_only {
                visit_simple_paths(graph, *s, *t, &mut budget, visit)?;
            } else {
                for_each_mask(system.n, &mut budget, &mut |set: &AgentSet| {
                    if graph.connects(*s, *t, set) {
                        visit(set.clone());
                    }
                })?;
            }
        }
        FeasibleFamily::VertexCover { graph } => {
            for_each_mask(system.n, &mut budget, &mut |set: &AgentSet| {
                if !set.is_empty() && graph.is_vertex_cover(set) {
                    let minimal = !minimal_only
                        || set.iter().all(|&v| {
                            graph
                                .incident(v)
                                .iter()
                                .any(|&i| {
                                    let (a, b) = graph.edge(i);
                                    let other = if a == v { b } else { a };
                                    !set.contains(&other)
                                })
                        });
                    if minimal {
                        visit(set.clone());
                    }
                }
            })?;
        }
        FeasibleFamily::Matroid(m) => {
            // Bases form an antichain, so the two modes coincide.
            for base in m.bases()? {
                budget.spend(1)?;
                visit(base);
            }
        }
    }
    Ok(())
}

struct Budget {
    left: usize,
    cap: usize,
}

impl Budget {
    fn new(cap: usize) -> Budget {
        Budget { left: cap, cap }
    }

    fn spend(&mut self, amount: usize) -> Result<()> {
        if amount > self.left {
            return Err(Error::CapExceeded(self.cap));
        }
        self.left -= amount;
        Ok(())
    }
}

fn for_each_mask(
    n: usize,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&AgentSet),
) -> Result<()> {
    let total = 1usize
        .checked_shl(n as u32)
        .ok_or(Error::CapExceeded(budget.cap))?;
    budget.spend(total)?;
    for mask in 0usize..total {
        let set: AgentSet = (0..n).filter(|&e| mask >> e & 1 == 1).collect();
        visit(&set);
    }
    Ok(())
}

/// Depth-first enumeration of simple s-t paths, as edge sets. Incident edges
/// are explored in index order.
fn visit_simple_paths(
    graph: &Graph,
    s: usize,
    t: usize,
    budget: &mut Budget,
    visit: &mut dyn FnMut(AgentSet),
) -> Result<()> {
    let mut on_path = vec![false; graph.n_vertices()];
    let mut edges: Vec<usize> = Vec::new();
    fn rec(
        graph: &Graph,
        u: usize,
        t: usize,
        on_path: &mut Vec<bool>,
        edges: &mut Vec<usize>,
        budget: &mut Budget,
        visit: &mut dyn FnMut(AgentSet),
    ) -> Result<()> {
        budget.spend(1)?;
        if u == t {
            visit(edges.iter().copied().collect());
            return Ok(());
        }
        on_path[u] = true;
        for i in graph.incident(u) {
            let (a, b) = graph.edge(i);
            let next = if a == u { b } else { a };
            if next == u || on_path[next] {
                continue; // self-loop or revisit
            }
            edges.push(i);
            rec(graph, next, t, on_path, edges, budget, visit)?;
            edges.pop();
        }
        on_path[u] = false;
        Ok(())
    }
    rec(graph, s, t, &mut on_path, &mut edges, budget, visit)
}

/// Lists the feasible family (or its inclusion-minimal members), sorted
/// lexicographically and deduplicated.
pub fn enumerate_feasible(
    system: &SetSystem,
    minimal_only: bool,
    caps: &Caps,
) -> Result<Vec<AgentSet>> {
    let mut out: Vec<AgentSet> = Vec::new();
    visit_feasible(system, minimal_only, caps, &mut |set| out.push(set))?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::NoFeasibleSet);
    }
    Ok(out)
}

/// The cheapest feasible set; ties are broken toward the lexicographically
/// least sorted index sequence. Note the winner need not be
/// inclusion-minimal: zero-cost agents with small indices join it.
pub fn cheapest_feasible_set(
    system: &SetSystem,
    costs: &CostVector,
    caps: &Caps,
) -> Result<AgentSet> {
    check_costs(system, costs)?;
    let mut best: Option<(Rat, AgentSet)> = None;
    visit_feasible(system, false, caps, &mut |set| {
        let cost = costs.total(set.iter().copied());
        let better = match &best {
            None => true,
            Some((c, s)) => (&cost, &set) < (c, s),
        };
        if better {
            best = Some((cost, set));
        }
    })?;
    best.map(|(_, set)| set).ok_or(Error::NoFeasibleSet)
}

/// The cost of the cheapest feasible set. Minimal members suffice because
/// costs are nonnegative.
pub fn min_feasible_cost(system: &SetSystem, costs: &CostVector, caps: &Caps) -> Result<Rat> {
    check_costs(system, costs)?;
    let mut best: Option<Rat> = None;
    visit_feasible(system, true, caps, &mut |set| {
        let cost = costs.total(set.iter().copied());
        if best.as_ref().is_none_or(|b| &cost < b) {
            best = Some(cost);
        }
    })?;
    best.ok_or(Error::NoFeasibleSet)
}

/// True iff every agent is avoided by some feasible set. (It is enough to
/// scan inclusion-minimal members: shrinking a set avoids no fewer agents.)
pub fn is_monopoly_free(system: &SetSystem, caps: &Caps) -> Result<bool> {
    Ok(first_monopolist(system, caps)?.is_none())
}

/// The smallest-index agent contained in every feasible set, if any.
pub fn first_monopolist(system: &SetSystem, caps: &Caps) -> Result<Option<Agent>> {
    let mut avoided = vec![false; system.n];
    let mut any = false;
    visit_feasible(system, true, caps, &mut |set| {
        any = true;
        for (e, flag) in avoided.iter_mut().enumerate() {
            if !set.contains(&e) {
                *flag = true;
            }
        }
    })?;
    if !any {
        return Err(Error::NoFeasibleSet);
    }
    Ok(avoided.iter().position(|&a| !a))
}

fn check_costs(system: &SetSystem, costs: &CostVector) -> Result<()> {
    if costs.len() != system.n {
        return Err(Error::DimensionMismatch(format!(
            "{} costs for {} agents",
            costs.len(),
            system.n
        )));
    }
    Ok(())
}

//! Matroid descriptors, base enumeration, and the base-exchange validation
//! used before treating an explicit family as a matroid.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::system::AgentSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MatroidDescriptor {
    /// All k-subsets of {0, .., n-1} are bases.
    Uniform { n: usize, k: usize },
    /// Bases are the maximal spanning forests; agents are the edges.
    Graphic(Graph),
    /// Bases given outright. Must pass `validate_matroid`.
    ExplicitBases(Vec<AgentSet>),
}

impl MatroidDescriptor {
    /// Number of ground-set elements (agents).
    pub fn num_elements(&self) -> usize {
        match self {
            MatroidDescriptor::Uniform { n, .. } => *n,
            MatroidDescriptor::Graphic(g) => g.num_edges(),
            MatroidDescriptor::ExplicitBases(bases) => bases
                .iter()
                .flat_map(|b| b.iter().copied())
                .max()
                .map_or(0, |m| m + 1),
        }
    }

    /// The common size of every base.
    pub fn rank(&self) -> usize {
        match self {
            MatroidDescriptor::Uniform { k, .. } => *k,
            MatroidDescriptor::Graphic(g) => {
                let all: Vec<usize> = (0..g.num_edges()).collect();
                g.n_vertices() - count_components(g, &all)
            }
            MatroidDescriptor::ExplicitBases(bases) => bases.first().map_or(0, |b| b.len()),
        }
    }

    pub fn is_base(&self, set: &AgentSet) -> bool {
        match self {
            MatroidDescriptor::Uniform { n, k } => {
                set.len() == *k && set.iter().all(|&e| e < *n)
            }
            MatroidDescriptor::Graphic(g) => {
                set.len() == self.rank()
                    && set.iter().all(|&e| e < g.num_edges())
                    && is_forest(g, set)
            }
            MatroidDescriptor::ExplicitBases(bases) => bases.contains(set),
        }
    }

    /// Every base, sorted. Errors with `EmptyFamily` when there are none.
    pub fn bases(&self) -> Result<Vec<AgentSet>> {
        let mut out: Vec<AgentSet> = match self {
            MatroidDescriptor::Uniform { n, k } => {
                if *k == 0 || *k > *n {
                    return Err(Error::EmptyFamily);
                }
                combinations(*n, *k)
            }
            MatroidDescriptor::Graphic(g) => {
                let rank = self.rank();
                if rank == 0 {
                    return Err(Error::EmptyFamily);
                }
                combinations(g.num_edges(), rank)
                    .into_iter()
                    .filter(|set| is_forest(g, set))
                    .collect()
            }
            MatroidDescriptor::ExplicitBases(bases) => bases.clone(),
        };
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(out)
    }
}

/// All k-subsets of {0, .., n-1}, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<AgentSet> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<AgentSet>) {
        if current.len() == k {
            out.push(current.iter().copied().collect());
            return;
        }
        let remaining = k - current.len();
        for e in start..n {
            if n - e < remaining {
                break;
            }
            current.push(e);
            rec(n, k, e + 1, current, out);
            current.pop();
        }
    }
    rec(n, k, 0, &mut current, &mut out);
    out
}

fn count_components(g: &Graph, edge_subset: &[usize]) -> usize {
    let mut parent: Vec<usize> = (0..g.n_vertices()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut components = g.n_vertices();
    for &i in edge_subset {
        let (u, v) = g.edge(i);
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    components
}

fn is_forest(g: &Graph, edge_subset: &AgentSet) -> bool {
    let edges: Vec<usize> = edge_subset.iter().copied().collect();
    g.n_vertices() - count_components(g, &edges) == edges.len()
}

/// Checks the base-exchange characterization: the family is a matroid base
/// family iff all members share one cardinality and every ordered pair
/// (A, B) admits a bijection f from A\B onto B\A with A - e + f(e) in the
/// family for every e. The bijection test is a bipartite perfect matching.
pub fn validate_matroid(bases: &[AgentSet]) -> Result<bool> {
    if bases.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let k = bases[0].len();
    if bases.iter().any(|b| b.len() != k) {
        return Ok(false);
    }
    let family: HashSet<&AgentSet> = bases.iter().collect();
    for a in bases {
        for b in bases {
            if a == b {
                continue;
            }
            let left: Vec<usize> = a.difference(b).copied().collect();
            let right: Vec<usize> = b.difference(a).copied().collect();
            let adjacency: Vec<Vec<usize>> = left
                .iter()
                .map(|&e| {
                    right
                        .iter()
                        .enumerate()
                        .filter(|&(_, &f)| {
                            let mut swapped: AgentSet = a.clone();
                            swapped.remove(&e);
                            swapped.insert(f);
                            family.contains(&swapped)
                        })
                        .map(|(j, _)| j)
                        .collect()
                })
                .collect();
            if max_matching(&adjacency, right.len()) != left.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Simple augmenting-path bipartite matching; returns the matching size.
fn max_matching(adjacency: &[Vec<usize>], right_size: usize) -> usize {
    let mut match_right: Vec<Option<usize>> = vec![None; right_size];
    fn try_augment(
        u: usize,
        adjacency: &[Vec<usize>],
        visited: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for &v in &adjacency[u] {
            if !visited[v] {
                visited[v] = true;
                if match_right[v].is_none()
                    || try_augment(match_right[v].unwrap(), adjacency, visited, match_right)
                {
                    match_right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut size = 0;
    for u in 0..adjacency.len() {
        let mut visited = vec![false; right_size];
        if try_augment(u, adjacency, &mut visited, &mut match_right) {
            size += 1;
        }
    }
    size
}

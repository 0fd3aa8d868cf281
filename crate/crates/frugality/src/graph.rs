//! Undirected multigraphs backing path and vertex-cover set systems.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected multigraph. Vertices are `0..n`; edges carry the index of
/// their position in the edge list, which is also the agent index in
/// edge-agent systems. Parallel edges are allowed, self-loops too (callers
/// that cannot tolerate them reject at construction time).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
        }
        Ok(Graph { n, edges, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn vertex_label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => format!("v{v}"),
        }
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// Distinct neighbors of `v` (excluding `v` itself).
    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a == v && b != v {
                out.insert(b);
            } else if b == v && a != v {
                out.insert(a);
            }
        }
        out
    }

    /// Edge indices incident to `v`, in index order. A self-loop appears once.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].0 == v || self.edges[i].1 == v)
            .collect()
    }

    /// Number of incident edges (a self-loop counts twice, as usual).
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Does the edge subset contain an s-t connection?
    pub fn connects(&self, s: usize, t: usize, edge_subset: &BTreeSet<usize>) -> bool {
        if s == t {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &i in edge_subset {
                let (a, b) = self.edges[i];
                let next = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if next == t {
                    return true;
                }
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        false
    }

    /// Does the vertex subset cover every edge?
    pub fn is_vertex_cover(&self, vertices: &BTreeSet<usize>) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| vertices.contains(&u) || vertices.contains(&v))
    }

    /// Edge indices sorted by (smaller endpoint, larger endpoint, index):
    /// the fixed processing order used by the local-ratio allocation.
    pub fn lex_edge_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by_key(|&i| {
            let (u, v) = self.edges[i];
            (u.min(v), u.max(v), i)
        });
        order
    }
}

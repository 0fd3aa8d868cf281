//! Instance constructions: the named benchmark family used throughout the
//! tests and docs, plus seeded random instances for property sweeps.
//!
//! Named instances parse from strings like `clique-tail:7` or
//! `clique-tail(7)`. Random instances are fully determined by their
//! parameters and seed (ChaCha8 keystream), so every run reproduces the
//! same system and costs.

pub mod x3c;

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matroid::MatroidDescriptor;
use crate::system::{is_monopoly_free, AgentSet, CostVector, SetSystem};

/// Base names understood by [`paper_instance`]. The parametric ones take a
/// size, as in `clique-tail:7`.
pub const NAMED_INSTANCES: [&str; 9] = [
    "diamond-example3",
    "diamond-prop3i",
    "diamond-prop3ii",
    "diamond-prop3iii",
    "clique-tail(n)",
    "choice-of-s",
    "nonmon-family(n)",
    "double-diamond",
    "bipartite-lb(delta)",
];

/// Splits `name`, `name:k`, and `name(k)` into the base name and the
/// optional numeric argument.
fn split_name(spec: &str) -> Result<(&str, Option<usize>)> {
    let (base, arg) = if let Some((base, rest)) = spec.split_once(':') {
        (base, Some(rest))
    } else if let Some((base, rest)) = spec.split_once('(') {
        match rest.strip_suffix(')') {
            Some(inner) => (base, Some(inner)),
            None => return Err(Error::UnknownInstance(format!("instance `{spec}`"))),
        }
    } else {
        (spec, None)
    };
    match arg {
        None => Ok((base, None)),
        Some(text) => match text.trim().parse::<usize>() {
            Ok(k) => Ok((base, Some(k))),
            Err(_) => Err(Error::UnknownInstance(format!("instance `{spec}`"))),
        },
    }
}

fn require_size(base: &str, arg: Option<usize>, least: usize) -> Result<usize> {
    match arg {
        Some(k) if k >= least => Ok(k),
        Some(k) => Err(Error::UnsatisfiableParams(format!(
            "`{base}` needs a size of at least {least}, got {k}"
        ))),
        None => Err(Error::UnsatisfiableParams(format!(
            "`{base}` needs a size, e.g. `{base}:{least}`"
        ))),
    }
}

fn labelled(sys: SetSystem, labels: &[&str]) -> SetSystem {
    sys.with_labels(labels.iter().map(|s| s.to_string()).collect())
        .expect("label count matches agent count")
}

/// The five-edge diamond on vertices A, B, C, D: two parallel A–D routes
/// sharing the middle edge, plus the two chords that create the zig-zag
/// routes.
fn diamond_system() -> SetSystem {
    let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)])
        .and_then(|g| g.with_labels(vec!["A".into(), "B".into(), "C".into(), "D".into()]))
        .expect("diamond graph is well formed");
    let sys = SetSystem::new_path(g, 0, 3).expect("diamond endpoints are valid");
    labelled(sys, &["AB", "BC", "CD", "AC", "BD"])
}

/// Builds a named instance. Accepted names are listed in
/// [`NAMED_INSTANCES`]; parametric ones read their size from `name:k` or
/// `name(k)`.
pub fn paper_instance(name: &str) -> Result<(SetSystem, CostVector)> {
    let (base, arg) = split_name(name)?;
    match base {
        // The running example: every benchmark differs on it.
        "diamond-example3" => Ok((diamond_system(), CostVector::from_ints(&[2, 1, 2, 5, 5]))),
        // Three cost patterns on the same diamond, each opening one gap in
        // the benchmark chain to a factor of two.
        "diamond-prop3i" => Ok((diamond_system(), CostVector::from_ints(&[0, 0, 0, 1, 1]))),
        "diamond-prop3ii" => Ok((diamond_system(), CostVector::from_ints(&[0, 1, 0, 1, 1]))),
        "diamond-prop3iii" => Ok((diamond_system(), CostVector::from_ints(&[1, 0, 1, 1, 1]))),
        // Clique on X1..X(n-1) with the pendant edge X0–X(n-1); unit costs
        // on the two pendant endpoints. The transfer maximum scales with
        // the clique while the other benchmarks stay at one.
        "clique-tail" => {
            let n = require_size(base, arg, 3)?;
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for u in 1..n {
                for v in (u + 1)..n {
                    edges.push((u, v));
                }
            }
            edges.push((0, n - 1));
            let labels: Vec<String> = (0..n).map(|v| format!("X{v}")).collect();
            let g = Graph::new(n, edges)?.with_labels(labels.clone())?;
            let sys = SetSystem::new_vertex_cover(g)?.with_labels(labels)?;
            let mut costs = vec![0i64; n];
            costs[0] = 1;
            costs[n - 1] = 1;
            Ok((sys, CostVector::from_ints(&costs)))
        }
        // Three overlapping sets with a cost tie: the winning set can be
        // chosen two ways, and the transfer benchmarks notice.
        "choice-of-s" => {
            let sets = vec![
                AgentSet::from([0, 1]),
                AgentSet::from([1, 2, 3]),
                AgentSet::from([3, 4]),
            ];
            let sys = labelled(
                SetSystem::new_explicit(5, sets)?,
                &["e1", "e2", "e3", "e4", "e5"],
            );
            Ok((sys, CostVector::from_ints(&[2, 1, 1, 1, 3])))
        }
        // The no-transfer minimum is not monotone in the feasible family:
        // this system sits at 1, and adding the set {x', y1..yn} (see the
        // nonmonotonicity tests) drives it to n.
        "nonmon-family" => {
            let n = require_size(base, arg, 1)?;
            let num_agents = 2 * n + 2;
            let s: AgentSet = std::iter::once(0).chain(2..n + 2).collect();
            let mut sets = vec![s];
            for i in 1..=n {
                let t: AgentSet = (2..n + 2)
                    .filter(|&y| y != 1 + i)
                    .chain(std::iter::once(n + 1 + i))
                    .collect();
                sets.push(t);
            }
            let mut labels: Vec<String> = vec!["x".into(), "x'".into()];
            labels.extend((1..=n).map(|i| format!("y{i}")));
            labels.extend((1..=n).map(|i| format!("z{i}")));
            let sys = SetSystem::new_explicit(num_agents, sets)?.with_labels(labels)?;
            let mut costs = vec![0i64; num_agents];
            for i in 1..=n {
                costs[n + 1 + i] = 1;
            }
            Ok((sys, CostVector::from_ints(&costs)))
        }
        // The diamond with a parallel zero-cost B–C edge: the extra route
        // caps the middle bid at zero and pushes the no-transfer minimum
        // from 1 to 2.
        "double-diamond" => {
            let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (1, 2)])?
                .with_labels(vec!["A".into(), "B".into(), "C".into(), "D".into()])?;
            let sys = labelled(
                SetSystem::new_path(g, 0, 3)?,
                &["AB", "BC", "CD", "AC", "BD", "B'C"],
            );
            Ok((sys, CostVector::from_ints(&[0, 0, 0, 1, 1, 0])))
        }
        // Complete bipartite graph K_{d,d} with a single unit cost on the
        // first left vertex — the shape behind the Δ/2 audit.
        "bipartite-lb" => {
            let delta = require_size(base, arg, 2)?;
            let mut edges = Vec::with_capacity(delta * delta);
            for l in 0..delta {
                for r in 0..delta {
                    edges.push((l, delta + r));
                }
            }
            let labels: Vec<String> = (0..delta)
                .map(|l| format!("L{l}"))
                .chain((0..delta).map(|r| format!("R{r}")))
                .collect();
            let g = Graph::new(2 * delta, edges)?.with_labels(labels.clone())?;
            let sys = SetSystem::new_vertex_cover(g)?.with_labels(labels)?;
            let mut costs = vec![0i64; 2 * delta];
            costs[0] = 1;
            Ok((sys, CostVector::from_ints(&costs)))
        }
        _ => Err(Error::UnknownInstance(format!("instance `{name}`"))),
    }
}

/// Shape of a random instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RandomKind {
    /// `num_sets` random nonempty subsets of `n` agents, redrawn until the
    /// family is monopoly-free.
    Explicit { num_sets: usize },
    /// Path system between the endpoints of a random connected graph on
    /// `n` vertices (agents are the edges). With `two_connected`, redraw
    /// until no single edge is unavoidable.
    Path { two_connected: bool },
    /// Vertex-cover system on a random loop-free graph with `n` vertices,
    /// no isolated vertices, and maximum degree at most `max_degree` when
    /// given.
    VertexCover { max_degree: Option<usize> },
    /// A uniform or graphic matroid base system, monopoly-free.
    Matroid,
}

const RETRIES: usize = 400;

/// Draws a reproducible random instance: same kind, `n`, seed and cost
/// range always produce the same system and costs.
pub fn random_instance(
    kind: &RandomKind,
    n: usize,
    seed: u64,
    cost_range: RangeInclusive<i64>,
) -> Result<(SetSystem, CostVector)> {
    if n == 0 {
        return Err(Error::UnsatisfiableParams("need at least one agent".into()));
    }
    if cost_range.is_empty() || *cost_range.start() < 0 {
        return Err(Error::UnsatisfiableParams(format!(
            "cost range {}..={} must be nonempty and nonnegative",
            cost_range.start(),
            cost_range.end()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let caps = Caps::default();
    let sys = match kind {
        RandomKind::Explicit { num_sets } => random_explicit(&mut rng, n, *num_sets, &caps)?,
        RandomKind::Path { two_connected } => random_path(&mut rng, n, *two_connected, &caps)?,
        RandomKind::VertexCover { max_degree } => random_cover(&mut rng, n, *max_degree)?,
        RandomKind::Matroid => random_matroid(&mut rng, n, &caps)?,
    };
    let costs = CostVector::from_ints(
        &(0..sys.n()).map(|_| rng.gen_range(cost_range.clone())).collect::<Vec<_>>(),
    );
    Ok((sys, costs))
}

fn random_explicit(
    rng: &mut ChaCha8Rng,
    n: usize,
    num_sets: usize,
    caps: &Caps,
) -> Result<SetSystem> {
    if num_sets == 0 {
        return Err(Error::UnsatisfiableParams("need at least one feasible set".into()));
    }
    for _ in 0..RETRIES {
        let mut sets: Vec<AgentSet> = Vec::with_capacity(num_sets);
        while sets.len() < num_sets {
            let s: AgentSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if !s.is_empty() {
                sets.push(s);
            }
        }
        let sys = SetSystem::new_explicit(n, sets)?;
        if is_monopoly_free(&sys, caps)? {
            return Ok(sys);
        }
    }
    Err(Error::UnsatisfiableParams(format!(
        "no monopoly-free family of {num_sets} sets over {n} agents found"
    )))
}

/// Random connected graph: a random spanning tree plus a few extra edges.
fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges.sort_unstable();
    Graph::new(n, edges).expect("endpoints are in range")
}

fn random_path(
    rng: &mut ChaCha8Rng,
    n: usize,
    two_connected: bool,
    caps: &Caps,
) -> Result<SetSystem> {
    if n < 2 {
        return Err(Error::UnsatisfiableParams("a path system needs two endpoints".into()));
    }
    for _ in 0..RETRIES {
        let extra = rng.gen_range(1..=n.div_ceil(2) + 1);
        let g = random_connected_graph(rng, n, extra);
        let sys = SetSystem::new_path(g, 0, n - 1)?;
        if !two_connected || is_monopoly_free(&sys, caps)? {
            return Ok(sys);
        }
    }
    Err(Error::UnsatisfiableParams(format!(
        "no two-connected path system on {n} vertices found"
    )))
}

fn random_cover(rng: &mut ChaCha8Rng, n: usize, max_degree: Option<usize>) -> Result<SetSystem> {
    if n < 2 {
        return Err(Error::UnsatisfiableParams("a cover system needs two vertices".into()));
    }
    if max_degree == Some(0) {
        return Err(Error::UnsatisfiableParams("max degree zero leaves every vertex isolated".into()));
    }
    for _ in 0..RETRIES {
        let mut degree = vec![0usize; n];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                pairs.push((u, v));
            }
        }
        // Visiting pairs in random order keeps the degree cap from
        // starving the late vertices.
        for i in (1..pairs.len()).rev() {
            pairs.swap(i, rng.gen_range(0..=i));
        }
        let room = |d: usize, cap: Option<usize>| cap.is_none_or(|c| d < c);
        for &(u, v) in &pairs {
            let want = degree[u] == 0 || degree[v] == 0 || rng.gen_bool(0.4);
            if want && room(degree[u], max_degree) && room(degree[v], max_degree) {
                edges.push((u, v));
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        if degree.contains(&0) {
            continue;
        }
        edges.sort_unstable();
        return SetSystem::new_vertex_cover(Graph::new(n, edges)?);
    }
    Err(Error::UnsatisfiableParams(format!(
        "no graph on {n} vertices fits the degree cap {max_degree:?}"
    )))
}

fn random_matroid(rng: &mut ChaCha8Rng, n: usize, caps: &Caps) -> Result<SetSystem> {
    if n < 2 {
        return Err(Error::UnsatisfiableParams(
            "a monopoly-free matroid needs at least two elements".into(),
        ));
    }
    for _ in 0..RETRIES {
        let descriptor = if rng.gen_bool(0.5) {
            MatroidDescriptor::Uniform { n, k: rng.gen_range(1..n) }
        } else {
            // Graphic matroid on exactly n edges: pick a vertex count that
            // leaves room for cycles, then pad a spanning tree.
            let lo = 3.min(n);
            let hi = n.min(5).max(lo);
            let v = rng.gen_range(lo..=hi);
            let mut g = random_connected_graph(rng, v, n);
            let mut guard = 0;
            while g.num_edges() != n {
                g = random_connected_graph(rng, v, n);
                guard += 1;
                if guard > 50 {
                    break;
                }
            }
            if g.num_edges() != n {
                continue;
            }
            MatroidDescriptor::Graphic(g)
        };
        let sys = SetSystem::new_matroid(descriptor)?;
        if is_monopoly_free(&sys, caps)? {
            return Ok(sys);
        }
    }
    Err(Error::UnsatisfiableParams(format!("no monopoly-free matroid on {n} elements found")))
}

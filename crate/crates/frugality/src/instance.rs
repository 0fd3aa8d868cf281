//! Instance files and instance-spec resolution.
//!
//! An instance file is a JSON document with a `kind` in `{"explicit",
//! "path", "vertex_cover", "matroid"}`, a `costs` array of exact rationals
//! (`"p/q"` strings or integers — floats are rejected), optional `agents`
//! labels, and a kind-specific payload: `feasible_sets` for explicit
//! families, `graph` = `{vertices, edges, s, t}` for path and cover
//! systems, `matroid` = one of `{"uniform": {"n", "k"}}`,
//! `{"graphic": {vertices, edges}}`, `{"bases": [...]}`.
//!
//! [`resolve_instance`] additionally understands named instances
//! (`clique-tail:7`), the `matroid:u32` shorthand for small uniform
//! matroids, and seeded generator specs such as
//! `random:vc,n=8,seed=7,dmax=4,cmax=9`.

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::generators::{paper_instance, random_instance, RandomKind};
use crate::graph::Graph;
use crate::matroid::MatroidDescriptor;
use crate::rational::Rat;
use crate::system::{AgentSet, CostVector, FeasibleFamily, SetSystem};

/// One cost: an integer or an exact `"p/q"` string. A dedicated
/// deserializer keeps serde_json's line/column positions in error
/// messages and refuses floating-point literals outright.
struct CostEntry(Rat);

impl<'de> Deserialize<'de> for CostEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = CostEntry;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<CostEntry, E> {
                Ok(CostEntry(Rat::int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<CostEntry, E> {
                i64::try_from(v)
                    .map(|v| CostEntry(Rat::int(v)))
                    .map_err(|_| E::custom(format!("cost {v} does not fit a 64-bit integer")))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<CostEntry, E> {
                Err(E::custom(format!(
                    "floating-point cost {v} not accepted; write it as \"p/q\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<CostEntry, E> {
                v.parse::<Rat>().map(CostEntry).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphPayload {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    s: Option<usize>,
    #[serde(default)]
    t: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UniformPayload {
    n: usize,
    k: usize,
}

/// Exactly one of the three encodings.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatroidPayload {
    #[serde(default)]
    uniform: Option<UniformPayload>,
    #[serde(default)]
    graphic: Option<GraphPayload>,
    #[serde(default)]
    bases: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    kind: String,
    #[serde(default)]
    agents: Option<Vec<String>>,
    costs: Vec<CostEntry>,
    #[serde(default)]
    feasible_sets: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    graph: Option<GraphPayload>,
    #[serde(default)]
    matroid: Option<MatroidPayload>,
}

fn build_graph(payload: &GraphPayload) -> Result<Graph> {
    Graph::new(payload.vertices, payload.edges.clone())
}

/// Parses an instance document. Errors carry serde_json's line/column
/// positions for malformed documents and field-level context otherwise.
pub fn parse_instance(text: &str) -> Result<(SetSystem, CostVector)> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInstance(e.to_string()))?;
    let costs = CostVector::new(file.costs.into_iter().map(|c| c.0).collect())?;
    let sys = match file.kind.as_str() {
        "explicit" => {
            let sets = file
                .feasible_sets
                .ok_or_else(|| Error::InvalidInstance("explicit kind needs `feasible_sets`".into()))?
                .into_iter()
                .map(|s| s.into_iter().collect::<AgentSet>())
                .collect();
            SetSystem::new_explicit(costs.len(), sets)?
        }
        "path" => {
            let g = file
                .graph
                .ok_or_else(|| Error::InvalidInstance("path kind needs `graph`".into()))?;
            let (s, t) = match (g.s, g.t) {
                (Some(s), Some(t)) => (s, t),
                _ => {
                    return Err(Error::InvalidInstance(
                        "path kind needs `s` and `t` in its graph".into(),
                    ))
                }
            };
            SetSystem::new_path(build_graph(&g)?, s, t)?
        }
        "vertex_cover" => {
            let g = file
                .graph
                .ok_or_else(|| Error::InvalidInstance("vertex_cover kind needs `graph`".into()))?;
            SetSystem::new_vertex_cover(build_graph(&g)?)?
        }
        "matroid" => {
            let m = file
                .matroid
                .ok_or_else(|| Error::InvalidInstance("matroid kind needs `matroid`".into()))?;
            let descriptor = match (m.uniform, m.graphic, m.bases) {
                (Some(u), None, None) => MatroidDescriptor::Uniform { n: u.n, k: u.k },
                (None, Some(g), None) => MatroidDescriptor::Graphic(build_graph(&g)?),
                (None, None, Some(bases)) => MatroidDescriptor::ExplicitBases(
                    bases.into_iter().map(|b| b.into_iter().collect()).collect(),
                ),
                _ => {
                    return Err(Error::InvalidInstance(
                        "matroid payload needs exactly one of `uniform`, `graphic`, `bases`"
                            .into(),
                    ))
                }
            };
            SetSystem::new_matroid(descriptor)?
        }
        other => {
            return Err(Error::InvalidInstance(format!(
                "unknown kind `{other}`; expected explicit, path, vertex_cover, or matroid"
            )))
        }
    };
    if costs.len() != sys.n() {
        return Err(Error::InvalidInstance(format!(
            "{} costs for {} agents",
            costs.len(),
            sys.n()
        )));
    }
    let sys = match file.agents {
        Some(labels) => sys.with_labels(labels)?,
        None => sys,
    };
    Ok((sys, costs))
}

/// Serializes a system and its costs back into the instance format. Costs
/// are written as exact strings.
pub fn instance_to_json(system: &SetSystem, costs: &CostVector) -> serde_json::Value {
    let cost_strings: Vec<String> = costs.as_slice().iter().map(Rat::to_string).collect();
    let graph_json = |g: &Graph| {
        json!({
            "vertices": g.n_vertices(),
            "edges": g.edges().to_vec(),
        })
    };
    let mut out = match system.family() {
        FeasibleFamily::Explicit(sets) => json!({
            "kind": "explicit",
            "feasible_sets": sets.iter().map(|s| s.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        FeasibleFamily::Path { graph, s, t } => {
            let mut g = graph_json(graph);
            g["s"] = json!(s);
            g["t"] = json!(t);
            json!({ "kind": "path", "graph": g })
        }
        FeasibleFamily::VertexCover { graph } => {
            json!({ "kind": "vertex_cover", "graph": graph_json(graph) })
        }
        FeasibleFamily::Matroid(descriptor) => {
            let payload = match descriptor {
                MatroidDescriptor::Uniform { n, k } => json!({ "uniform": { "n": n, "k": k } }),
                MatroidDescriptor::Graphic(g) => json!({ "graphic": graph_json(g) }),
                MatroidDescriptor::ExplicitBases(bases) => json!({
                    "bases": bases.iter().map(|b| b.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
                }),
            };
            json!({ "kind": "matroid", "matroid": payload })
        }
    };
    out["costs"] = json!(cost_strings);
    out["agents"] = json!(system.labels());
    out
}

/// Parses comma-separated `key=value` pairs after the generator kind.
fn parse_keyed(params: &[&str], spec: &str) -> Result<Vec<(String, String)>> {
    params
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| {
                    Error::InvalidInstance(format!("expected key=value, got `{p}` in `{spec}`"))
                })
        })
        .collect()
}

fn parse_random(spec: &str, body: &str) -> Result<(SetSystem, CostVector)> {
    let parts: Vec<&str> = body.split(',').collect();
    let (kind_name, params) = parts.split_first().ok_or_else(|| {
        Error::InvalidInstance(format!("empty generator spec in `{spec}`"))
    })?;
    let keyed = parse_keyed(params, spec)?;
    let mut n: Option<usize> = None;
    let mut seed: Option<u64> = None;
    let mut cmax: i64 = 9;
    let mut dmax: Option<usize> = None;
    let mut sets: Option<usize> = None;
    let mut two_connected = true;
    let bad = |key: &str, value: &str| {
        Error::InvalidInstance(format!("bad value `{value}` for `{key}` in `{spec}`"))
    };
    for (key, value) in &keyed {
        match key.as_str() {
            "n" => n = Some(value.parse().map_err(|_| bad(key, value))?),
            "seed" => seed = Some(value.parse().map_err(|_| bad(key, value))?),
            "cmax" => cmax = value.parse().map_err(|_| bad(key, value))?,
            "dmax" => dmax = Some(value.parse().map_err(|_| bad(key, value))?),
            "sets" => sets = Some(value.parse().map_err(|_| bad(key, value))?),
            "2conn" => two_connected = value.parse().map_err(|_| bad(key, value))?,
            other => {
                return Err(Error::InvalidInstance(format!(
                    "unknown generator parameter `{other}` in `{spec}`"
                )))
            }
        }
    }
    let n = n.ok_or_else(|| Error::InvalidInstance(format!("`{spec}` needs n=...")))?;
    let seed =
        seed.ok_or_else(|| Error::InvalidInstance(format!("`{spec}` needs seed=...")))?;
    let kind = match *kind_name {
        "vc" | "vertex_cover" => RandomKind::VertexCover { max_degree: dmax },
        "path" => RandomKind::Path { two_connected },
        "explicit" => RandomKind::Explicit { num_sets: sets.unwrap_or(n) },
        "matroid" => RandomKind::Matroid,
        other => {
            return Err(Error::InvalidInstance(format!(
                "unknown generator kind `{other}` in `{spec}`"
            )))
        }
    };
    random_instance(&kind, n, seed, 0..=cmax)
}

/// Turns an instance spec into a system and costs. A spec is, in order of
/// precedence: a path to a JSON file (anything ending in `.json`, or an
/// existing file), a `random:` generator spec, the `matroid:uNK`
/// shorthand (uniform matroid with N elements, rank K), or a named
/// instance such as `diamond-example3` or `clique-tail:7`.
pub fn resolve_instance(spec: &str) -> Result<(SetSystem, CostVector)> {
    if spec.ends_with(".json") || Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Error::InvalidInstance(format!("cannot read `{spec}`: {e}")))?;
        return parse_instance(&text);
    }
    if let Some(body) = spec.strip_prefix("random:") {
        return parse_random(spec, body);
    }
    if let Some(body) = spec.strip_prefix("matroid:") {
        let digits: Vec<u32> = body
            .strip_prefix('u')
            .map(|d| d.chars().filter_map(|c| c.to_digit(10)).collect())
            .unwrap_or_default();
        if body.len() == 3 && digits.len() == 2 {
            let (n, k) = (digits[0] as usize, digits[1] as usize);
            let sys =
                SetSystem::new_matroid(MatroidDescriptor::Uniform { n, k })?;
            // Unit costs keep the shorthand self-contained.
            return Ok((sys, CostVector::from_ints(&vec![1; n])));
        }
        return Err(Error::UnknownInstance(format!(
            "matroid shorthand `{spec}`; expected e.g. matroid:u32"
        )));
    }
    paper_instance(spec)
}

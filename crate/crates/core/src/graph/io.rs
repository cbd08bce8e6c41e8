//! JSON and graph6 formats.
//!
//! JSON: `{"vertices":[..],"edges":[[u,v],..],"multiplicity":{"u-v":m}}`. The
//! multiplicity map is optional; repeated entries in `edges` also add copies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Edge, Graph, GraphView, MultiGraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default)]
    pub vertices: Vec<u32>,
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<BTreeMap<String, u32>>,
}

/// A parsed input graph; multigraphs are kept distinct so callers can pick the
/// circuit or multicircuit test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphInput {
    Simple(Graph),
    Multi(MultiGraph),
}

impl GraphInput {
    pub fn to_multigraph(&self) -> MultiGraph {
        match self {
            GraphInput::Simple(g) => MultiGraph::from(g),
            GraphInput::Multi(m) => m.clone(),
        }
    }

    pub fn into_simple(self) -> Result<Graph> {
        match self {
            GraphInput::Simple(g) => Ok(g),
            GraphInput::Multi(m) => m
                .to_simple()
                .ok_or_else(|| Error::pre("expected a simple graph, found parallel edges")),
        }
    }
}

fn parse_pair_key(key: &str) -> Result<Edge> {
    let (a, b) = key
        .split_once('-')
        .ok_or_else(|| Error::Parse(format!("bad multiplicity key {key:?}, expected \"u-v\"")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad vertex id {s:?} in key {key:?}")))
    };
    Ok(Edge::new(parse(a)?, parse(b)?))
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertices().map(|v| v.0).collect(),
            edges: g.edges().map(Into::into).collect(),
            multiplicity: None,
        }
    }

    pub fn from_multigraph(g: &MultiGraph) -> Self {
        let mut mult = BTreeMap::new();
        let mut edges = Vec::new();
        for (e, m) in g.edge_multiplicities() {
            edges.push(e.into());
            if m > 1 {
                mult.insert(e.to_string(), m);
            }
        }
        GraphJson {
            vertices: g.vertices().map(|v| v.0).collect(),
            edges,
            multiplicity: (!mult.is_empty()).then_some(mult),
        }
    }

    pub fn into_input(self) -> Result<GraphInput> {
        let mut counts: BTreeMap<Edge, u32> = BTreeMap::new();
        for [a, b] in &self.edges {
            if a == b {
                return Err(Error::Loop((*a).into()));
            }
            *counts.entry(Edge::new(*a, *b)).or_insert(0) += 1;
        }
        if let Some(mult) = &self.multiplicity {
            for (key, &m) in mult {
                let e = parse_pair_key(key)?;
                if e.is_loop() {
                    return Err(Error::Loop(e.u()));
                }
                if m == 0 {
                    return Err(Error::Parse(format!(
                        "multiplicity of {key} must be positive"
                    )));
                }
                counts.insert(e, m);
            }
        }
        let mut mg = MultiGraph::new();
        for &v in &self.vertices {
            mg.add_vertex(v);
        }
        for (e, m) in counts {
            mg.add_edge_with_multiplicity(e.u(), e.v(), m)?;
        }
        Ok(match mg.to_simple() {
            Some(g) => GraphInput::Simple(g),
            None => GraphInput::Multi(mg),
        })
    }
}

impl Graph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson::from_graph(self)
    }

    /// Parses the JSON format; parallel edges are an error here.
    pub fn from_json(s: &str) -> Result<Graph> {
        let parsed: GraphJson = serde_json::from_str(s)?;
        let mut seen = std::collections::BTreeSet::new();
        for [a, b] in &parsed.edges {
            if !seen.insert(Edge::new(*a, *b)) {
                return Err(Error::DuplicateEdge(Edge::new(*a, *b)));
            }
        }
        parsed.into_input()?.into_simple()
    }
}

impl MultiGraph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson::from_multigraph(self)
    }
}

/// Auto-detects JSON (leading `{`) or graph6.
pub fn read_graph_input(text: &str) -> Result<GraphInput> {
    let t = text.trim();
    if t.starts_with('{') {
        let parsed: GraphJson = serde_json::from_str(t)?;
        parsed.into_input()
    } else {
        parse_graph6(t).map(GraphInput::Simple)
    }
}

/// Parses one graph6 string; vertices are labeled `0..n`.
pub fn parse_graph6(s: &str) -> Result<Graph> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse("empty graph6 string".into()));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse(format!("invalid graph6 byte {b:#x}")));
    }
    let sextet = |b: u8| (b - 63) as u64;
    let (n, rest) = if bytes[0] < 126 {
        (sextet(bytes[0]), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] < 126 {
        if bytes.len() < 4 {
            return Err(Error::Parse("truncated graph6 size".into()));
        }
        let n = bytes[1..4].iter().fold(0, |acc, &b| (acc << 6) | sextet(b));
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(Error::Parse("truncated graph6 size".into()));
        }
        let n = bytes[2..8].iter().fold(0, |acc, &b| (acc << 6) | sextet(b));
        (n, &bytes[8..])
    };
    let n = usize::try_from(n).map_err(|_| Error::Parse("graph6 size overflow".into()))?;
    let bits = n * n.saturating_sub(1) / 2;
    if rest.len() != bits.div_ceil(6) {
        return Err(Error::Parse(format!(
            "graph6 body has {} bytes, expected {}",
            rest.len(),
            bits.div_ceil(6)
        )));
    }
    let bit = |k: usize| (sextet(rest[k / 6]) >> (5 - k % 6)) & 1 == 1;
    let mut g = Graph::new();
    for v in 0..n as u32 {
        g.add_vertex(v);
    }
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.add_edge(i as u32, j as u32)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

/// graph6 encoding of the graph with vertices relabeled in ascending order.
pub fn to_graph6(g: &Graph) -> String {
    let ids: Vec<_> = g.vertices().collect();
    let n = ids.len();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258048 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(ids[i], ids[j]));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ascii")
}

//! Labeled undirected graphs and multigraphs.
//!
//! [`Graph`] is simple (no loops, no parallel edges). [`MultiGraph`] allows parallel
//! edges but still rejects loops: a loop is never (2,2)-sparse, so nothing downstream
//! could use one. Both implement [`GraphView`], which is what the counting and
//! connectivity algorithms are written against.

mod canon;
mod io;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use canon::augment_levels;
pub use canon::{
    canonical_form, canonical_form_with_cap, canonical_labeling, is_isomorphic,
    nonisomorphic_graphs, CanonicalForm, DEFAULT_CANON_CAP,
};
pub use io::{parse_graph6, read_graph_input, to_graph6, GraphInput, GraphJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", from = "[u32; 2]")]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(self) -> VertexId {
        self.0
    }

    pub fn v(self) -> VertexId {
        self.1
    }

    pub fn is_loop(self) -> bool {
        self.0 == self.1
    }

    pub fn contains(self, x: VertexId) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(self, x: VertexId) -> VertexId {
        if self.0 == x {
            self.1
        } else {
            assert_eq!(self.1, x, "{x} is not an endpoint of {self}");
            self.0
        }
    }
}

impl From<[u32; 2]> for Edge {
    fn from([a, b]: [u32; 2]) -> Self {
        Edge::new(a, b)
    }
}

impl From<Edge> for [u32; 2] {
    fn from(e: Edge) -> Self {
        [e.0 .0, e.1 .0]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Read access shared by [`Graph`] and [`MultiGraph`].
///
/// Edge counts are in units: a double edge contributes 2.
pub trait GraphView {
    fn vertex_ids(&self) -> Vec<VertexId>;
    /// Distinct edges with their multiplicity, sorted.
    fn edge_multiplicities(&self) -> Vec<(Edge, u32)>;
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn contains_vertex(&self, v: VertexId) -> bool;
    fn multiplicity(&self, a: VertexId, b: VertexId) -> u32;

    /// Every parallel copy listed separately, sorted.
    fn edge_units(&self) -> Vec<Edge> {
        self.edge_multiplicities()
            .into_iter()
            .flat_map(|(e, m)| std::iter::repeat(e).take(m as usize))
            .collect()
    }

    /// Number of edges with both ends in `xs` (counted with multiplicity).
    fn induced_edge_count(&self, xs: &BTreeSet<VertexId>) -> usize {
        self.edge_multiplicities()
            .into_iter()
            .filter(|(e, _)| xs.contains(&e.u()) && xs.contains(&e.v()))
            .map(|(_, m)| m as usize)
            .sum()
    }

    fn dense(&self) -> Dense {
        Dense::new(self.vertex_ids(), self.edge_multiplicities())
    }
}

/// Vertices relabeled to `0..n` for the index-heavy algorithms.
#[derive(Clone, Debug)]
pub struct Dense {
    pub ids: Vec<VertexId>,
    /// Neighbor index with multiplicity.
    pub adj: Vec<Vec<(usize, u32)>>,
}

impl Dense {
    fn new(ids: Vec<VertexId>, edges: Vec<(Edge, u32)>) -> Self {
        let mut adj = vec![Vec::new(); ids.len()];
        let index = |v: VertexId| ids.binary_search(&v).expect("edge endpoint is a vertex");
        for (e, m) in edges {
            let (a, b) = (index(e.u()), index(e.v()));
            adj[a].push((b, m));
            adj[b].push((a, m));
        }
        Dense { ids, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    /// Connected components after deleting the vertices flagged in `removed`.
    pub fn components_without(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn to_ids(&self, xs: &[usize]) -> BTreeSet<VertexId> {
        xs.iter().map(|&i| self.ids[i]).collect()
    }
}

/// A simple labeled graph. Vertex ids need not be contiguous.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list; the vertex set is the set of endpoints.
    pub fn from_edges<I, V>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, V)>,
        V: Into<VertexId>,
    {
        let mut g = Graph::new();
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn from_parts<V: Into<VertexId>>(
        vertices: impl IntoIterator<Item = V>,
        edges: impl IntoIterator<Item = (V, V)>,
    ) -> Result<Self> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// The complete graph on the given labels.
    pub fn complete<V: Into<VertexId> + Copy>(labels: &[V]) -> Self {
        let mut g = Graph::new();
        for (i, &a) in labels.iter().enumerate() {
            g.add_vertex(a);
            for &b in &labels[i + 1..] {
                g.add_edge(a, b).expect("distinct labels");
            }
        }
        g
    }

    /// Returns `true` if the vertex was not already present.
    pub fn add_vertex(&mut self, v: impl Into<VertexId>) -> bool {
        let v = v.into();
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    pub fn add_edge(&mut self, a: impl Into<VertexId>, b: impl Into<VertexId>) -> Result<()> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(Error::Loop(a));
        }
        if self.has_edge(a, b) {
            return Err(Error::DuplicateEdge(Edge::new(a, b)));
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        if !self.has_edge(a, b) {
            return Err(Error::MissingEdge(Edge::new(a, b)));
        }
        self.adj.get_mut(&a).unwrap().remove(&b);
        self.adj.get_mut(&b).unwrap().remove(&a);
        Ok(())
    }

    /// Removes a vertex and its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        let nbrs = self.adj.remove(&v).ok_or(Error::UnknownVertex(v))?;
        for u in nbrs {
            self.adj.get_mut(&u).unwrap().remove(&v);
        }
        Ok(())
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.range(a..).map(move |&b| Edge::new(a, b)))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |n| n.len())
    }

    pub fn min_degree(&self) -> usize {
        self.adj.values().map(|n| n.len()).min().unwrap_or(0)
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    /// `max + 1`, or 0 for the empty graph.
    pub fn fresh_vertex(&self) -> VertexId {
        self.max_vertex().map_or(VertexId(0), |m| VertexId(m.0 + 1))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.values().map(|n| n.len()).collect();
        d.sort_unstable();
        d
    }

    /// The subgraph induced by `xs`; `i_G(X)` is its edge count.
    pub fn induced_subgraph(&self, xs: &BTreeSet<VertexId>) -> Result<Graph> {
        let mut g = Graph::new();
        for &x in xs {
            let nbrs = self.adj.get(&x).ok_or(Error::UnknownVertex(x))?;
            g.adj
                .insert(x, nbrs.iter().filter(|y| xs.contains(y)).copied().collect());
        }
        Ok(g)
    }

    /// Applies a vertex relabeling. `f` must be injective on the vertex set.
    pub fn relabel(&self, mut f: impl FnMut(VertexId) -> VertexId) -> Graph {
        let map: BTreeMap<VertexId, VertexId> = self.vertices().map(|v| (v, f(v))).collect();
        let mut g = Graph::new();
        for &w in map.values() {
            g.add_vertex(w);
        }
        assert_eq!(g.vertex_count(), map.len(), "relabeling must be injective");
        for e in self.edges() {
            g.add_edge(map[&e.u()], map[&e.v()])
                .expect("injective relabeling");
        }
        g
    }

    /// Relabels vertices to `0..n` in ascending order of the old ids.
    pub fn compact(&self) -> Graph {
        let ids: Vec<VertexId> = self.vertices().collect();
        self.relabel(|v| VertexId(ids.binary_search(&v).unwrap() as u32))
    }

    pub fn connected_components(&self) -> Vec<BTreeSet<VertexId>> {
        connected_components(self)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }
}

impl GraphView for Graph {
    fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices().collect()
    }

    fn edge_multiplicities(&self) -> Vec<(Edge, u32)> {
        self.edges().map(|e| (e, 1)).collect()
    }

    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.adj.values().map(|n| n.len()).sum::<usize>() / 2
    }

    fn contains_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    fn multiplicity(&self, a: VertexId, b: VertexId) -> u32 {
        u32::from(self.has_edge(a, b))
    }
}

/// A labeled multigraph without loops.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    adj: BTreeMap<VertexId, BTreeMap<VertexId, u32>>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I, V>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, V)>,
        V: Into<VertexId>,
    {
        let mut g = MultiGraph::new();
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: impl Into<VertexId>) -> bool {
        let v = v.into();
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeMap::new());
        true
    }

    /// Adds one more parallel copy of `ab`.
    pub fn add_edge(&mut self, a: impl Into<VertexId>, b: impl Into<VertexId>) -> Result<()> {
        self.add_edge_with_multiplicity(a, b, 1)
    }

    pub fn add_edge_with_multiplicity(
        &mut self,
        a: impl Into<VertexId>,
        b: impl Into<VertexId>,
        m: u32,
    ) -> Result<()> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(Error::Loop(a));
        }
        if m == 0 {
            self.add_vertex(a);
            self.add_vertex(b);
            return Ok(());
        }
        *self.adj.entry(a).or_default().entry(b).or_insert(0) += m;
        *self.adj.entry(b).or_default().entry(a).or_insert(0) += m;
        Ok(())
    }

    /// Removes one copy of `ab`.
    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        let m = self.multiplicity(a, b);
        if m == 0 {
            return Err(Error::MissingEdge(Edge::new(a, b)));
        }
        for (x, y) in [(a, b), (b, a)] {
            let row = self.adj.get_mut(&x).unwrap();
            if m == 1 {
                row.remove(&y);
            } else {
                *row.get_mut(&y).unwrap() -= 1;
            }
        }
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        let nbrs = self.adj.remove(&v).ok_or(Error::UnknownVertex(v))?;
        for u in nbrs.keys() {
            self.adj.get_mut(u).unwrap().remove(&v);
        }
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.keys().copied())
    }

    /// Degree counted with multiplicity.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj
            .get(&v)
            .map_or(0, |n| n.values().map(|&m| m as usize).sum())
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    pub fn is_simple(&self) -> bool {
        self.adj.values().all(|n| n.values().all(|&m| m == 1))
    }

    /// The simple graph on the same vertices with each parallel class collapsed.
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(v);
        }
        for (e, _) in self.edge_multiplicities() {
            g.add_edge(e.u(), e.v()).unwrap();
        }
        g
    }

    /// Converts to a [`Graph`] if no edge is repeated.
    pub fn to_simple(&self) -> Option<Graph> {
        self.is_simple().then(|| self.underlying())
    }

    pub fn induced_subgraph(&self, xs: &BTreeSet<VertexId>) -> Result<MultiGraph> {
        let mut g = MultiGraph::new();
        for &x in xs {
            let nbrs = self.adj.get(&x).ok_or(Error::UnknownVertex(x))?;
            g.adj.insert(
                x,
                nbrs.iter()
                    .filter(|(y, _)| xs.contains(y))
                    .map(|(&y, &m)| (y, m))
                    .collect(),
            );
        }
        Ok(g)
    }

    pub fn connected_components(&self) -> Vec<BTreeSet<VertexId>> {
        connected_components(self)
    }
}

impl GraphView for MultiGraph {
    fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices().collect()
    }

    fn edge_multiplicities(&self) -> Vec<(Edge, u32)> {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.range(a..).map(move |(&b, &m)| (Edge::new(a, b), m)))
            .collect()
    }

    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.adj
            .values()
            .flat_map(|n| n.values())
            .map(|&m| m as usize)
            .sum::<usize>()
            / 2
    }

    fn contains_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    fn multiplicity(&self, a: VertexId, b: VertexId) -> u32 {
        self.adj
            .get(&a)
            .and_then(|n| n.get(&b))
            .copied()
            .unwrap_or(0)
    }
}

impl From<&Graph> for MultiGraph {
    fn from(g: &Graph) -> Self {
        let mut m = MultiGraph::new();
        for v in g.vertices() {
            m.add_vertex(v);
        }
        for e in g.edges() {
            m.add_edge(e.u(), e.v()).unwrap();
        }
        m
    }
}

pub fn connected_components<G: GraphView + ?Sized>(g: &G) -> Vec<BTreeSet<VertexId>> {
    let d = g.dense();
    d.components_without(&vec![false; d.len()])
        .iter()
        .map(|c| d.to_ids(c))
        .collect()
}

/// `f(H) = 2|V| - |E|`.
pub fn f_value<G: GraphView + ?Sized>(g: &G) -> i64 {
    2 * g.vertex_count() as i64 - g.edge_count() as i64
}

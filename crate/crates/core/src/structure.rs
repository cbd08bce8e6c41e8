//! Connectivity structure of circuits: cutpairs, vertex and edge connectivity,
//! 3-edge cutsets, the degree-3 node census, and contraction of hanging K4s.
//!
//! Everything here is exhaustive deletion plus component counting. The graphs in
//! scope have at most a few hundred vertices, so `O(|V|^2 (|V| + |E|))` for cutpairs
//! and `O(|E|^2 (|V| + |E|))` for 3-edge cutsets are fine.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dense, Edge, Graph, GraphView, MultiGraph, VertexId};

/// A 2-vertex cut `{a, b}` with the canonical bipartition of the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutPair {
    pub a: VertexId,
    pub b: VertexId,
    /// The component of `G - {a, b}` holding the smallest vertex id.
    pub side_a: BTreeSet<VertexId>,
    /// Everything else in `G - {a, b}`.
    pub side_b: BTreeSet<VertexId>,
    /// All components of `G - {a, b}` (two or more).
    pub pieces: Vec<BTreeSet<VertexId>>,
    pub ab_present: bool,
}

impl CutPair {
    /// `side ∪ {a, b}`.
    pub fn closed_side(&self, side: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
        let mut s = side.clone();
        s.insert(self.a);
        s.insert(self.b);
        s
    }
}

/// Three edges whose removal splits the graph into exactly `side_a` and `side_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCutset3 {
    pub edges: [Edge; 3],
    pub side_a: BTreeSet<VertexId>,
    pub side_b: BTreeSet<VertexId>,
    pub trivial: bool,
}

impl EdgeCutset3 {
    pub fn is_vertex_disjoint(&self) -> bool {
        let ends: BTreeSet<VertexId> = self.edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
        ends.len() == 6
    }

    /// Cut edges as `(end in side_a, end in side_b)`.
    pub fn oriented(&self) -> [(VertexId, VertexId); 3] {
        self.edges.map(|e| {
            if self.side_a.contains(&e.u()) {
                (e.u(), e.v())
            } else {
                (e.v(), e.u())
            }
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCensus {
    /// Degree-3 vertices.
    pub nodes: BTreeSet<VertexId>,
    /// Nodes lying in no K4.
    pub starred: BTreeSet<VertexId>,
    pub leaf: BTreeSet<VertexId>,
    pub series: BTreeSet<VertexId>,
    pub branching: BTreeSet<VertexId>,
}

/// A cutpair `{a, b}` with `ab` present whose piece `{c, d}` induces K4 with it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HangingK4 {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
}

impl HangingK4 {
    pub fn vertices(&self) -> [VertexId; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

fn removal_mask(d: &Dense, removed: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; d.len()];
    for &r in removed {
        mask[r] = true;
    }
    mask
}

fn is_connected_dense(d: &Dense) -> bool {
    d.components_without(&vec![false; d.len()]).len() <= 1
}

pub fn is_connected<G: GraphView + ?Sized>(g: &G) -> bool {
    is_connected_dense(&g.dense())
}

/// At least 3 vertices, connected, no cut vertex.
pub fn is_2_connected<G: GraphView + ?Sized>(g: &G) -> bool {
    let d = g.dense();
    if d.len() < 3 || !is_connected_dense(&d) {
        return false;
    }
    (0..d.len()).all(|x| d.components_without(&removal_mask(&d, &[x])).len() == 1)
}

/// At least 4 vertices and no separating set of size at most 2.
pub fn is_3_connected<G: GraphView + ?Sized>(g: &G) -> bool {
    let d = g.dense();
    let n = d.len();
    if n < 4 || !is_2_connected(g) {
        return false;
    }
    (0..n).all(|x| (x + 1..n).all(|y| d.components_without(&removal_mask(&d, &[x, y])).len() == 1))
}

/// All 2-vertex cuts of a connected graph on at least 4 vertices.
pub fn cutpairs<G: GraphView + ?Sized>(g: &G) -> Result<Vec<CutPair>> {
    let d = g.dense();
    let n = d.len();
    if n < 4 {
        return Err(Error::pre(format!(
            "cutpairs need at least 4 vertices, got {n}"
        )));
    }
    if !is_connected_dense(&d) {
        return Err(Error::Disconnected);
    }
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let comps = d.components_without(&removal_mask(&d, &[x, y]));
            if comps.len() < 2 {
                continue;
            }
            // components_without scans seeds in index order, so comps[0] holds the
            // smallest remaining id.
            let pieces: Vec<BTreeSet<VertexId>> = comps.iter().map(|c| d.to_ids(c)).collect();
            let side_a = pieces[0].clone();
            let side_b = pieces[1..].iter().flatten().copied().collect();
            let (a, b) = (d.ids[x], d.ids[y]);
            out.push(CutPair {
                a,
                b,
                side_a,
                side_b,
                pieces,
                ab_present: g.multiplicity(a, b) > 0,
            });
        }
    }
    Ok(out)
}

/// Global minimum edge cut (Stoer–Wagner), counting parallel copies. Zero for
/// disconnected graphs and graphs with fewer than two vertices.
pub fn edge_connectivity<G: GraphView + ?Sized>(g: &G) -> usize {
    let d = g.dense();
    let n = d.len();
    if n < 2 || !is_connected_dense(&d) {
        return 0;
    }
    let mut w = vec![vec![0u64; n]; n];
    for (x, row) in d.adj.iter().enumerate() {
        for &(y, m) in row {
            w[x][y] += m as u64;
        }
    }
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while alive.len() > 1 {
        let mut key = vec![0u64; n];
        let mut added = vec![false; n];
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            let sel = *alive
                .iter()
                .filter(|&&v| !added[v])
                .max_by_key(|&&v| (key[v], std::cmp::Reverse(v)))
                .unwrap();
            added[sel] = true;
            if step == alive.len() - 1 {
                best = best.min(key[sel]);
                prev = last;
                last = sel;
            } else {
                last = sel;
                for &v in &alive {
                    if !added[v] {
                        key[v] += w[sel][v];
                    }
                }
            }
        }
        // Merge `last` into `prev`.
        for &v in &alive {
            let add = w[last][v];
            w[prev][v] += add;
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        alive.retain(|&v| v != last);
    }
    best as usize
}

/// Bridges of the unit-edge multigraph with `removed` edges deleted.
fn bridges(n: usize, units: &[(usize, usize)], inc: &[Vec<usize>], removed: &[bool]) -> Vec<usize> {
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (vertex, parent edge, next incidence position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (x, pe, ref mut pos)) = stack.last_mut() {
            if *pos < inc[x].len() {
                let eid = inc[x][*pos];
                *pos += 1;
                if removed[eid] || eid == pe {
                    continue;
                }
                let (p, q) = units[eid];
                let y = if p == x { q } else { p };
                if disc[y] == usize::MAX {
                    disc[y] = timer;
                    low[y] = timer;
                    timer += 1;
                    stack.push((y, eid, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[x]);
                    if low[x] > disc[parent] {
                        out.push(pe);
                    }
                }
            }
        }
    }
    out
}

/// All 3-edge cutsets, trivial ones included. Requires edge connectivity at least 3.
pub fn three_edge_cutsets<G: GraphView + ?Sized>(g: &G) -> Result<Vec<EdgeCutset3>> {
    let lambda = edge_connectivity(g);
    if lambda < 3 {
        return Err(Error::LowEdgeConnectivity(lambda));
    }
    let d = g.dense();
    let n = d.len();
    let edge_list = g.edge_units();
    let units: Vec<(usize, usize)> = edge_list
        .iter()
        .map(|e| (d.index_of(e.u()).unwrap(), d.index_of(e.v()).unwrap()))
        .collect();
    let mut inc = vec![Vec::new(); n];
    for (eid, &(p, q)) in units.iter().enumerate() {
        inc[p].push(eid);
        inc[q].push(eid);
    }
    let m = units.len();
    let mut removed = vec![false; m];
    let mut out = Vec::new();
    for i in 0..m {
        removed[i] = true;
        for j in i + 1..m {
            removed[j] = true;
            let mut found = bridges(n, &units, &inc, &removed);
            found.retain(|&k| k > j);
            found.sort_unstable();
            for k in found {
                removed[k] = true;
                let side = side_of(n, &units, &inc, &removed, units[i].0);
                removed[k] = false;
                let side_a_idx: Vec<usize> = if side[0] {
                    (0..n).filter(|&v| side[v]).collect()
                } else {
                    (0..n).filter(|&v| !side[v]).collect()
                };
                let side_a = d.to_ids(&side_a_idx);
                let side_b: BTreeSet<VertexId> = d
                    .ids
                    .iter()
                    .copied()
                    .filter(|v| !side_a.contains(v))
                    .collect();
                let trivial = side_a.len().min(side_b.len()) == 1;
                out.push(EdgeCutset3 {
                    edges: [edge_list[i], edge_list[j], edge_list[k]],
                    side_a,
                    side_b,
                    trivial,
                });
            }
            removed[j] = false;
        }
        removed[i] = false;
    }
    Ok(out)
}

fn side_of(
    n: usize,
    units: &[(usize, usize)],
    inc: &[Vec<usize>],
    removed: &[bool],
    start: usize,
) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &eid in &inc[x] {
            if removed[eid] {
                continue;
            }
            let (p, q) = units[eid];
            let y = if p == x { q } else { p };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// 3-edge cutsets with at least two vertices on each side.
pub fn nontrivial_3_edge_cutsets<G: GraphView + ?Sized>(g: &G) -> Result<Vec<EdgeCutset3>> {
    let mut all = three_edge_cutsets(g)?;
    all.retain(|c| !c.trivial);
    Ok(all)
}

/// Degree-3 nodes, those outside every K4, and their leaf/series/branching classes.
pub fn node_census(g: &Graph) -> NodeCensus {
    let nodes: BTreeSet<VertexId> = g.vertices().filter(|&v| g.degree(v) == 3).collect();
    // A K4 through a degree-3 vertex must use all three of its neighbours.
    let in_k4 = |v: VertexId| {
        let n: Vec<VertexId> = g.neighbors(v).collect();
        g.has_edge(n[0], n[1]) && g.has_edge(n[0], n[2]) && g.has_edge(n[1], n[2])
    };
    let starred: BTreeSet<VertexId> = nodes.iter().copied().filter(|&v| !in_k4(v)).collect();
    let mut census = NodeCensus {
        nodes: nodes.clone(),
        starred: starred.clone(),
        ..NodeCensus::default()
    };
    for &v in &starred {
        match g.neighbors(v).filter(|u| starred.contains(u)).count() {
            0 | 1 => census.leaf.insert(v),
            2 => census.series.insert(v),
            _ => census.branching.insert(v),
        };
    }
    census
}

/// Whether `G[V₃*]` is a forest (acyclic).
pub fn starred_forest(g: &Graph, census: &NodeCensus) -> bool {
    let Ok(h) = g.induced_subgraph(&census.starred) else {
        return false;
    };
    h.edge_count() + h.connected_components().len() == h.vertex_count()
}

/// Cutpairs with `ab` present and a two-vertex piece completing a K4 on `{a, b}`.
/// A cutpair with two such pieces is reported once per piece.
pub fn hanging_k4_cutpairs(g: &Graph) -> Vec<(CutPair, HangingK4)> {
    let Ok(pairs) = cutpairs(g) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for cp in pairs {
        if !cp.ab_present {
            continue;
        }
        for piece in &cp.pieces {
            if piece.len() != 2 {
                continue;
            }
            let mut it = piece.iter().copied();
            let (c, d) = (it.next().unwrap(), it.next().unwrap());
            let quad = [cp.a, cp.b, c, d];
            let complete = quad
                .iter()
                .enumerate()
                .all(|(i, &x)| quad[i + 1..].iter().all(|&y| g.has_edge(x, y)));
            if complete {
                let k4 = HangingK4 {
                    a: cp.a,
                    b: cp.b,
                    c,
                    d,
                };
                out.push((cp.clone(), k4));
            }
        }
    }
    out
}

pub fn hanging_k4s(g: &Graph) -> Vec<HangingK4> {
    hanging_k4_cutpairs(g).into_iter().map(|(_, k)| k).collect()
}

/// Deletes the interior pair of every hanging K4 and doubles its cut edge.
///
/// Requires every cutpair to have `ab` present and a hanging-K4 piece. All hanging
/// sides are taken from the input graph, so on K4⊔K4 both sides are contracted
/// and the result is a triple edge.
pub fn contract_hanging_k4s(g: &Graph) -> Result<MultiGraph> {
    let pairs = if g.vertex_count() >= 4 {
        cutpairs(g)?
    } else {
        Vec::new()
    };
    let hanging = hanging_k4_cutpairs(g);
    for cp in &pairs {
        if !hanging.iter().any(|(h, _)| h.a == cp.a && h.b == cp.b) {
            return Err(Error::pre(format!(
                "cutpair {{{}, {}}} is not a hanging K4",
                cp.a, cp.b
            )));
        }
    }
    let mut m = MultiGraph::from(g);
    for (_, k) in &hanging {
        m.remove_vertex(k.c)?;
        m.remove_vertex(k.d)?;
        m.add_edge(k.a, k.b)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsity::is_multicircuit;

    fn k5_minus_e() -> Graph {
        let mut g = Graph::complete(&[1u32, 2, 3, 4, 5]);
        g.remove_edge(VertexId(4), VertexId(5)).unwrap();
        g
    }

    fn k4_edge_k4() -> Graph {
        let mut g = Graph::complete(&[1u32, 2, 3, 4]);
        for (a, b) in [(1u32, 5u32), (1, 6), (2, 5), (2, 6), (5, 6)] {
            g.add_edge(a, b).unwrap();
        }
        g
    }

    fn k4_vertex_k4() -> Graph {
        let mut g = Graph::complete(&[1u32, 2, 3, 4]);
        for e in Graph::complete(&[1u32, 5, 6, 7]).edges() {
            g.add_edge(e.u(), e.v()).unwrap();
        }
        g.add_edge(2u32, 5u32).unwrap();
        g
    }

    fn k36() -> Graph {
        Graph::from_edges((0u32..3).flat_map(|a| (3u32..9).map(move |b| (a, b)))).unwrap()
    }

    /// Pairs whose deletion disconnects, by brute force.
    fn brute_cutpairs(g: &Graph) -> BTreeSet<(VertexId, VertexId)> {
        let vs: Vec<VertexId> = g.vertices().collect();
        let mut out = BTreeSet::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                let mut h = g.clone();
                h.remove_vertex(a).unwrap();
                h.remove_vertex(b).unwrap();
                if h.connected_components().len() > 1 {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn cutpairs_of_base_graphs() {
        let g = k4_edge_k4();
        let cps = cutpairs(&g).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!((cps[0].a, cps[0].b), (VertexId(1), VertexId(2)));
        assert!(cps[0].ab_present);
        assert_eq!(cps[0].side_a.iter().next(), Some(&VertexId(3)));
        assert!(cutpairs(&k5_minus_e()).unwrap().is_empty());
        let v = k4_vertex_k4();
        let got: BTreeSet<_> = cutpairs(&v).unwrap().iter().map(|c| (c.a, c.b)).collect();
        assert_eq!(got, brute_cutpairs(&v));
        assert!(got
            .iter()
            .any(|&(a, b)| a == VertexId(1) || b == VertexId(1)));
    }

    #[test]
    fn cutpairs_preconditions() {
        assert!(matches!(
            cutpairs(&Graph::complete(&[0u32, 1, 2])),
            Err(Error::Precondition(_))
        ));
        let mut g = Graph::complete(&[0u32, 1, 2, 3]);
        g.add_vertex(9u32);
        assert!(matches!(cutpairs(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn connectivity_of_base_graphs() {
        for g in [k5_minus_e(), k4_edge_k4(), k4_vertex_k4()] {
            assert!(is_2_connected(&g));
            assert!(edge_connectivity(&g) >= 3);
        }
        assert!(is_3_connected(&k5_minus_e()));
        assert!(!is_3_connected(&k4_edge_k4()));
        assert!(is_3_connected(&k36()));
        assert_eq!(edge_connectivity(&k36()), 3);
        assert_eq!(edge_connectivity(&Graph::complete(&[0u32, 1, 2, 3, 4])), 4);
        let path = Graph::from_edges([(0u32, 1), (1, 2)]).unwrap();
        assert_eq!(edge_connectivity(&path), 1);
        assert!(!is_2_connected(&path));
    }

    #[test]
    fn edge_connectivity_of_multigraph() {
        let triple = MultiGraph::from_edges([(0u32, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(edge_connectivity(&triple), 3);
    }

    #[test]
    fn three_edge_cutsets_of_k36_are_trivial() {
        let all = three_edge_cutsets(&k36()).unwrap();
        // The six degree-3 vertices.
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|c| c.trivial));
        assert!(nontrivial_3_edge_cutsets(&k36()).unwrap().is_empty());
        assert!(nontrivial_3_edge_cutsets(&k5_minus_e()).unwrap().is_empty());
    }

    #[test]
    fn three_sum_style_cutset() {
        // Two K5\e copies with their degree-3 vertices removed, joined by a matching.
        let mut g = Graph::new();
        for off in [0u32, 10] {
            for e in Graph::complete(&[off + 1, off + 2, off + 3, off + 4]).edges() {
                g.add_edge(e.u(), e.v()).unwrap();
            }
        }
        for (a, b) in [(1u32, 11u32), (2, 12), (3, 13)] {
            g.add_edge(a, b).unwrap();
        }
        let cuts = nontrivial_3_edge_cutsets(&g).unwrap();
        assert_eq!(cuts.len(), 1);
        assert!(cuts[0].is_vertex_disjoint());
        assert_eq!(cuts[0].side_a.len(), 4);
        let oriented = cuts[0].oriented();
        assert!(oriented.iter().all(|(x, y)| x.0 < 10 && y.0 > 10));
    }

    #[test]
    fn cutsets_need_three_edge_connectivity() {
        let path = Graph::from_edges([(0u32, 1), (1, 2)]).unwrap();
        assert!(matches!(
            nontrivial_3_edge_cutsets(&path),
            Err(Error::LowEdgeConnectivity(1))
        ));
    }

    #[test]
    fn census() {
        let c = node_census(&k5_minus_e());
        assert_eq!(c.nodes, [VertexId(4), VertexId(5)].into());
        assert!(c.starred.is_empty());
        let c = node_census(&k4_edge_k4());
        assert_eq!(c.nodes, [3u32, 4, 5, 6].map(VertexId).into());
        let c = node_census(&k36());
        assert_eq!(c.starred.len(), 6);
        assert_eq!(c.leaf.len(), 6);
        assert!(starred_forest(&k36(), &c));
    }

    #[test]
    fn hanging_k4_detection() {
        let found = hanging_k4s(&k4_edge_k4());
        assert_eq!(found.len(), 2);
        assert!(found
            .iter()
            .all(|h| (h.a, h.b) == (VertexId(1), VertexId(2))));
        assert!(hanging_k4s(&k5_minus_e()).is_empty());
    }

    #[test]
    fn contraction_of_k4_edge_k4() {
        let m = contract_hanging_k4s(&k4_edge_k4()).unwrap();
        assert_eq!(m.vertex_count(), 2);
        assert_eq!(m.multiplicity(VertexId(1), VertexId(2)), 3);
        assert!(is_multicircuit(&m));
        let unchanged = contract_hanging_k4s(&k5_minus_e()).unwrap();
        assert_eq!(unchanged, MultiGraph::from(&k5_minus_e()));
    }

    #[test]
    fn contraction_of_k4_vertex_k4() {
        let g = k4_vertex_k4();
        let m = contract_hanging_k4s(&g).unwrap();
        assert!(is_multicircuit(&m));
        assert_eq!(m.vertex_count(), 3);
    }
}

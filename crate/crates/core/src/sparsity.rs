//! Exact (k,l)-sparsity via the pebble game, circuit recognition, and a brute-force
//! counting oracle.
//!
//! Each vertex starts with `k` pebbles. An edge `uv` is accepted when `l + 1` pebbles
//! can be gathered on `{u, v}` by reversing directed paths; it is then oriented out of
//! an endpoint that gives up one pebble. A rejected edge leaves behind the set of
//! vertices reachable from `u` and `v`, which is the smallest tight set containing
//! both endpoints.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphView, MultiGraph, VertexId};

/// Vertex set `X` with `i(X) = 2|X| - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub vertices: BTreeSet<VertexId>,
    pub edge_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PebbleRank {
    pub rank: usize,
    /// Accepted edges in insertion order; parallel copies appear repeatedly.
    pub independent: Vec<Edge>,
}

fn check_params(k: u32, l: u32) -> Result<()> {
    if k == 0 || l >= 2 * k {
        return Err(Error::InvalidParameters { k, l });
    }
    Ok(())
}

/// Incremental pebble-game state over a growing vertex set.
#[derive(Clone, Debug)]
pub struct PebbleState {
    k: u32,
    l: u32,
    index: HashMap<VertexId, usize>,
    ids: Vec<VertexId>,
    pebbles: Vec<u32>,
    /// Outgoing edge ids per vertex.
    out: Vec<Vec<usize>>,
    /// `(tail, head)` per accepted edge.
    arcs: Vec<(usize, usize)>,
    accepted: Vec<Edge>,
}

enum Gather {
    Done,
    Blocked(Vec<usize>),
}

impl PebbleState {
    pub fn new(k: u32, l: u32) -> Result<Self> {
        check_params(k, l)?;
        Ok(PebbleState {
            k,
            l,
            index: HashMap::new(),
            ids: Vec::new(),
            pebbles: Vec::new(),
            out: Vec::new(),
            arcs: Vec::new(),
            accepted: Vec::new(),
        })
    }

    fn slot(&mut self, v: VertexId) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.ids.len();
        self.index.insert(v, i);
        self.ids.push(v);
        self.pebbles.push(self.k);
        self.out.push(Vec::new());
        i
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.slot(v);
    }

    pub fn accepted(&self) -> &[Edge] {
        &self.accepted
    }

    pub fn free_pebbles(&self) -> u32 {
        self.pebbles.iter().sum()
    }

    /// Moves one pebble onto `root` from any vertex reachable from it other than
    /// `root` and `keep`. Returns false if none is reachable.
    fn fetch(&mut self, root: usize, keep: usize) -> bool {
        let n = self.ids.len();
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        let mut found = None;
        'dfs: while let Some(x) = stack.pop() {
            for &eid in &self.out[x] {
                let y = self.arcs[eid].1;
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                via[y] = Some(eid);
                if y != keep && self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'dfs;
                }
                stack.push(y);
            }
        }
        let Some(target) = found else {
            return false;
        };
        let mut y = target;
        while y != root {
            let eid = via[y].expect("path recorded");
            let (tail, head) = self.arcs[eid];
            debug_assert_eq!(head, y);
            let pos = self.out[tail].iter().position(|&e| e == eid).unwrap();
            self.out[tail].swap_remove(pos);
            self.out[head].push(eid);
            self.arcs[eid] = (head, tail);
            y = tail;
        }
        self.pebbles[target] -= 1;
        self.pebbles[root] += 1;
        true
    }

    fn reach(&self, starts: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.ids.len()];
        let mut stack = Vec::new();
        for &s in starts {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for &eid in &self.out[x] {
                let y = self.arcs[eid].1;
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Gathers `need` pebbles on `{a, b}`, or reports the blocking reach set.
    fn gather(&mut self, a: usize, b: usize, need: u32) -> Gather {
        while self.pebbles[a] + self.pebbles[b] < need {
            if self.pebbles[a] < self.k && self.fetch(a, b) {
                continue;
            }
            if self.pebbles[b] < self.k && self.fetch(b, a) {
                continue;
            }
            return Gather::Blocked(self.reach(&[a, b]));
        }
        Gather::Done
    }

    /// Tries to insert `ab`. On rejection returns the blocking vertex set.
    pub fn try_insert(&mut self, a: VertexId, b: VertexId) -> Result<Option<BTreeSet<VertexId>>> {
        if a == b {
            return Err(Error::Loop(a));
        }
        let (ia, ib) = (self.slot(a), self.slot(b));
        match self.gather(ia, ib, self.l + 1) {
            Gather::Blocked(region) => Ok(Some(region.into_iter().map(|i| self.ids[i]).collect())),
            Gather::Done => {
                let (tail, head) = if self.pebbles[ia] > 0 {
                    (ia, ib)
                } else {
                    (ib, ia)
                };
                self.pebbles[tail] -= 1;
                let eid = self.arcs.len();
                self.arcs.push((tail, head));
                self.out[tail].push(eid);
                self.accepted.push(Edge::new(a, b));
                Ok(None)
            }
        }
    }

    /// Would `ab` be accepted? Pebbles may move but the accepted set is unchanged.
    pub fn can_insert(&mut self, a: VertexId, b: VertexId) -> bool {
        let (ia, ib) = (self.slot(a), self.slot(b));
        a != b && matches!(self.gather(ia, ib, self.l + 1), Gather::Done)
    }

    /// The smallest tight set containing `a` and `b`, if one exists.
    pub fn minimal_tight_set(&mut self, a: VertexId, b: VertexId) -> Option<BTreeSet<VertexId>> {
        let (ia, ib) = (self.slot(a), self.slot(b));
        match self.gather(ia, ib, self.l + 1) {
            Gather::Done => None,
            Gather::Blocked(region) => Some(region.into_iter().map(|i| self.ids[i]).collect()),
        }
    }
}

/// Rank of the edge multiset in the (k,l)-count matroid, edges inserted in sorted order.
pub fn pebble_rank<G: GraphView + ?Sized>(g: &G, k: u32, l: u32) -> Result<PebbleRank> {
    let mut state = PebbleState::new(k, l)?;
    for v in g.vertex_ids() {
        state.add_vertex(v);
    }
    // A pair spans at most 2k - l edges in any sparse set; further copies are dependent.
    let cap = 2 * k - l;
    for (e, m) in g.edge_multiplicities() {
        for _ in 0..m.min(cap) {
            state.try_insert(e.u(), e.v())?;
        }
    }
    let independent = state.accepted.clone();
    Ok(PebbleRank {
        rank: independent.len(),
        independent,
    })
}

/// Rank of an arbitrary edge list in the (2,2)-count matroid.
pub fn rank_of_edges(edges: &[Edge]) -> usize {
    let mut state = PebbleState::new(2, 2).expect("valid parameters");
    edges
        .iter()
        .filter(|e| matches!(state.try_insert(e.u(), e.v()), Ok(None)))
        .count()
}

pub fn is_sparse<G: GraphView + ?Sized>(g: &G, k: u32, l: u32) -> Result<bool> {
    Ok(pebble_rank(g, k, l)?.rank == g.edge_count())
}

pub fn is_tight<G: GraphView + ?Sized>(g: &G, k: u32, l: u32) -> Result<bool> {
    let target = k as i64 * g.vertex_count() as i64 - l as i64;
    Ok(g.edge_count() as i64 == target && is_sparse(g, k, l)?)
}

/// Circuit test in M(2,2): `|E| = 2|V| - 1` and every proper vertex subset is sparse.
///
/// One pebble-game pass suffices: the first rejected edge is blocked by the smallest
/// tight set containing its ends, and the graph is a circuit exactly when that set
/// is the whole vertex set.
fn counts_as_circuit<G: GraphView + ?Sized>(g: &G) -> bool {
    let n = g.vertex_count();
    if n == 0 || g.edge_count() != 2 * n - 1 {
        return false;
    }
    let mut state = PebbleState::new(2, 2).expect("valid parameters");
    for v in g.vertex_ids() {
        state.add_vertex(v);
    }
    for e in g.edge_units() {
        match state.try_insert(e.u(), e.v()) {
            Ok(None) => {}
            Ok(Some(block)) => return block.len() == n,
            Err(_) => return false,
        }
    }
    unreachable!("2|V| - 1 edges cannot all be (2,2)-independent")
}

pub fn is_circuit(g: &Graph) -> bool {
    counts_as_circuit(g)
}

pub fn is_multicircuit(g: &MultiGraph) -> bool {
    counts_as_circuit(g)
}

/// `f = 2|V| - |E|`.
pub fn f_value<G: GraphView + ?Sized>(g: &G) -> i64 {
    crate::graph::f_value(g)
}

/// The maximal critical set containing `u` and `w` that blocks adding `uw`, or `None`
/// if `uw` is addable. `g` must be (2,2)-sparse; pass the circuit with the node (and,
/// for the admissibility criterion, its third neighbour) removed.
///
/// Tight sets that share a vertex have a tight union, so the maximal one is the union
/// of the minimal tight sets containing `u` and each other vertex.
pub fn blocking_tight_set(g: &Graph, u: VertexId, w: VertexId) -> Result<Option<CriticalSet>> {
    for x in [u, w] {
        if !g.contains_vertex(x) {
            return Err(Error::UnknownVertex(x));
        }
    }
    if u == w {
        return Err(Error::Loop(u));
    }
    if g.has_edge(u, w) {
        return Err(Error::EdgePresent(Edge::new(u, w)));
    }
    let mut state = PebbleState::new(2, 2)?;
    for v in g.vertices() {
        state.add_vertex(v);
    }
    for e in g.edges() {
        if state.try_insert(e.u(), e.v())?.is_some() {
            return Err(Error::NotSparse);
        }
    }
    let Some(mut set) = state.minimal_tight_set(u, w) else {
        return Ok(None);
    };
    for y in g.vertices() {
        if set.contains(&y) {
            continue;
        }
        if let Some(more) = state.minimal_tight_set(u, y) {
            set.extend(more);
        }
    }
    let edge_count = g.induced_edge_count(&set);
    debug_assert_eq!(edge_count, 2 * set.len() - 2);
    Ok(Some(CriticalSet {
        vertices: set,
        edge_count,
    }))
}

/// Largest vertex count accepted by [`brute_force_is_circuit`].
pub const BRUTE_FORCE_CAP: usize = 16;

/// Definitional circuit test by scanning all vertex subsets.
pub fn brute_force_is_circuit(g: &Graph) -> Result<bool> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if n == 0 || g.edge_count() != 2 * n - 1 {
        return Ok(false);
    }
    let d = g.dense();
    let masks: Vec<u32> = d
        .adj
        .iter()
        .map(|r| r.iter().fold(0u32, |m, &(u, _)| m | (1 << u)))
        .collect();
    let full = (1u32 << n) - 1;
    // induced[X] = induced[X - low] + |N(low) ∩ (X - low)|
    let mut induced = vec![0u16; 1 << n];
    for x in 1..=full {
        let low = x.trailing_zeros() as usize;
        let rest = x & (x - 1);
        induced[x as usize] = induced[rest as usize] + (masks[low] & rest).count_ones() as u16;
        if x != full && induced[x as usize] as i64 > 2 * x.count_ones() as i64 - 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5_minus_e() -> Graph {
        let mut g = Graph::complete(&[1u32, 2, 3, 4, 5]);
        g.remove_edge(VertexId(4), VertexId(5)).unwrap();
        g
    }

    fn k4_edge_k4() -> Graph {
        let mut g = Graph::complete(&[1u32, 2, 3, 4]);
        for e in Graph::complete(&[1u32, 2, 5, 6]).edges() {
            let _ = g.add_edge(e.u(), e.v());
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

    #[test]
    fn k4_is_tight() {
        let k4 = Graph::complete(&[1u32, 2, 3, 4]);
        assert_eq!(pebble_rank(&k4, 2, 2).unwrap().rank, 6);
        assert!(is_tight(&k4, 2, 2).unwrap());
        let mut pendant = k4.clone();
        pendant.add_edge(1u32, 5u32).unwrap();
        assert!(is_sparse(&pendant, 2, 2).unwrap());
        assert!(!is_tight(&pendant, 2, 2).unwrap());
    }

    #[test]
    fn k5_minus_e_has_one_dependency() {
        let g = k5_minus_e();
        assert_eq!(pebble_rank(&g, 2, 2).unwrap().rank, 8);
        assert!(!is_sparse(&g, 2, 2).unwrap());
        assert!(is_circuit(&g));
        assert_eq!(f_value(&g), 1);
    }

    #[test]
    fn base_graphs_are_circuits() {
        for g in [k5_minus_e(), k4_edge_k4(), k4_vertex_k4()] {
            assert!(is_circuit(&g));
            assert!(brute_force_is_circuit(&g).unwrap());
        }
        assert_eq!(k4_edge_k4().edge_count(), 11);
        assert_eq!(k4_vertex_k4().edge_count(), 13);
    }

    #[test]
    fn non_circuits() {
        assert!(!is_circuit(&Graph::complete(&[1u32, 2, 3, 4])));
        assert!(!is_circuit(&k36()));
        // Right count, right rank, but the dependency is confined to the K5\e part.
        let mut g = k5_minus_e();
        g.add_edge(1u32, 6u32).unwrap();
        g.add_edge(2u32, 6u32).unwrap();
        assert_eq!(g.edge_count(), 2 * g.vertex_count() - 1);
        assert_eq!(pebble_rank(&g, 2, 2).unwrap().rank, g.edge_count() - 1);
        assert!(!is_circuit(&g));
        assert!(!brute_force_is_circuit(&g).unwrap());
        let tree = Graph::from_edges([(0u32, 1), (1, 2), (1, 3)]).unwrap();
        assert!(!brute_force_is_circuit(&tree).unwrap());
    }

    #[test]
    fn k36_minus_any_edge_is_not_a_circuit() {
        let g = k36();
        assert_eq!(pebble_rank(&g, 2, 2).unwrap().rank, 16);
        for e in g.edges() {
            let mut h = g.clone();
            h.remove_edge(e.u(), e.v()).unwrap();
            assert_eq!(h.edge_count(), 2 * h.vertex_count() - 1);
            assert!(!is_circuit(&h));
            assert!(!brute_force_is_circuit(&h).unwrap());
        }
    }

    #[test]
    fn multicircuits() {
        let triple = MultiGraph::from_edges([(0u32, 1), (0, 1), (0, 1)]).unwrap();
        assert!(is_multicircuit(&triple));
        let double = MultiGraph::from_edges([(0u32, 1), (0, 1)]).unwrap();
        assert!(!is_multicircuit(&double));
        assert!(is_multicircuit(&MultiGraph::from(&k5_minus_e())));
        assert_eq!(pebble_rank(&triple, 2, 2).unwrap().rank, 2);
    }

    #[test]
    fn invalid_parameters() {
        let k4 = Graph::complete(&[1u32, 2, 3, 4]);
        assert!(matches!(
            pebble_rank(&k4, 2, 4),
            Err(Error::InvalidParameters { k: 2, l: 4 })
        ));
        assert!(pebble_rank(&k4, 0, 0).is_err());
        // Laman count: K4 has one redundant edge in M(2,3).
        assert_eq!(pebble_rank(&k4, 2, 3).unwrap().rank, 5);
    }

    #[test]
    fn f_values() {
        assert_eq!(f_value(&Graph::complete(&[0u32, 1, 2, 3])), 2);
        let edgeless = Graph::from_parts(0u32..7, std::iter::empty()).unwrap();
        assert_eq!(f_value(&edgeless), 14);
    }

    #[test]
    fn blocking_set_absent_when_addable() {
        let mut g = Graph::complete(&[1u32, 2, 3, 4]);
        g.add_vertex(5u32);
        assert_eq!(
            blocking_tight_set(&g, VertexId(1), VertexId(5)).unwrap(),
            None
        );
    }

    /// Largest tight vertex set containing `u` and `w`, by subset scan.
    fn scan_max_tight(g: &Graph, u: VertexId, w: VertexId) -> Option<BTreeSet<VertexId>> {
        let ids: Vec<VertexId> = g.vertices().collect();
        let mut best: Option<BTreeSet<VertexId>> = None;
        for mask in 1u32..(1 << ids.len()) {
            let xs: BTreeSet<VertexId> = (0..ids.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ids[i])
                .collect();
            if xs.contains(&u)
                && xs.contains(&w)
                && g.induced_edge_count(&xs) == 2 * xs.len() - 2
                && best.as_ref().map_or(true, |b| b.len() < xs.len())
            {
                best = Some(xs);
            }
        }
        best
    }

    #[test]
    fn blocking_set_after_removing_an_edge() {
        // K4 plus pendant 5-1, with 2-3 removed: K4 minus an edge is not tight.
        let mut g = Graph::complete(&[1u32, 2, 3, 4]);
        g.add_edge(1u32, 5u32).unwrap();
        assert!(matches!(
            blocking_tight_set(&g, VertexId(2), VertexId(3)),
            Err(Error::EdgePresent(_))
        ));
        g.remove_edge(VertexId(2), VertexId(3)).unwrap();
        assert_eq!(scan_max_tight(&g, VertexId(2), VertexId(3)), None);
        assert_eq!(
            blocking_tight_set(&g, VertexId(2), VertexId(3)).unwrap(),
            None
        );
    }

    #[test]
    fn blocking_set_is_maximal() {
        // K4 on 1..4, vertex 5 joined to 1 and 2 (tight on 1..5), 6 hanging off 5.
        let mut g = Graph::complete(&[1u32, 2, 3, 4]);
        for (a, b) in [(1u32, 5u32), (2, 5), (5, 6)] {
            g.add_edge(a, b).unwrap();
        }
        for (u, w) in [(3u32, 5u32), (3, 6), (4, 5), (1, 6)] {
            let (u, w) = (VertexId(u), VertexId(w));
            let got = blocking_tight_set(&g, u, w).unwrap().map(|c| c.vertices);
            assert_eq!(got, scan_max_tight(&g, u, w), "pair {u},{w}");
        }
        let x = blocking_tight_set(&g, VertexId(3), VertexId(5))
            .unwrap()
            .unwrap();
        assert_eq!(x.vertices.len(), 5);
        assert_eq!(x.edge_count, 8);
    }

    #[test]
    fn blocking_set_rejects_dependent_input() {
        let g = k5_minus_e();
        assert!(matches!(
            blocking_tight_set(&g, VertexId(4), VertexId(5)),
            Err(Error::NotSparse)
        ));
    }

    #[test]
    fn brute_force_cap() {
        let g = Graph::from_parts(0u32..17, std::iter::empty()).unwrap();
        assert!(matches!(
            brute_force_is_circuit(&g),
            Err(Error::SizeCap { .. })
        ));
    }
}

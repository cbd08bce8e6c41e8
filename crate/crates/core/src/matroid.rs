//! Connectivity of the (2,2)-count matroid on a graph's edge set.
//!
//! Two edges are related when some circuit contains both; the classes are the
//! matroid components and edges in no circuit are bridges. The fast path takes one
//! pebble-game basis and unions each non-basis edge with its fundamental circuit,
//! which is the basis edges spanned by the minimal tight set blocking it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphView, VertexId};
use crate::sparsity::{brute_force_is_circuit, rank_of_edges, PebbleState};

/// Largest edge count accepted by the definitional oracle.
pub const DEFINITIONAL_EDGE_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidComponents {
    /// Classes of the shared-circuit relation, bridges included as singletons.
    /// Each class is sorted and classes are ordered by their smallest edge.
    pub partition: Vec<Vec<Edge>>,
    pub bridges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidComponents {
    /// Maximal redundantly rigid edge sets followed by nothing else; bridges are
    /// listed separately.
    pub components: Vec<Vec<Edge>>,
    pub bridges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentMode {
    /// One basis plus fundamental circuits.
    #[default]
    Basis,
    /// Enumerate every circuit by subset scan.
    Definitional,
}

/// `C(e, B)`: `e` together with every basis edge whose exchange for `e` keeps the
/// basis independent. Uses one rank computation per basis edge.
pub fn fundamental_circuit(g: &Graph, basis: &[Edge], e: Edge) -> Result<Vec<Edge>> {
    for &b in basis.iter().chain([&e]) {
        if !g.has_edge(b.u(), b.v()) {
            return Err(Error::MissingEdge(b));
        }
    }
    if basis.contains(&e) {
        return Err(Error::pre(format!("{e} is in the basis")));
    }
    if rank_of_edges(basis) != basis.len() {
        return Err(Error::pre("basis is dependent"));
    }
    let mut extended = basis.to_vec();
    extended.push(e);
    if rank_of_edges(&extended) == extended.len() {
        return Err(Error::pre(format!("{e} extends the basis independently")));
    }
    let mut circuit = vec![e];
    for (i, &b) in basis.iter().enumerate() {
        let mut swapped = basis.to_vec();
        swapped[i] = e;
        if rank_of_edges(&swapped) == basis.len() {
            circuit.push(b);
        }
    }
    circuit.sort();
    Ok(circuit)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups `edges` by union-find over `circuits` (index lists) and reports edges in
/// no circuit as bridges.
fn classes(edges: &[Edge], circuits: &[Vec<usize>]) -> MatroidComponents {
    let mut uf = UnionFind::new(edges.len());
    let mut covered = vec![false; edges.len()];
    for c in circuits {
        for &i in c {
            covered[i] = true;
            uf.union(c[0], i);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    for (i, &e) in edges.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(e);
    }
    let mut partition: Vec<Vec<Edge>> = groups.into_values().collect();
    partition.sort();
    MatroidComponents {
        partition,
        bridges: (0..edges.len())
            .filter(|&i| !covered[i])
            .map(|i| edges[i])
            .collect(),
    }
}

fn basis_circuits(g: &Graph, edges: &[Edge]) -> Vec<Vec<usize>> {
    let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut state = PebbleState::new(2, 2).expect("valid parameters");
    for v in g.vertices() {
        state.add_vertex(v);
    }
    let mut rejected = Vec::new();
    for &e in edges {
        if state
            .try_insert(e.u(), e.v())
            .expect("known vertices")
            .is_some()
        {
            rejected.push(e);
        }
    }
    let basis: Vec<Edge> = state.accepted().to_vec();
    rejected
        .into_iter()
        .map(|e| {
            let span = state
                .minimal_tight_set(e.u(), e.v())
                .expect("a rejected edge stays blocked");
            let mut c = vec![index[&e]];
            c.extend(
                basis
                    .iter()
                    .filter(|b| span.contains(&b.u()) && span.contains(&b.v()))
                    .map(|b| index[b]),
            );
            c
        })
        .collect()
}

/// Every circuit of the matroid, as edge-index lists, by scanning edge subsets.
fn all_circuits(edges: &[Edge]) -> Result<Vec<Vec<usize>>> {
    let m = edges.len();
    if m > DEFINITIONAL_EDGE_CAP {
        return Err(Error::SizeCap {
            n: m,
            cap: DEFINITIONAL_EDGE_CAP,
        });
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << m) {
        let chosen: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let vs: BTreeSet<VertexId> = chosen
            .iter()
            .flat_map(|&i| [edges[i].u(), edges[i].v()])
            .collect();
        if chosen.len() != 2 * vs.len() - 1 {
            continue;
        }
        let h = Graph::from_edges(chosen.iter().map(|&i| (edges[i].u(), edges[i].v())))?;
        if brute_force_is_circuit(&h)? {
            out.push(chosen);
        }
    }
    Ok(out)
}

pub fn matroid_components(g: &Graph) -> MatroidComponents {
    let edges: Vec<Edge> = g.edges().collect();
    classes(&edges, &basis_circuits(g, &edges))
}

pub fn matroid_components_with(g: &Graph, mode: ComponentMode) -> Result<MatroidComponents> {
    match mode {
        ComponentMode::Basis => Ok(matroid_components(g)),
        ComponentMode::Definitional => {
            let edges: Vec<Edge> = g.edges().collect();
            Ok(classes(&edges, &all_circuits(&edges)?))
        }
    }
}

/// One class covering every edge and no bridges. Needs at least two edges.
pub fn is_rm_connected(g: &Graph) -> Result<bool> {
    if g.edge_count() < 2 {
        return Err(Error::pre("R_M-connectivity needs at least two edges"));
    }
    let c = matroid_components(g);
    Ok(c.partition.len() == 1 && c.bridges.is_empty())
}

/// Rank `2|V| - 2`, kept after deleting any single edge.
pub fn is_redundantly_rigid(g: &Graph) -> bool {
    let edges: Vec<Edge> = g.edges().collect();
    let full = (2 * g.vertex_count()).saturating_sub(2);
    if rank_of_edges(&edges) != full {
        return false;
    }
    (0..edges.len()).all(|i| {
        let mut rest = edges.clone();
        rest.remove(i);
        rank_of_edges(&rest) == full
    })
}

/// Maximal redundantly rigid edge sets: non-bridge matroid components glued along
/// shared vertices. Rigid sets sharing a vertex have a rigid union under this count,
/// and each edge already lies in a circuit, so the glued sets stay redundantly rigid.
pub fn redundantly_rigid_components(g: &Graph) -> RigidComponents {
    let mc = matroid_components(g);
    let blocks: Vec<&Vec<Edge>> = mc
        .partition
        .iter()
        .filter(|c| !mc.bridges.contains(&c[0]))
        .collect();
    let mut uf = UnionFind::new(blocks.len());
    let mut owner: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, block) in blocks.iter().enumerate() {
        for e in block.iter() {
            for x in [e.u(), e.v()] {
                match owner.get(&x) {
                    Some(&j) => uf.union(i, j),
                    None => {
                        owner.insert(x, i);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    for (i, block) in blocks.iter().enumerate() {
        let root = uf.find(i);
        groups
            .entry(root)
            .or_default()
            .extend(block.iter().copied());
    }
    let mut components: Vec<Vec<Edge>> = groups
        .into_values()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    components.sort();
    RigidComponents {
        components,
        bridges: mc.bridges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5_minus_e(off: u32) -> Graph {
        let mut g = Graph::complete(&[off, off + 1, off + 2, off + 3, off + 4]);
        g.remove_edge(VertexId(off + 3), VertexId(off + 4)).unwrap();
        g
    }

    fn union(a: &Graph, b: &Graph) -> Graph {
        let mut g = a.clone();
        for e in b.edges() {
            if !g.has_edge(e.u(), e.v()) {
                g.add_edge(e.u(), e.v()).unwrap();
            }
        }
        g
    }

    #[test]
    fn circuit_is_one_component() {
        let g = k5_minus_e(0);
        let c = matroid_components(&g);
        assert_eq!(c.partition.len(), 1);
        assert!(c.bridges.is_empty());
        assert!(is_rm_connected(&g).unwrap());
        assert!(is_redundantly_rigid(&g));
    }

    #[test]
    fn fundamental_circuit_of_k5_minus_e() {
        let g = k5_minus_e(0);
        let edges: Vec<Edge> = g.edges().collect();
        let (basis, e) = (&edges[1..], edges[0]);
        assert_eq!(fundamental_circuit(&g, basis, e).unwrap(), edges);
    }

    #[test]
    fn fundamental_circuit_stays_in_block() {
        let mut g = union(&k5_minus_e(0), &k5_minus_e(10));
        g.add_edge(4u32, 20u32).unwrap();
        g.add_edge(20u32, 10u32).unwrap();
        let edges: Vec<Edge> = g.edges().collect();
        let e = Edge::new(0u32, 1u32);
        let basis: Vec<Edge> = edges.iter().copied().filter(|&x| x != e).collect();
        // Drop one edge of the second block so the basis is independent.
        let basis: Vec<Edge> = basis
            .into_iter()
            .filter(|&x| x != Edge::new(10u32, 11u32))
            .collect();
        let c = fundamental_circuit(&g, &basis, e).unwrap();
        assert_eq!(c.len(), 9);
        assert!(c.iter().all(|x| x.u().0 < 5 && x.v().0 < 5));
        let comps = matroid_components(&g);
        assert_eq!(
            comps.bridges,
            vec![Edge::new(4u32, 20u32), Edge::new(10u32, 20u32)]
        );
    }

    #[test]
    fn fundamental_circuit_errors() {
        let g = Graph::from_edges([(0u32, 1), (1, 2)]).unwrap();
        let r = fundamental_circuit(&g, &[Edge::new(0u32, 1u32)], Edge::new(1u32, 2u32));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn pendant_edge_is_a_bridge() {
        let mut g = k5_minus_e(0);
        g.add_edge(0u32, 9u32).unwrap();
        let c = matroid_components(&g);
        assert_eq!(c.bridges, vec![Edge::new(0u32, 9u32)]);
        assert_eq!(c.partition.len(), 2);
        assert!(!is_rm_connected(&g).unwrap());
    }

    #[test]
    fn tight_graph_is_all_bridges() {
        let mut g = k5_minus_e(0);
        g.remove_edge(VertexId(0), VertexId(1)).unwrap();
        let c = matroid_components(&g);
        assert_eq!(c.bridges.len(), 8);
        assert!(!is_redundantly_rigid(&g));
        assert!(!is_rm_connected(&g).unwrap());
        let r = redundantly_rigid_components(&g);
        assert!(r.components.is_empty());
    }

    #[test]
    fn k36_is_redundantly_rigid() {
        let g = Graph::from_edges((0u32..3).flat_map(|a| (3u32..9).map(move |b| (a, b)))).unwrap();
        assert!(is_redundantly_rigid(&g));
        assert!(is_rm_connected(&g).unwrap());
    }

    #[test]
    fn blocks_sharing_a_vertex() {
        // Vertex 4 of the first copy is identified with vertex 10 of the second.
        let second = k5_minus_e(10).relabel(|v| if v.0 == 10 { VertexId(4) } else { v });
        let g = union(&k5_minus_e(0), &second);
        assert_eq!(matroid_components(&g).partition.len(), 2);
        assert!(is_redundantly_rigid(&g));
        assert!(!is_rm_connected(&g).unwrap());
        assert_eq!(redundantly_rigid_components(&g).components.len(), 1);
    }

    #[test]
    fn definitional_mode_agrees() {
        let mut g = k5_minus_e(0);
        g.add_edge(0u32, 9u32).unwrap();
        g.add_edge(1u32, 9u32).unwrap();
        let a = matroid_components_with(&g, ComponentMode::Basis).unwrap();
        let b = matroid_components_with(&g, ComponentMode::Definitional).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rm_connected_needs_two_edges() {
        let g = Graph::from_edges([(0u32, 1)]).unwrap();
        assert!(is_rm_connected(&g).is_err());
    }
}

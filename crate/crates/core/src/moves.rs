//! Henneberg 2 moves, the three sums and the three separations.
//!
//! Sums keep the left operand's labels. Surviving right-operand vertices that are
//! not identified with a left vertex keep their label unless it is taken, in which
//! case they get fresh labels above every label in play, assigned in ascending order.
//! Separations label new vertices `max + 1`, `max + 2`, so the two sides of a
//! separation share only the cut vertices and the sum recorded with them rebuilds
//! the input exactly.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{f_value, Edge, Graph, GraphView, MultiGraph, VertexId};
use crate::sparsity::{is_circuit, is_multicircuit};
use crate::structure::{EdgeCutset3, HangingK4};

/// One move with the vertex ids needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum MoveRecord {
    /// Subdivide `uw` by the new vertex `v` and join `v` to `z`.
    Henneberg2 {
        u: VertexId,
        w: VertexId,
        z: VertexId,
        v: VertexId,
    },
    /// Delete the node `v` and add `uw`.
    InvHenneberg2 {
        v: VertexId,
        u: VertexId,
        w: VertexId,
    },
    /// Left edge `ab` glued to the right operand's hanging K4.
    Sum1 {
        a: VertexId,
        b: VertexId,
        hanging: HangingK4,
    },
    Sum2 {
        left: HangingK4,
        right: HangingK4,
    },
    /// `matching` pairs each neighbour of `v1` with a neighbour of `v2`.
    Sum3 {
        v1: VertexId,
        v2: VertexId,
        matching: [[VertexId; 2]; 3],
    },
    Sep1 {
        a: VertexId,
        b: VertexId,
        fresh: [VertexId; 2],
    },
    Sep2 {
        a: VertexId,
        b: VertexId,
        fresh: [VertexId; 2],
    },
    Sep3 {
        edges: [Edge; 3],
        fresh: VertexId,
    },
}

impl MoveRecord {
    pub fn kind(&self) -> &'static str {
        match self {
            MoveRecord::Henneberg2 { .. } => "Henneberg2",
            MoveRecord::InvHenneberg2 { .. } => "InvHenneberg2",
            MoveRecord::Sum1 { .. } => "Sum1",
            MoveRecord::Sum2 { .. } => "Sum2",
            MoveRecord::Sum3 { .. } => "Sum3",
            MoveRecord::Sep1 { .. } => "Sep1",
            MoveRecord::Sep2 { .. } => "Sep2",
            MoveRecord::Sep3 { .. } => "Sep3",
        }
    }

    /// Labels the move creates on its own (sums may also relabel the right operand).
    pub fn fresh_labels(&self) -> Vec<VertexId> {
        match self {
            MoveRecord::Henneberg2 { v, .. } => vec![*v],
            MoveRecord::Sep1 { fresh, .. } | MoveRecord::Sep2 { fresh, .. } => fresh.to_vec(),
            MoveRecord::Sep3 { fresh, .. } => vec![*fresh],
            _ => Vec::new(),
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(
            self,
            MoveRecord::Sum1 { .. } | MoveRecord::Sum2 { .. } | MoveRecord::Sum3 { .. }
        )
    }

    pub fn apply_unary(&self, g: &Graph) -> Result<Graph> {
        match *self {
            MoveRecord::Henneberg2 { u, w, z, v } => henneberg2(g, u, w, z, v),
            MoveRecord::InvHenneberg2 { v, u, w } => inverse_henneberg2(g, v, u, w),
            _ => Err(Error::pre(format!(
                "{} is not a single-graph move",
                self.kind()
            ))),
        }
    }

    pub fn apply_binary(&self, left: &Graph, right: &Graph) -> Result<SumResult> {
        match self {
            MoveRecord::Sum1 { a, b, hanging } => one_sum(left, *a, *b, right, hanging),
            MoveRecord::Sum2 {
                left: h1,
                right: h2,
            } => two_sum(left, h1, right, h2),
            MoveRecord::Sum3 { v1, v2, matching } => three_sum(left, *v1, right, *v2, matching),
            _ => Err(Error::pre(format!("{} is not a sum", self.kind()))),
        }
    }
}

/// A sum's output with the map from surviving right-operand vertices to their
/// labels in the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumResult {
    pub graph: Graph,
    pub right_map: BTreeMap<VertexId, VertexId>,
}

/// The two circuits produced by a separation and the sum that glues them back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub left: Graph,
    pub right: Graph,
    pub separation: MoveRecord,
    pub sum: MoveRecord,
}

fn require_vertex(g: &Graph, v: VertexId) -> Result<()> {
    if g.contains_vertex(v) {
        Ok(())
    } else {
        Err(Error::UnknownVertex(v))
    }
}

fn require_circuit(g: &Graph, which: &str) -> Result<()> {
    if is_circuit(g) {
        Ok(())
    } else {
        Err(Error::pre(format!("{which} is not a circuit")))
    }
}

fn require_node(g: &Graph, v: VertexId) -> Result<()> {
    require_vertex(g, v)?;
    match g.degree(v) {
        3 => Ok(()),
        degree => Err(Error::NotDegreeThree { vertex: v, degree }),
    }
}

pub fn henneberg2(g: &Graph, u: VertexId, w: VertexId, z: VertexId, v: VertexId) -> Result<Graph> {
    for x in [u, w, z] {
        require_vertex(g, x)?;
    }
    if !g.has_edge(u, w) {
        return Err(Error::MissingEdge(Edge::new(u, w)));
    }
    if z == u || z == w {
        return Err(Error::pre(format!(
            "third vertex {z} must differ from {u} and {w}"
        )));
    }
    if g.contains_vertex(v) {
        return Err(Error::LabelClash(v));
    }
    let mut h = g.clone();
    h.remove_edge(u, w)?;
    for x in [u, w, z] {
        h.add_edge(v, x)?;
    }
    Ok(h)
}

pub fn inverse_henneberg2(g: &Graph, v: VertexId, u: VertexId, w: VertexId) -> Result<Graph> {
    require_node(g, v)?;
    if u == w || !g.has_edge(v, u) || !g.has_edge(v, w) {
        return Err(Error::pre(format!(
            "{u} and {w} must be distinct neighbours of {v}"
        )));
    }
    if g.has_edge(u, w) {
        return Err(Error::EdgePresent(Edge::new(u, w)));
    }
    let mut h = g.clone();
    h.remove_vertex(v)?;
    h.add_edge(u, w)?;
    Ok(h)
}

/// Neighbour pairs of `v` in lexicographic order.
fn neighbour_pairs(neigh: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for i in 0..neigh.len() {
        for j in i + 1..neigh.len() {
            out.push((neigh[i], neigh[j]));
        }
    }
    out
}

/// Whether `G_v^{uw}` is a simple circuit. False on any precondition failure.
pub fn is_admissible_pair(g: &Graph, v: VertexId, u: VertexId, w: VertexId) -> bool {
    inverse_henneberg2(g, v, u, w).is_ok_and(|h| is_circuit(&h))
}

/// Admissible pairs at `v`, lexicographic.
pub fn admissible_pairs(g: &Graph, v: VertexId) -> Vec<(VertexId, VertexId)> {
    if !g.contains_vertex(v) || g.degree(v) != 3 {
        return Vec::new();
    }
    let neigh: Vec<VertexId> = g.neighbors(v).collect();
    neighbour_pairs(&neigh)
        .into_iter()
        .filter(|&(u, w)| is_admissible_pair(g, v, u, w))
        .collect()
}

/// Every node with at least one admissible pair, ascending.
pub fn admissible_nodes(g: &Graph) -> Vec<(VertexId, Vec<(VertexId, VertexId)>)> {
    g.vertices()
        .filter(|&v| g.degree(v) == 3)
        .map(|v| (v, admissible_pairs(g, v)))
        .filter(|(_, p)| !p.is_empty())
        .collect()
}

/// First admissible `(v, u, w)` in ascending vertex order.
pub fn first_admissible(g: &Graph) -> Option<(VertexId, VertexId, VertexId)> {
    g.vertices().filter(|&v| g.degree(v) == 3).find_map(|v| {
        let neigh: Vec<VertexId> = g.neighbors(v).collect();
        neighbour_pairs(&neigh)
            .into_iter()
            .find(|&(u, w)| is_admissible_pair(g, v, u, w))
            .map(|(u, w)| (v, u, w))
    })
}

/// Inverse Henneberg 2 on a multigraph. `v` must have degree 3 with three distinct
/// neighbours and the new edge must not duplicate an existing one.
pub fn inverse_henneberg2_multi(
    g: &MultiGraph,
    v: VertexId,
    u: VertexId,
    w: VertexId,
) -> Result<MultiGraph> {
    if !g.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let neigh: Vec<VertexId> = g.neighbors(v).collect();
    if g.degree(v) != 3 || neigh.len() != 3 {
        return Err(Error::pre(format!(
            "{v} must have degree 3 with distinct neighbours"
        )));
    }
    if u == w || !neigh.contains(&u) || !neigh.contains(&w) {
        return Err(Error::pre(format!(
            "{u} and {w} must be distinct neighbours of {v}"
        )));
    }
    if g.multiplicity(u, w) > 0 {
        return Err(Error::EdgePresent(Edge::new(u, w)));
    }
    let mut h = g.clone();
    h.remove_vertex(v)?;
    h.add_edge(u, w)?;
    Ok(h)
}

/// Nodes with distinct neighbours having a pair whose inverse move gives a multicircuit.
pub fn admissible_nodes_multi(g: &MultiGraph) -> Vec<(VertexId, Vec<(VertexId, VertexId)>)> {
    let mut out = Vec::new();
    for v in g.vertices() {
        let neigh: Vec<VertexId> = g.neighbors(v).collect();
        if g.degree(v) != 3 || neigh.len() != 3 {
            continue;
        }
        let pairs: Vec<_> = neighbour_pairs(&neigh)
            .into_iter()
            .filter(|&(u, w)| {
                inverse_henneberg2_multi(g, v, u, w).is_ok_and(|h| is_multicircuit(&h))
            })
            .collect();
        if !pairs.is_empty() {
            out.push((v, pairs));
        }
    }
    out
}

/// Checks that `h` is a hanging K4 of `g`: `abcd` complete, `c` and `d` of degree
/// 3, and something outside the K4.
pub fn check_hanging_k4(g: &Graph, h: &HangingK4) -> Result<()> {
    let quad = h.vertices();
    for &x in &quad {
        require_vertex(g, x)?;
    }
    if quad.iter().collect::<BTreeSet<_>>().len() != 4 {
        return Err(Error::pre("hanging K4 vertices must be distinct"));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !g.has_edge(quad[i], quad[j]) {
                return Err(Error::MissingEdge(Edge::new(quad[i], quad[j])));
            }
        }
    }
    if g.degree(h.c) != 3 || g.degree(h.d) != 3 || g.vertex_count() <= 4 {
        return Err(Error::pre(format!(
            "{{{}, {}}} does not cut off a hanging K4 on {}, {}",
            h.a, h.b, h.c, h.d
        )));
    }
    Ok(())
}

/// Union of `left` (minus `left_drop`) and `right` (minus `right_drop`), with
/// `ident` mapping right vertices onto left ones. Edges of `right` that land on an
/// existing edge are only allowed between identified vertices.
fn glue(
    left: &Graph,
    left_drop: &[VertexId],
    right: &Graph,
    right_drop: &[VertexId],
    ident: &BTreeMap<VertexId, VertexId>,
) -> Result<SumResult> {
    let mut g = left.clone();
    for &x in left_drop {
        g.remove_vertex(x)?;
    }
    let mut r = right.clone();
    for &x in right_drop {
        r.remove_vertex(x)?;
    }
    let taken: BTreeSet<VertexId> = g.vertices().collect();
    let survivors: Vec<VertexId> = r.vertices().filter(|x| !ident.contains_key(x)).collect();
    let top = taken.iter().chain(&survivors).max().map_or(0, |v| v.0 + 1);
    let mut next = top;
    let mut right_map = BTreeMap::new();
    for x in r.vertices() {
        let y = if let Some(&y) = ident.get(&x) {
            y
        } else if taken.contains(&x) {
            next += 1;
            VertexId(next - 1)
        } else {
            x
        };
        right_map.insert(x, y);
    }
    for &y in right_map.values() {
        g.add_vertex(y);
    }
    for e in r.edges() {
        let (p, q) = (right_map[&e.u()], right_map[&e.v()]);
        if g.has_edge(p, q) {
            if ident.contains_key(&e.u()) && ident.contains_key(&e.v()) {
                continue;
            }
            return Err(Error::DuplicateEdge(Edge::new(p, q)));
        }
        g.add_edge(p, q)?;
    }
    Ok(SumResult {
        graph: g,
        right_map,
    })
}

/// 1-sum over the left edge `ab` and the right operand's hanging K4. Neither `ab`
/// nor the K4 interior survives.
pub fn one_sum(
    g1: &Graph,
    a: VertexId,
    b: VertexId,
    g2: &Graph,
    h: &HangingK4,
) -> Result<SumResult> {
    if !g1.has_edge(a, b) {
        return Err(Error::MissingEdge(Edge::new(a, b)));
    }
    check_hanging_k4(g2, h)?;
    require_circuit(g1, "left operand")?;
    require_circuit(g2, "right operand")?;
    let mut l = g1.clone();
    l.remove_edge(a, b)?;
    let mut r = g2.clone();
    r.remove_edge(h.a, h.b)?;
    let ident = BTreeMap::from([(h.a, a), (h.b, b)]);
    glue(&l, &[], &r, &[h.c, h.d], &ident)
}

/// 2-sum over two hanging K4s: both interiors go, one copy of `ab` stays.
pub fn two_sum(g1: &Graph, h1: &HangingK4, g2: &Graph, h2: &HangingK4) -> Result<SumResult> {
    check_hanging_k4(g1, h1)?;
    check_hanging_k4(g2, h2)?;
    require_circuit(g1, "left operand")?;
    require_circuit(g2, "right operand")?;
    let ident = BTreeMap::from([(h2.a, h1.a), (h2.b, h1.b)]);
    glue(g1, &[h1.c, h1.d], g2, &[h2.c, h2.d], &ident)
}

/// 3-sum: delete the nodes `v1`, `v2` and join their neighbourhoods by `matching`.
pub fn three_sum(
    g1: &Graph,
    v1: VertexId,
    g2: &Graph,
    v2: VertexId,
    matching: &[[VertexId; 2]; 3],
) -> Result<SumResult> {
    require_node(g1, v1)?;
    require_node(g2, v2)?;
    let n1: BTreeSet<VertexId> = g1.neighbors(v1).collect();
    let n2: BTreeSet<VertexId> = g2.neighbors(v2).collect();
    let m1: BTreeSet<VertexId> = matching.iter().map(|p| p[0]).collect();
    let m2: BTreeSet<VertexId> = matching.iter().map(|p| p[1]).collect();
    if m1 != n1 || m2 != n2 {
        return Err(Error::pre(format!(
            "matching must pair the neighbours of {v1} with those of {v2}"
        )));
    }
    require_circuit(g1, "left operand")?;
    require_circuit(g2, "right operand")?;
    let mut out = glue(g1, &[v1], g2, &[v2], &BTreeMap::new())?;
    for [x1, x2] in matching {
        let y = out.right_map[x2];
        out.graph.add_edge(*x1, y)?;
    }
    Ok(out)
}

struct Sides {
    a_side: BTreeSet<VertexId>,
    b_side: BTreeSet<VertexId>,
}

/// Canonical bipartition of `G - {a, b}`: the component of the smallest remaining
/// vertex against the rest.
fn cut_sides(g: &Graph, a: VertexId, b: VertexId) -> Result<Sides> {
    require_vertex(g, a)?;
    require_vertex(g, b)?;
    if a == b {
        return Err(Error::pre("cutpair vertices must differ"));
    }
    let mut h = g.clone();
    h.remove_vertex(a)?;
    h.remove_vertex(b)?;
    let comps = h.connected_components();
    if comps.len() < 2 {
        return Err(Error::pre(format!("{{{a}, {b}}} is not a cutpair")));
    }
    let first = comps
        .iter()
        .min_by_key(|c| c.iter().next().copied())
        .cloned()
        .unwrap();
    let rest = comps
        .into_iter()
        .filter(|c| *c != first)
        .flatten()
        .collect();
    Ok(Sides {
        a_side: first,
        b_side: rest,
    })
}

fn closed_side(g: &Graph, side: &BTreeSet<VertexId>, a: VertexId, b: VertexId) -> Graph {
    let mut s = side.clone();
    s.insert(a);
    s.insert(b);
    g.induced_subgraph(&s).expect("side vertices belong to g")
}

fn glue_k4(g: &mut Graph, a: VertexId, b: VertexId, c: VertexId, d: VertexId) {
    for (x, y) in [(a, b), (a, c), (a, d), (b, c), (b, d), (c, d)] {
        if !g.has_edge(x, y) {
            g.add_edge(x, y).expect("distinct vertices");
        }
    }
}

fn fresh_pair(g: &Graph) -> (VertexId, VertexId) {
    let c = g.fresh_vertex();
    (c, VertexId(c.0 + 1))
}

/// 1-separation over a cutpair with `ab` absent. The left output is the side with
/// `f = 2` plus `ab`; the right output is the `f = 3` side with a K4 glued on `ab`.
pub fn one_separation(g: &Graph, a: VertexId, b: VertexId) -> Result<Split> {
    if g.has_edge(a, b) {
        return Err(Error::EdgePresent(Edge::new(a, b)));
    }
    let sides = cut_sides(g, a, b)?;
    require_circuit(g, "input")?;
    let ga = closed_side(g, &sides.a_side, a, b);
    let gb = closed_side(g, &sides.b_side, a, b);
    let (two, three) = match (f_value(&ga), f_value(&gb)) {
        (2, 3) => (ga, gb),
        (3, 2) => (gb, ga),
        (fa, fb) => {
            return Err(Error::pre(format!(
                "side f-values are {fa} and {fb}, expected 2 and 3"
            )));
        }
    };
    let (c, d) = fresh_pair(g);
    let mut left = two;
    left.add_edge(a, b)?;
    let mut right = three;
    glue_k4(&mut right, a, b, c, d);
    Ok(Split {
        left,
        right,
        separation: MoveRecord::Sep1 {
            a,
            b,
            fresh: [c, d],
        },
        sum: MoveRecord::Sum1 {
            a,
            b,
            hanging: HangingK4 { a, b, c, d },
        },
    })
}

/// 2-separation over a cutpair with `ab` present: each side gets a K4 on `ab`.
pub fn two_separation(g: &Graph, a: VertexId, b: VertexId) -> Result<Split> {
    if !g.has_edge(a, b) {
        return Err(Error::MissingEdge(Edge::new(a, b)));
    }
    let sides = cut_sides(g, a, b)?;
    require_circuit(g, "input")?;
    let mut left = closed_side(g, &sides.a_side, a, b);
    let mut right = closed_side(g, &sides.b_side, a, b);
    let (fa, fb) = (f_value(&left), f_value(&right));
    if (fa, fb) != (2, 2) {
        return Err(Error::pre(format!(
            "side f-values are {fa} and {fb}, expected 2 and 2"
        )));
    }
    let (c, d) = fresh_pair(g);
    glue_k4(&mut left, a, b, c, d);
    glue_k4(&mut right, a, b, c, d);
    let h = HangingK4 { a, b, c, d };
    Ok(Split {
        left,
        right,
        separation: MoveRecord::Sep2 {
            a,
            b,
            fresh: [c, d],
        },
        sum: MoveRecord::Sum2 { left: h, right: h },
    })
}

/// 3-separation over a non-trivial 3-edge cutset: each side gets a new node joined
/// to its three cut-edge ends.
pub fn three_separation(g: &Graph, cut: &EdgeCutset3) -> Result<Split> {
    if cut.trivial || cut.side_a.len() < 2 || cut.side_b.len() < 2 {
        return Err(Error::pre("3-edge cutset is trivial"));
    }
    let all: BTreeSet<VertexId> = g.vertices().collect();
    let union: BTreeSet<VertexId> = cut.side_a.union(&cut.side_b).copied().collect();
    if union != all || !cut.side_a.is_disjoint(&cut.side_b) {
        return Err(Error::pre("cutset sides must partition the vertex set"));
    }
    for e in cut.edges {
        if !g.has_edge(e.u(), e.v()) {
            return Err(Error::MissingEdge(e));
        }
    }
    let crossing = g
        .edges()
        .filter(|e| cut.side_a.contains(&e.u()) != cut.side_a.contains(&e.v()))
        .count();
    let oriented = cut.oriented();
    let ends_a: BTreeSet<VertexId> = oriented.iter().map(|p| p.0).collect();
    let ends_b: BTreeSet<VertexId> = oriented.iter().map(|p| p.1).collect();
    if crossing != 3
        || oriented
            .iter()
            .any(|(x, y)| !cut.side_a.contains(x) || cut.side_a.contains(y))
    {
        return Err(Error::pre(
            "edges are not the cutset between the given sides",
        ));
    }
    if ends_a.len() != 3 || ends_b.len() != 3 {
        return Err(Error::pre("cut edges must have distinct ends on each side"));
    }
    require_circuit(g, "input")?;
    let v = g.fresh_vertex();
    let mut left = g.induced_subgraph(&cut.side_a)?;
    let mut right = g.induced_subgraph(&cut.side_b)?;
    for (x, y) in oriented {
        left.add_edge(v, x)?;
        right.add_edge(v, y)?;
    }
    Ok(Split {
        left,
        right,
        separation: MoveRecord::Sep3 {
            edges: cut.edges,
            fresh: v,
        },
        sum: MoveRecord::Sum3 {
            v1: v,
            v2: v,
            matching: oriented.map(|(x, y)| [x, y]),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;
    use crate::sparsity::brute_force_is_circuit;
    use crate::structure::{hanging_k4s, nontrivial_3_edge_cutsets};

    fn vid(x: u32) -> VertexId {
        VertexId(x)
    }

    fn k5_minus_e() -> Graph {
        let mut g = Graph::complete(&[1u32, 2, 3, 4, 5]);
        g.remove_edge(vid(4), vid(5)).unwrap();
        g
    }

    fn k4_edge_k4() -> Graph {
        let mut g = Graph::complete(&[1u32, 2, 3, 4]);
        for (a, b) in [(1u32, 5u32), (1, 6), (2, 5), (2, 6), (5, 6)] {
            g.add_edge(a, b).unwrap();
        }
        g
    }

    #[test]
    fn henneberg2_on_k5_minus_e() {
        let g = henneberg2(&k5_minus_e(), vid(1), vid(2), vid(3), vid(6)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 11));
        assert!(is_circuit(&g));
        assert!(brute_force_is_circuit(&g).unwrap());
        let back = inverse_henneberg2(&g, vid(6), vid(1), vid(2)).unwrap();
        assert_eq!(back, k5_minus_e());
    }

    #[test]
    fn henneberg2_errors() {
        let g = k5_minus_e();
        assert!(matches!(
            henneberg2(&g, vid(4), vid(5), vid(1), vid(6)),
            Err(Error::MissingEdge(_))
        ));
        assert!(henneberg2(&g, vid(1), vid(2), vid(2), vid(6)).is_err());
        assert!(matches!(
            henneberg2(&g, vid(1), vid(2), vid(3), vid(5)),
            Err(Error::LabelClash(_))
        ));
    }

    #[test]
    fn k5_minus_e_has_no_admissible_pairs() {
        let g = k5_minus_e();
        for (u, w) in [(1, 2), (1, 3), (2, 3)] {
            assert!(matches!(
                inverse_henneberg2(&g, vid(4), vid(u), vid(w)),
                Err(Error::EdgePresent(_))
            ));
        }
        assert!(admissible_nodes(&g).is_empty());
        assert!(matches!(
            inverse_henneberg2(&g, vid(1), vid(2), vid(3)),
            Err(Error::NotDegreeThree { degree: 4, .. })
        ));
    }

    #[test]
    fn one_sum_and_separation() {
        let g1 = k5_minus_e();
        let g2 = k4_edge_k4().relabel(|v| vid(v.0 + 10));
        let h = hanging_k4s(&g2)[0];
        let s = one_sum(&g1, vid(1), vid(2), &g2, &h).unwrap();
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (7, 13));
        assert_eq!(s.graph.edge_count(), g1.edge_count() + g2.edge_count() - 7);
        assert!(is_circuit(&s.graph));
        assert!(brute_force_is_circuit(&s.graph).unwrap());
        let split = one_separation(&s.graph, vid(1), vid(2)).unwrap();
        let mut pieces = [split.left.clone(), split.right.clone()];
        pieces.sort_by_key(|p| p.vertex_count());
        assert!(is_isomorphic(&pieces[0], &g1));
        assert!(is_isomorphic(&pieces[1], &g2));
        for p in &pieces {
            assert!(brute_force_is_circuit(p).unwrap());
        }
        let rebuilt = split.sum.apply_binary(&split.left, &split.right).unwrap();
        assert_eq!(rebuilt.graph, s.graph);
    }

    #[test]
    fn two_sum_and_separation() {
        let g = k4_edge_k4();
        let other = g.relabel(|v| vid(v.0 + 10));
        let h1 = hanging_k4s(&g)[0];
        let h2 = hanging_k4s(&other)[0];
        let s = two_sum(&g, &h1, &other, &h2).unwrap();
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (6, 11));
        assert!(is_circuit(&s.graph));
        let split = two_separation(&g, vid(1), vid(2)).unwrap();
        assert!(is_isomorphic(&split.left, &g));
        assert!(is_isomorphic(&split.right, &g));
        assert_eq!(
            split
                .sum
                .apply_binary(&split.left, &split.right)
                .unwrap()
                .graph,
            g
        );
    }

    #[test]
    fn three_sum_and_separation() {
        let g1 = k5_minus_e();
        let s = three_sum(
            &g1,
            vid(5),
            &g1,
            vid(5),
            &[[vid(1), vid(1)], [vid(2), vid(2)], [vid(3), vid(3)]],
        )
        .unwrap();
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (8, 15));
        assert!(is_circuit(&s.graph));
        // Right labels 1..4 clash and are moved above the left ones.
        assert_eq!(s.right_map[&vid(1)], vid(5));
        let cuts = nontrivial_3_edge_cutsets(&s.graph).unwrap();
        assert_eq!(cuts.len(), 1);
        let split = three_separation(&s.graph, &cuts[0]).unwrap();
        assert!(is_isomorphic(&split.left, &g1));
        assert!(is_isomorphic(&split.right, &g1));
        assert_eq!(
            split
                .sum
                .apply_binary(&split.left, &split.right)
                .unwrap()
                .graph,
            s.graph
        );
    }

    #[test]
    fn separation_errors() {
        let g = k4_edge_k4();
        assert!(matches!(
            one_separation(&g, vid(1), vid(2)),
            Err(Error::EdgePresent(_))
        ));
        assert!(two_separation(&g, vid(3), vid(4)).is_err());
        let g = k5_minus_e();
        assert!(one_separation(&g, vid(4), vid(5)).is_err());
    }

    #[test]
    fn sum_rejects_bad_operands() {
        let g = k5_minus_e();
        let bogus = HangingK4 {
            a: vid(1),
            b: vid(2),
            c: vid(3),
            d: vid(4),
        };
        assert!(one_sum(&g, vid(1), vid(2), &g, &bogus).is_err());
        assert!(one_sum(
            &g,
            vid(4),
            vid(5),
            &k4_edge_k4(),
            &hanging_k4s(&k4_edge_k4())[0]
        )
        .is_err());
        assert!(three_sum(
            &g,
            vid(1),
            &g,
            vid(4),
            &[[vid(2), vid(1)], [vid(3), vid(2)], [vid(4), vid(3)]]
        )
        .is_err());
    }

    #[test]
    fn record_json_shape() {
        let r = MoveRecord::Henneberg2 {
            u: vid(1),
            w: vid(2),
            z: vid(3),
            v: vid(6),
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"kind":"Henneberg2","params":{"u":1,"w":2,"z":3,"v":6}}"#
        );
        assert_eq!(serde_json::from_str::<MoveRecord>(&s).unwrap(), r);
        assert_eq!(r.fresh_labels(), vec![vid(6)]);
    }

    #[test]
    fn multigraph_inverse_move() {
        let g = henneberg2(&k5_minus_e(), vid(1), vid(2), vid(3), vid(6)).unwrap();
        let m = MultiGraph::from(&g);
        assert!(inverse_henneberg2_multi(&m, vid(6), vid(1), vid(2)).is_ok());
        assert!(matches!(
            inverse_henneberg2_multi(&m, vid(6), vid(1), vid(3)),
            Err(Error::EdgePresent(_))
        ));
        assert!(!admissible_nodes_multi(&m).is_empty());
    }
}

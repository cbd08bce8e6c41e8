//! Building circuits from base graphs and taking them apart again.
//!
//! A [`ConstructionTrace`] is a forest of components: leaves are labeled copies of
//! the three base graphs, Henneberg 2 steps act inside one component, and sums merge
//! two components into a new one. Steps are stored in an order where every operand
//! exists before it is used, so replay is a single pass.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    augment_levels, canonical_labeling, is_isomorphic, CanonicalForm, Graph, GraphView, VertexId,
};
use crate::moves::{
    first_admissible, inverse_henneberg2, one_separation, three_separation, two_separation,
    MoveRecord, Split,
};
use crate::sparsity::{brute_force_is_circuit, is_circuit, is_sparse};
use crate::structure::{cutpairs, hanging_k4s, is_3_connected, nontrivial_3_edge_cutsets, CutPair};

/// Largest `n` accepted by [`enumerate_circuits`].
pub const ENUMERATION_CAP: usize = 8;
/// Largest `n` accepted by [`enumerate_circuits_by_scan`].
pub const SCAN_CAP: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BaseKind {
    /// K5 minus an edge: 5 vertices, 9 edges.
    K5minusE,
    /// Two K4s sharing an edge: 6 vertices, 11 edges.
    K4edgeK4,
    /// Two K4s sharing a vertex plus an edge between them: 7 vertices, 13 edges.
    K4vertexK4,
}

impl BaseKind {
    pub const ALL: [BaseKind; 3] = [BaseKind::K5minusE, BaseKind::K4edgeK4, BaseKind::K4vertexK4];

    pub fn vertex_count(self) -> usize {
        match self {
            BaseKind::K5minusE => 5,
            BaseKind::K4edgeK4 => 6,
            BaseKind::K4vertexK4 => 7,
        }
    }

    /// The reference copy on `0..n`.
    ///
    /// K5minusE misses edge 3-4. K4edgeK4 is K4 on 0123 and K4 on 0145. K4vertexK4 is
    /// K4 on 0123, K4 on 0456 and the edge 1-4.
    pub fn graph(self) -> Graph {
        match self {
            BaseKind::K5minusE => {
                let mut g = Graph::complete(&[0u32, 1, 2, 3, 4]);
                g.remove_edge(VertexId(3), VertexId(4))
                    .expect("edge exists");
                g
            }
            BaseKind::K4edgeK4 => k4_union(&[[0, 1, 2, 3], [0, 1, 4, 5]], None),
            BaseKind::K4vertexK4 => k4_union(&[[0, 1, 2, 3], [0, 4, 5, 6]], Some((1, 4))),
        }
    }
}

fn k4_union(quads: &[[u32; 4]], extra: Option<(u32, u32)>) -> Graph {
    let mut g = Graph::new();
    for q in quads {
        for i in 0..4 {
            for j in i + 1..4 {
                if !g.has_edge(VertexId(q[i]), VertexId(q[j])) {
                    g.add_edge(q[i], q[j]).expect("distinct vertices");
                }
            }
        }
    }
    if let Some((a, b)) = extra {
        g.add_edge(a, b).expect("new edge");
    }
    g
}

/// Which base graph `g` is, up to isomorphism.
pub fn classify_base(g: &Graph) -> Option<BaseKind> {
    BaseKind::ALL.into_iter().find(|k| {
        let base = k.graph();
        g.vertex_count() == base.vertex_count()
            && g.edge_count() == base.edge_count()
            && is_isomorphic(g, &base)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub component: u32,
    pub base: BaseKind,
    /// Label of each reference vertex `0..n`; absent means the reference labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<VertexId>>,
}

impl Leaf {
    pub fn graph(&self) -> Result<Graph> {
        let base = self.base.graph();
        let Some(labels) = &self.vertices else {
            return Ok(base);
        };
        let distinct: BTreeSet<&VertexId> = labels.iter().collect();
        if labels.len() != base.vertex_count() || distinct.len() != labels.len() {
            return Err(Error::InvalidTrace(format!(
                "leaf {} needs {} distinct vertex labels",
                self.component,
                base.vertex_count()
            )));
        }
        Ok(base.relabel(|v| labels[v.0 as usize]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    #[serde(flatten)]
    pub record: MoveRecord,
    pub left: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<u32>,
    pub out: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub leaves: Vec<Leaf>,
    pub steps: Vec<Step>,
}

impl ConstructionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Live components while a trace is built or replayed.
#[derive(Default)]
struct Components {
    trace: ConstructionTrace,
    graphs: BTreeMap<u32, Graph>,
    next: u32,
}

fn violation(reason: impl Into<String>, g: &Graph) -> Error {
    Error::TheoremViolation {
        reason: reason.into(),
        graph: Box::new(g.clone()),
    }
}

impl Components {
    fn take(&mut self, id: u32) -> Result<Graph> {
        self.graphs
            .remove(&id)
            .ok_or_else(|| Error::InvalidTrace(format!("component {id} does not exist")))
    }

    fn add_leaf(&mut self, leaf: Leaf) -> Result<u32> {
        let id = leaf.component;
        if self.graphs.contains_key(&id) {
            return Err(Error::InvalidTrace(format!("component {id} defined twice")));
        }
        self.graphs.insert(id, leaf.graph()?);
        self.trace.leaves.push(leaf);
        self.next = self.next.max(id + 1);
        Ok(id)
    }

    fn leaf(&mut self, base: BaseKind) -> Result<u32> {
        let component = self.next;
        self.add_leaf(Leaf {
            component,
            base,
            vertices: None,
        })
    }

    /// Applies `step`, checking that every produced graph is a circuit.
    fn apply(&mut self, step: Step) -> Result<u32> {
        let out = step.out;
        let produced = if step.record.is_binary() {
            let right = step.right.ok_or_else(|| {
                Error::InvalidTrace(format!("{} step needs a right operand", step.record.kind()))
            })?;
            if right == step.left {
                return Err(Error::InvalidTrace(
                    "sum operands must be different components".into(),
                ));
            }
            let l = self.graphs.get(&step.left);
            let r = self.graphs.get(&right);
            let (Some(l), Some(r)) = (l, r) else {
                return Err(Error::InvalidTrace(format!(
                    "components {} and {right} must both exist",
                    step.left
                )));
            };
            let g = step.record.apply_binary(l, r)?.graph;
            self.take(step.left)?;
            self.take(right)?;
            g
        } else {
            if step.right.is_some() {
                return Err(Error::InvalidTrace(format!(
                    "{} takes one operand",
                    step.record.kind()
                )));
            }
            match step.record {
                MoveRecord::Henneberg2 { .. } => {}
                _ => {
                    return Err(Error::InvalidTrace(format!(
                        "{} cannot appear in a construction trace",
                        step.record.kind()
                    )))
                }
            }
            let g = self.graphs.get(&step.left).ok_or_else(|| {
                Error::InvalidTrace(format!("component {} does not exist", step.left))
            })?;
            let g = step.record.apply_unary(g)?;
            self.take(step.left)?;
            g
        };
        if self.graphs.contains_key(&out) {
            return Err(Error::InvalidTrace(format!(
                "component {out} already exists"
            )));
        }
        if !is_circuit(&produced) {
            return Err(violation(
                format!("{} produced a non-circuit", step.record.kind()),
                &produced,
            ));
        }
        self.graphs.insert(out, produced);
        self.next = self.next.max(out + 1);
        self.trace.steps.push(step);
        Ok(out)
    }

    fn unary(&mut self, c: u32, record: MoveRecord) -> Result<u32> {
        self.apply(Step {
            record,
            left: c,
            right: None,
            out: c,
        })
    }

    fn binary(&mut self, l: u32, r: u32, record: MoveRecord) -> Result<u32> {
        let out = self.next;
        self.apply(Step {
            record,
            left: l,
            right: Some(r),
            out,
        })
    }

    fn checkpoint(&self) -> (usize, usize, u32) {
        (self.trace.leaves.len(), self.trace.steps.len(), self.next)
    }

    /// Drops everything created since `cp`. Components older than `cp` are never
    /// consumed by the work being undone.
    fn restore(&mut self, cp: (usize, usize, u32)) {
        self.trace.leaves.truncate(cp.0);
        self.trace.steps.truncate(cp.1);
        self.graphs.retain(|&id, _| id < cp.2);
        self.next = cp.2;
    }
}

/// Rebuilds the graph a trace describes. Every intermediate graph must be a circuit
/// and exactly one component must remain.
pub fn replay(trace: &ConstructionTrace) -> Result<Graph> {
    let mut c = Components::default();
    for leaf in &trace.leaves {
        c.add_leaf(leaf.clone())?;
    }
    for step in &trace.steps {
        c.apply(step.clone())?;
    }
    if c.graphs.len() != 1 {
        return Err(Error::InvalidTrace(format!(
            "trace ends with {} components, expected 1",
            c.graphs.len()
        )));
    }
    Ok(c.graphs.into_values().next().unwrap())
}

/// A trace whose replay is exactly `g` (same labels).
pub fn decompose(g: &Graph) -> Result<ConstructionTrace> {
    if !is_circuit(g) {
        return Err(Error::NotCircuit);
    }
    let mut d = Decomposer::default();
    d.run(g)?;
    Ok(d.trace)
}

#[derive(Default)]
struct Decomposer {
    trace: ConstructionTrace,
    next: u32,
}

fn is_hanging_piece(g: &Graph, cp: &CutPair, piece: &BTreeSet<VertexId>) -> bool {
    if piece.len() != 2 {
        return false;
    }
    let mut quad: Vec<VertexId> = piece.iter().copied().collect();
    quad.extend([cp.a, cp.b]);
    (0..4).all(|i| (i + 1..4).all(|j| g.has_edge(quad[i], quad[j])))
}

impl Decomposer {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next - 1
    }

    fn leaf(&mut self, g: &Graph, base: BaseKind) -> u32 {
        let reference = base.graph();
        let (_, ref_order) = canonical_labeling(&reference);
        let (_, order) = canonical_labeling(g);
        let mut labels = vec![VertexId(0); reference.vertex_count()];
        for (r, v) in ref_order.iter().zip(&order) {
            labels[r.0 as usize] = *v;
        }
        let component = self.fresh();
        self.trace.leaves.push(Leaf {
            component,
            base,
            vertices: Some(labels),
        });
        component
    }

    fn run(&mut self, g: &Graph) -> Result<u32> {
        if let Some(base) = classify_base(g) {
            return Ok(self.leaf(g, base));
        }
        if is_3_connected(g) {
            let cuts = nontrivial_3_edge_cutsets(g).map_err(|e| violation(e.to_string(), g))?;
            if cuts.is_empty() {
                if let Some((v, u, w)) = first_admissible(g) {
                    return self.inverse_h2(g, v, u, w);
                }
            } else {
                for cut in &cuts {
                    if let Ok(split) = three_separation(g, cut) {
                        return self.split(g, split, true);
                    }
                }
            }
        } else {
            let pairs = cutpairs(g).map_err(|e| violation(e.to_string(), g))?;
            if let Some(cp) = pairs.iter().find(|cp| !cp.ab_present) {
                let split =
                    one_separation(g, cp.a, cp.b).map_err(|e| violation(e.to_string(), g))?;
                if smaller(g, &split) {
                    return self.split(g, split, true);
                }
            }
            let non_hanging = pairs
                .iter()
                .find(|cp| cp.ab_present && !cp.pieces.iter().any(|p| is_hanging_piece(g, cp, p)));
            if let Some(cp) = non_hanging {
                let split =
                    two_separation(g, cp.a, cp.b).map_err(|e| violation(e.to_string(), g))?;
                if smaller(g, &split) {
                    return self.split(g, split, true);
                }
            }
        }
        self.exhaustive(g)
    }

    fn exhaustive(&mut self, g: &Graph) -> Result<u32> {
        if let Some((v, u, w)) = first_admissible(g) {
            return self.inverse_h2(g, v, u, w);
        }
        let mut candidates: Vec<Split> = Vec::new();
        if let Ok(pairs) = cutpairs(g) {
            for cp in pairs {
                let split = if cp.ab_present {
                    two_separation(g, cp.a, cp.b)
                } else {
                    one_separation(g, cp.a, cp.b)
                };
                candidates.extend(split.ok());
            }
        }
        if let Ok(cuts) = nontrivial_3_edge_cutsets(g) {
            candidates.extend(cuts.iter().filter_map(|c| three_separation(g, c).ok()));
        }
        for split in candidates {
            if smaller(g, &split) && is_circuit(&split.left) && is_circuit(&split.right) {
                return self.split(g, split, false);
            }
        }
        Err(violation(
            "no admissible node and no separation into smaller circuits",
            g,
        ))
    }

    fn inverse_h2(&mut self, g: &Graph, v: VertexId, u: VertexId, w: VertexId) -> Result<u32> {
        let z = g
            .neighbors(v)
            .find(|&x| x != u && x != w)
            .expect("node has three neighbours");
        let smaller = inverse_henneberg2(g, v, u, w)?;
        let c = self.run(&smaller)?;
        self.trace.steps.push(Step {
            record: MoveRecord::Henneberg2 { u, w, z, v },
            left: c,
            right: None,
            out: c,
        });
        Ok(c)
    }

    fn split(&mut self, g: &Graph, split: Split, check: bool) -> Result<u32> {
        if check {
            for side in [&split.left, &split.right] {
                if !is_circuit(side) {
                    return Err(violation(
                        format!("{} produced a non-circuit", split.separation.kind()),
                        g,
                    ));
                }
            }
        }
        let l = self.run(&split.left)?;
        let r = self.run(&split.right)?;
        let out = self.fresh();
        self.trace.steps.push(Step {
            record: split.sum,
            left: l,
            right: Some(r),
            out,
        });
        Ok(out)
    }
}

fn smaller(g: &Graph, split: &Split) -> bool {
    split.left.vertex_count() < g.vertex_count() && split.right.vertex_count() < g.vertex_count()
}

/// A random circuit on exactly `n` vertices with the trace that builds it. The same
/// `(n, seed)` always gives the same labeled graph.
pub fn random_circuit(n: usize, seed: u64) -> Result<(Graph, ConstructionTrace)> {
    if n < 5 {
        return Err(Error::pre(format!(
            "circuits need at least 5 vertices, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Components::default();
    let id = generate(n, &mut rng, &mut c)?;
    let g = c.graphs.remove(&id).expect("root component");
    Ok((g, c.trace))
}

#[derive(Clone, Copy)]
enum Choice {
    Leaf(BaseKind),
    H2,
    Sum1,
    Sum2,
    Sum3,
}

fn generate(n: usize, rng: &mut ChaCha8Rng, c: &mut Components) -> Result<u32> {
    let mut choices = Vec::new();
    if let Some(&k) = BaseKind::ALL.iter().find(|k| k.vertex_count() == n) {
        choices.push(Choice::Leaf(k));
    }
    if n >= 6 {
        choices.push(Choice::H2);
    }
    if n >= 7 {
        choices.push(Choice::Sum1);
    }
    if n >= 8 {
        choices.extend([Choice::Sum2, Choice::Sum3]);
    }
    for _ in 0..4 {
        let cp = c.checkpoint();
        let done = match *choices.choose(rng).expect("n >= 5 has a choice") {
            Choice::Leaf(k) => Some(c.leaf(k)?),
            Choice::H2 => Some(random_h2(n, rng, c)?),
            Choice::Sum1 => random_sum1(n, rng, c)?,
            Choice::Sum2 => random_sum2(n, rng, c)?,
            Choice::Sum3 => Some(random_sum3(n, rng, c)?),
        };
        if let Some(id) = done {
            return Ok(id);
        }
        c.restore(cp);
    }
    match n {
        5 => c.leaf(BaseKind::K5minusE),
        _ => random_h2(n, rng, c),
    }
}

fn random_h2(n: usize, rng: &mut ChaCha8Rng, c: &mut Components) -> Result<u32> {
    let id = generate(n - 1, rng, c)?;
    let g = &c.graphs[&id];
    let record = random_h2_record(g, &BTreeSet::new(), rng).expect("circuits have edges");
    c.unary(id, record)
}

/// A Henneberg 2 record on `g` that leaves the vertices in `avoid` untouched.
fn random_h2_record(
    g: &Graph,
    avoid: &BTreeSet<VertexId>,
    rng: &mut ChaCha8Rng,
) -> Option<MoveRecord> {
    let edges: Vec<_> = g
        .edges()
        .filter(|e| !avoid.contains(&e.u()) && !avoid.contains(&e.v()))
        .collect();
    let e = *edges.choose(rng)?;
    let (u, w) = if rng.gen_bool(0.5) {
        (e.u(), e.v())
    } else {
        (e.v(), e.u())
    };
    let zs: Vec<VertexId> = g
        .vertices()
        .filter(|&x| x != u && x != w && !avoid.contains(&x))
        .collect();
    let z = *zs.choose(rng)?;
    Some(MoveRecord::Henneberg2 {
        u,
        w,
        z,
        v: g.fresh_vertex(),
    })
}

/// A circuit on `n >= 6` vertices with a hanging K4: K4⊔K4 grown by Henneberg 2
/// moves that stay clear of one of its hanging sides.
fn generate_hanging(n: usize, rng: &mut ChaCha8Rng, c: &mut Components) -> Result<u32> {
    if rng.gen_bool(0.5) {
        let cp = c.checkpoint();
        let id = generate(n, rng, c)?;
        if !hanging_k4s(&c.graphs[&id]).is_empty() {
            return Ok(id);
        }
        c.restore(cp);
    }
    let id = c.leaf(BaseKind::K4edgeK4)?;
    let g = &c.graphs[&id];
    let keep = hanging_k4s(g)[rng.gen_range(0..2)];
    let avoid = BTreeSet::from([keep.c, keep.d]);
    for _ in 6..n {
        let g = &c.graphs[&id];
        // Splitting ab itself would break the hanging K4 too.
        let record = loop {
            let r = random_h2_record(g, &avoid, rng).expect("edges outside the kept side");
            if let MoveRecord::Henneberg2 { u, w, .. } = r {
                if (u, w) != (keep.a, keep.b) && (u, w) != (keep.b, keep.a) {
                    break r;
                }
            }
        };
        c.unary(id, record)?;
    }
    Ok(id)
}

fn random_hanging(g: &Graph, rng: &mut ChaCha8Rng) -> Option<crate::structure::HangingK4> {
    let mut h = *hanging_k4s(g).choose(rng)?;
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut h.a, &mut h.b);
    }
    Some(h)
}

fn random_sum1(n: usize, rng: &mut ChaCha8Rng, c: &mut Components) -> Result<Option<u32>> {
    // n = n1 + n2 - 4 with n1 >= 5 and n2 >= 6.
    let n2 = rng.gen_range(6..=n - 1);
    let n1 = n + 4 - n2;
    let l = generate(n1, rng, c)?;
    let r = generate_hanging(n2, rng, c)?;
    let Some(hanging) = random_hanging(&c.graphs[&r], rng) else {
        return Ok(None);
    };
    let g1 = &c.graphs[&l];
    let e = *g1.edges().collect::<Vec<_>>().choose(rng).expect("edges");
    let (a, b) = if rng.gen_bool(0.5) {
        (e.u(), e.v())
    } else {
        (e.v(), e.u())
    };
    c.binary(l, r, MoveRecord::Sum1 { a, b, hanging }).map(Some)
}

fn random_sum2(n: usize, rng: &mut ChaCha8Rng, c: &mut Components) -> Result<Option<u32>> {
    // n = n1 + n2 - 6; both operands at least 7 so neither sum is a copy of the other.
    let n1 = rng.gen_range(7..=n - 1);
    let n2 = n + 6 - n1;
    let l = generate_hanging(n1, rng, c)?;
    let r = generate_hanging(n2, rng, c)?;
    let (Some(left), Some(right)) = (
        random_hanging(&c.graphs[&l], rng),
        random_hanging(&c.graphs[&r], rng),
    ) else {
        return Ok(None);
    };
    c.binary(l, r, MoveRecord::Sum2 { left, right }).map(Some)
}

fn random_node(g: &Graph, rng: &mut ChaCha8Rng) -> VertexId {
    let nodes: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) == 3).collect();
    *nodes
        .choose(rng)
        .expect("a circuit has a vertex of degree 3")
}

fn random_sum3(n: usize, rng: &mut ChaCha8Rng, c: &mut Components) -> Result<u32> {
    // n = n1 + n2 - 2 with both at least 5.
    let n1 = rng.gen_range(5..=n - 3);
    let n2 = n + 2 - n1;
    let l = generate(n1, rng, c)?;
    let r = generate(n2, rng, c)?;
    let v1 = random_node(&c.graphs[&l], rng);
    let v2 = random_node(&c.graphs[&r], rng);
    let n1s: Vec<VertexId> = c.graphs[&l].neighbors(v1).collect();
    let mut n2s: Vec<VertexId> = c.graphs[&r].neighbors(v2).collect();
    n2s.shuffle(rng);
    let matching = [0, 1, 2].map(|i| [n1s[i], n2s[i]]);
    c.binary(l, r, MoveRecord::Sum3 { v1, v2, matching })
}

/// All circuits on exactly `n` vertices up to isomorphism, sorted by canonical form.
///
/// Every circuit minus an edge is (2,2)-tight, so the search grows (2,2)-sparse
/// graphs one edge at a time to `2n - 2` edges and tries each missing edge on top.
/// Each hit is also checked by the subset-scan oracle.
pub fn enumerate_circuits(n: usize) -> Result<Vec<CanonicalForm>> {
    if n > ENUMERATION_CAP {
        return Err(Error::SizeCap {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let target = 2 * n - 2;
    let levels = augment_levels(n, target, |g| is_sparse(g, 2, 2).unwrap_or(false));
    let Some(tight) = levels.get(target) else {
        return Ok(Vec::new());
    };
    let found: Vec<Result<Option<CanonicalForm>>> = tight
        .par_iter()
        .flat_map_iter(|cf| {
            let g = cf.to_graph();
            let mut out = Vec::new();
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    if g.has_edge(VertexId(a), VertexId(b)) {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(a, b).expect("missing edge");
                    let pebble = is_circuit(&h);
                    out.push(match brute_force_is_circuit(&h) {
                        Ok(scan) if scan == pebble => Ok(pebble.then(|| canonical_labeling(&h).0)),
                        Ok(_) => Err(violation("pebble game and subset scan disagree", &h)),
                        Err(e) => Err(e),
                    });
                }
            }
            out
        })
        .collect();
    let mut forms = BTreeSet::new();
    for r in found {
        if let Some(cf) = r? {
            forms.insert(cf);
        }
    }
    Ok(forms.into_iter().collect())
}

/// Independent enumeration: every labeled edge set of size `2n - 1` on `0..n`
/// whose proper vertex subsets all satisfy the count, found by a pruned subset
/// search and deduplicated by canonical form.
pub fn enumerate_circuits_by_scan(n: usize) -> Result<Vec<CanonicalForm>> {
    if n > SCAN_CAP {
        return Err(Error::SizeCap { n, cap: SCAN_CAP });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut scan = Scan {
        n,
        full: (1usize << n) - 1,
        pairs,
        induced: vec![0; 1 << n],
        chosen: Vec::new(),
        forms: BTreeSet::new(),
    };
    scan.dfs(0)?;
    Ok(scan.forms.into_iter().collect())
}

struct Scan {
    n: usize,
    full: usize,
    pairs: Vec<(usize, usize)>,
    induced: Vec<u32>,
    chosen: Vec<(usize, usize)>,
    forms: BTreeSet<CanonicalForm>,
}

impl Scan {
    fn supersets(&self, a: usize, b: usize) -> impl Iterator<Item = usize> {
        let need = (1 << a) | (1 << b);
        let full = self.full;
        (0..=full).filter(move |m| m & need == need)
    }

    fn dfs(&mut self, idx: usize) -> Result<()> {
        let target = 2 * self.n - 1;
        if self.chosen.len() == target {
            let g = Graph::from_parts(
                0..self.n as u32,
                self.chosen.iter().map(|&(a, b)| (a as u32, b as u32)),
            )?;
            if g.min_degree() > 0 && brute_force_is_circuit(&g)? {
                self.forms.insert(canonical_labeling(&g).0);
            }
            return Ok(());
        }
        if self.pairs.len() - idx < target - self.chosen.len() {
            return Ok(());
        }
        let (a, b) = self.pairs[idx];
        let masks: Vec<usize> = self.supersets(a, b).collect();
        let mut ok = true;
        for &m in &masks {
            self.induced[m] += 1;
            if m != self.full && self.induced[m] as usize > 2 * m.count_ones() as usize - 2 {
                ok = false;
            }
        }
        if ok {
            self.chosen.push((a, b));
            self.dfs(idx + 1)?;
            self.chosen.pop();
        }
        for &m in &masks {
            self.induced[m] -= 1;
        }
        self.dfs(idx + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::three_sum;

    #[test]
    fn base_graphs_are_circuits() {
        for k in BaseKind::ALL {
            let g = k.graph();
            assert_eq!(g.vertex_count(), k.vertex_count());
            assert_eq!(g.edge_count(), 2 * k.vertex_count() - 1);
            assert!(is_circuit(&g));
            assert_eq!(classify_base(&g), Some(k));
        }
    }

    #[test]
    fn classify_relabeled() {
        let g = BaseKind::K5minusE
            .graph()
            .relabel(|v| VertexId([40, 3, 17, 8, 21][v.0 as usize]));
        assert_eq!(classify_base(&g), Some(BaseKind::K5minusE));
        let (big, _) = random_circuit(8, 1).unwrap();
        assert_eq!(classify_base(&big), None);
    }

    #[test]
    fn k4_vertex_k4_placements_form_one_class() {
        let mut seen = Vec::new();
        for x in [1u32, 2, 3] {
            for y in [4u32, 5, 6] {
                let g = k4_union(&[[0, 1, 2, 3], [0, 4, 5, 6]], Some((x, y)));
                assert_eq!(classify_base(&g), Some(BaseKind::K4vertexK4));
                seen.push(canonical_labeling(&g).0);
            }
        }
        seen.dedup();
        assert_eq!(seen.len(), 1);
    }

    #[test]
    fn leaf_only_trace() {
        let t = ConstructionTrace {
            leaves: vec![Leaf {
                component: 0,
                base: BaseKind::K5minusE,
                vertices: None,
            }],
            steps: vec![],
        };
        assert_eq!(replay(&t).unwrap(), BaseKind::K5minusE.graph());
        let d = decompose(&BaseKind::K5minusE.graph()).unwrap();
        assert_eq!(d.leaves.len(), 1);
        assert!(d.steps.is_empty());
    }

    #[test]
    fn three_sum_decomposes_once() {
        let k = BaseKind::K5minusE.graph();
        let m = [VertexId(0), VertexId(1), VertexId(2)];
        let g = three_sum(&k, VertexId(4), &k, VertexId(4), &m.map(|x| [x, x]))
            .unwrap()
            .graph;
        let t = decompose(&g).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].record.kind(), "Sum3");
        assert!(t.leaves.iter().all(|l| l.base == BaseKind::K5minusE));
        assert_eq!(replay(&t).unwrap(), g);
    }

    #[test]
    fn trace_json_round_trip() {
        let (g, t) = random_circuit(12, 7).unwrap();
        let s = t.to_json();
        assert!(s.contains(r#""kind":"#) && s.contains(r#""params":"#));
        let back = ConstructionTrace::from_json(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(replay(&back).unwrap(), g);
    }

    #[test]
    fn replay_rejects_bad_sum() {
        let t = ConstructionTrace {
            leaves: vec![
                Leaf {
                    component: 0,
                    base: BaseKind::K5minusE,
                    vertices: None,
                },
                Leaf {
                    component: 1,
                    base: BaseKind::K4edgeK4,
                    vertices: None,
                },
            ],
            steps: vec![Step {
                record: MoveRecord::Sum1 {
                    a: VertexId(3),
                    b: VertexId(4),
                    hanging: hanging_k4s(&BaseKind::K4edgeK4.graph())[0],
                },
                left: 0,
                right: Some(1),
                out: 2,
            }],
        };
        assert!(matches!(replay(&t), Err(Error::MissingEdge(_))));
    }

    #[test]
    fn random_circuits_are_reproducible() {
        for n in [5, 6, 7, 9, 14] {
            let (a, ta) = random_circuit(n, 3).unwrap();
            let (b, _) = random_circuit(n, 3).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.vertex_count(), n);
            assert!(is_circuit(&a));
            assert_eq!(replay(&ta).unwrap(), a);
        }
        assert!(is_isomorphic(
            &random_circuit(5, 99).unwrap().0,
            &BaseKind::K5minusE.graph()
        ));
        assert!(random_circuit(4, 0).is_err());
    }

    #[test]
    fn decompose_random_circuits() {
        for seed in 0..20 {
            let (g, _) = random_circuit(16, seed).unwrap();
            let t = decompose(&g).unwrap();
            assert_eq!(replay(&t).unwrap(), g, "seed {seed}");
        }
    }

    #[test]
    fn small_enumerations() {
        assert!(enumerate_circuits(4).unwrap().is_empty());
        let five = enumerate_circuits(5).unwrap();
        assert_eq!(five.len(), 1);
        assert!(is_isomorphic(
            &five[0].to_graph(),
            &BaseKind::K5minusE.graph()
        ));
        assert_eq!(
            enumerate_circuits(6).unwrap(),
            enumerate_circuits_by_scan(6).unwrap()
        );
        assert!(matches!(enumerate_circuits(9), Err(Error::SizeCap { .. })));
    }
}

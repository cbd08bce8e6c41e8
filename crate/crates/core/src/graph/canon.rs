//! Canonical labeling by partition refinement plus search inside the cells.
//!
//! Vertices are split by degree, then repeatedly by the number of neighbors in every
//! current cell until the ordered partition is equitable. If cells remain, each vertex
//! of the first non-singleton cell is individualized in turn and the search recurses.
//! Every leaf is a discrete ordering; the lexicographically smallest adjacency
//! certificate wins. Vertices of a cell with identical neighborhoods (apart from each
//! other) span the same subtree, so only one of them is tried.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphView, VertexId};
use crate::error::{Error, Result};

pub const DEFAULT_CANON_CAP: usize = 16;

/// A graph relabeled onto `0..n` so that isomorphic inputs give equal values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> Graph {
        Graph::from_parts(0..self.n as u32, self.edges.iter().copied())
            .expect("canonical form is simple")
    }
}

struct Searcher<'a> {
    adj: &'a [Vec<usize>],
    rows: &'a [Vec<u64>],
    words: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
}

impl Searcher<'_> {
    fn twins(&self, x: usize, y: usize) -> bool {
        let (rx, ry) = (&self.rows[x], &self.rows[y]);
        (0..self.words).all(|w| {
            let mut a = rx[w];
            let mut b = ry[w];
            if y / 64 == w {
                a &= !(1u64 << (y % 64));
            }
            if x / 64 == w {
                b &= !(1u64 << (x % 64));
            }
            a == b
        })
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let n = order.len();
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut cert = vec![0u64; n * self.words];
        for (i, &v) in order.iter().enumerate() {
            let row = &mut cert[i * self.words..(i + 1) * self.words];
            for &u in &self.adj[v] {
                let p = pos[u];
                row[p / 64] |= 1u64 << (p % 64);
            }
        }
        match &self.best {
            Some((b, _)) if *b <= cert => {}
            _ => self.best = Some((cert, order)),
        }
    }

    fn search(&mut self, mut cells: Vec<Vec<usize>>) {
        refine(self.adj, &mut cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(cells.into_iter().flatten().collect());
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if tried.iter().any(|&x| self.twins(x, v)) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend(cells[..target].iter().cloned());
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&x| x != v).collect());
            next.extend(cells[target + 1..].iter().cloned());
            self.search(next);
        }
    }
}

/// Splits cells until every vertex in a cell sees the same number of neighbors in
/// every cell. Sub-cells are ordered by that count vector, which keeps the whole
/// procedure independent of the input labels.
fn refine(adj: &[Vec<usize>], cells: &mut Vec<Vec<usize>>) {
    let n = adj.len();
    let mut cell_of = vec![0usize; n];
    loop {
        for (ci, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = ci;
            }
        }
        let k = cells.len();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(k);
        for c in cells.iter() {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<u32>, usize)> = c
                .iter()
                .map(|&v| {
                    let mut s = vec![0u32; k];
                    for &u in &adj[v] {
                        s[cell_of[u]] += 1;
                    }
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    next.push(sigs[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == k {
            return;
        }
        *cells = next;
    }
}

fn labeling(g: &Graph) -> (CanonicalForm, Vec<VertexId>) {
    let d = g.dense();
    let n = d.len();
    let adj: Vec<Vec<usize>> = d
        .adj
        .iter()
        .map(|r| r.iter().map(|&(u, _)| u).collect())
        .collect();
    let words = n.div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = adj
        .iter()
        .map(|r| {
            let mut row = vec![0u64; words];
            for &u in r {
                row[u / 64] |= 1u64 << (u % 64);
            }
            row
        })
        .collect();
    let mut s = Searcher {
        adj: &adj,
        rows: &rows,
        words,
        best: None,
    };
    if n > 0 {
        s.search(vec![(0..n).collect()]);
    }
    let order = s.best.map(|(_, o)| o).unwrap_or_default();
    let mut pos = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i as u32;
    }
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .map(|e| {
            let (a, b) = (
                pos[d.index_of(e.u()).unwrap()],
                pos[d.index_of(e.v()).unwrap()],
            );
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let ids = order.iter().map(|&i| d.ids[i]).collect();
    (CanonicalForm { n, edges }, ids)
}

/// Canonical form with the default vertex cap.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    canonical_form_with_cap(g, DEFAULT_CANON_CAP)
}

pub fn canonical_form_with_cap(g: &Graph, cap: usize) -> Result<CanonicalForm> {
    if g.vertex_count() > cap {
        return Err(Error::SizeCap {
            n: g.vertex_count(),
            cap,
        });
    }
    Ok(labeling(g).0)
}

/// Canonical form together with the vertex placed at each canonical position.
pub fn canonical_labeling(g: &Graph) -> (CanonicalForm, Vec<VertexId>) {
    labeling(g)
}

/// Isomorphism test via canonical forms. Not subject to the canonical-form cap.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count()
        || a.edge_count() != b.edge_count()
        || a.degree_sequence() != b.degree_sequence()
    {
        return false;
    }
    a == b || labeling(a).0 == labeling(b).0
}

/// One representative per isomorphism class among graphs on `n` vertices whose
/// every edge-prefix is accepted by `keep`. Levels are indexed by edge count.
pub(crate) fn augment_levels(
    n: usize,
    max_edges: usize,
    keep: impl Fn(&Graph) -> bool + Sync,
) -> Vec<Vec<CanonicalForm>> {
    let empty = CanonicalForm {
        n,
        edges: Vec::new(),
    };
    let mut levels = vec![vec![empty]];
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
        .collect();
    for _ in 0..max_edges.min(pairs.len()) {
        let current = levels.last().unwrap();
        let next: BTreeSet<CanonicalForm> = current
            .par_iter()
            .flat_map_iter(|cf| {
                let g = cf.to_graph();
                let mut out = Vec::new();
                for &(a, b) in &pairs {
                    if g.has_edge(VertexId(a), VertexId(b)) {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(a, b).unwrap();
                    if keep(&h) {
                        out.push(labeling(&h).0);
                    }
                }
                out
            })
            .collect();
        if next.is_empty() {
            break;
        }
        levels.push(next.into_iter().collect());
    }
    levels
}

/// All graphs on vertex set `0..n` up to isomorphism, ordered by edge count and
/// then by canonical form.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    augment_levels(n, usize::MAX, |_| true)
        .into_iter()
        .flatten()
        .map(|cf| cf.to_graph())
        .collect()
}

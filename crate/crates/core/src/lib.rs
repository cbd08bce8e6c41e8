//! Circuits of the simple (2,2)-sparsity matroid.
//!
//! A circuit here is a simple graph with `|E| = 2|V| - 1` all of whose proper
//! subgraphs satisfy `|E'| <= 2|V'| - 2`. Every such graph is built from K5∖e, two
//! K4s sharing an edge, and two K4s sharing a vertex plus an edge, by Henneberg 2
//! moves and 1-, 2- and 3-sums. This crate recognizes circuits with the pebble game,
//! decomposes them into such a construction and replays it, generates and enumerates
//! small circuits, analyses matroid connectivity, and checks the count matroid
//! against exact rigidity matrices of frameworks on a cylinder.
//!
//! ```
//! use sparsecirc::{construction, is_circuit, Graph, VertexId};
//!
//! let mut g = Graph::complete(&[0u32, 1, 2, 3, 4]);
//! g.remove_edge(VertexId(3), VertexId(4)).unwrap();
//! assert!(is_circuit(&g));
//!
//! let (h, _) = construction::random_circuit(12, 7).unwrap();
//! let trace = construction::decompose(&h).unwrap();
//! assert_eq!(construction::replay(&trace).unwrap(), h);
//! ```

pub mod construction;
pub mod cylinder;
pub mod error;
pub mod graph;
pub mod matroid;
pub mod moves;
pub mod sparsity;
pub mod structure;

pub use construction::{BaseKind, ConstructionTrace};
pub use error::{Error, Result};
pub use graph::{CanonicalForm, Edge, Graph, GraphInput, GraphView, MultiGraph, VertexId};
pub use moves::MoveRecord;
pub use sparsity::{brute_force_is_circuit, is_circuit, is_multicircuit, pebble_rank};

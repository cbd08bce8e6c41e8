use crate::graph::{Edge, Graph, VertexId};

/// Errors raised by graph construction, the move algebra, and the analyses built on them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge {0} is not present")]
    MissingEdge(Edge),
    #[error("edge {0} is already present")]
    EdgePresent(Edge),
    #[error("vertex label {0} is already in use")]
    LabelClash(VertexId),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotDegreeThree { vertex: VertexId, degree: usize },
    #[error("graph has {n} vertices, cap is {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("sparsity parameters k={k}, l={l} need k > 0 and l < 2k")]
    InvalidParameters { k: u32, l: u32 },
    #[error("graph is not (2,2)-sparse")]
    NotSparse,
    #[error("graph is not a circuit")]
    NotCircuit,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge connectivity is {0}, expected at least 3")]
    LowEdgeConnectivity(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("theorem violation: {reason}")]
    TheoremViolation { reason: String, graph: Box<Graph> },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, MuxError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MuxError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),
    #[error("vertex {vertex} out of range for a multiplex on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("duplicate edge ({0}, {1}) in layer {2}")]
    DuplicateEdge(u32, u32, u8),
    #[error("edge ({0}, {1}) must be written with u < v")]
    UnorderedEdge(u32, u32),
    #[error("{what} exceeds the cap: {actual} > {cap}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
    #[error("multiplex has no edges")]
    NoEdges,
    #[error(
        "infeasible probabilities (p1={p1}, p2={p2}, p12={p12}): need (p1,p2,p12) in (0,1)^3 \
         with max(0, p1+p2-1) <= p12 <= min(p1, p2)"
    )]
    InfeasibleProbabilities { p1: f64, p2: f64, p12: f64 },
    #[error("theta {0} is outside the domain theta1, theta2 > 0, theta12 >= max(theta1, theta2)")]
    ThetaOutsideDomain(String),
    #[error("theta {0} is not on the threshold surface (delta = {1})")]
    NotOnThresholdSurface(String, String),
    #[error("n = {n} is smaller than the motif vertex count {v}")]
    TooFewVertices { n: u64, v: usize },
    #[error("submultiplex is not contained in the host multiplex")]
    NotASubmultiplex,
    #[error("core copy is not present in the graph")]
    CoreNotPresent,
    #[error("core copy is not a copy of the core pattern")]
    CoreMismatch,
    #[error("core postcondition violated: {0}")]
    CorePostcondition(String),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for MuxError {
    fn from(e: std::io::Error) -> Self {
        MuxError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for MuxError {
    fn from(e: serde_json::Error) -> Self {
        MuxError::Parse(e.to_string())
    }
}

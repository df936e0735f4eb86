use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed token: {0}")]
    MalformedToken(String),
    #[error("arc {arc} occurs {count} times (expected exactly 2)")]
    ArcCountViolation { arc: usize, count: usize },
    #[error("inconsistent orientation on component containing arc {0}")]
    InconsistentOrientation(usize),
    #[error("empty diagram")]
    EmptyDiagram,
    #[error("state labels {got} crossings, diagram has {expected}")]
    IncompleteState { expected: usize, got: usize },
    #[error("{what} exceeds cap: {value} > {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("enhanced states belong to different diagrams")]
    DifferentDiagram,
    #[error("boundary composite d{0}∘d{1} is nonzero")]
    NotAComplex(i64, i64),
    #[error("chords lie on different circles or are not admissible")]
    DifferentCircles,
    #[error("graph has a loop at vertex {0}")]
    LoopedGraph(usize),
    #[error("wedge with the empty complex S^-1")]
    WedgeWithEmptyComplex,
    #[error("excluded case {0}: min(q,r) = p+1 with q != r")]
    ExcludedCase(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graphs have different orders ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("p + 2q + k = {p} + 2*{q} + {k} does not match the vertex count {n}")]
    BudgetMismatch { p: usize, q: usize, k: usize, n: usize },
    #[error("{0}")]
    Precondition(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("pairs {0:?} and {1:?} are not related")]
    NotRelated((usize, usize), (usize, usize)),
    #[error("pair ({0}, {0}) has equal coordinates")]
    Degenerate(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("{0:?} is not an S-matching edge")]
    NotMatchingEdge((usize, usize)),
    #[error("graph minus the modulator has a vertex of degree {0}")]
    DegreeTooLarge(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("modulator vertex {0} out of range")]
    BadModulator(usize),
}

/// Why a reduction or lifting step could not proceed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("reduction rules need a connected graph")]
    NotConnected,
    #[error("reduction rules need at least three vertices")]
    TooSmall,
    #[error("reduction rules need k >= 1")]
    ZeroModulator,
    #[error("no representative edge found while lifting step {step}")]
    NoRepresentative { step: usize },
    #[error("lifted witness fails verification")]
    LiftVerification,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search budget exhausted ({reason}) after {candidates} candidates")]
    BudgetExhausted { reason: String, candidates: u64 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("modulator size {0} exceeds the supported maximum of {max}", max = crate::search::MAX_MODULATOR)]
    ModulatorTooLarge(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

impl SolveError {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, SolveError::BudgetExhausted { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {edges} edges, above the oracle cap of {cap}")]
    EdgeCapExceeded { edges: usize, cap: usize },
    #[error("graph is not bipartite with the declared sides")]
    NotBipartite,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("infeasible shape: {0}")]
    InfeasibleShape(String),
    #[error("no connected root found after {0} attempts")]
    RetriesExhausted(usize),
    #[error("shape file: {0}")]
    ShapeSyntax(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

use thiserror::Error;

use crate::planar::{AngleId, EdgeId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    // planar maps
    #[error("malformed dart data: {0}")]
    MalformedInvolution(String),
    #[error("edge {0} is a loop (both darts at one vertex)")]
    LoopEdge(EdgeId),
    #[error("vertex {vertex} has degree {degree}, at least 2 is required")]
    DegreeTooSmall { vertex: VertexId, degree: usize },
    #[error("component with {vertices} vertices, {edges} edges, {faces} faces is not a sphere embedding")]
    NotSpherical {
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    #[error("map is not connected")]
    Disconnected,

    // weights and angular functions
    #[error("weight is missing a value: {0}")]
    MissingValue(String),
    #[error("weight is invalid: vertex total {vertex_total}, face total {face_total}")]
    InvalidWeight { vertex_total: i64, face_total: i64 },
    #[error("angular function has wrong length or is not compatible with the weight")]
    NotCompatible,
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("function is not movable along edge {0}")]
    NotMovable(EdgeId),
    #[error("arrow sequence is not a directed cycle")]
    NotACycle,
    #[error("no compatible angular function exists for this weight")]
    EmptyStateSet,
    #[error("nilpotency degree is {0}, expected 0")]
    NotNilpotencyZero(i64),

    // BMS states
    #[error("BMS relation violated at angle {0}")]
    RelationViolated(AngleId),
    #[error("dimension vector is non-zero on invisible edge {0}")]
    InvisibleDimNonZero(EdgeId),
    #[error("dimension vector is negative on edge {0}")]
    NegativeDimension(EdgeId),

    // link diagrams
    #[error("vertex {0} does not have degree 4")]
    NotFourRegular(VertexId),
    #[error("the two faces adjacent to the marked edge coincide")]
    MarkedFacesNotDistinct,
    #[error("Kauffman move along edge {0} is not applicable")]
    NotApplicable(EdgeId),
    #[error("diagram is not prime: edges {0} and {1} form a separating cut")]
    NotPrime(EdgeId, EdgeId),
    #[error("lattice certification failed: {0}")]
    CertificationFailed(String),

    // posets
    #[error("cover relation contains a directed cycle")]
    CyclicCovers,

    // representations
    #[error("weight is not characteristic (values outside {{0,1}})")]
    NotCharacteristicWeight,
    #[error("candidate space of {0} prefix families exceeds the configured bound")]
    CandidateSpaceTooLarge(u128),
    #[error("no cycle through vertex {0} acts as a full nilpotent Jordan block")]
    JordanPremiseFailed(EdgeId),
    #[error("weight has empty support")]
    EmptySupport,
    #[error("matrix shapes do not compose: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

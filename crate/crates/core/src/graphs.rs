//! Explicit graphs: parsing, named families, distance-regularity,
//! idempotents, homomorphism matrices, φ-partitions and homomorphism search.

mod distance;
mod graph;
mod hom;
mod phi;
mod spectral;

use thiserror::Error;

pub use distance::{
    distances, far_components, image_diameter, induced_subgraph, recognize_drg, DistanceData, FarComponents,
    UNREACHABLE,
};
pub use graph::{build_named, Graph, GraphFormat, NamedGraph};
pub use hom::{is_homomorphism, search_hom, search_retraction, HomOutcome, SearchOptions, VertexMap};
pub use phi::{phi_partition, PhiAnalyzer, PhiPartition};
pub use spectral::{
    hom_matrix, numeric_idempotents, verify_identities, EigenCheck, HomSetup, IdentityReport, NumericSpectral,
    EIGEN_GROUPING_TOLERANCE, IDENTITY_TOLERANCE, NEIGHBOUR_SUM_SAMPLES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed graph6: {0}")]
    Graph6(String),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("repeated edge {0} {1}")]
    ParallelEdge(usize, usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not distance-regular")]
    NotDistanceRegular,
    #[error("source has array {expected} but target has {found}")]
    ArrayMismatch { expected: String, found: String },
    #[error("map is not a homomorphism")]
    NotHomomorphism,
    #[error("map has {found} entries, expected {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("pair ({u}, {v}) is not geodetic: distance {distance}, image distance {image_distance}")]
    NotGeodetic { u: usize, v: usize, distance: usize, image_distance: usize },
    #[error("spectral data unavailable: {0}")]
    Spectral(String),
}

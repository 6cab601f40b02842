use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// The variants are grouped by what the CLI reports: malformed input,
/// degenerate developments and invalid flip sets each map to their own exit
/// status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("0/0 is not an extended rational")]
    Undefined,
    #[error("points must be distinct: {0}")]
    EqualPoints(String),
    #[error("{0} and {1} are not Farey neighbors")]
    NotNeighbors(String, String),
    #[error("edge {0} is not an edge of the Farey triangulation")]
    NotFareyEdge(String),
    #[error("triple has a repeated point")]
    RepeatedPoints,
    #[error("Mobius map is degenerate (ad - bc = 0)")]
    DegenerateMobius,
    #[error("{0} is not a quadrilateral with the given diagonal")]
    NotQuadrilateral(String),
    #[error("expected a positive value, got {0}")]
    NonPositive(String),
    #[error("horoball is tangent at an endpoint of {0}: infinite penetration")]
    InfinitePenetration(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("{0} lies outside the domain")]
    OutsideDomain(String),
    #[error("missing {0}")]
    Missing(String),
    #[error("degenerate development: {0}")]
    DegenerateDevelopment(String),
    #[error("exact arithmetic unavailable: {0}")]
    ExactUnavailable(String),
    #[error("edge {0} is on the window boundary")]
    BoundaryEdge(String),
    #[error("invalid flip set: {0}")]
    InvalidFlipSet(String),
    #[error("edges cross: {0} and {1}")]
    Crossing(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

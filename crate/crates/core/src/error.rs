use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variant names double as the stable error labels written into traces and
/// printed by the command line front-end (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration is empty")]
    EmptyConfiguration,
    #[error("reference point coincides with the pole")]
    DegenerateReference,
    #[error("radii {low} and {high} chain through near-equal values spanning more than eps")]
    AmbiguousLayering { low: f64, high: f64 },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("robots {0} and {1} occupy the same point")]
    DuplicatePoints(usize, usize),
    #[error("no agreed order exists: {0}")]
    NotOrderable(String),
    #[error("queried robot sits at the centroid")]
    CentroidQuery,
    #[error("configuration has a mirror axis")]
    MirrorSymmetric,
    #[error("vote tally {0:?} is rotationally periodic")]
    VoteTie(Vec<usize>),
    #[error("leader {0} sits at the center")]
    InvalidLeader(usize),
    #[error("hop {hop} out of range for a ring of {ring}")]
    InvalidHop { hop: usize, ring: usize },
    #[error("value {0} does not decode to a hop count")]
    DecodeFailure(f64),
    #[error("caller is not the central robot")]
    NotCentral,
    #[error("caller cannot act as leader: {0}")]
    InvalidCaller(String),
    #[error("intermediate configuration matches no movement case")]
    ReconstructFailure,
    #[error("robots {0} and {1} would land on the same point")]
    CollisionDetected(usize, usize),
    #[error("configurations are not permutations of each other: {0}")]
    NotAPermutation(String),
    #[error("robot {robot}: {source}")]
    Robot { robot: usize, source: Box<Error> },
}

impl Error {
    /// Stable label of the innermost error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyConfiguration => "EmptyConfiguration",
            Error::DegenerateReference => "DegenerateReference",
            Error::AmbiguousLayering { .. } => "AmbiguousLayering",
            Error::InvalidFrame(_) => "InvalidFrame",
            Error::DuplicatePoints(..) => "DuplicatePoints",
            Error::NotOrderable(_) => "NotOrderable",
            Error::CentroidQuery => "CentroidQuery",
            Error::MirrorSymmetric => "MirrorSymmetric",
            Error::VoteTie(_) => "VoteTie",
            Error::InvalidLeader(_) => "InvalidLeader",
            Error::InvalidHop { .. } => "InvalidHop",
            Error::DecodeFailure(_) => "DecodeFailure",
            Error::NotCentral => "NotCentral",
            Error::InvalidCaller(_) => "InvalidCaller",
            Error::ReconstructFailure => "ReconstructFailure",
            Error::CollisionDetected(..) => "CollisionDetected",
            Error::NotAPermutation(_) => "NotAPermutation",
            Error::Robot { source, .. } => source.name(),
        }
    }

    /// Strips any robot attribution.
    pub fn root(&self) -> &Error {
        match self {
            Error::Robot { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("elements belong to different group descriptors")]
    DescriptorMismatch,
    #[error("invalid group element: {0}")]
    InvalidElement(String),
    #[error("eigenvalue within {distance:.3e} of -1 in factor {factor}; logarithm is on the branch cut")]
    BranchCut { factor: usize, distance: f64 },

    #[error("fingerprint has rank {rank} > 2 and is not realized by the extraspecial pair")]
    UnrealizableFingerprint { rank: usize },
    #[error("zero fingerprint requested from the exotic sampler")]
    ZeroFingerprint,
    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("invalid argument: {0}")]
    BadArguments(String),

    #[error("tuple is not simultaneously diagonalizable: residual {residual:.3e} at coordinates ({i}, {j})")]
    NotSimultaneouslyDiagonalizable { residual: f64, i: usize, j: usize },
    #[error("ambiguous eigenvalue cluster of width {width:.3e} in factor {factor}")]
    IllConditioned { factor: usize, width: f64 },
    #[error("torus tuple is not regular: Weyl stabilizer has order {order}")]
    NotRegular { order: u128 },

    #[error("commutator of coordinates ({i}, {j}) is {distance:.3e} away from the central subgroup")]
    NotAlmostCommuting { i: usize, j: usize, distance: f64 },
    #[error("commutator of coordinates ({i}, {j}) is equidistant from two central elements")]
    AmbiguousMatch { i: usize, j: usize },
    #[error("central subgroup is not cyclic on the semisimple part")]
    NotCyclic,

    #[error("subgroup is not central")]
    NotCentral,
    #[error("enumeration of {size} tuples exceeds the limit {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),

    #[error("loop has nontrivial winding {winding:?} / central holonomy {holonomy}")]
    NontrivialWinding { winding: Vec<i64>, holonomy: usize },
    #[error("contraction stalled after {sweeps} sweeps at diameter {diameter:.3e}")]
    StalledContraction { sweeps: usize, diameter: f64 },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("winding is ambiguous: step {step} moves torus coordinate {coordinate} by more than pi")]
    AmbiguousWinding { step: usize, coordinate: usize },
    #[error("tuple is not in the identity component")]
    NotInIdentityComponent,

    #[error("exotic components are not supported for {0}")]
    UnsupportedExotic(String),
    #[error("sequence is not exact at stage {0}")]
    NotExact(ExactnessStage),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
}

/// Which condition of a short exact sequence `1 -> A -> B -> C -> 1` failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ExactnessStage {
    /// A map does not send relations to relations.
    WellDefined,
    /// `A -> B` is not injective.
    Injective,
    /// Image of `A -> B` differs from the kernel of `B -> C`.
    Middle,
    /// `B -> C` is not surjective.
    Surjective,
}

impl std::fmt::Display for ExactnessStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDescriptor(_) => "InvalidDescriptor",
            Error::DescriptorMismatch => "DescriptorMismatch",
            Error::InvalidElement(_) => "InvalidElement",
            Error::BranchCut { .. } => "BranchCut",
            Error::UnrealizableFingerprint { .. } => "UnrealizableFingerprint",
            Error::ZeroFingerprint => "ZeroFingerprint",
            Error::UnsupportedDescriptor(_) => "UnsupportedDescriptor",
            Error::BadArguments(_) => "BadArguments",
            Error::NotSimultaneouslyDiagonalizable { .. } => "NotSimultaneouslyDiagonalizable",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::NotRegular { .. } => "NotRegular",
            Error::NotAlmostCommuting { .. } => "NotAlmostCommuting",
            Error::AmbiguousMatch { .. } => "AmbiguousMatch",
            Error::NotCyclic => "NotCyclic",
            Error::NotCentral => "NotCentral",
            Error::TooLarge { .. } => "TooLarge",
            Error::UnsupportedPrime(_) => "UnsupportedPrime",
            Error::NontrivialWinding { .. } => "NontrivialWinding",
            Error::StalledContraction { .. } => "StalledContraction",
            Error::InvalidPath(_) => "InvalidPath",
            Error::AmbiguousWinding { .. } => "AmbiguousWinding",
            Error::NotInIdentityComponent => "NotInIdentityComponent",
            Error::UnsupportedExotic(_) => "UnsupportedExotic",
            Error::NotExact(_) => "NotExact",
            Error::Overflow => "Overflow",
        }
    }
}

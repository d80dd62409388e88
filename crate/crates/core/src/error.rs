use thiserror::Error;

/// Broad classification used for exit codes and FFI status values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input was malformed or violates a structural requirement.
    Input,
    /// A well-formed question has a negative mathematical answer.
    Mathematical,
    /// A configured size or order cap was hit.
    Resource,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NotInvertible { element: usize },
    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order exceeds the cap of {limit}")]
    OrderLimitExceeded { limit: usize },
    #[error("linear system of dimension {rows}x{cols} exceeds the cap of {limit}")]
    SizeLimitExceeded { rows: usize, cols: usize, limit: usize },
    #[error("map is not a homomorphism at ({a}, {b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("elements {a} and {b} do not commute")]
    NotAbelian { a: usize, b: usize },
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("element {element} of the fibre does not commute with {witness}")]
    NotCentral { element: usize, witness: usize },
    #[error("cochain is not a cocycle; first failure at {witness:?}")]
    NotACocycle { witness: Vec<usize> },
    #[error("no solution at coefficient level {level}")]
    NoSolutionAtLevel { level: u64 },
    #[error("cochains live on different bases or degrees")]
    DomainMismatch,
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("map is not equivariant at point {point}, element {element}")]
    NotEquivariant { point: usize, element: usize },
    #[error("representation equation fails at {witness:?}")]
    RepresentationFails { witness: Vec<usize> },
    #[error("morphism equation fails at {witness:?}")]
    MorphismFails { witness: Vec<usize> },
    #[error("class does not lie in the dualizable subgroup (stage {stage}, level {level})")]
    NotInOmega { stage: u8, level: u64 },
    #[error("restriction to the fibre is not a character at {witness:?}")]
    RestrictionNotCharacter { witness: Vec<usize> },
    #[error("compatibility equation fails at {witness:?}")]
    CompatibilityFailed { witness: Vec<usize> },
    #[error("comparison map is not an isomorphism: {0}")]
    ComparisonNotIso(String),
    #[error("double dual class differs from the original class")]
    ClassMismatch,
    #[error("bilinear form is degenerate")]
    NotNondegenerate,
    #[error("level {level} does not contain the values of the form")]
    LevelTooCoarse { level: u64 },
    #[error("crossed module axiom fails: {0}")]
    CrossedModuleAxiom(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            OrderLimitExceeded { .. } | SizeLimitExceeded { .. } => ErrorKind::Resource,
            Malformed(_) | NoIdentity | NotInvertible { .. } | NotAssociative { .. }
            | NotHomomorphism { .. } | NotSubgroup(_) | DomainMismatch | InvalidAction(_)
            | NotEquivariant { .. } | LevelTooCoarse { .. } | Unsupported(_)
            | NotACocycle { .. } | NotCentral { .. } | NotAbelian { .. }
            | CompatibilityFailed { .. } | NotNondegenerate => ErrorKind::Input,
            NoSolutionAtLevel { .. } | MorphismFails { .. } | RepresentationFails { .. } | NotInOmega { .. }
            | RestrictionNotCharacter { .. } | ComparisonNotIso(_) | ClassMismatch
            | CrossedModuleAxiom(_) | InternalVerificationFailed(_) => ErrorKind::Mathematical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("expected a positive integer, got 0")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} listed twice")]
    DuplicatePrime(u64),
    #[error("empty set of integers")]
    EmptySet,
    #[error("arithmetic overflow")]
    Overflow,
    #[error("depth must be positive")]
    ZeroDepth,
    #[error("supernatural number has infinite support; a prime horizon is required")]
    InfiniteSupport,
    #[error("sequence is not a divisibility chain: {prev} does not divide {next}")]
    NotDivisibilityChain { prev: u64, next: u64 },
    #[error("empty level list")]
    EmptyLevels,
    #[error("adic integers live over different base sequences")]
    BaseMismatch,
    #[error("level {level} is out of range 1..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("residue {residue} is out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("residues are incoherent at level {level}")]
    Incoherent { level: usize },
    #[error("expected {expected} residues, got {got}")]
    DepthMismatch { expected: usize, got: usize },
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("point {point} is out of range for a system of {size} points")]
    PointOutOfRange { point: usize, size: usize },
    #[error("invalid periodic partition: {0}")]
    InvalidPartition(String),
    #[error("partitions belong to different systems")]
    SystemMismatch,
    #[error("partition lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("{divisor} does not divide {length}")]
    NotDivisor { divisor: usize, length: usize },
    #[error("block index {index} is out of range for length {length}")]
    BlockOutOfRange { index: usize, length: usize },
    #[error("partitions are not compatible")]
    Incompatible,
    #[error("{0} is not a period of the system")]
    NotAPeriod(u64),
    #[error("oracle bound exceeded: {what} {value} > {bound}")]
    OracleBoundExceeded { what: &'static str, value: usize, bound: usize },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("point {0} is not in the neighbourhood")]
    PointNotInSet(usize),
    #[error("factor maps have different sources")]
    SourceMismatch,
}

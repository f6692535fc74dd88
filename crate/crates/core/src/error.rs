use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("order {order} is not a power of the prime {prime}")]
    NotAPGroup { order: usize, prime: u32 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("group order exceeds the cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("groups have different primes ({0} and {1})")]
    MixedPrimes(u32, u32),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroups belong to different parent groups")]
    MixedParents,
    #[error("operation requires a nontrivial group")]
    TrivialGroup,
    #[error("index p^{exponent} exceeds the group order {order}")]
    IndexExceedsOrder { exponent: u32, order: usize },
    #[error("group is not of nilpotency class at most 2")]
    NotClassTwo,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("isotropic subgroup construction failed: {0}")]
    IsotropicConstruction(String),
    #[error("associated central characters of degree <= p^{level} do not span the expected flag subspace")]
    FlagBasisIncomplete { level: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown constructor `{name}` at byte {offset}")]
    UnknownConstructor { name: String, offset: usize },
    #[error("parameter out of range at byte {offset}: {message}")]
    ParameterOutOfRange { offset: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    InvalidModulus,

    #[error("p = {p} is not coprime to m = {m}")]
    NotCoprime { p: u64, m: u64 },

    #[error("m = {m} exceeds the enumeration cap {cap} (raise it with --max-m)")]
    CapExceeded { m: u64, cap: u64 },

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("orbit is empty; orbits have length at least 1")]
    EmptyOrbit,

    #[error("orbit is not supersingular: sum of (tau - 1) over the cycle is {excess}, not 0")]
    NotSupersingularOrbit { excess: i64 },

    #[error("orbit length {length} exceeds the exhaustive-search bound {bound}")]
    OracleBoundExceeded { length: usize, bound: usize },

    #[error("surface (m = {m}, p = {p}) is not supersingular; disc(NS) formula does not apply")]
    NotSupersingular { m: u64, p: u64 },

    #[error("orbit carries degree {degree} outside {{0, 1, 2}}; only weight-2 orbits are supported")]
    NonWeightTwo { degree: u8 },

    #[error("invalid type datum: {0}")]
    InvalidTypeDatum(String),

    #[error("infinity-type condition tau(iota(r)) = n - tau(r) fails at: {}", offenders.join(", "))]
    InfinityTypeViolation { offenders: Vec<String> },

    #[error("field size q = {q} is not congruent to 1 mod m = {m}")]
    IncompatibleField { q: u64, m: u64 },

    #[error("p = {p} is not prime; the finite-field oracle needs a prime")]
    NotPrime { p: u64 },

    #[error("oracle field size q = {q} exceeds the cap {cap} (raise it with --oracle-q-cap)")]
    FieldCapExceeded { q: u64, cap: u64 },

    #[error("character has a zero component; Jacobi sums are defined only for all-nonzero characters")]
    ZeroComponent,

    #[error("value is zero to the working precision of {precision} p-adic digits")]
    PrecisionExhausted { precision: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps these onto exit codes: everything here is an input or
/// validation failure (exit 2) except [`Error::CacheMiss`] (exit 3).
/// Internal invariant violations are bugs and panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be positive")]
    ZeroArgument,

    #[error("polynomial must be nonzero")]
    ZeroPolynomial,

    #[error("division by zero polynomial")]
    ZeroDivisor,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("characteristic {0} is too small; curve operations need p >= 5")]
    SmallCharacteristic(u64),

    #[error("singular curve over F_{0}: discriminant vanishes")]
    SingularCurve(u64),

    #[error("point does not satisfy the curve equation")]
    PointOffCurve,

    #[error("prime {p} exceeds the enumeration cap {cap}")]
    EnumerationCap { p: u64, cap: u64 },

    #[error("invalid base curve: 4A^3 + 27B^2 = 0")]
    SingularBase,

    #[error("singular surface: the discriminant vanishes identically")]
    SingularSurface,

    #[error("constant j-invariant: the surface is isotrivial")]
    ConstantJInvariant,

    #[error("coefficients over a rational base must not involve y")]
    YOverRationalBase,

    #[error("exact conductor unsupported for y-dependent coefficients")]
    YDependentCoefficients,

    #[error("model is non-minimal at a finite place; supply a minimal model")]
    NonMinimalModel,

    #[error("prime {0} is in the excluded set S")]
    ExcludedPrime(u64),

    #[error("coefficient has a pole mod {0} (denominator divisible by p)")]
    CoefficientPole(u64),

    #[error("a rational base (genus 0) has no nontrivial unramified abelian covers")]
    NoUnramifiedCovers,

    #[error("no primes in range")]
    EmptyScan,

    #[error("cutoffs must be strictly increasing")]
    BadCutoffs,

    #[error("orbit count {0} exceeds n^2; not a valid orbit count for C[n]")]
    OrbitCountTooLarge(String),

    #[error("element list is not closed under composition")]
    NotClosed,

    #[error("element list does not contain the identity")]
    MissingIdentity,

    #[error("invalid permutation: not a bijection on the set")]
    BadPermutation,

    #[error("closure exceeded the {0}-element cap")]
    ClosureCap(usize),

    #[error("h is not a subgroup of g")]
    NotASubgroup,

    #[error("brute-force enumeration limited to n <= {max_n}, r <= {max_r}")]
    BruteLimit { max_n: u64, max_r: u32 },

    #[error("declared section does not satisfy the Weierstrass equation")]
    BadSection,

    #[error("cache miss: records for the requested primes are not cached")]
    CacheMiss,

    #[error("cache file belongs to a different surface (hash mismatch)")]
    CacheHashMismatch,

    #[error("malformed cache line: {0}")]
    CacheParse(String),

    #[error("invalid surface spec: {0}")]
    SpecParse(String),

    #[error("invalid rational literal `{0}`")]
    RationalParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Rank-bound machinery for elliptic surfaces, exact where it matters.
//!
//! The toolkit covers five connected computations, all cross-checkable
//! against brute-force oracles at desk scale:
//!
//! - exact conductor degrees of surfaces over P^1 or an elliptic base, via
//!   gcd splits of the discriminant ([`surface`]);
//! - per-prime fiber-trace scans with exact integer sums s_p, including the
//!   grouped scans of the pullbacks along multiplication-by-n covers
//!   ([`trace`]);
//! - truncated Nagao-style rank estimates folded deterministically in fixed
//!   point ([`rank`]);
//! - orbit counting: the fixed-point average, the subgroup-orbit
//!   inequality, GL_r(Z/nZ) orbits against the divisor function, and
//!   Chebotarev sampling of torsion fixed points ([`orbits`]);
//! - the assembled tower tables comparing measured, Serre-mode, and
//!   geometric bounds ([`tower`]).

pub mod arith;
pub mod elliptic;
pub mod error;
pub mod fixed;
pub mod orbits;
pub mod rank;
pub mod report;
pub mod surface;
pub mod tower;
pub mod trace;

pub use error::{Error, Result};

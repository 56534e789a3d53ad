//! Orbits of GL_r(Z/nZ) on (Z/nZ)^r and the divisor-function identities
//! they produce.
//!
//! The orbit of a vector is characterized per prime power p^e || n by
//! min(ord_p of the coordinates, e), so the count is d(n); the brute-force
//! path enumerates the whole matrix action and is the oracle the formula is
//! checked against.

use crate::arith::{divisor_count, euler_phi, factorize, gcd_u64};
use crate::error::{Error, Result};

use super::DisjointSets;

const BRUTE_MAX_N: u64 = 12;
const BRUTE_MAX_R: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlMethod {
    /// d(n), via the per-prime-power ord invariant.
    Formula,
    /// Full enumeration of the invertible matrices acting on vectors.
    Brute,
}

/// Number of orbits of GL_r(Z/nZ) acting on (Z/nZ)^r.
pub fn glr_orbit_count(n: u64, r: u32, method: GlMethod) -> Result<u64> {
    if n == 0 || r == 0 {
        return Err(Error::ZeroArgument);
    }
    match method {
        GlMethod::Formula => divisor_count(n),
        GlMethod::Brute => {
            if n > BRUTE_MAX_N || r > BRUTE_MAX_R {
                return Err(Error::BruteLimit {
                    max_n: BRUTE_MAX_N,
                    max_r: BRUTE_MAX_R,
                });
            }
            Ok(match r {
                1 => brute_r1(n),
                _ => brute_r2(n),
            })
        }
    }
}

fn brute_r1(n: u64) -> u64 {
    let mut dsu = DisjointSets::new(n as usize);
    for unit in (0..n).filter(|&a| gcd_u64(a, n) == 1) {
        for v in 0..n {
            dsu.union(v as usize, (unit * v % n) as usize);
        }
    }
    dsu.count() as u64
}

fn brute_r2(n: u64) -> u64 {
    let size = (n * n) as usize;
    let mut dsu = DisjointSets::new(size);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let det = (a * d % n + n - b * c % n) % n;
                    if gcd_u64(det, n) != 1 {
                        continue;
                    }
                    for v1 in 0..n {
                        for v2 in 0..n {
                            let w1 = (a * v1 + b * v2) % n;
                            let w2 = (c * v1 + d * v2) % n;
                            dsu.union((v1 * n + v2) as usize, (w1 * n + w2) as usize);
                        }
                    }
                }
            }
        }
    }
    dsu.count() as u64
}

/// The orbit invariant of a vector at one prime power p^e || n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdProfile {
    pub prime: u64,
    pub exponent: u32,
    /// min over coordinates of ord_p, capped at the exponent.
    pub ord: u32,
}

/// Per-prime-power ord values of a vector in (Z/nZ)^r; these characterize
/// its GL_r orbit completely.
pub fn orbit_invariant(v: &[u64], n: u64) -> Result<Vec<OrdProfile>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut out = Vec::new();
    for (prime, exponent) in factorize(n) {
        let mut ord = exponent;
        for &coord in v {
            let mut c = coord % n;
            let mut k = 0;
            while k < exponent && c % prime == 0 {
                if c == 0 {
                    k = exponent;
                    break;
                }
                c /= prime;
                k += 1;
            }
            ord = ord.min(k);
        }
        out.push(OrdProfile {
            prime,
            exponent,
            ord,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdIdentity {
    pub n: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub equal: bool,
}

/// Check sum over units a mod n of gcd(a - 1, n) against d(n) phi(n),
/// both sides exact. The sum is the total fixed-point count of the unit
/// group acting on Z/nZ by multiplication, so equality is the r = 1 case of
/// the orbit count.
pub fn gcd_identity_check(n: u64) -> Result<GcdIdentity> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut lhs = 0u64;
    for a in 0..n {
        if gcd_u64(a, n) != 1 {
            continue;
        }
        let shifted = (a + n - 1) % n;
        lhs += if shifted == 0 { n } else { gcd_u64(shifted, n) };
    }
    let rhs = divisor_count(n)? * euler_phi(n)?;
    Ok(GcdIdentity {
        n,
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_counts_match_divisor_function() {
        assert_eq!(glr_orbit_count(1, 1, GlMethod::Formula).unwrap(), 1);
        assert_eq!(glr_orbit_count(1, 2, GlMethod::Brute).unwrap(), 1);
        // primes have two orbits: zero and everything else
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(glr_orbit_count(p, 2, GlMethod::Formula).unwrap(), 2);
        }
        for n in 1..=8 {
            let formula = glr_orbit_count(n, 2, GlMethod::Formula).unwrap();
            assert_eq!(glr_orbit_count(n, 2, GlMethod::Brute).unwrap(), formula);
            assert_eq!(glr_orbit_count(n, 1, GlMethod::Brute).unwrap(), formula);
        }
        assert!(matches!(
            glr_orbit_count(13, 2, GlMethod::Brute),
            Err(Error::BruteLimit { .. })
        ));
        assert!(matches!(
            glr_orbit_count(6, 3, GlMethod::Brute),
            Err(Error::BruteLimit { .. })
        ));
    }

    #[test]
    fn orbit_invariant_examples() {
        // (0, 0) mod 8: ord capped at the exponent
        let zero = orbit_invariant(&[0, 0], 8).unwrap();
        assert_eq!(zero, vec![OrdProfile { prime: 2, exponent: 3, ord: 3 }]);
        // (2, 4) mod 8: min(1, 2) = 1
        let v = orbit_invariant(&[2, 4], 8).unwrap();
        assert_eq!(v[0].ord, 1);
        // (1, 5) mod 6: a unit vector at both primes
        let w = orbit_invariant(&[1, 5], 6).unwrap();
        assert_eq!(
            w,
            vec![
                OrdProfile { prime: 2, exponent: 1, ord: 0 },
                OrdProfile { prime: 3, exponent: 1, ord: 0 },
            ]
        );
    }

    #[test]
    fn invariant_classifies_brute_orbits() {
        // vectors lie in the same brute-force orbit exactly when their
        // invariants agree
        let n = 12u64;
        let mut dsu = DisjointSets::new((n * n) as usize);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let det = (a * d % n + n - b * c % n) % n;
                        if gcd_u64(det, n) != 1 {
                            continue;
                        }
                        for v1 in 0..n {
                            for v2 in 0..n {
                                let w1 = (a * v1 + b * v2) % n;
                                let w2 = (c * v1 + d * v2) % n;
                                dsu.union((v1 * n + v2) as usize, (w1 * n + w2) as usize);
                            }
                        }
                    }
                }
            }
        }
        for v1 in 0..n {
            for v2 in 0..n {
                for w1 in 0..n {
                    for w2 in 0..n {
                        let same_class = dsu.find((v1 * n + v2) as usize)
                            == dsu.find((w1 * n + w2) as usize);
                        let same_invariant = orbit_invariant(&[v1, v2], n).unwrap()
                            == orbit_invariant(&[w1, w2], n).unwrap();
                        assert_eq!(same_class, same_invariant);
                    }
                }
            }
        }
    }

    #[test]
    fn gcd_identity_examples() {
        let one = gcd_identity_check(1).unwrap();
        assert_eq!((one.lhs, one.rhs), (1, 1));
        // n = 5: 5 + 1 + 1 + 1 = 8 = d(5) phi(5)
        let five = gcd_identity_check(5).unwrap();
        assert_eq!((five.lhs, five.rhs), (8, 8));
        // n = 6: gcd(0,6) + gcd(4,6) = 8 = d(6) phi(6)
        let six = gcd_identity_check(6).unwrap();
        assert_eq!((six.lhs, six.rhs), (8, 8));
        for n in 1..200 {
            assert!(gcd_identity_check(n).unwrap().equal);
        }
    }
}

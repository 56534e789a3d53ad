//! Exact integer and rational arithmetic plus elementary arithmetic
//! functions (divisor count, Euler totient, prime sieves).
//!
//! Everything here is exact: rationals are arbitrary-precision and kept in
//! lowest terms with positive denominator, so downstream conductor and trace
//! computations never see rounding.

mod poly;

pub use poly::PolyQ;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Parse an exact rational from a decimal or fraction literal.
///
/// Accepts `"-3"`, `"27/4"`, and exact decimals such as `"1.25"` (= 5/4).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::RationalParse(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let whole = int.abs() * &scale + frac;
        let signed = if negative { -whole } else { whole };
        return Ok(Rational::new(signed, scale));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Trial-division factorization, smallest prime first.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exact divisor count d(n).
pub fn divisor_count(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(factorize(n)
        .iter()
        .map(|&(_, e)| u64::from(e) + 1)
        .product())
}

/// Exact Euler totient phi(n).
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    Ok(phi)
}

/// A positive integer together with its divisor count and totient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithFn {
    pub n: u64,
    pub d_n: u64,
    pub phi_n: u64,
}

impl ArithFn {
    pub fn new(n: u64) -> Result<Self> {
        Ok(ArithFn {
            n,
            d_n: divisor_count(n)?,
            phi_n: euler_phi(n)?,
        })
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

/// All primes up to and including `limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-3").unwrap(), rat(-3));
        assert_eq!(parse_rational("27/4").unwrap(), Rational::new(27.into(), 4.into()));
        assert_eq!(parse_rational("1.25").unwrap(), Rational::new(5.into(), 4.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("6/4").unwrap(), Rational::new(3.into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn divisor_count_examples() {
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert_eq!(euler_phi(1).unwrap(), 1);
        // multiplicativity with d(p^e) = e + 1: d(12) = d(4) d(3) = 3 * 2
        assert_eq!(divisor_count(12).unwrap(), 6);
        assert_eq!(divisor_count(5).unwrap(), 2);
        assert_eq!(euler_phi(5).unwrap(), 4);
        assert!(divisor_count(0).is_err());
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn arith_fn_bundles_both() {
        let a = ArithFn::new(12).unwrap();
        assert_eq!((a.n, a.d_n, a.phi_n), (12, 6, 4));
    }

    #[test]
    fn multiplicative_on_random_coprime_pairs() {
        // d and phi are multiplicative on coprime arguments.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut checked = 0;
        while checked < 200 {
            let m = next() % 10_000 + 1;
            let n = next() % 10_000 + 1;
            if gcd_u64(m, n) != 1 {
                continue;
            }
            assert_eq!(
                divisor_count(m * n).unwrap(),
                divisor_count(m).unwrap() * divisor_count(n).unwrap()
            );
            assert_eq!(
                euler_phi(m * n).unwrap(),
                euler_phi(m).unwrap() * euler_phi(n).unwrap()
            );
            checked += 1;
        }
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieved = primes_up_to(500);
        let trial: Vec<u64> = (2..=500).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, trial);
        assert_eq!(sieved.len(), 95);
    }
}

//! Deterministic fixed-point arithmetic with 80 fractional bits.
//!
//! Rank estimates accumulate exact rationals; only the final log-weighted
//! fold is inexact, and it runs here rather than in hardware floats so every
//! platform and worker count produces identical digit strings.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;

pub const FRAC_BITS: u32 = 80;

/// A signed fixed-point value: `inner / 2^80`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Fixed(BigInt::from(v) << FRAC_BITS)
    }

    pub fn from_ratio(num: i64, den: u64) -> Self {
        assert!(den != 0);
        Fixed::from_rational(&Rational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: &Rational) -> Self {
        Fixed(round_div(r.numer() << FRAC_BITS, r.denom()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Fixed(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Fixed(&self.0 - &other.0)
    }

    pub fn neg(&self) -> Self {
        Fixed(-&self.0)
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Fixed(shift_round(&self.0 * &other.0))
    }

    pub fn div_u64(&self, d: u64) -> Self {
        assert!(d != 0);
        Fixed(round_div(self.0.clone(), &BigInt::from(d)))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.0.is_zero());
        Fixed(round_div(&self.0 << FRAC_BITS, &other.0))
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Integer square root of a nonnegative integer at full precision.
    pub fn sqrt_u64(v: u64) -> Self {
        let wide = BigUint::from(v) << (2 * FRAC_BITS);
        Fixed(BigInt::from(wide.sqrt()))
    }

    /// Natural logarithm of an integer >= 1.
    pub fn ln_u64(v: u64) -> Self {
        assert!(v >= 1);
        if v == 1 {
            return Fixed::zero();
        }
        // v = 2^k * m with m in [1, 2): ln v = k ln 2 + 2 atanh((m-1)/(m+1))
        let k = 63 - v.leading_zeros() as u64;
        let pow2 = 1u64 << k;
        let ln2 = atanh_ratio(1, 3).mul(&Fixed::from_int(2));
        let frac = atanh_ratio(v as i64 - pow2 as i64, (v + pow2) as i64).mul(&Fixed::from_int(2));
        ln2.mul(&Fixed(BigInt::from(k) << FRAC_BITS)).add(&frac)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) / (2f64).powi(FRAC_BITS as i32)
    }

    /// Fixed 6-digit decimal rendering, deterministic across platforms.
    pub fn to_decimal(&self) -> String {
        let negative = self.0.is_negative();
        let scaled = self.0.magnitude() * BigUint::from(1_000_000u64);
        // round half up on the magnitude
        let rounded = (scaled + (BigUint::one() << (FRAC_BITS - 1))) >> FRAC_BITS;
        format_micro(rounded, negative)
    }
}

/// 6-digit decimal rendering of an exact rational.
pub fn decimal6(r: &Rational) -> String {
    let negative = r.is_negative();
    let num = r.numer().magnitude() * BigUint::from(1_000_000u64);
    let den = r.denom().magnitude();
    let rounded = (num + den / 2u32) / den;
    format_micro(rounded, negative)
}

fn format_micro(micro: BigUint, negative: bool) -> String {
    let million = BigUint::from(1_000_000u64);
    let (int, frac) = micro.div_rem(&million);
    let sign = if negative && !micro.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{frac:06}")
}

/// atanh(n/d) for |n/d| < 1 by the odd power series, summed to past the
/// 80-bit tail.
fn atanh_ratio(n: i64, d: i64) -> Fixed {
    let z = Fixed::from_rational(&Rational::new(n.into(), d.into()));
    let z2 = z.mul(&z);
    let mut term = z.clone();
    let mut sum = Fixed::zero();
    let mut j = 1u64;
    loop {
        let contribution = term.div_u64(j);
        if contribution.0.is_zero() {
            break;
        }
        sum = sum.add(&contribution);
        term = term.mul(&z2);
        j += 2;
    }
    sum
}

fn shift_round(v: BigInt) -> BigInt {
    let half = BigInt::one() << (FRAC_BITS - 1);
    if v.is_negative() {
        -((-v + half) >> FRAC_BITS)
    } else {
        (v + half) >> FRAC_BITS
    }
}

fn round_div(num: BigInt, den: &BigInt) -> BigInt {
    let (mut q, r) = num.div_rem(den);
    if (&r * 2i32).magnitude() >= den.magnitude() {
        if (r.is_negative()) == (den.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn ln_matches_f64_to_many_digits() {
        for v in [2u64, 3, 5, 7, 97, 1009, 50021] {
            let got = Fixed::ln_u64(v).to_f64();
            let want = (v as f64).ln();
            assert!((got - want).abs() < 1e-12, "ln({v}): {got} vs {want}");
        }
        assert_eq!(Fixed::ln_u64(1), Fixed::zero());
    }

    #[test]
    fn sqrt_matches_f64() {
        for v in [2u64, 5, 101, 4999, 50021] {
            let got = Fixed::sqrt_u64(v).to_f64();
            assert!((got - (v as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn decimal_rendering_is_exact_on_rationals() {
        assert_eq!(decimal6(&Rational::new(1.into(), 5.into())), "0.200000");
        assert_eq!(decimal6(&Rational::new((-1).into(), 3.into())), "-0.333333");
        assert_eq!(decimal6(&rat(0)), "0.000000");
        assert_eq!(decimal6(&Rational::new(1.into(), 2_000_000.into())), "0.000001");
        assert_eq!(Fixed::from_ratio(1, 5).to_decimal(), "0.200000");
        assert_eq!(Fixed::from_int(-3).to_decimal(), "-3.000000");
    }

    #[test]
    fn arithmetic_round_trips() {
        let a = Fixed::from_ratio(7, 4);
        let b = Fixed::from_ratio(-3, 8);
        assert_eq!(a.add(&b).to_decimal(), "1.375000");
        assert_eq!(a.mul(&b).to_decimal(), "-0.656250");
        assert_eq!(a.div(&b).to_decimal(), "-4.666667");
        assert_eq!(a.sub(&a), Fixed::zero());
    }
}

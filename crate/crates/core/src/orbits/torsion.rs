//! Chebotarev-style orbit estimation from Frobenius fixed-point counts.
//!
//! The number of Galois orbits on the n-torsion of an elliptic curve C0/Q
//! is the average of h0(sigma) = #fixed points over the Galois group; that
//! average is exactly what sampling h0 = |C0[n](F_p)| over good primes
//! converges to, so the Galois group never has to be materialized. The
//! estimate is reported with its sample count; rounding is the caller's
//! call.

use std::collections::HashSet;

use num_traits::Zero;

use crate::arith::{rat, Rational};
use crate::elliptic::{CurveFp, PointFp, PrimeField, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::surface::BaseDescriptor;

/// One sampled prime: the Frobenius-fixed torsion count h0, the image size
/// of [n] on C0(F_p), the complementary subgroup size |B| = n^2 / h0, and
/// the running average of h0 so far.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionRow {
    pub p: u64,
    pub h0: u64,
    pub image_size: u64,
    pub b_size: u64,
    pub running_average: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionActionReport {
    pub n: u32,
    pub rows: Vec<TorsionRow>,
    /// Final running average of h0; the Chebotarev estimate of the orbit
    /// count.
    pub estimated_orbits: Rational,
    pub samples: usize,
}

/// Sample h0 = |C0[n](F_p)| over the good primes p <= pmax of an elliptic
/// base and report the running averages.
pub fn orbit_average_estimate(
    base: &BaseDescriptor,
    n: u32,
    pmax: u64,
) -> Result<TorsionActionReport> {
    let BaseDescriptor::Elliptic { a, b } = base else {
        return Err(Error::NoUnramifiedCovers);
    };
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut rows = Vec::new();
    let mut h0_sum = Rational::zero();
    let n_squared = u64::from(n) * u64::from(n);
    for p in crate::arith::primes_up_to(pmax.min(ENUMERATION_CAP)) {
        if p < 5 {
            continue;
        }
        let field = PrimeField::new(p)?;
        let (Ok(a_p), Ok(b_p)) = (reduce(a, p), reduce(b, p)) else {
            continue; // denominator divisible by p
        };
        let Ok(curve) = CurveFp::new(field, a_p, b_p) else {
            continue; // bad reduction of the base
        };
        let points = curve.enumerate_points()?;
        let mut h0 = 0u64;
        let mut image: HashSet<PointFp> = HashSet::new();
        for &point in &points {
            let mapped = curve.scalar_mul(point, u64::from(n))?;
            if mapped == PointFp::Infinity {
                h0 += 1;
            }
            image.insert(mapped);
        }
        let image_size = image.len() as u64;
        assert_eq!(
            h0 * image_size,
            points.len() as u64,
            "kernel times image must equal the group order"
        );
        assert_eq!(n_squared % h0, 0, "h0 must divide n^2");
        h0_sum += rat(h0 as i64);
        let running_average = &h0_sum / rat(rows.len() as i64 + 1);
        rows.push(TorsionRow {
            p,
            h0,
            image_size,
            b_size: n_squared / h0,
            running_average,
        });
    }
    let Some(last) = rows.last() else {
        return Err(Error::EmptyScan);
    };
    Ok(TorsionActionReport {
        n,
        estimated_orbits: last.running_average.clone(),
        samples: rows.len(),
        rows,
    })
}

fn reduce(r: &Rational, p: u64) -> Result<i64> {
    crate::trace::reduce_rational_mod(r, p).map(|v| v as i64)
}

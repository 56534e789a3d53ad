//! Elliptic curves over prime fields F_p: group law, exhaustive point
//! enumeration, Frobenius traces, torsion kernels, and group structure.
//!
//! Counting is enumeration-based (O(p) with a square table), which is the
//! right tradeoff for desk scale p <= ~5*10^4; there is no Schoof here.
//! All primes below 5 are rejected so the short Weierstrass form is fully
//! general.

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

/// Largest prime the enumeration-based operations accept.
pub const ENUMERATION_CAP: u64 = 50021;

/// Modular inverse of `a` mod `p` for `a` not divisible by `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on signed words; p < 2^32 so nothing overflows
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "inv_mod of a noninvertible element");
    t0.rem_euclid(p as i64) as u64
}

/// The field F_p for a prime p >= 5. Elements are u64 values in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::SmallCharacteristic(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p <= 50021 keeps a * b < 2^33; no widening needed
        a * b % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.p)
    }

    /// Quadratic-character table: chi[v] is 1 for nonzero squares, -1 for
    /// non-squares, 0 for v = 0.
    pub fn character_table(&self) -> Vec<i8> {
        let p = self.p as usize;
        let mut chi = vec![-1i8; p];
        chi[0] = 0;
        for x in 1..self.p {
            chi[self.mul(x, x) as usize] = 1;
        }
        chi
    }

    /// For each square v, the smaller of its two square roots; usize::MAX
    /// marks non-squares.
    fn sqrt_table(&self) -> Vec<u64> {
        let p = self.p as usize;
        let mut roots = vec![u64::MAX; p];
        for y in (0..self.p).rev() {
            roots[self.mul(y, y) as usize] = y.min(self.p - y);
        }
        roots
    }
}

/// A nonsingular short Weierstrass curve y^2 = x^3 + a4 x + a6 over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveFp {
    field: PrimeField,
    a4: u64,
    a6: u64,
}

/// A point of a `CurveFp`: the point at infinity or an affine pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointFp {
    Infinity,
    Affine(u64, u64),
}

impl CurveFp {
    pub fn new(field: PrimeField, a4: i64, a6: i64) -> Result<Self> {
        let a4 = field.reduce(a4);
        let a6 = field.reduce(a6);
        let disc = field.add(
            field.mul(4 % field.p(), field.mul(a4, field.mul(a4, a4))),
            field.mul(27 % field.p(), field.mul(a6, a6)),
        );
        if disc == 0 {
            return Err(Error::SingularCurve(field.p()));
        }
        Ok(CurveFp { field, a4, a6 })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn a4(&self) -> u64 {
        self.a4
    }

    pub fn a6(&self) -> u64 {
        self.a6
    }

    fn check_cap(&self) -> Result<()> {
        if self.p() > ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                p: self.p(),
                cap: ENUMERATION_CAP,
            });
        }
        Ok(())
    }

    /// x^3 + a4 x + a6 mod p.
    pub fn rhs(&self, x: u64) -> u64 {
        let f = self.field;
        f.add(f.mul(f.add(f.mul(x, x), self.a4), x), self.a6)
    }

    pub fn is_on_curve(&self, point: PointFp) -> bool {
        match point {
            PointFp::Infinity => true,
            PointFp::Affine(x, y) => {
                x < self.p() && y < self.p() && self.field.mul(y, y) == self.rhs(x)
            }
        }
    }

    /// Trace of Frobenius a_p = p + 1 - #E(F_p), via the quadratic-character
    /// sum over x. Satisfies the Weil bound |a_p| <= 2 sqrt(p).
    pub fn trace_of_frobenius(&self) -> Result<i64> {
        self.check_cap()?;
        let chi = self.field.character_table();
        Ok(-self.character_sum(&chi))
    }

    /// Sum of chi(x^3 + a4 x + a6) over x, given a character table for p.
    pub fn character_sum(&self, chi: &[i8]) -> i64 {
        let p = self.p();
        let f = self.field;
        let mut sum = 0i64;
        // keep a4*x as a running total so the inner step is add-only
        let mut ax = 0u64;
        let mut cube;
        for x in 0..p {
            cube = f.mul(f.mul(x, x), x);
            sum += i64::from(chi[f.add(f.add(cube, ax), self.a6) as usize]);
            ax = f.add(ax, self.a4);
        }
        sum
    }

    /// Chord-tangent addition. Errors on off-curve input.
    pub fn add(&self, a: PointFp, b: PointFp) -> Result<PointFp> {
        if !self.is_on_curve(a) || !self.is_on_curve(b) {
            return Err(Error::PointOffCurve);
        }
        Ok(self.add_unchecked(a, b))
    }

    fn add_unchecked(&self, a: PointFp, b: PointFp) -> PointFp {
        let f = self.field;
        let (x1, y1) = match a {
            PointFp::Infinity => return b,
            PointFp::Affine(x, y) => (x, y),
        };
        let (x2, y2) = match b {
            PointFp::Infinity => return a,
            PointFp::Affine(x, y) => (x, y),
        };
        let lambda = if x1 != x2 {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)))
        } else if y1 == f.sub(0, y2) {
            return PointFp::Infinity;
        } else {
            let num = f.add(f.mul(3 % f.p(), f.mul(x1, x1)), self.a4);
            f.mul(num, f.inv(f.add(y1, y1)))
        };
        let x3 = f.sub(f.sub(f.mul(lambda, lambda), x1), x2);
        let y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
        PointFp::Affine(x3, y3)
    }

    /// n * P by double-and-add; 0 * P = O.
    pub fn scalar_mul(&self, point: PointFp, n: u64) -> Result<PointFp> {
        if !self.is_on_curve(point) {
            return Err(Error::PointOffCurve);
        }
        Ok(self.scalar_mul_unchecked(point, n))
    }

    fn scalar_mul_unchecked(&self, point: PointFp, mut n: u64) -> PointFp {
        let mut acc = PointFp::Infinity;
        let mut base = point;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(acc, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add_unchecked(base, base);
            }
        }
        acc
    }

    /// Every point of E(F_p) in deterministic order: O first, then affine
    /// points by x ascending and y ascending.
    pub fn enumerate_points(&self) -> Result<Vec<PointFp>> {
        self.check_cap()?;
        let roots = self.field.sqrt_table();
        let mut points = vec![PointFp::Infinity];
        for x in 0..self.p() {
            let v = self.rhs(x);
            let y = roots[v as usize];
            if y == u64::MAX {
                continue;
            }
            points.push(PointFp::Affine(x, y));
            if y != 0 {
                points.push(PointFp::Affine(x, self.p() - y));
            }
        }
        Ok(points)
    }

    /// |E[n](F_p)|, by testing every enumerated point.
    pub fn torsion_kernel_size(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        let points = self.enumerate_points()?;
        Ok(self.kernel_size_in(&points, n))
    }

    fn kernel_size_in(&self, points: &[PointFp], n: u64) -> u64 {
        points
            .iter()
            .filter(|&&pt| self.scalar_mul_unchecked(pt, n) == PointFp::Infinity)
            .count() as u64
    }

    /// Invariant factors (d1, d2) with d1 | d2 and d1 * d2 = #E(F_p),
    /// determined from torsion kernel sizes at prime powers dividing #E.
    pub fn group_structure(&self) -> Result<(u64, u64)> {
        let points = self.enumerate_points()?;
        let order = points.len() as u64;
        let mut d1 = 1u64;
        for (l, e) in factorize(order) {
            // v_l(d1) is the largest k with |E[l^k]| = l^(2k)
            let mut k = 0;
            while k < e / 2 {
                let m = l.pow(k + 1);
                if self.kernel_size_in(&points, m) == m * m {
                    k += 1;
                } else {
                    break;
                }
            }
            d1 *= l.pow(k);
        }
        let d2 = order / d1;
        debug_assert_eq!(d2 % d1, 0);
        Ok((d1, d2))
    }
}

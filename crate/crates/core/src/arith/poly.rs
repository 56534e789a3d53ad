//! Dense univariate polynomials over Q, constant term first.
//!
//! Canonical form: no trailing zero coefficient; the zero polynomial is the
//! empty coefficient vector. Degrees stay small at desk scale (<= ~20), so a
//! dense representation with primitive-part reduction inside gcd chains keeps
//! coefficients under control.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    /// Build from a constant-first coefficient list; trims trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyQ::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        PolyQ::new(vec![c])
    }

    /// Convenience constructor from small integer coefficients, constant first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolyQ::new(coeffs.iter().map(|&c| super::rat(c)).collect())
    }

    /// The monomial c * x^k.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return PolyQ::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        PolyQ::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Canonical degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn neg(&self) -> Self {
        PolyQ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        PolyQ::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }

    pub fn mul_rat(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PolyQ::zero();
        }
        PolyQ {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = PolyQ::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroDivisor)?;
        let lead = d.leading().expect("nonzero divisor").clone();
        let mut r = self.coeffs.clone();
        if r.len() < dd + 1 {
            return Ok((PolyQ::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        while r.len() >= dd + 1 {
            let k = r.len() - 1 - dd;
            let factor = r.last().expect("nonempty") / &lead;
            q[k] = factor.clone();
            for (i, c) in d.coeffs.iter().enumerate() {
                let v = std::mem::take(&mut r[k + i]);
                r[k + i] = v - &factor * c;
            }
            debug_assert!(r.last().is_some_and(Zero::is_zero));
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
        }
        Ok((PolyQ::new(q), PolyQ { coeffs: r }))
    }

    /// Division known to be exact; panics if a remainder appears.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        assert!(r.is_zero(), "exact_div: division left a remainder");
        q
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return PolyQ::zero();
        }
        PolyQ::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i + 1)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => PolyQ::zero(),
            Some(l) => self.mul_rat(&l.recip()),
        }
    }

    /// Scale to an integer polynomial with coprime coefficients and positive
    /// leading coefficient. Controls coefficient growth inside gcd chains.
    fn primitive(&self) -> Self {
        if self.is_zero() {
            return PolyQ::zero();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        let sign = if ints.last().expect("nonzero").is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let content = content * sign;
        PolyQ {
            coeffs: ints
                .into_iter()
                .map(|v| Rational::from_integer(v / &content))
                .collect(),
        }
    }

    /// Monic greatest common divisor; `gcd(a, 0) = monic(a)`, `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Squarefree part: monic product of the distinct irreducible factors,
    /// computed as `a / gcd(a, a')`.
    pub fn radical(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(PolyQ::one());
        }
        let g = self.gcd(&self.derivative());
        Ok(self.exact_div(&g).monic())
    }

    /// Monic product of the distinct irreducible factors of multiplicity >= k,
    /// via iterated gcds with the derivative.
    pub fn multiplicity_split(&self, k: u32) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if k == 0 {
            return Err(Error::ZeroArgument);
        }
        // After i gcd-with-derivative steps each factor's multiplicity drops
        // by i, so the radical of step k-1 keeps exactly those with e >= k.
        let mut g = self.clone();
        for _ in 1..k {
            if g.is_constant() {
                return Ok(PolyQ::one());
            }
            g = g.gcd(&g.derivative());
        }
        g.radical()
    }

    /// Resultant of `self` and `other` via the Euclidean remainder chain.
    pub fn resultant(&self, other: &Self) -> Rational {
        fn go(a: &PolyQ, b: &PolyQ) -> Rational {
            let da = a.degree().expect("nonzero");
            match b.degree() {
                None => Rational::zero(),
                Some(0) => b.leading().expect("nonzero").pow(da as i32),
                Some(db) => {
                    let (_, r) = a.divrem(b).expect("nonzero divisor");
                    if r.is_zero() && da > 0 {
                        return Rational::zero();
                    }
                    let dr = r.degree().unwrap_or(0);
                    let sign = if (da * db) % 2 == 1 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    sign * b.leading().expect("nonzero").pow((da - dr) as i32) * go(b, &r)
                }
            }
        }
        if self.is_zero() || other.is_zero() {
            return Rational::zero();
        }
        if self.is_constant() {
            return self
                .leading()
                .expect("nonzero")
                .pow(other.degree().unwrap_or(0) as i32);
        }
        go(self, other)
    }

    /// Reduce the coefficients mod p, constant first. Fails if a denominator
    /// is divisible by p.
    pub fn reduce_mod(&self, p: u64) -> Result<Vec<u64>> {
        let modulus = BigInt::from(p);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let den = c.denom().mod_floor(&modulus);
            if den.is_zero() {
                return Err(Error::CoefficientPole(p));
            }
            let den: u64 = den.to_u64_digits().1.first().copied().unwrap_or(0);
            let num = c.numer().mod_floor(&modulus);
            let num: u64 = num.to_u64_digits().1.first().copied().unwrap_or(0);
            out.push(num * crate::elliptic::inv_mod(den, p) % p);
        }
        Ok(out)
    }
}

impl std::fmt::Display for PolyQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(coeffs: &[i64]) -> PolyQ {
        PolyQ::from_ints(coeffs)
    }

    #[test]
    fn canonical_form_trims_trailing_zeros() {
        let a = PolyQ::new(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(a.degree(), Some(0));
        assert!(PolyQ::new(vec![rat(0)]).is_zero());
        assert_eq!(PolyQ::zero().degree(), None);
    }

    #[test]
    fn gcd_examples() {
        // gcd(t^2 - 1, t - 1) = t - 1 (common root t = 1)
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        // 4t^3 + 27 is squarefree with no root at 0, so gcd with 12t^2 is 1;
        // cross-checked by the resultant being nonzero.
        let f = p(&[27, 0, 0, 4]);
        let g = p(&[0, 0, 12]);
        assert!(!f.resultant(&g).is_zero());
        assert_eq!(f.gcd(&g), PolyQ::one());
        // convention
        assert_eq!(PolyQ::zero().gcd(&PolyQ::zero()), PolyQ::zero());
        assert_eq!(p(&[2, 4]).gcd(&PolyQ::zero()), p(&[2, 4]).monic());
    }

    #[test]
    fn radical_examples() {
        // t^4 (1 - t)^2 -> t(t - 1) = t^2 - t
        let f = p(&[0, 0, 0, 0, 1]).mul(&p(&[1, -1]).pow(2));
        assert_eq!(f.radical().unwrap(), p(&[0, -1, 1]));
        // 4t^3 + 27 is already squarefree; radical is its monic form
        let g = p(&[27, 0, 0, 4]);
        assert_eq!(g.gcd(&g.derivative()), PolyQ::one());
        assert_eq!(
            g.radical().unwrap(),
            PolyQ::new(vec![Rational::new(27.into(), 4.into()), rat(0), rat(0), rat(1)])
        );
        // (t - 2)^3 -> t - 2
        assert_eq!(p(&[-2, 1]).pow(3).radical().unwrap(), p(&[-2, 1]));
        assert!(PolyQ::zero().radical().is_err());
    }

    #[test]
    fn multiplicity_split_examples() {
        let f = p(&[0, 0, 0, 0, 1]).mul(&p(&[1, -1]).pow(2)); // t^4 (1-t)^2
        assert_eq!(f.multiplicity_split(2).unwrap(), p(&[0, -1, 1]));
        assert_eq!(f.multiplicity_split(3).unwrap(), p(&[0, 1]));
        assert_eq!(p(&[27, 0, 0, 4]).multiplicity_split(2).unwrap(), PolyQ::one());
        assert!(PolyQ::zero().multiplicity_split(2).is_err());
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[3, -2, 0, 7, 1]);
        let d = p(&[1, 1, 2]);
        let (q, r) = a.divrem(&d).unwrap();
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree() < d.degree());
        assert!(a.divrem(&PolyQ::zero()).is_err());
    }

    #[test]
    fn resultant_detects_common_roots() {
        // share the root t = 1
        assert!(p(&[-1, 0, 1]).resultant(&p(&[-1, 1])).is_zero());
        // res(t^2 + 1, t - 2) = 5
        assert_eq!(p(&[1, 0, 1]).resultant(&p(&[-2, 1])), rat(5));
    }

    #[test]
    fn reduce_mod_detects_poles() {
        let f = PolyQ::new(vec![Rational::new(1.into(), 5.into()), rat(3)]);
        assert!(matches!(f.reduce_mod(5), Err(Error::CoefficientPole(5))));
        assert_eq!(f.reduce_mod(7).unwrap(), vec![3, 3]); // 1/5 = 3 mod 7
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[27, 0, 0, 4]).to_string(), "4*t^3 + 27");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
        assert_eq!(PolyQ::zero().to_string(), "0");
    }
}

//! Elliptic-surface models over Q(t) (rational base) and over the function
//! field of an elliptic curve C0/Q, with exact Weierstrass invariants.
//!
//! A surface is y^2 = x^3 + a4 x + a6 where a4, a6 are functions on the base:
//! polynomials in t for a rational base, or elements u(x) + v(x) y of the
//! coordinate ring of C0 : y^2 = g(x) for an elliptic base. Exact conductor
//! computations require x-only coefficients; the trace engine accepts the
//! general form.

pub mod conductor;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::arith::{parse_rational, rat, PolyQ, Rational};
use crate::elliptic::ENUMERATION_CAP;
use crate::error::{Error, Result};

pub use conductor::{
    conductor, conductor_elliptic_base, conductor_p1, pullback_conductor,
    weierstrass_invariants, AffineLoci, ConductorReport, PlaceEntry, ReductionType,
};
pub(crate) use conductor::infinity_valuations;

/// The base curve: the projective line or an elliptic curve y^2 = x^3 + Ax + B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseDescriptor {
    P1,
    Elliptic { a: Rational, b: Rational },
}

impl BaseDescriptor {
    pub fn genus(&self) -> u32 {
        match self {
            BaseDescriptor::P1 => 0,
            BaseDescriptor::Elliptic { .. } => 1,
        }
    }

    /// x^3 + Ax + B for an elliptic base.
    pub fn cubic(&self) -> Option<PolyQ> {
        match self {
            BaseDescriptor::P1 => None,
            BaseDescriptor::Elliptic { a, b } => Some(PolyQ::new(vec![
                b.clone(),
                a.clone(),
                Rational::zero(),
                Rational::one(),
            ])),
        }
    }

    fn validate(&self) -> Result<()> {
        if let BaseDescriptor::Elliptic { a, b } = self {
            let disc = rat(4) * a.pow(3) + rat(27) * b * b;
            if disc.is_zero() {
                return Err(Error::SingularBase);
            }
        }
        Ok(())
    }
}

/// A function on the base written as u(x) + v(x) y; v = 0 over a rational
/// base (where the parameter is called t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseFunction {
    pub u: PolyQ,
    pub v: PolyQ,
}

impl BaseFunction {
    pub fn from_poly(u: PolyQ) -> Self {
        BaseFunction { u, v: PolyQ::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_x_only(&self) -> bool {
        self.v.is_zero()
    }
}

impl From<PolyQ> for BaseFunction {
    fn from(u: PolyQ) -> Self {
        BaseFunction::from_poly(u)
    }
}

/// Arithmetic in the coordinate ring of the base: Q[t] for a rational base,
/// Q[x, y] / (y^2 - g(x)) for an elliptic one.
#[derive(Debug, Clone)]
pub struct CoordRing {
    cubic: Option<PolyQ>,
}

impl CoordRing {
    pub fn new(base: &BaseDescriptor) -> Self {
        CoordRing { cubic: base.cubic() }
    }

    pub fn add(&self, a: &BaseFunction, b: &BaseFunction) -> BaseFunction {
        BaseFunction {
            u: a.u.add(&b.u),
            v: a.v.add(&b.v),
        }
    }

    pub fn sub(&self, a: &BaseFunction, b: &BaseFunction) -> BaseFunction {
        BaseFunction {
            u: a.u.sub(&b.u),
            v: a.v.sub(&b.v),
        }
    }

    pub fn mul(&self, a: &BaseFunction, b: &BaseFunction) -> BaseFunction {
        let uu = a.u.mul(&b.u);
        let cross = a.u.mul(&b.v).add(&a.v.mul(&b.u));
        match &self.cubic {
            None => {
                debug_assert!(a.v.is_zero() && b.v.is_zero());
                BaseFunction { u: uu, v: cross }
            }
            Some(g) => BaseFunction {
                u: uu.add(&a.v.mul(&b.v).mul(g)),
                v: cross,
            },
        }
    }

    pub fn mul_rat(&self, a: &BaseFunction, c: &Rational) -> BaseFunction {
        BaseFunction {
            u: a.u.mul_rat(c),
            v: a.v.mul_rat(c),
        }
    }

    pub fn pow(&self, a: &BaseFunction, e: u32) -> BaseFunction {
        let mut acc = BaseFunction::from_poly(PolyQ::one());
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// A section declared on the surface, given by (X(..), Y(..)) on the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub x: BaseFunction,
    pub y: BaseFunction,
}

/// A validated elliptic-surface model.
///
/// Construction enforces a nonvanishing discriminant and a nonconstant
/// j-invariant, verifies any declared sections symbolically, and extends the
/// excluded-prime set S with every prime that would break exact reduction
/// (denominators, the base discriminant, leading coefficients and content of
/// the discriminant, and the resultants certifying nontrivial conductor
/// splits).
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub name: String,
    pub base: BaseDescriptor,
    pub a4: BaseFunction,
    pub a6: BaseFunction,
    /// Final excluded-prime set S (user set plus automatic extension).
    pub excluded_primes: BTreeSet<u64>,
    pub sections: Vec<Section>,
}

impl SurfaceSpec {
    pub fn build(
        name: impl Into<String>,
        base: BaseDescriptor,
        a4: impl Into<BaseFunction>,
        a6: impl Into<BaseFunction>,
        user_excluded: impl IntoIterator<Item = u64>,
        sections: Vec<Section>,
    ) -> Result<Self> {
        let a4 = a4.into();
        let a6 = a6.into();
        base.validate()?;
        if base.genus() == 0 && !(a4.is_x_only() && a6.is_x_only()) {
            return Err(Error::YOverRationalBase);
        }
        let ring = CoordRing::new(&base);
        let delta = discriminant(&ring, &a4, &a6);
        if delta.is_zero() {
            return Err(Error::SingularSurface);
        }
        let c4 = ring.mul_rat(&a4, &rat(-48));
        let c4_cubed = ring.pow(&c4, 3);
        if proportional_constant(&c4_cubed, &delta).is_some() {
            return Err(Error::ConstantJInvariant);
        }
        let spec = SurfaceSpec {
            name: name.into(),
            base,
            a4,
            a6,
            excluded_primes: user_excluded.into_iter().collect(),
            sections,
        };
        for section in &spec.sections {
            if !spec.verify_section(section) {
                return Err(Error::BadSection);
            }
        }
        let mut spec = spec;
        spec.excluded_primes.extend(spec.automatic_exclusions(&delta));
        Ok(spec)
    }

    pub fn genus(&self) -> u32 {
        self.base.genus()
    }

    pub fn is_x_only(&self) -> bool {
        self.a4.is_x_only() && self.a6.is_x_only()
    }

    /// Discriminant -16(4 a4^3 + 27 a6^2) as a coordinate-ring element.
    pub fn delta(&self) -> BaseFunction {
        let ring = CoordRing::new(&self.base);
        discriminant(&ring, &self.a4, &self.a6)
    }

    /// Check Y^2 = X^3 + a4 X + a6 symbolically for a declared section.
    pub fn verify_section(&self, section: &Section) -> bool {
        let ring = CoordRing::new(&self.base);
        let lhs = ring.mul(&section.y, &section.y);
        let rhs = ring.add(
            &ring.add(
                &ring.pow(&section.x, 3),
                &ring.mul(&self.a4, &section.x),
            ),
            &self.a6,
        );
        ring.sub(&lhs, &rhs).is_zero()
    }

    /// Primes a scan may visit: 5 <= p <= pmax, p not in S.
    pub fn scan_primes(&self, pmax: u64) -> Vec<u64> {
        crate::arith::primes_up_to(pmax)
            .into_iter()
            .filter(|p| *p >= 5 && !self.excluded_primes.contains(p))
            .collect()
    }

    /// Stable identity of the surface's mathematical content, used to bind
    /// scan caches to the right surface.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_content().as_bytes());
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    fn canonical_content(&self) -> String {
        let base = match &self.base {
            BaseDescriptor::P1 => "p1".to_string(),
            BaseDescriptor::Elliptic { a, b } => format!("elliptic;{a};{b}"),
        };
        format!(
            "v1|{base}|{}|{}",
            canonical_function(&self.a4),
            canonical_function(&self.a6),
        )
    }

    fn automatic_exclusions(&self, delta: &BaseFunction) -> BTreeSet<u64> {
        use num_bigint::BigInt;
        use num_integer::Integer;

        let mut rationals: Vec<Rational> = vec![rat(6)];
        let mut push_coeffs = |f: &BaseFunction| {
            for poly in [&f.u, &f.v] {
                for c in poly.coeffs() {
                    rationals.push(Rational::from_integer(c.denom().clone()));
                }
            }
        };
        push_coeffs(&self.a4);
        push_coeffs(&self.a6);
        if let BaseDescriptor::Elliptic { a, b } = &self.base {
            for c in [a, b] {
                rationals.push(Rational::from_integer(c.denom().clone()));
            }
            rationals.push(rat(4) * a.pow(3) + rat(27) * b * b);
        }
        // leading coefficient and content of the discriminant
        for poly in [&delta.u, &delta.v] {
            if let Some(lead) = poly.leading() {
                rationals.push(lead.clone());
            }
            let content = poly
                .coeffs()
                .iter()
                .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
            rationals.push(Rational::from_integer(content));
        }
        // resultants certifying the conductor splits stay intact mod p
        if self.is_x_only() {
            rationals.extend(conductor::split_certificates(self));
        }
        let mut out = BTreeSet::new();
        for r in rationals {
            collect_small_prime_factors(&r, &mut out);
        }
        out
    }
}

fn discriminant(ring: &CoordRing, a4: &BaseFunction, a6: &BaseFunction) -> BaseFunction {
    let four_a4_cubed = ring.mul_rat(&ring.pow(a4, 3), &rat(4));
    let t27_a6_sq = ring.mul_rat(&ring.mul(a6, a6), &rat(27));
    ring.mul_rat(&ring.add(&four_a4_cubed, &t27_a6_sq), &rat(-16))
}

/// If `p = c * q` for a rational constant c, return it. Componentwise over
/// the free basis {1, y}.
fn proportional_constant(p: &BaseFunction, q: &BaseFunction) -> Option<Rational> {
    fn ratio(p: &PolyQ, q: &PolyQ) -> Option<Option<Rational>> {
        // inner None: no constraint (both zero); inner Some: the forced c
        match (p.is_zero(), q.is_zero()) {
            (true, true) => Some(None),
            (true, false) => Some(Some(Rational::zero())),
            (false, true) => None,
            (false, false) => {
                if p.degree() != q.degree() {
                    return None;
                }
                let c = p.leading().expect("nonzero") / q.leading().expect("nonzero");
                if &q.mul_rat(&c) == p {
                    Some(Some(c))
                } else {
                    None
                }
            }
        }
    }
    let cu = ratio(&p.u, &q.u)?;
    let cv = ratio(&p.v, &q.v)?;
    match (cu, cv) {
        (None, None) => Some(Rational::zero()),
        (Some(c), None) | (None, Some(c)) => Some(c),
        (Some(c1), Some(c2)) => (c1 == c2).then_some(c1),
    }
}

fn canonical_function(f: &BaseFunction) -> String {
    let part = |p: &PolyQ| {
        p.coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("[{}]+y[{}]", part(&f.u), part(&f.v))
}

/// Append every prime factor below the enumeration cap of the numerator and
/// denominator of `r`.
fn collect_small_prime_factors(r: &Rational, out: &mut BTreeSet<u64>) {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut grind = |v: &BigInt| {
        let mut v = v.abs();
        if v.is_zero() {
            return;
        }
        let mut d = 2u64;
        while d <= ENUMERATION_CAP {
            let big_d = BigInt::from(d);
            while v.is_multiple_of(&big_d) {
                v /= &big_d;
                out.insert(d);
            }
            d += if d == 2 { 1 } else { 2 };
            if v.is_one() {
                return;
            }
        }
    };
    grind(r.numer());
    grind(r.denom());
}

// ---------------------------------------------------------------------------
// Spec file format (JSON)
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct SurfaceFile {
    name: String,
    base: BaseFile,
    a4: CoefficientFile,
    a6: CoefficientFile,
    #[serde(default)]
    excluded_primes: Vec<u64>,
    #[serde(default)]
    sections: Vec<SectionFile>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum BaseFile {
    P1,
    Elliptic {
        #[serde(rename = "A")]
        a: String,
        #[serde(rename = "B")]
        b: String,
    },
}

/// Coefficient arrays are exact decimal/rational strings, constant term
/// first. A bare array is x-only; `{"x": [...], "y": [...]}` adds a y part.
#[derive(Deserialize)]
#[serde(untagged)]
enum CoefficientFile {
    XOnly(Vec<String>),
    General {
        #[serde(default)]
        x: Vec<String>,
        #[serde(default)]
        y: Vec<String>,
    },
}

#[derive(Deserialize)]
struct SectionFile {
    x: CoefficientFile,
    y: CoefficientFile,
}

fn parse_poly(strings: &[String]) -> Result<PolyQ> {
    let mut coeffs = Vec::with_capacity(strings.len());
    for s in strings {
        coeffs.push(parse_rational(s)?);
    }
    Ok(PolyQ::new(coeffs))
}

impl CoefficientFile {
    fn into_function(self) -> Result<BaseFunction> {
        match self {
            CoefficientFile::XOnly(x) => Ok(BaseFunction::from_poly(parse_poly(&x)?)),
            CoefficientFile::General { x, y } => Ok(BaseFunction {
                u: parse_poly(&x)?,
                v: parse_poly(&y)?,
            }),
        }
    }
}

/// Parse and validate a surface spec from its JSON representation.
pub fn parse_spec(json: &str) -> Result<SurfaceSpec> {
    let file: SurfaceFile =
        serde_json::from_str(json).map_err(|e| Error::SpecParse(e.to_string()))?;
    let base = match file.base {
        BaseFile::P1 => BaseDescriptor::P1,
        BaseFile::Elliptic { a, b } => BaseDescriptor::Elliptic {
            a: parse_rational(&a)?,
            b: parse_rational(&b)?,
        },
    };
    let mut sections = Vec::with_capacity(file.sections.len());
    for s in file.sections {
        sections.push(Section {
            x: s.x.into_function()?,
            y: s.y.into_function()?,
        });
    }
    SurfaceSpec::build(
        file.name,
        base,
        file.a4.into_function()?,
        file.a6.into_function()?,
        file.excluded_primes,
        sections,
    )
}

/// Parse a surface spec from a file on disk.
pub fn load_spec(path: &std::path::Path) -> Result<SurfaceSpec> {
    parse_spec(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Built-in sample surfaces (used by the selftest and the test suites)
// ---------------------------------------------------------------------------

/// y^2 = x^3 + t x - t^3 over P^1, with the visible section (t, t).
pub fn p1_sample() -> SurfaceSpec {
    SurfaceSpec::build(
        "p1-demo",
        BaseDescriptor::P1,
        PolyQ::from_ints(&[0, 1]),
        PolyQ::from_ints(&[0, 0, 0, -1]),
        [2, 3],
        vec![Section {
            x: BaseFunction::from_poly(PolyQ::from_ints(&[0, 1])),
            y: BaseFunction::from_poly(PolyQ::from_ints(&[0, 1])),
        }],
    )
    .expect("sample surface is valid")
}

/// Y^2 = X^3 + x X + 1 over the elliptic base y^2 = x^3 - x + 1.
pub fn elliptic_base_sample() -> SurfaceSpec {
    SurfaceSpec::build(
        "cubic-base-demo",
        BaseDescriptor::Elliptic {
            a: rat(-1),
            b: rat(1),
        },
        PolyQ::from_ints(&[0, 1]),
        PolyQ::from_ints(&[1]),
        [2, 3],
        Vec::new(),
    )
    .expect("sample surface is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_surfaces() {
        // identically singular
        assert!(matches!(
            SurfaceSpec::build(
                "bad",
                BaseDescriptor::P1,
                PolyQ::zero(),
                PolyQ::zero(),
                [],
                vec![]
            ),
            Err(Error::SingularSurface)
        ));
        // a6 = 0 forces j = 1728, constant
        assert!(matches!(
            SurfaceSpec::build(
                "isotrivial",
                BaseDescriptor::P1,
                PolyQ::from_ints(&[0, 1]),
                PolyQ::zero(),
                [],
                vec![]
            ),
            Err(Error::ConstantJInvariant)
        ));
        // constant coefficients: j constant as well
        assert!(matches!(
            SurfaceSpec::build(
                "constant",
                BaseDescriptor::P1,
                PolyQ::from_ints(&[1]),
                PolyQ::from_ints(&[1]),
                [],
                vec![]
            ),
            Err(Error::ConstantJInvariant)
        ));
        // singular base curve
        assert!(matches!(
            SurfaceSpec::build(
                "bad-base",
                BaseDescriptor::Elliptic { a: rat(0), b: rat(0) },
                PolyQ::from_ints(&[0, 1]),
                PolyQ::from_ints(&[1]),
                [],
                vec![]
            ),
            Err(Error::SingularBase)
        ));
        // y-dependent coefficient over P^1
        assert!(matches!(
            SurfaceSpec::build(
                "y-over-p1",
                BaseDescriptor::P1,
                BaseFunction {
                    u: PolyQ::from_ints(&[0, 1]),
                    v: PolyQ::one()
                },
                BaseFunction::from_poly(PolyQ::one()),
                [],
                vec![]
            ),
            Err(Error::YOverRationalBase)
        ));
    }

    #[test]
    fn samples_validate_and_keep_small_s() {
        let e1 = p1_sample();
        assert_eq!(e1.excluded_primes, BTreeSet::from([2, 3]));
        assert!(e1.is_x_only());
        let eb = elliptic_base_sample();
        // the base discriminant -16*23 puts 23 in S
        assert!(eb.excluded_primes.contains(&23));
        assert!(!eb.excluded_primes.contains(&5));
        assert_eq!(eb.genus(), 1);
    }

    #[test]
    fn section_verification() {
        // (t, t) satisfies y^2 = x^3 + t x - t^3
        let e1 = p1_sample();
        assert!(e1.verify_section(&e1.sections[0]));
        let bogus = Section {
            x: BaseFunction::from_poly(PolyQ::from_ints(&[0, 1])),
            y: BaseFunction::from_poly(PolyQ::from_ints(&[1, 1])),
        };
        assert!(!e1.verify_section(&bogus));
    }

    #[test]
    fn json_round_trip_matches_builder() {
        let json = r#"{
            "name": "p1-demo",
            "base": {"kind": "p1"},
            "a4": ["0", "1"],
            "a6": ["0", "0", "0", "-1"],
            "excluded_primes": [2, 3],
            "sections": [{"x": ["0", "1"], "y": ["0", "1"]}]
        }"#;
        let parsed = parse_spec(json).unwrap();
        let built = p1_sample();
        assert_eq!(parsed.a4, built.a4);
        assert_eq!(parsed.a6, built.a6);
        assert_eq!(parsed.excluded_primes, built.excluded_primes);
        assert_eq!(parsed.content_hash(), built.content_hash());

        let elliptic = r#"{
            "name": "cubic-base-demo",
            "base": {"kind": "elliptic", "A": "-1", "B": "1"},
            "a4": ["0", "1"],
            "a6": ["1"],
            "excluded_primes": [2, 3]
        }"#;
        let parsed = parse_spec(elliptic).unwrap();
        assert_eq!(parsed.content_hash(), elliptic_base_sample().content_hash());
    }

    #[test]
    fn y_dependent_coefficients_parse() {
        let json = r#"{
            "name": "general",
            "base": {"kind": "elliptic", "A": "-1", "B": "1"},
            "a4": ["0", "1"],
            "a6": {"x": ["1"], "y": ["0", "2"]}
        }"#;
        let parsed = parse_spec(json).unwrap();
        assert!(!parsed.is_x_only());
        assert!(parsed.a6.v == PolyQ::from_ints(&[0, 2]));
    }

    #[test]
    fn bad_section_is_rejected() {
        let json = r#"{
            "name": "p1-demo",
            "base": {"kind": "p1"},
            "a4": ["0", "1"],
            "a6": ["0", "0", "0", "-1"],
            "sections": [{"x": ["0", "1"], "y": ["1", "1"]}]
        }"#;
        assert!(matches!(parse_spec(json), Err(Error::BadSection)));
    }

    #[test]
    fn coord_ring_reduces_y_squared() {
        let base = BaseDescriptor::Elliptic { a: rat(-1), b: rat(1) };
        let ring = CoordRing::new(&base);
        let y = BaseFunction {
            u: PolyQ::zero(),
            v: PolyQ::one(),
        };
        let y2 = ring.mul(&y, &y);
        assert_eq!(y2.u, base.cubic().unwrap());
        assert!(y2.v.is_zero());
    }

    #[test]
    fn hash_ignores_name_but_not_coefficients() {
        let a = SurfaceSpec::build(
            "one",
            BaseDescriptor::P1,
            PolyQ::from_ints(&[0, 1]),
            PolyQ::from_ints(&[1]),
            [],
            vec![],
        )
        .unwrap();
        let b = SurfaceSpec::build(
            "two",
            BaseDescriptor::P1,
            PolyQ::from_ints(&[0, 1]),
            PolyQ::from_ints(&[1]),
            [],
            vec![],
        )
        .unwrap();
        let c = SurfaceSpec::build(
            "three",
            BaseDescriptor::P1,
            PolyQ::from_ints(&[0, 1]),
            PolyQ::from_ints(&[2]),
            [],
            vec![],
        )
        .unwrap();
        assert_eq!(a.content_hash(), b.content_hash());
        assert_ne!(a.content_hash(), c.content_hash());
    }
}

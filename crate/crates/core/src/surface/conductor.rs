//! Exact conductor degrees via gcd splits.
//!
//! Residue fields here have characteristic 0, so conductor exponents are
//! f = 1 at multiplicative places and f = 2 at additive ones with no wild
//! part; a place of the discriminant is multiplicative exactly when c4 does
//! not vanish there. That reduces the whole computation to radicals and gcd
//! splits of Delta and c4 — no factorization, and no Tate's algorithm.


use crate::arith::{PolyQ, Rational};
use crate::error::{Error, Result};

use super::{BaseDescriptor, SurfaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionType {
    Multiplicative,
    Additive,
}

impl ReductionType {
    /// Conductor exponent in residue characteristic 0.
    pub fn exponent(self) -> u64 {
        match self {
            ReductionType::Multiplicative => 1,
            ReductionType::Additive => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ReductionType::Multiplicative => "multiplicative",
            ReductionType::Additive => "additive",
        }
    }
}

/// One bad locus: the total degree of its closed points and the fiber type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaceEntry {
    pub degree: u64,
    pub reduction: ReductionType,
}

/// The affine split polynomials behind the place list. Roots of `mult`/`add`
/// are bad fiber positions on the base parameter line; the `*_on_g` parts
/// (elliptic base only) sit at y = 0 and count one closed point per root,
/// while the plain parts count conjugate pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLoci {
    pub mult: PolyQ,
    pub add: PolyQ,
    pub mult_on_g: PolyQ,
    pub add_on_g: PolyQ,
}

/// Per-place classification and the total conductor degree |N|.
#[derive(Debug, Clone)]
pub struct ConductorReport {
    pub affine_places: Vec<PlaceEntry>,
    /// The place at infinity (rational base only; `None` when good there).
    pub infinity_place: Option<PlaceEntry>,
    pub total_degree: u64,
    pub genus: u32,
    /// |N| + 4g - 4.
    pub geometric_bound: i64,
    pub loci: AffineLoci,
}

impl ConductorReport {
    fn assemble(
        affine_places: Vec<PlaceEntry>,
        infinity_place: Option<PlaceEntry>,
        genus: u32,
        loci: AffineLoci,
    ) -> Self {
        let total_degree: u64 = affine_places
            .iter()
            .chain(infinity_place.iter())
            .map(|e| e.reduction.exponent() * e.degree)
            .sum();
        let geometric_bound = total_degree as i64 + 4 * i64::from(genus) - 4;
        ConductorReport {
            affine_places,
            infinity_place,
            total_degree,
            genus,
            geometric_bound,
            loci,
        }
    }
}

/// Exact c4, c6, Delta for y^2 = x^3 + a4 x + a6 (x-only coefficients):
/// c4 = -48 a4, c6 = -864 a6, Delta = -16 (4 a4^3 + 27 a6^2).
pub fn weierstrass_invariants(spec: &SurfaceSpec) -> Result<(PolyQ, PolyQ, PolyQ)> {
    if !spec.is_x_only() {
        return Err(Error::YDependentCoefficients);
    }
    let a4 = &spec.a4.u;
    let a6 = &spec.a6.u;
    let c4 = a4.mul_rat(&crate::arith::rat(-48));
    let c6 = a6.mul_rat(&crate::arith::rat(-864));
    let delta = a4
        .pow(3)
        .mul_rat(&crate::arith::rat(4))
        .add(&a6.mul(a6).mul_rat(&crate::arith::rat(27)))
        .mul_rat(&crate::arith::rat(-16));
    if delta.is_zero() {
        return Err(Error::SingularSurface);
    }
    Ok((c4, c6, delta))
}

/// Split the radical of Delta into multiplicative and additive parts by
/// gcd with the radical of c4. Returns (mult, add), both monic.
fn mult_add_split(rad_delta: &PolyQ, c4: &PolyQ) -> Result<(PolyQ, PolyQ)> {
    if c4.is_zero() {
        // c4 vanishes everywhere: every bad place is additive
        return Ok((PolyQ::one(), rad_delta.clone()));
    }
    let rc4 = c4.radical()?;
    let add = rad_delta.gcd(&rc4);
    let mult = rad_delta.exact_div(&add).monic();
    Ok((mult, add))
}

/// Error out when some finite place carries multiplicity >= 12 in Delta and
/// >= 4 in c4 (the model could be shrunk by u = that factor). On an elliptic
/// base, factors of g sit at y = 0 where x-multiplicities count double, so
/// the thresholds there are 6 and 2.
fn check_minimality(delta: &PolyQ, c4: &PolyQ, g: Option<&PolyQ>) -> Result<()> {
    let deep = |poly: &PolyQ, k: u32| -> Result<PolyQ> {
        if poly.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            poly.multiplicity_split(k)
        }
    };
    let bad = |d_split: PolyQ, c4_k: u32| -> Result<PolyQ> {
        if c4.is_zero() {
            Ok(d_split)
        } else {
            Ok(d_split.gcd(&deep(c4, c4_k)?))
        }
    };
    let bad12 = bad(deep(delta, 12)?, 4)?;
    if !bad12.is_constant() {
        return Err(Error::NonMinimalModel);
    }
    if let Some(g) = g {
        let bad6 = bad(deep(delta, 6)?, 2)?.gcd(g);
        if !bad6.is_constant() {
            return Err(Error::NonMinimalModel);
        }
    }
    Ok(())
}

/// Valuations at t = infinity of (c4, c6, Delta) after pulling back by
/// s = 1/t with the minimal twist, then reducing the model while it stays
/// non-minimal there. `None` encodes an identically-zero input (valuation
/// +infinity).
pub(crate) fn infinity_valuations(
    c4: &PolyQ,
    c6: &PolyQ,
    delta: &PolyQ,
) -> (u32, Option<i64>, Option<i64>, Option<i64>) {
    let need = |poly: &PolyQ, w: u32| -> u32 {
        match poly.degree() {
            None => 0,
            Some(d) => (d as u32).div_ceil(w),
        }
    };
    let mut k = need(c4, 4).max(need(c6, 6)).max(need(delta, 12));
    let val = |poly: &PolyQ, w: i64, k: u32| -> Option<i64> {
        poly.degree().map(|d| w * i64::from(k) - d as i64)
    };
    let ge = |v: Option<i64>, bound: i64| v.is_none_or(|x| x >= bound);
    loop {
        let (v4, v6, v12) = (val(c4, 4, k), val(c6, 6, k), val(delta, 12, k));
        if k > 0 && ge(v4, 4) && ge(v6, 6) && ge(v12, 12) {
            k -= 1;
            continue;
        }
        return (k, v4, v6, v12);
    }
}

fn classify_infinity(v4: Option<i64>, v12: Option<i64>) -> Option<PlaceEntry> {
    match v12 {
        Some(0) => None, // good reduction at infinity
        _ => {
            let reduction = if v4 == Some(0) {
                ReductionType::Multiplicative
            } else {
                ReductionType::Additive
            };
            Some(PlaceEntry {
                degree: 1,
                reduction,
            })
        }
    }
}

/// Exact conductor report for a surface over P^1.
pub fn conductor_p1(spec: &SurfaceSpec) -> Result<ConductorReport> {
    if spec.base != BaseDescriptor::P1 {
        return Err(Error::SpecParse("conductor_p1 needs a rational base".into()));
    }
    let (c4, c6, delta) = weierstrass_invariants(spec)?;
    check_minimality(&delta, &c4, None)?;

    let rad = delta.radical()?;
    let (mult, add) = mult_add_split(&rad, &c4)?;
    let mut places = Vec::new();
    for (poly, reduction) in [
        (&mult, ReductionType::Multiplicative),
        (&add, ReductionType::Additive),
    ] {
        if let Some(d) = poly.degree().filter(|&d| d > 0) {
            places.push(PlaceEntry {
                degree: d as u64,
                reduction,
            });
        }
    }

    let (_, v4, _, v12) = infinity_valuations(&c4, &c6, &delta);
    let infinity = classify_infinity(v4, v12);

    Ok(ConductorReport::assemble(
        places,
        infinity,
        0,
        AffineLoci {
            mult,
            add,
            mult_on_g: PolyQ::one(),
            add_on_g: PolyQ::one(),
        },
    ))
}

/// Exact conductor report for a surface over an elliptic base, for x-only
/// coefficients. The fiber over the base origin is excluded by policy (the
/// model may degenerate there); with genus 1 the 4g - 4 term vanishes, so
/// the geometric bound equals |N|.
pub fn conductor_elliptic_base(spec: &SurfaceSpec) -> Result<ConductorReport> {
    let g = match spec.base.cubic() {
        Some(g) => g,
        None => return Err(Error::SpecParse("conductor_elliptic_base needs an elliptic base".into())),
    };
    if !spec.is_x_only() {
        return Err(Error::YDependentCoefficients);
    }
    let (c4, _, delta) = weierstrass_invariants(spec)?;
    check_minimality(&delta, &c4, Some(&g))?;

    let rad = delta.radical()?;
    // split off the part sitting at y = 0: those are single closed points,
    // the rest come in conjugate pairs of total degree 2 deg
    let on_g = rad.gcd(&g);
    let off_g = rad.exact_div(&on_g).monic();
    let (mult_on_g, add_on_g) = mult_add_split(&on_g, &c4)?;
    let (mult, add) = mult_add_split(&off_g, &c4)?;

    let mut places = Vec::new();
    for (poly, reduction, weight) in [
        (&mult_on_g, ReductionType::Multiplicative, 1),
        (&add_on_g, ReductionType::Additive, 1),
        (&mult, ReductionType::Multiplicative, 2),
        (&add, ReductionType::Additive, 2),
    ] {
        if let Some(d) = poly.degree().filter(|&d| d > 0) {
            places.push(PlaceEntry {
                degree: weight * d as u64,
                reduction,
            });
        }
    }

    Ok(ConductorReport::assemble(
        places,
        None,
        1,
        AffineLoci {
            mult,
            add,
            mult_on_g,
            add_on_g,
        },
    ))
}

/// Exact conductor for whichever base the spec uses.
pub fn conductor(spec: &SurfaceSpec) -> Result<ConductorReport> {
    match spec.base {
        BaseDescriptor::P1 => conductor_p1(spec),
        BaseDescriptor::Elliptic { .. } => conductor_elliptic_base(spec),
    }
}

/// Conductor degree and geometric bound of the pullback along the degree-n^2
/// unramified cover [n] of an elliptic base: both scale by n^2 and the genus
/// stays 1.
pub fn pullback_conductor(report: &ConductorReport, n: u32) -> Result<(u64, i64)> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if report.genus == 0 {
        return Err(Error::NoUnramifiedCovers);
    }
    let scaled = report.total_degree * u64::from(n) * u64::from(n);
    Ok((scaled, scaled as i64))
}

/// Resultants whose vanishing mod p would change a nontrivial gcd split;
/// their prime factors join the excluded set S. Quantities attached to
/// trivial splits are omitted so harmless primes stay scannable.
pub(crate) fn split_certificates(spec: &SurfaceSpec) -> Vec<Rational> {
    let mut out = Vec::new();
    let Ok((c4, _, delta)) = weierstrass_invariants(spec) else {
        return out;
    };
    let Ok(rad) = delta.radical() else {
        return out;
    };
    // squarefreeness of the radical must survive reduction
    out.push(rad.resultant(&rad.derivative()));
    fn split_pair(whole: &PolyQ, c4: &PolyQ, out: &mut Vec<Rational>) {
        if let Ok((m, a)) = mult_add_split(whole, c4) {
            if !m.is_constant() && !a.is_constant() {
                out.push(m.resultant(&a));
            }
        }
    }
    match spec.base.cubic() {
        None => split_pair(&rad, &c4, &mut out),
        Some(g) => {
            let on_g = rad.gcd(&g);
            let off_g = rad.exact_div(&on_g).monic();
            if !on_g.is_constant() && !off_g.is_constant() {
                out.push(on_g.resultant(&off_g));
            }
            split_pair(&on_g, &c4, &mut out);
            split_pair(&off_g, &c4, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::surface::{elliptic_base_sample, p1_sample, BaseDescriptor, SurfaceSpec};

    fn p(coeffs: &[i64]) -> PolyQ {
        PolyQ::from_ints(coeffs)
    }

    #[test]
    fn invariants_match_symbolic_expansion() {
        // a4 = t, a6 = 1: c4 = -48t, Delta = -16(4t^3 + 27)
        let s = SurfaceSpec::build("s", BaseDescriptor::P1, p(&[0, 1]), p(&[1]), [], vec![])
            .unwrap();
        let (c4, c6, delta) = weierstrass_invariants(&s).unwrap();
        assert_eq!(c4, p(&[0, -48]));
        assert_eq!(c6, p(&[-864]));
        assert_eq!(delta, p(&[-432, 0, 0, -64]));
        // a4 = t, a6 = -t^3: Delta = -16 t^3 (4 + 27 t^3)
        let (_, _, delta) = weierstrass_invariants(&p1_sample()).unwrap();
        assert_eq!(delta, p(&[0, 0, 0, -64, 0, 0, -432]));
    }

    #[test]
    fn conductor_p1_examples() {
        // y^2 = x^3 + t x + 1: three multiplicative places over 4t^3 + 27,
        // additive at infinity (v(c4) = 3, v(Delta) = 9)
        let s = SurfaceSpec::build("s", BaseDescriptor::P1, p(&[0, 1]), p(&[1]), [], vec![])
            .unwrap();
        let report = conductor_p1(&s).unwrap();
        assert_eq!(report.total_degree, 5);
        assert_eq!(report.geometric_bound, 1);
        assert_eq!(report.affine_places.len(), 1);
        assert_eq!(report.affine_places[0].degree, 3);
        assert_eq!(
            report.affine_places[0].reduction,
            ReductionType::Multiplicative
        );
        assert_eq!(
            report.infinity_place,
            Some(PlaceEntry {
                degree: 1,
                reduction: ReductionType::Additive
            })
        );

        // y^2 = x^3 + t x - t^3: additive at t = 0, multiplicative of total
        // degree 3 over 4 + 27t^3, additive at infinity
        let report = conductor_p1(&p1_sample()).unwrap();
        assert_eq!(report.total_degree, 7);
        assert_eq!(report.geometric_bound, 3);
        assert_eq!(report.loci.add, p(&[0, 1]));
        assert_eq!(report.loci.mult.degree(), Some(3));
        assert_eq!(
            report.infinity_place,
            Some(PlaceEntry {
                degree: 1,
                reduction: ReductionType::Additive
            })
        );
    }

    #[test]
    fn infinity_valuations_by_hand() {
        // y^2 = x^3 + tx + 1: k = 1, v(c4) = 3, v(c6) = 6, v(Delta) = 9
        let s = SurfaceSpec::build("s", BaseDescriptor::P1, p(&[0, 1]), p(&[1]), [], vec![])
            .unwrap();
        let (c4, c6, delta) = weierstrass_invariants(&s).unwrap();
        assert_eq!(
            infinity_valuations(&c4, &c6, &delta),
            (1, Some(3), Some(6), Some(9))
        );
    }

    #[test]
    fn non_minimal_model_is_rejected() {
        // scale a4 by t^4 and a6 by t^6: forced multiplicities 12 / 4
        let s = SurfaceSpec::build(
            "nonminimal",
            BaseDescriptor::P1,
            p(&[0, 0, 0, 0, 0, 1]),    // t^4 * t
            p(&[0, 0, 0, 0, 0, 0, 1]), // t^6 * 1
            [],
            vec![],
        )
        .unwrap();
        assert!(matches!(conductor_p1(&s), Err(Error::NonMinimalModel)));
    }

    #[test]
    fn conductor_elliptic_base_example() {
        // w = radical(4x^3 + 27) has degree 3 and meets neither g nor x,
        // giving 6 multiplicative closed-point degrees
        let report = conductor_elliptic_base(&elliptic_base_sample()).unwrap();
        assert_eq!(report.total_degree, 6);
        assert_eq!(report.geometric_bound, 6);
        assert_eq!(report.affine_places.len(), 1);
        assert_eq!(report.affine_places[0].degree, 6);
        assert!(report.loci.mult_on_g.is_constant());
        assert!(report.loci.add.is_constant());
        assert_eq!(report.infinity_place, None);
    }

    #[test]
    fn conductor_elliptic_base_with_y_zero_locus() {
        // a4 = g, a6 = g: Delta = -16 g^2 (4g + 27) shares the factor g, so
        // the y = 0 locus is additive (c4 = -48 g vanishes there) and
        // contributes 2 * 3; the remaining locus is multiplicative off g.
        let g = p(&[1, -1, 0, 1]);
        let s = SurfaceSpec::build(
            "shared",
            BaseDescriptor::Elliptic { a: rat(-1), b: rat(1) },
            g.clone(),
            g.clone(),
            [],
            vec![],
        )
        .unwrap();
        let report = conductor_elliptic_base(&s).unwrap();
        assert_eq!(report.loci.add_on_g, g.monic());
        assert_eq!(report.loci.mult.degree(), Some(3));
        assert_eq!(report.total_degree, 2 * 3 + 2 * 3);
    }

    #[test]
    fn y_dependent_coefficients_are_rejected() {
        let s = crate::surface::parse_spec(
            r#"{
                "name": "general",
                "base": {"kind": "elliptic", "A": "-1", "B": "1"},
                "a4": ["0", "1"],
                "a6": {"x": ["1"], "y": ["0", "2"]}
            }"#,
        )
        .unwrap();
        assert!(matches!(
            conductor_elliptic_base(&s),
            Err(Error::YDependentCoefficients)
        ));
    }

    #[test]
    fn pullback_scales_by_n_squared() {
        let report = conductor_elliptic_base(&elliptic_base_sample()).unwrap();
        assert_eq!(pullback_conductor(&report, 2).unwrap(), (24, 24));
        assert_eq!(pullback_conductor(&report, 1).unwrap(), (6, 6));
        assert!(matches!(
            pullback_conductor(&report, 0),
            Err(Error::ZeroArgument)
        ));
        let p1 = conductor_p1(&p1_sample()).unwrap();
        assert!(matches!(
            pullback_conductor(&p1, 2),
            Err(Error::NoUnramifiedCovers)
        ));
    }

    #[test]
    fn place_list_recomputes_total() {
        for report in [
            conductor_p1(&p1_sample()).unwrap(),
            conductor_elliptic_base(&elliptic_base_sample()).unwrap(),
        ] {
            let recomputed: u64 = report
                .affine_places
                .iter()
                .chain(report.infinity_place.iter())
                .map(|e| e.degree * e.reduction.exponent())
                .sum();
            assert_eq!(recomputed, report.total_degree);
        }
    }
}

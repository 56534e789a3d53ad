//! Per-prime fiber-trace scans: a_p over all fibers, exact sums s_p, the
//! tower scans over the multiplication-by-n covers, and the Deligne-Michel
//! slack monitor.
//!
//! Everything a scan emits is an exact integer, and prime-indexed work items
//! are independent pure computations, so a worker pool of any width merges
//! into byte-identical output.

pub mod cache;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::arith::{PolyQ, Rational};
use crate::elliptic::{CurveFp, PointFp, PrimeField, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::fixed::Fixed;
use crate::surface::{
    conductor, infinity_valuations, weierstrass_invariants, BaseDescriptor, SurfaceSpec,
};

pub use cache::ScanCache;

/// Exact per-prime scan data for one surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRecord {
    pub p: u64,
    /// s_p = sum of a_p over the scanned fibers (= p * A_p).
    pub s_p: i64,
    pub fibers_good: u64,
    pub fibers_singular: u64,
    pub fibers_skipped: u64,
}

/// A `TraceRecord` for the pullback along [n], with the Frobenius-fixed
/// torsion count h0 = |C0[n](F_p)| and the number of distinct affine image
/// fibers actually evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerTraceRecord {
    pub trace: TraceRecord,
    pub n: u32,
    pub h0: u64,
    pub image_size: u64,
}

impl TowerTraceRecord {
    pub fn p(&self) -> u64 {
        self.trace.p
    }
}

/// A base point a fiber sits over, reduced mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasePoint {
    /// t-value on a rational base.
    T(u64),
    /// The t = infinity fiber of a rational base.
    Infinity,
    /// Affine point (x, y) of an elliptic base.
    Point(u64, u64),
}

/// The reduction of a surface mod p, with the per-prime lookup tables shared
/// by every fiber evaluation.
pub struct SurfaceModP {
    field: PrimeField,
    chi: Vec<i8>,
    cubes: Vec<u64>,
    a4u: Vec<u64>,
    a4v: Vec<u64>,
    a6u: Vec<u64>,
    a6v: Vec<u64>,
    base: BaseModP,
    /// (a4, a6) of the fiber at t = infinity of the twisted minimal model.
    infinity_fiber: Option<(u64, u64)>,
}

enum BaseModP {
    P1,
    Elliptic(CurveFp),
}

pub(crate) fn reduce_rational_mod(r: &Rational, p: u64) -> Result<u64> {
    PolyQ::constant(r.clone())
        .reduce_mod(p)
        .map(|v| v.first().copied().unwrap_or(0))
}

fn eval_poly_mod(coeffs: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

impl SurfaceModP {
    pub fn new(spec: &SurfaceSpec, p: u64) -> Result<Self> {
        if spec.excluded_primes.contains(&p) {
            return Err(Error::ExcludedPrime(p));
        }
        let field = PrimeField::new(p)?;
        if p > ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                p,
                cap: ENUMERATION_CAP,
            });
        }
        let chi = field.character_table();
        let mut cubes = Vec::with_capacity(p as usize);
        for x in 0..p {
            cubes.push(field.mul(field.mul(x, x), x));
        }
        let (base, infinity_fiber) = match &spec.base {
            BaseDescriptor::P1 => {
                let (c4, c6, delta) = weierstrass_invariants(spec)?;
                let (k, _, _, _) = infinity_valuations(&c4, &c6, &delta);
                let a4_inf = reduce_rational_mod(&spec.a4.u.coeff(4 * k as usize), p)?;
                let a6_inf = reduce_rational_mod(&spec.a6.u.coeff(6 * k as usize), p)?;
                (BaseModP::P1, Some((a4_inf, a6_inf)))
            }
            BaseDescriptor::Elliptic { a, b } => {
                let curve = CurveFp::new(
                    field,
                    reduce_rational_mod(a, p)? as i64,
                    reduce_rational_mod(b, p)? as i64,
                )?;
                (BaseModP::Elliptic(curve), None)
            }
        };
        Ok(SurfaceModP {
            field,
            chi,
            cubes,
            a4u: spec.a4.u.reduce_mod(p)?,
            a4v: spec.a4.v.reduce_mod(p)?,
            a6u: spec.a6.u.reduce_mod(p)?,
            a6v: spec.a6.v.reduce_mod(p)?,
            base,
            infinity_fiber,
        })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    fn base_curve(&self) -> Result<&CurveFp> {
        match &self.base {
            BaseModP::Elliptic(curve) => Ok(curve),
            BaseModP::P1 => Err(Error::NoUnramifiedCovers),
        }
    }

    /// Fiber coefficients (a4, a6) over a base point.
    fn fiber_coefficients(&self, point: BasePoint) -> Result<(u64, u64)> {
        let p = self.p();
        match (point, &self.base) {
            (BasePoint::T(t), BaseModP::P1) => {
                if t >= p {
                    return Err(Error::PointOffCurve);
                }
                Ok((eval_poly_mod(&self.a4u, t, p), eval_poly_mod(&self.a6u, t, p)))
            }
            (BasePoint::Infinity, BaseModP::P1) => {
                Ok(self.infinity_fiber.expect("set for rational base"))
            }
            (BasePoint::Point(x, y), BaseModP::Elliptic(curve)) => {
                if !curve.is_on_curve(PointFp::Affine(x, y)) {
                    return Err(Error::PointOffCurve);
                }
                let f = self.field;
                let a4 = f.add(
                    eval_poly_mod(&self.a4u, x, p),
                    f.mul(eval_poly_mod(&self.a4v, x, p), y),
                );
                let a6 = f.add(
                    eval_poly_mod(&self.a6u, x, p),
                    f.mul(eval_poly_mod(&self.a6v, x, p), y),
                );
                Ok((a4, a6))
            }
            _ => Err(Error::PointOffCurve),
        }
    }

    /// p + 1 - #points of the fiber, via the character sum. On a smooth
    /// fiber this is the trace of Frobenius; on a singular one it is the
    /// standard local value the enumeration oracle produces as well: 0 at a
    /// cusp (additive), -1/+1 at a nonsplit/split node (multiplicative).
    fn fiber_value(&self, a4: u64, a6: u64) -> FiberValue {
        let f = self.field;
        let disc = f.add(
            f.mul(4 % f.p(), f.mul(a4, f.mul(a4, a4))),
            f.mul(27 % f.p(), f.mul(a6, a6)),
        );
        let mut sum = 0i64;
        let mut ax = 0u64;
        for x in 0..f.p() {
            sum += i64::from(self.chi[f.add(f.add(self.cubes[x as usize], ax), a6) as usize]);
            ax = f.add(ax, a4);
        }
        if disc == 0 {
            FiberValue::Singular(-sum)
        } else {
            FiberValue::Smooth(-sum)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FiberValue {
    Smooth(i64),
    Singular(i64),
}

impl FiberValue {
    fn contribution(self) -> i64 {
        match self {
            FiberValue::Smooth(a) | FiberValue::Singular(a) => a,
        }
    }
}

/// a_p of the fiber over one base point; singular fibers count as 0.
pub fn fiber_trace(spec: &SurfaceSpec, p: u64, point: BasePoint) -> Result<i64> {
    let surface = SurfaceModP::new(spec, p)?;
    let (a4, a6) = surface.fiber_coefficients(point)?;
    Ok(surface.fiber_value(a4, a6).contribution())
}

/// Exact s_p = sum of a_p over every fiber: all t in F_p plus the fiber at
/// infinity for a rational base, the affine points of C0(F_p) for an
/// elliptic one.
pub fn average_trace(spec: &SurfaceSpec, p: u64) -> Result<TraceRecord> {
    let surface = SurfaceModP::new(spec, p)?;
    let mut s = 0i64;
    let (mut good, mut singular) = (0u64, 0u64);
    let mut tally = |value: FiberValue, weight: u64| {
        match value {
            FiberValue::Smooth(a) => {
                good += weight;
                s += a * weight as i64;
            }
            FiberValue::Singular(a) => {
                singular += weight;
                s += a * weight as i64;
            }
        }
    };
    match &surface.base {
        BaseModP::P1 => {
            for t in 0..p {
                let (a4, a6) = surface.fiber_coefficients(BasePoint::T(t))?;
                tally(surface.fiber_value(a4, a6), 1);
            }
            let (a4, a6) = surface.infinity_fiber.expect("set for rational base");
            tally(surface.fiber_value(a4, a6), 1);
        }
        BaseModP::Elliptic(curve) => {
            if spec.is_x_only() {
                // fibers over (x, y) and (x, -y) agree, so weight by the
                // number of points over each x
                for x in 0..p {
                    let weight = 1 + i64::from(surface.chi[curve.rhs(x) as usize]);
                    if weight == 0 {
                        continue;
                    }
                    let a4 = eval_poly_mod(&surface.a4u, x, p);
                    let a6 = eval_poly_mod(&surface.a6u, x, p);
                    tally(surface.fiber_value(a4, a6), weight as u64);
                }
            } else {
                for point in curve.enumerate_points()? {
                    if let PointFp::Affine(x, y) = point {
                        let (a4, a6) = surface.fiber_coefficients(BasePoint::Point(x, y))?;
                        tally(surface.fiber_value(a4, a6), 1);
                    }
                }
            }
        }
    }
    let record = TraceRecord {
        p,
        s_p: s,
        fibers_good: good,
        fibers_singular: singular,
        fibers_skipped: 0,
    };
    // smooth fibers obey Hasse, singular ones contribute at most 1 each
    debug_assert!(
        record.s_p.unsigned_abs() as f64
            <= 2.0 * (p as f64).sqrt() * record.fibers_good as f64 + record.fibers_singular as f64
    );
    Ok(record)
}

/// Tower scan at level n over an elliptic base: push every affine base point
/// through [n], group by image, evaluate each distinct image fiber once, and
/// weight by the exact preimage count h0 = |C0[n](F_p)|.
///
/// Points mapping to the base origin are skipped (their fiber model may
/// degenerate); there are exactly h0 - 1 of them per prime, within the
/// documented n^2 + 1 allowance.
pub fn tower_average_trace(spec: &SurfaceSpec, n: u32, p: u64) -> Result<TowerTraceRecord> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let surface = SurfaceModP::new(spec, p)?;
    let curve = surface.base_curve()?;
    let points = curve.enumerate_points()?;
    let total = points.len() as u64;

    let mut h0 = 0u64;
    let mut image_counts: HashMap<PointFp, u64> = HashMap::new();
    let mut skipped = 0u64;
    for &point in &points {
        let image = curve.scalar_mul(point, u64::from(n))?;
        if image == PointFp::Infinity {
            h0 += 1;
            if point != PointFp::Infinity {
                skipped += 1;
            }
            continue;
        }
        *image_counts.entry(image).or_insert(0) += 1;
    }
    // first-isomorphism law on the full group, O included on both sides
    let full_image = image_counts.len() as u64 + 1;
    assert_eq!(
        h0 * full_image,
        total,
        "image size times kernel size must equal the group order"
    );
    assert_eq!(skipped, h0 - 1);

    let mut s = 0i64;
    let (mut good, mut singular) = (0u64, 0u64);
    for (&image, &count) in &image_counts {
        assert_eq!(count, h0, "every image fiber has exactly h0 preimages");
        let PointFp::Affine(x, y) = image else {
            unreachable!("origin images were skipped")
        };
        let (a4, a6) = surface.fiber_coefficients(BasePoint::Point(x, y))?;
        match surface.fiber_value(a4, a6) {
            FiberValue::Smooth(a) => {
                good += count;
                s += a * count as i64;
            }
            FiberValue::Singular(a) => {
                singular += count;
                s += a * count as i64;
            }
        }
    }
    Ok(TowerTraceRecord {
        trace: TraceRecord {
            p,
            s_p: s,
            fibers_good: good,
            fibers_singular: singular,
            fibers_skipped: skipped,
        },
        n,
        h0,
        image_size: full_image - 1,
    })
}

/// Independent oracle for the tower scan: the direct double loop, evaluating
/// the fiber over [n]P separately for every affine P with no grouping.
pub fn tower_trace_direct(spec: &SurfaceSpec, n: u32, p: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let surface = SurfaceModP::new(spec, p)?;
    let curve = surface.base_curve()?;
    let mut s = 0i64;
    for point in curve.enumerate_points()? {
        if point == PointFp::Infinity {
            continue;
        }
        let image = curve.scalar_mul(point, u64::from(n))?;
        let PointFp::Affine(x, y) = image else {
            continue;
        };
        let (a4, a6) = surface.fiber_coefficients(BasePoint::Point(x, y))?;
        s += surface.fiber_value(a4, a6).contribution();
    }
    Ok(s)
}

fn level_record(spec: &SurfaceSpec, n: u32, p: u64) -> Result<TowerTraceRecord> {
    if n == 1 {
        let trace = average_trace(spec, p)?;
        let image_size = match spec.base {
            // every base point scanned is its own image under the identity
            BaseDescriptor::P1 => p + 1,
            BaseDescriptor::Elliptic { .. } => trace.fibers_good + trace.fibers_singular,
        };
        Ok(TowerTraceRecord {
            trace,
            n: 1,
            h0: 1,
            image_size,
        })
    } else {
        tower_average_trace(spec, n, p)
    }
}

/// Scan every prime 5 <= p <= pmax outside S at tower level n, using and
/// extending the cache when one is supplied. Records come back sorted by p
/// regardless of the worker count.
pub fn scan(
    spec: &SurfaceSpec,
    n: u32,
    pmax: u64,
    workers: usize,
    mut cache: Option<&mut ScanCache>,
) -> Result<Vec<TowerTraceRecord>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n > 1 && spec.genus() == 0 {
        return Err(Error::NoUnramifiedCovers);
    }
    let primes = spec.scan_primes(pmax.min(ENUMERATION_CAP));
    if pmax > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            p: pmax,
            cap: ENUMERATION_CAP,
        });
    }
    let mut records: Vec<TowerTraceRecord> = Vec::new();
    let mut missing: Vec<u64> = Vec::new();
    for &p in &primes {
        match cache.as_ref().and_then(|c| c.get(n, p)) {
            Some(r) => records.push(r),
            None => missing.push(p),
        }
    }
    let fresh = compute_batch(spec, n, &missing, workers)?;
    if let Some(cache) = cache.as_mut() {
        cache.append(&fresh)?;
    }
    records.extend(fresh);
    records.sort_by_key(TowerTraceRecord::p);
    Ok(records)
}

/// Like [`scan`] but never computes: errors with a cache miss when records
/// are absent.
pub fn scan_cached_only(
    spec: &SurfaceSpec,
    n: u32,
    pmax: u64,
    cache: &ScanCache,
) -> Result<Vec<TowerTraceRecord>> {
    let primes = spec.scan_primes(pmax.min(ENUMERATION_CAP));
    let mut records = Vec::with_capacity(primes.len());
    for p in primes {
        records.push(cache.get(n, p).ok_or(Error::CacheMiss)?);
    }
    Ok(records)
}

fn compute_batch(
    spec: &SurfaceSpec,
    n: u32,
    primes: &[u64],
    workers: usize,
) -> Result<Vec<TowerTraceRecord>> {
    let workers = workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");
    let mut records = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| level_record(spec, n, p))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(TowerTraceRecord::p);
    Ok(records)
}

/// One row of the Deligne-Michel monitor: the amount by which |A_p| sits
/// below (negative slack) or above the conductor bound, rescaled by sqrt p.
#[derive(Debug, Clone)]
pub struct MichelRow {
    pub p: u64,
    pub slack: Fixed,
}

#[derive(Debug, Clone)]
pub struct MichelReport {
    /// |N| + 4g - 4 from the exact conductor.
    pub bound: i64,
    pub rows: Vec<MichelRow>,
    pub max_slack: Option<Fixed>,
}

/// slack(p) = (|s_p| / p - (|N| + 4g - 4)) * sqrt(p) for each scanned prime.
pub fn michel_slack(records: &[TowerTraceRecord], bound: i64) -> MichelReport {
    let mut rows = Vec::with_capacity(records.len());
    let mut max_slack: Option<Fixed> = None;
    for r in records {
        let slack = Fixed::from_ratio(r.trace.s_p.abs(), r.p())
            .sub(&Fixed::from_int(bound))
            .mul(&Fixed::sqrt_u64(r.p()));
        if max_slack.as_ref().is_none_or(|m| slack > *m) {
            max_slack = Some(slack.clone());
        }
        rows.push(MichelRow { p: r.p(), slack });
    }
    MichelReport {
        bound,
        rows,
        max_slack,
    }
}

/// Run (or reuse) a level-1 scan up to pmax and report the slack table.
pub fn michel_bound_scan(
    spec: &SurfaceSpec,
    pmax: u64,
    workers: usize,
    cache: Option<&mut ScanCache>,
) -> Result<MichelReport> {
    let report = conductor(spec)?;
    let records = scan(spec, 1, pmax, workers, cache)?;
    Ok(michel_slack(&records, report.geometric_bound))
}

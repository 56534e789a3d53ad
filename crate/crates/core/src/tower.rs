//! The per-level tower table: orbit estimates, pullback conductors, and the
//! three bounds (measured, Serre-mode, geometric) side by side with the
//! Nagao estimates of the pulled-back surface.

use num_traits::ToPrimitive;

use crate::arith::{divisor_count, rat, Rational};
use crate::error::{Error, Result};
use crate::fixed::Fixed;
use crate::orbits::orbit_average_estimate;
use crate::rank::{nagao_estimate, tower_rank_bound, NagaoForm, OrbitCountMode};
use crate::surface::{conductor_elliptic_base, pullback_conductor, SurfaceSpec};
use crate::trace::{scan, ScanCache};

#[derive(Debug, Clone)]
pub struct TowerRow {
    pub n: u32,
    /// Chebotarev running average of h0, the measured orbit estimate.
    pub orbit_estimate: Rational,
    /// The estimate rounded to the nearest integer orbit count.
    pub measured_orbits: u64,
    pub d_n: u64,
    pub pullback_conductor_degree: u64,
    /// measured_orbits * |N|.
    pub measured_bound: u64,
    /// I * d(n) * |N| when an index bound was supplied.
    pub serre_bound: Option<u64>,
    /// n^2 * |N|: the geometric bound of the pullback (g' = 1).
    pub geometric_bound: u64,
    pub r_n: Fixed,
    pub r_m: Fixed,
}

fn round_to_nearest(r: &Rational) -> u64 {
    let scaled = r + Rational::new(1.into(), 2.into());
    scaled.floor().numer().to_u64().expect("small orbit count")
}

/// Build tower rows for each level in `n_range`, scanning primes up to pmax
/// for both the trace sums and the orbit sampling.
pub fn tower_table(
    spec: &SurfaceSpec,
    n_range: std::ops::RangeInclusive<u32>,
    pmax: u64,
    index_bound: Option<u64>,
    workers: usize,
    mut cache: Option<&mut ScanCache>,
) -> Result<Vec<TowerRow>> {
    if spec.genus() == 0 {
        return Err(Error::NoUnramifiedCovers);
    }
    if *n_range.start() == 0 {
        return Err(Error::ZeroArgument);
    }
    let base_report = conductor_elliptic_base(spec)?;
    let base_degree = base_report.total_degree;
    let mut rows = Vec::new();
    for n in n_range {
        let torsion = orbit_average_estimate(&spec.base, n, pmax)?;
        let measured_orbits = round_to_nearest(&torsion.estimated_orbits).max(1);
        let (pullback_degree, _) = pullback_conductor(&base_report, n)?;
        let measured_bound =
            tower_rank_bound(base_degree, n, &OrbitCountMode::Measured(rat(measured_orbits as i64)))?;
        debug_assert!(measured_bound.is_integer());
        let serre_bound = match index_bound {
            Some(i) => Some(
                tower_rank_bound(base_degree, n, &OrbitCountMode::Serre { index_bound: i })?
                    .to_integer()
                    .to_u64()
                    .expect("bound fits"),
            ),
            None => None,
        };
        let records = scan(spec, n, pmax, workers, cache.as_deref_mut())?;
        rows.push(TowerRow {
            n,
            orbit_estimate: torsion.estimated_orbits,
            measured_orbits,
            d_n: divisor_count(u64::from(n))?,
            pullback_conductor_degree: pullback_degree,
            measured_bound: measured_bound.to_integer().to_u64().expect("bound fits"),
            serre_bound,
            geometric_bound: pullback_degree,
            r_n: nagao_estimate(&records, pmax, NagaoForm::N)?,
            r_m: nagao_estimate(&records, pmax, NagaoForm::M)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{elliptic_base_sample, p1_sample};

    #[test]
    fn level_one_row_has_coinciding_bounds() {
        let s = elliptic_base_sample();
        let rows = tower_table(&s, 1..=1, 60, Some(1), 1, None).unwrap();
        let row = &rows[0];
        assert_eq!(row.orbit_estimate, rat(1));
        assert_eq!(row.measured_bound, 6);
        assert_eq!(row.serre_bound, Some(6));
        assert_eq!(row.geometric_bound, 6);
    }

    #[test]
    fn rational_base_is_rejected() {
        assert!(matches!(
            tower_table(&p1_sample(), 1..=2, 60, None, 1, None),
            Err(Error::NoUnramifiedCovers)
        ));
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_to_nearest(&Rational::new(3.into(), 2.into())), 2);
        assert_eq!(round_to_nearest(&Rational::new(7.into(), 5.into())), 1);
        assert_eq!(round_to_nearest(&rat(2)), 2);
    }
}

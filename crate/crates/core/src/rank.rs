//! Truncated Nagao-style rank estimates and the bounds they are compared
//! against.
//!
//! The residue identity behind the estimator fixes no truncation scheme, so
//! two are reported side by side; their divergence is itself a convergence
//! diagnostic. Accumulation is exact rational per prime with only the final
//! log-weighted fold done in 80-bit fixed point, and every output is a
//! conditional estimate (it equals the rank only under the Tate conjecture).

use crate::arith::{divisor_count, Rational};
use crate::error::{Error, Result};
use crate::fixed::Fixed;
use crate::surface::ConductorReport;
use crate::trace::TowerTraceRecord;

/// Truncation scheme for the Nagao sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NagaoForm {
    /// R_N(X) = (1/X) * sum_{p <= X} -(s_p / p) log p.
    N,
    /// R_M(X) = (1/log X) * sum_{p <= X} -(s_p / p^2) log p.
    M,
}

/// One truncated estimate over the cached records with p <= x.
pub fn nagao_estimate(records: &[TowerTraceRecord], x: u64, form: NagaoForm) -> Result<Fixed> {
    let mut sum = Fixed::zero();
    let mut used = 0usize;
    for r in records.iter().filter(|r| r.p() <= x) {
        let p = r.p();
        let weight = match form {
            NagaoForm::N => Fixed::from_ratio(-r.trace.s_p, p),
            NagaoForm::M => Fixed::from_ratio(-r.trace.s_p, p * p),
        };
        sum = sum.add(&weight.mul(&Fixed::ln_u64(p)));
        used += 1;
    }
    if used == 0 {
        return Err(Error::EmptyScan);
    }
    Ok(match form {
        NagaoForm::N => sum.div_u64(x),
        NagaoForm::M => sum.div(&Fixed::ln_u64(x)),
    })
}

/// The unconditional geometric bound |N| + 4g - 4.
pub fn geometric_bound(report: &ConductorReport) -> i64 {
    report.total_degree as i64 + 4 * i64::from(report.genus) - 4
}

/// How the orbit count entering the tower bound was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitCountMode {
    /// A measured (Chebotarev-sampled or exact) count of Galois orbits on
    /// the n-torsion of the base.
    Measured(Rational),
    /// Serre-mode ceiling: orbits <= I * d(n) for index bound I.
    Serre { index_bound: u64 },
}

/// Rank bound for the pullback along [n] over an elliptic base (g' = 1, so
/// the 4g - 4 term vanishes): (orbits / n^2) * n^2 |N| = orbits * |N| in
/// measured mode, I * d(n) * |N| in Serre mode.
pub fn tower_rank_bound(
    base_conductor_degree: u64,
    n: u32,
    mode: &OrbitCountMode,
) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let conductor = Rational::from_integer(base_conductor_degree.into());
    match mode {
        OrbitCountMode::Measured(orbits) => {
            let n_squared = Rational::from_integer((u64::from(n) * u64::from(n)).into());
            if orbits > &n_squared {
                return Err(Error::OrbitCountTooLarge(orbits.to_string()));
            }
            Ok(orbits * conductor)
        }
        OrbitCountMode::Serre { index_bound } => {
            let d_n = divisor_count(u64::from(n))?;
            Ok(Rational::from_integer((index_bound * d_n).into()) * conductor)
        }
    }
}

/// Soft sanity check against declared sections: at the largest cutoff the
/// estimates should exceed (number of sections) - 0.6.
#[derive(Debug, Clone)]
pub struct SectionCheck {
    pub declared_sections: u64,
    pub r_n_pass: bool,
    pub r_m_pass: bool,
}

#[derive(Debug, Clone)]
pub struct RankRow {
    pub cutoff: u64,
    pub primes_used: usize,
    pub r_n: Fixed,
    pub r_m: Fixed,
}

/// Nagao estimates at increasing cutoffs plus the bounds they sit under.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub rows: Vec<RankRow>,
    pub geometric_bound: i64,
    pub tower_bound: Option<Rational>,
    pub section_lower_bound: Option<u64>,
    pub section_check: Option<SectionCheck>,
}

/// Assemble the report from cached records alone.
pub fn rank_report(
    records: &[TowerTraceRecord],
    cutoffs: &[u64],
    geometric_bound: i64,
    tower_bound: Option<Rational>,
    section_lower_bound: Option<u64>,
) -> Result<RankReport> {
    if cutoffs.is_empty() || cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadCutoffs);
    }
    let mut rows = Vec::with_capacity(cutoffs.len());
    for &x in cutoffs {
        rows.push(RankRow {
            cutoff: x,
            primes_used: records.iter().filter(|r| r.p() <= x).count(),
            r_n: nagao_estimate(records, x, NagaoForm::N)?,
            r_m: nagao_estimate(records, x, NagaoForm::M)?,
        });
    }
    let section_check = section_lower_bound.map(|declared| {
        let threshold = Fixed::from_int(declared as i64).sub(&Fixed::from_ratio(6, 10));
        let last = rows.last().expect("cutoffs nonempty");
        SectionCheck {
            declared_sections: declared,
            r_n_pass: last.r_n > threshold,
            r_m_pass: last.r_m > threshold,
        }
    });
    Ok(RankReport {
        rows,
        geometric_bound,
        tower_bound,
        section_lower_bound,
        section_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{conductor_p1, p1_sample};
    use crate::trace::{scan, TraceRecord};

    fn record(p: u64, s_p: i64) -> TowerTraceRecord {
        TowerTraceRecord {
            trace: TraceRecord {
                p,
                s_p,
                fibers_good: p,
                fibers_singular: 1,
                fibers_skipped: 0,
            },
            n: 1,
            h0: 1,
            image_size: p + 1,
        }
    }

    #[test]
    fn nagao_at_smallest_cutoff_by_hand() {
        // only p = 5 with s_5 = -5: R_N = log 5 / 5, R_M = 1/5 exactly
        let records = [record(5, -5)];
        let r_n = nagao_estimate(&records, 5, NagaoForm::N).unwrap();
        assert_eq!(r_n.to_decimal(), "0.321888");
        let r_m = nagao_estimate(&records, 5, NagaoForm::M).unwrap();
        assert_eq!(r_m.to_decimal(), "0.200000");
    }

    #[test]
    fn nagao_from_real_scan_matches_hand_value() {
        let e1 = p1_sample();
        let records = scan(&e1, 1, 5, 1, None).unwrap();
        assert_eq!(
            nagao_estimate(&records, 5, NagaoForm::M).unwrap().to_decimal(),
            "0.200000"
        );
    }

    #[test]
    fn nagao_edge_cases() {
        let zeros = [record(5, 0), record(7, 0)];
        assert_eq!(
            nagao_estimate(&zeros, 7, NagaoForm::N).unwrap(),
            Fixed::zero()
        );
        assert_eq!(
            nagao_estimate(&zeros, 7, NagaoForm::M).unwrap(),
            Fixed::zero()
        );
        // cutoff below the smallest included prime
        assert!(matches!(
            nagao_estimate(&zeros, 4, NagaoForm::N),
            Err(Error::EmptyScan)
        ));
    }

    #[test]
    fn geometric_bound_examples() {
        let e1 = conductor_p1(&p1_sample()).unwrap();
        assert_eq!(geometric_bound(&e1), 3);
        assert_eq!(e1.geometric_bound, 3);
    }

    #[test]
    fn tower_bound_examples() {
        let measured =
            tower_rank_bound(6, 2, &OrbitCountMode::Measured(crate::arith::rat(2))).unwrap();
        assert_eq!(measured, crate::arith::rat(12));
        // trivial cover gives no gain over the geometric bound
        let trivial =
            tower_rank_bound(6, 1, &OrbitCountMode::Measured(crate::arith::rat(1))).unwrap();
        assert_eq!(trivial, crate::arith::rat(6));
        // Serre mode with I = 1 at n = 6: d(6) = 4, so 24 against geometric 216
        let serre = tower_rank_bound(6, 6, &OrbitCountMode::Serre { index_bound: 1 }).unwrap();
        assert_eq!(serre, crate::arith::rat(24));
        assert!(tower_rank_bound(6, 0, &OrbitCountMode::Serre { index_bound: 1 }).is_err());
        assert!(matches!(
            tower_rank_bound(6, 2, &OrbitCountMode::Measured(crate::arith::rat(5))),
            Err(Error::OrbitCountTooLarge(_))
        ));
    }

    #[test]
    fn bound_ordering_for_valid_orbit_counts() {
        // measured bound <= geometric bound of the pullback whenever the
        // orbit count is at most n^2
        for n in 1..=6u32 {
            for orbits in 1..=(n * n) {
                let measured = tower_rank_bound(
                    6,
                    n,
                    &OrbitCountMode::Measured(crate::arith::rat(i64::from(orbits))),
                )
                .unwrap();
                let geometric = crate::arith::rat(6 * i64::from(n) * i64::from(n));
                assert!(measured <= geometric);
            }
        }
    }

    #[test]
    fn report_rows_are_prefix_stable() {
        let records = [record(5, -5), record(7, -14), record(11, 0), record(13, 26)];
        let full = rank_report(&records, &[5, 11, 13], 3, None, Some(1)).unwrap();
        let prefix = rank_report(&records, &[5, 11], 3, None, Some(1)).unwrap();
        for (a, b) in prefix.rows.iter().zip(&full.rows) {
            assert_eq!(a.cutoff, b.cutoff);
            assert_eq!(a.r_n, b.r_n);
            assert_eq!(a.r_m, b.r_m);
            assert_eq!(a.primes_used, b.primes_used);
        }
        assert!(full.section_check.is_some());
        assert!(matches!(
            rank_report(&records, &[11, 5], 3, None, None),
            Err(Error::BadCutoffs)
        ));
        assert!(matches!(
            rank_report(&records, &[], 3, None, None),
            Err(Error::BadCutoffs)
        ));
    }
}

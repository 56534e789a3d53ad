//! The built-in oracle suite: every fast dual-route check the library
//! carries, run end to end. Any disagreement is an internal assertion
//! failure (exit 4).

use ellrank_core::arith::divisor_count;
use ellrank_core::elliptic::{CurveFp, PrimeField};
use ellrank_core::error::Error;
use ellrank_core::orbits::{gcd_identity_check, glr_orbit_count, FiniteAction, GlMethod};
use ellrank_core::surface::{conductor, elliptic_base_sample, p1_sample};
use ellrank_core::trace::{average_trace, tower_average_trace, tower_trace_direct};

pub fn run() -> Result<(), Error> {
    gl_orbits_vs_divisor_count()?;
    burnside_vs_partition()?;
    trace_vs_naive_count()?;
    grouped_vs_direct_tower()?;
    gcd_identity()?;
    conductor_samples()?;
    println!("selftest: all oracle checks passed");
    Ok(())
}

fn gl_orbits_vs_divisor_count() -> Result<(), Error> {
    let mut checks = 0;
    for n in 1..=10 {
        for r in [1, 2] {
            let brute = glr_orbit_count(n, r, GlMethod::Brute)?;
            assert_eq!(brute, divisor_count(n)?, "gl orbits at n={n} r={r}");
            checks += 1;
        }
    }
    println!("selftest: gl-orbits brute = d(n) ({checks} checks)");
    Ok(())
}

fn burnside_vs_partition() -> Result<(), Error> {
    let mut actions = vec![
        FiniteAction::new(7, vec![(0..7).collect()])?,
        FiniteAction::new(2, vec![vec![0, 1], vec![1, 0]])?,
        FiniteAction::from_generators(5, &[vec![1, 2, 3, 4, 0]])?,
        FiniteAction::from_generators(6, &[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 4, 5, 2]])?,
    ];
    // dihedral-style action on 8 points
    actions.push(FiniteAction::from_generators(
        8,
        &[vec![1, 2, 3, 4, 5, 6, 7, 0], vec![0, 7, 6, 5, 4, 3, 2, 1]],
    )?);
    for action in &actions {
        assert_eq!(
            action.burnside_orbit_count(),
            action.orbit_count_partition(),
            "orbit counts disagree for |G| = {}",
            action.order()
        );
    }
    println!("selftest: burnside = partition ({} actions)", actions.len());
    Ok(())
}

fn trace_vs_naive_count() -> Result<(), Error> {
    let mut checks = 0;
    for p in [5u64, 13, 31, 47] {
        let field = PrimeField::new(p)?;
        for (a4, a6) in [(1i64, 1i64), (-1, 1), (2, 3), (0, 1)] {
            let Ok(curve) = CurveFp::new(field, a4, a6) else {
                continue;
            };
            let mut count = 1u64;
            for x in 0..p {
                for y in 0..p {
                    if field.mul(y, y) == curve.rhs(x) {
                        count += 1;
                    }
                }
            }
            assert_eq!(
                curve.trace_of_frobenius()?,
                p as i64 + 1 - count as i64,
                "trace mismatch at p={p} a4={a4} a6={a6}"
            );
            checks += 1;
        }
    }
    println!("selftest: character-sum trace = naive count ({checks} curves)");
    Ok(())
}

fn grouped_vs_direct_tower() -> Result<(), Error> {
    let spec = elliptic_base_sample();
    let mut checks = 0;
    for n in 1..=4 {
        for p in spec.scan_primes(60) {
            let grouped = tower_average_trace(&spec, n, p)?;
            assert_eq!(
                grouped.trace.s_p,
                tower_trace_direct(&spec, n, p)?,
                "tower mismatch at n={n} p={p}"
            );
            checks += 1;
        }
    }
    println!("selftest: grouped tower = direct double loop ({checks} pairs)");
    Ok(())
}

fn gcd_identity() -> Result<(), Error> {
    for n in 1..=500 {
        assert!(gcd_identity_check(n)?.equal, "gcd identity failed at n={n}");
    }
    println!("selftest: gcd identity holds (n <= 500)");
    Ok(())
}

fn conductor_samples() -> Result<(), Error> {
    let e1 = p1_sample();
    assert_eq!(conductor(&e1)?.total_degree, 7);
    assert_eq!(average_trace(&e1, 5)?.s_p, -5);
    let eb = elliptic_base_sample();
    assert_eq!(conductor(&eb)?.total_degree, 6);
    println!("selftest: sample conductors and s_5 reproduced");
    Ok(())
}

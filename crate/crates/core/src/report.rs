//! Deterministic rendering of reports as aligned text tables, CSV, and JSON.
//!
//! Cells derived from exact integers print exactly; every decimal gets the
//! fixed 6-digit rendering, so identical inputs give byte-identical output
//! whatever produced them.

use serde::Serialize;

use crate::arith::PolyQ;
use crate::fixed::decimal6;
use crate::rank::RankReport;
use crate::surface::{ConductorReport, SurfaceSpec};
use crate::tower::TowerRow;
use crate::trace::{MichelReport, TowerTraceRecord};
use crate::orbits::TorsionActionReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(OutputFormat::Table),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected table, csv, or json)")),
        }
    }
}

fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    emit(
        &mut out,
        &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
    );
    for row in rows {
        emit(&mut out, row);
    }
    out
}

fn render_csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_string(value: &impl Serialize) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serialization");
    out.push('\n');
    out
}

fn poly_strings(p: &PolyQ) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

// ---------------------------------------------------------------------------
// Conductor
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PlaceJson {
    location: String,
    degree: u64,
    reduction: &'static str,
    exponent: u64,
}

#[derive(Serialize)]
struct LociJson {
    mult: Vec<String>,
    add: Vec<String>,
    mult_on_g: Vec<String>,
    add_on_g: Vec<String>,
}

#[derive(Serialize)]
struct ConductorJson {
    surface: String,
    genus: u32,
    excluded_primes: Vec<u64>,
    places: Vec<PlaceJson>,
    total_degree: u64,
    geometric_bound: i64,
    affine_loci: LociJson,
}

fn conductor_places(report: &ConductorReport) -> Vec<PlaceJson> {
    let mut places: Vec<PlaceJson> = report
        .affine_places
        .iter()
        .map(|p| PlaceJson {
            location: "affine".into(),
            degree: p.degree,
            reduction: p.reduction.label(),
            exponent: p.reduction.exponent(),
        })
        .collect();
    if let Some(inf) = &report.infinity_place {
        places.push(PlaceJson {
            location: "infinity".into(),
            degree: inf.degree,
            reduction: inf.reduction.label(),
            exponent: inf.reduction.exponent(),
        });
    }
    places
}

pub fn render_conductor(
    spec: &SurfaceSpec,
    report: &ConductorReport,
    format: OutputFormat,
) -> String {
    let places = conductor_places(report);
    match format {
        OutputFormat::Json => json_string(&ConductorJson {
            surface: spec.name.clone(),
            genus: report.genus,
            excluded_primes: spec.excluded_primes.iter().copied().collect(),
            places,
            total_degree: report.total_degree,
            geometric_bound: report.geometric_bound,
            affine_loci: LociJson {
                mult: poly_strings(&report.loci.mult),
                add: poly_strings(&report.loci.add),
                mult_on_g: poly_strings(&report.loci.mult_on_g),
                add_on_g: poly_strings(&report.loci.add_on_g),
            },
        }),
        OutputFormat::Csv => render_csv(
            &["location", "degree", "reduction", "exponent"],
            &places
                .iter()
                .map(|p| {
                    vec![
                        p.location.clone(),
                        p.degree.to_string(),
                        p.reduction.to_string(),
                        p.exponent.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = places
                .iter()
                .map(|p| {
                    vec![
                        p.location.clone(),
                        p.degree.to_string(),
                        p.reduction.to_string(),
                        p.exponent.to_string(),
                    ]
                })
                .collect();
            let mut out = format!("surface: {} (genus {})\n", spec.name, report.genus);
            out.push_str(&render_table(
                &["location", "degree", "reduction", "exponent"],
                &rows,
            ));
            out.push_str(&format!("conductor degree |N| = {}\n", report.total_degree));
            out.push_str(&format!(
                "geometric bound |N| + 4g - 4 = {}\n",
                report.geometric_bound
            ));
            out.push_str(&format!(
                "excluded primes S = {{{}}}\n",
                spec.excluded_primes
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Trace scans
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ScanRowJson {
    p: u64,
    n: u32,
    s_p: i64,
    a_p_avg: String,
    fibers_good: u64,
    fibers_singular: u64,
    fibers_skipped: u64,
    h0: u64,
    image_size: u64,
}

#[derive(Serialize)]
struct ScanJson {
    surface: String,
    rows: Vec<ScanRowJson>,
    michel_bound: Option<i64>,
    michel_max_slack: Option<String>,
}

fn scan_rows(records: &[TowerTraceRecord]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            vec![
                r.p().to_string(),
                r.n.to_string(),
                r.trace.s_p.to_string(),
                decimal6(&crate::arith::Rational::new(
                    r.trace.s_p.into(),
                    (r.p() as i64).into(),
                )),
                r.trace.fibers_good.to_string(),
                r.trace.fibers_singular.to_string(),
                r.trace.fibers_skipped.to_string(),
                r.h0.to_string(),
                r.image_size.to_string(),
            ]
        })
        .collect()
}

const SCAN_HEADERS: [&str; 9] = [
    "p", "n", "s_p", "A_p", "good", "sing", "skip", "h0", "image",
];

pub fn render_scan(
    spec: &SurfaceSpec,
    records: &[TowerTraceRecord],
    michel: Option<&MichelReport>,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Json => json_string(&ScanJson {
            surface: spec.name.clone(),
            rows: records
                .iter()
                .map(|r| ScanRowJson {
                    p: r.p(),
                    n: r.n,
                    s_p: r.trace.s_p,
                    a_p_avg: decimal6(&crate::arith::Rational::new(
                        r.trace.s_p.into(),
                        (r.p() as i64).into(),
                    )),
                    fibers_good: r.trace.fibers_good,
                    fibers_singular: r.trace.fibers_singular,
                    fibers_skipped: r.trace.fibers_skipped,
                    h0: r.h0,
                    image_size: r.image_size,
                })
                .collect(),
            michel_bound: michel.map(|m| m.bound),
            michel_max_slack: michel
                .and_then(|m| m.max_slack.as_ref())
                .map(|s| s.to_decimal()),
        }),
        OutputFormat::Csv => render_csv(&SCAN_HEADERS, &scan_rows(records)),
        OutputFormat::Table => {
            let mut out = format!("surface: {}\n", spec.name);
            out.push_str(&render_table(&SCAN_HEADERS, &scan_rows(records)));
            if let Some(m) = michel {
                out.push_str(&format!("deligne-michel bound |N| + 4g - 4 = {}\n", m.bound));
                if let Some(max) = &m.max_slack {
                    out.push_str(&format!(
                        "max slack (|A_p| - bound) * sqrt(p) = {}\n",
                        max.to_decimal()
                    ));
                }
            }
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Rank reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RankRowJson {
    cutoff: u64,
    primes_used: usize,
    r_n: String,
    r_m: String,
}

#[derive(Serialize)]
struct SectionCheckJson {
    declared_sections: u64,
    threshold_slack: &'static str,
    r_n_pass: bool,
    r_m_pass: bool,
}

#[derive(Serialize)]
struct RankJson {
    surface: String,
    note: &'static str,
    rows: Vec<RankRowJson>,
    geometric_bound: i64,
    tower_bound: Option<String>,
    section_lower_bound: Option<u64>,
    section_check: Option<SectionCheckJson>,
}

const CONDITIONAL_NOTE: &str = "conditional estimate (assumes the Tate conjecture)";

pub fn render_rank(spec: &SurfaceSpec, report: &RankReport, format: OutputFormat) -> String {
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.cutoff.to_string(),
                r.primes_used.to_string(),
                r.r_n.to_decimal(),
                r.r_m.to_decimal(),
            ]
        })
        .collect();
    match format {
        OutputFormat::Json => json_string(&RankJson {
            surface: spec.name.clone(),
            note: CONDITIONAL_NOTE,
            rows: report
                .rows
                .iter()
                .map(|r| RankRowJson {
                    cutoff: r.cutoff,
                    primes_used: r.primes_used,
                    r_n: r.r_n.to_decimal(),
                    r_m: r.r_m.to_decimal(),
                })
                .collect(),
            geometric_bound: report.geometric_bound,
            tower_bound: report.tower_bound.as_ref().map(decimal6),
            section_lower_bound: report.section_lower_bound,
            section_check: report.section_check.as_ref().map(|c| SectionCheckJson {
                declared_sections: c.declared_sections,
                threshold_slack: "0.6",
                r_n_pass: c.r_n_pass,
                r_m_pass: c.r_m_pass,
            }),
        }),
        OutputFormat::Csv => render_csv(&["X", "primes", "R_N", "R_M"], &rows),
        OutputFormat::Table => {
            let mut out = format!("surface: {} ({})\n", spec.name, CONDITIONAL_NOTE);
            out.push_str(&render_table(&["X", "primes", "R_N", "R_M"], &rows));
            out.push_str(&format!("geometric bound = {}\n", report.geometric_bound));
            if let Some(tower) = &report.tower_bound {
                out.push_str(&format!("tower bound = {}\n", decimal6(tower)));
            }
            if let Some(declared) = report.section_lower_bound {
                out.push_str(&format!("declared sections (verified) = {declared}\n"));
            }
            if let Some(check) = &report.section_check {
                out.push_str(&format!(
                    "section soft check (> sections - 0.6): R_N {} R_M {}\n",
                    pass(check.r_n_pass),
                    pass(check.r_m_pass)
                ));
            }
            out
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

// ---------------------------------------------------------------------------
// Tower tables
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TowerRowJson {
    n: u32,
    orbit_estimate: String,
    measured_orbits: u64,
    d_n: u64,
    pullback_conductor: u64,
    measured_bound: u64,
    serre_bound: Option<u64>,
    geometric_bound: u64,
    r_n: String,
    r_m: String,
}

#[derive(Serialize)]
struct TowerJson {
    surface: String,
    note: &'static str,
    rows: Vec<TowerRowJson>,
}

const TOWER_HEADERS: [&str; 10] = [
    "n",
    "orbits~",
    "orbits",
    "d(n)",
    "|N(E_n)|",
    "measured",
    "serre",
    "geometric",
    "R_N",
    "R_M",
];

pub fn render_tower(spec: &SurfaceSpec, rows: &[TowerRow], format: OutputFormat) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                decimal6(&r.orbit_estimate),
                r.measured_orbits.to_string(),
                r.d_n.to_string(),
                r.pullback_conductor_degree.to_string(),
                r.measured_bound.to_string(),
                r.serre_bound.map_or_else(|| "-".into(), |b| b.to_string()),
                r.geometric_bound.to_string(),
                r.r_n.to_decimal(),
                r.r_m.to_decimal(),
            ]
        })
        .collect();
    match format {
        OutputFormat::Json => json_string(&TowerJson {
            surface: spec.name.clone(),
            note: CONDITIONAL_NOTE,
            rows: rows
                .iter()
                .map(|r| TowerRowJson {
                    n: r.n,
                    orbit_estimate: decimal6(&r.orbit_estimate),
                    measured_orbits: r.measured_orbits,
                    d_n: r.d_n,
                    pullback_conductor: r.pullback_conductor_degree,
                    measured_bound: r.measured_bound,
                    serre_bound: r.serre_bound,
                    geometric_bound: r.geometric_bound,
                    r_n: r.r_n.to_decimal(),
                    r_m: r.r_m.to_decimal(),
                })
                .collect(),
        }),
        OutputFormat::Csv => render_csv(&TOWER_HEADERS, &cells),
        OutputFormat::Table => {
            let mut out = format!("surface: {} ({})\n", spec.name, CONDITIONAL_NOTE);
            out.push_str(&render_table(&TOWER_HEADERS, &cells));
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Torsion sampling
// ---------------------------------------------------------------------------

pub fn render_torsion_csv(report: &TorsionActionReport) -> String {
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.p.to_string(),
                r.h0.to_string(),
                r.image_size.to_string(),
                decimal6(&r.running_average),
            ]
        })
        .collect();
    render_csv(&["p", "h0", "image_size", "running_average"], &rows)
}

#[derive(Serialize)]
struct TorsionJson {
    n: u32,
    samples: usize,
    estimated_orbits: String,
    rows: Vec<TorsionRowJson>,
}

#[derive(Serialize)]
struct TorsionRowJson {
    p: u64,
    h0: u64,
    image_size: u64,
    b_size: u64,
    running_average: String,
}

pub fn render_torsion(report: &TorsionActionReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_torsion_csv(report),
        OutputFormat::Json => json_string(&TorsionJson {
            n: report.n,
            samples: report.samples,
            estimated_orbits: decimal6(&report.estimated_orbits),
            rows: report
                .rows
                .iter()
                .map(|r| TorsionRowJson {
                    p: r.p,
                    h0: r.h0,
                    image_size: r.image_size,
                    b_size: r.b_size,
                    running_average: decimal6(&r.running_average),
                })
                .collect(),
        }),
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.p.to_string(),
                        r.h0.to_string(),
                        r.image_size.to_string(),
                        r.b_size.to_string(),
                        decimal6(&r.running_average),
                    ]
                })
                .collect();
            let mut out = render_table(&["p", "h0", "image", "|B|", "running_avg"], &rows);
            out.push_str(&format!(
                "estimated orbits over {} samples = {}\n",
                report.samples,
                decimal6(&report.estimated_orbits)
            ));
            out
        }
    }
}

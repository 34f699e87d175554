//! Report envelopes and text rendering. Every command wraps its result
//! in the same envelope (schema tag, tool version, command, inputs,
//! results) with a fixed field order, so identical inputs produce
//! byte-identical JSON.

use fermat_crystal::{
    CrystalSummary, DieudonnePresentation, QuotientSummary, Sigma0Trace, SlopeCheckReport,
    SupersingularReason,
};
use serde::Serialize;

pub const SCHEMA: &str = "fermat-report/v1";

#[derive(Serialize)]
pub struct ReportEnvelope<T: Serialize> {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Inputs,
    pub results: T,
}

#[derive(Default, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<[u64; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_q_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expand_disc: Option<bool>,
}

pub fn envelope<T: Serialize>(
    command: &'static str,
    inputs: Inputs,
    results: T,
) -> ReportEnvelope<T> {
    ReportEnvelope {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        command,
        inputs,
        results,
    }
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub summary: CrystalSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_expanded: Option<String>,
}

#[derive(Serialize)]
pub struct Sigma0Report {
    pub tau: Vec<u8>,
    pub trace: Sigma0Trace,
}

#[derive(Serialize)]
pub struct DieudonneReport {
    pub tau: Vec<u8>,
    pub presentation: DieudonnePresentation,
    pub rendered: String,
}

fn reason_text(reason: &SupersingularReason) -> String {
    match reason {
        SupersingularReason::MinusOneShortcut => {
            "-1 lies in the subgroup generated by p mod m".into()
        }
        SupersingularReason::SlopesAllOne => "every Newton slope equals 1".into(),
        SupersingularReason::SlopeObstruction { base, slope } => {
            format!("orbit of {base} has slope {slope}")
        }
    }
}

pub fn render_analyze(out: &mut impl std::io::Write, r: &AnalyzeReport) -> std::io::Result<()> {
    let s = &r.summary;
    writeln!(out, "Fermat surface: degree m = {}, characteristic p = {}", s.m, s.p)?;
    writeln!(out)?;
    writeln!(out, "  b2             = {}", s.b2)?;
    writeln!(
        out,
        "  hodge numbers  = ({}, {}, {})",
        s.hodge.h20, s.hodge.h11, s.hodge.h02
    )?;
    writeln!(out, "  newton slopes  = {}", s.newton)?;
    writeln!(
        out,
        "  supersingular  = {} ({})",
        if s.supersingular { "yes" } else { "no" },
        reason_text(&s.reason)
    )?;
    match s.sigma0 {
        Some(v) => writeln!(out, "  sigma0         = {v}")?,
        None => writeln!(out, "  sigma0         = (absent: not supersingular)")?,
    }
    match s.disc() {
        Some(d) => writeln!(out, "  disc NS        = {d}")?,
        None => writeln!(out, "  disc NS        = (absent: not supersingular)")?,
    }
    if let Some(expanded) = &r.disc_expanded {
        writeln!(out, "  disc NS value  = {expanded}")?;
    }
    writeln!(out)?;
    writeln!(out, "  orbits ({}): base | tau sequence", s.orbits.len())?;
    for o in &s.orbits {
        let base = o
            .base()
            .map(|b| b.to_string())
            .unwrap_or_else(|| "-".into());
        writeln!(out, "    {base} | {}", fmt_degrees(o.degrees()))?;
    }
    Ok(())
}

pub fn render_sigma0(out: &mut impl std::io::Write, r: &Sigma0Report) -> std::io::Result<()> {
    writeln!(out, "tau sequence  : {}", fmt_degrees(&r.tau))?;
    writeln!(
        out,
        "partial sums  : ({})",
        r.trace
            .partial_sums
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )?;
    writeln!(out, "shift n       : {}", r.trace.shift_n)?;
    writeln!(
        out,
        "exponents m   : ({})",
        r.trace
            .exponents_m
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )?;
    writeln!(out, "contribution  : {}", r.trace.contribution)?;
    Ok(())
}

pub fn render_dieudonne(out: &mut impl std::io::Write, r: &DieudonneReport) -> std::io::Result<()> {
    writeln!(out, "tau sequence : {}", fmt_degrees(&r.tau))?;
    writeln!(out, "presentation : {}", r.rendered)?;
    writeln!(out, "dimension    : {}", r.presentation.dimension)?;
    Ok(())
}

pub fn render_quotient(out: &mut impl std::io::Write, q: &QuotientSummary) -> std::io::Result<()> {
    writeln!(
        out,
        "Quotient analysis: degree m = {}, characteristic p = {}",
        q.m, q.p
    )?;
    let gens: Vec<String> = q
        .subgroup
        .iter()
        .map(|g| format!("({},{},{},{})", g[0], g[1], g[2], g[3]))
        .collect();
    writeln!(
        out,
        "  subgroup generators    = {}",
        if gens.is_empty() {
            "(trivial)".into()
        } else {
            gens.join("; ")
        }
    )?;
    writeln!(out, "  invariant characters   = {}", q.invariant_count)?;
    writeln!(
        out,
        "  hodge numbers          = ({}, {}, {})",
        q.hodge.h20, q.hodge.h11, q.hodge.h02
    )?;
    writeln!(out, "  newton slopes          = {}", q.newton)?;
    writeln!(
        out,
        "  all slopes one         = {}",
        if q.all_slopes_one { "yes" } else { "no" }
    )?;
    match q.sigma0_invariant_part {
        Some(v) => writeln!(out, "  sigma0 (invariant part)= {v}")?,
        None => writeln!(out, "  sigma0 (invariant part)= (absent: slopes differ from 1)")?,
    }
    writeln!(out, "  exceptional lattice    = {}", q.exceptional_lattice)?;
    writeln!(out)?;
    writeln!(out, "  orbits ({}): base | tau sequence", q.orbits.len())?;
    for o in &q.orbits {
        let base = o
            .base()
            .map(|b| b.to_string())
            .unwrap_or_else(|| "-".into());
        writeln!(out, "    {base} | {}", fmt_degrees(o.degrees()))?;
    }
    Ok(())
}

pub fn render_jacobi(out: &mut impl std::io::Write, r: &SlopeCheckReport) -> std::io::Result<()> {
    writeln!(
        out,
        "Jacobi slope check: m = {}, p = {}, f = {}, q = {}",
        r.m, r.p, r.f, r.q
    )?;
    writeln!(
        out,
        "  {:<14} {:>6} {:>14} {:>12} {:>10}  {}",
        "orbit base", "length", "slope", "expected v", "measured v", "pass"
    )?;
    for e in &r.entries {
        writeln!(
            out,
            "  {:<14} {:>6} {:>14} {:>12} {:>10}  {}",
            e.orbit_base.to_string(),
            e.orbit_length,
            e.expected_slope.to_string(),
            e.expected_valuation,
            e.measured_valuation,
            if e.pass { "ok" } else { "FAIL" }
        )?;
    }
    writeln!(
        out,
        "  overall: {}",
        if r.all_pass { "all pass" } else { "FAILURES" }
    )?;
    Ok(())
}

fn fmt_degrees(d: &[u8]) -> String {
    let inner: Vec<String> = d.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

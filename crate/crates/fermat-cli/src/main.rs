//! Command-line reports for Fermat surface crystal invariants.
//!
//! Exit codes: 0 on completed computations (a "not supersingular"
//! verdict is still a completed computation), 1 on domain errors
//! (non-coprime inputs, caps, unsupported orbits), 2 on usage errors.

mod report;

use clap::{Args, Parser, Subcommand};
use fermat_crystal::{
    analyze_capped, analyze_quotient, formal_group_presentation, sigma0_trace,
    slope_check_capped, Modulus, DEFAULT_MAX_M, DEFAULT_Q_CAP,
};
use report::{envelope, AnalyzeReport, DieudonneReport, Inputs, Sigma0Report};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "fermat",
    version,
    about = "Crystal invariants of Fermat surfaces: orbits, Newton polygons, sigma0, disc(NS), formal groups, and a Jacobi-sum slope oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one (m, p) pair
    Analyze(AnalyzeArgs),
    /// Operations on a single orbit given by its tau sequence
    #[command(subcommand)]
    Orbit(OrbitCommand),
    /// Analysis of the subgroup-invariant part (quotient surface)
    Quotient(QuotientArgs),
    /// Independent verification oracles
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Degree of the Fermat surface
    #[arg(long)]
    m: u64,
    /// Characteristic (coprime to m)
    #[arg(long)]
    p: u64,
    /// Render the discriminant as a full integer
    #[arg(long)]
    expand_disc: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum OrbitCommand {
    /// Trace the sigma0 computation on one orbit
    Sigma0(OrbitArgs),
    /// Dieudonne presentation of the orbit's formal group
    Dieudonne(OrbitArgs),
}

#[derive(Args)]
struct OrbitArgs {
    /// Comma-separated tau sequence, entries in {0,1,2}
    #[arg(long, value_parser = parse_tau_list)]
    tau: TauList,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QuotientArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    p: u64,
    /// Semicolon-separated subgroup generators, each a comma-separated
    /// 4-tuple, e.g. "1,2,0,0;0,1,2,0"
    #[arg(long, value_parser = parse_subgroup, default_value = "")]
    subgroup: Subgroup,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare p-adic valuations of Jacobi sums with crystal slopes
    Jacobi(JacobiArgs),
}

#[derive(Args)]
struct JacobiArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    p: u64,
    /// Cap on the oracle field size q = p^f
    #[arg(long, default_value_t = DEFAULT_Q_CAP)]
    oracle_q_cap: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CommonArgs {
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Override the enumeration cap on m
    #[arg(long, default_value_t = DEFAULT_MAX_M)]
    max_m: u64,
}

#[derive(Clone)]
struct TauList(Vec<u8>);

fn parse_tau_list(s: &str) -> Result<TauList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let v: u8 = part
            .trim()
            .parse()
            .map_err(|_| format!("'{part}' is not an integer"))?;
        if v > 2 {
            return Err(format!("tau value {v} is outside {{0,1,2}}"));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err("tau sequence must be non-empty".into());
    }
    Ok(TauList(out))
}

#[derive(Clone)]
struct Subgroup(Vec<[i64; 4]>);

fn parse_subgroup(s: &str) -> Result<Subgroup, String> {
    let mut gens = Vec::new();
    for chunk in s.split(';') {
        if chunk.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = chunk.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("generator '{chunk}' is not a 4-tuple"));
        }
        let mut tuple = [0i64; 4];
        for (slot, part) in tuple.iter_mut().zip(parts) {
            *slot = part
                .trim()
                .parse()
                .map_err(|_| format!("'{part}' is not an integer"))?;
        }
        gens.push(tuple);
    }
    Ok(Subgroup(gens))
}

fn emit<T: Serialize>(
    json: bool,
    report: &report::ReportEnvelope<T>,
    text: impl FnOnce(&mut std::io::StdoutLock<'static>) -> std::io::Result<()>,
) {
    let mut stdout = std::io::stdout().lock();
    if json {
        let rendered = serde_json::to_string_pretty(report).expect("reports serialize");
        use std::io::Write;
        writeln!(stdout, "{rendered}").expect("stdout is writable");
    } else {
        text(&mut stdout).expect("stdout is writable");
    }
}

fn run(cli: Cli) -> fermat_crystal::Result<()> {
    match cli.command {
        Command::Analyze(args) => {
            let m = Modulus::new(args.m)?;
            let summary = analyze_capped(m, args.p, args.common.max_m)?;
            let disc_expanded = if args.expand_disc {
                summary.disc().map(|d| d.expanded().to_string())
            } else {
                None
            };
            let results = AnalyzeReport {
                summary,
                disc_expanded,
            };
            let inputs = Inputs {
                m: Some(args.m),
                p: Some(args.p),
                max_m: Some(args.common.max_m),
                expand_disc: Some(args.expand_disc),
                ..Inputs::default()
            };
            let env = envelope("analyze", inputs, results);
            emit(args.common.json, &env, |out| {
                report::render_analyze(out, &env.results)
            });
        }
        Command::Orbit(OrbitCommand::Sigma0(args)) => {
            let trace = sigma0_trace(&args.tau.0, 1)?;
            let results = Sigma0Report {
                tau: args.tau.0.clone(),
                trace,
            };
            let inputs = Inputs {
                tau: Some(args.tau.0.clone()),
                ..Inputs::default()
            };
            let env = envelope("orbit sigma0", inputs, results);
            emit(args.json, &env, |out| {
                report::render_sigma0(out, &env.results)
            });
        }
        Command::Orbit(OrbitCommand::Dieudonne(args)) => {
            let presentation = formal_group_presentation(&args.tau.0)?;
            let rendered = presentation.to_string();
            let results = DieudonneReport {
                tau: args.tau.0.clone(),
                presentation,
                rendered,
            };
            let inputs = Inputs {
                tau: Some(args.tau.0.clone()),
                ..Inputs::default()
            };
            let env = envelope("orbit dieudonne", inputs, results);
            emit(args.json, &env, |out| {
                report::render_dieudonne(out, &env.results)
            });
        }
        Command::Quotient(args) => {
            let m = Modulus::new(args.m)?;
            let md = args.m as i64;
            let generators: Vec<[u64; 4]> = args
                .subgroup
                .0
                .iter()
                .map(|g| {
                    let mut out = [0u64; 4];
                    for (slot, &v) in out.iter_mut().zip(g.iter()) {
                        *slot = v.rem_euclid(md) as u64;
                    }
                    out
                })
                .collect();
            let results = analyze_quotient(m, args.p, &generators, args.common.max_m)?;
            let inputs = Inputs {
                m: Some(args.m),
                p: Some(args.p),
                subgroup: Some(generators),
                max_m: Some(args.common.max_m),
                ..Inputs::default()
            };
            let env = envelope("quotient", inputs, results);
            emit(args.common.json, &env, |out| {
                report::render_quotient(out, &env.results)
            });
        }
        Command::Oracle(OracleCommand::Jacobi(args)) => {
            let m = Modulus::new(args.m)?;
            let results = slope_check_capped(m, args.p, args.oracle_q_cap)?;
            let inputs = Inputs {
                m: Some(args.m),
                p: Some(args.p),
                oracle_q_cap: Some(args.oracle_q_cap),
                ..Inputs::default()
            };
            let env = envelope("oracle jacobi", inputs, results);
            emit(args.json, &env, |out| {
                report::render_jacobi(out, &env.results)
            });
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

//! Command-line front end. [`run`] takes parsed arguments and returns the
//! exit code together with everything written to stdout, so the binary and
//! the tests share one code path.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cohomology::{cohomology, required_cap};
use crate::distribution::{regularity_scan, symbol_algebra, Distribution, DistributionJob, RegularityReport};
use crate::error::{Error, Result};
use crate::expr::{parse_fields, parse_pfaff};
use crate::graded_lie::{builtin, derivations_of_degree, orthogonal, DerivationSubalgebra, GradedLieAlgebra};
use crate::prolong::{build_components, build_tower, derived_series_report};
use crate::verify::{verify_contact, verify_engel, Suite};

#[derive(Debug, Parser)]
#[command(name = "nhcurv", version, about = "Exact structure functions of nonholonomic distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Growth vectors on sample points and the symbol algebra.
    Symbol {
        #[command(flatten)]
        input: Input,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Graded prolongation (g_-, g_0)_* up to a cap.
    Prolong {
        #[command(flatten)]
        input: Input,
        /// `der` (all degree-0 derivations), `o`, `gl`, or a derivations JSON file.
        #[arg(long, default_value = "der")]
        g0: String,
        /// Highest degree to prolong to.
        #[arg(long, default_value_t = 6)]
        cap: i32,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// H^s(g_-; tower) split by order.
    Cohomology {
        #[command(flatten)]
        input: Input,
        /// `der` (all degree-0 derivations), `o`, `gl`, or a derivations JSON file.
        #[arg(long, default_value = "der")]
        g0: String,
        /// Cochain degree.
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// `LO..HI`; defaults to `2-d..6`.
        #[arg(long, allow_hyphen_values = true)]
        orders: Option<String>,
        /// Defaults to the smallest sufficient cap.
        #[arg(long)]
        cap: Option<i32>,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Engel expectation suite; exits nonzero when any expectation fails.
    VerifyEngel {
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Contact expectation suite for heis(r); exits nonzero on failure.
    VerifyContact {
        /// Rank of the contact distribution, heis(r) has dimension 2r + 1.
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Defaults to `0..6` for r = 1 and `0..4` otherwise.
        #[arg(long, allow_hyphen_values = true)]
        orders: Option<String>,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reports whether every structure function vanishes in the scanned range.
    FlatCheck {
        #[command(flatten)]
        input: Input,
        /// `der` (all degree-0 derivations), `o`, `gl`, or a derivations JSON file.
        #[arg(long, default_value = "der")]
        g0: String,
        /// `LO..HI`; defaults to `2-d..6`.
        #[arg(long, allow_hyphen_values = true)]
        orders: Option<String>,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Where the symbol algebra comes from; exactly one source is allowed.
#[derive(Debug, Args, Default)]
pub struct Input {
    /// `abelian:N`, `heisenberg:R` (or `heis:R`), `engel`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Algebra JSON file.
    #[arg(long)]
    pub algebra: Option<PathBuf>,
    /// Distribution job JSON file.
    #[arg(long)]
    pub job: Option<PathBuf>,
    /// Pfaff system, forms separated by `;`.
    #[arg(long)]
    pub pfaff: Option<String>,
    /// Spanning fields, separated by `;`.
    #[arg(long)]
    pub fields: Option<String>,
    /// Sample points `(..);(..)` for distribution input.
    #[arg(long)]
    pub points: Option<String>,
}

/// Exit code plus stdout text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Parses `LO..HI` (either bound may be negative).
pub fn parse_orders(s: &str) -> Result<(i32, i32)> {
    let bad = || Error::InvalidParams(format!("order range {s:?} is not LO..HI"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let lo: i32 = a.trim().parse().map_err(|_| bad())?;
    let hi: i32 = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Resolved symbol algebra plus, for distribution input, the regularity scan.
/// An irregular scan is appended to `out` before the error is returned.
fn resolve(input: &Input, out: &mut String) -> Result<(GradedLieAlgebra, Option<RegularityReport>)> {
    let sources = [
        input.builtin.is_some(),
        input.algebra.is_some(),
        input.job.is_some(),
        input.pfaff.is_some(),
        input.fields.is_some(),
    ];
    match sources.iter().filter(|&&b| b).count() {
        0 => return Err(Error::InvalidParams("give one of --builtin, --algebra, --job, --pfaff, --fields".into())),
        1 => {}
        _ => return Err(Error::InvalidParams("give only one input source".into())),
    }
    if let Some(b) = &input.builtin {
        return Ok((builtin(b)?, None));
    }
    if let Some(p) = &input.algebra {
        return Ok((GradedLieAlgebra::from_json_str(&read(p)?)?, None));
    }
    let mut job = match &input.job {
        Some(p) => DistributionJob::from_json_str(&read(p)?)?,
        None => DistributionJob::default(),
    };
    if input.points.is_some() {
        job.points = input.points.clone();
    }
    let dist = if let Some(p) = &input.pfaff {
        Distribution::from_pfaff(&parse_pfaff(p, None)?)?
    } else if let Some(f) = &input.fields {
        Distribution::from_fields(parse_fields(f, None)?)?
    } else {
        job.distribution()?
    };
    let points = job.points(dist.n_vars())?;
    let scan = regularity_scan(&dist, &points)?;
    if !scan.regular() {
        out.push_str(&scan.to_text());
        return Err(Error::Irregular("growth vectors differ across the sample".into()));
    }
    let algebra = symbol_algebra(&dist, &points[0])?;
    Ok((algebra, Some(scan)))
}

fn resolve_g0(g: &GradedLieAlgebra, spec: &str) -> Result<DerivationSubalgebra> {
    match spec {
        "der" => Ok(derivations_of_degree(g, 0)),
        "o" => orthogonal(g),
        "gl" => {
            if g.depth() != 1 || !g.is_abelian() {
                return Err(Error::NotDepthOne);
            }
            Ok(derivations_of_degree(g, 0))
        }
        path => DerivationSubalgebra::from_json_str(g, &read(Path::new(path))?),
    }
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    if let Some(p) = path {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        std::fs::write(p, s)?;
    }
    Ok(())
}

pub fn algebra_text(g: &GradedLieAlgebra) -> String {
    let mut s = String::new();
    let basis: Vec<String> = (0..g.dim()).map(|i| format!("{}({})", g.label(i), g.degree(i))).collect();
    let _ = writeln!(s, "basis: {}", basis.join(" "));
    for ((i, j), v) in g.structure_constants() {
        let _ = writeln!(s, "[{}, {}] = {}", g.label(*i), g.label(*j), g.format_element(v));
    }
    let _ = writeln!(s, "jacobi: {}", if g.check_jacobi().is_empty() { "ok" } else { "VIOLATED" });
    s
}

#[derive(Serialize)]
struct SymbolJson {
    growth: Option<crate::distribution::RegularityJson>,
    algebra: crate::graded_lie::AlgebraJson,
}

#[derive(Serialize)]
struct FlatJson {
    flat: bool,
    orders: [i32; 2],
    nonvanishing_orders: Vec<i32>,
    cohomology: crate::cohomology::CohomologyJson,
}

fn default_orders(g: &GradedLieAlgebra) -> (i32, i32) {
    (2 - g.depth() as i32, 6)
}

fn suite_outcome(suite: &Suite, json: &Option<PathBuf>, out: &mut String) -> Result<i32> {
    write_json(json, suite)?;
    out.push_str(&suite.to_text());
    Ok(if suite.passed() { 0 } else { 1 })
}

fn order_range(orders: &Option<String>, g: &GradedLieAlgebra) -> Result<(i32, i32)> {
    match orders {
        Some(o) => parse_orders(o),
        None => Ok(default_orders(g)),
    }
}

/// Runs one command, appending its report to `out`; returns the exit code.
fn run_inner(cli: &Cli, out: &mut String) -> Result<i32> {
    match &cli.command {
        Command::Symbol { input, json } => {
            let (g, scan) = resolve(input, out)?;
            if let Some(scan) = &scan {
                out.push_str(&scan.to_text());
                out.push('\n');
            }
            out.push_str(&algebra_text(&g));
            write_json(
                json,
                &SymbolJson { growth: scan.as_ref().map(RegularityReport::to_json), algebra: g.to_json() },
            )?;
        }
        Command::Prolong { input, g0, cap, json } => {
            let (g, _) = resolve(input, out)?;
            let g0 = resolve_g0(&g, g0)?;
            let t = build_tower(&g, &g0, *cap)?;
            out.push_str(&t.dims_table());
            let (checked, bad) = t.check_truncated_jacobi()?;
            let _ = writeln!(out, "jacobi on the truncation: {} triples checked, {} violations", checked, bad.len());
            if !bad.is_empty() {
                return Err(Error::Invariant("Jacobi fails on the truncated tower".into()));
            }
            match derived_series_report(&t) {
                Ok(d) => out.push_str(&d.to_text()),
                Err(Error::CapInsufficient { required, .. }) => {
                    let _ = writeln!(out, "derived series: needs cap >= {required}");
                }
                Err(e) => return Err(e),
            }
            write_json(json, &t.to_json())?;
        }
        Command::Cohomology { input, g0, s, orders, cap, json } => {
            let (g, _) = resolve(input, out)?;
            let g0 = resolve_g0(&g, g0)?;
            let (lo, hi) = order_range(orders, &g)?;
            let cap = match cap {
                Some(c) => *c,
                None => cap_for(&g, &g0, *s, lo, hi)?,
            };
            let t = build_components(&g, &g0, cap)?;
            let rep = cohomology(&t, *s, lo, hi)?;
            out.push_str(&rep.to_text(&t));
            write_json(json, &rep.to_json(&t))?;
        }
        Command::VerifyEngel { json } => return suite_outcome(&verify_engel()?, json, out),
        Command::VerifyContact { r, orders, json } => {
            let (lo, hi) = match orders {
                Some(o) => parse_orders(o)?,
                None => (0, if *r == 1 { 6 } else { 4 }),
            };
            return suite_outcome(&verify_contact(*r, lo, hi)?, json, out);
        }
        Command::FlatCheck { input, g0, orders, json } => {
            let (g, _) = resolve(input, out)?;
            let g0 = resolve_g0(&g, g0)?;
            let (lo, hi) = order_range(orders, &g)?;
            let t = build_components(&g, &g0, cap_for(&g, &g0, 2, lo, hi)?)?;
            let rep = cohomology(&t, 2, lo, hi)?;
            let nonvanishing: Vec<i32> = rep.blocks.iter().filter(|b| b.dim_h() > 0).map(|b| b.order).collect();
            out.push_str(&rep.to_text(&t));
            if nonvanishing.is_empty() {
                let _ = writeln!(out, "flat up to order {hi} (orders {lo}..{hi} scanned)");
            } else {
                let _ = writeln!(
                    out,
                    "not flat: structure functions at orders {}",
                    nonvanishing.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                );
            }
            write_json(
                json,
                &FlatJson {
                    flat: nonvanishing.is_empty(),
                    orders: [lo, hi],
                    nonvanishing_orders: nonvanishing,
                    cohomology: rep.to_json(&t),
                },
            )?;
        }
    }
    Ok(0)
}

/// Smallest cap covering `H^s` for every order in `lo..=hi`.
fn cap_for(g: &GradedLieAlgebra, g0: &DerivationSubalgebra, s: usize, lo: i32, hi: i32) -> Result<i32> {
    let probe = crate::prolong::ProlongTower::new(g, g0, 0)?;
    Ok((lo..=hi).map(|k| required_cap(&probe, s, k)).max().unwrap_or(0).max(0))
}

/// Runs a parsed command; errors become exit code 2 with a diagnostic.
pub fn run(cli: &Cli) -> Outcome {
    let mut stdout = String::new();
    match run_inner(cli, &mut stdout) {
        Ok(code) => Outcome { code, stdout },
        Err(e) => {
            let _ = writeln!(stdout, "error: {e}");
            if let Error::CapInsufficient { required, .. } = &e {
                let _ = writeln!(stdout, "hint: rerun with --cap {required}");
            }
            Outcome { code: 2, stdout }
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => Outcome { code: if e.use_stderr() { 2 } else { 0 }, stdout: e.to_string() },
    }
}

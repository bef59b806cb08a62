//! Command-line front end.
//!
//! Exit codes: 0 success or "equivalent", 1 runtime failure, 2 usage error,
//! 3 "not_equivalent", 4 jet too short.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{codim, codim_by_sum, cokernel_codim, PhiMap};
use crate::error::Error;
use crate::geometry::{default_angles, default_radii, metric_from_star, residual_decay};
use crate::io::{parse_jet, StarDocument, VerdictDocument};
use crate::jetflow::{make_fstar, obstruct, run, s_of_m, Jet, ObstructionReport, Verdict};
use crate::poly::HomPoly;
use crate::rational::{format_rational, parse_rational};
use crate::sampling::{random_graded, rng};
use crate::theta::build_theta;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_EQUIVALENT: i32 = 3;
pub const EXIT_TOO_SHORT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "harmjet",
    version,
    about = "Exact normal-form test for planar jets with leading term Re(x+iy)^m"
)]
pub struct Cli {
    /// Emit structured JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide equivalence of a jet and list the cokernel residuals.
    Obstruct {
        #[arg(long)]
        input: PathBuf,
    },
    /// Solve for the metric jet through degree K.
    Metric {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Rank report and Irr^q inclusion table of Θ_k.
    Theta {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Build f★ = Re z^m + C (x²+y²)^{m-2} and analyze it.
    Fstar {
        #[arg(long)]
        m: usize,
        #[arg(long = "C", allow_hyphen_values = true)]
        c: String,
    },
    /// Rank of the exact φ-Jacobian at h = 0, or at a seeded random h.
    Submersion {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Codimension of the equivalence class in the space of jets.
    Codim {
        #[arg(long)]
        m: usize,
    },
    /// CSV samples of |Δ_g f| on shrinking circles for the metric of order K.
    Residual {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Run the invariant suite.
    Verify,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Error::JetTooShort {
            required,
            available,
        }) => {
            let _ = writeln!(
                err,
                "error: jet known through degree {available}, need order {required}"
            );
            EXIT_TOO_SHORT
        }
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> crate::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Equivalent => EXIT_OK,
        Verdict::NotEquivalent => EXIT_NOT_EQUIVALENT,
        Verdict::Undetermined => EXIT_TOO_SHORT,
    }
}

fn write_report_text(out: &mut dyn Write, report: &ObstructionReport) -> crate::Result<()> {
    writeln!(out, "m = {}, s(m) = {}", report.m, s_of_m(report.m))?;
    writeln!(out, "verdict: {}", report.verdict)?;
    if let Some(k) = report.first_failure {
        writeln!(out, "first failure at k = {k}")?;
    }
    for (k, r) in &report.residuals {
        let tag = if report.is_conditional(*k) {
            " (conditional)"
        } else {
            ""
        };
        writeln!(out, "  residual k={k}{tag}: {r}")?;
    }
    Ok(())
}

fn report_obstruction(
    json: bool,
    out: &mut dyn Write,
    jet: &Jet,
    extra: Option<(&str, serde_json::Value)>,
) -> crate::Result<i32> {
    let m = jet.m();
    let report = match obstruct(jet) {
        Ok(r) => r,
        Err(Error::JetTooShort {
            required,
            available,
        }) => {
            if json {
                emit(out, &VerdictDocument::too_short(m, jet.order()))?;
            } else {
                writeln!(out, "verdict: {}", Verdict::Undetermined)?;
            }
            return Err(Error::JetTooShort {
                required,
                available,
            });
        }
        Err(e) => return Err(e),
    };
    if json {
        let doc = VerdictDocument::from_report(&report, jet.order());
        let mut value = serde_json::to_value(&doc).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some((key, extra)) = extra {
            value[key] = extra;
        }
        emit(out, &value)?;
    } else {
        write_report_text(out, &report)?;
        if m >= 5 {
            writeln!(out, "codim = {}", codim(m)?)?;
        }
    }
    Ok(verdict_code(report.verdict))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> crate::Result<i32> {
    let json = cli.json;
    match &cli.command {
        Command::Obstruct { input } => {
            let jet = parse_jet(input)?;
            report_obstruction(json, out, &jet, None)
        }
        Command::Metric { input, order } => {
            let jet = parse_jet(input)?;
            let result = run(&jet, *order)?;
            let metric = metric_from_star(&result.metric)?;
            if json {
                emit(
                    out,
                    &json!({
                        "m": jet.m(),
                        "order": order,
                        "star": StarDocument::from_star(&result.metric),
                        "metric": {
                            "g11": metric.g11.to_records(),
                            "g12": metric.g12.to_records(),
                            "g22": metric.g22.to_records(),
                        },
                        "assertions": result.assertions,
                        "verdict": result.report.verdict,
                        "first_failure": result.report.first_failure,
                    }),
                )?;
            } else {
                writeln!(out, "metric jet through degree {order} for m = {}", jet.m())?;
                writeln!(out, "  g11 = {}", metric.g11)?;
                writeln!(out, "  g12 = {}", metric.g12)?;
                writeln!(out, "  g22 = {}", metric.g22)?;
                let failed: Vec<usize> =
                    (1..=*order).filter(|k| !result.assertions[k - 1]).collect();
                if failed.is_empty() {
                    writeln!(out, "assertions hold for k = 1..{order}")?;
                } else {
                    writeln!(out, "assertions fail at k = {failed:?}")?;
                }
                writeln!(
                    out,
                    "verdict over the solved range: {}",
                    result.report.verdict
                )?;
            }
            Ok(match result.report.verdict {
                Verdict::NotEquivalent => EXIT_NOT_EQUIVALENT,
                _ => EXIT_OK,
            })
        }
        Command::Theta { m, k } => {
            let op = build_theta(*m, *k)?;
            let report = op.rank_report();
            let table = op.irr_inclusion();
            let missed: Vec<HomPoly> = op.cokernel_directions();
            if json {
                emit(
                    out,
                    &json!({
                        "m": m,
                        "k": k,
                        "report": report,
                        "target_degree": op.target_degree(),
                        "irr_inclusion": table
                            .iter()
                            .map(|(q, inside)| json!({"q": q, "in_image": inside}))
                            .collect::<Vec<_>>(),
                        "cokernel": missed.iter().map(HomPoly::to_records).collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                writeln!(
                    out,
                    "Θ_{k} for m = {m}: R_{k}[x,y]² → R_{}[x,y]",
                    op.target_degree()
                )?;
                writeln!(
                    out,
                    "rank {} (domain dim {}, target dim {}); injective: {}, surjective: {}",
                    report.rank,
                    2 * (k + 1),
                    op.target_degree() + 1,
                    report.injective,
                    report.surjective
                )?;
                writeln!(out, "M(k) = {}", report.m_k)?;
                for (q, inside) in &table {
                    writeln!(
                        out,
                        "  Irr^{q}: {}",
                        if *inside { "in image" } else { "missed" }
                    )?;
                }
                for p in &missed {
                    writeln!(out, "  cokernel direction: {p}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Fstar { m, c } => {
            let c = parse_rational(c)?;
            let jet = make_fstar(*m, &c)?;
            if !json {
                writeln!(
                    out,
                    "f★ = Re z^{m} + C (x²+y²)^{}, C = {}",
                    m - 2,
                    format_rational(&c)
                )?;
            }
            report_obstruction(json, out, &jet, Some(("C", json!(format_rational(&c)))))
        }
        Command::Submersion { m, seed } => {
            let map = PhiMap::new(*m)?;
            let h = match seed {
                Some(s) => random_graded(&mut rng(*s), m + 1, 2 * m - 4),
                None => crate::poly::GradedPoly::zero(),
            };
            let jac = map.jacobian(&h)?;
            let rank = jac.rank();
            let full = jac.full_row_rank();
            let ok = rank == full;
            if json {
                emit(
                    out,
                    &json!({
                        "m": m,
                        "seed": seed,
                        "rows": jac.matrix.rows(),
                        "cols": jac.matrix.cols(),
                        "rank": rank,
                        "full_row_rank": ok,
                        "base_point": h.to_records(),
                    }),
                )?;
            } else {
                let at = match seed {
                    Some(s) => format!("random h (seed {s})"),
                    None => "h = 0".to_string(),
                };
                writeln!(
                    out,
                    "φ-Jacobian at {at}: {}×{}, rank {rank}, full row rank: {ok}",
                    jac.matrix.rows(),
                    jac.matrix.cols()
                )?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Codim { m } => {
            let value = codim(*m)?;
            if json {
                emit(
                    out,
                    &json!({
                        "m": m,
                        "codim": value,
                        "codim_by_sum": codim_by_sum(*m)?,
                        "cokernel_codim": cokernel_codim(*m)?,
                    }),
                )?;
            } else {
                writeln!(out, "{value}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Residual { input, order } => {
            let jet = parse_jet(input)?;
            let result = run(&jet, *order)?;
            let probe =
                residual_decay(&result.metric, &jet, &default_radii(), &default_angles(16))?;
            probe.write_csv(&mut *out)?;
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let results = verify::run_suite();
            let all = results.iter().all(|r| r.passed);
            if json {
                emit(out, &json!({ "passed": all, "checks": results }))?;
            } else {
                for r in &results {
                    writeln!(out, "{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name)?;
                }
            }
            Ok(if all { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

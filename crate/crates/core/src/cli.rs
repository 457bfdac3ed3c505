//! Command-line front end. [`run`] does all the work so it can be driven
//! in-process; the binary only forwards its arguments and exit code.
//!
//! Monetary flags take decimal major units (`--delta 12.50`); reports carry
//! integer minor units.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    self, generate_lp_market, generate_scale_free, identify_lp_firms, identify_lp_obligations,
    lp_exit, lp_report, sweep_with_tolerance, AmountDist, LpMarketParams, ScaleFreeParams,
};
use crate::error::{Error, Result};
use crate::graph::{validate, Amount, NodeId, ObligationGraph};
use crate::io::{self, parse_amount};
use crate::netting::{net_global, net_partitioned, NettingSetPartition};
use crate::setoff::{setoff_clear_with, Algorithm};
use crate::settlement::settle_to_fixpoint;

pub const SEED_ENV: &str = "CYCLECLEAR_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "cycleclear",
    version,
    about = "Clear obligation networks by CCP netting or multilateral setoff"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Solver {
    Ssp,
    CycleCanceling,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a ledger and report record violations.
    Validate { ledger: PathBuf },
    /// CCP netting, globally or per netting set.
    Net {
        ledger: PathBuf,
        #[arg(long, default_value = "0")]
        delta: String,
        /// Tag-to-set map, e.g. `ccp1=CCP1,ccp2=CCP2`.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Multilateral setoff with an optional external fund.
    Setoff {
        ledger: PathBuf,
        #[arg(long, default_value = "0")]
        delta: String,
        #[arg(long, value_enum, default_value = "ssp")]
        solver: Solver,
    },
    /// Residual curves of netting and setoff over a fund grid.
    Sweep {
        ledger: PathBuf,
        /// `start:stop:step`, inclusive.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value = "0")]
        tolerance: String,
    },
    /// Execute settlement cycles until none is left.
    Settle {
        ledger: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Rounded-amount liquidity-provider proxy.
    LpReport {
        ledger: PathBuf,
        #[arg(long, default_value = "10000")]
        modulus: String,
    },
    /// Clearing before and after removing liquidity providers.
    LpExit {
        ledger: PathBuf,
        #[arg(long, default_value = "10000")]
        modulus: String,
        #[arg(long, default_value = "0")]
        delta: String,
        /// Comma-separated firms; defaults to the proxy-identified ones.
        #[arg(long, value_delimiter = ',')]
        firms: Vec<String>,
    },
    /// Write a seeded scale-free ledger.
    Generate {
        #[arg(long, default_value_t = 100)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add this many liquidity-provider firms.
        #[arg(long, default_value_t = 0)]
        lp_firms: usize,
        #[arg(long, default_value = "10000")]
        modulus: String,
        /// Median obligation size.
        #[arg(long, default_value = "5464")]
        median: String,
    },
    /// Size, value and degree summary.
    Stats { ledger: PathBuf },
}

/// Exit code for a failure.
fn code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::NegativeDelta(_) => 2,
        _ => 1,
    }
}

/// Runs one command, reading `CYCLECLEAR_SEED` from the environment.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_seed_override(args, std::env::var(SEED_ENV).ok(), stdout, stderr)
}

/// As [`run`], with the seed override passed explicitly.
pub fn run_with_seed_override<I, T>(
    args: I,
    seed_override: Option<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match Cli::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(inv, seed_override) {
        Ok((body, failed)) => match emit(&body, stdout) {
            Ok(()) => i32::from(failed),
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Err(e) => {
            match &e {
                Error::Ledger { path, diagnostics } => {
                    for d in diagnostics {
                        let _ = writeln!(stderr, "{path}: {d}");
                    }
                }
                other => {
                    let _ = writeln!(stderr, "error: {other}");
                }
            }
            if code(&e) == 2 {
                let _ = writeln!(
                    stderr,
                    "usage: cycleclear <COMMAND> [LEDGER] [OPTIONS]; see --help"
                );
            }
            code(&e)
        }
    }
}

struct Body {
    out: Option<PathBuf>,
    text: String,
}

fn emit(body: &Body, stdout: &mut dyn Write) -> Result<()> {
    match &body.out {
        Some(path) => std::fs::write(path, &body.text)?,
        None => stdout.write_all(body.text.as_bytes())?,
    }
    Ok(())
}

fn money(flag: &str, text: &str) -> Result<Amount> {
    parse_amount(text).map_err(|m| Error::InvalidParameter(format!("--{flag}: {m}")))
}

fn grid_flag(text: &str) -> Result<Vec<Amount>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(Error::InvalidParameter(format!(
            "--grid expects start:stop:step, got {text:?}"
        )));
    };
    analysis::grid(
        money("grid", start)?,
        money("grid", stop)?,
        money("grid", step)?,
    )
}

fn reject_format(format: Option<Format>, allowed: &[Format]) -> Result<Format> {
    let f = format.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Error::InvalidParameter(
            format!("format {f:?} not available for this command").to_lowercase(),
        ))
    }
}

fn execute(inv: Cli, seed_override: Option<String>) -> Result<(Body, bool)> {
    use Format::*;
    let Output { out, format } = inv.output;
    let mut failed = false;
    let text = match inv.command {
        Command::Validate { ledger } => {
            reject_format(format, &[Json])?;
            let graph = io::parse_ledger(&ledger)?;
            let violations = validate(&graph);
            failed = !violations.is_empty();
            io::to_json(&io::ValidationReport::new(&graph, violations))?
        }
        Command::Net {
            ledger,
            delta,
            partition,
        } => {
            let f = reject_format(format, &[Json, Csv])?;
            let delta = money("delta", &delta)?;
            let graph = io::parse_ledger(&ledger)?;
            let outcome = match partition {
                Some(p) => net_partitioned(&graph, &NettingSetPartition::parse(&p)?)?,
                None => net_global(&graph),
            }
            .with_fund(delta)?;
            match f {
                Csv => io::emit_ledger(&outcome.post_novation_graph),
                _ => io::to_json(&io::NettingReport::new(&outcome, delta))?,
            }
        }
        Command::Setoff {
            ledger,
            delta,
            solver,
        } => {
            let f = reject_format(format, &[Json, Csv])?;
            let delta = money("delta", &delta)?;
            let graph = io::parse_ledger(&ledger)?;
            let algorithm = match solver {
                Solver::Ssp => Algorithm::SuccessiveShortestPaths,
                Solver::CycleCanceling => Algorithm::CycleCanceling,
            };
            let result = setoff_clear_with(&graph, delta, algorithm)?;
            match f {
                Csv => io::emit_ledger(&result.residual_graph),
                _ => io::to_json(&io::ClearingReport::from(&result))?,
            }
        }
        Command::Sweep {
            ledger,
            grid,
            tolerance,
        } => {
            let f = reject_format(format, &[Json, Csv, Svg])?;
            let grid = grid_flag(&grid)?;
            let tolerance = money("tolerance", &tolerance)?;
            let graph = io::parse_ledger(&ledger)?;
            let report = sweep_with_tolerance(&graph, &grid, tolerance)?;
            match f {
                Json => io::to_json(&io::SweepDocument::from(&report))?,
                Csv => io::curve_csv(&report),
                Svg => io::curve_svg(&report),
            }
        }
        Command::Settle { ledger, max_len } => {
            let f = reject_format(format, &[Json, Csv])?;
            let graph = io::parse_ledger(&ledger)?;
            let (remaining, log) = settle_to_fixpoint(&graph, max_len)?;
            match f {
                Csv => io::emit_ledger(&remaining),
                _ => io::to_json(&io::SettlementReport::new(max_len, &log, &remaining))?,
            }
        }
        Command::LpReport { ledger, modulus } => {
            reject_format(format, &[Json])?;
            let modulus = money("modulus", &modulus)?;
            let graph = io::parse_ledger(&ledger)?;
            io::to_json(&io::LpDocument::new(&lp_report(&graph, modulus)?, &graph))?
        }
        Command::LpExit {
            ledger,
            modulus,
            delta,
            firms,
        } => {
            reject_format(format, &[Json])?;
            let modulus = money("modulus", &modulus)?;
            let delta = money("delta", &delta)?;
            let graph = io::parse_ledger(&ledger)?;
            let firms = if firms.is_empty() {
                identify_lp_firms(&graph, &identify_lp_obligations(&graph, modulus)?)?
            } else {
                firms.iter().map(|f| NodeId::new(f.trim())).collect()
            };
            let exit = lp_exit(&graph, &firms, delta)?;
            io::to_json(&io::ExitDocument::new(&exit, &firms, delta))?
        }
        Command::Generate {
            nodes,
            m,
            seed,
            lp_firms,
            modulus,
            median,
        } => {
            reject_format(format, &[Csv])?;
            let seed = match seed_override {
                Some(s) => s.trim().parse().map_err(|_| {
                    Error::InvalidParameter(format!("{SEED_ENV} must be an integer, got {s:?}"))
                })?,
                None => seed,
            };
            let median = money("median", &median)?;
            let network = ScaleFreeParams {
                nodes,
                m,
                amounts: AmountDist::LogNormal { median, sigma: 1.0 },
                seed,
            };
            let graph: ObligationGraph = if lp_firms == 0 {
                generate_scale_free(&network)?
            } else {
                let params = LpMarketParams {
                    network,
                    lp_firms,
                    modulus: money("modulus", &modulus)?,
                    ..LpMarketParams::new(nodes, m, seed)
                };
                generate_lp_market(&params)?
            };
            io::emit_ledger(&graph)
        }
        Command::Stats { ledger } => {
            reject_format(format, &[Json])?;
            io::to_json(&io::Stats::of(&io::parse_ledger(&ledger)?))?
        }
    };
    Ok((Body { out, text }, failed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["cycleclear"];
        argv.extend_from_slice(args);
        let code = run_with_seed_override(argv, None, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        let (code, _, err) = call(&["sweep", "x.csv", "--grid", "0:4"]);
        assert_eq!(code, 2);
        assert!(err.contains("start:stop:step"));
        assert_eq!(call(&["setoff", "x.csv", "--delta", "-1"]).0, 2);
        assert_eq!(call(&["stats", "x.csv", "--format", "svg"]).0, 2);
    }

    #[test]
    fn missing_ledger_exits_one() {
        let (code, _, err) = call(&["stats", "/nonexistent/ledger.csv"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("lp-exit"));
    }

    #[test]
    fn generate_to_stdout() {
        let (code, out, _) = call(&["generate", "--nodes", "10", "--m", "2", "--seed", "3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("oid,debtor,creditor,amount,kind,tag,attested\n"));
        assert_eq!(out.lines().count(), 1 + 3 + 7 * 2);
    }

    #[test]
    fn seed_override_wins() {
        let run = |env: Option<&str>, seed: &str| {
            let mut out = Vec::new();
            let args = ["cycleclear", "generate", "--nodes", "20", "--seed", seed];
            assert_eq!(
                run_with_seed_override(args, env.map(str::to_string), &mut out, &mut Vec::new()),
                0
            );
            out
        };
        assert_eq!(run(Some("9"), "1"), run(None, "9"));
        assert_ne!(run(None, "1"), run(None, "9"));
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fracineq_cli::output::to_json;
use fracineq_cli::replay::{parse_record, replay};
use fracineq_cli::suite::SuiteId;
use fracineq_cli::{evaluate, parse_alphas, run_suite, sweep_alpha, write_csv, Bound, EqId, SuiteOptions};
use fracineq_core::{parse_function, parse_weight, EvalContext, InstanceRecord, Interval, Tolerance};

#[derive(Parser)]
#[command(name = "fracineq", version, about = "Numerical checks of fractional Hermite-Hadamard-Fejér inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded suite and write a JSON report.
    Verify {
        #[arg(long, value_parser = SuiteId::NAMES)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        atol: f64,
        #[arg(long, default_value_t = 1e-7)]
        rtol: f64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a bound over a range of orders as CSV.
    Sweep {
        #[arg(long, value_parser = Bound::NAMES)]
        bound: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "one")]
        g: String,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// lo:hi:step
        #[arg(long)]
        alphas: String,
        /// Power-mean exponent (thm25); thm26 uses p = q/(q−1).
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one identity or inequality and print its report.
    Eval {
        #[arg(long, value_parser = EqId::ALL.map(EqId::as_str))]
        eq: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "one")]
        g: String,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
    },
    /// Re-run evaluations from a report, suite document or instance record.
    Replay {
        #[arg(long)]
        record: PathBuf,
    },
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Verify {
            suite,
            n,
            seed,
            atol,
            rtol,
            out,
        } => {
            let suite: SuiteId = suite.parse()?;
            let mut opts = SuiteOptions::new(n, seed);
            opts.tolerance = Tolerance { atol, rtol };
            let report = run_suite(suite, &opts)?;
            write_out(out.as_ref(), &to_json(&report)?)?;
            let s = &report.summary;
            eprintln!(
                "{suite}: {} evaluations, {} pass, {} fail ({} expected, {} ungated), {} inconclusive, {} errors, {:.2}s",
                s.counts.evaluations,
                s.counts.pass,
                s.counts.fail,
                s.expected_fails,
                s.ungated_fails,
                s.counts.inconclusive,
                s.errors,
                s.wall_time_s
            );
            Ok(if s.unexpected_fails > 0 || s.errors > 0 {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Sweep {
            bound,
            f,
            g,
            a,
            b,
            alphas,
            q,
            out,
        } => {
            let bound: Bound = bound.parse()?;
            let iv = Interval::new(a, b)?;
            let f = parse_function(&f)?;
            let g = parse_weight(&g, iv)?;
            let alphas = parse_alphas(&alphas)?;
            let rows = sweep_alpha(&f, &g, &iv, &alphas, bound, q, &EvalContext::default());
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            write_out(out.as_ref(), &String::from_utf8(buf)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            eq,
            f,
            g,
            a,
            b,
            alpha,
            q,
            p,
            x,
        } => {
            let eq: EqId = eq.parse()?;
            let rec = InstanceRecord {
                f,
                g: Some(g),
                a,
                b,
                alpha: Some(alpha),
                q,
                p,
                x,
                ..InstanceRecord::default()
            };
            let report = evaluate(eq, &rec, &EvalContext::default())?;
            write_out(None, &to_json(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { record } => {
            let text = fs::read_to_string(&record).with_context(|| format!("reading {}", record.display()))?;
            let (items, tol) = parse_record(&text)?;
            let ctx = EvalContext {
                tol: tol.unwrap_or_default(),
                ..EvalContext::default()
            };
            let outcomes = replay(&items, &ctx);
            write_out(None, &to_json(&outcomes)?)?;
            let all = outcomes.iter().all(|o| o.reproduced);
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

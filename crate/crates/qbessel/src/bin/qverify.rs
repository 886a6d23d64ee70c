use clap::{Args, Parser, Subcommand};
use qbessel::verifier::{eval_request, run_campaign, Identity, Overrides, Params, PlanFile, Report};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

/// Check q-Bessel, recoupling and Askey–Wilson identities numerically.
#[derive(Parser)]
#[command(name = "qverify", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every case of a JSON plan and write a JSON-lines report.
    Verify {
        plan: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Evaluate one identity at one parameter assignment.
    Eval {
        identity: String,
        /// label=value, repeatable
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, i64)>,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[command(flatten)]
        opts: Opts,
    },
    /// List identity ids, the statement each checks, and their labels.
    List,
}

#[derive(Args)]
struct Opts {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<usize>,
    /// lo:hi
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    /// working decimal digits
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Opts {
    fn overrides(&self) -> Overrides {
        Overrides {
            tol: self.tol,
            max_terms: self.max_terms,
            window: self.window,
            precision: self.precision,
            jobs: self.jobs,
        }
    }
}

fn parse_kv(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected label=value")?;
    Ok((k.to_string(), v.parse().map_err(|e| format!("{k}: {e}"))?))
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    Ok((lo.parse().map_err(|e| format!("{e}"))?, hi.parse().map_err(|e| format!("{e}"))?))
}

fn emit(report: &Report, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(p) => report.write_jsonl(BufWriter::new(File::create(p)?)),
        None => report.write_jsonl(io::stdout().lock()),
    }
}

fn invalid(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, out) = match cli.cmd {
        Cmd::List => {
            let mut w = io::stdout().lock();
            for id in Identity::ALL {
                let _ = writeln!(w, "{:<22} [{}]\n    {}", id.id(), id.labels().join(", "), id.anchor());
            }
            return ExitCode::SUCCESS;
        }
        Cmd::Verify { plan, opts } => {
            let text = match std::fs::read_to_string(&plan) {
                Ok(t) => t,
                Err(e) => return invalid(format!("invalid plan: {}: {e}", plan.display())),
            };
            let plans = match PlanFile::parse(&text) {
                Ok(p) => p,
                Err(e) => return invalid(e),
            };
            match run_campaign(&plans, &opts.overrides()) {
                Ok(r) => (r, opts.out),
                Err(e) => return invalid(e),
            }
        }
        Cmd::Eval { identity, params, q, opts } => {
            let params: Params = params.into_iter().collect();
            match eval_request(&identity, &params, q, 1e-8, &opts.overrides()) {
                Ok(case) => (Report::from_cases(vec![case]), opts.out),
                Err(e) => return invalid(e),
            }
        }
    };
    if let Err(e) = emit(&report, out.as_ref()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return ExitCode::from(report.exit_code() as u8);
        }
        eprintln!("cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}

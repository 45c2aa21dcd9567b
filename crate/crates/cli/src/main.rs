mod config;
mod suites;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use racah_core::orthogonality::connection_matrix;
use racah_core::polynomials::racah_grid_vector;
use racah_core::{
    format_scalar, kappa, parse_scalar, racah_multivariate, racah_univariate, GeneratorTable,
    GridPointX, LabelSet, MultiIndexK, ParameterSet, Report, SimplexGrid,
};
use serde_json::{json, Value};

use config::{ConfigArgs, Format};

#[derive(Parser)]
#[command(name = "racah", version, about = "Exact computations with multivariate Racah polynomials and their operators")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true, env = "RACAH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate kappa or a Racah polynomial exactly.
    Eval {
        #[command(subcommand)]
        kind: EvalKind,
    },
    /// Write a table of polynomial values, an operator matrix or the connection matrix.
    Table {
        what: TableKind,
        /// Generator label for `matrix`, e.g. `2,3` or `{1,3}`.
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Write the exact matrix of a generator C_A as JSON.
    Matrix {
        label: String,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Summarize a report written by `verify`.
    Report { path: PathBuf },
}

#[derive(Subcommand)]
enum EvalKind {
    /// kappa(x, beta) = (x + (beta+1)/2)(x + (beta-1)/2).
    Kappa {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
    },
    /// Univariate r_m(alpha, beta, gamma, delta; x).
    #[command(name = "racah1")]
    Racah1 {
        m: u32,
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        #[arg(allow_hyphen_values = true)]
        gamma: String,
        #[arg(allow_hyphen_values = true)]
        delta: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Multivariate R_p(k; x) for the configured parameters.
    #[command(name = "racahN")]
    RacahN {
        /// Number of factors; defaults to n - 2.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u32>,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Polynomials,
    Matrix,
    Connection,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a relation failed; errors are usage or configuration problems.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Eval { kind } => {
            println!("{}", eval(kind)?);
            Ok(true)
        }
        Command::Table { what, label, config } => {
            let run = config.resolve()?;
            let text = match what {
                TableKind::Polynomials => polynomial_table(&run.params, run.format.unwrap_or(Format::Csv))?,
                TableKind::Connection => connection_table(&run.params, run.format.unwrap_or(Format::Csv))?,
                TableKind::Matrix => {
                    let label = label.context("table matrix needs --label")?;
                    matrix_table(&run.params, &label, run.format.unwrap_or(Format::Json))?
                }
            };
            emit(&text, run.output.as_deref())?;
            Ok(true)
        }
        Command::Matrix { label, config } => {
            let run = config.resolve()?;
            emit(&matrix_table(&run.params, &label, Format::Json)?, run.output.as_deref())?;
            Ok(true)
        }
        Command::Verify { config } => {
            let run = config.resolve()?;
            if run.format == Some(Format::Csv) {
                bail!("verification reports are JSON only");
            }
            let table = GeneratorTable::new(run.params.clone())?;
            let mut report = Report::new(serde_json::to_value(&run)?);
            report.extend(suites::run(&run, &table)?);
            emit(&pretty(&report.to_json())?, run.output.as_deref())?;
            for failure in report.failures() {
                eprintln!(
                    "FAIL {} [{}]: {}",
                    failure.name,
                    failure.operands.join(", "),
                    failure.witness.as_deref().unwrap_or("")
                );
            }
            eprintln!("{}", summary_line(&report.to_json()["summary"]));
            Ok(report.passed())
        }
        Command::Report { path } => {
            let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
            let doc: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
            let relations = doc["relations"].as_array().context("report has no relations")?;
            let mut out = String::new();
            for r in relations {
                let operands: Vec<&str> = r["operands"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                let _ = write!(out, "{:<14} {} [{}]", r["status"].as_str().unwrap_or("?"), r["name"].as_str().unwrap_or("?"), operands.join(", "));
                if let Some(w) = r["witness"].as_str() {
                    let _ = write!(out, ": {w}");
                }
                out.push('\n');
            }
            out.push_str(&summary_line(&doc["summary"]));
            println!("{out}");
            doc["summary"]["passed"].as_bool().context("report has no summary")
        }
    }
}

fn summary_line(summary: &Value) -> String {
    format!(
        "{} relations: {} exact-pass, {} tolerance-pass, {} fail",
        summary["total"], summary["exact_pass"], summary["tolerance_pass"], summary["fail"]
    )
}

fn eval(kind: EvalKind) -> Result<String> {
    let value = match kind {
        EvalKind::Kappa { x, beta } => kappa(&parse_scalar(&x)?, &parse_scalar(&beta)?),
        EvalKind::Racah1 { m, alpha, beta, gamma, delta, x } => racah_univariate(
            m,
            &parse_scalar(&alpha)?,
            &parse_scalar(&beta)?,
            &parse_scalar(&gamma)?,
            &parse_scalar(&delta)?,
            &parse_scalar(&x)?,
        ),
        EvalKind::RacahN { p, k, x, config } => {
            let params = config.resolve()?.params;
            let k = MultiIndexK::new(k, params.big_n())?;
            let x = GridPointX::new(x, params.big_n())?;
            racah_multivariate(p.unwrap_or(params.dim()), &k, &x, &params)?
        }
    };
    Ok(format_scalar(&value))
}

fn grid_json(params: &ParameterSet) -> Value {
    json!({
        "n": params.n(),
        "N": params.big_n(),
        "beta": params.betas().iter().map(format_scalar).collect::<Vec<_>>(),
    })
}

fn label(v: &[u32]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn csv<'a>(corner: &str, columns: impl Iterator<Item = String>, rows: impl Iterator<Item = (String, Vec<String>)> + 'a) -> String {
    let mut out = String::from(corner);
    for c in columns {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (head, cells) in rows {
        out.push_str(&head);
        for c in cells {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
    }
    out
}

fn pretty(doc: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(doc)? + "\n")
}

fn polynomial_table(params: &ParameterSet, format: Format) -> Result<String> {
    let grid = SimplexGrid::new(params.clone());
    let ks = grid.multi_indices();
    let values = ks
        .iter()
        .map(|k| Ok(racah_grid_vector(k, &grid)?.iter().map(format_scalar).collect()))
        .collect::<Result<Vec<Vec<String>>>>()?;
    let xs = grid.points().iter().map(|x| label(x.coords()));
    Ok(match format {
        Format::Csv => csv("k\\x", xs, ks.iter().map(|k| label(k.entries())).zip(values)),
        Format::Json => pretty(&json!({
            "grid": grid_json(params),
            "k": ks.iter().map(MultiIndexK::entries).collect::<Vec<_>>(),
            "x": grid.points().iter().map(GridPointX::coords).collect::<Vec<_>>(),
            "values": values,
        }))?,
    })
}

fn connection_table(params: &ParameterSet, format: Format) -> Result<String> {
    let m = connection_matrix(params)?;
    Ok(match format {
        Format::Csv => m.to_csv(),
        Format::Json => {
            let grid = m.grid();
            pretty(&json!({
                "grid": grid_json(params),
                "k": grid.multi_indices().iter().map(MultiIndexK::entries).collect::<Vec<_>>(),
                "x": grid.points().iter().map(GridPointX::coords).collect::<Vec<_>>(),
                "values": m.values(),
            }))?
        }
    })
}

fn matrix_table(params: &ParameterSet, text: &str, format: Format) -> Result<String> {
    let set = LabelSet::parse(text)?;
    if set.largest() > params.n() {
        bail!("label {set} is not a subset of {{1..{}}}", params.n());
    }
    let table = GeneratorTable::new(params.clone())?;
    let m = table.get(&set)?;
    Ok(match format {
        Format::Json => pretty(&m.to_json())?,
        Format::Csv => {
            let grid = table.grid();
            let xs = || grid.points().iter().map(|x| label(x.coords()));
            let rows = m.to_dense().into_iter().map(|row| row.iter().map(format_scalar).collect());
            csv("x\\y", xs(), xs().zip(rows))
        }
    })
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

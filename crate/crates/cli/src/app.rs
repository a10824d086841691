use std::io::Write;
use std::path::{Path, PathBuf};

use ccei_core::oracle::ordinal_levels;
use ccei_core::{
    ccei_binary_search, ccei_exact, ccei_oracle, check_duality_garp, check_e_garp, cross_expenditures,
    direct_relations, garp_oracle, generate, solve_afriat, verify_cost_rationalization,
    verify_rationalization, Afriat, Dataset, DualityVerdict, EfficiencyVector, GeneratorSpec, Scalar,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::input::{read_dataset, InputFormat, LoadError, RawDataset};
use crate::report::{
    DatasetInfo, Mode, Number, Parameters, ReportDocument, Results, SamplingSummary, Witness, SCHEMA_VERSION,
};

#[derive(Debug, Parser)]
#[command(
    name = "ccei",
    version,
    about = "Revealed-preference consistency checks, Afriat's efficiency index and Afriat utilities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test e-GARP at the given efficiency vector.
    CheckGarp(InputArgs),
    /// Afriat's critical cost efficiency index, exact and by bisection.
    Ccei(InputArgs),
    /// Solve the Afriat inequalities at the given efficiency vector.
    Afriat(InputArgs),
    /// Solve the Afriat inequalities and check the utility by sampling.
    Verify(InputArgs),
    /// Generate a dataset from a JSON generator spec.
    Generate(GenerateArgs),
    /// Brute-force cycle enumeration (at most 8 observations).
    Oracle(InputArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Dataset file (CSV or JSON).
    pub input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator spec (JSON).
    pub spec: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Efficiency: one value for every observation, or a comma-separated
    /// list with one value per observation.
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    pub efficiency: String,
    /// Bisection tolerance.
    #[arg(long, global = true, default_value = "1e-9")]
    pub tol: String,
    /// Exact rational arithmetic (default).
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,
    /// Floating-point arithmetic.
    #[arg(long, global = true)]
    pub float: bool,
    /// Samples per observation for `verify`.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub samples: usize,
    /// Master seed for `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Core(#[from] ccei_core::Error),
    #[error("--{flag}: {message}")]
    Flag { flag: &'static str, message: String },
    #[error("generator spec {path}: {message}")]
    Spec { path: String, message: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// What a command produced: the text to emit and whether the verdict was
/// positive.
#[derive(Debug)]
pub struct Output {
    pub body: String,
    pub verdict: bool,
}

impl Output {
    pub fn exit_code(&self) -> u8 {
        if self.verdict {
            0
        } else {
            1
        }
    }
}

pub const EXIT_INPUT_ERROR: u8 = 2;

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let opts = &cli.options;
    let output = match &cli.command {
        Command::Generate(args) => generate_dataset(&args.spec, opts)?,
        Command::CheckGarp(args)
        | Command::Ccei(args)
        | Command::Afriat(args)
        | Command::Verify(args)
        | Command::Oracle(args) => {
            let raw = read_dataset(&args.input, args.input_format)?;
            let doc = if opts.float {
                report::<f64>(&cli.command, &args.input, &raw, opts)?
            } else {
                report::<ccei_core::Exact>(&cli.command, &args.input, &raw, opts)?
            };
            Output {
                body: match opts.format {
                    OutputFormat::Json => doc.to_json(),
                    OutputFormat::Text => doc.to_text(),
                },
                verdict: doc.verdict,
            }
        }
    };
    Ok(output)
}

/// Writes the output in one step: to stdout, or through a temporary file
/// renamed over the destination.
pub fn emit(output: &Output, out: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(output.body.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Write {
                path: "stdout".into(),
                source,
            });
    };
    let err = |source: std::io::Error| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(output.body.as_bytes()).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

fn parse_efficiency<S: Scalar>(text: &str, observations: usize) -> Result<EfficiencyVector<S>, CliError> {
    let bad = |message: String| CliError::Flag {
        flag: "efficiency",
        message,
    };
    let values = text
        .split(',')
        .map(|v| S::parse_decimal(v).map_err(|e| bad(e.to_string())))
        .collect::<Result<Vec<S>, _>>()?;
    let values = match values.len() {
        1 => vec![values[0].clone(); observations],
        n if n == observations => values,
        n => return Err(bad(format!("{n} values for {observations} observations"))),
    };
    EfficiencyVector::new(values).map_err(|e| bad(e.to_string()))
}

fn parse_tol<S: Scalar>(text: &str) -> Result<S, CliError> {
    let bad = |message: String| CliError::Flag { flag: "tol", message };
    let tol = S::parse_decimal(text).map_err(|e| bad(e.to_string()))?;
    if !tol.is_positive() {
        return Err(bad("must be strictly positive".into()));
    }
    Ok(tol)
}

fn report<S: Scalar>(command: &Command, path: &Path, raw: &RawDataset, opts: &Options) -> Result<ReportDocument, CliError> {
    let d: Dataset<S> = raw.parse()?;
    let e = parse_efficiency::<S>(&opts.efficiency, d.observations())?;
    let tol = parse_tol::<S>(&opts.tol)?;

    let results = match command {
        Command::CheckGarp(_) => {
            let rel = direct_relations(&d, &e)?;
            let v = check_e_garp(&d, &e)?;
            Results::CheckGarp {
                garp_holds: v.holds,
                weak_edges: rel.weak.count(),
                strict_edges: rel.strict.count(),
                witness: v.witness.as_ref().map(Witness::from),
            }
        }
        Command::Ccei(_) => {
            let r = ccei_exact(&d);
            let bisect = ccei_binary_search(&d, &tol)?;
            let gap = if bisect > r.value {
                bisect.clone() - &r.value
            } else {
                r.value.clone() - &bisect
            };
            Results::Ccei {
                ccei_exact: Number::from_scalar(&r.value),
                ccei_bisect: bisect.to_f64(),
                agree: gap <= tol,
                attained: r.attained,
                probe_above: r.probe_above.as_ref().map(Number::from_scalar),
                witness_above: r.witness_above.as_ref().map(Witness::from),
                breakpoints: r.breakpoints.len(),
            }
        }
        Command::Afriat(_) => match solve_afriat(&d, &e)? {
            Afriat::Solved(sol) => Results::Afriat {
                feasible: true,
                inequalities_hold: Some(sol.verify(&cross_expenditures(&d)).is_ok()),
                phi: Some(Number::list(&sol.phi)),
                lambda: Some(Number::list(&sol.lambda)),
                witness: None,
            },
            Afriat::Infeasible(w) => Results::Afriat {
                feasible: false,
                phi: None,
                lambda: None,
                inequalities_hold: None,
                witness: Some(Witness::from(&w)),
            },
        },
        Command::Verify(_) => match solve_afriat(&d, &e)? {
            Afriat::Solved(sol) => {
                let rat = verify_rationalization(&d, &e, &sol, opts.samples, opts.seed)?;
                let cost = verify_cost_rationalization(&d, &e, &sol, opts.samples, opts.seed)?;
                let verdict = DualityVerdict::from_reports(&rat, &cost);
                let consistent = check_duality_garp(&d, &e, Some(verdict))?;
                Results::Verify {
                    feasible: true,
                    phi: Some(Number::list(&sol.phi)),
                    lambda: Some(Number::list(&sol.lambda)),
                    rationalization_clean: Some(verdict.rationalization_clean),
                    cost_clean: Some(verdict.cost_clean),
                    consistent,
                    rationalization: rat
                        .iter()
                        .map(|r| SamplingSummary {
                            observation: r.observation + 1,
                            samples: r.budget_samples,
                            violations: r.rationalization_violations.len(),
                            seed: r.seed,
                            sampling_exhausted: false,
                        })
                        .collect(),
                    cost: cost
                        .iter()
                        .map(|r| SamplingSummary {
                            observation: r.observation + 1,
                            samples: r.upper_set_samples,
                            violations: r.cost_violations.len(),
                            seed: r.seed,
                            sampling_exhausted: r.rejection_exhausted,
                        })
                        .collect(),
                    witness: None,
                }
            }
            Afriat::Infeasible(w) => Results::Verify {
                feasible: false,
                phi: None,
                lambda: None,
                rationalization_clean: None,
                cost_clean: None,
                consistent: check_duality_garp(&d, &e, None)?,
                rationalization: Vec::new(),
                cost: Vec::new(),
                witness: Some(Witness::from(&w)),
            },
        },
        Command::Oracle(_) => {
            let v = garp_oracle(&d, &e)?;
            Results::Oracle {
                garp_holds: v.garp_holds,
                violating_cycles: v
                    .violating_cycles
                    .iter()
                    .map(|c| c.iter().map(|i| i + 1).collect())
                    .collect(),
                ordinal_levels: ordinal_levels(&d, &e)?,
                ccei: Number::from_scalar(&ccei_oracle(&d)?),
            }
        }
        Command::Generate(_) => unreachable!("generate does not read a dataset"),
    };

    let verdict = results.verdict();
    Ok(ReportDocument {
        tool: "ccei".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: SCHEMA_VERSION,
        mode: if S::EXACT { Mode::Exact } else { Mode::Float },
        dataset: DatasetInfo {
            path: path.display().to_string(),
            sha256: raw.fingerprint()?,
            observations: d.observations(),
            goods: d.goods(),
        },
        parameters: Parameters {
            efficiency: Number::list(e.values()),
            tol: Number::from_scalar(&tol),
            samples: opts.samples,
            seed: opts.seed,
        },
        results,
        verdict,
    })
}

/// Runs the generator and writes the dataset as CSV (text format) or as a
/// `{"prices", "bundles"}` object (JSON format). Floats are printed in
/// their shortest round-tripping form, so reading the file back in exact
/// mode recovers the generated values bit for bit.
fn generate_dataset(spec_path: &Path, opts: &Options) -> Result<Output, CliError> {
    let spec_err = |message: String| CliError::Spec {
        path: spec_path.display().to_string(),
        message,
    };
    let text = std::fs::read_to_string(spec_path).map_err(|e| spec_err(e.to_string()))?;
    let spec: GeneratorSpec = serde_json::from_str(&text).map_err(|e| spec_err(e.to_string()))?;
    let d = generate(&spec)?;

    let body = match opts.format {
        OutputFormat::Text => {
            let l = d.goods();
            let mut out = String::from("t");
            for prefix in ["p", "x"] {
                for i in 1..=l {
                    out.push_str(&format!(",{prefix}{i}"));
                }
            }
            out.push('\n');
            for t in 0..d.observations() {
                out.push_str(&(t + 1).to_string());
                for v in d.price(t).iter().chain(d.bundle(t)) {
                    out.push_str(&format!(",{v:?}"));
                }
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let rows = |f: &dyn Fn(usize) -> Vec<f64>| (0..d.observations()).map(f).collect::<Vec<_>>();
            let doc = serde_json::json!({
                "prices": rows(&|t| d.price(t).to_vec()),
                "bundles": rows(&|t| d.bundle(t).to_vec()),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("dataset serializes");
            s.push('\n');
            s
        }
    };
    Ok(Output { body, verdict: true })
}

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use toric_alpha::linalg::parse_rational;
use toric_alpha::report::{build_report, OracleRequest, ReportDocument, ReportOptions};
use toric_alpha::{catalog, catalog_entry, input_digest, parse_fan, validate_fan, NamedFan, OracleConfig, RatVector};

mod text;

#[derive(Parser)]
#[command(name = "toric-alpha", version, about = "Exact alpha_G-invariants of toric Fano manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Fan file (JSON), or `@name` for a built-in fan
    fan: String,
    /// Print the JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the fan is complete, regular and Fano
    Check(Input),
    /// Print the automorphism group and its fixed spaces
    Symmetry {
        #[command(flatten)]
        input: Input,
    },
    /// Compute the alpha_G-invariant
    Alpha {
        #[command(flatten)]
        input: Input,
        /// Include the per-vertex gauge certificate
        #[arg(long)]
        certificate: bool,
        /// Also tabulate alpha_{m,G} for m = 1..=M
        #[arg(long, value_name = "M")]
        table: Option<u64>,
    },
    /// Count lattice points of the m-th dilate of the polytope
    Points {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// List the points as well
        #[arg(long)]
        list: bool,
    },
    /// Print the exact barycenter of the polytope
    Barycenter {
        #[command(flatten)]
        input: Input,
    },
    /// Test convergence of the model integral numerically and exactly
    IntegralTest {
        #[command(flatten)]
        input: Input,
        /// Exponent, as a rational such as 1/3 or 0.25
        #[arg(long)]
        alpha: String,
        /// Increasing box half-widths
        #[arg(long, value_delimiter = ',', default_values_t = [32.0, 64.0, 128.0, 256.0])]
        cutoffs: Vec<f64>,
        /// Direction v in M coordinates (defaults to a minimizer)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<String>>,
        /// Grid spacing of the quadrature
        #[arg(long, default_value_t = OracleConfig::default().step)]
        step: f64,
    },
    /// List the built-in fans
    Catalog {
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    /// Bad arguments or unreadable input: exit code 2.
    Usage(String),
    /// Input that parses but fails validation: exit code 1.
    Invalid(String),
}

fn load(spec: &str) -> Result<NamedFan, Failure> {
    if let Some(name) = spec.strip_prefix('@') {
        return catalog_entry(name).ok_or_else(|| {
            let known = toric_alpha::catalog_names().join(", ");
            Failure::Usage(format!("unknown catalog entry '{name}' (known: {known})"))
        });
    }
    let path = PathBuf::from(spec);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_fan(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

/// Builds the report, failing with exit code 1 when the fan is not Fano.
fn report(named: &NamedFan, options: &ReportOptions, json: bool) -> Result<ReportDocument, Failure> {
    let doc = build_report(named, options).map_err(|e| Failure::Invalid(e.to_string()))?;
    if doc.diagnosis.is_fano {
        return Ok(doc);
    }
    if json {
        print_json(&doc);
    }
    let mut message = format!("{} is not a smooth Fano fan", named.name);
    for finding in &doc.diagnosis.failures {
        write!(message, "\n  {finding}").unwrap();
    }
    Err(Failure::Invalid(message))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check(input) => {
            let named = load(&input.fan)?;
            let diagnosis = validate_fan(&named.fan);
            if input.json {
                print_json(&json!({
                    "input": { "name": named.name, "digest": input_digest(&named.fan) },
                    "diagnosis": diagnosis,
                }));
            } else {
                print!("{}", text::diagnosis(&named.name, &diagnosis));
            }
            if !diagnosis.is_fano {
                return Err(Failure::Invalid(format!("{} failed validation", named.name)));
            }
        }
        Command::Symmetry { input } => {
            let named = load(&input.fan)?;
            let options = ReportOptions { group_elements: true, ..Default::default() };
            let doc = report(&named, &options, input.json)?;
            if input.json {
                print_json(&doc);
            } else {
                print!("{}", text::symmetry(&doc));
            }
        }
        Command::Alpha { input, certificate, table } => {
            let named = load(&input.fan)?;
            let options = ReportOptions { certificate, alpha_m_up_to: table, ..Default::default() };
            let doc = report(&named, &options, input.json)?;
            if input.json {
                print_json(&doc);
            } else {
                print!("{}", text::alpha(&doc));
            }
        }
        Command::Points { input, m, list } => {
            if m == 0 {
                return Err(Failure::Usage("--m must be at least 1".into()));
            }
            let named = load(&input.fan)?;
            let options = ReportOptions { lattice: Some((m, list)), ..Default::default() };
            let doc = report(&named, &options, input.json)?;
            if input.json {
                print_json(&doc);
            } else {
                print!("{}", text::points(&doc));
            }
        }
        Command::Barycenter { input } => {
            let named = load(&input.fan)?;
            let options = ReportOptions { barycenter: true, ..Default::default() };
            let doc = report(&named, &options, input.json)?;
            if input.json {
                print_json(&doc);
            } else {
                print!("{}", text::barycenter(&doc));
            }
        }
        Command::IntegralTest { input, alpha, cutoffs, direction, step } => {
            let alpha = parse_rational(&alpha).map_err(|e| Failure::Usage(format!("--alpha: {e}")))?;
            let direction = direction
                .map(|coords| {
                    coords
                        .iter()
                        .map(|c| parse_rational(c.trim()))
                        .collect::<Result<Vec<_>, _>>()
                        .map(RatVector::new)
                        .map_err(|e| Failure::Usage(format!("--direction: {e}")))
                })
                .transpose()?;
            if !(step.is_finite() && step > 0.0) {
                return Err(Failure::Usage("--step must be positive".into()));
            }
            let named = load(&input.fan)?;
            if let Some(v) = &direction {
                if v.dim() != named.fan.dim() {
                    return Err(Failure::Usage(format!(
                        "--direction has {} coordinates, the fan has rank {}",
                        v.dim(),
                        named.fan.dim()
                    )));
                }
            }
            let config = OracleConfig { step, ..OracleConfig::default() };
            let request = OracleRequest { alpha, direction, cutoffs, config };
            let options = ReportOptions { oracle: Some(request), ..Default::default() };
            let doc = match build_report(&named, &options) {
                Ok(doc) => doc,
                Err(toric_alpha::ReportError::Oracle(e)) => return Err(Failure::Usage(e.to_string())),
                Err(e) => return Err(Failure::Invalid(e.to_string())),
            };
            if !doc.diagnosis.is_fano {
                return report(&named, &ReportOptions::default(), input.json).map(|_| ());
            }
            if input.json {
                print_json(&doc);
            } else {
                print!("{}", text::oracle(&doc));
            }
        }
        Command::Catalog { json } => {
            let entries = catalog();
            if json {
                let listing: Vec<_> = entries
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "description": e.metadata.get("description"),
                            "dim": e.fan.dim(),
                            "rays": e.fan.rays().len(),
                        })
                    })
                    .collect();
                print_json(&listing);
            } else {
                print!("{}", text::catalog(&entries));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

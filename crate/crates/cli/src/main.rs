//! Command-line front end: parse representation documents, run the
//! operations, emit reports.
//!
//! Exit codes: 0 success, 1 validation error (malformed document, bad
//! arguments, decomposable input to `classify`), 2 internal inconsistency
//! (oracle disagreement or a failed witness audit).

mod document;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use kronq::decompose::decompose;
use kronq::ext::{closed_form, cohomology};
use kronq::model::{cone_hom_raw, scan_report, Check, ModelParams};
use kronq::oracle::{exhaustive_agreement, ExhaustiveConfig};
use kronq::rep::{random_base_change, random_rep, Profile, Representation};

use document::{from_representation, parse_field, to_representation, RepresentationDocument};
use report::ScanRow;

#[derive(Parser)]
#[command(name = "kronq", version, about = "Graded Kronecker quiver toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a representation into indecomposables with a verified base change
    Decompose(FileArgs),
    /// Bigraded cohomology of the endomorphism complex
    Ext(ExtArgs),
    /// Name the indecomposable class of an input (errors if decomposable)
    Classify(FileArgs),
    /// Scan indecomposables for manifold-compatible cohomology at d = 1 - n
    ScanManifolds(ScanArgs),
    /// Emit a seeded random representation document
    Random(RandomArgs),
    /// Exhaustive oracle agreement check over a prime field
    Check(CheckArgs),
}

#[derive(Args)]
struct FileArgs {
    /// Representation document (JSON)
    file: PathBuf,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExtArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    /// Also print the raw kernel/cokernel of the evaluation map
    /// (alpha, beta): V -> W (+) W[d]; its normalization is not asserted.
    #[arg(long)]
    cone_raw: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Sphere dimension n >= 2 (sets d = 1 - n)
    #[arg(long)]
    n: i64,
    /// Scan families up to this k
    #[arg(long)]
    kmax: usize,
    /// Comma-separated subset of checks:
    /// support,connected,top-class,duality,h1 (default: all)
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RandomArgs {
    /// Dimension profile, e.g. '{"V": {"0": 1, "2": 2}, "W": {"0": 1}}'
    #[arg(long)]
    profile: String,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    /// "Q" (default) or "Fp:<p>"
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long)]
    seed: u64,
    /// Additionally apply a seeded random invertible base change
    #[arg(long)]
    scramble: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Bound on dim V + dim W (<= 4)
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    #[arg(long)]
    prime: u32,
    /// Degree window width (<= 4)
    #[arg(long, default_value_t = 4)]
    window: usize,
    /// Arrow degrees to test
    #[arg(long, value_delimiter = ',', default_values_t = vec![-2i64, -1, 1], allow_hyphen_values = true)]
    d_values: Vec<i64>,
    /// Endomorphism-space enumeration bound
    #[arg(long, default_value_t = 9)]
    end_bound: usize,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &PathBuf) -> Result<Representation, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: RepresentationDocument =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    to_representation(&doc)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Decompose(args) => {
            let rep = load(&args.file)?;
            let dec = decompose(&rep).map_err(|e| e.to_string())?;
            if let Err(e) = dec.verify(&rep) {
                eprintln!("internal inconsistency: {e}");
                return Ok(ExitCode::from(2));
            }
            print!("{}", report::decompose_report(&rep, &dec, args.json));
            Ok(ExitCode::SUCCESS)
        }
        Command::Ext(args) => {
            let rep = load(&args.file)?;
            let (big, total) = cohomology(&rep).map_err(|e| e.to_string())?;
            let cone = if args.cone_raw {
                Some(cone_hom_raw(&rep).map_err(|e| e.to_string())?)
            } else {
                None
            };
            print!("{}", report::ext_report(&rep, &big, &total, cone.as_ref(), args.json));
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify(args) => {
            let rep = load(&args.file)?;
            let dec = decompose(&rep).map_err(|e| e.to_string())?;
            match dec.summands.as_slice() {
                [single] => {
                    if args.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&report::label_json(single)).unwrap()
                        );
                    } else {
                        println!("{}", report::label_line(single));
                    }
                    Ok(ExitCode::SUCCESS)
                }
                summands => {
                    let names: Vec<String> = summands.iter().map(report::label_line).collect();
                    Err(format!(
                        "input is not indecomposable: {} summands [{}]",
                        summands.len(),
                        names.join("; ")
                    ))
                }
            }
        }
        Command::ScanManifolds(args) => {
            let params = ModelParams::new(args.n).map_err(|e| e.to_string())?;
            let checks: Vec<Check> = if args.checks.is_empty() {
                Check::ALL.to_vec()
            } else {
                args.checks
                    .iter()
                    .map(|name| {
                        Check::from_name(name).ok_or_else(|| format!("unknown check '{name}'"))
                    })
                    .collect::<Result<_, _>>()?
            };
            let entries = scan_report(&params, args.kmax, &checks).map_err(|e| e.to_string())?;
            let rows: Vec<ScanRow> = entries
                .into_iter()
                .map(|(label, report)| {
                    let profile = closed_form(&label, params.d()).map_err(|e| e.to_string())?;
                    Ok(ScanRow { label, report, profile })
                })
                .collect::<Result<_, String>>()?;
            print!(
                "{}",
                report::scan_report_text(
                    params.n(),
                    params.d(),
                    args.kmax,
                    &checks,
                    &rows,
                    args.json
                )
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Random(args) => {
            let field = parse_field(&args.field)?;
            let profile = parse_profile(&args.profile)?;
            let rep = random_rep(&profile, args.d, field, args.seed).map_err(|e| e.to_string())?;
            let rep = if args.scramble {
                random_base_change(&rep, args.seed.wrapping_add(1)).0
            } else {
                rep
            };
            let doc = from_representation(&rep);
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let mut cfg =
                ExhaustiveConfig::new(args.max_dim, args.window, args.prime, args.d_values);
            cfg.end_dim_bound = args.end_bound;
            let report = exhaustive_agreement(&cfg).map_err(|e| e.to_string())?;
            print!("{}", report::check_report(&report, args.json));
            if report.consistent() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn parse_profile(text: &str) -> Result<Profile, String> {
    #[derive(serde::Deserialize)]
    struct ProfileDoc {
        #[serde(rename = "V", default)]
        v: BTreeMap<String, usize>,
        #[serde(rename = "W", default)]
        w: BTreeMap<String, usize>,
    }
    let doc: ProfileDoc = serde_json::from_str(text).map_err(|e| format!("profile: {e}"))?;
    let parse = |map: BTreeMap<String, usize>, which: &str| -> Result<Vec<(i64, usize)>, String> {
        map.into_iter()
            .map(|(key, dim)| {
                key.parse::<i64>()
                    .map(|deg| (deg, dim))
                    .map_err(|_| format!("profile {which}: invalid degree key '{key}'"))
            })
            .collect()
    };
    Ok(Profile { v: parse(doc.v, "V")?, w: parse(doc.w, "W")? })
}

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rankrm::trials::Algorithm;

mod code;
mod commands;
mod error;

use code::{write_text, Code};
use commands::{BenchOptions, TowerOptions};
use error::CliError;

/// θ-Reed–Muller rank-metric codes: build specs, encode, corrupt, decode,
/// benchmark, and compare decoding radii.
#[derive(Debug, Parser)]
#[command(name = "rankrm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print N, k and d of RM(order, shape).
    Params {
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        #[arg(long)]
        order: usize,
    },
    /// Write a spec file for a tower and a code order.
    Spec {
        /// finite, kummer or artin_schreier.
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: Option<u64>,
        /// Rationals for kummer, hex bitmask polynomials in t for artin_schreier.
        #[arg(long, value_delimiter = ',')]
        radicands: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        #[arg(long)]
        order: Option<usize>,
        /// Makes a Reed–Solomon spec of dimension k over F_{p^e}.
        #[arg(long)]
        k: Option<usize>,
        /// Seed of the irreducible-polynomial search for finite towers.
        #[arg(long)]
        tower_seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode a message file, or a random message when only --seed is given.
    Encode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Add a random error of the given rank.
    Corrupt {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the planted error.
        #[arg(long)]
        error_out: Option<PathBuf>,
    },
    /// Decode a received word.
    Decode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        error_out: Option<PathBuf>,
        /// Append a JSON trial record to this file.
        #[arg(long)]
        record: Option<PathBuf>,
        /// Seed stored in the trial record.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        fallback: bool,
    },
    /// Planted-error trials per rank; CSV of mean ops and milliseconds.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        /// Ranks to sweep; defaults to 1 up to the decoding radius.
        #[arg(long, value_delimiter = ',')]
        rank: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append one JSON trial record per line to this file.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        fallback: bool,
        /// Run the trials on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// CSV of the asymptotic radius curves, or the radii of one code.
    Radius {
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_delimiter = ',', requires = "order")]
        shape: Vec<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: rankrm::trials::TrialError| e.to_string())
}

fn config_id(spec: &Path) -> String {
    spec.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn append(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(CliError::io(path))?;
    f.write_all(text.as_bytes()).map_err(CliError::io(path))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Params { shape, order } => {
            println!("{}", commands::params_line(&commands::params(&shape, order)?));
        }
        Command::Spec { family, p, radicands, shape, order, k, tower_seed, out } => {
            let opts = TowerOptions { family, p, radicands, shape, seed: tower_seed };
            let file = commands::make_spec(&opts, order, k)?;
            let json = serde_json::to_string_pretty(&file).expect("spec files serialize");
            write_text(&out, &(json + "\n"))?;
        }
        Command::Encode { spec, input, seed, out } => {
            let code = Code::load(&spec)?;
            let message = match (&input, seed) {
                (Some(path), _) => Some(code.parse_message(path)?),
                (None, Some(_)) => None,
                (None, None) => return Err(CliError::invalid("encode needs --in or --seed")),
            };
            let word = commands::encode(&code, message, seed.unwrap_or(0))?;
            write_text(&out, &word.to_text())?;
        }
        Command::Corrupt { spec, input, rank, seed, out, error_out } => {
            let code = Code::load(&spec)?;
            let word = code.parse_word(&input)?;
            let (y, e) = commands::corrupt(&code, &word, rank, seed)?;
            write_text(&out, &y.to_text())?;
            if let Some(path) = error_out {
                write_text(&path, &e.to_text())?;
            }
        }
        Command::Decode { spec, input, algo, out, error_out, record, seed, fallback } => {
            let code = Code::load(&spec)?;
            let y = code.parse_word(&input)?;
            let (result, rec) = commands::decode_with_record(&code, &config_id(&spec), &y, algo, fallback, seed);
            if let Some(path) = &record {
                append(path, &commands::to_json_line(&rec))?;
            }
            let decoded = result?;
            write_text(&out, &decoded.codeword.to_text())?;
            if let Some(path) = error_out {
                write_text(&path, &decoded.error.to_text())?;
            }
            eprintln!("rank {}{}", decoded.rank, if decoded.used_fallback { " (fallback)" } else { "" });
        }
        Command::Bench { spec, algo, rank, trials, seed, out, records, fallback, sequential } => {
            let code = Code::load(&spec)?;
            let ranks = if rank.is_empty() { (1..=code.setup().radius()).collect() } else { rank };
            let opts = BenchOptions { algo, ranks, trials, seed, fallback, sequential };
            let (rows, recs) = commands::bench(&code, &config_id(&spec), &opts)?;
            if let Some(path) = &records {
                let lines: String = recs.iter().map(commands::to_json_line).collect();
                append(path, &lines)?;
            }
            emit(out.as_deref(), &commands::bench_csv(&rows)?)?;
            for (t, (ok, total)) in commands::success_summary(&recs) {
                eprintln!("t={t}: {ok}/{total} recovered");
            }
        }
        Command::Radius { steps, shape, order, out } => match order {
            Some(order) => {
                let r = commands::radius_point(&shape, order)?;
                let text = match r.pair {
                    Some((a, b)) => format!("ours={} prior={} pair=({a},{b})\n", r.ours, r.prior),
                    None => format!("ours={} prior={}\n", r.ours, r.prior),
                };
                emit(out.as_deref(), &text)?;
            }
            None => emit(out.as_deref(), &commands::radius_plot(steps))?,
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

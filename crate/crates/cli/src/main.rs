use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use irs_core::bounds::BoundsInput;
use irs_core::indep::{self, ColumnOutcome};
use irs_core::irs::{self as irs_word, ErrorMode};
use irs_core::sim::{self, Decoder, SimConfig};
use irs_core::{collab, selftest, DecodeOutcome, Field, Matrix, ReceivedWord, RsSpec, Variant};

mod grid;

#[derive(Parser, Debug)]
#[command(name = "irs", version, about = "Collaborative decoding of interleaved Reed-Solomon codes")]
struct Cli {
    #[command(flatten)]
    code: CodeArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// Extension degree w of GF(2^w).
    #[arg(long, global = true, default_value_t = 8)]
    field_bits: u32,
    /// Primitive polynomial in hex, bit w set.
    #[arg(long, global = true, default_value = "11d")]
    poly: String,
    #[arg(long, global = true, default_value_t = 188)]
    k: usize,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Shortened)]
    variant: VariantArg,
    /// Number of shortened positions.
    #[arg(long, global = true, default_value_t = 51)]
    shorten: usize,
    /// Interleaving depth.
    #[arg(long, global = true, default_value_t = 16)]
    l: usize,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Extended,
    Cyclic,
    Shortened,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Raw,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Collab,
    Indep,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode a k x l information matrix into the transmitted n x l word.
    Encode {
        /// Input file (stdin if omitted).
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decode a received n x l word.
    Decode {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Use the incremental sub-matrix decoder.
        #[arg(long)]
        incremental: bool,
        /// Columns used to confirm a dependency in incremental mode.
        #[arg(long, default_value_t = 2)]
        check_cols: usize,
        #[arg(long, value_enum, default_value_t = DecoderArg::Collab)]
        decoder: DecoderArg,
        /// Print `f=<f> rows=<list>` to stderr on success.
        #[arg(long)]
        report: bool,
    },
    /// Print the analytical FER and FER_e curves as CSV.
    Bounds {
        #[arg(long, default_value = "1e-3:1e-1:log10x21")]
        grid: String,
        /// Transmitted rows per word (defaults to the code length).
        #[arg(long)]
        n: Option<usize>,
        /// Field size (defaults to 2^field-bits).
        #[arg(long)]
        q: Option<usize>,
    },
    /// Monte-Carlo FER over a p_i grid, next to the analytical bounds.
    Simulate {
        #[arg(long, default_value = "0.04:0.10:0.01")]
        grid: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = all cores); output does not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = DecoderArg::Collab)]
        decoder: DecoderArg,
        #[arg(long)]
        incremental: bool,
        #[arg(long, default_value_t = 2)]
        check_cols: usize,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

/// Exit 2 errors: bad flags, unreadable input, malformed files.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> UsageError {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

impl CodeArgs {
    fn field(&self) -> CliResult<Field> {
        let hex = self.poly.trim_start_matches("0x").trim_start_matches("0X");
        let poly =
            u32::from_str_radix(hex, 16).map_err(|_| UsageError(format!("invalid hex polynomial `{}`", self.poly)))?;
        Ok(Field::new(self.field_bits, poly)?)
    }

    fn spec(&self) -> CliResult<RsSpec> {
        let variant = match self.variant {
            VariantArg::Extended => Variant::Extended,
            VariantArg::Cyclic => Variant::Cyclic,
            VariantArg::Shortened => Variant::Shortened(self.shorten),
        };
        Ok(RsSpec::new(Arc::new(self.field()?), self.k, variant)?)
    }

    fn write(&self, bytes: &[u8]) -> CliResult<()> {
        match &self.out {
            Some(p) => fs::write(p, bytes).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> CliResult<Vec<u8>> {
    match path {
        Some(p) => fs::read(p).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn read_matrix(bytes: &[u8], format: Format, rows: usize, cols: usize, q: usize) -> CliResult<Matrix> {
    let m = match format {
        Format::Text => {
            let text = std::str::from_utf8(bytes).map_err(|_| UsageError("input is not UTF-8 text".into()))?;
            let (m, file_q) = irs_word::parse_matrix(text)?;
            if file_q != q {
                return Err(UsageError(format!("input is over a field of size {file_q}, code uses {q}")));
            }
            m
        }
        Format::Raw => {
            if q > 256 {
                return Err(UsageError("raw format needs q <= 256".into()));
            }
            if let Some(b) = bytes.iter().find(|&&b| b as usize >= q) {
                return Err(UsageError(format!("raw symbol {b:#x} out of range for q={q}")));
            }
            irs_word::matrix_from_raw(bytes, rows, cols)?
        }
    };
    if m.rows() != rows || m.cols() != cols {
        return Err(UsageError(format!("expected a {rows}x{cols} matrix, got {}", m.shape())));
    }
    Ok(m)
}

fn render(m: &Matrix, format: Format, q: usize) -> CliResult<Vec<u8>> {
    match format {
        Format::Text => Ok(irs_word::format_matrix(m, q).into_bytes()),
        Format::Raw if q <= 256 => Ok(irs_word::matrix_to_raw(m)),
        Format::Raw => Err(UsageError("raw format needs q <= 256".into())),
    }
}

fn join(rows: &[usize]) -> String {
    rows.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_encode(code: &CodeArgs, input: &Option<PathBuf>, format: Format) -> CliResult<ExitCode> {
    let spec = code.spec()?;
    let q = spec.field().size();
    let info = read_matrix(&read_input(input)?, format, spec.k(), code.l, q)?;
    let word = irs_word::encode_irs(&info, &spec)?;
    code.write(&render(word.matrix(), format, q)?)?;
    Ok(ExitCode::SUCCESS)
}

struct DecodeFlags {
    format: Format,
    incremental: bool,
    check_cols: usize,
    decoder: DecoderArg,
    report: bool,
}

fn cmd_decode(code: &CodeArgs, input: &Option<PathBuf>, flags: DecodeFlags) -> CliResult<ExitCode> {
    let spec = code.spec()?;
    let q = spec.field().size();
    let y = ReceivedWord::from_matrix(read_matrix(&read_input(input)?, flags.format, spec.n(), code.l, q)?);
    let (word, rows) = match flags.decoder {
        DecoderArg::Collab => {
            let out = if flags.incremental {
                collab::decode_incremental(&y, &spec, flags.check_cols)?
            } else {
                collab::decode(&y, &spec)?
            };
            match out {
                DecodeOutcome::Success(d) => (d.word.into_matrix(), d.support),
                DecodeOutcome::DetectedFailure(reason) => {
                    eprintln!("decode failure: {reason}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        DecoderArg::Indep => {
            let mut fixed = Matrix::zeros(spec.n(), code.l);
            let mut rows = Vec::new();
            for c in 0..code.l {
                match indep::decode_transmitted_column(&y.matrix().column(c), &spec)? {
                    ColumnOutcome::Corrected { codeword, errors } => {
                        fixed.set_column(c, &codeword);
                        rows.extend(errors.into_iter().map(|(p, _)| p));
                    }
                    ColumnOutcome::Failure => {
                        eprintln!("decode failure: column {c} not decodable");
                        return Ok(ExitCode::from(1));
                    }
                }
            }
            rows.sort_unstable();
            rows.dedup();
            (fixed, rows)
        }
    };
    code.write(&render(&word, flags.format, q)?)?;
    if flags.report {
        eprintln!("f={} rows={}", rows.len(), join(&rows));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(code: &CodeArgs, grid: &str, n: Option<usize>, q: Option<usize>) -> CliResult<ExitCode> {
    let grid = grid::parse_grid(grid).map_err(UsageError)?;
    let q = match q {
        Some(q) => q,
        None => 1usize
            .checked_shl(code.field_bits)
            .filter(|_| code.field_bits <= 16)
            .ok_or(UsageError("field bits out of range".into()))?,
    };
    let n = match n {
        Some(n) => n,
        None => code.spec()?.n(),
    };
    if code.k >= n {
        return Err(UsageError(format!("k = {} must be below n = {n}", code.k)));
    }
    let base = BoundsInput::new(q, code.l, n - code.k, n, 0.0)?;
    code.write(sim::bounds_csv(&base, &grid)?.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

struct SimFlags {
    trials: u64,
    seed: u64,
    workers: usize,
    decoder: DecoderArg,
    incremental: bool,
    check_cols: usize,
}

fn cmd_simulate(code: &CodeArgs, grid: &str, flags: SimFlags) -> CliResult<ExitCode> {
    if flags.trials == 0 {
        return Err(UsageError("--trials must be at least 1".into()));
    }
    let grid = grid::parse_grid(grid).map_err(UsageError)?;
    let spec = code.spec()?;
    let mut config = SimConfig::new(spec, code.l, ErrorMode::BernoulliRows(0.0), flags.trials, flags.seed);
    config.workers = flags.workers;
    config.decoder = match (flags.decoder, flags.incremental) {
        (DecoderArg::Indep, _) => Decoder::IndependentColumns,
        (DecoderArg::Collab, true) => Decoder::Incremental(flags.check_cols),
        (DecoderArg::Collab, false) => Decoder::Collaborative,
    };
    config.validate()?;
    let rows = sim::sweep(&config, &grid)?;
    code.write(sim::sweep_csv(&rows).as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest() -> ExitCode {
    let mut ok = true;
    for c in selftest::run_all() {
        if c.passed {
            println!("PASS {}", c.name);
        } else {
            ok = false;
            println!("FAIL {}: {}", c.name, c.detail);
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Encode { input, format } => cmd_encode(&cli.code, input, *format),
        Command::Decode { input, format, incremental, check_cols, decoder, report } => cmd_decode(
            &cli.code,
            input,
            DecodeFlags {
                format: *format,
                incremental: *incremental,
                check_cols: *check_cols,
                decoder: *decoder,
                report: *report,
            },
        ),
        Command::Bounds { grid, n, q } => cmd_bounds(&cli.code, grid, *n, *q),
        Command::Simulate { grid, trials, seed, workers, decoder, incremental, check_cols } => cmd_simulate(
            &cli.code,
            grid,
            SimFlags {
                trials: *trials,
                seed: *seed,
                workers: *workers,
                decoder: *decoder,
                incremental: *incremental,
                check_cols: *check_cols,
            },
        ),
        Command::Selftest => Ok(cmd_selftest()),
    };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

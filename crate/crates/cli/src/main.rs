use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use goppa_ld::binmat::BitVector;
use goppa_ld::params::{
    bounds, recompute_ratios, recompute_table, render, search, Countermeasure, SearchQuery,
    BOUNDS_HEADER, ROW_HEADER,
};
use goppa_ld::scheme::{decrypt, encrypt, keygen, Cryptogram, Decoder, KeyPair};
use goppa_ld::security::Variant;

#[derive(Parser)]
#[command(name = "goppa-ld", version, about = "Goppa-code McEliece toolkit with list decoding")]
struct Cli {
    /// Seed as hex bytes, used by keygen and encrypt.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Delimiter of tabular output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Generic,
    Dyadic,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Generic => Variant::Generic,
            VariantArg::Dyadic => Variant::Dyadic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Ud,
    Ld,
}

impl From<DecoderArg> for Decoder {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Ud => Decoder::Ud,
            DecoderArg::Ld => Decoder::Ld,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CountermeasureArg {
    Cm1,
    Cm2,
    None,
}

impl From<CountermeasureArg> for Countermeasure {
    fn from(c: CountermeasureArg) -> Self {
        match c {
            CountermeasureArg::Cm1 => Countermeasure::Cm1,
            CountermeasureArg::Cm2 => Countermeasure::Cm2,
            CountermeasureArg::None => Countermeasure::None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Recompute a reference table and flag rows that disagree.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        table: u8,
    },
    /// Find the smallest key reaching a target workfactor.
    Search {
        #[arg(long)]
        target: f64,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, value_enum)]
        decoder: DecoderArg,
        #[arg(long, value_enum, default_value_t = CountermeasureArg::None)]
        countermeasure: CountermeasureArg,
    },
    /// Normalized decoding radii for t = 1..=tmax.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        tmax: u64,
    },
    /// Generate a key file.
    Keygen {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum)]
        decoder: DecoderArg,
    },
    /// Encrypt a payload file under a key file.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// Use only the first this many bits of the payload file.
        #[arg(long)]
        bits: Option<usize>,
    },
    /// Decrypt a ciphertext file with a key file.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn seed(cli: &Cli) -> Result<Vec<u8>> {
    let Some(s) = &cli.seed else {
        bail!("--seed <hex> is required for this command");
    };
    let bytes = hex::decode(s).context("--seed must be hex")?;
    if bytes.is_empty() {
        bail!("--seed must not be empty");
    }
    Ok(bytes)
}

fn read_key(path: &PathBuf) -> Result<KeyPair> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    KeyPair::from_bytes(&bytes).with_context(|| format!("parsing key {}", path.display()))
}

/// Runs a command; `Ok(true)` means the output contains mismatching rows.
fn run(cli: &Cli) -> Result<bool> {
    let delim = cli.format.delimiter();
    match &cli.command {
        Command::Table { table: 4 } => {
            let rows = recompute_ratios()?;
            let mismatch = rows.iter().any(|(a, b)| a != b);
            let body = rows.iter().map(|(row, reference)| {
                vec![
                    row.security.to_string(),
                    row.dlp_keysize.to_string(),
                    row.mceliece_keysize.to_string(),
                    format!("{}.{}", row.ratio / 10, row.ratio % 10),
                    status(row == reference).into(),
                ]
            });
            let header = ["security", "dlp_keysize", "mceliece_keysize", "ratio", "status"];
            emit(&cli.out, render(&header, body, delim).as_bytes())?;
            Ok(mismatch)
        }
        Command::Table { table } => {
            let rows = recompute_table(*table)?;
            let mismatch = rows.iter().any(|c| !c.is_match());
            let body = rows.iter().map(|c| {
                let mut f = c.row.fields();
                f.push(status(c.is_match()).into());
                f.push(c.mismatches.join("; "));
                f
            });
            let mut header = ROW_HEADER.to_vec();
            header.extend(["status", "mismatches"]);
            emit(&cli.out, render(&header, body, delim).as_bytes())?;
            Ok(mismatch)
        }
        Command::Search {
            target,
            variant,
            decoder,
            countermeasure,
        } => {
            let q = SearchQuery {
                target_wf: *target,
                variant: (*variant).into(),
                decoder: (*decoder).into(),
                countermeasure: (*countermeasure).into(),
            };
            let Some(row) = search(&q)? else {
                bail!("no feasible parameters for target {target}");
            };
            emit(&cli.out, render(&ROW_HEADER, [row.fields()], delim).as_bytes())?;
            Ok(false)
        }
        Command::Bounds { n, tmax } => {
            let rows = bounds(*n, *tmax)?;
            let text = render(&BOUNDS_HEADER, rows.iter().map(|r| r.fields()), delim);
            emit(&cli.out, text.as_bytes())?;
            Ok(false)
        }
        Command::Keygen {
            variant,
            m,
            n,
            r,
            decoder,
        } => {
            let kp = keygen((*variant).into(), *m, *n, *r, (*decoder).into(), &seed(cli)?)?;
            let p = kp.public.params;
            eprintln!(
                "{} {} key: m={} n={} k={} r={} w={} public key {} bits",
                p.variant,
                p.decoder,
                p.m,
                p.n,
                p.k,
                p.r,
                p.w,
                p.keysize_bits()
            );
            emit(&cli.out, &kp.to_bytes())?;
            Ok(false)
        }
        Command::Encrypt { key, input, bits } => {
            let kp = read_key(key)?;
            let data = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
            let all = BitVector::from_bytes(&data, data.len() * 8)?;
            let len = bits.unwrap_or(all.len());
            if len > all.len() {
                bail!("--bits {len} exceeds the {} bits in the payload file", all.len());
            }
            let payload = BitVector::from_bits(all.iter().take(len));
            let ct = encrypt(&kp.public, &payload, &seed(cli)?)?;
            emit(&cli.out, &ct.to_bytes())?;
            Ok(false)
        }
        Command::Decrypt { key, input } => {
            let kp = read_key(key)?;
            let data = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
            let ct = Cryptogram::from_bytes(&data).context("parsing ciphertext")?;
            let payload = decrypt(&kp.secret, &ct)?;
            emit(&cli.out, &payload.to_bytes())?;
            Ok(false)
        }
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "MATCH"
    } else {
        "MISMATCH"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

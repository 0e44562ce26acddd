//! The `pell` command line.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 when a key, ciphertext
//! or file cannot be read, parsed or used. Failures print one line on
//! standard error.
//!
//! With `--seed S` every random choice comes from a ChaCha20 stream
//! seeded by `S`, so the output files are reproducible across platforms.
//! Without it the stream is seeded from the operating system.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::bench;
use crate::error::Error;
use crate::pke::{self, Ciphertext, Message, PublicKey, SchemeId, SecretKey};
use crate::wire;

#[derive(Parser, Debug)]
#[command(name = "pell", version, about = "ElGamal encryption on Pell conics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair.
    Keygen {
        #[arg(long, value_parser = parse_scheme)]
        scheme: SchemeId,
        #[arg(long, value_parser = clap::value_parser!(u64).range(8..))]
        bits: u64,
        #[arg(long)]
        out_pk: PathBuf,
        #[arg(long)]
        out_sk: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Encrypt a file of raw bytes.
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decrypt a ciphertext file back to raw bytes.
    Decrypt {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time key generation, encryption and decryption; write a CSV report.
    Bench {
        #[arg(long, value_delimiter = ',', value_parser = parse_scheme, default_value = "points,params,alt")]
        schemes: Vec<SchemeId>,
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(8..), required = true)]
        bits: Vec<u64>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        reps: u32,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print serialized key, plaintext and ciphertext sizes in bits.
    Sizes {
        #[arg(long, value_parser = clap::value_parser!(u64).range(8..))]
        bits: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_scheme(s: &str) -> Result<SchemeId, String> {
    s.parse().map_err(|_| format!("expected one of points, params, alt; got {s:?}"))
}

fn rng_from(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), String> {
    fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, String> {
    String::from_utf8(read(path)?).map_err(|_| format!("{}: not UTF-8", path.display()))
}

fn ctx(path: &Path) -> impl Fn(Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn load_pk(path: &Path) -> Result<PublicKey, String> {
    let rec = wire::parse(&read_text(path)?).map_err(ctx(path))?;
    PublicKey::from_record(&rec).map_err(ctx(path))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), String> {
    match cmd {
        Command::Keygen {
            scheme,
            bits,
            out_pk,
            out_sk,
            seed,
        } => {
            let mut rng = rng_from(seed);
            let (pk, sk) = pke::keygen(scheme, bits, &mut rng).map_err(|e| e.to_string())?;
            write(&out_pk, pk.to_record().serialize().as_bytes())?;
            write(&out_sk, sk.to_record(scheme).serialize().as_bytes())?;
        }
        Command::Encrypt {
            pk,
            input,
            out,
            seed,
        } => {
            let key = load_pk(&pk)?;
            let data = read(&input)?;
            let mut rng = rng_from(seed);
            let block = Message::max_len(key.scheme(), key.bits());
            if block == 0 {
                return Err("modulus too small to carry a byte".into());
            }
            let mut text = String::new();
            for chunk in data.chunks(block) {
                let ct = pke::encrypt_message(&key, &Message::new(chunk), &mut rng)
                    .map_err(|e| e.to_string())?;
                text.push_str(&ct.to_record(key.field()).serialize());
            }
            write(&out, text.as_bytes())?;
        }
        Command::Decrypt { pk, sk, input, out } => {
            let key = load_pk(&pk)?;
            let sk_rec = wire::parse(&read_text(&sk)?).map_err(ctx(&sk))?;
            let (scheme, secret) = SecretKey::from_record(&sk_rec).map_err(ctx(&sk))?;
            if scheme != key.scheme() {
                return Err(Error::SchemeMismatch.to_string());
            }
            let records = wire::parse_many(&read_text(&input)?).map_err(ctx(&input))?;
            let mut data = Vec::new();
            for rec in &records {
                let ct = Ciphertext::from_record(rec, &key).map_err(ctx(&input))?;
                let msg = pke::decrypt_message(&key, &secret, &ct).map_err(ctx(&input))?;
                data.extend_from_slice(msg.as_bytes());
            }
            write(&out, &data)?;
        }
        Command::Bench {
            schemes,
            bits,
            reps,
            csv,
            seed,
        } => {
            let report = bench::bench(&schemes, &bits, reps, seed).map_err(|e| e.to_string())?;
            let file = fs::File::create(&csv).map_err(|e| format!("{}: {e}", csv.display()))?;
            report.write_csv(file).map_err(ctx(&csv))?;
        }
        Command::Sizes { bits, seed } => {
            let rows = bench::measure_sizes_seeded(bits, seed).map_err(|e| e.to_string())?;
            out.write_all(bench::format_sizes(&rows).as_bytes())
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let line = rendered.lines().next().unwrap_or("usage error");
                    let _ = writeln!(err, "{line}");
                    1
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(msg) => {
            let _ = writeln!(err, "error: {}", msg.replace('\n', " "));
            2
        }
    }
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

//! Size accounting and timing harness for the three schemes.
//!
//! Every instance is derived from a 64-bit seed. For a given `(seed, n)`
//! the prime `p = 2p' - 1` is generated once and shared by all schemes and
//! repetitions; each repetition then draws its own `d`, generator, key
//! pair, message and nonce from a ChaCha20 stream keyed by
//! `(seed, n, scheme, rep)`. The same seed therefore reproduces the same
//! instances and the same operation counts on any platform.
//!
//! `keygen_setup` times the choice of `d` and the generator,
//! `keygen_keys` the secret exponent and public element, and `keygen`
//! their sum per repetition. Prime generation is not timed. Counts cover
//! the metered group arithmetic; the generator search in `keygen_setup`
//! is not metered.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, OpCounter, OpCounts};
use crate::pke::{self, GroupSetup, SchemeId, R_PAD};

/// Payload sizes of one scheme at one modulus size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeRow {
    pub scheme: SchemeId,
    pub n: u64,
    pub pk_bits: u64,
    pub sk_bits: u64,
    pub capacity_bits: u64,
    pub reserve_bits: u64,
    pub ct_bits: u64,
}

impl SizeRow {
    /// Capacity plus the encoding reserve: `n`, `n` or `2n`.
    pub fn plaintext_bits(&self) -> u64 {
        self.capacity_bits + self.reserve_bits
    }
}

/// Instantiates every scheme at `n` bits and measures serialized payloads.
pub fn measure_sizes(n: u64) -> Result<Vec<SizeRow>> {
    measure_sizes_seeded(n, 0)
}

pub fn measure_sizes_seeded(n: u64, seed: u64) -> Result<Vec<SizeRow>> {
    let mut rng = ChaCha20Rng::from_seed(stream_seed(seed, n, 0xff, 0));
    let ctx = FieldContext::generate(n, &mut rng)?;
    SchemeId::ALL
        .iter()
        .map(|&scheme| {
            let (pk, sk) = pke::keygen_in(scheme, &ctx, &mut rng)?;
            let msg = rng.gen_biguint(scheme.capacity_bits(n));
            let ct = pke::encrypt(&pk, &msg, &mut rng)?;
            Ok(SizeRow {
                scheme,
                n,
                pk_bits: pk.to_record().payload_bits(n),
                sk_bits: sk.to_record(scheme).payload_bits(n),
                capacity_bits: scheme.capacity_bits(n),
                reserve_bits: scheme.reserve_bits(),
                ct_bits: ct.to_record(pk.field()).payload_bits(n),
            })
        })
        .collect()
}

/// Renders size rows as an aligned text table.
pub fn format_sizes(rows: &[SizeRow]) -> String {
    let mut out = format!(
        "{:<8} {:>6} {:>8} {:>8} {:>10} {:>8} {:>8}\n",
        "scheme", "n", "pk", "sk", "plaintext", "reserve", "ct"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<8} {:>6} {:>8} {:>8} {:>10} {:>8} {:>8}\n",
            r.scheme.name(),
            r.n,
            r.pk_bits,
            r.sk_bits,
            r.plaintext_bits(),
            r.reserve_bits,
            r.ct_bits
        ));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operation {
    Keygen,
    KeygenSetup,
    KeygenKeys,
    Encrypt,
    Decrypt,
}

impl Operation {
    pub const ALL: [Operation; 5] = [
        Operation::Keygen,
        Operation::KeygenSetup,
        Operation::KeygenKeys,
        Operation::Encrypt,
        Operation::Decrypt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operation::Keygen => "keygen",
            Operation::KeygenSetup => "keygen_setup",
            Operation::KeygenKeys => "keygen_keys",
            Operation::Encrypt => "encrypt",
            Operation::Decrypt => "decrypt",
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One CSV row. Counts are per-repetition means.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub scheme: String,
    pub n: u64,
    pub operation: String,
    pub mean_seconds: f64,
    pub std_seconds: f64,
    pub reps: u32,
    pub exp_count: f64,
    pub mul_count: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, scheme: SchemeId, n: u64, op: Operation) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme.name() && r.n == n && r.operation == op.name())
    }

    /// Writes a header row and one line per row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wtr.serialize(row)
                .map_err(|e| Error::InvalidValue(format!("csv: {e}")))?;
        }
        wtr.flush()
            .map_err(|e| Error::InvalidValue(format!("csv: {e}")))
    }
}

fn stream_seed(seed: u64, n: u64, scheme: u8, rep: u32) -> [u8; 32] {
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s[8..16].copy_from_slice(&n.to_le_bytes());
    s[16] = scheme;
    s[20..24].copy_from_slice(&rep.to_le_bytes());
    s
}

/// Raw per-repetition measurements of one `(scheme, n, operation)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub scheme: SchemeId,
    pub n: u64,
    pub operation: Operation,
    pub seconds: Vec<f64>,
    /// Totals over all repetitions.
    pub exp: u64,
    pub mul: u64,
}

impl Samples {
    fn new(scheme: SchemeId, n: u64, operation: Operation) -> Self {
        Samples {
            scheme,
            n,
            operation,
            seconds: Vec::new(),
            exp: 0,
            mul: 0,
        }
    }

    fn push(&mut self, secs: f64, c: OpCounts) {
        self.seconds.push(secs);
        self.exp += c.exp;
        self.mul += c.mul;
    }

    pub fn median_seconds(&self) -> f64 {
        let mut v = self.seconds.clone();
        v.sort_by(f64::total_cmp);
        let k = v.len();
        if k % 2 == 1 {
            v[k / 2]
        } else {
            (v[k / 2 - 1] + v[k / 2]) / 2.0
        }
    }

    /// Mean, sample standard deviation and per-repetition mean counts.
    pub fn to_row(&self) -> BenchRow {
        let k = self.seconds.len() as f64;
        let mean = self.seconds.iter().sum::<f64>() / k;
        let var = if self.seconds.len() > 1 {
            self.seconds.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        BenchRow {
            scheme: self.scheme.name().to_string(),
            n: self.n,
            operation: self.operation.name().to_string(),
            mean_seconds: mean,
            std_seconds: var.sqrt(),
            reps: self.seconds.len() as u32,
            exp_count: self.exp as f64 / k,
            mul_count: self.mul as f64 / k,
        }
    }
}

/// Times every operation over `reps` fresh instances per `(scheme, n)`.
pub fn bench(schemes: &[SchemeId], sizes: &[u64], reps: u32, seed: u64) -> Result<BenchReport> {
    let rows = bench_samples(schemes, sizes, reps, seed)?
        .iter()
        .map(Samples::to_row)
        .collect();
    Ok(BenchReport { rows })
}

/// [`bench`] without aggregation, sorted by scheme name, `n` and operation.
pub fn bench_samples(schemes: &[SchemeId], sizes: &[u64], reps: u32, seed: u64) -> Result<Vec<Samples>> {
    if reps == 0 {
        return Err(Error::InvalidValue("reps must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for &n in sizes {
        let mut rng = ChaCha20Rng::from_seed(stream_seed(seed, n, 0xff, 0));
        let ctx = FieldContext::generate(n, &mut rng)?;
        for &scheme in schemes {
            cells.extend(bench_cell(&ctx, scheme, reps, seed)?);
        }
    }
    cells.sort_by(|a, b| {
        (a.scheme.name(), a.n, a.operation.name()).cmp(&(b.scheme.name(), b.n, b.operation.name()))
    });
    Ok(cells)
}

fn bench_cell(ctx: &FieldContext, scheme: SchemeId, reps: u32, seed: u64) -> Result<Vec<Samples>> {
    let n = ctx.bits();
    let mut setup_s = Samples::new(scheme, n, Operation::KeygenSetup);
    let mut keys_s = Samples::new(scheme, n, Operation::KeygenKeys);
    let mut keygen_s = Samples::new(scheme, n, Operation::Keygen);
    let mut enc_s = Samples::new(scheme, n, Operation::Encrypt);
    let mut dec_s = Samples::new(scheme, n, Operation::Decrypt);
    for rep in 0..reps {
        let mut rng = ChaCha20Rng::from_seed(stream_seed(seed, n, scheme as u8, rep));

        let t = Instant::now();
        let setup = GroupSetup::generate(scheme, ctx, &mut rng)?;
        let t_setup = t.elapsed().as_secs_f64();
        setup_s.push(t_setup, OpCounts::default());

        let counter = OpCounter::new();
        let t = Instant::now();
        let (pk, sk) = setup.keys_metered(&mut rng, &counter);
        let t_keys = t.elapsed().as_secs_f64();
        keys_s.push(t_keys, counter.counts());
        keygen_s.push(t_setup + t_keys, counter.counts());

        let msg = rng.gen_biguint(scheme.capacity_bits(n));
        let counter = OpCounter::new();
        let t = Instant::now();
        let ct = pke::encrypt_metered(&pk, &msg, R_PAD, &mut rng, &counter)?;
        enc_s.push(t.elapsed().as_secs_f64(), counter.counts());

        let counter = OpCounter::new();
        let t = Instant::now();
        let back: BigUint = pke::decrypt_metered(&pk, &sk, &ct, R_PAD, &counter)?;
        dec_s.push(t.elapsed().as_secs_f64(), counter.counts());
        if back != msg {
            return Err(Error::InvalidValue("benchmark round trip failed".into()));
        }
    }
    Ok(vec![keygen_s, setup_s, keys_s, enc_s, dec_s])
}

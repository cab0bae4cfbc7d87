use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kzoom::cipher::{ChainMode, CiphertextFormat};
use kzoom::prng::ByteOrder;
use kzoom::seed::DEFAULT_MASTER_SEED;
use kzoom::{EvalOrder, Precision};

/// Ergodic cipher and k-logistic generator toolkit.
///
/// Exit codes: 0 ok, 2 bad key or configuration, 3 orbit or return-time
/// failure, 4 bad ciphertext, 5 failed `--assert`, 64 usage error.
#[derive(Debug, Parser)]
#[command(name = "kzoom", version)]
pub struct Cli {
    /// Master seed for every random choice a command makes.
    #[arg(long, global = true, env = "KZOOM_SEED", default_value_t = DEFAULT_MASTER_SEED)]
    pub seed: u64,

    /// Worker threads for experiments. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key file and print its fingerprint.
    Keygen(KeygenArgs),
    /// Encrypt a file byte by byte.
    Encrypt(EncryptArgs),
    /// Recover the plaintext of a ciphertext file.
    Decrypt(DecryptArgs),
    /// Write raw 32-bit words from a zoomed orbit.
    Gen(GenArgs),
    /// Run an experiment and write its CSV.
    #[command(subcommand)]
    Analyze(Analyze),
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    /// Where to write the key.
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub x0: Option<String>,
    /// Zoom depth.
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of sites S.
    #[arg(long)]
    pub sites: Option<u32>,
    #[arg(long)]
    pub x_min: Option<String>,
    #[arg(long)]
    pub x_max: Option<String>,
    /// Transient N0.
    #[arg(long)]
    pub n0: Option<u32>,
    /// Largest accepted count.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Probability of skipping a visit.
    #[arg(long)]
    pub eta: Option<String>,
    /// `binary64`, `decimal` or `decimal:P`.
    #[arg(long)]
    pub precision: Option<Precision>,
    /// `zoomed` or `underlying`.
    #[arg(long)]
    pub chain: Option<ChainMode>,
    /// `scaled_first` or `product_first`.
    #[arg(long)]
    pub order: Option<EvalOrder>,
    /// Use the cyclic association 1, 2, …, S−1, S instead of a shuffled one.
    #[arg(long)]
    pub cyclic: bool,
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    #[arg(short, long)]
    pub key: PathBuf,
    #[arg(short, long = "in")]
    pub input: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Seed of the η acceptance draws. Decryption does not need it.
    #[arg(long, default_value_t = 0)]
    pub aux_seed: u64,
    /// `text` or `bin`.
    #[arg(long, default_value = "text", value_parser = parse_format)]
    pub format: CiphertextFormat,
    /// Omit the header line.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    #[arg(short, long)]
    pub key: PathBuf,
    #[arg(short, long = "in")]
    pub input: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Take μ, x0, k, precision and order from a key file.
    #[arg(long, conflicts_with_all = ["mu", "x0", "k", "precision", "order"])]
    pub key: Option<PathBuf>,
    #[arg(long, default_value = "4")]
    pub mu: String,
    /// Starting point; drawn from the master seed when omitted.
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value = "decimal:128")]
    pub precision: Precision,
    #[arg(long, default_value = "scaled_first")]
    pub order: EvalOrder,
    /// Words to write (2800000 gives the 11.2 MB battery file).
    #[arg(long)]
    pub words: u64,
    /// Steps discarded before the first word.
    #[arg(long, default_value_t = 1000)]
    pub transient: u64,
    /// `little` or `big`.
    #[arg(long, default_value = "little")]
    pub byte_order: ByteOrder,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Directory for output files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct Check {
    /// Exit 5 when the run fails its check.
    #[arg(long)]
    pub assert: bool,
}

#[derive(Debug, Args)]
pub struct Scale {
    /// Full-size run: 100 seeds or plaintexts, 10000 letters, 2800000 words.
    #[arg(long)]
    pub paper_scale: bool,
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Value histograms over many starting points.
    Hist(HistArgs),
    /// Bifurcation density over a μ range (CSV and PGM).
    Bif(BifArgs),
    /// Consecutive pairs or triples of one orbit.
    Retmap(RetmapArgs),
    /// Ciphertext lengths under several trajectory sources.
    Cipherdist(CipherdistArgs),
    /// Mean return time to one site against Kac's prediction.
    Kac(KacArgs),
    /// Frequency, runs and block-frequency tests on word streams.
    Battery(BatteryArgs),
}

#[derive(Debug, Args)]
pub struct HistArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub check: Check,
    #[command(flatten)]
    pub scale: Scale,
    #[arg(long, default_value = "4")]
    pub mu: String,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value = "decimal:128")]
    pub precision: Precision,
    /// Starting points (default 10, or 100 with --paper-scale).
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 500)]
    pub bins: u32,
    #[arg(long, default_value_t = 1000)]
    pub transient: u64,
}

#[derive(Debug, Args)]
pub struct BifArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 3.6)]
    pub mu_lo: f64,
    #[arg(long, default_value_t = 4.0)]
    pub mu_hi: f64,
    /// μ columns.
    #[arg(long, default_value_t = 400)]
    pub steps: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Steps per μ, transient included.
    #[arg(long, default_value_t = 100_000)]
    pub iters: u64,
    #[arg(long, default_value_t = 200)]
    pub transient: u64,
    #[arg(long, default_value_t = 400)]
    pub x_bins: u32,
    #[arg(long, default_value = "0.232323")]
    pub x0: String,
    #[arg(long, default_value = "binary64")]
    pub precision: Precision,
}

#[derive(Debug, Args)]
pub struct RetmapArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub check: Check,
    #[arg(long, default_value = "4")]
    pub mu: String,
    /// Starting point; drawn from the master seed when omitted.
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub transient: u64,
    /// 2 for pairs, 3 for triples.
    #[arg(long, default_value_t = 2)]
    pub dims: u8,
    #[arg(long, default_value = "binary64")]
    pub precision: Precision,
}

#[derive(Debug, Args)]
pub struct CipherdistArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub check: Check,
    #[command(flatten)]
    pub scale: Scale,
    /// Key whose fields all runs share; a generated key when omitted.
    #[arg(long)]
    pub key: Option<PathBuf>,
    /// Precision of the generated key.
    #[arg(long, conflicts_with = "key", default_value = "decimal:128")]
    pub precision: Precision,
    /// Zoom depths to compare.
    #[arg(long, value_delimiter = ',', default_value = "0,4")]
    pub k: Vec<u32>,
    /// Add an MT19937 arm.
    #[arg(long)]
    pub baseline: bool,
    /// Add an arm fed from a file of random bytes (repeatable).
    #[arg(long)]
    pub external: Vec<PathBuf>,
    /// Plaintexts per arm (default 10, or 100 with --paper-scale).
    #[arg(long)]
    pub plaintexts: Option<u64>,
    /// Letters per plaintext (default 1000, or 10000 with --paper-scale).
    #[arg(long)]
    pub letters: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub bins: u32,
}

#[derive(Debug, Args)]
pub struct KacArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub check: Check,
    #[arg(long, default_value = "4")]
    pub mu: String,
    #[arg(long, default_value = "0.232323")]
    pub x0: String,
    /// 0 (arcsine prediction) or at least 3 (uniform prediction).
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 104)]
    pub site: u32,
    #[arg(long, default_value_t = 256)]
    pub sites: u32,
    #[arg(long, default_value = "0.2")]
    pub x_min: String,
    #[arg(long, default_value = "0.8")]
    pub x_max: String,
    #[arg(long, default_value_t = 2000)]
    pub min_returns: u64,
    #[arg(long, default_value_t = 1000)]
    pub transient: u64,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_steps: u64,
    #[arg(long, default_value = "decimal:128")]
    pub precision: Precision,
}

#[derive(Debug, Args)]
pub struct BatteryArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub check: Check,
    #[command(flatten)]
    pub scale: Scale,
    #[arg(long, default_value = "4")]
    pub mu: String,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value = "decimal:128")]
    pub precision: Precision,
    /// Streams (default 10, or 100 with --paper-scale).
    #[arg(long)]
    pub seeds: Option<u64>,
    /// Words per stream (default 31250, or 2800000 with --paper-scale).
    #[arg(long)]
    pub words: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub transient: u64,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 128)]
    pub block_len: usize,
}

fn parse_format(s: &str) -> Result<CiphertextFormat, String> {
    match s {
        "text" => Ok(CiphertextFormat::Text),
        "bin" | "binary" => Ok(CiphertextFormat::Binary),
        other => Err(format!("unknown format `{other}` (text or bin)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn desk_sizes_are_optional() {
        let cli = Cli::try_parse_from(["kzoom", "analyze", "battery", "--k", "5"]).unwrap();
        match cli.command {
            Command::Analyze(Analyze::Battery(b)) => {
                assert_eq!(b.k, 5);
                assert_eq!(b.seeds, None);
                assert!(!b.scale.paper_scale);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn assert_only_where_there_is_a_check() {
        assert!(Cli::try_parse_from(["kzoom", "analyze", "kac", "--assert"]).is_ok());
        assert!(Cli::try_parse_from(["kzoom", "analyze", "bif", "--assert"]).is_err());
        assert!(Cli::try_parse_from(["kzoom", "analyze", "kac", "--paper-scale"]).is_err());
    }

    #[test]
    fn gen_key_excludes_orbit_flags() {
        let r = Cli::try_parse_from(["kzoom", "gen", "--key", "k", "--k", "2", "--words", "1", "-o", "x"]);
        assert!(r.is_err());
    }
}

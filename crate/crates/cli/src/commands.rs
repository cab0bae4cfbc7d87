use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use kzoom::cipher::{self, CipherKey, Ciphertext, KeyFields, KeyOverrides};
use kzoom::prng::{generate_stream, StreamConfig};
use kzoom::seed::{sub_rng, unit_literal};
use kzoom::OrbitParams;
use sha2::{Digest, Sha256};

use crate::args::{DecryptArgs, EncryptArgs, GenArgs, KeygenArgs};
use crate::error::CliError;

/// `sha256:` followed by the digest of the canonical key text.
pub fn fingerprint(key: &CipherKey) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(key.to_text())))
}

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn load_key(path: &Path) -> Result<CipherKey, CliError> {
    let text = String::from_utf8(read(path)?)
        .map_err(|_| CliError::Config(format!("{}: key file is not UTF-8", path.display())))?;
    CipherKey::parse(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Refuses to write over an input.
fn check_distinct(input: &Path, out: &Path) -> Result<(), CliError> {
    if let (Ok(a), Ok(b)) = (fs::canonicalize(input), fs::canonicalize(out)) {
        if a == b {
            return Err(CliError::Config(format!(
                "{} is both input and output",
                out.display()
            )));
        }
    }
    Ok(())
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn keygen(seed: u64, a: KeygenArgs) -> Result<(), CliError> {
    let overrides = KeyOverrides {
        mu: a.mu,
        x0: a.x0,
        k: a.k,
        sites: a.sites,
        x_min: a.x_min,
        x_max: a.x_max,
        n0: a.n0,
        n_max: a.n_max,
        eta: a.eta,
        precision: a.precision,
        association: a
            .cyclic
            .then(|| KeyFields::cyclic_association(a.sites.unwrap_or(256))),
        chain: a.chain,
        order: a.order,
    };
    let key = cipher::keygen(seed, &overrides)?;
    write(&a.out, key.to_text().as_bytes())?;
    println!("{}", fingerprint(&key));
    Ok(())
}

pub fn encrypt(a: EncryptArgs) -> Result<(), CliError> {
    check_distinct(&a.input, &a.out)?;
    check_distinct(&a.key, &a.out)?;
    let key = load_key(&a.key)?;
    let plaintext = read(&a.input)?;
    let ct = cipher::encrypt(&plaintext, &key, a.aux_seed)?;
    let bytes = if a.raw {
        ct.body(a.format)
    } else {
        ct.to_bytes(a.format)
    };
    write(&a.out, &bytes)?;
    println!("{} units, {} iterations", ct.len(), ct.total_iterations());
    Ok(())
}

pub fn decrypt(a: DecryptArgs) -> Result<(), CliError> {
    check_distinct(&a.input, &a.out)?;
    check_distinct(&a.key, &a.out)?;
    let key = load_key(&a.key)?;
    let (ct, _) = Ciphertext::from_bytes(&read(&a.input)?)?;
    let plaintext = cipher::decrypt(&ct, &key)?;
    write(&a.out, &plaintext)?;
    println!("{} units", plaintext.len());
    Ok(())
}

pub fn gen(seed: u64, a: GenArgs) -> Result<(), CliError> {
    let params = match &a.key {
        Some(path) => load_key(path)?.params().clone(),
        None => {
            let x0 = a
                .x0
                .clone()
                .unwrap_or_else(|| unit_literal(&mut sub_rng(seed, 0), 20));
            OrbitParams::new(&a.mu, &x0, a.k, a.precision)?.with_order(a.order)
        }
    };
    let config = StreamConfig {
        transient: a.transient,
        byte_order: a.byte_order,
        ..StreamConfig::new(params, a.words)
    };
    if a.words == 0 {
        return Err(CliError::Config("--words must be at least 1".into()));
    }
    let file = File::create(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let mut sink = BufWriter::new(file);
    let result = generate_stream(&config, &mut sink).and_then(|n| {
        sink.flush().map(|_| n).map_err(|source| kzoom::prng::StreamError::Sink {
            bytes_written: n,
            source,
        })
    });
    match result {
        Ok(bytes) => {
            println!("{} words ({bytes} bytes)", a.words);
            Ok(())
        }
        Err(e) => {
            drop(sink);
            let _ = fs::remove_file(&a.out);
            Err(e.into())
        }
    }
}

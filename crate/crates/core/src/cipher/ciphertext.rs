use std::fmt;

use super::CipherError;

const MAGIC: &str = "kzoom-ct v1";

/// The step counts `C_n`, one per plaintext unit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ciphertext {
    counts: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CiphertextFormat {
    /// One decimal count per line.
    #[default]
    Text,
    /// Four-byte little-endian words.
    Binary,
}

impl fmt::Display for CiphertextFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CiphertextFormat::Text => "text",
            CiphertextFormat::Binary => "bin",
        })
    }
}

impl Ciphertext {
    pub fn new(counts: Vec<u32>) -> Self {
        Ciphertext { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sum of all counts: the trajectory length the message consumed.
    pub fn total_iterations(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// The file form: a `kzoom-ct v1 text|bin` header line, then the body.
    pub fn to_bytes(&self, format: CiphertextFormat) -> Vec<u8> {
        let mut out = format!("{MAGIC} {format}\n").into_bytes();
        out.extend(self.body(format));
        out
    }

    /// The body alone: `1713\n364\n` in text form.
    pub fn body(&self, format: CiphertextFormat) -> Vec<u8> {
        match format {
            CiphertextFormat::Text => self
                .counts
                .iter()
                .map(|c| format!("{c}\n"))
                .collect::<String>()
                .into_bytes(),
            CiphertextFormat::Binary => self.counts.iter().flat_map(|c| c.to_le_bytes()).collect(),
        }
    }

    /// Reads either file form. Input without a header is read as text.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Self, CiphertextFormat), CipherError> {
        let (format, body) = match bytes.strip_prefix(MAGIC.as_bytes()) {
            Some(rest) => {
                let end = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
                let variant = std::str::from_utf8(&rest[..end])
                    .map_err(|_| CipherError::Format("header is not UTF-8".into()))?
                    .trim();
                let format = match variant {
                    "text" => CiphertextFormat::Text,
                    "bin" => CiphertextFormat::Binary,
                    other => {
                        return Err(CipherError::Format(format!("unknown variant `{other}`")))
                    }
                };
                (format, &rest[(end + 1).min(rest.len())..])
            }
            None => (CiphertextFormat::Text, bytes),
        };
        let counts = match format {
            CiphertextFormat::Text => parse_text(body)?,
            CiphertextFormat::Binary => {
                if body.len() % 4 != 0 {
                    return Err(CipherError::Format(format!(
                        "binary body of {} bytes is not a whole number of words",
                        body.len()
                    )));
                }
                body.chunks_exact(4)
                    .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
                    .collect()
            }
        };
        Ok((Ciphertext { counts }, format))
    }
}

fn parse_text(body: &[u8]) -> Result<Vec<u32>, CipherError> {
    let text = std::str::from_utf8(body)
        .map_err(|_| CipherError::Format("text ciphertext is not UTF-8".into()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse().map_err(|_| {
                CipherError::Format(format!("line {}: `{}` is not a count", i + 1, l.trim()))
            })
        })
        .collect()
}

impl From<Vec<u32>> for Ciphertext {
    fn from(counts: Vec<u32>) -> Self {
        Ciphertext::new(counts)
    }
}

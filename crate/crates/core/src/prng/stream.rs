use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::chaos::{ChaosError, Orbit, OrbitParams, RealValue};

/// `⌊y·2³²⌋` for `y` in `[0, 1)`. Order-preserving and exact under both
/// backends.
pub fn extract_word32(y: &RealValue) -> u32 {
    y.floor_times_2_32()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ByteOrder {
    #[default]
    Little,
    Big,
}

impl ByteOrder {
    pub fn encode(self, word: u32) -> [u8; 4] {
        match self {
            ByteOrder::Little => word.to_le_bytes(),
            ByteOrder::Big => word.to_be_bytes(),
        }
    }
}

impl fmt::Display for ByteOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ByteOrder::Little => "little",
            ByteOrder::Big => "big",
        })
    }
}

impl FromStr for ByteOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "little" | "le" => Ok(ByteOrder::Little),
            "big" | "be" => Ok(ByteOrder::Big),
            other => Err(format!("unknown byte order `{other}`")),
        }
    }
}

/// Parameters of one raw word stream.
#[derive(Debug, Clone)]
pub struct StreamConfig {
    pub params: OrbitParams,
    pub transient: u64,
    pub word_count: u64,
    pub byte_order: ByteOrder,
}

impl StreamConfig {
    pub const DEFAULT_TRANSIENT: u64 = 1000;
    /// Words per file in the DIEHARD input protocol (11.2 MB).
    pub const DIEHARD_WORDS: u64 = 2_800_000;

    pub fn new(params: OrbitParams, word_count: u64) -> Self {
        StreamConfig {
            params,
            transient: Self::DEFAULT_TRANSIENT,
            word_count,
            byte_order: ByteOrder::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("word count must be at least 1")]
    EmptyStream,
    #[error("orbit failed during the transient: {0}")]
    Transient(#[source] ChaosError),
    /// The orbit broke mid-stream; everything already written is invalid.
    #[error("orbit failed at word {word_index} ({bytes_written} bytes already written are invalid): {source}")]
    Orbit {
        word_index: u64,
        bytes_written: u64,
        #[source]
        source: ChaosError,
    },
    #[error("write failed after {bytes_written} bytes: {source}")]
    Sink {
        bytes_written: u64,
        #[source]
        source: io::Error,
    },
}

/// Successive 32-bit words from a zoomed orbit.
#[derive(Debug, Clone)]
pub struct Words {
    orbit: Orbit,
    index: u64,
    failed: bool,
}

impl Words {
    pub fn new(params: &OrbitParams, transient: u64) -> Result<Self, StreamError> {
        let mut orbit = Orbit::new(params);
        orbit.discard(transient).map_err(StreamError::Transient)?;
        Ok(Words {
            orbit,
            index: 0,
            failed: false,
        })
    }
}

impl Iterator for Words {
    /// On error, the index of the word that could not be produced.
    type Item = Result<u32, (u64, ChaosError)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let index = self.index;
        self.index += 1;
        match self.orbit.next_zoomed() {
            Ok(y) => Some(Ok(extract_word32(&y))),
            Err(e) => {
                self.failed = true;
                Some(Err((index, e)))
            }
        }
    }
}

/// Collects `count` words, failing on the first orbit error.
pub fn collect_words(
    params: &OrbitParams,
    transient: u64,
    count: usize,
) -> Result<Vec<u32>, StreamError> {
    let mut out = Vec::with_capacity(count);
    for w in Words::new(params, transient)?.take(count) {
        match w {
            Ok(w) => out.push(w),
            Err((word_index, source)) => {
                return Err(StreamError::Orbit {
                    word_index,
                    bytes_written: 0,
                    source,
                })
            }
        }
    }
    Ok(out)
}

/// Writes `word_count` raw words (no header) to `sink`.
///
/// Returns the number of bytes written, always `4 · word_count` on success.
pub fn generate_stream<W: Write>(config: &StreamConfig, mut sink: W) -> Result<u64, StreamError> {
    if config.word_count == 0 {
        return Err(StreamError::EmptyStream);
    }
    const CHUNK: usize = 16 * 1024;
    let mut buf = Vec::with_capacity(CHUNK);
    let mut written = 0u64;
    let words = Words::new(&config.params, config.transient)?;
    for w in words.take(config.word_count as usize) {
        match w {
            Ok(word) => buf.extend_from_slice(&config.byte_order.encode(word)),
            Err((word_index, source)) => {
                let flushed = sink.write_all(&buf).and_then(|_| sink.flush());
                let bytes_written = written + if flushed.is_ok() { buf.len() as u64 } else { 0 };
                return Err(StreamError::Orbit {
                    word_index,
                    bytes_written,
                    source,
                });
            }
        }
        if buf.len() >= CHUNK {
            sink.write_all(&buf).map_err(|source| StreamError::Sink {
                bytes_written: written,
                source,
            })?;
            written += buf.len() as u64;
            buf.clear();
        }
    }
    sink.write_all(&buf)
        .and_then(|_| sink.flush())
        .map_err(|source| StreamError::Sink {
            bytes_written: written,
            source,
        })?;
    written += buf.len() as u64;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::Precision;
    use proptest::prelude::*;

    #[test]
    fn word_examples() {
        let p = Precision::Decimal(64);
        assert_eq!(extract_word32(&RealValue::zero(p)), 0);
        assert_eq!(extract_word32(&RealValue::parse("0.5", p).unwrap()), 2_147_483_648);
        // Oracle: floor(44160905447136 * 2^32 / 10^14) in exact integers.
        let oracle = (44_160_905_447_136u128 << 32) / 100_000_000_000_000u128;
        assert_eq!(oracle, 1_896_696_446);
        let y = RealValue::parse("0.44160905447136", p).unwrap();
        assert_eq!(extract_word32(&y) as u128, oracle);
        let y = RealValue::parse("0.44160905447136", Precision::Binary64).unwrap();
        assert_eq!(extract_word32(&y) as u128, oracle);
    }

    fn params(k: u32) -> OrbitParams {
        OrbitParams::new("3.99999", "0.232323", k, Precision::Decimal(64)).unwrap()
    }

    #[test]
    fn single_word_stream() {
        let mut cfg = StreamConfig::new(params(3), 1);
        cfg.transient = 10;
        let mut out = Vec::new();
        assert_eq!(generate_stream(&cfg, &mut out).unwrap(), 4);
        let mut orbit = Orbit::new(&cfg.params);
        orbit.discard(10).unwrap();
        let y = orbit.next_zoomed().unwrap();
        assert_eq!(out, extract_word32(&y).to_le_bytes());
    }

    #[test]
    fn streams_are_deterministic_and_ordered() {
        let mut cfg = StreamConfig::new(params(4), 500);
        let mut a = Vec::new();
        let mut b = Vec::new();
        generate_stream(&cfg, &mut a).unwrap();
        generate_stream(&cfg, &mut b).unwrap();
        assert_eq!(a.len(), 2000);
        assert_eq!(a, b);
        cfg.byte_order = ByteOrder::Big;
        let mut c = Vec::new();
        generate_stream(&cfg, &mut c).unwrap();
        for (le, be) in a.chunks(4).zip(c.chunks(4)) {
            let l = u32::from_le_bytes(le.try_into().unwrap());
            let r = u32::from_be_bytes(be.try_into().unwrap());
            assert_eq!(l, r);
        }
    }

    #[test]
    fn zero_words_rejected() {
        let cfg = StreamConfig::new(params(1), 0);
        assert!(matches!(generate_stream(&cfg, Vec::new()), Err(StreamError::EmptyStream)));
    }

    #[test]
    fn degenerate_stream_reports_word_index() {
        // mu = 4 from 0.5 collapses on the first transient step.
        let p = OrbitParams::new("4", "0.5", 0, Precision::Binary64).unwrap();
        let cfg = StreamConfig::new(p.clone(), 4);
        assert!(matches!(generate_stream(&cfg, Vec::new()), Err(StreamError::Transient(_))));
        let mut cfg = StreamConfig::new(p, 4);
        cfg.transient = 0;
        assert!(matches!(
            generate_stream(&cfg, Vec::new()),
            Err(StreamError::Orbit { word_index: 0, .. })
        ));
    }

    struct FailingSink;
    impl Write for FailingSink {
        fn write(&mut self, _: &[u8]) -> io::Result<usize> {
            Err(io::Error::other("disk full"))
        }
        fn flush(&mut self) -> io::Result<()> {
            Ok(())
        }
    }

    #[test]
    fn sink_errors_surface() {
        let cfg = StreamConfig::new(params(2), 3);
        assert!(matches!(generate_stream(&cfg, FailingSink), Err(StreamError::Sink { .. })));
    }

    proptest! {
        #[test]
        fn extraction_is_monotone(a in 0u64..u64::MAX, b in 0u64..u64::MAX) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p = Precision::Decimal(40);
            let to_real = |v: u64| RealValue::parse(&format!("0.{:020}", v as u128 * 100 / 185), p).unwrap();
            prop_assert!(extract_word32(&to_real(lo)) <= extract_word32(&to_real(hi)));
        }

        #[test]
        fn grid_points_are_exact(j in any::<u32>()) {
            let y = RealValue::from_word32(j, Precision::Decimal(32));
            prop_assert_eq!(extract_word32(&y), j);
        }
    }
}

//! 32-bit word streams from zoomed orbits, and a small bit-level test
//! battery.

pub mod battery;
mod stream;

pub use battery::{
    bits_from_words, block_frequency_test, monobit_test, run_battery, runs_test, BatteryError,
    BatteryReport,
};
pub use stream::{
    collect_words, extract_word32, generate_stream, ByteOrder, StreamConfig, StreamError, Words,
};

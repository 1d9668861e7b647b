//! Line-delimited per-round trace records.
//!
//! One JSON object per line:
//!
//! ```text
//! {"round":3,"unsatisfied":2,"satisfied":"fb"}
//! ```
//!
//! `satisfied` is the signal vector as a bitset in lowercase hex, two digits
//! per byte, byte `k` holding variables `8k..8k+8` with variable `8k` in the
//! least significant bit.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{Engine, RoundSummary};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub round: u64,
    pub unsatisfied: usize,
    pub satisfied: String,
}

impl TraceRecord {
    pub fn from_round(summary: &RoundSummary, engine: &Engine<'_>) -> Self {
        let n = engine.instance().num_variables();
        TraceRecord {
            round: summary.round,
            unsatisfied: summary.unsatisfied_variables,
            satisfied: encode_bitset((0..n).map(|i| engine.signal_bit(i))),
        }
    }

    /// Decode the bitset into `n` signal bits.
    pub fn satisfied_bits(&self, n: usize) -> Option<Vec<bool>> {
        decode_bitset(&self.satisfied, n)
    }
}

pub fn encode_bitset(bits: impl IntoIterator<Item = bool>) -> String {
    let mut bytes: Vec<u8> = Vec::new();
    for (i, b) in bits.into_iter().enumerate() {
        if i % 8 == 0 {
            bytes.push(0);
        }
        if b {
            *bytes.last_mut().unwrap() |= 1 << (i % 8);
        }
    }
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn decode_bitset(hex: &str, n: usize) -> Option<Vec<bool>> {
    if hex.len() != n.div_ceil(8) * 2 {
        return None;
    }
    let bytes = (0..hex.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).ok())
        .collect::<Option<Vec<u8>>>()?;
    Some((0..n).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect())
}

/// Writes one [`TraceRecord`] per line.
pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter { out }
    }

    pub fn write(&mut self, record: &TraceRecord) -> Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

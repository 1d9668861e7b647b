use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::cfl::Outcome;
use crate::Result;

/// Column order of the CSV interchange format.
pub const CSV_HEADER: [&str; 13] = [
    "family",
    "n",
    "m",
    "k",
    "D",
    "solver",
    "a",
    "b",
    "seed",
    "outcome",
    "tau",
    "normalized_tau",
    "wall_ms",
];

/// One solver run on one instance.
///
/// `tau` is the CFL stopping time or the baseline flip count. For a capped
/// run it is the number of rounds or flips spent, and the run is censored.
/// `k` is 0 for families without a clause width. `a` and `b` are empty for
/// solvers without learning rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub solver: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub seed: u64,
    pub outcome: Outcome,
    pub tau: u64,
    pub normalized_tau: f64,
    pub wall_ms: Option<f64>,
}

impl TrialRecord {
    pub fn is_solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }
}

/// Streams records as CSV with a header row.
pub struct CsvSink<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(out: W) -> Self {
        CsvSink {
            inner: csv::WriterBuilder::new().has_headers(true).from_writer(out),
        }
    }

    /// Append to an existing file whose header was already written.
    pub fn appending(out: W) -> Self {
        CsvSink {
            inner: csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out),
        }
    }

    pub fn write(&mut self, record: &TrialRecord) -> Result<()> {
        self.inner.serialize(record)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

pub fn write_csv<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut sink = CsvSink::new(out);
    for r in records {
        sink.write(r)?;
    }
    sink.flush()
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(outcome: Outcome, wall: Option<f64>) -> TrialRecord {
        TrialRecord {
            family: "ksat".into(),
            n: 20,
            m: 60,
            k: 3,
            d: 2,
            solver: "cfl".into(),
            a: Some(0.2),
            b: Some(0.2),
            seed: 42,
            outcome,
            tau: 17,
            normalized_tau: 0.85,
            wall_ms: wall,
        }
    }

    #[test]
    fn header_and_round_trip() {
        let rs = vec![
            rec(Outcome::Solved, None),
            rec(Outcome::CapExceeded, Some(1.5)),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "ksat,20,60,3,2,cfl,0.2,0.2,42,solved,17,0.85,"
        );
        assert!(text.lines().nth(2).unwrap().contains("cap-exceeded"));
        assert_eq!(read_csv(&buf[..]).unwrap(), rs);
    }
}

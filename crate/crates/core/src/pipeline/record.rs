use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::LinkMode;
use crate::channel::RNG_ALGORITHM;
use crate::error::Result;

/// One BER point; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub ebn0_db: Option<f64>,
    pub p_channel: Option<f64>,
    pub mode: LinkMode,
    pub frames: u64,
    pub payload_bits: u64,
    pub pre_fec_ber: f64,
    pub post_fec_ber: f64,
    pub fer: f64,
    pub corrected_blocks: u64,
    pub uncorrectable_blocks: u64,
    pub seed: u64,
}

/// Writes a `#` comment preamble (tool version, RNG) followed by the header
/// row and one row per record.
pub fn write_csv<W: Write>(mut out: W, records: &[BerRecord]) -> Result<()> {
    writeln!(out, "# daqlink {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# rng: {RNG_ALGORITHM}")?;
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    if records.is_empty() {
        w.write_record([
            "ebn0_db",
            "p_channel",
            "mode",
            "frames",
            "payload_bits",
            "pre_fec_ber",
            "post_fec_ber",
            "fer",
            "corrected_blocks",
            "uncorrectable_blocks",
            "seed",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BerRecord>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

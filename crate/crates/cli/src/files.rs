//! `encode` and `decode`: raw bytes ↔ hex frame dumps and raw captures.

use std::io::Write;
use std::path::Path;

use daqlink::bits;
use daqlink::frame::{Frame120, FrameCodec, FrameMode};
use daqlink::pipeline::{build_frame, parse_frame, Receiver};

use crate::error::{io_err, CliError, CliResult};
use crate::packing::{to_payloads, Collector};

pub const LENGTH_TRAILER: &str = "# length ";

pub fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| io_err(path.display(), e))
}

/// Writes to `path`, or stdout when absent.
pub fn write_output(path: Option<&Path>, data: &[u8]) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, data).map_err(|e| io_err(p.display(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data).and_then(|_| out.flush()).map_err(|e| io_err("stdout", e))
        }
    }
}

pub fn encode_hex(codec: &FrameCodec, data: &[u8], mode: FrameMode) -> String {
    let mut s = String::new();
    for p in to_payloads(data, mode) {
        s.push_str(&build_frame(codec, &p).to_hex());
        s.push('\n');
    }
    s.push_str(&format!("{LENGTH_TRAILER}{}\n", data.len()));
    s
}

/// Serialized frame bits, packed MSB-first into bytes.
pub fn encode_raw(codec: &FrameCodec, data: &[u8], mode: FrameMode) -> CliResult<Vec<u8>> {
    let stream = daqlink::pipeline::tx_chain(codec, &to_payloads(data, mode), mode)?;
    Ok(bits::pack_bytes(&stream))
}

/// Parses a hex dump. Each line's mode comes from its header, falling back
/// to `mode` when the header matches neither constant.
pub fn decode_hex(codec: &FrameCodec, text: &str, mode: FrameMode) -> CliResult<Collector> {
    let mut c = Collector::default();
    let mut length = None;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(LENGTH_TRAILER) {
            let v = rest
                .trim()
                .parse::<usize>()
                .map_err(|e| CliError::Protocol(format!("line {}: bad length trailer: {e}", n + 1)))?;
            length = Some(v);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let f = Frame120::from_hex(line, mode).map_err(|e| CliError::Protocol(format!("line {}: {e}", n + 1)))?;
        let f = Frame120 { mode: FrameMode::from_header(f.header()).unwrap_or(mode), ..f };
        let (p, status) = parse_frame(codec, &f);
        c.push(&p, &status);
    }
    if let Some(len) = length {
        if len > c.bytes.len() {
            return Err(CliError::Protocol(format!(
                "length trailer says {len} bytes but the frames carry {}",
                c.bytes.len()
            )));
        }
        c.bytes.truncate(len);
    }
    Ok(c)
}

/// Runs a raw capture through the frame aligner.
pub fn decode_raw(codec: &FrameCodec, capture: &[u8]) -> (Collector, daqlink::pipeline::LinkMetrics) {
    let mut rx = Receiver::new(codec);
    let mut c = Collector::default();
    for r in rx.push(&bits::unpack_bytes(capture)) {
        c.push(&r.payload, &r.status);
    }
    (c, rx.metrics())
}

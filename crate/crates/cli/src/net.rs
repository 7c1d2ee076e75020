//! `send` / `recv`: the link emulated as a TCP byte stream.
//!
//! The sender serializes frames MSB-first into bytes, optionally preceded by
//! pad bits and corrupted by a channel model. The socket itself is lossless,
//! so the receiver's aligner is the only synchronization in play.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};

use daqlink::bits;
use daqlink::channel::{rng_from_seed, ChannelModel};
use daqlink::frame::{FrameCodec, FrameMode};
use daqlink::link::CONFIRM_HEADERS;
use daqlink::pipeline::{tx_chain_into, LinkMetrics, Receiver};

use crate::error::{io_err, CliError, CliResult};
use crate::packing::{idle, to_payloads, Collector};

pub struct SendPlan {
    pub mode: FrameMode,
    pub bit_offset: usize,
    pub preamble: usize,
    pub impairment: Option<(ChannelModel, u64)>,
}

impl Default for SendPlan {
    fn default() -> Self {
        SendPlan { mode: FrameMode::Standard, bit_offset: 0, preamble: CONFIRM_HEADERS, impairment: None }
    }
}

/// Bytes on the wire for `data`.
pub fn wire_bytes(codec: &FrameCodec, data: &[u8], plan: &SendPlan) -> CliResult<(Vec<u8>, u64)> {
    let mut stream = vec![false; plan.bit_offset];
    let fill: Vec<_> = (0..plan.preamble).map(|_| idle(plan.mode)).collect();
    tx_chain_into(codec, &fill, plan.mode, &mut stream)?;
    tx_chain_into(codec, &to_payloads(data, plan.mode), plan.mode, &mut stream)?;
    let mut flips = 0;
    if let Some((model, seed)) = &plan.impairment {
        model.validate()?;
        flips = model.apply(&mut stream, &mut rng_from_seed(*seed));
    }
    Ok((bits::pack_bytes(&stream), flips))
}

pub fn send(addr: &str, wire: &[u8]) -> CliResult {
    let mut s = TcpStream::connect(addr).map_err(|e| io_err(format!("connect {addr}"), e))?;
    s.write_all(wire).and_then(|_| s.flush()).map_err(|e| io_err(format!("send to {addr}"), e))?;
    Ok(())
}

pub struct RecvOutcome {
    pub collector: Collector,
    pub metrics: LinkMetrics,
    pub bytes_read: u64,
    /// Set when the connection failed rather than closing cleanly.
    pub error: Option<std::io::Error>,
}

/// Reads until the peer closes, feeding the receiver live.
pub fn receive<R: Read>(codec: &FrameCodec, mut input: R) -> RecvOutcome {
    let mut rx = Receiver::new(codec);
    let mut collector = Collector::default();
    let mut buf = vec![0u8; 1 << 16];
    let mut bytes_read = 0u64;
    let error = loop {
        match input.read(&mut buf) {
            Ok(0) => break None,
            Ok(n) => {
                bytes_read += n as u64;
                for r in rx.push(&bits::unpack_bytes(&buf[..n])) {
                    collector.push(&r.payload, &r.status);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
            Err(e) => break Some(e),
        }
    };
    RecvOutcome { collector, metrics: rx.metrics(), bytes_read, error }
}

pub fn listen(addr: &str) -> CliResult<TcpListener> {
    TcpListener::bind(addr).map_err(|e| io_err(format!("bind {addr}"), e))
}

pub fn accept(listener: &TcpListener) -> CliResult<TcpStream> {
    listener.accept().map(|(s, _)| s).map_err(|e| io_err("accept", e))
}

pub fn report(o: &RecvOutcome) -> String {
    let mut s = format!("bytes_read: {}\n", o.bytes_read);
    s.push_str(&o.metrics.to_string());
    s.push_str(&o.collector.summary());
    s
}

/// Exit status for a finished receive.
pub fn verdict(o: &RecvOutcome) -> CliResult {
    if let Some(e) = &o.error {
        return Err(CliError::Io(format!("connection failed after {} bytes: {e}", o.bytes_read)));
    }
    if o.bytes_read > 0 && o.metrics.lock_latency_bits.is_none() {
        return Err(CliError::Protocol("stream ended without frame lock".into()));
    }
    Ok(())
}
